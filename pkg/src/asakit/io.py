"""Body-spec JSON parsing and deterministic report writers.

Body spec schema (UTF-8 JSON object; unknown fields are rejected)::

    {"dim": n, "kind": "ball", "center": [..n..], "radius": r}
    {"dim": n, "kind": "ellipsoid", "semi_axes": [..n..],
     "rotation": n x n (optional, default I), "center": [..n..] (optional)}
    {"dim": n, "kind": "polytope", "vertices": [[..n..], ...],
     "facets": [[vertex indices], ...] (optional; checked against the hull)}
    {"dim": n, "kind": "transform", "linear": n x n nested or flat row-major,
     "translation": [..n..] (optional), "base": {body spec}}

Every float in reports is written with 17 significant digits.
"""
import csv
import hashlib
import io as _io
import json
import math

import numpy as np

from .convex_body import Ball, Ellipsoid, Polytope, apply_linear
from .errors import AsaError, BodySpecError, InvalidBody

SCHEMA = "asa-kit/1"

_FIELDS = {
    "ball": ({"dim", "kind", "radius"}, {"center"}),
    "ellipsoid": ({"dim", "kind", "semi_axes"}, {"rotation", "center"}),
    "polytope": ({"dim", "kind", "vertices"}, {"facets"}),
    "transform": ({"dim", "kind", "linear", "base"}, {"translation"}),
}


def _vector(spec, key, n):
    try:
        v = np.array(spec[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise BodySpecError(f"field {key!r} must be a list of numbers") from exc
    if v.shape != (n,) or not np.all(np.isfinite(v)):
        raise BodySpecError(f"field {key!r} must be a finite vector of length {n}")
    return v


def _matrix(spec, key, n):
    try:
        A = np.array(spec[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise BodySpecError(f"field {key!r} must be a numeric matrix") from exc
    if A.shape == (n * n,):
        A = A.reshape(n, n)
    if A.shape != (n, n) or not np.all(np.isfinite(A)):
        raise BodySpecError(f"field {key!r} must be an {n}x{n} matrix (nested or flat row-major)")
    return A


def _positive(x, key):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x) or x <= 0:
        raise BodySpecError(f"field {key!r} must be a positive number")
    return float(x)


def body_from_spec(spec):
    """Build a :class:`ConvexBody` from a parsed body-spec object."""
    if not isinstance(spec, dict):
        raise BodySpecError("body spec must be a JSON object")
    kind = spec.get("kind")
    if kind not in _FIELDS:
        raise BodySpecError(f"unknown or missing kind {kind!r}; expected one of {sorted(_FIELDS)}")
    required, optional = _FIELDS[kind]
    keys = set(spec)
    if keys - required - optional:
        raise BodySpecError(f"unknown fields for {kind}: {sorted(keys - required - optional)}")
    if required - keys:
        raise BodySpecError(f"missing fields for {kind}: {sorted(required - keys)}")
    n = spec["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise BodySpecError("dim must be an integer >= 2")
    try:
        if kind == "ball":
            c = _vector(spec, "center", n) if "center" in spec else np.zeros(n)
            return Ball(c, _positive(spec["radius"], "radius"))
        if kind == "ellipsoid":
            axes = _vector(spec, "semi_axes", n)
            R = _matrix(spec, "rotation", n) if "rotation" in spec else None
            c = _vector(spec, "center", n) if "center" in spec else None
            return Ellipsoid(axes, R, c)
        if kind == "polytope":
            V = np.array(spec["vertices"], dtype=float)
            if V.ndim != 2 or V.shape[1] != n:
                raise BodySpecError(f"vertices must be rows of length {n}")
            facets = spec.get("facets")
            if facets is not None and not (isinstance(facets, list) and all(isinstance(f, list) for f in facets)):
                raise BodySpecError("facets must be a list of vertex-index lists")
            return Polytope(V, facets)
        base = body_from_spec(spec["base"])
        if base.dim != n:
            raise BodySpecError("base body has a different dimension")
        t = _vector(spec, "translation", n) if "translation" in spec else None
        return apply_linear(base, _matrix(spec, "linear", n), t)
    except BodySpecError:
        raise
    except (InvalidBody, AsaError, ValueError, TypeError) as exc:
        raise BodySpecError(str(exc)) from exc


def spec_hash(spec):
    """SHA-256 of the canonical JSON form of a body spec."""
    canon = json.dumps(spec, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def load_body(path):
    """Read a body spec file; returns ``(body, spec, hash)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise BodySpecError(f"cannot read body spec: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BodySpecError(f"body spec is not valid JSON: {exc}") from exc
    return body_from_spec(spec), spec, spec_hash(spec)


# ------------------------------------------------------------------ writers


def format_float(x):
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    # keep floats typed as floats when read back
    return text if any(c in text for c in ".en") else text + ".0"


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj, indent=2, _level=0):
    """JSON text with 17-significant-digit floats and fixed key order."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(_plain(v), (int, float, bool, str)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(v):
    v = _plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def table_text(header, rows, delimiter=","):
    """CSV (``","``) or TSV (``"\\t"``) text with 17-digit floats."""
    buf = _io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def measure_csv(measure):
    """CSV dump of a measure: kind (density|atom), location, normal, value, weight."""
    from .measures import measure_rows

    header, rows = measure_rows(measure)
    return table_text(header, rows, ",")
