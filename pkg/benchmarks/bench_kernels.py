"""Compiled vs numpy kernels on the sizes the coarea sweeps use.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from asakit import _pykernels
from asakit.convex_body import Ellipsoid, cube
from asakit.sphere import sphere_mesh

try:
    from asakit import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def cases():
    E = Ellipsoid(np.array([1.0, 2.0, 3.0]))
    U = sphere_mesh(3, 5).nodes
    cloud = E.support_gradient(U)
    X = E.support_gradient(U)
    h = E.support(U)
    dirs = np.random.default_rng(0).standard_normal((1_000_000, 3))
    return {
        "enclosing_radii 10242x10242": lambda k: k.enclosing_radii(X, U, cloud, 1e-9),
        "rolling_radii 10242x10242": lambda k: k.rolling_radii(X, U, U, h, 1e-9),
        "vertex_hit_counts 1e6x8": lambda k: k.vertex_hit_counts(dirs, cube(3).vertices),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = {"numpy": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    print(f"{'kernel':32s}" + "".join(f"{b:>12s}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    for name, fn in cases().items():
        ref = None
        times = []
        for kern in backends.values():
            out = fn(kern)
            if ref is None:
                ref = out
            elif not np.allclose(out, ref, rtol=1e-12):
                raise SystemExit(f"{name}: backends disagree")
            times.append(min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat)))
        line = f"{name:32s}" + "".join(f"{t:11.3f}s" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
