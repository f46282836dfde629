"""Backend selection for the pairwise kernels.

The compiled extension is used when it imports; setting the environment
variable ``ASAKIT_KERNELS=python`` forces the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
enclosing_radii = _pykernels.enclosing_radii
rolling_radii = _pykernels.rolling_radii
vertex_hit_counts = _pykernels.vertex_hit_counts

if os.environ.get("ASAKIT_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels
    except ImportError:  # pragma: no cover - depends on build
        _ckernels = None
    else:
        BACKEND = "cython"
        enclosing_radii = _ckernels.enclosing_radii
        rolling_radii = _ckernels.rolling_radii
        vertex_hit_counts = _ckernels.vertex_hit_counts


def compiled_available():
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
