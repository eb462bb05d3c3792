"""Backend selection for the elimination kernels.

Prefers the compiled extension, falls back to the pure-Python twin.  Set
VOALAB_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
backend-parity tests).
"""

import os

from . import _ffelim_py

if os.environ.get("VOALAB_PURE_PYTHON") == "1":
    _impl = _ffelim_py
    BACKEND = "python"
else:
    try:
        from . import _ffelim_cy as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _ffelim_py
        BACKEND = "python"

bareiss_det = _impl.bareiss_det
leading_principal_minors = _impl.leading_principal_minors
fraction_free_echelon = _impl.fraction_free_echelon


def available_backends():
    """Name -> module for every importable backend (for tests/benchmarks)."""
    out = {"python": _ffelim_py}
    try:
        from . import _ffelim_cy

        out["cython"] = _ffelim_cy
    except ImportError:
        pass
    return out
