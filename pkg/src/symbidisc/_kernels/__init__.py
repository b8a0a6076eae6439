"""Kernel backend selection.

The compiled extension is preferred when importable; the NumPy reference
implementation is the fallback. Set ``GAMMA_INTERP_BACKEND=python`` to force
the fallback (used by the benchmark and the backend-agreement tests).
"""

import os

from . import _pyref

_FORCED = os.environ.get("GAMMA_INTERP_BACKEND", "").strip().lower()

if _FORCED in ("", "compiled"):
    try:
        from . import _core as _impl
    except ImportError:
        if _FORCED == "compiled":
            raise
        _impl = _pyref
elif _FORCED == "python":
    _impl = _pyref
else:
    raise RuntimeError(f"unknown GAMMA_INTERP_BACKEND={_FORCED!r}")

BACKEND = _impl.BACKEND

blaschke_values = _impl.blaschke_values
hermitian_eigvals = _impl.hermitian_eigvals
hermitian_min_eig = _impl.hermitian_min_eig
hermitian_min_pair = _impl.hermitian_min_pair
xnorm_eval = _impl.xnorm_eval
pencil_matrix_values = _impl.pencil_matrix_values
pencil_min_eig = _impl.pencil_min_eig

# reference module is always importable for cross-checks
reference = _pyref
