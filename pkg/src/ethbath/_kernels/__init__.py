"""Kernel backend selection.

The compiled Cython extension is preferred; a numpy/scipy fallback is used
when it is missing or when ETHBATH_PURE_PYTHON=1 is set. `BACKEND` records
which one is active so benchmarks and tests can assert on it.
"""

import os

if os.environ.get("ETHBATH_PURE_PYTHON"):
    from . import fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _hermcoo as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built
        from . import fallback as _impl

        BACKEND = "python"

hermitian_matvec_complex = _impl.hermitian_matvec_complex
hermitian_matvec_real = _impl.hermitian_matvec_real

__all__ = ["BACKEND", "hermitian_matvec_complex", "hermitian_matvec_real"]
