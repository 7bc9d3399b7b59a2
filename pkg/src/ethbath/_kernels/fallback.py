"""Pure-Python (numpy/scipy) implementations of the compiled kernels.

Selected at import time when the compiled extension is unavailable or when
ETHBATH_PURE_PYTHON is set. The per-call cost is higher than the compiled
path because the implicit conjugate transpose needs a second pass.
"""

import numpy as np


def hermitian_matvec_complex(rows, cols, vals, x, y):
    np.add.at(y, rows, vals * x[cols])
    off = rows != cols
    np.add.at(y, cols[off], np.conj(vals[off]) * x[rows[off]])


def hermitian_matvec_real(rows, cols, vals, x, y):
    np.add.at(y, rows, vals * x[cols])
    off = rows != cols
    np.add.at(y, cols[off], vals[off] * x[rows[off]])
