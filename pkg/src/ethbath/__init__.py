"""ethbath: a finite quantum heat bath satisfying eigenstate thermalization,
and the machinery to verify that it thermalizes a qubit.

Subpackages map onto the stages of the study: `fock` (basis and sparse
second-quantized operators), `singleparticle` (trap orbitals and
coefficients), `bath` (assembly and exact diagonalization), `eth`
(matrix-element diagnostics), `thermo` (microcanonical temperature),
`dynamics` (exact qubit+bath evolution), `mastereq` (Born-Markov flows),
`cli` (artifact pipeline). The compiled matvec kernel in `_kernels` is
optional; a scipy fallback loads when it is absent.
"""

from ._kernels import BACKEND as kernel_backend

__all__ = ["kernel_backend"]
__version__ = "0.1.0"
