"""Hit-problem bases, invariant subspaces, and lambda-algebra transfer over GF(2)."""

from cohit.gf2 import BitMatrix2, BitVector2, binom_mod2, echelonize, right_kernel_basis, solve_right

__version__ = "0.1.0"

__all__ = [
    "BitMatrix2",
    "BitVector2",
    "binom_mod2",
    "echelonize",
    "right_kernel_basis",
    "solve_right",
    "__version__",
]
