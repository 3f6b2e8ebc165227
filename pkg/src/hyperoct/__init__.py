"""Integer relations among e_k(A) and among small-diagonal classes, with exact certificates."""

from .octagen import KernelReport, OctaSpec, enumerate_specs, expand, g_lattice, verify_zkernel
from .rewriter import Certificate, decompose, verify
from .subsets import FormalSum, enumerate_subsets, rank, unrank
from .sympoly import Poly, elem_sym, phi
from .zlattice import Lattice, hnf, lattices_equal, left_kernel

__version__ = "0.1.0"
