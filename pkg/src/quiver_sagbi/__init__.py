"""Semi-invariants of quiver representations from linked tableaux, SAGBI bases
for Kronecker quivers and classical periods of Laurent polynomials."""

from .algebra import Poly, PolyRing, RepSpace
from .quiver import DimensionVector, Quiver
from .sagbi import KroneckerContext, kronecker22_family, primitive_generators, subduce
from .semiinvariants import check_semi_invariance, express_weakly_semistandard, semi_invariant
from .tableaux import LinkedPair, RectTableau
from .toric import LatticePolytope, LaurentPolynomial, builtin_fano_example, classical_period, lattice_points

__all__ = [
    "DimensionVector",
    "KroneckerContext",
    "LatticePolytope",
    "LaurentPolynomial",
    "LinkedPair",
    "Poly",
    "PolyRing",
    "Quiver",
    "RectTableau",
    "RepSpace",
    "builtin_fano_example",
    "check_semi_invariance",
    "classical_period",
    "express_weakly_semistandard",
    "kronecker22_family",
    "lattice_points",
    "primitive_generators",
    "semi_invariant",
    "subduce",
]
