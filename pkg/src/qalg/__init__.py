"""qalg: exact invariants of bound quiver algebras over GF(p)."""

from .errors import QalgError
from .linalg import DEFAULT_MODULUS, GF
from .quiver import (
    Arrow,
    BoundQuiverAlgebra,
    IdealBasis,
    Path,
    Quiver,
    Relation,
    compile_presentation,
    trivial_path,
)

__all__ = [
    "QalgError",
    "GF",
    "DEFAULT_MODULUS",
    "Arrow",
    "Quiver",
    "Path",
    "Relation",
    "BoundQuiverAlgebra",
    "IdealBasis",
    "compile_presentation",
    "trivial_path",
]
