"""Weyl-group combinatorics for counting homogeneous right coideal
subalgebras of quantized enveloping algebras.

The package enumerates finite Weyl groups from Cartan data, realizes the
triple/pair parametrization of the coideal subalgebras, and reproduces the
published census |B(W)| for every built-in type.
"""

from .rootsys import (
    CartanMatrix,
    NotFiniteTypeError,
    RootSystem,
    build_root_system,
    pairing,
    reflect,
    root_system,
)
from .weylgroup import (
    GroupTable,
    GroupTooLargeError,
    WeylElement,
    enumerate_group,
    inverse,
    left_descents,
    length,
    leq_weak,
    longest_parabolic,
    multiply,
    phi_plus,
    pi_cap_xpi,
    right_descents,
)

__version__ = "1.0.0"

__all__ = [
    "CartanMatrix",
    "GroupTable",
    "GroupTooLargeError",
    "NotFiniteTypeError",
    "RootSystem",
    "WeylElement",
    "build_root_system",
    "enumerate_group",
    "inverse",
    "left_descents",
    "length",
    "leq_weak",
    "longest_parabolic",
    "multiply",
    "pairing",
    "phi_plus",
    "pi_cap_xpi",
    "reflect",
    "right_descents",
    "root_system",
    "__version__",
]
