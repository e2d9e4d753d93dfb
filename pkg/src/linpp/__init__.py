"""Permutation polynomials of F_{q^n} built from q-linearized pieces.

The shape throughout is ``P(x) = f(L_g(x)) + k(L_g(x)) * L_h(x)`` with
``g | x^n - 1``. Field elements are integer codes; see :mod:`linpp.field_tower`.
"""

from .errors import LinPPError
from .field_tower import FieldTower, build_tower, extend_tower
from .polyring import Poly
from .pp_engine import InverseSpec, PPSpec

__all__ = ["FieldTower", "InverseSpec", "LinPPError", "PPSpec", "Poly", "build_tower",
           "extend_tower"]
