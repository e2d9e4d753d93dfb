"""JSON encodings for elements and polynomials.

Coefficient vectors are constant-term first. An element is a list of base-p
digits (F_p, F_q) or a list of ``n`` such lists (F_{q^n}).
"""

from __future__ import annotations

from .field_tower import FieldTower
from .polyring import Poly


def elem_to_json(code: int, tower: FieldTower, level: str):
    return tower.elem_to_json(tower.elem(code, level))


def elem_from_json(obj, tower: FieldTower, level: str) -> int:
    return tower.code(tower.elem_from_json(obj, level))


def poly_to_json(f: Poly, tower: FieldTower) -> dict:
    level = f.level if f.level in ("Fp", "Fq", "Fqn") else "Fqn"
    return {"level": level, "coeffs": [elem_to_json(c, tower, level) for c in f.coeffs]}


def poly_from_json(obj, tower: FieldTower, level: str | None = None) -> Poly:
    """Decode ``{"level", "coeffs"}``; a bare list needs ``level``."""
    if isinstance(obj, dict):
        level = obj["level"]
        coeffs = obj["coeffs"]
    else:
        coeffs = obj
    if level is None:
        raise ValueError("polynomial level is required")
    return Poly(tower.field(level), [elem_from_json(c, tower, level) for c in coeffs])
