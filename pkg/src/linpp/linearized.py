"""q-linearized polynomials, handled through their conventional q-associates.

``LinPoly(assoc)`` stands for ``sum(a_i * x**(q**i))``; the expanded
q-power form is never built.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotADivisor, ZeroPolynomial
from .field_tower import FieldTower
from .polyring import Poly, poly_gcd, xn_minus_1


@dataclass(frozen=True)
class LinPoly:
    assoc: Poly
    tower: FieldTower

    def __call__(self, c: int) -> int:
        return lin_eval(self, c)

    def to_json(self) -> dict:
        from .serialize import poly_to_json

        return {"assoc": poly_to_json(self.assoc, self.tower), "tower": self.tower.to_json()}


def lin_eval_assoc(assoc: Poly, tower: FieldTower, c: int) -> int:
    """Evaluate ``L_assoc`` at ``c`` in F_{q^n}."""
    F = tower.fqn
    frob = F._frob_table
    acc = 0
    for a in assoc.coeffs:
        if a:
            acc = F.add(acc, F.mul(a, c))
        c = frob[c]
    return acc


def lin_eval(L: LinPoly, c: int) -> int:
    return lin_eval_assoc(L.assoc, L.tower, c)


def lin_table(assoc: Poly, tower: FieldTower) -> list[int]:
    """Values of ``L_assoc`` on every element of F_{q^n}, in code order."""
    return [lin_eval_assoc(assoc, tower, c) for c in tower.fqn.elements()]


def lin_compose_check(f: Poly, g: Poly, tower: FieldTower) -> bool:
    """Check ``L_f(L_g(c)) == L_{fg}(c)`` on all of F_{q^n}."""
    fg = f * g
    return all(
        lin_eval_assoc(f, tower, lin_eval_assoc(g, tower, c)) == lin_eval_assoc(fg, tower, c)
        for c in tower.fqn.elements()
    )


def kernel(f: Poly, tower: FieldTower) -> list[int]:
    """All roots of ``L_f`` in F_{q^n}, by exhaustive scan."""
    if f.is_zero():
        raise ZeroPolynomial("kernel of the zero polynomial is everything")
    return [c for c in tower.fqn.elements() if lin_eval_assoc(f, tower, c) == 0]


def cofactor(g: Poly, tower: FieldTower) -> Poly:
    """``(x^n - 1) / g``, raising :class:`NotADivisor` if ``g`` does not divide."""
    g = g.lift(tower.fq)
    if g.is_zero():
        raise NotADivisor("zero does not divide x^n - 1")
    G, r = divmod(xn_minus_1(tower.fq, tower.n), g)
    if not r.is_zero():
        raise NotADivisor(f"{g} does not divide x^{tower.n} - 1")
    return G


_IMAGE_CACHE: dict = {}


def image_set(g: Poly, tower: FieldTower) -> list[int]:
    """``L_g(F_{q^n})`` computed as the kernel of ``L_{(x^n-1)/g}``."""
    key = (tower, g.lift(tower.fq).coeffs)
    hit = _IMAGE_CACHE.get(key)
    if hit is None:
        hit = kernel(cofactor(g, tower), tower)
        _IMAGE_CACHE[key] = hit
    return hit


def image_by_evaluation(g: Poly, tower: FieldTower) -> list[int]:
    return sorted(set(lin_table(g, tower)))


def permutes_kernel(f: Poly, g: Poly, tower: FieldTower) -> bool:
    """Whether ``L_g`` is a bijection of the kernel of ``L_f``.

    Decided by ``gcd(f, g, x^n - 1) == 1``.
    """
    if f.is_zero():
        raise ZeroPolynomial("f must be nonzero")
    f, g = f.lift(tower.fq), g.lift(tower.fq)
    d = poly_gcd(poly_gcd(f, g) if not g.is_zero() else f.monic(), xn_minus_1(tower.fq, tower.n))
    return d.degree == 0


def kernel_basis(elements, tower: FieldTower) -> list[int]:
    """An F_q-basis of the span of ``elements`` (Gaussian elimination)."""
    Fq, F = tower.fq, tower.fqn
    rows: list[list[int]] = []
    pivots: list[int] = []
    for c in elements:
        v = list(F.to_vec(c))
        for row, piv in zip(rows, pivots):
            if v[piv]:
                t = v[piv]
                v = [Fq.sub(x, Fq.mul(t, y)) for x, y in zip(v, row)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            continue
        inv = Fq.inv(v[lead])
        v = [Fq.mul(inv, x) for x in v]
        # keep rows fully reduced so each pivot column is a unit vector
        for i, row in enumerate(rows):
            if row[lead]:
                t = row[lead]
                rows[i] = [Fq.sub(x, Fq.mul(t, y)) for x, y in zip(row, v)]
        rows.append(v)
        pivots.append(lead)
    return [F.from_vec(r) for r in rows]
