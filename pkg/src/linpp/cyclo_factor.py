"""Factorization of x^n - 1 over F_q by q-cyclotomic cosets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .errors import NotARoot
from .field_tower import FieldTower, prime_factors
from .polyring import Poly, xn_minus_1
from .serialize import poly_to_json


@dataclass(frozen=True)
class FactorSet:
    """Irreducible monic factors of ``x^n - 1`` with multiplicities."""

    factors: tuple[tuple[Poly, int], ...]
    n: int
    tower: FieldTower

    def product(self) -> Poly:
        out = Poly(self.tower.fq, [1])
        for f, e in self.factors:
            for _ in range(e):
                out = out * f
        return out

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def to_json(self) -> list:
        return [{"coeffs": poly_to_json(f, self.tower)["coeffs"], "multiplicity": e}
                for f, e in self.factors]


def multiplicative_order(q: int, m: int) -> int:
    if m == 1:
        return 1
    d, x = 1, q % m
    while x != 1:
        x = (x * q) % m
        d += 1
    return d


def cyclotomic_cosets(q: int, m: int) -> list[list[int]]:
    """Orbits of ``Z/m`` under multiplication by ``q``, each sorted, by leader."""
    seen, out = set(), []
    for s in range(m):
        if s in seen:
            continue
        coset, j = [], s
        while j not in coset:
            coset.append(j)
            j = (j * q) % m
        seen.update(coset)
        out.append(sorted(coset))
    return out


def _canonical_key(f: Poly):
    return (f.degree, f.coeffs)


def factor_xn_minus_1(tower: FieldTower, n: int | None = None) -> FactorSet:
    """Factor ``x^n - 1`` over the tower's F_q (``n`` defaults to the tower's)."""
    n = tower.n if n is None else n
    p, Fq = tower.p, tower.fq
    e, m = 0, n
    while m % p == 0:
        m //= p
        e += 1
    mult = p ** e
    q = Fq.size
    d = multiplicative_order(q, m)
    E = Fq.extension(d) if d > 1 else Fq
    # smallest element of exact order m in F_{q^d}
    primes = prime_factors(m)
    zeta = next(c for c in E.elements() if c and E.pow(c, m) == 1
                and all(E.pow(c, m // r) != 1 for r in primes))
    factors = []
    for coset in cyclotomic_cosets(q, m):
        f = Poly(E, [1])
        for j in coset:
            f = f * Poly(E, [E.neg(E.pow(zeta, j)), 1])
        assert all(c < q for c in f.coeffs), "minimal polynomial must lie in F_q[x]"
        factors.append((Poly(Fq, f.coeffs), mult))
    factors.sort(key=lambda fe: _canonical_key(fe[0]))
    return FactorSet(tuple(factors), n, tower)


def divisors(fs: FactorSet) -> list[Poly]:
    """All monic divisors, in lexicographic order of exponent vectors."""
    Fq = fs.tower.fq
    out = []
    for exps in itertools.product(*(range(e + 1) for _, e in fs.factors)):
        d = Poly(Fq, [1])
        for (f, _), k in zip(fs.factors, exps):
            for _ in range(k):
                d = d * f
        out.append(d)
    return out


def divisor_count(fs: FactorSet) -> int:
    return prod(e + 1 for _, e in fs.factors)


def variant_divisor(tower: FieldTower, a: int) -> Poly:
    """``(x^n - 1)/(x - a) = x^{n-1} + a x^{n-2} + ... + a^{n-1}``."""
    Fq, n = tower.fq, tower.n
    a = tower.code(a, "Fq")
    if a == 0 or Fq.pow(a, n) != 1:
        raise NotARoot(f"a = {a} is not an n-th root of unity in F_q")
    return Poly(Fq, [Fq.pow(a, n - 1 - j) for j in range(n)])


def trace_divisor(tower: FieldTower) -> Poly:
    return variant_divisor(tower, 1)


def check_divides(d: Poly, tower: FieldTower) -> bool:
    return (xn_minus_1(tower.fq, tower.n) % d.lift(tower.fq)).is_zero()
