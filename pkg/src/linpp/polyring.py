"""Dense univariate polynomials over a :class:`~linpp.field_tower.GF`.

Coefficients are field codes, constant term first, with no trailing zeros.
The zero polynomial has an empty coefficient tuple and degree ``-inf``.
"""

from __future__ import annotations

import math

from .errors import BothZero, DivisionByZero, DuplicateNode, LevelMismatch, NotCoprime

NEG_INF = -math.inf


def _strip(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = _strip(coeffs)

    @classmethod
    def monomial(cls, field, degree: int, c: int = 1) -> Poly:
        return cls(field, [0] * degree + [c])

    @classmethod
    def constant(cls, field, c: int) -> Poly:
        return cls(field, [c])

    @property
    def level(self) -> str:
        return self.field.level

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead() == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Poly({self.field.level}, {list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(reversed(terms))

    def _check(self, other: Poly):
        if self.field != other.field:
            raise LevelMismatch(f"{self.field} vs {other.field}")

    def lift(self, field) -> Poly:
        """The same coefficients viewed over ``field``.

        Works upward into an extension, or downward when every coefficient
        already lies in the subfield.
        """
        if field is self.field:
            return self
        if field.contains(self.field):
            return Poly(field, self.coeffs)
        if self.field.contains(field) and all(c < field.size for c in self.coeffs):
            return Poly(field, self.coeffs)
        raise LevelMismatch(f"cannot view {self.field} polynomial over {field}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self) -> Poly:
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F)
        out = [0] * (len(a) + len(b) - 1)
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in nz_b:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scalar_mul(self, c: int) -> Poly:
        F = self.field
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> Poly:
        """Multiply by ``x**k``."""
        return Poly(self.field, [0] * k + list(self.coeffs)) if self.coeffs else self

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = F.inv(other.lead())
        nz = [(j, c) for j, c in enumerate(other.coeffs[:-1]) if c]
        if len(rem) <= d:
            return Poly(F), Poly(F, rem)
        quot = [0] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            t = F.mul(c, inv_lead)
            quot[i - d] = t
            rem[i] = 0
            for j, m in nz:
                rem[i - d + j] = F.sub(rem[i - d + j], F.mul(t, m))
        return Poly(F, quot), Poly(F, rem[:d])

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scalar_mul(self.field.inv(self.lead()))

    # -- evaluation --------------------------------------------------------

    def __call__(self, c: int, field=None) -> int:
        """Horner evaluation at ``c``, optionally in an extension ``field``."""
        F = field or self.field
        acc = 0
        for a in reversed(self.coeffs):
            acc = F.add(F.mul(acc, c), a)
        return acc

    def compose(self, inner: Poly) -> Poly:
        """``self(inner(x))``."""
        self._check(inner)
        acc = Poly(self.field)
        for a in reversed(self.coeffs):
            acc = acc * inner + Poly(self.field, [a])
        return acc


def poly_eval(f: Poly, c: int, field=None) -> int:
    if field is not None and not field.contains(f.field):
        raise LevelMismatch(f"cannot evaluate a {f.field} polynomial in {field}")
    return f(c, field)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd."""
    if f.is_zero() and g.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_xgcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """``(d, u, v)`` with ``u*f + v*g == d`` and ``d`` the monic gcd."""
    if f.is_zero() and g.is_zero():
        raise BothZero("xgcd(0, 0) is undefined")
    F = f.field
    r0, r1 = f, g
    s0, s1 = Poly(F, [1]), Poly(F)
    t0, t1 = Poly(F), Poly(F, [1])
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    inv = F.inv(r0.lead())
    return r0.scalar_mul(inv), s0.scalar_mul(inv), t0.scalar_mul(inv)


def mod_inverse(h: Poly, m: Poly) -> Poly:
    """``H`` with ``h*H == 1 (mod m)`` and ``deg H < deg m``."""
    if m.degree == 0:
        return Poly(m.field)
    d, u, _ = poly_xgcd(h % m, m)
    if d.degree != 0:
        raise NotCoprime(f"gcd({h}, {m}) = {d}")
    return u % m


def poly_powmod(f: Poly, e: int, m: Poly) -> Poly:
    result = Poly(f.field, [1]) % m
    base = f % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


def poly_pow(f: Poly, e: int) -> Poly:
    result = Poly(f.field, [1])
    base = f
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def x_pow_minus_x(field, qpow: int) -> Poly:
    """``x**qpow - x``."""
    coeffs = [0] * (qpow + 1)
    coeffs[qpow] = 1
    coeffs[1] = field.sub(coeffs[1], 1)
    return Poly(field, coeffs)


def xn_minus_1(field, n: int) -> Poly:
    return Poly(field, [field.neg(1)] + [0] * (n - 1) + [1])


def reduce_mod_xq_x(f: Poly, qpow: int) -> Poly:
    """Remainder of ``f`` modulo ``x**qpow - x``.

    The result induces the same function as ``f`` on the field of size
    ``qpow``.
    """
    if f.degree < qpow:
        return f
    return f % x_pow_minus_x(f.field, qpow)


def interpolate(points, field) -> Poly:
    """Lagrange interpolation through ``(node, value)`` pairs in ``field``."""
    points = list(points)
    nodes = [x for x, _ in points]
    if len(set(nodes)) != len(nodes):
        raise DuplicateNode("interpolation nodes must be distinct")
    F = field
    master = Poly(F, [1])
    for x in nodes:
        master = master * Poly(F, [F.neg(x), 1])
    result = Poly(F)
    for x, y in points:
        if y == 0:
            continue
        basis = master // Poly(F, [F.neg(x), 1])
        denom = basis(x)
        result = result + basis.scalar_mul(F.div(y, denom))
    return result
