"""Exact arithmetic in the tower F_p < F_q = F_{p^k} < F_{q^n}.

Elements are handled internally as integer codes. An element of an
extension ``base[y]/(m(y))`` of degree ``d`` is the vector ``(e_0, ..., e_{d-1})``
of base codes and its code is ``sum(e_i * base.size**i)``. Flattening all the
way down gives base-``p`` digits, constant term least significant, so the
code of an element is its position in the canonical enumeration order and a
subfield element keeps the same code in every extension above it.

:class:`Elem` is the explicit (level, digit vector) value used at the API
boundary and for serialization.
"""

from __future__ import annotations

import itertools
import os
import warnings
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BoundExceeded,
    DegenerateDegree,
    DivisionByZero,
    InvalidA,
    LevelMismatch,
    NonPrime,
    NoSolution,
)
from .polyring import Poly, poly_gcd, poly_powmod

DEFAULT_ENUM_BOUND = 65536
_ADD_TABLE_MAX = 1024

LEVELS = ("Fp", "Fq", "Fqn")


def enumeration_bound() -> int:
    """Largest field size the exhaustive routines will enumerate."""
    raw = os.environ.get("LINPP_ENUM_BOUND")
    return int(raw) if raw else DEFAULT_ENUM_BOUND


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


class GF:
    """A finite field whose elements are the integers ``0 .. size-1``.

    Either a prime field (``base is None``) or a simple extension of
    ``base`` by the monic irreducible ``modulus`` (tuple of base codes,
    constant term first).
    """

    def __init__(self, p: int, base: GF | None = None, modulus: tuple[int, ...] | None = None,
                 level: str = "Fp"):
        self.p = p
        self.base = base
        self.level = level
        if base is None:
            self.modulus = None
            self.degree = 1
            self.abs_degree = 1
            self.size = p
        else:
            modulus = tuple(modulus)
            if len(modulus) < 2 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of positive degree")
            self.modulus = modulus
            self.degree = len(modulus) - 1
            self.abs_degree = base.abs_degree * self.degree
            self.size = base.size ** self.degree

    def __repr__(self):
        return f"GF({self.size}, level={self.level!r})"

    @cached_property
    def key(self):
        return (self.p,) if self.base is None else (self.base.key, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and (self is other or self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    @property
    def is_prime_field(self) -> bool:
        return self.base is None

    def contains(self, other: GF) -> bool:
        """True if ``other`` is this field or one of its tower subfields."""
        f = self
        while f is not None:
            if f == other:
                return True
            f = f.base
        return False

    def elements(self) -> range:
        if self.size > enumeration_bound():
            raise BoundExceeded(f"field of size {self.size} exceeds enumeration bound "
                                f"{enumeration_bound()}")
        return range(self.size)

    # -- coordinates -------------------------------------------------------

    def to_vec(self, c: int) -> tuple[int, ...]:
        """Base-field coordinates of ``c``."""
        if self.base is None:
            return (c,)
        s = self.base.size
        out = []
        for _ in range(self.degree):
            c, r = divmod(c, s)
            out.append(r)
        return tuple(out)

    def from_vec(self, vec) -> int:
        if self.base is None:
            return vec[0] % self.p
        s = self.base.size
        c = 0
        for e in reversed(vec):
            c = c * s + e
        return c

    def digits(self, c: int) -> tuple[int, ...]:
        """Flattened base-p digits of ``c``, constant term first."""
        out = []
        for _ in range(self.abs_degree):
            c, r = divmod(c, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits) -> int:
        c = 0
        for d in reversed(tuple(digits)):
            c = c * self.p + d
        return c

    # -- slow path (only used to build tables) -----------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        B = self.base
        va, vb = self.to_vec(a), self.to_vec(b)
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(va):
            if x == 0:
                continue
            for j, y in enumerate(vb):
                if y:
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        m = self.modulus
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i]
            if c == 0:
                continue
            prod[i] = 0
            for j in range(d):
                if m[j]:
                    prod[i - d + j] = B.sub(prod[i - d + j], B.mul(c, m[j]))
        return self.from_vec(prod[:d])

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        """(exp, log) tables for a primitive element; exp has length 2(size-1)."""
        N = self.size
        order = N - 1
        if order == 1:
            return [1, 1], [0, 0]
        factors = prime_factors(order)
        for g in range(2, N):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                break
        else:
            raise AssertionError("no primitive element found")
        exp = [0] * (2 * order)
        log = [0] * N
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        exp[order:] = exp[:order]
        return exp, log

    @cached_property
    def _digit_table(self) -> list[tuple[int, ...]]:
        return [self.digits(c) for c in range(self.size)]

    @cached_property
    def _add_table(self) -> list[int] | None:
        N = self.size
        if self.p == 2 or self.base is None or N > _ADD_TABLE_MAX:
            return None
        return [self._digit_add(a, b) for a in range(N) for b in range(N)]

    @cached_property
    def _neg_table(self) -> list[int]:
        p = self.p
        return [self.from_digits((-d) % p for d in self.digits(c)) for c in range(self.size)]

    def _digit_add(self, a: int, b: int) -> int:
        p = self.p
        da, db = self.digits(a), self.digits(b)
        return self.from_digits((x + y) % p for x, y in zip(da, db))

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.base is None:
            return (a + b) % self.p
        t = self._add_table
        if t is not None:
            return t[a * self.size + b]
        p = self.p
        dt = self._digit_table
        c = 0
        for x, y in zip(reversed(dt[a]), reversed(dt[b])):
            c = c * p + (x + y) % p
        return c

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.base is None:
            return (-a) % self.p
        return self._neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.base is None:
            return (a * b) % self.p
        exp, log = self._tables
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        exp, log = self._tables
        return exp[(self.size - 1 - log[a]) % (self.size - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.base is None:
            return pow(a, e, self.p)
        exp, log = self._tables
        return exp[(log[a] * e) % (self.size - 1)]

    def scalar(self, n: int) -> int:
        """The image of the integer ``n`` in this field."""
        return n % self.p

    # -- Frobenius and trace relative to the base field --------------------

    @cached_property
    def _frob_table(self) -> list[int]:
        s = self.base.size if self.base is not None else self.size
        return [self.pow(c, s) for c in range(self.size)]

    def frob(self, c: int, j: int = 1) -> int:
        """``c ** (base.size ** j)``."""
        if self.base is None:
            return c
        t = self._frob_table
        for _ in range(j % self.degree):
            c = t[c]
        return c

    @cached_property
    def _trace_table(self) -> list[int]:
        t = self._frob_table
        out = []
        for c in range(self.size):
            acc, x = 0, c
            for _ in range(self.degree):
                acc = self.add(acc, x)
                x = t[x]
            out.append(acc)
        return out

    def trace(self, c: int) -> int:
        """Trace down to the base field."""
        if self.base is None:
            return c
        return self._trace_table[c]

    def order(self, c: int) -> int:
        """Multiplicative order of a nonzero element."""
        if c == 0:
            raise DivisionByZero("zero has no multiplicative order")
        n = self.size - 1
        for r in prime_factors(n):
            while n % r == 0 and self.pow(c, n // r) == 1:
                n //= r
        return n

    def extension(self, d: int, level: str = "ext") -> GF:
        """Degree-``d`` extension by the smallest monic irreducible."""
        return GF(self.p, self, smallest_irreducible(self, d), level=level)


def is_irreducible(field: GF, modulus) -> bool:
    """Rabin's test for a monic polynomial over ``field``."""
    f = Poly(field, modulus)
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    x = Poly(field, (0, 1))
    s = field.size

    def x_pow_s_pow(i):
        return poly_powmod(x, s ** i, f)

    if x_pow_s_pow(d) != x % f:
        return False
    for r in prime_factors(d):
        if poly_gcd(x_pow_s_pow(d // r) - x, f).degree != 0:
            return False
    return True


def smallest_irreducible(field: GF, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``d``.

    Candidates are compared as tuples ``(c_0, ..., c_{d-1})`` with the
    constant term most significant, which is the order
    ``itertools.product`` generates them in.
    """
    if d < 1:
        raise DegenerateDegree("degree must be positive")
    for low in itertools.product(range(field.size), repeat=d):
        m = low + (1,)
        if is_irreducible(field, m):
            return m
    raise AssertionError("irreducible polynomials exist in every degree")


@dataclass(frozen=True)
class Elem:
    """Explicit element value: its level and flattened base-p digit vector."""

    level: str
    coeffs: tuple[int, ...]


class FieldTower:
    """F_p < F_q < F_{q^n} with deterministic moduli.

    ``base`` is set only for iterated towers, where the middle field is the
    top field of another tower and ``mod_q`` is ``None``.
    """

    def __init__(self, p, k, n, mod_q=None, mod_qn=None, base: FieldTower | None = None):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if k < 1 or n < 1:
            raise DegenerateDegree(f"degenerate degree k={k}, n={n}")
        self.p, self.k, self.n = p, k, n
        self.base = base
        self.fp = GF(p, level="Fp")
        if base is not None:
            if base.p != p or base.k * base.n != k:
                raise ValueError("base tower does not match (p, k)")
            # same field as base.fqn (equal key), tagged as the middle level
            self.fq = GF(p, base.fq, base.mod_qn, level="Fq")
            self.mod_q = None
        else:
            mod_q = tuple(mod_q) if mod_q is not None else smallest_irreducible(self.fp, k)
            if len(mod_q) != k + 1 or not is_irreducible(self.fp, mod_q):
                raise ValueError(f"mod_q {mod_q} is not a monic irreducible of degree {k}")
            self.mod_q = mod_q
            self.fq = GF(p, self.fp, mod_q, level="Fq")
        mod_qn = tuple(mod_qn) if mod_qn is not None else smallest_irreducible(self.fq, n)
        if len(mod_qn) != n + 1 or not is_irreducible(self.fq, mod_qn):
            raise ValueError(f"mod_qn {mod_qn} is not a monic irreducible of degree {n}")
        self.mod_qn = mod_qn
        self.fqn = GF(p, self.fq, mod_qn, level="Fqn")
        self.q = self.fq.size
        self.size = self.fqn.size

    def __repr__(self):
        return f"FieldTower(p={self.p}, k={self.k}, n={self.n})"

    @cached_property
    def _key(self):
        return (self.p, self.k, self.n, self.mod_q, self.mod_qn,
                self.base._key if self.base is not None else None)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and (self is other or self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def field(self, level: str) -> GF:
        try:
            return {"Fp": self.fp, "Fq": self.fq, "Fqn": self.fqn}[level]
        except KeyError:
            raise LevelMismatch(f"unknown level {level!r}") from None

    # -- Elem boundary -----------------------------------------------------

    def elem(self, code: int, level: str = "Fqn") -> Elem:
        F = self.field(level)
        if not 0 <= code < F.size:
            raise LevelMismatch(f"code {code} is not an element of {level}")
        return Elem(level, F.digits(code))

    def code(self, e: Elem | int, level: str | None = None) -> int:
        """Integer code of ``e``; an int is range-checked against ``level``."""
        if isinstance(e, Elem):
            F = self.field(e.level)
            if len(e.coeffs) != F.abs_degree or any(not 0 <= d < self.p for d in e.coeffs):
                raise LevelMismatch(f"malformed {e.level} element {e.coeffs}")
            c = F.from_digits(e.coeffs)
            if level is not None and c >= self.field(level).size:
                raise LevelMismatch(f"element does not lie in {level}")
            return c
        F = self.field(level or "Fqn")
        if not 0 <= e < F.size:
            raise LevelMismatch(f"code {e} is not an element of {F.level}")
        return e

    def elem_to_json(self, e: Elem):
        if e.level != "Fqn":
            return list(e.coeffs)
        k = self.fq.abs_degree
        return [list(e.coeffs[i * k:(i + 1) * k]) for i in range(self.n)]

    def elem_from_json(self, obj, level: str) -> Elem:
        if isinstance(obj, int):
            return self.elem(obj, level)
        flat = [d for part in obj for d in (part if isinstance(part, list) else [part])]
        return Elem(level, tuple(flat))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        kq = self.fq.abs_degree
        out = {
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "mod_q": list(self.mod_q) if self.mod_q is not None else None,
            "mod_qn": [list(self.fq.digits(c)) for c in self.mod_qn],
        }
        assert all(len(c) == kq for c in out["mod_qn"])
        if self.base is not None:
            out["base"] = self.base.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> FieldTower:
        p, k, n = obj["p"], obj["k"], obj["n"]
        base = cls.from_json(obj["base"]) if obj.get("base") else None
        t = extend_tower(base, n) if base is not None else build_tower(p, k, n)
        mod_q = tuple(obj["mod_q"]) if obj.get("mod_q") else None
        mod_qn = tuple(t.fq.from_digits(c) for c in obj["mod_qn"])
        if mod_q == t.mod_q and mod_qn == t.mod_qn:
            return t
        if base is not None:
            return FieldTower(p, k, n, mod_qn=mod_qn, base=base)
        return FieldTower(p, k, n, mod_q, mod_qn)

    # -- code-level operations --------------------------------------------

    def frobenius(self, c: int, j: int = 1) -> int:
        """``c ** (q ** j)`` for ``c`` in F_{q^n}."""
        return self.fqn.frob(c, j)

    def trace(self, c: int) -> int:
        return self.fqn.trace(c)

    def solve_delta(self, a: int) -> int:
        """Smallest nonzero ``d`` in F_{q^n} with ``d**(q-1) == a``."""
        a = self.code(a, "Fq")
        if a == 0 or self.fq.pow(a, self.n) != 1:
            raise InvalidA(f"a={a} does not satisfy a^n = 1")
        F = self.fqn
        for d in range(1, F.size):
            if F.pow(d, self.q - 1) == a:
                return d
        raise NoSolution(f"no delta for a={a}")

    def nonzero_trace_element(self) -> int:
        for c in self.fqn.elements():
            if self.trace(c) != 0:
                return c
        raise AssertionError("trace is surjective")


_TOWERS: dict = {}


def build_tower(p: int, k: int, n: int) -> FieldTower:
    """Tower with the lexicographically smallest moduli. Cached per (p, k, n)."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if k < 1 or n < 1:
        raise DegenerateDegree(f"degenerate degree k={k}, n={n}")
    if (p ** k) ** n > enumeration_bound():
        warnings.warn(f"q^n = {(p ** k) ** n} exceeds the enumeration bound; "
                      "exhaustive oracles will refuse this tower", stacklevel=2)
    key = (p, k, n)
    t = _TOWERS.get(key)
    if t is None:
        t = FieldTower(p, k, n)
        _TOWERS[key] = t
    return t


def extend_tower(tower: FieldTower, n: int) -> FieldTower:
    """Tower whose F_q is ``tower``'s F_{q^n}, extended again by degree ``n``."""
    key = ("ext", id(tower), n)
    t = _TOWERS.get(key)
    if t is None:
        t = FieldTower(tower.p, tower.k * tower.n, n, base=tower)
        _TOWERS[key] = t
    return t


# -- Elem-level operations ----------------------------------------------------

def elem_arith(tower: FieldTower, op: str, *args):
    """Field arithmetic on :class:`Elem` values.

    ``op`` is one of add, sub, mul, neg, inv, pow; ``pow`` takes an Elem and
    a nonnegative int exponent.
    """
    if op == "pow":
        e, exponent = args
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        F = tower.field(e.level)
        return tower.elem(F.pow(tower.code(e), exponent), e.level)
    levels = {a.level for a in args}
    if len(levels) != 1:
        raise LevelMismatch(f"operands at different levels: {sorted(levels)}")
    level = levels.pop()
    F = tower.field(level)
    codes = [tower.code(a) for a in args]
    if op in ("add", "sub", "mul"):
        a, b = codes
        result = getattr(F, op)(a, b)
    elif op in ("neg", "inv"):
        (a,) = codes
        result = getattr(F, op)(a)
    else:
        raise ValueError(f"unknown op {op!r}")
    return tower.elem(result, level)


def _require_level(e: Elem, level: str):
    if e.level != level:
        raise LevelMismatch(f"expected an {level} element, got {e.level}")


def frobenius(tower: FieldTower, c: Elem, j: int) -> Elem:
    _require_level(c, "Fqn")
    return tower.elem(tower.frobenius(tower.code(c), j), "Fqn")


def trace_qn_q(tower: FieldTower, c: Elem) -> Elem:
    _require_level(c, "Fqn")
    return tower.elem(tower.trace(tower.code(c)), "Fq")


def solve_delta(tower: FieldTower, a: Elem) -> Elem:
    _require_level(a, "Fq")
    return tower.elem(tower.solve_delta(tower.code(a)), "Fqn")


def enumerate_elements(tower: FieldTower, level: str) -> list[Elem]:
    return [tower.elem(c, level) for c in tower.field(level).elements()]


def find_nonzero_trace_element(tower: FieldTower) -> Elem:
    return tower.elem(tower.nonzero_trace_element(), "Fqn")
