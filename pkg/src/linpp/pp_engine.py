"""Permutation polynomials of the shape ``f(L_g(x)) + k(L_g(x)) * L_h(x)``.

``g, h`` are q-associates over F_q with ``g | x^n - 1``; ``f`` lives over
F_{q^n}. The criteria here reduce bijectivity on F_{q^n} to coprimality of
``g, h`` plus bijectivity of a small map on the image ``L_g(F_{q^n})``, which
for ``g = (x^n-1)/(x-a)`` is the line ``delta * F_q``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property

from .cyclo_factor import trace_divisor, variant_divisor
from .errors import (
    BaseNotCPP,
    BaseNotPP,
    HConditionFailed,
    HNotCoprime,
    HypothesisViolated,
    InvalidA,
    InvalidDelta,
    KNotUnitValued,
    LevelMismatch,
    NotAPP,
    PreconditionFailed,
)
from .field_tower import FieldTower, extend_tower
from .linearized import cofactor, image_set, lin_eval_assoc, lin_table
from .polyring import (
    Poly,
    interpolate,
    mod_inverse,
    poly_gcd,
    reduce_mod_xq_x,
    x_pow_minus_x,
    xn_minus_1,
)
from .serialize import poly_from_json, poly_to_json


@dataclass(frozen=True)
class Verdict:
    """Criterion outcome; ``failed`` names the first condition that failed."""

    ok: bool
    failed: str | None = None

    def __bool__(self):
        return self.ok


def _is_unit_valued(k: Poly, points, tower: FieldTower) -> bool:
    q, F = tower.q, tower.fqn
    for z in points:
        v = k(z, F)
        if v == 0 or v >= q:
            return False
    return True


def _permutes_fq(Q: Poly, tower: FieldTower) -> bool:
    Fq = tower.fq
    return len({Q(t) for t in Fq.elements()}) == Fq.size


def _coprime(a: Poly, b: Poly) -> bool:
    if a.is_zero() and b.is_zero():
        return False
    return poly_gcd(a, b).degree == 0


@dataclass(frozen=True)
class PPSpec:
    """``P(x) = f(L_g(x)) + k(L_g(x)) * L_h(x)``.

    ``k`` may be over F_q or F_{q^n}; either way it must send the image of
    ``L_g`` into F_q^*.
    """

    f: Poly
    g: Poly
    h: Poly
    k: Poly
    tower: FieldTower = field(compare=False)

    def __post_init__(self):
        t = self.tower
        object.__setattr__(self, "f", self.f.lift(t.fqn))
        object.__setattr__(self, "g", self.g.lift(t.fq))
        object.__setattr__(self, "h", self.h.lift(t.fq))
        k = self.k
        if all(c < t.q for c in k.coeffs) and k.field != t.fq:
            k = k.lift(t.fq)
        elif not t.fqn.contains(k.field):
            k = k.lift(t.fqn)
        object.__setattr__(self, "k", k)
        if not self.g.is_monic():
            raise PreconditionFailed("g must be monic")
        cofactor(self.g, t)
        if not _is_unit_valued(self.k, image_set(self.g, t), t):
            raise KNotUnitValued("k does not map L_g(F_{q^n}) into F_q^*")

    def __call__(self, c: int) -> int:
        return evaluate_pp(self, c)

    def to_json(self) -> dict:
        t = self.tower
        return {
            "kind": "PPSpec",
            "tower": t.to_json(),
            "f": poly_to_json(self.f, t),
            "g": poly_to_json(self.g, t),
            "h": poly_to_json(self.h, t),
            "k": poly_to_json(self.k, t),
        }

    @classmethod
    def from_json(cls, obj: dict) -> PPSpec:
        t = FieldTower.from_json(obj["tower"])
        return cls(*(poly_from_json(obj[name], t) for name in "fghk"), tower=t)


def evaluate_pp(spec: PPSpec, c: int) -> int:
    t = spec.tower
    F = t.fqn
    z = lin_eval_assoc(spec.g, t, c)
    return F.add(spec.f(z, F), F.mul(spec.k(z, F), lin_eval_assoc(spec.h, t, c)))


_LIN_TABLES: dict = {}


def _cached_lin_table(assoc: Poly, tower: FieldTower) -> list[int]:
    key = (tower, assoc.field, assoc.coeffs)
    hit = _LIN_TABLES.get(key)
    if hit is None:
        hit = _LIN_TABLES[key] = lin_table(assoc, tower)
    return hit


def value_table(spec: PPSpec) -> list[int]:
    """``P(c)`` for every ``c`` in canonical order."""
    t = spec.tower
    F = t.fqn
    lg = _cached_lin_table(spec.g, t)
    lh = lin_table(spec.h, t)
    fz, kz = {}, {}
    for z in set(lg):
        fz[z] = spec.f(z, F)
        kz[z] = spec.k(z, F)
    return [F.add(fz[z], F.mul(kz[z], y)) for z, y in zip(lg, lh)]


def pp_polynomial(spec: PPSpec) -> Poly:
    """``P`` expanded into one polynomial over F_{q^n}, reduced mod ``x^{q^n} - x``."""
    t = spec.tower
    F, Q = t.fqn, t.size
    mod = x_pow_minus_x(F, Q)

    def linearized(assoc: Poly) -> Poly:
        # x^{q^i} and x^{q^{i mod n}} agree as functions on F_{q^n}
        coeffs = [0] * (t.q ** (t.n - 1) + 1)
        for i, a in enumerate(assoc.coeffs):
            e = t.q ** (i % t.n)
            coeffs[e] = F.add(coeffs[e], a)
        return Poly(F, coeffs)

    def compose(outer: Poly, inner: Poly) -> Poly:
        acc = Poly(F)
        for a in reversed(outer.lift(F).coeffs):
            acc = (acc * inner + Poly(F, [a])) % mod
        return acc

    lg = linearized(spec.g)
    out = compose(spec.f, lg) + compose(spec.k, lg) * linearized(spec.h)
    return reduce_mod_xq_x(out, Q)


# -- general criteria -------------------------------------------------------

def check_pp_general(spec: PPSpec) -> Verdict:
    """``gcd(g, h) = 1`` and ``z -> L_g(f(z)) + k(z) L_h(z)`` permutes the image of ``L_g``."""
    t = spec.tower
    if not _coprime(spec.g, spec.h):
        return Verdict(False, "gcd(g, h) != 1")
    F = t.fqn
    image = image_set(spec.g, t)
    outs = set()
    for z in image:
        w = F.add(lin_eval_assoc(spec.g, t, spec.f(z, F)),
                  F.mul(spec.k(z, F), lin_eval_assoc(spec.h, t, z)))
        outs.add(w)
    if len(outs) != len(image) or not outs <= set(image):
        return Verdict(False, "Q does not permute L_g(F_{q^n})")
    return Verdict(True)


def check_pp_generic_g(f: Poly, g: Poly, h: Poly, tower: FieldTower) -> bool:
    """PP test for ``f(L_g(x)) + L_h(x)`` when ``L_g`` kills ``f(L_g(F_{q^n}))``."""
    F = tower.fqn
    f, g, h = f.lift(F), g.lift(tower.fq), h.lift(tower.fq)
    for z in image_set(g, tower):
        if lin_eval_assoc(g, tower, f(z)) != 0:
            raise HypothesisViolated("L_g(f(z)) != 0 for some z in L_g(F_{q^n})")
    return _coprime(xn_minus_1(tower.fq, tower.n), h)


def poly_frobenius(f: Poly, tower: FieldTower) -> Poly:
    """``f(x)**q`` reduced mod ``x^{q^n} - x``."""
    F, q = tower.fqn, tower.q
    f = f.lift(F)
    if f.is_zero():
        return f
    coeffs = [0] * (q * f.degree + 1)
    for i, a in enumerate(f.coeffs):
        coeffs[i * q] = F.frob(a)
    return reduce_mod_xq_x(Poly(F, coeffs), tower.size)


def make_kernel_valued_f(f0: Poly, g: Poly, tower: FieldTower) -> Poly:
    """``L_G(f0(x))`` with ``G = (x^n-1)/g``, as one reduced polynomial."""
    G = cofactor(g, tower)
    F = tower.fqn
    acc, power = Poly(F), reduce_mod_xq_x(f0.lift(F), tower.size)
    for j, c in enumerate(G.coeffs):
        if j:
            power = poly_frobenius(power, tower)
        if c:
            acc = acc + power.scalar_mul(c)
    return reduce_mod_xq_x(acc, tower.size)


def check_pp_complementary(f: Poly, g: Poly, h: Poly, tower: FieldTower) -> bool:
    """PP test for ``f(L_g(x)) + L_h(x)`` when ``gcd(g, h) = 1`` and ``x^n - 1 | g h``."""
    g, h, F = g.lift(tower.fq), h.lift(tower.fq), tower.fqn
    if not _coprime(g, h):
        raise PreconditionFailed("gcd(g, h) != 1")
    if not ((g * h) % xn_minus_1(tower.fq, tower.n)).is_zero():
        raise PreconditionFailed("x^n - 1 does not divide g*h")
    image = image_set(g, tower)
    outs = {lin_eval_assoc(g, tower, f(z, F)) for z in image}
    return len(outs) == len(image)


# -- trace case -------------------------------------------------------------

def T_n(f: Poly, tower: FieldTower) -> Poly:
    """Coefficient-wise trace F_{q^n}[x] -> F_q[x]."""
    f = f.lift(tower.fqn)
    return Poly(tower.fq, [tower.trace(a) for a in f.coeffs])


def _fq_poly(k: Poly, tower: FieldTower, what: str = "k") -> Poly:
    try:
        return k.lift(tower.fq)
    except LevelMismatch:
        raise KNotUnitValued(f"{what} must have coefficients in F_q") from None


def trace_base_map(f: Poly, h: Poly, k: Poly, tower: FieldTower) -> Poly:
    """``Q(x) = T_n[f](x) + k(x) * h(1) * x`` over F_q."""
    Fq = tower.fq
    h, k = h.lift(Fq), _fq_poly(k, tower)
    return T_n(f, tower) + (k * Poly(Fq, [0, 1])).scalar_mul(h(1))


def _check_k_on_fq(k: Poly, tower: FieldTower) -> Poly:
    k = _fq_poly(k, tower)
    if not _is_unit_valued(k, tower.fq.elements(), tower):
        raise KNotUnitValued("k(F_q) is not contained in F_q^*")
    return k


def check_pp_trace(f: Poly, h: Poly, k: Poly, tower: FieldTower) -> Verdict:
    k = _check_k_on_fq(k, tower)
    h = h.lift(tower.fq)
    if not _coprime(h, trace_divisor(tower)):
        return Verdict(False, "gcd(h, (x^n-1)/(x-1)) != 1")
    if not _permutes_fq(trace_base_map(f, h, k, tower), tower):
        return Verdict(False, "Q is not a PP of F_q")
    return Verdict(True)


def trace_spec(f: Poly, h: Poly, k: Poly, tower: FieldTower) -> PPSpec:
    return PPSpec(f, trace_divisor(tower), h, k, tower)


def _invert_on_fq(Q: Poly, tower: FieldTower) -> Poly:
    Fq = tower.fq
    return interpolate([(Q(t), t) for t in Fq.elements()], Fq)


@dataclass(frozen=True)
class InverseSpec:
    """``P0(x) = F(t) + k(delta R(t))^{q-2} L_H(x)`` with ``t = delta^{-1} L_{g_a}(x)``.

    ``a = delta = 1`` is the trace case, where ``t = Tr(x)``.
    """

    F: Poly
    H: Poly
    R: Poly
    k: Poly
    case: str
    tower: FieldTower = field(compare=False)
    a: int = 1
    delta: int = 1

    def __call__(self, c: int) -> int:
        return evaluate_inverse(self, c)

    @cached_property
    def g(self) -> Poly:
        return variant_divisor(self.tower, self.a)

    def to_json(self) -> dict:
        t = self.tower
        return {
            "kind": "InverseSpec",
            "tower": t.to_json(),
            "case": self.case,
            "a": t.elem_to_json(t.elem(self.a, "Fq")),
            "delta": t.elem_to_json(t.elem(self.delta, "Fqn")),
            "F": poly_to_json(self.F, t),
            "H": poly_to_json(self.H, t),
            "R": poly_to_json(self.R, t),
            "k": poly_to_json(self.k, t),
        }

    @classmethod
    def from_json(cls, obj: dict) -> InverseSpec:
        t = FieldTower.from_json(obj["tower"])
        polys = {name: poly_from_json(obj[name], t) for name in "FHRk"}
        a = t.code(t.elem_from_json(obj["a"], "Fq"))
        delta = t.code(t.elem_from_json(obj["delta"], "Fqn"))
        return cls(polys["F"], polys["H"], polys["R"], polys["k"], obj["case"], t, a, delta)


def evaluate_inverse(inv: InverseSpec, c: int) -> int:
    t = inv.tower
    F = t.fqn
    s = F.mul(F.inv(inv.delta), lin_eval_assoc(inv.g, t, c))
    w = F.pow(inv.k(F.mul(inv.delta, inv.R(s, F)), F), t.q - 2)
    return F.add(inv.F(s, F), F.mul(w, lin_eval_assoc(inv.H, t, c)))


def invert_trace_pp(f: Poly, h: Poly, k: Poly, tower: FieldTower) -> InverseSpec:
    """Inverse of ``f(Tr(x)) + k(Tr(x)) L_h(x)``; raises :class:`NotAPP` if it is not a PP."""
    Fq, F, q, n = tower.fq, tower.fqn, tower.q, tower.n
    k = _check_k_on_fq(k, tower)
    f, h = f.lift(F), h.lift(Fq)
    verdict = check_pp_trace(f, h, k, tower)
    if not verdict:
        raise NotAPP(verdict.failed)
    R = _invert_on_fq(trace_base_map(f, h, k, tower), tower)

    def kinv(x):
        return F.pow(k(x, F), q - 2)

    if n % tower.p == 0:
        case = "p_divides_n"
        H = mod_inverse(h, xn_minus_1(Fq, n))

        def Fval(s):
            r = R(s)
            return F.neg(F.mul(kinv(r), lin_eval_assoc(H, tower, f(r))))
    else:
        case = "p_coprime_n"
        H = mod_inverse(h, trace_divisor(tower))
        scale = Fq.div(Fq.sub(1, Fq.mul(h(1), H(1))), Fq.scalar(n))

        def M(x):
            return F.add(F.neg(F.mul(kinv(x), lin_eval_assoc(H, tower, f(x, F)))),
                         F.mul(x, scale))

        def Fval(s):
            return M(R(s))

    Fpoly = interpolate([(s, Fval(s)) for s in Fq.elements()], F)
    return InverseSpec(Fpoly, H, R, k, case, tower)


def classify_fq_case(f: Poly, h: Poly, k: Poly, tower: FieldTower) -> tuple[str | None, bool]:
    """Case split for ``f, h, k`` all over F_q: returns (``"i"|"ii"|"iii"|None``, is_pp)."""
    Fq, n, p = tower.fq, tower.n, tower.p
    f = _fq_poly(f, tower, "f")
    h = h.lift(Fq)
    k = _check_k_on_fq(k, tower)
    x = Poly(Fq, [0, 1])
    d = poly_gcd(h, xn_minus_1(Fq, n)) if not h.is_zero() else xn_minus_1(Fq, n)
    if n % p == 0:
        if d.degree == 0:
            return "i", _permutes_fq(k * x, tower)
        return None, False
    if d == Poly(Fq, [Fq.neg(1), 1]):
        return "ii", _permutes_fq(f, tower)
    if d.degree == 0:
        return "iii", _permutes_fq(f.scalar_mul(Fq.scalar(n)) + (k * x).scalar_mul(h(1)), tower)
    return None, False


def check_cpp_trace(f: Poly, h: Poly, tower: FieldTower) -> Verdict:
    """CPP test for ``f(Tr(x)) + L_h(x)``."""
    Fq = tower.fq
    h = h.lift(Fq)
    if not _coprime(h * (h + Poly(Fq, [1])), trace_divisor(tower)):
        return Verdict(False, "gcd(h(h+1), (x^n-1)/(x-1)) != 1")
    Q = T_n(f, tower) + Poly(Fq, [0, h(1)])
    if not (_permutes_fq(Q, tower) and _permutes_fq(Q + Poly(Fq, [0, 1]), tower)):
        return Verdict(False, "Q is not a CPP of F_q")
    return Verdict(True)


# -- constructions ----------------------------------------------------------

def _thetas(tower: FieldTower, seed: int | None, thetas=None) -> list[int]:
    if thetas is not None:
        thetas = list(thetas)
        if len(thetas) != tower.q:
            raise ValueError(f"need {tower.q} theta values")
        return [tower.code(th) for th in thetas]
    if seed is None:
        return [0] * tower.q
    rng = random.Random(seed)
    return [rng.randrange(tower.size) for _ in range(tower.q)]


def solve_trace_system(targets, tower: FieldTower, thetas) -> list[int]:
    """``y_i`` with ``Tr(y_i) = targets[i]``: ``t_i * alpha / Tr(alpha) + theta_i^q - theta_i``."""
    F = tower.fqn
    alpha = tower.nonzero_trace_element()
    unit = F.div(alpha, tower.trace(alpha))
    return [F.add(F.mul(tc, unit), F.sub(tower.frobenius(th), th))
            for tc, th in zip(targets, thetas)]


@dataclass(frozen=True)
class BaseConstructInput:
    b: Poly
    h: Poly
    k: Poly
    tower: FieldTower
    sampler_seed: int | None = None
    thetas: tuple | None = None


def construct_from_base_pp(inp: BaseConstructInput) -> tuple[Poly, PPSpec]:
    """Lift a PP ``b`` of F_q to ``f(Tr(x)) + k(Tr(x)) L_h(x)`` permuting F_{q^n}."""
    t = inp.tower
    Fq, q = t.fq, t.q
    b = _fq_poly(inp.b, t, "b")
    if not _permutes_fq(b, t):
        raise BaseNotPP("b is not a permutation of F_q")
    h = inp.h.lift(Fq)
    if not _coprime(h, trace_divisor(t)):
        raise HNotCoprime("gcd(h, (x^n-1)/(x-1)) != 1")
    k = _check_k_on_fq(inp.k, t)
    target = reduce_mod_xq_x(b - (k * Poly(Fq, [0, 1])).scalar_mul(h(1)), q)
    ys = solve_trace_system([target[i] for i in range(q)], t, _thetas(t, inp.sampler_seed, inp.thetas))
    f = Poly(t.fqn, ys)
    return f, trace_spec(f, h, k, t)


def is_cpp_fq(b: Poly, tower: FieldTower) -> bool:
    return _permutes_fq(b, tower) and _permutes_fq(b + Poly(tower.fq, [0, 1]), tower)


def construct_cpp_from_base(b: Poly, h: Poly, tower: FieldTower, sampler_seed: int | None = None,
                            thetas=None) -> tuple[Poly, PPSpec]:
    """Lift a CPP ``b`` of F_q to a CPP ``f(Tr(x)) + L_h(x)`` of F_{q^n} (k = 1)."""
    Fq = tower.fq
    b = _fq_poly(b, tower, "b")
    if not is_cpp_fq(b, tower):
        raise BaseNotCPP("b is not a complete permutation of F_q")
    h = h.lift(Fq)
    if not _coprime(h * (h + Poly(Fq, [1])), trace_divisor(tower)):
        raise HConditionFailed("gcd(h(h+1), (x^n-1)/(x-1)) != 1")
    return construct_from_base_pp(
        BaseConstructInput(b, h, Poly(Fq, [1]), tower, sampler_seed, thetas))


@dataclass(frozen=True)
class Level:
    tower: FieldTower
    base: Poly
    spec: PPSpec


def iterate_construction(b: Poly, levels: int, params, tower: FieldTower) -> list[Level]:
    """Lift ``b`` through F_q, F_{q^n}, F_{q^{n^2}}, ...

    ``params`` holds one ``(h, k, seed)`` per level; ``h`` and ``k`` are
    coefficient lists of codes over that level's base field. Each level's
    PP is expanded mod ``x^Q - x`` and becomes the next base.
    """
    params = list(params)
    if len(params) != levels:
        raise ValueError("need one (h, k, seed) triple per level")
    out = []
    t = tower
    for i, (h, k, seed) in enumerate(params):
        if i:
            t = extend_tower(t, tower.n)
            b = pp_polynomial(out[-1].spec).lift(t.fq)
        b = b.lift(t.fq)
        h = h if isinstance(h, Poly) else Poly(t.fq, h)
        k = k if isinstance(k, Poly) else Poly(t.fq, k)
        _, spec = construct_from_base_pp(BaseConstructInput(b, h.lift(t.fq), k.lift(t.fq), t, seed))
        out.append(Level(t, b, spec))
    return out


def trace_pp_explicit(b: Poly, h: Poly, thetas, tower: FieldTower) -> PPSpec:
    """``L_h - (h(1)/n) Tr + sum (b_i/n) Tr^i + sum (theta_i^q - theta_i) Tr^i`` (p does not divide n)."""
    Fq, F, n = tower.fq, tower.fqn, tower.n
    if n % tower.p == 0:
        raise PreconditionFailed("requires p not dividing n")
    h, b = h.lift(Fq), _fq_poly(b, tower, "b")
    if not _coprime(h, trace_divisor(tower)):
        raise HNotCoprime("gcd(h, (x^n-1)/(x-1)) != 1")
    inv_n = Fq.inv(Fq.scalar(n))
    th = _thetas(tower, None, thetas)
    size = max(b.degree + 1, 2, tower.q)
    coeffs = [0] * size
    for i in range(size):
        c = Fq.mul(b[i], inv_n)
        if i == 1:
            c = Fq.sub(c, Fq.mul(h(1), inv_n))
        if i < len(th):
            c = F.add(c, F.sub(tower.frobenius(th[i]), th[i]))
        coeffs[i] = c
    return trace_spec(Poly(F, coeffs), h, Poly(Fq, [1]), tower)


def trace_pp_monomial(m: int, h: Poly, alpha: int, beta: int, thetas, tower: FieldTower) -> PPSpec:
    """``L_h + alpha Tr + beta Tr^m + sum (theta_i^q - theta_i) Tr^i`` from the monomial PP ``x^m``."""
    Fq, F, q = tower.fq, tower.fqn, tower.q
    if not (m == 1 or (1 < m < q - 1 and math.gcd(m, q - 1) == 1)):
        raise PreconditionFailed("need m = 1, or 1 < m < q - 1 with gcd(m, q - 1) = 1")
    h = h.lift(Fq)
    if not _coprime(h, trace_divisor(tower)):
        raise HNotCoprime("gcd(h, (x^n-1)/(x-1)) != 1")
    if m == 1 and tower.trace(alpha) == Fq.neg(h(1)):
        raise PreconditionFailed("m = 1 needs Tr(alpha) != -h(1)")
    if m > 1 and (tower.trace(alpha) != Fq.neg(h(1)) or tower.trace(beta) == 0):
        raise PreconditionFailed("m > 1 needs Tr(alpha) = -h(1) and Tr(beta) != 0")
    th = _thetas(tower, None, thetas)
    coeffs = [F.sub(tower.frobenius(x), x) for x in th] + [0] * max(0, m + 1 - q)
    coeffs[1] = F.add(coeffs[1], alpha)
    if m > 1:
        coeffs[m] = F.add(coeffs[m], beta)
    return trace_spec(Poly(F, coeffs), h, Poly(Fq, [1]), tower)


# -- divisor (x^n-1)/(x-a) --------------------------------------------------

def _check_a(a: int, tower: FieldTower) -> int:
    try:
        a = tower.code(a, "Fq")
    except LevelMismatch:
        raise InvalidA(f"{a} is not an element of F_q") from None
    if a == 0 or tower.fq.pow(a, tower.n) != 1:
        raise InvalidA(f"a = {a} does not satisfy a^n = 1")
    return a


def _check_delta(a: int, delta: int, tower: FieldTower) -> int:
    F = tower.fqn
    if delta == 0 or tower.frobenius(delta) != F.mul(a, delta):
        raise InvalidDelta("delta must be nonzero with delta^q = a delta")
    return delta


def T_n_a(f: Poly, a: int, delta: int, tower: FieldTower) -> Poly:
    """``a^{-1} sum_i (sum_j a^{(i-1)j} f_i^{q^j}) x^i`` over F_{q^n}."""
    a = _check_a(a, tower)
    _check_delta(a, delta, tower)
    F = tower.fqn
    a_inv = F.inv(a)
    out = []
    for i, c in enumerate(f.lift(F).coeffs):
        acc, cj = 0, c
        for j in range(tower.n):
            acc = F.add(acc, F.mul(F.pow(a, ((i - 1) * j) % (tower.q - 1)), cj))
            cj = tower.frobenius(cj)
        out.append(F.mul(a_inv, acc))
    return Poly(F, out)


def variant_base_map(f: Poly, a: int, h: Poly, k: Poly, tower: FieldTower,
                     delta: int | None = None) -> Poly:
    """``(1/a) sum_i Tr(delta^{i-1} f_i) x^i + k(delta x) h(a) x``, reduced mod ``x^q - x``."""
    Fq, F, q = tower.fq, tower.fqn, tower.q
    a = _check_a(a, tower)
    delta = tower.solve_delta(a) if delta is None else _check_delta(a, delta, tower)
    h = h.lift(Fq)
    a_inv = Fq.inv(a)
    d_inv = F.inv(delta)
    lead = [Fq.mul(a_inv, tower.trace(F.mul(F.pow(delta, i - 1) if i else d_inv, c)))
            for i, c in enumerate(f.lift(F).coeffs)]
    kq = k.lift(F) if F.contains(k.field) else k
    kd = Poly(F, [0] + [F.mul(c, F.pow(delta, i)) for i, c in enumerate(kq.coeffs)])
    tail = reduce_mod_xq_x(kd.scalar_mul(h(a)), q)
    if any(c >= q for c in tail.coeffs):
        raise KNotUnitValued("k(delta x) is not F_q-valued on F_q")
    return reduce_mod_xq_x(Poly(Fq, lead), q) + tail.lift(Fq)


def _check_k_on_line(k: Poly, delta: int, tower: FieldTower) -> Poly:
    F = tower.fqn
    if not F.contains(k.field):
        k = k.lift(F)
    if not _is_unit_valued(k, [F.mul(delta, s) for s in tower.fq.elements()], tower):
        raise KNotUnitValued("k(delta F_q) is not contained in F_q^*")
    return k


def check_pp_variant(f: Poly, a: int, h: Poly, k: Poly, tower: FieldTower) -> Verdict:
    a = _check_a(a, tower)
    delta = tower.solve_delta(a)
    k = _check_k_on_line(k, delta, tower)
    h = h.lift(tower.fq)
    if not _coprime(h, variant_divisor(tower, a)):
        return Verdict(False, "gcd(h, (x^n-1)/(x-a)) != 1")
    if not _permutes_fq(variant_base_map(f, a, h, k, tower, delta), tower):
        return Verdict(False, "reduced map is not a PP of F_q")
    return Verdict(True)


def variant_spec(f: Poly, a: int, h: Poly, k: Poly, tower: FieldTower) -> PPSpec:
    return PPSpec(f, variant_divisor(tower, a), h, k, tower)


def invert_variant_pp(f: Poly, a: int, h: Poly, k: Poly, tower: FieldTower) -> InverseSpec:
    Fq, F, q, n = tower.fq, tower.fqn, tower.q, tower.n
    a = _check_a(a, tower)
    delta = tower.solve_delta(a)
    k = _check_k_on_line(k, delta, tower)
    f, h = f.lift(F), h.lift(Fq)
    verdict = check_pp_variant(f, a, h, k, tower)
    if not verdict:
        raise NotAPP(verdict.failed)
    R = _invert_on_fq(variant_base_map(f, a, h, k, tower, delta), tower)

    def kinv(x):
        return F.pow(k(x, F), q - 2)

    if n % tower.p == 0:
        case = "p_divides_n"
        H = mod_inverse(h, xn_minus_1(Fq, n))

        def Fval(s):
            e = F.mul(delta, R(s))
            return F.neg(F.mul(kinv(e), lin_eval_assoc(H, tower, f(e))))
    else:
        case = "p_coprime_n"
        H = mod_inverse(h, variant_divisor(tower, a))
        scale = Fq.div(Fq.mul(a, Fq.sub(1, Fq.mul(h(a), H(a)))), Fq.scalar(n))

        def Fval(s):
            e = F.mul(delta, R(s))
            return F.add(F.neg(F.mul(kinv(e), lin_eval_assoc(H, tower, f(e)))), F.mul(e, scale))

    Fpoly = interpolate([(s, Fval(s)) for s in Fq.elements()], F)
    return InverseSpec(Fpoly, H, R, k, case, tower, a, delta)


def construct_variant_from_base_pp(b: Poly, a: int, h: Poly, k: Poly, tower: FieldTower,
                                   sampler_seed: int | None = None,
                                   thetas=None) -> tuple[Poly, PPSpec]:
    """Solve ``Tr(delta^{i-1} y_i) = c_i`` so that the reduced map equals ``b`` mod ``x^q - x``."""
    Fq, F, q = tower.fq, tower.fqn, tower.q
    a = _check_a(a, tower)
    b = _fq_poly(b, tower, "b")
    if not _permutes_fq(b, tower):
        raise BaseNotPP("b is not a permutation of F_q")
    h = h.lift(Fq)
    if not _coprime(h, variant_divisor(tower, a)):
        raise HNotCoprime("gcd(h, (x^n-1)/(x-a)) != 1")
    delta = tower.solve_delta(a)
    k = _check_k_on_line(k, delta, tower)
    kd = Poly(F, [0] + [F.mul(c, F.pow(delta, i)) for i, c in enumerate(k.coeffs)])
    target = reduce_mod_xq_x((b.lift(F) - kd.scalar_mul(h(a))).scalar_mul(a), q)
    assert all(c < q for c in target.coeffs)
    base = solve_trace_system([target[i] for i in range(q)], tower, _thetas(tower, sampler_seed, thetas))
    d_inv = F.inv(delta)
    ys = [F.mul(F.pow(d_inv, i - 1) if i else delta, y) for i, y in enumerate(base)]
    f = Poly(F, ys)
    return f, variant_spec(f, a, h, k, tower)
