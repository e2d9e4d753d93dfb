"""Exhaustive ground truth and criterion-vs-oracle sweeps.

Evaluation here deliberately avoids the engine's shortcuts: q-powers are
taken with plain exponentiation and every element is visited.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field

from .cyclo_factor import divisors, factor_xn_minus_1, trace_divisor, variant_divisor
from .errors import NotAPP, SamplingFailed
from .field_tower import FieldTower, build_tower
from .linearized import image_set
from .pp_engine import (
    InverseSpec,
    PPSpec,
    check_cpp_trace,
    check_pp_general,
    check_pp_trace,
    check_pp_variant,
    invert_trace_pp,
    invert_variant_pp,
)
from .polyring import Poly, interpolate


def _lin_direct(assoc: Poly, tower: FieldTower, c: int) -> int:
    F, q = tower.fqn, tower.q
    acc = 0
    for i, a in enumerate(assoc.coeffs):
        acc = F.add(acc, F.mul(a, F.pow(c, q ** i)))
    return acc


def spec_value(spec: PPSpec, c: int) -> int:
    t = spec.tower
    F = t.fqn
    z = _lin_direct(spec.g, t, c)
    return F.add(spec.f(z, F), F.mul(spec.k(z, F), _lin_direct(spec.h, t, c)))


def inverse_value(inv: InverseSpec, c: int) -> int:
    t = inv.tower
    F = t.fqn
    s = F.mul(F.inv(inv.delta), _lin_direct(inv.g, t, c))
    w = F.pow(inv.k(F.mul(inv.delta, inv.R(s, F)), F), t.q - 2)
    return F.add(inv.F(s, F), F.mul(w, _lin_direct(inv.H, t, c)))


def values(source, field=None) -> list[int]:
    """Value table of a PPSpec, InverseSpec, or Poly over its natural field."""
    if isinstance(source, PPSpec):
        return [spec_value(source, c) for c in source.tower.fqn.elements()]
    if isinstance(source, InverseSpec):
        return [inverse_value(source, c) for c in source.tower.fqn.elements()]
    F = field or source.field
    return [source(c, F) for c in F.elements()]


def _field_of(source, field=None):
    if isinstance(source, (PPSpec, InverseSpec)):
        return source.tower.fqn
    return field or source.field


def is_permutation_bruteforce(source, field=None) -> bool:
    vals = values(source, field)
    return len(set(vals)) == len(vals)


def is_cpp_bruteforce(source, field=None) -> bool:
    F = _field_of(source, field)
    vals = values(source, field)
    if len(set(vals)) != len(vals):
        return False
    return len({F.add(v, c) for c, v in zip(F.elements(), vals)}) == len(vals)


def verify_inverse(P, P0) -> bool:
    """``P0(P(c)) == c`` and ``P(P0(c)) == c`` for every ``c``."""
    pv, iv = values(P), values(P0)
    return all(iv[pv[c]] == c and pv[iv[c]] == c for c in range(len(pv)))


def invert_base_pp(Q: Poly, field=None) -> Poly:
    F = field or Q.field
    vals = [Q(c, F) for c in F.elements()]
    if len(set(vals)) != F.size:
        raise NotAPP("Q is not a permutation")
    return interpolate(zip(vals, F.elements()), F)


# -- sweeps -----------------------------------------------------------------

@dataclass
class SweepConfig:
    p: int
    k: int
    n: int
    trials: int
    seed: int = 0
    mode: str = "general"          # general | trace | variant | cpp
    a: int = 1                     # code of a in F_q, variant mode only
    deg_f: int | None = None       # default q
    deg_h: int | None = None       # default n
    deg_k: int = 2
    check_inverses: bool = True


@dataclass
class SweepReport:
    trials: int
    agreements: int
    disagreements: list = field(default_factory=list)
    seed: int = 0
    mode: str = "general"
    pp_found: int = 0
    inverse_checks: dict = field(default_factory=dict)
    inverse_failures: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return asdict(self)


def _random_poly(rng: random.Random, field, max_deg: int) -> Poly:
    d = rng.randint(0, max_deg)
    return Poly(field, [rng.randrange(field.size) for _ in range(d + 1)])


def _unit_valued(k: Poly, points, tower: FieldTower) -> bool:
    F, q = tower.fqn, tower.q
    return all(0 < k(z, F) < q for z in points)


def _sample_k(rng, tower: FieldTower, points, max_deg: int, twist: int | None = None) -> Poly:
    """Rejection-sample ``k`` with ``k(points)`` inside F_q^*.

    With ``twist = delta`` an F_q-polynomial ``u`` is sampled against F_q and
    turned into ``k(x) = u(x / delta)`` over F_{q^n}.
    """
    Fq, F = tower.fq, tower.fqn
    for _ in range(1000):
        u = _random_poly(rng, Fq, max_deg)
        if twist is None:
            if _unit_valued(u, points, tower):
                return u
        elif _unit_valued(u, Fq.elements(), tower):
            d_inv = F.inv(twist)
            return Poly(F, [F.mul(c, F.pow(d_inv, i)) for i, c in enumerate(u.coeffs)])
    raise SamplingFailed("could not sample a unit-valued k in 1000 tries")


def agreement_sweep(config: SweepConfig) -> SweepReport:
    """Random specs, criterion verdict vs exhaustive oracle verdict."""
    start = time.perf_counter()
    tower = build_tower(config.p, config.k, config.n)
    rng = random.Random(config.seed)
    Fq, F = tower.fq, tower.fqn
    deg_f = tower.q if config.deg_f is None else config.deg_f
    deg_h = tower.n if config.deg_h is None else config.deg_h
    report = SweepReport(config.trials, 0, seed=config.seed, mode=config.mode)
    divs = divisors(factor_xn_minus_1(tower)) if config.mode == "general" else None
    delta = tower.solve_delta(config.a) if config.mode == "variant" else None

    for _ in range(config.trials):
        f = _random_poly(rng, F, deg_f)
        h = _random_poly(rng, Fq, deg_h)
        inverse = None
        if config.mode == "general":
            g = rng.choice(divs)
            k = _sample_k(rng, tower, image_set(g, tower), config.deg_k)
            spec = PPSpec(f, g, h, k, tower)
            claimed = bool(check_pp_general(spec))
            truth = is_permutation_bruteforce(spec)
        elif config.mode == "trace":
            k = _sample_k(rng, tower, Fq.elements(), config.deg_k)
            spec = PPSpec(f, trace_divisor(tower), h, k, tower)
            claimed = bool(check_pp_trace(f, h, k, tower))
            truth = is_permutation_bruteforce(spec)
            if claimed and config.check_inverses:
                inverse = invert_trace_pp(f, h, k, tower)
        elif config.mode == "variant":
            k = _sample_k(rng, tower, None, config.deg_k, twist=delta)
            spec = PPSpec(f, variant_divisor(tower, config.a), h, k, tower)
            claimed = bool(check_pp_variant(f, config.a, h, k, tower))
            truth = is_permutation_bruteforce(spec)
            if claimed and config.check_inverses:
                inverse = invert_variant_pp(f, config.a, h, k, tower)
        elif config.mode == "cpp":
            spec = PPSpec(f, trace_divisor(tower), h, Poly(Fq, [1]), tower)
            claimed = bool(check_cpp_trace(f, h, tower))
            truth = is_cpp_bruteforce(spec)
        else:
            raise ValueError(f"unknown sweep mode {config.mode!r}")

        ok = claimed == truth
        report.pp_found += truth
        if inverse is not None:
            report.inverse_checks[inverse.case] = report.inverse_checks.get(inverse.case, 0) + 1
            if not verify_inverse(spec, inverse):
                report.inverse_failures += 1
                ok = False
        if ok:
            report.agreements += 1
        else:
            report.disagreements.append({"spec": spec.to_json(), "criterion": claimed,
                                         "oracle": truth})
    report.elapsed = time.perf_counter() - start
    return report
