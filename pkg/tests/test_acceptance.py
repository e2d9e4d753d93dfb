"""Acceptance criteria, one function each.

Every ``criterion_N`` returns ``(ok, detail)``; the wrapper times it against
its budget. Run under pytest (a summary line per criterion is printed at the
end of the session) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import json
import os
import subprocess
import sys
import tempfile
import time

import pytest

from linpp.cyclo_factor import factor_xn_minus_1
from linpp.field_tower import build_tower
from linpp.linearized import kernel, lin_table, permutes_kernel
from linpp.oracle import (
    SweepConfig,
    agreement_sweep,
    is_cpp_bruteforce,
    is_permutation_bruteforce,
    values,
)
from linpp.polyring import Poly, poly_gcd, xn_minus_1
from linpp.pp_engine import (
    BaseConstructInput,
    check_pp_trace,
    check_pp_variant,
    construct_cpp_from_base,
    construct_from_base_pp,
    construct_variant_from_base_pp,
    invert_trace_pp,
    invert_variant_pp,
    is_cpp_fq,
    iterate_construction,
    pp_polynomial,
    trace_spec,
)
from linpp.errors import HConditionFailed, HNotCoprime

# (p, k, n) for (q, n) in {(2,2),(2,3),(2,4),(3,2),(3,3),(4,2),(4,3),(5,2)}
GRID = [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (3, 1, 3), (2, 2, 2), (2, 2, 3), (5, 1, 2)]

RESULTS: dict[int, str] = {}


def all_polys(field, max_deg, monic=False):
    if monic:
        for d in range(max_deg + 1):
            for tail in itertools.product(range(field.size), repeat=d):
                yield Poly(field, tail + (1,))
    else:
        for coeffs in itertools.product(range(field.size), repeat=max_deg + 1):
            yield Poly(field, coeffs)


# -- 1 ------------------------------------------------------------------------

def criterion_1():
    checked = 0
    for p, k, n in GRID:
        t = build_tower(p, k, n)
        F, Fq = t.fqn, t.fq
        m = xn_minus_1(Fq, n)
        fs = list(all_polys(Fq, n, monic=True))
        tables = {f.coeffs: lin_table(f, t) for f in fs}
        kers = {}
        for f in fs:
            ker = kernel(f, t)
            if len(ker) != t.q ** poly_gcd(f, m).degree:
                return False, f"|kernel({f})| wrong over q={t.q}, n={n}"
            kers[f.coeffs] = set(ker)
        for f, g in itertools.product(fs, repeat=2):
            d = poly_gcd(f, g)
            if set(kernel(d, t)) != kers[f.coeffs] & kers[g.coeffs]:
                return False, f"kernel intersection law fails for {f}, {g}"
            tf, tg = tables[f.coeffs], tables[g.coeffs]
            if lin_table(f + g, t) != [F.add(a, b) for a, b in zip(tf, tg)]:
                return False, f"additivity fails for {f}, {g}"
            if lin_table(f * g, t) != [tf[c] for c in tg]:
                return False, f"composition fails for {f}, {g}"
            checked += 1
    return True, f"{checked} pairs"


# -- 2 ------------------------------------------------------------------------

def criterion_2():
    checked = 0
    for p, k, n in GRID:
        t = build_tower(p, k, n)
        ps = list(all_polys(t.fq, n))
        tables = {g.coeffs: lin_table(g, t) for g in ps}
        for f in ps:
            if f.is_zero():
                continue
            ker = kernel(f, t)
            for g in ps:
                tg = tables[g.coeffs]
                truth = len({tg[c] for c in ker}) == len(ker)
                if permutes_kernel(f, g, t) != truth:
                    return False, f"disagreement at q={t.q}, n={n}: f={f}, g={g}"
                checked += 1
    return True, f"{checked} pairs, 0 disagreements"


# -- 3 ------------------------------------------------------------------------

def criterion_3():
    for i, (p, k, n) in enumerate(GRID):
        r = agreement_sweep(SweepConfig(p, k, n, 1000, seed=1000 + i, mode="general"))
        if r.disagreements:
            return False, f"{len(r.disagreements)} disagreements at (p,k,n)={(p, k, n)}"
    return True, f"{1000 * len(GRID)} specs agree"


# -- 4 ------------------------------------------------------------------------

TRACE_TOWERS = [(2, 1, 2), (3, 1, 3), (3, 1, 2), (5, 1, 2), (2, 2, 3)]


def criterion_4():
    counts = {"p_divides_n": 0, "p_coprime_n": 0}
    for i, (p, k, n) in enumerate(TRACE_TOWERS):
        r = agreement_sweep(SweepConfig(p, k, n, 200, seed=400 + i, mode="trace"))
        if r.disagreements or r.inverse_failures:
            return False, f"failure at (p,k,n)={(p, k, n)}"
        for case, c in r.inverse_checks.items():
            counts[case] += c
    ok = min(counts.values()) >= 50
    return ok, f"inverses verified per branch: {counts}"


# -- 5 ------------------------------------------------------------------------

def criterion_5():
    details = []
    for p, k, n in [(2, 1, 2), (2, 1, 3)]:
        t = build_tower(p, k, n)
        Fq, q = t.fq, t.q
        b, h, kk = Poly(Fq, [0, 1]), Poly(Fq, [0, 1]), Poly(Fq, [1])
        # deg f < q, so the congruence mod x^q - x is coefficient equality
        target = b - (kk * Poly(Fq, [0, 1])).scalar_mul(h(1))
        sols = []
        for ys in itertools.product(t.fqn.elements(), repeat=q):
            f = Poly(t.fqn, ys)
            if all(t.trace(y) == target[i] for i, y in enumerate(ys)):
                sols.append(f)
        expected = q ** ((n - 1) * q)
        if len(sols) != expected:
            return False, f"q={q}, n={n}: {len(sols)} solutions, expected {expected}"
        specs = [trace_spec(f, h, kk, t) for f in sols]
        reduced = {pp_polynomial(s).coeffs for s in specs}
        if len(reduced) != expected:
            return False, f"q={q}, n={n}: solutions collide mod x^(q^n) - x"
        if not all(is_permutation_bruteforce(s) for s in specs):
            return False, f"q={q}, n={n}: a solution is not a PP"
        details.append(f"n={n}: {len(sols)}")
    return True, "solutions " + ", ".join(details)


# -- 6 ------------------------------------------------------------------------

CPP_TOWERS = [(3, 1, 2), (5, 1, 2), (2, 2, 3)]


def criterion_6():
    built = 0
    for i, (p, k, n) in enumerate(CPP_TOWERS):
        r = agreement_sweep(SweepConfig(p, k, n, 200, seed=600 + i, mode="cpp"))
        if r.disagreements:
            return False, f"{len(r.disagreements)} CPP disagreements at (p,k,n)={(p, k, n)}"
        t = build_tower(p, k, n)
        cpps = [b for b in all_polys(t.fq, 1) if is_cpp_fq(b, t)]
        for b, h in itertools.product(cpps, all_polys(t.fq, min(n - 1, 1))):
            for seed in (None, 1, 2):
                try:
                    _, spec = construct_cpp_from_base(b, h, t, seed)
                except HConditionFailed:
                    break
                if not is_cpp_bruteforce(spec):
                    return False, f"constructed spec fails CPP oracle: b={b}, h={h}"
                built += 1
    return built > 0, f"600 verdicts agree, {built} constructions are CPPs"


# -- 7 ------------------------------------------------------------------------

VARIANT_CASES = [(3, 1, 2, 2), (2, 2, 3, 2), (5, 1, 2, 4)]


def criterion_7():
    inverses = 0
    for i, (p, k, n, a) in enumerate(VARIANT_CASES):
        t = build_tower(p, k, n)
        F = t.fqn
        d = t.solve_delta(a)
        if d == 0 or t.frobenius(d) != F.mul(a, d):
            return False, f"delta postcondition fails for a={a}"
        r = agreement_sweep(SweepConfig(p, k, n, 200, seed=700 + i, mode="variant", a=a))
        if r.disagreements or r.inverse_failures:
            return False, f"variant failure at (p,k,n,a)={(p, k, n, a)}"
        inverses += sum(r.inverse_checks.values())
        # a = 1 against the trace case, function for function
        one = Poly(t.fq, [1])
        for f in itertools.islice(all_polys(F, 1), 0, None, max(1, t.size // 8)):
            for h in all_polys(t.fq, 1):
                tv, vv = check_pp_trace(f, h, one, t), check_pp_variant(f, 1, h, one, t)
                if bool(tv) != bool(vv):
                    return False, "a = 1 verdict differs from trace case"
                if tv and values(invert_trace_pp(f, h, one, t)) != values(
                        invert_variant_pp(f, 1, h, one, t)):
                    return False, "a = 1 inverse differs from trace case"
        b = Poly(t.fq, [1, 1])
        for h in all_polys(t.fq, 1):
            try:
                _, s1 = construct_from_base_pp(BaseConstructInput(b, h, one, t, 5))
            except HNotCoprime:
                continue
            _, s2 = construct_variant_from_base_pp(b, 1, h, one, t, 5)
            if values(s1) != values(s2):
                return False, "a = 1 construction differs from trace case"
    return True, f"600 verdicts agree, {inverses} variant inverses round-trip"


# -- 8 ------------------------------------------------------------------------

def has_proper_factor(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg f // 2."""
    for d in range(1, f.degree // 2 + 1):
        for g in all_polys(f.field, d, monic=True):
            if g.degree == d and (f % g).is_zero():
                return True
    return False


def criterion_8():
    for p, k, n in GRID:
        t = build_tower(p, k, n)
        fs = factor_xn_minus_1(t)
        if fs.product() != xn_minus_1(t.fq, n):
            return False, f"product mismatch at q={t.q}, n={n}"
        if any(has_proper_factor(f) for f, _ in fs.factors):
            return False, f"reducible factor at q={t.q}, n={n}"
        if fs.is_squarefree() != (n % p != 0):
            return False, f"squarefree flag wrong at q={t.q}, n={n}"
    return True, f"{len(GRID)} factorizations"


# -- 9 ------------------------------------------------------------------------

def criterion_9():
    sizes = []
    for p, k, n in [(2, 1, 2), (3, 1, 2)]:
        t = build_tower(p, k, n)
        levels = iterate_construction(Poly(t.fq, [0, 1]), 2, [([0, 1], [1], 1), ([0, 1], [1], 2)], t)
        for lv in levels:
            if not is_permutation_bruteforce(lv.spec):
                return False, f"level over F_{lv.tower.size} is not a PP"
        sizes.append("->".join(f"F_{lv.tower.size}" for lv in levels))
    return True, ", ".join(sizes)


# -- 10 -----------------------------------------------------------------------

CLI_CASES = [
    ("2", "1", "2", "0,1", "0,1", "7"),
    ("3", "1", "2", "1,2", "0,1", "11"),
    ("2", "2", "3", "0,1", "1", "3"),
]


def cli(*argv, env_seed="0"):
    env = dict(os.environ, PYTHONHASHSEED=env_seed)
    return subprocess.run([sys.executable, "-m", "linpp", *argv], capture_output=True, env=env)


def criterion_10():
    with tempfile.TemporaryDirectory() as tmp:
        for i, (p, k, n, b, h, seed) in enumerate(CLI_CASES):
            base = ["--p", p, "--k", k, "--n", n]
            spec = os.path.join(tmp, f"spec{i}.json")
            inv = os.path.join(tmp, f"inv{i}.json")
            argv = ["construct", *base, "--b", b, "--h", h, "--kpoly", "1", "--seed", seed]
            first, second = cli(*argv, env_seed="1"), cli(*argv, env_seed="2")
            if first.returncode or first.stdout != second.stdout:
                return False, f"construct not deterministic for case {i}"
            with open(spec, "wb") as fh:
                fh.write(first.stdout)
            if cli("verify", "--spec", spec).returncode:
                return False, f"verify rejects constructed spec {i}"
            r1, r2 = cli("invert", "--spec", spec, env_seed="3"), cli("invert", "--spec", spec)
            if r1.returncode or r1.stdout != r2.stdout:
                return False, f"invert not deterministic for case {i}"
            with open(inv, "wb") as fh:
                fh.write(r1.stdout)
            tab = cli("table", "--spec", spec, "--then", inv)
            size = (int(p) ** int(k)) ** int(n)
            if tab.returncode or json.loads(tab.stdout) != list(range(size)):
                return False, f"pipeline does not close to identity for case {i}"
        sw = ["sweep", "--p", "3", "--n", "2", "--mode", "trace", "--trials", "30", "--seed", "4"]
        if cli(*sw, env_seed="5").stdout != cli(*sw, env_seed="6").stdout:
            return False, "sweep not deterministic"
    return True, f"{len(CLI_CASES)} pipelines close to identity"


# -- harness ------------------------------------------------------------------

CRITERIA = [
    (1, "kernel size, intersection, additivity, composition", criterion_1, 10),
    (2, "gcd kernel-permutation test vs exhaustive", criterion_2, 30),
    (3, "general criterion vs oracle sweep", criterion_3, 120),
    (4, "trace criterion and inverses", criterion_4, 120),
    (5, "solution count of the trace congruence", criterion_5, 10),
    (6, "complete permutation criterion and construction", criterion_6, 60),
    (7, "(x^n-1)/(x-a) criterion, delta, inverses, a=1", criterion_7, 120),
    (8, "factorization of x^n-1", criterion_8, 5),
    (9, "two-level iteration", criterion_9, 10),
    (10, "CLI determinism and pipeline", criterion_10, 10),
]


def evaluate(number, label, fn, budget):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not mask: the line says FAIL
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        ok, detail = False, f"{detail}; over budget"
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} [{elapsed:6.2f}s / {budget}s] {label}: {detail}"
    RESULTS[number] = line
    return ok, line


@pytest.mark.parametrize("number,label,fn,budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, label, fn, budget):
    ok, line = evaluate(number, label, fn, budget)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failures = 0
    for entry in CRITERIA:
        ok, line = evaluate(*entry)
        print(line, flush=True)
        failures += not ok
    sys.exit(1 if failures else 0)
