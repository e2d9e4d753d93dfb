"""Count every f with deg f < q solving the trace congruence, and check each is a PP.

Exhaustive over F_{q^n}^q, so keep (q^n)^q small:

    python3 scripts/count_constructions.py --p 2 --n 3 --b 0,1 --h 0,1
"""

import argparse
import itertools
from dataclasses import dataclass

from linpp.field_tower import build_tower
from linpp.oracle import is_permutation_bruteforce
from linpp.polyring import Poly, reduce_mod_xq_x
from linpp.pp_engine import pp_polynomial, trace_spec


@dataclass
class CountConfig:
    p: int
    k: int
    n: int
    b: tuple
    h: tuple
    kpoly: tuple = (1,)


def count(cfg: CountConfig) -> dict:
    t = build_tower(cfg.p, cfg.k, cfg.n)
    Fq, q = t.fq, t.q
    b, h, k = Poly(Fq, cfg.b), Poly(Fq, cfg.h), Poly(Fq, cfg.kpoly)
    target = reduce_mod_xq_x(b - (k * Poly(Fq, [0, 1])).scalar_mul(h(1)), q)
    fibers = [[y for y in t.fqn.elements() if t.trace(y) == target[i]] for i in range(q)]
    sols = [Poly(t.fqn, ys) for ys in itertools.product(*fibers)]
    specs = [trace_spec(f, h, k, t) for f in sols]
    return {
        "q": q,
        "n": cfg.n,
        "solutions": len(sols),
        "expected": q ** ((cfg.n - 1) * q),
        "distinct_mod_x^Q-x": len({pp_polynomial(s).coeffs for s in specs}),
        "all_pp": all(is_permutation_bruteforce(s) for s in specs),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--b", default="0,1")
    ap.add_argument("--h", default="0,1")
    ap.add_argument("--kpoly", default="1")
    a = ap.parse_args()

    def codes(s):
        return tuple(int(c) for c in s.split(","))

    print(count(CountConfig(a.p, a.k, a.n, codes(a.b), codes(a.h), codes(a.kpoly))))


if __name__ == "__main__":
    main()
