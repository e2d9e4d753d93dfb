"""Lift a base permutation through F_q, F_{q^n}, F_{q^{n^2}} and verify each level.

    python3 scripts/iterate_tower.py --p 3 --n 2 --levels 2
"""

import argparse
import time
from dataclasses import dataclass

from linpp.field_tower import build_tower, enumeration_bound
from linpp.oracle import is_permutation_bruteforce
from linpp.polyring import Poly
from linpp.pp_engine import iterate_construction


@dataclass
class IterConfig:
    p: int = 2
    k: int = 1
    n: int = 2
    levels: int = 2
    seed: int = 0


def run(cfg: IterConfig):
    t = build_tower(cfg.p, cfg.k, cfg.n)
    params = [([0, 1], [1], cfg.seed + i) for i in range(cfg.levels)]
    for lv in iterate_construction(Poly(t.fq, [0, 1]), cfg.levels, params, t):
        start = time.perf_counter()
        ok = is_permutation_bruteforce(lv.spec) if lv.tower.size <= enumeration_bound() else None
        print(f"F_{lv.tower.size}: deg f = {lv.spec.f.degree}, base degree {lv.base.degree}, "
              f"oracle {ok} ({time.perf_counter() - start:.2f}s)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(IterConfig()).items():
        ap.add_argument(f"--{name}", type=int, default=default)
    run(IterConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
