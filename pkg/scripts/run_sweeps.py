"""Criterion-vs-oracle sweeps over a grid of towers.

    python3 scripts/run_sweeps.py --trials 1000 --out sweeps.json
"""

import argparse
import json
from dataclasses import asdict, dataclass, field

from linpp.oracle import SweepConfig, agreement_sweep

GRID = [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (3, 1, 3), (2, 2, 2), (2, 2, 3), (5, 1, 2)]
VARIANTS = [(3, 1, 2, 2), (2, 2, 3, 2), (5, 1, 2, 4)]


@dataclass
class Experiment:
    trials: int = 200
    seed: int = 0
    modes: list = field(default_factory=lambda: ["general", "trace", "cpp", "variant"])


def run(exp: Experiment) -> list[dict]:
    rows = []
    for mode in exp.modes:
        cases = [(p, k, n, 1) for p, k, n in GRID] if mode != "variant" else VARIANTS
        for p, k, n, a in cases:
            if mode == "cpp" and p ** k == 2:
                continue  # F_2 has no complete permutation
            report = agreement_sweep(SweepConfig(p, k, n, exp.trials, seed=exp.seed, mode=mode, a=a))
            row = {"mode": mode, "q": p ** k, "n": n, "a": a, **report.to_json()}
            rows.append(row)
            print(f"{mode:8s} q={p ** k} n={n} a={a}: {report.agreements}/{report.trials} agree, "
                  f"{report.pp_found} PPs, inverses {report.inverse_checks} ({report.elapsed:.2f}s)")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--modes", nargs="+", default=None)
    ap.add_argument("--out")
    args = ap.parse_args()
    exp = Experiment(args.trials, args.seed)
    if args.modes:
        exp.modes = args.modes
    rows = run(exp)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"experiment": asdict(exp), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()
