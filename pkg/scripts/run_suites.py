"""Run every theorem suite on every shipped fixture that fits it and tabulate the outcome.

    python3 scripts/run_suites.py --n 64 --trials 200 --csv suites.csv
"""

import argparse
import csv
import sys

from t2alg.grid import make_grid
from t2alg.lab import FIXTURES, THEOREMS, SuiteConfig, SuiteRejectedError, fixture_ops, run_suite, validate_hypotheses

# fixtures worth trying per theorem family
CANDIDATES = {
    "T-MIN-MAX": ["min-max-TM", "min-max-SM"],
    "T-IDEM": ["idem-overline", "idem-overline-half", "idem-underline-half"],
    "T-CD-DISJ": ["cd-disj-i", "cd-disj-ii", "cd-disj-iii"],
    "T-CD-CONJ": ["cd-conj-i", "cd-conj-ii", "cd-conj-iii"],
    "T-ZK-S": ["zk-s-i", "zk-s-ii"],
    "T-ZK-UMAX": ["zk-umax-i", "zk-umax-ii"],
    "T-ZK-UMIN": ["zk-umin-i", "zk-umin-ii"],
}


def candidates(theorem_id):
    for prefix, names in CANDIDATES.items():
        if theorem_id.startswith(prefix):
            return names
    return list(FIXTURES)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    rows = []
    grid = make_grid(args.n)
    for tid, th in THEOREMS.items():
        for name in candidates(tid):
            F, V = fixture_ops(name, grid, th.side)
            if validate_hypotheses(tid, F, V):
                # a rejected pair says nothing about the theorem
                continue
            closed = F.closed and V.closed
            mode, comparison = ("exact", "strict") if closed else ("snap", "dilated")
            cfg = SuiteConfig(tid, args.n, args.trials, args.seed, mode, comparison, fixture=name, jobs=args.jobs)
            try:
                r = run_suite(cfg)
            except SuiteRejectedError as ex:
                print(f"{tid} [{name}] rejected: {ex}")
                continue
            print(r.summary())
            rows.append([tid, name, args.n, args.trials, mode, comparison, r.passes, f"{r.max_deviation:.6g}"])
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theorem_id", "fixture", "n", "trials", "mode", "comparison", "passes", "max_deviation"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
