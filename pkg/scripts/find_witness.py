"""Search for a counterexample with the convexity of f dropped and freeze the minimized witness.

    python3 scripts/find_witness.py --out tests/fixtures/search_witness_n8
"""

import argparse
from pathlib import Path

from t2alg.grid import make_grid
from t2alg.io import write_ftv
from t2alg.lab import fixture_ops, search_counterexample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixture", default="idem-overline")
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="search_witness")
    args = ap.parse_args()

    F, V = fixture_ops(args.fixture, make_grid(args.n))
    w = search_counterexample(F, V, "left", "f", args.trials, args.seed)
    if w is None:
        print("no witness found")
        return 1
    stem = Path(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    for name in ("f", "g", "h", "lhs", "rhs"):
        write_ftv(stem.with_name(f"{stem.name}_{name}.csv"), getattr(w, name))
    print(f"trial {w.trial}: z={w.z}/{args.n} lhs={w.lhs.grades[w.z]:.6g} rhs={w.rhs.grades[w.z]:.6g}")
    for name in ("f", "g", "h"):
        print(f"  {name} = {getattr(w, name).grades.round(4).tolist()}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
