"""Measure synthesized induction instance sizes against n and fit a line.

    python3 scripts/induction_sizes.py --n-max 128 --csv sizes.csv
"""
import csv
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path

from omegarfn.calculus import check_fin, make_theory
from omegarfn.syntax import free_num_vars, parse, print_formula
from omegarfn.synth import synth_induction_instance

from _config import parse_config

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class Config:
    formulas: Path = ROOT / "corpus" / "formulas" / "corpus.txt"
    n_max: int = 64
    csv: str = ""


def main(cfg: Config):
    pure = make_theory("pure", None, [])
    rows = []
    for line in Path(cfg.formulas).read_text().splitlines():
        if not line.strip():
            continue
        phi = parse(line)
        if not free_num_vars(phi):
            continue
        x = min(free_num_vars(phi))
        ns = list(range(cfg.n_max + 1))
        reps = [check_fin(synth_induction_instance(phi, x, n), pure) for n in ns]
        sizes = [r.size for r in reps]
        slope, icpt = statistics.linear_regression(ns, sizes)
        resid = max(abs(s - (icpt + slope * n)) for n, s in zip(ns, sizes))
        text = print_formula(phi)
        print(f"{text:40s} size = {slope:.2f}*n + {icpt:.2f}  max residual {resid:.3f}  "
              f"height(n_max) {reps[-1].height}")
        rows += [(text, n, r.size, r.height) for n, r in zip(ns, reps)]
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["formula", "n", "size", "height"])
            w.writerows(rows)


if __name__ == "__main__":
    sys.setrecursionlimit(100_000)
    main(parse_config(Config, __doc__))
