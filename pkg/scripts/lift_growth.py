"""Sizes, induction levels and bound codes of the Gentzen lift for k = 0..k_max.

    python3 scripts/lift_growth.py --k-max 3
"""
from dataclasses import dataclass, field

from omegarfn.calculus import check_fin
from omegarfn.syntax import classify, parse
from omegarfn.synth import synth_lift

from _config import parse_config


@dataclass
class Config:
    formulas: list = field(default_factory=lambda: ["x=x", "A X. (x notin X | x in X)"])
    var: str = "x"
    k_max: int = 2


def main(cfg: Config):
    print("formula\tk\tsize\theight\tlevel\tbound_code")
    for text in cfg.formulas:
        phi = parse(text)
        for k in range(cfg.k_max + 1):
            r = synth_lift(phi, cfg.var, k, max_k=max(k, cfg.k_max))
            rep = check_fin(r.proof, r.theory)
            assert r.level <= classify(phi).pi1 + k
            print(f"{text}\t{k}\t{rep.size}\t{rep.height}\t{r.level}\t{r.bound_code}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
