"""Embed, cut-eliminate and truth-audit every bundled proof.

Prints one line of verdict counts per proof, plus the Xi audit of the
bundled Pi-case instance for each choice of X0.

    python3 scripts/audit_corpus.py --depth 4 --width 3
"""
import json
from dataclasses import dataclass
from pathlib import Path

from omegarfn.calculus import load_proof, load_theory
from omegarfn.omega import Emb, eliminate_all
from omegarfn.syntax import parse
from omegarfn.synth import XiContext, audit_Xi_truth, audit_sequent_truth
from omegarfn.truth import load_universe

from _config import parse_config

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class Config:
    theory: Path = ROOT / "specs" / "rca0-stub.thy"
    proofs: Path = ROOT / "corpus" / "proofs"
    universe: Path = ROOT / "corpus" / "audit" / "universe.txt"
    depth: int = 3
    width: int = 3
    budget: int = 1000
    xi_proof: str = "lemma-cut3"
    xi_target: str = "A X. E Y. (1+1+1 notin X | 1+1+1 in Y)"


def main(cfg: Config):
    th = load_theory(cfg.theory)
    u = load_universe(cfg.universe)
    for path in sorted(Path(cfg.proofs).glob("*.proof")):
        e = eliminate_all(Emb(load_proof(path), th))
        rep = audit_sequent_truth(e, u, cfg.depth, cfg.width, cfg.budget)
        print(f"{path.stem:14s} tag {e.tag}  {json.dumps(rep.counts(), sort_keys=True)}")
    c = eliminate_all(Emb(load_proof(Path(cfg.proofs) / f"{cfg.xi_proof}.proof"), th))
    ctx = XiContext(th.axiom, parse(cfg.xi_target), 0, u.names[0])
    rep = audit_Xi_truth(c, ctx, u, cfg.depth, cfg.width, cfg.budget, x0_all=True)
    print(f"xi audit of {cfg.xi_proof} over every X0: {json.dumps(rep.counts(), sort_keys=True)}, "
          f"{len(rep.violations)} violations")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
