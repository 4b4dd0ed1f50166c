"""Acceptance criteria, one test per criterion.

Each test records PASS or FAIL in RESULTS; conftest prints the lines in the
terminal summary, and running this file directly prints them too:

    python3 tests/test_acceptance.py
"""
import itertools
import json
import math
import random
import statistics
import time
from pathlib import Path

import pytest

from omegarfn.calculus import check_fin, load_proof, load_theory, make_theory, skeleton, subformula_skeletons
from omegarfn.cli import run
from omegarfn.omega import (
    OMEGA_ARITY, Emb, Patch, check_local, descriptor, eliminate_all, expand, iter_expanded,
)
from omegarfn.ordinal import (
    EQ, LT, OMEGA, ZERO, Ordinal, add, compare, decode_nat, encode_nat, mul, omega_pow,
    omega_tower, prec,
)
from omegarfn.syntax import classify, const, encode, free_vars, numeral, parse, subst, subst_num
from omegarfn.synth import (
    XiContext, audit_Xi_truth, audit_sequent_truth, synth_induction_instance, synth_lift,
)
from omegarfn.truth import DEFAULT_UNIVERSE, Truth3, Valuation, evaluate

ROOT = Path(__file__).resolve().parent.parent
STUB = load_theory(ROOT / "specs" / "rca0-stub.thy")
PURE = make_theory("pure", None, [])
PROOFS = {p.stem: load_proof(p) for p in sorted((ROOT / "corpus" / "proofs").glob("*.proof"))}
FORMULAS = [parse(s) for s in (ROOT / "corpus" / "formulas" / "corpus.txt").read_text().splitlines()
            if s.strip()]
UNIVERSE_FILE = ROOT / "corpus" / "audit" / "universe.txt"
CTX_FILE = ROOT / "corpus" / "audit" / "superset.ctx"
RESULTS = {}


def record(n, title, ok, detail=""):
    line = f"criterion {n} {title}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    RESULTS[n] = line
    print(line)
    assert ok, line


# -- criterion 1 -----------------------------------------------------------------------

def _sums(exponents):
    """Every CNF sum of at most three summands over ``exponents`` with coefficients 1..3."""
    desc = sorted(exponents, reverse=True)
    out = [ZERO]
    for k in (1, 2, 3):
        for es in itertools.combinations(desc, k):
            for cs in itertools.product((1, 2, 3), repeat=k):
                out.append(Ordinal(tuple(zip(es, cs))))
    return out


def _depth2():
    return _sums(_sums([ZERO]))   # exponents 0..3, so everything is below w^4


def _uniform_depth3(d2, rng):
    """Exact uniform sampler over the depth-3 suite (exponents drawn from ``d2``)."""
    m = len(d2)
    weights = [math.comb(m, k) * 3 ** k for k in range(4)]
    k = rng.choices(range(4), weights)[0]
    es = sorted(rng.sample(d2, k), reverse=True)
    return Ordinal(tuple((e, rng.randint(1, 3)) for e in es))


def test_criterion_1_ordinal_laws():
    start = time.perf_counter()
    rng = random.Random(20261016)
    d2 = _depth2()
    failures = []

    def law(ok, what):
        if not ok:
            failures.append(what)

    # depth <= 2: every pair, exhaustively
    codes = {a: encode_nat(a) for a in d2}
    for a, b in itertools.product(d2, repeat=2):
        c = compare(a, b)
        law(c == -compare(b, a) and (c == EQ) == (a == b), ("trichotomy", a, b))
        law(prec(codes[a], codes[b]) == (c == LT), ("code order", a, b))
        law(compare(omega_pow(a), omega_pow(b)) == c, ("omega_pow", a, b))
    for a in d2:
        law(decode_nat(codes[a]) == a, ("round trip", a))
    law(len(set(codes.values())) == len(d2), "codes injective")

    # depth 3: 23.5M ordinals, sampled exactly uniformly
    pool = [_uniform_depth3(d2, rng) for _ in range(3000)]
    for a in pool:
        law(decode_nat(encode_nat(a)) == a, ("round trip", a))
    for _ in range(100_000):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        ab, bc = compare(a, b), compare(b, c)
        if ab == LT and bc == LT:
            law(compare(a, c) == LT, ("transitivity", a, b, c))
        law(ab == -compare(b, a), ("trichotomy", a, b))
    small = d2 + pool[:400]
    for _ in range(20_000):
        a, b, c = rng.choice(small), rng.choice(small), rng.choice(small)
        law(add(add(a, b), c) == add(a, add(b, c)), ("add assoc", a, b, c))
        law(mul(mul(a, b), c) == mul(a, mul(b, c)), ("mul assoc", a, b, c))
        law(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), ("left distributivity", a, b, c))
    for _ in range(20_000):
        a, b = rng.choice(pool), rng.choice(pool)
        if compare(a, b) == LT:
            law(compare(omega_pow(a), omega_pow(b)) == LT, ("omega_pow", a, b))
        law(prec(encode_nat(a), encode_nat(b)) == (compare(a, b) == LT), ("code order", a, b))
    elapsed = time.perf_counter() - start
    record(1, "ordinal laws", not failures and elapsed < 60,
           f"{len(d2)} exhaustive, 1e5 sampled triples, {len(failures)} failures, {elapsed:.1f}s")


# -- criterion 2 -----------------------------------------------------------------------

def _uses_induction(p):
    return p.rule == "SchemaAx" or any(_uses_induction(k) for k in p.children)


def _walk(c, depth, width, pos=()):
    yield pos
    if depth == 0:
        return
    n = c.node()
    for i in range(width if n.arity == OMEGA_ARITY else n.arity):
        yield from _walk(c.child(i), depth - 1, width, pos + (i,))


def test_criterion_2_checker_and_embedding():
    omega2 = mul(OMEGA, Ordinal.nat(2))
    problems = []
    induction = rank2 = 0
    for name, p in PROOFS.items():
        rep = check_fin(p, STUB)
        induction += _uses_induction(p)
        rank2 += any(r >= 2 for r in rep.cut_ranks)
        c = Emb(p, STUB)
        if compare(c.tag, omega2) != LT:
            problems.append((name, "tag"))
        problems += [(name, pos) for pos in _walk(c, 4, 4) if check_local(c, pos, 4) is not None]
    ok = len(PROOFS) >= 12 and induction >= 3 and rank2 >= 2 and not problems
    record(2, "checker and embedding", ok,
           f"{len(PROOFS)} proofs, {induction} with induction, {rank2} with rank>=2 cuts")


# -- criterion 3 -----------------------------------------------------------------------

def test_criterion_3_cut_elimination():
    problems = []
    for name, p in PROOFS.items():
        e = eliminate_all(Emb(p, STUB))
        if e.cut_rank != 0 or not isinstance(e.tag, Ordinal):
            problems.append((name, "declared"))
        allowed = subformula_skeletons(e.end_sequent)
        for x in iter_expanded(expand(e, 3, 4)):
            if x.node.rule == "Cut" or x.violation is not None:
                problems.append((name, x.pos))
            elif not all(skeleton(f) in allowed for f in x.node.seq):
                problems.append((name, x.pos, "subformula"))
    record(3, "cut elimination", not problems, f"{len(problems)} violations")


# -- criterion 4 -----------------------------------------------------------------------

def test_criterion_4_every_sequent_true():
    psi = evaluate(STUB.axiom, Valuation({}), DEFAULT_UNIVERSE, budget=1000, closed=True).value
    counts = {}
    for name in ("psi-cut", "witness-psi"):
        rep = audit_sequent_truth(eliminate_all(Emb(PROOFS[name], STUB)), DEFAULT_UNIVERSE,
                                  depth=6, width=4, budget=1000)
        counts[name] = rep.counts()
    ok = psi is Truth3.TRUE and all(set(c) == {"True"} for c in counts.values())
    record(4, "desk-scale soundness", ok, json.dumps(counts, sort_keys=True))


# -- criterion 5 -----------------------------------------------------------------------

def _phis():
    return [(f, min(v for v in free_vars(f) if v[0].islower())) for f in FORMULAS
            if any(v[0].islower() for v in free_vars(f))]


def test_criterion_5_induction_synthesis():
    worst = 0.0
    phis = _phis()
    for phi, x in phis:
        ns = list(range(65))
        sizes = [check_fin(synth_induction_instance(phi, x, n), PURE).size for n in ns]
        slope, icpt = statistics.linear_regression(ns, sizes)
        worst = max(worst, max(abs(s - (icpt + slope * n)) for n, s in zip(ns, sizes)))
    record(5, "induction synthesis", phis and worst <= 1,
           f"{len(phis)} formulas, max residual {worst:.3f}")


# -- criterion 6 -----------------------------------------------------------------------

def test_criterion_6_gentzen_lift():
    bound = encode_nat(omega_tower(2))
    problems = []
    for text in ("x=x", "A X. (x notin X | x in X)"):
        r = synth_lift(parse(text), "x", 1)
        rep = check_fin(r.proof, r.theory)
        for kind, inst in rep.schema_instances:
            if kind != "facts" and (kind != f"ind-pi1-{r.level}" or classify(parse(inst)).pi1 > r.level):
                problems.append((text, kind, inst))
        lit = r.proof.seq[0].right.body.left
        if r.bound_code != bound or lit.terms[1] != const(bound):
            problems.append((text, "bound"))
    record(6, "gentzen lift", not problems, f"bound code {bound}")


# -- criterion 7 -----------------------------------------------------------------------

def test_criterion_7_xi_audit():
    ctx = XiContext(STUB.axiom, parse("A X. E Y. (1+1+1 notin X | 1+1+1 in Y)"), 0, "Evens")
    c = eliminate_all(Emb(PROOFS["lemma-cut3"], STUB))
    rep = audit_Xi_truth(c, ctx, DEFAULT_UNIVERSE, depth=3, budget=1000)
    visited = sum(1 for _ in iter_expanded(expand(c, 3, 3)))
    clean = not rep.violations and len(rep.rows) == visited and all(r.kind == "Xi" for r in rep.rows)
    pos = next(r.pos for r in rep.rows if r.verdict == "vacuous")
    bad = Patch(c, pos, seq=descriptor(c, pos).seq + (parse("0=1"),))
    flagged = [r.pos for r in audit_Xi_truth(bad, ctx, DEFAULT_UNIVERSE, depth=3).violations]
    record(7, "xi audit", clean and flagged == [pos],
           f"{len(rep.rows)} nodes, fault at {list(pos)} flagged at {[list(p) for p in flagged]}")


# -- criterion 8 -----------------------------------------------------------------------

def test_criterion_8_substitution_coherence():
    checked = mismatches = 0
    for f in FORMULAS:
        for v in sorted(v for v in free_vars(f) if v[0].islower()):
            for n in range(21):
                checked += 1
                mismatches += subst_num(encode(f), n, v) != encode(subst(f, v, numeral(n)))
    record(8, "substitution coherence", checked > 0 and mismatches == 0,
           f"{checked} cases, {mismatches} mismatches")


# -- criterion 9 -----------------------------------------------------------------------

def _pipeline(d):
    out = []

    def step(path, *argv):
        code = run([str(a) for a in argv] + ["--json-like", str(d / path)])
        assert code == 0, argv
        out.append(d / path)

    for stem in PROOFS:
        src = ROOT / "corpus" / "proofs" / f"{stem}.proof"
        thy = ROOT / "specs" / "rca0-stub.thy"
        step(f"{stem}.check.json", "check", src, "--theory", thy)
        step(f"{stem}.embed.json", "embed", src, "--theory", thy, "-o", d / f"{stem}.code")
        step(f"{stem}.elim.json", "elim", d / f"{stem}.code", "--all", "-o", d / f"{stem}.cf.code")
        step(f"{stem}.expand.json", "expand", d / f"{stem}.cf.code", "--depth", "3", "--width", "3")
        out += [d / f"{stem}.code", d / f"{stem}.cf.code"]
    step("xi.json", "audit", "--code", d / "lemma-cut3.cf.code", "--ctx", CTX_FILE,
         "--universe", UNIVERSE_FILE)
    step("induct.json", "induct", "--phi", "x<x+1", "--n", "8", "-o", d / "induct.proof")
    step("lift.json", "lift", "--phi", "x=x", "--k", "1", "-o", d / "lift.proof")
    out += [d / "induct.proof", d / "lift.proof"]
    return {p.name: p.read_bytes() for p in out}


def test_criterion_9_determinism(tmp_path, capsys, monkeypatch):
    runs = []
    for name in ("a", "b"):
        (tmp_path / name).mkdir()
        monkeypatch.chdir(tmp_path / name)
        runs.append(_pipeline(Path(".")))
    capsys.readouterr()
    same = runs[0] == runs[1]
    record(9, "determinism", same, f"{len(runs[0])} files compared")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
