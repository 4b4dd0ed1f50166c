from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, settings

from omegarfn.calculus import (
    Proof, Rejection, TheoryError, check_fin, close, format_proof, identity, iter_nodes,
    load_proof, load_theory, make_theory, parse_proof, parse_theory, proof_height, subformula_audit,
    t_cut, t_schema,
)
from omegarfn.schemas import build_Ind
from omegarfn.syntax import parse, rank
from strategies import formulas

ROOT = Path(__file__).parent.parent
PROOFS = sorted((ROOT / "corpus" / "proofs").glob("*.proof"))
TH = load_theory(ROOT / "specs" / "rca0-stub.thy")


def corpus():
    return {p.stem: load_proof(p) for p in PROOFS}


def at(p, pos):
    for i in pos:
        p = p.children[i]
    return p


def replace_at(p, pos, fn):
    if not pos:
        return fn(p)
    kids = list(p.children)
    kids[pos[0]] = replace_at(kids[pos[0]], pos[1:], fn)
    return replace(p, children=tuple(kids))


def test_trivial_true_literal():
    rep = check_fin(Proof("TrueLit", (parse("0=0"),)), TH)
    assert rep.height == 0 and rep.axiom_tags["TrueLit"] == 1


def test_corpus_shape():
    c = corpus()
    assert len(c) >= 12
    reps = {k: check_fin(p, TH) for k, p in c.items()}
    assert sum(r.axiom_tags.get("SchemaAx", 0) > 0 for r in reps.values()) >= 3
    assert sum(r.has_cuts and r.max_cut_rank >= 2 for r in reps.values()) >= 2


def test_report_matches_independent_recount():
    for name, p in corpus().items():
        rep = check_fin(p, TH)
        cuts = [rank(n.formula) for _, n in iter_nodes(p) if n.rule == "Cut"]
        assert rep.height == proof_height(p), name
        assert sorted(rep.cut_ranks) == sorted(cuts), name
        assert rep.size == sum(1 for _ in iter_nodes(p))


def test_psi_phi_proof_with_cuts():
    p = corpus()["lemma-cut3"]
    rep = check_fin(p, TH)
    assert str(p.seq[0]).startswith("E X.")       # the negated axiom sentence
    assert rep.max_cut_rank == 3


def test_eigenvariable_reuse_rejected():
    p = corpus()["superset3"]
    # the AllSet on the inner universal (eigen V) sits under the outer AllSet (eigen U)
    pos = next(pos for pos, n in iter_nodes(p) if n.rule == "AllSet" and n.var == "V")
    bad = replace_at(p, pos, lambda n: replace(n, var="U"))
    with pytest.raises(Rejection) as e:
        check_fin(bad, TH)
    assert e.value.reason == "eigenvariable"
    assert e.value.position == pos


def test_premise_shape_rejected():
    p = corpus()["lem-set"]
    bad = replace_at(p, (0, 0), lambda n: replace(n, seq=n.seq + (parse("1=1"),)))
    with pytest.raises(Rejection) as e:
        check_fin(bad, TH)
    assert e.value.reason == "premise-shape" and e.value.position == (0,)


def test_unrecognized_axiom_rejected():
    with pytest.raises(Rejection) as e:
        check_fin(Proof("TrueLit", (parse("0=1"),)), TH)
    assert e.value.reason == "unrecognized-axiom"
    with pytest.raises(Rejection) as e:
        check_fin(Proof("TheoryAx", (parse("0=1"),)), TH)
    assert e.value.reason == "unrecognized-axiom"


def test_schema_class_violation():
    weak = make_theory("weak", TH.axiom, ["ind-pi1-0"])
    phi = parse("A X. x in X")
    seq = (build_Ind(phi, "x"),)
    assert check_fin(t_schema(seq, "ind", phi, "x"), TH)
    with pytest.raises(Rejection) as e:
        check_fin(t_schema(seq, "ind", phi, "x"), weak)
    assert e.value.reason == "class-violation"


def test_lightface_induction_rejects_parameters():
    lf = make_theory("lf", None, ["lf-ind-pi1-1"])
    phi = parse("x in U")
    with pytest.raises(Rejection):
        check_fin(t_schema((build_Ind(phi, "x"),), "ind", phi, "x"), lf)
    assert check_fin(t_schema((build_Ind(parse("x=x"), "x"),), "ind", parse("x=x"), "x"), lf)


def test_equality_axioms():
    assert check_fin(close((parse("x!=y"), parse("x<z"), parse("!(y<z)"))), TH)
    assert check_fin(close((parse("x!=y"), parse("x+1 in X"), parse("y+1 notin X"))), TH)
    assert check_fin(close((parse("a=a"),)), TH)
    with pytest.raises(ValueError):
        close((parse("x!=y"), parse("x<z"), parse("!(z<y)")))


def test_subformula_audit():
    for name, p in corpus().items():
        if not check_fin(p, TH).has_cuts:
            assert subformula_audit(p) is None, name
    s = (parse("0=0"),)
    cut = t_cut(s, parse("A x. x<x+1"), lambda q: close(q), lambda q: close(q))
    check_fin(cut, TH)
    assert subformula_audit(cut) == (0,)


def test_make_theory():
    th = make_theory("stub", "A X. (0 in X | 0 notin X)", ["full-induction"])
    assert th.axiom is not None
    with pytest.raises(TheoryError) as e:
        make_theory("bad", "E X. A Y. E Z. (0 in X | 0 in Y | 0 in Z)", [], ("pi1", 2))
    assert "Sigma1n(3)" in str(e.value)
    assert TH.name == "RCA0-stub"
    with pytest.raises(TheoryError):
        parse_theory("name = x\nschemas = bogus\n")
    with pytest.raises(TheoryError):
        make_theory("open", "0 in X")


def test_proof_file_round_trip():
    for path in PROOFS:
        text = path.read_text()
        assert format_proof(parse_proof(text)) + "\n" == text


@given(formulas)
@settings(max_examples=200)
def test_identity_derivations_check_and_audit(f):
    p = identity(f)
    check_fin(p, TH)
    assert subformula_audit(p) is None
