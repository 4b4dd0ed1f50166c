import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from omegarfn.calculus import close, load_theory, t_ex
from omegarfn.ordinal import Ordinal, encode_nat, omega_pow, pair
from omegarfn.syntax import (
    Var, canon, classify, decode, encode, free_vars, negate, parse, print_formula, subst,
    subst_num,
)
from omegarfn.truth import (
    DEFAULT_UNIVERSE, CertificateStore, EvalError, PeriodicSet, Truth3, Valuation, build_Con,
    build_Prog, build_RFN, build_Rfn, build_TI, build_WF, contract_vars, evaluate, make_universe,
    pairing_eq, parse_universe,
)
from strategies import random_formula

ROOT = Path(__file__).parent.parent
TH = load_theory(ROOT / "specs" / "rca0-stub.thy")
T, F, U = Truth3.TRUE, Truth3.FALSE, Truth3.UNKNOWN


def ev(text, budget=100, **kw):
    return evaluate(parse(text), budget=budget, **kw)


def test_examples():
    assert evaluate(parse("0=0"), budget=0).value is T
    v = ev("A x. x<x+1", 100)
    assert v.value is U and "budget-limited universal" in v.notes
    v = evaluate(parse("E x. x+x=1+1+1+1"), budget=10)
    assert v.value is T and v.witness == {"x": 2}


def test_brute_force_witness_oracle():
    for target in range(12):
        f = parse(f"E x. x+x=y")
        v = evaluate(f, Valuation({"y": target}), budget=20)
        expect = [n for n in range(20) if 2 * n == target]
        if expect:
            assert v.value is T and v.witness == {"x": expect[0]}
        else:
            assert v.value is U


def test_unbound_variable():
    with pytest.raises(EvalError):
        ev("x=0")
    with pytest.raises(EvalError):
        ev("0 in X")
    assert ev("x=0", valuation=Valuation({"x": 0})).value is T
    assert ev("1 in X", valuation=Valuation({}, {"X": 2})).value is F     # Evens


def test_bounded_quantifiers_exact():
    assert ev("A x. (!(x<5) | x=x)", budget=0).value is T
    assert ev("A x. (!(x<5) | x<4)", budget=0).value is F
    assert ev("E x. (x<3 & x+x=1+1+1+1)", budget=0).value is T
    assert ev("E x. (x<2 & x+x=1+1+1+1)", budget=0).value is F


def test_prec_literals_use_ordinal_codes():
    w = encode_nat(omega_pow(Ordinal.nat(1)))
    five = encode_nat(Ordinal.nat(5))
    assert evaluate(parse(f"{five} prec {w}"), budget=0).value is T
    assert evaluate(parse(f"{w} prec {five}"), budget=0).value is F
    three = encode_nat(Ordinal.nat(3))
    f = parse(f"A y. (!(y prec {three}) | y prec {three})")
    assert evaluate(f, budget=0).value is T


def test_set_quantifiers_are_universe_relative():
    v = ev("A X. (0 in X | 0 notin X)")
    assert v.value is U and v.universe_relative
    assert ev("A X. (0 in X | 0 notin X)", closed=True).value is T
    v = ev("A X. 0 in X")
    assert v.value is F and v.witness == {"X": "Empty"}
    assert ev("E X. 0 in X").value is T


def test_universe_files():
    u = parse_universe("# demo\nOdd = 0:10\nAll = :1\n")
    assert u.names == ("Odd", "All")
    assert [n in u["Odd"] for n in range(5)] == [False, True, False, True, False]
    with pytest.raises(EvalError):
        parse_universe("bad line")
    with pytest.raises(EvalError):
        parse_universe("")
    with pytest.raises(EvalError):
        PeriodicSet("01", "")


def test_pr_certificates():
    goal = parse("E y. y+y=1+1+1+1")
    lit = parse(f"Pr[{TH.name}]({encode(goal)})")
    assert evaluate(lit, budget=0).value is U
    assert evaluate(negate(lit), budget=0).value is U       # never False without a proof
    store = CertificateStore()
    store.add(TH, t_ex((goal,), goal, 2, close))
    assert evaluate(lit, budget=0, certs=store).value is T
    assert evaluate(negate(lit), budget=0, certs=store).value is F
    # dotted form: Pr[T](code(phi(x)), 2) refers to phi(2)
    phi = parse("E y. y+y=x+x")
    inst = subst(phi, "x", canon(2))
    store.add(TH, t_ex((inst,), inst, 2, close))
    dotted = parse(f"Pr[{TH.name}]({encode(phi)}, 1+1)")
    assert evaluate(dotted, budget=0, certs=store).value is T
    assert evaluate(build_Con(TH), budget=0, certs=store).value is U


def test_builders():
    prog = build_Prog(parse("x=x"), "x")
    assert print_formula(prog) == "A x. ((E y. (y prec x & y!=y)) | x=x)"
    assert parse(print_formula(prog)) == prog
    ti = build_TI(parse("x in X"), "x")
    assert free_vars(ti) == {"X"} and parse(print_formula(ti)) == ti
    wf = build_WF(omega_pow(Ordinal.nat(1)))
    assert free_vars(wf) == set() and str(encode_nat(omega_pow(Ordinal.nat(1)))) in print_formula(wf)
    with pytest.raises(ValueError):
        build_Rfn(TH.name, parse("x=x"))
    rfn = build_RFN(TH.name, parse("E y. y+y=x"), "x")
    assert classify(rfn).arithmetic


def test_rfn_codes_agree_with_subst_num():
    phi = parse("E y. y+y=x")
    rfn = build_RFN(TH.name, phi, "x")
    from omegarfn.syntax import term_value
    code = term_value(rfn.body.left.terms[0], {})
    assert code == encode(phi)
    for n in (0, 3, 17):
        g = decode(subst_num(code, n, "x"))
        assert g == subst(phi, "x", canon(n))


def test_pairing_formula_agrees_with_table():
    x, a, b = Var("p"), Var("a"), Var("b")
    f = pairing_eq(x, a, b)
    for i in range(101):
        for j in range(0, 101, 7):
            p = pair(i, j)
            assert evaluate(f, Valuation({"p": p, "a": i, "b": j}), budget=0).value is T
            assert evaluate(f, Valuation({"p": p + 1, "a": i, "b": j}), budget=0).value is F


def test_contract_vars():
    phi = parse("x1=x2")
    c = contract_vars(phi, ["x1", "x2"])
    assert free_vars(c) == {"x"}
    assert classify(c).pi1 == classify(phi).pi1
    for x1 in range(6):
        for x2 in range(6):
            x = pair(x1, x2)
            if x > 30:
                continue
            got = evaluate(c, Valuation({"x": x}), budget=0).value
            want = evaluate(phi, Valuation({"x1": x1, "x2": x2}), budget=0).value
            assert got is want, (x1, x2)


def test_contract_vars_keeps_class():
    phi = parse("A X. E Y. (x1 in X | x2+x3 in Y)")
    c = contract_vars(phi, ["x1", "x2", "x3"])
    assert free_vars(c) == {"x"}
    assert (classify(c).tag, classify(c).level) == (classify(phi).tag, classify(phi).level)


def test_duality_on_random_formulas():
    rng = random.Random(7)
    u = make_universe({"E": ":0", "O": "0:01", "S": "11:0"})
    for _ in range(300):
        f = random_formula(rng, 3)
        env = {v: rng.randrange(4) for v in free_vars(f) if v[0].islower()}
        sets = {v: rng.randrange(3) for v in free_vars(f) if v[0].isupper()}
        val = Valuation(env, sets)
        a = evaluate(f, val, u, budget=8).value
        b = evaluate(negate(f), val, u, budget=8).value
        assert b is ~a, print_formula(f)


@given(st.integers(0, 3), st.integers(1, 40))
@settings(max_examples=60, deadline=None)
def test_monotone_in_budget_and_universe(seed, budget):
    rng = random.Random(seed)
    small = make_universe({"E": ":0", "O": "0:01"})
    big = make_universe({"E": ":0", "O": "0:01", "S": "11:0", "F": ":1"})
    for _ in range(20):
        f = random_formula(rng, 3)
        env = {v: rng.randrange(4) for v in free_vars(f) if v[0].islower()}
        sets = {v: rng.randrange(2) for v in free_vars(f) if v[0].isupper()}
        lo = evaluate(f, Valuation(env, sets), small, budget=budget).value
        hi = evaluate(f, Valuation(env, sets), big, budget=budget * 3).value
        assert lo is U or hi is lo


def test_default_universe_has_sets():
    assert len(DEFAULT_UNIVERSE.names) >= 3


def test_quantifier_blocks_share_the_budget():
    from omegarfn.ordinal import unpair
    f = parse("E x. E y. (x*y=z & x<y & 1<x)")
    for z in range(4, 40):
        v = evaluate(f, Valuation({"z": z}), budget=300)
        want = None
        for i in range(300):
            x, y = unpair(i)
            if x * y == z and 1 < x < y:
                want = {"x": x, "y": y}
                break
        assert (v.value is T and v.witness == want) if want else v.value is U, z
    v = ev("A x. A y. x+y=y+x", budget=50)
    assert v.value is U and "budget-limited universal" in v.notes


MEMBERSHIP = ["x in X", "x notin X", "x in Y", "x notin Y", "0=0", "0=1"]


@given(st.lists(st.sampled_from(MEMBERSHIP), min_size=1, max_size=3),
       st.lists(st.sampled_from(["&", "|"]), min_size=2, max_size=2),
       st.sampled_from(["A", "E"]), st.sampled_from(DEFAULT_UNIVERSE.names),
       st.sampled_from(DEFAULT_UNIVERSE.names))
@settings(max_examples=60, deadline=None)
def test_membership_quantifier_is_decided(lits, ops, q, xs, ys):
    body = lits[0]
    for op, lit in zip(ops, lits[1:]):
        body = f"({body} {op} {lit})"
    f = parse(f"{q} x. {body}")
    sets = {"X": xs, "Y": ys}
    got = evaluate(f, Valuation({}, sets), budget=50).value
    # oracle: membership in the default universe repeats with period 2 after 3
    vals = [evaluate(subst(f.body, "x", canon(n)), Valuation({}, sets)).value for n in range(40)]
    want = (all if q == "A" else any)(v is T for v in vals)
    assert got is (T if want else F)


def test_other_uses_of_the_variable_still_search():
    f = parse("E x. (x in X & 1+1+1+1+1<x)")
    assert evaluate(f, Valuation({}, {"X": "Three"}), budget=50).value is U
