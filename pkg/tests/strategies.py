"""Hypothesis strategies for terms and formulas."""
from hypothesis import strategies as st

from omegarfn.syntax import (
    Add, And, Exists, Forall, Lit, Mul, Num, ONE_T, Or, Var, ZERO_T,
)

NUM_VARS = ["x", "y", "z", "v"]
SET_VARS = ["X", "Y", "Z"]

terms = st.recursive(
    st.one_of(st.just(ZERO_T), st.just(ONE_T), st.sampled_from(NUM_VARS).map(Var),
              st.integers(2, 40).map(Num)),
    lambda sub: st.one_of(st.builds(Add, sub, sub), st.builds(Mul, sub, sub)),
    max_leaves=4,
)

closed_terms = st.recursive(
    st.one_of(st.just(ZERO_T), st.just(ONE_T), st.integers(2, 9).map(Num)),
    lambda sub: st.one_of(st.builds(Add, sub, sub), st.builds(Mul, sub, sub)),
    max_leaves=4,
)


def _lit(rel, neg):
    if rel == "in":
        return st.builds(lambda t, X: Lit("in", (t,), neg, setvar=X), terms, st.sampled_from(SET_VARS))
    if rel == "Pr":
        return st.builds(lambda t: Lit("Pr", (t,), neg, theory="T0"), terms)
    if rel == "jmp":
        return st.builds(lambda a, b, c: Lit("jmp", (a, b, c), neg), terms, terms, terms)
    return st.builds(lambda a, b: Lit(rel, (a, b), neg), terms, terms)


literals = st.one_of([_lit(r, n) for r in ("=", "<", "in", "prec", "Pr", "jmp") for n in (False, True)])


def _compound(sub):
    var = st.sampled_from(NUM_VARS + SET_VARS)
    return st.one_of(
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Forall, var, sub),
        st.builds(Exists, var, sub),
    )


formulas = st.recursive(literals, _compound, max_leaves=6)


def random_term(rng, depth=2):
    if depth == 0 or rng.random() < 0.4:
        k = rng.randrange(4)
        return (ZERO_T, ONE_T, Var(rng.choice(NUM_VARS)), Num(rng.randint(2, 40)))[k]
    op = Add if rng.random() < 0.5 else Mul
    return op(random_term(rng, depth - 1), random_term(rng, depth - 1))


def random_formula(rng, depth=4):
    """Plain-random formula generator, much cheaper than hypothesis for bulk sampling."""
    if depth == 0 or rng.random() < 0.3:
        neg = rng.random() < 0.5
        rel = rng.choice(("=", "<", "in", "prec", "Pr"))
        if rel == "in":
            return Lit("in", (random_term(rng),), neg, setvar=rng.choice(SET_VARS))
        if rel == "Pr":
            return Lit("Pr", (random_term(rng),), neg, theory="T0")
        return Lit(rel, (random_term(rng), random_term(rng)), neg)
    k = rng.randrange(4)
    if k < 2:
        return (And, Or)[k](random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    return (Forall, Exists)[k - 2](rng.choice(NUM_VARS + SET_VARS), random_formula(rng, depth - 1))
