"""Regenerate the bundled proof corpus under corpus/proofs.

Every proof is built backwards with the tactic helpers and checked before
it is written.  Run from the repository root:

    python3 scripts/make_corpus.py
"""
from pathlib import Path

from omegarfn.calculus import (
    check_fin, close, format_proof, load_theory, t_all, t_and, t_cut, t_ex, t_id, t_or, t_schema,
)
from omegarfn.schemas import build_Ind
from omegarfn.syntax import Exists, Forall, Or, Var, canon, mem, negate, nmem, parse, print_term

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "corpus" / "proofs"
TH = load_theory(ROOT / "specs" / "rca0-stub.thy")
PSI = TH.axiom
NPSI = negate(PSI)
P = parse


def true_lit():
    return close((P("0=0"),))


def lem_set():
    goal = P("A X. (0 in X | 0 notin X)")
    return t_all((goal,), goal, "U", lambda s: t_or(s, s[-1], close))


def identity_psi():
    return t_id((PSI, NPSI), PSI)


def eq_sym():
    goal = P("A x. A y. (x!=y | y=x)")
    cut = P("a=a")

    def body(s):
        return t_or(s, s[-1], lambda s2: t_cut(s2, cut, close, close))

    return t_all((goal,), goal, "a", lambda s: t_all(s, s[-1], "b", body))


def superset_at(n):
    """not psi, A X. E Y. (n notin X | n in Y), cut-free."""
    phi = _phi_at(n)
    # open not psi with U, its universal with eigen V, then pick x := n
    def after_all(s):
        ex_y = s[-1]
        return t_ex(s, NPSI, "U", lambda s2: t_all(s2, s2[-1], "V", lambda s3: t_ex(
            s3, s3[-1], canon(n), lambda s4: t_ex(s4, ex_y, "V", lambda s5: t_or(
                s5, s5[-1], lambda s6: t_and(s6, s4[-1], close, close))))))

    return t_all((NPSI, phi), phi, "U", after_all)


def _phi_at(n):
    x = canon(n)
    return Forall("X", Exists("Y", Or(nmem(x, "X"), mem(x, "Y"))))


def lemma_cut(n):
    """not psi, phi(n) through a cut on A x. A Z. (x notin Z | x in Z) (rank 3)."""
    phi = _phi_at(n)
    c = P("A x. A Z. (x notin Z | x in Z)")
    nc = negate(c)

    def prove_c(s):
        return t_all(s, c, "a", lambda s2: t_all(s2, s2[-1], "W", lambda s3: t_or(s3, s3[-1], close)))

    def use_c(s):
        def in_u(s2):
            ex_y = s2[-1]
            return t_ex(s2, ex_y, "U", lambda s3: t_ex(s3, nc, canon(n), lambda s4: t_ex(
                s4, s4[-1], "U", lambda s5: t_and(s5, s5[-1],
                                                  lambda s6: t_or(s6, s3[-1], close),
                                                  lambda s6: t_or(s6, s3[-1], close)))))
        return t_all(s, phi, "U", in_u)

    return t_cut((NPSI, phi), c, prove_c, use_c)


def double_cut():
    """E x. (x=x & 0<1) with a rank-2 cut and a rank-0 cut inside."""
    goal = P("E x. (x=x & 0<1)")
    c = P("A x. (x=x | x<x)")

    def prove_c(s):
        return t_all(s, c, "a", lambda s2: t_or(s2, s2[-1], close))

    def use(s):
        # instantiate the negated lemma at 0 alongside the goal at 0
        return t_ex(s, goal, 0, lambda s2: t_and(s2, s2[-1], close,
                                                  lambda s3: t_cut(s3, P("0=0"), close, close)))

    return t_cut((goal,), c, prove_c, use)


def ind_set():
    """The second-order induction axiom via one schema leaf."""
    goal = P("A X. ((0 notin X | E y. (y in X & y+1 notin X)) | A x. x in X)")
    return t_all((goal,), goal, "U", lambda s: t_schema(s, "ind", P("x in U"), "x"))


def ind_at(n, with_psi=False):
    """Instance at n of the set induction principle, by a cut on Ind(x in U)."""
    x = canon(n)
    g_tmpl = P(f"A X. ((0 notin X | E y. (y in X & y+1 notin X)) | {_term(n)} in X)")
    start = (NPSI, g_tmpl) if with_psi else (g_tmpl,)
    ind = build_Ind(P("x in U"), "x")
    nind = negate(ind)

    def body(s):
        g = s[-1]                       # ((0 notin U | E y...) | n in U)
        inner = g.left
        step = inner.right

        def pos(s2):
            return t_schema(s2, "ind", P("x in U"), "x")

        def neg(s2):
            def base_and_step(s3):
                conj = s3[-1]

                def base(s4):
                    return t_or(s4, g, lambda s5: t_or(s5, inner, close))

                def stp(s4):
                    return t_all(s4, s4[-1], "a", lambda s5: t_or(s5, s5[-1], lambda s6: t_or(
                        s6, g, lambda s7: t_or(s7, inner, lambda s8: t_ex(
                            s8, step, Var("a"), lambda s9: t_and(s9, s9[-1], close, close))))))

                return t_and(s3, conj, base, stp)

            def tail(s3):
                return t_ex(s3, s3[-1], x, lambda s4: t_or(s4, g, close))

            return t_and(s2, nind, base_and_step, tail)

        return t_cut(s, ind, pos, neg)

    return t_all(start, g_tmpl, "U", body)


def _term(n):
    return print_term(canon(n))


def ind_eq(with_psi=False):
    """A x. x=x by arithmetic induction (cut on the Ind instance)."""
    goal = P("A x. x=x")
    phi = P("x=x")
    ind = build_Ind(phi, "x")
    nind = negate(ind)
    start = (NPSI, goal) if with_psi else (goal,)

    def neg(s):
        def left(s2):
            def step(s3):
                return t_all(s3, s3[-1], "a", lambda s4: t_or(s4, s4[-1], close))
            return t_and(s2, s2[-1], close, step)

        def right(s2):
            return t_id(s2, goal)

        return t_and(s, nind, left, right)

    return t_cut(start, ind, lambda s: t_schema(s, "ind", phi, "x"), neg)


def witness_sum(with_psi=False):
    goal = P("E y. y+y=1+1+1+1")
    start = (NPSI, goal) if with_psi else (goal,)
    return t_ex(start, goal, 2, close)


def psi_witness_cut():
    """not psi, E y. y+y=4 with a rank-4 cut on psi itself."""
    goal = P("E y. y+y=1+1+1+1")
    return t_cut((NPSI, goal), PSI, lambda s: t_id(s, PSI), lambda s: t_ex(s, goal, 2, close))


CORPUS = {
    "true0": true_lit,
    "lem-set": lem_set,
    "identity-psi": identity_psi,
    "eq-sym": eq_sym,
    "superset3": lambda: superset_at(3),
    "lemma-cut3": lambda: lemma_cut(3),
    "double-cut": double_cut,
    "ind-set": ind_set,
    "ind3": lambda: ind_at(3),
    "ind5-psi": lambda: ind_at(5, with_psi=True),
    "ind-eq": ind_eq,
    "ind-eq-psi": lambda: ind_eq(with_psi=True),
    "witness-psi": lambda: witness_sum(with_psi=True),
    "psi-cut": psi_witness_cut,
}


def build_all():
    return {name: fn() for name, fn in CORPUS.items()}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, p in build_all().items():
        rep = check_fin(p, TH)
        (OUT / f"{name}.proof").write_text(format_proof(p) + "\n")
        print(f"{name:14s} height {rep.height:3d} size {rep.size:4d} "
              f"max-cut-rank {rep.max_cut_rank if rep.cut_ranks else '-'} "
              f"schema {rep.axiom_tags.get('SchemaAx', 0)}")


if __name__ == "__main__":
    main()
