"""Builders for the schema formulas used throughout the package.

All builders return NNF formulas.  Goedel codes of quoted formulas are
embedded as compact constants (``const``), so a ``Pr`` literal's first
argument always evaluates to ``encode`` of the quoted formula.
"""
from __future__ import annotations

from .ordinal import encode_nat
from .syntax import (
    Add, And, Exists, Forall, Lit, Mul, ONE_T, Or, Var, ZERO_T, all_vars, classify, const,
    disj, encode, eq, exists_prec, forall_lt, forall_prec, free_num_vars, free_vars,
    fresh_name, mem, negate, nmem, pr, subst,
)


class SchemaError(ValueError):
    pass


def _need_free(phi, x):
    if x not in free_vars(phi):
        raise SchemaError(f"variable {x} is not free in {phi}")


def _fresh(base, *fs, extra=()):
    avoid = set(extra)
    for f in fs:
        avoid |= all_vars(f)
    return fresh_name(base, avoid)


def build_Ind(phi, x):
    """not phi(0) | E x'.(phi(x') & not phi(x'+1)) | A x.phi(x)."""
    _need_free(phi, x)
    y = _fresh("y", phi, extra={x})
    py = subst(phi, x, Var(y))
    step = Exists(y, And(py, negate(subst(phi, x, Add(Var(y), ONE_T)))))
    return disj(negate(subst(phi, x, ZERO_T)), step, Forall(x, phi))


def build_set_induction(X="X", x="x"):
    """The second-order induction axiom for a set variable."""
    return Forall(X, build_Ind(mem(Var(x), X), x))


def build_Prog(phi, x):
    """A x.(E y.(y prec x & not phi(y)) | phi(x))."""
    _need_free(phi, x)
    y = _fresh("y", phi, extra={x})
    return Forall(x, Or(exists_prec(y, Var(x), negate(subst(phi, x, Var(y)))), phi))


def build_TI(phi, x):
    """Prog(phi) -> A x.phi(x)."""
    return Or(negate(build_Prog(phi, x)), Forall(x, phi))


def build_TI_below(phi, x, bound_code):
    """Prog(phi) -> A x prec bound. phi(x)."""
    return Or(negate(build_Prog(phi, x)), forall_prec(x, const(bound_code), phi))


def build_WF(alpha, X="X"):
    """A X.(A b.(A c prec b. c in X -> b in X) -> A b prec alpha. b in X)."""
    b, c = Var("b"), Var("c")
    prog = Forall("b", Or(exists_prec("c", b, nmem(c, X)), mem(b, X)))
    return Forall(X, Or(negate(prog), forall_prec("b", const(encode_nat(alpha)), mem(b, X))))


def quote(phi):
    return const(encode(phi))


def build_RFN(theory, phi, x):
    """A x.(Pr[T](code(phi), x) -> phi(x)); phi must have x as its only free variable."""
    if free_vars(phi) != {x}:
        raise SchemaError(f"reflection formula must have exactly {x} free, got {sorted(free_vars(phi))}")
    return Forall(x, Or(Lit("Pr", (quote(phi), Var(x)), True, theory=theory), phi))


def build_Rfn(theory, phi):
    """Pr[T](code(phi)) -> phi for a sentence phi."""
    if free_vars(phi):
        raise SchemaError("local reflection needs a sentence")
    return Or(Lit("Pr", (quote(phi),), True, theory=theory), phi)


def build_Con(theory):
    return Lit("Pr", (quote(eq(ZERO_T, ONE_T)),), True, theory=theory)


def build_lemma_con(theory, psi):
    """psi -> not Pr[T](code(not psi))."""
    return Or(negate(psi), Lit("Pr", (quote(negate(psi)),), True, theory=theory))


def pairing_eq(x, a, b):
    """2x = (a+b)(a+b+1) + 2b, i.e. x is the Cantor pair of a and b."""
    s = Add(a, b)
    two = Add(ONE_T, ONE_T)
    return eq(Mul(two, x), Add(Mul(s, Add(s, ONE_T)), Mul(two, b)))


def contract_vars(phi, xs, out="x"):
    """Fold the number variables ``xs`` into one variable via nested pairing.

    ``x = <x1, <x2, ... <x_{k-1}, x_k>>>``; every quantifier introduced is
    bounded by ``x+1`` so the Pi^1_n / Sigma^1_n class of ``phi`` is kept.
    """
    xs = list(xs)
    if not xs:
        raise SchemaError("no variables to contract")
    for v in xs:
        _need_free(phi, v)
    out = _fresh(out, phi) if out in all_vars(phi) and out not in xs[:1] else out
    avoid = all_vars(phi) | {out}

    def go(f, names, target):
        if len(names) == 1:
            return subst(f, names[0], target)
        rest = fresh_name("r", avoid | set(names))
        avoid.add(rest)
        head = names[0]
        bound = Add(target, ONE_T)
        inner = go(f, names[1:], Var(rest))
        body = Or(negate(pairing_eq(target, Var(head), Var(rest))), inner)
        return forall_lt(head, bound, forall_lt(rest, bound, body))

    if out in xs[1:]:
        raise SchemaError("output variable clashes with a contracted variable")
    return go(phi, xs, Var(out))


__all__ = [
    "SchemaError", "build_Ind", "build_set_induction", "build_Prog", "build_TI", "build_TI_below",
    "build_WF", "quote", "build_RFN", "build_Rfn", "build_Con", "build_lemma_con", "pairing_eq",
    "contract_vars", "classify", "free_num_vars",
]


# -- ordinal-notation facts ----------------------------------------------------------
#
# Closed universal sentences about the coding relations prec, jmp and osum.
# They are true in the standard model (checked at desk scale by the test
# suite) and serve as SchemaAx leaves of kind ``facts``, looked up by name.

def _fact(text):
    from .syntax import parse
    return parse(text)


def tower_code(j: int) -> int:
    """Code of omega_j (omega_0 = 1, omega_{j+1} = w^omega_j)."""
    from .ordinal import omega_tower
    return encode_nat(omega_tower(j))


def tower_fact(j: int):
    """y prec omega_{j+1} gives some x prec omega_j with y prec w^x (needs j >= 1)."""
    if j < 1:
        raise SchemaError("tower facts start at j = 1")
    return _fact(f"A y. (!(y prec {tower_code(j + 1)}) | "
                 f"E x. (x prec {tower_code(j)} & E w. (jmp(0, x, w) & y prec w)))")


class _Facts(dict):
    # ``tower-j`` entries are generated on first use
    def __missing__(self, key):
        if key.startswith("tower-") and key[6:].isdigit() and int(key[6:]) >= 1:
            self[key] = tower_fact(int(key[6:]))
            return self[key]
        raise KeyError(key)

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default


NOTATION_FACTS: dict = _Facts()
NOTATION_FACTS.update({
    # y prec z + w^x: either y <= z, or y prec z + w^u * n for some u prec x
    "split": _fact("A z. A x. A w. A y. (((!jmp(z, x, w) | !(y prec w)) | A t. (!(t prec y) | t prec z))"
                   " | E u. (u prec x & E n. E v. (osum(z, u, n, v) & y prec v)))"),
    "osum-zero": _fact("A z. A u. A v. A y. ((!osum(z, u, 0, v) | !(y prec v)) | y prec z)"),
    "osum-succ": _fact("A z. A u. A m. A b. (!osum(z, u, m+1, b) | E v. (osum(z, u, m, v) & jmp(v, u, b)))"),
    "below-omega": _fact(f"A y. (!(y prec {tower_code(1)}) | E n. E v. (osum(0, 0, n, v) & y prec v))"),
    "zero-min": _fact("A y. !(y prec 0)"),
})
