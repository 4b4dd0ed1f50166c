"""Proof synthesizers and the Xi-sequent audit.

Synthesizers return finitary proofs that pass :func:`calculus.check_fin`:

* :func:`synth_induction_instance` unrolls ``phi(0) & A x.(phi(x) -> phi(x+1)) -> phi(n)``
  into a ladder of size affine in ``n``.
* :func:`synth_reflection_to_induction` derives the induction instance for
  ``phi`` from one uniform-reflection axiom and a ``Pr`` obligation.
* :func:`synth_lift` proves ``Prog(phi) -> A x prec w_{k+1}. phi(x)`` by
  iterating :func:`gentzen_jump` ``k`` times.

The lifting proofs use ordinal-notation facts (``schemas.NOTATION_FACTS``)
as axioms and induction only for formulas of the declared class.
"""
from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from . import schemas
from .calculus import (
    Proof, Theory, check_fin, close, make_theory, proof_size, t_all, t_and, t_cut, t_ex, t_id,
    t_or, t_schema,
)
from .omega import Code, descriptor, expand
from .schemas import NOTATION_FACTS, build_Ind, build_Prog, build_RFN, build_TI_below, tower_code
from .syntax import (
    Add, And, Exists, Forall, Formula, Lit, ONE_T, Or, Var, ZERO_T, all_vars, canon, classify, const,
    disj, eq, exists_prec, forall_prec, free_num_vars, free_set_vars, free_vars, fresh_name,
    is_set_var, jmp, negate, normalize, osum, print_formula, subst, subst_set,
)
from .truth import F, T, U, SetUniverse, Truth3, evaluate, valuations

#: largest k accepted by synth_lift unless the caller raises the gate
MAX_LIFT = 3


class SynthError(ValueError):
    pass


# -- tactic helpers ------------------------------------------------------------------

class _Names:
    """Hands out variable names unused anywhere in the formulas seen so far."""

    def __init__(self, *formulas):
        self.used = set()
        for f in formulas:
            self.see(f)

    def see(self, f):
        self.used |= all_vars(f)

    def __call__(self, base):
        name = fresh_name(base, self.used)
        self.used.add(name)
        return name


def _ax(s):
    """Close ``s`` by an axiom or an identity on a complementary pair."""
    try:
        return close(s)
    except ValueError:
        pass
    for f in s:
        if not isinstance(f, Lit) and negate(f) in s:
            return t_id(s, f)
    raise SynthError("open leaf: " + ", ".join(print_formula(f) for f in s))


def _inst(f, w):
    return subst_set(f.body, f.var, w) if is_set_var(f.var) else subst(f.body, f.var, w)


def _use(s, ex, ws, leaves):
    """Instantiate the existential ``ex`` (in ``s``) with ``ws`` and split its conjunction.

    ``leaves`` holds one continuation per conjunct, called as ``k(seq, conjunct)``;
    ``None`` closes the leaf by :func:`_ax`.
    """
    if ws:
        body = _inst(ex, ws[0])
        return t_ex(s, ex, ws[0], lambda s2: _use(s2, body, ws[1:], leaves))
    return _split(s, ex, list(leaves))


def _split(s, conj, leaves):
    if len(leaves) == 1:
        k = leaves[0]
        return _ax(s) if k is None else k(s, conj)
    if not isinstance(conj, And):
        raise SynthError(f"expected a conjunction, got {print_formula(conj)}")
    last = leaves[-1]
    return t_and(s, conj, lambda sl: _split(sl, conj.left, leaves[:-1]),
                 lambda sr: _ax(sr) if last is None else last(sr, conj.right))


def _all(s, f, eigen, k):
    """Introduce the universal ``f`` with ``eigen``; ``k(seq, instance)``."""
    body = _inst(f, Var(eigen) if not is_set_var(eigen) else eigen)
    return t_all(s, f, eigen, lambda s2: k(s2, body))


def _or(s, f, k):
    return t_or(s, f, lambda s2: k(s2))


def _intro(s, f, names, k):
    """Introduce ``A v. (hyp | rest)`` repeatedly, one eigenvariable per name, then
    split any trailing disjunctions; ``k(seq, goal)`` gets the last right disjunct.
    """
    if not names:
        if isinstance(f, Or):
            return _or(s, f, lambda s2: _intro(s2, f.right, names, k))
        return k(s, f)
    if isinstance(f, Forall):
        return _all(s, f, names[0], lambda s2, b: _intro(s2, b, names[1:], k))
    if isinstance(f, Or):
        return _or(s, f, lambda s2: _intro(s2, f.right, names, k))
    raise SynthError(f"cannot introduce {print_formula(f)}")


def _fact(s, name, ws, leaves):
    f = NOTATION_FACTS[name]
    return t_cut(s, f, lambda sp: t_schema(sp, "facts", None, name),
                 lambda sn: _use(sn, negate(f), ws, leaves))


def _induct(s, c, m, base, step, use):
    """Cut on the induction instance for ``c`` in ``m``; three continuations for
    ``c(0)``, the step ``A m.(~c(m) | c(m+1))`` and ``E m. ~c(m)``."""
    ind = build_Ind(c, m)
    return t_cut(s, ind, lambda sp: t_schema(sp, "ind", c, m),
                 lambda sn: _split(sn, negate(ind), [base, step, use]))


# -- induction ladder ----------------------------------------------------------------

def _succ_terms(n):
    """``[0, 0+1, 0+1+1, ...]`` sharing structure (so hashes are cached once)."""
    out = [ZERO_T]
    for _ in range(n):
        out.append(Add(out[-1], ONE_T))
    return out


def _step_formula(phi, x):
    y = fresh_name("y", all_vars(phi) | {x})
    return Exists(y, And(subst(phi, x, Var(y)), negate(subst(phi, x, Add(Var(y), ONE_T)))))


def induction_goal(phi: Formula, x: str, target) -> Formula:
    """``~phi(0) | E y.(phi(y) & ~phi(y+1)) | phi(target)``."""
    return disj(negate(subst(phi, x, ZERO_T)), _step_formula(phi, x), subst(phi, x, target))


def _eq_identity(s, a, b):
    """Prove ``s`` containing ``~a`` and ``b`` where ``b`` is ``a`` with some closed
    subterms replaced by equal-valued ones (an inequation ``s!=t`` must be in ``s``)."""
    if isinstance(a, Lit):
        return close(s)
    if isinstance(a, Or):
        na = negate(a)
        return t_or(s, b, lambda s1: t_and(s1, na, lambda s2: _eq_identity(s2, a.left, b.left),
                                           lambda s2: _eq_identity(s2, a.right, b.right)))
    if isinstance(a, And):
        na = negate(a)
        return t_and(s, b, lambda s1: t_or(s1, na, lambda s2: _eq_identity(s2, a.left, b.left)),
                     lambda s1: t_or(s1, na, lambda s2: _eq_identity(s2, a.right, b.right)))
    names = _Names(*s)
    if isinstance(a, Forall):
        e = names("E" if is_set_var(a.var) else "e")
        w = e if is_set_var(e) else Var(e)
        return t_all(s, b, e, lambda s1: t_ex(s1, negate(a), w, lambda s2: _eq_identity(
            s2, _inst(a, w), _inst(b, w))))
    e = names("E" if is_set_var(a.var) else "e")
    w = e if is_set_var(e) else Var(e)
    return t_all(s, negate(a), e, lambda s1: t_ex(s1, b, w, lambda s2: _eq_identity(
        s2, _inst(a, w), _inst(b, w))))


def synth_induction_instance(phi: Formula, x: str, n: int) -> Proof:
    """Pure-logic proof of ``~phi(0) | E y.(phi(y) & ~phi(y+1)) | phi(n)``.

    The ladder climbs through the successor terms ``0+1+...+1``; a final cut on
    ``0+1+...+1 = n`` moves the result onto the canonical numeral, so the
    conclusion is exactly the code that ``subst_num`` produces.
    """
    if x not in free_num_vars(phi):
        raise SynthError(f"{x} is not free in {print_formula(phi)}")
    if n < 0:
        raise SynthError("n must be a natural number")
    # the ladder (and its checker) recurse a few frames per rung
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 40 * n + 2000))
    goal = induction_goal(phi, x, canon(n))
    step = goal.left.right
    succ = _succ_terms(n)
    top = subst(phi, x, succ[n])
    target = subst(phi, x, canon(n))

    def ladder(s, i):
        here = subst(phi, x, succ[i])
        if i == 0:
            return t_id(s, here)
        w = _inst(step, succ[i - 1])
        return t_ex(s, step, succ[i - 1], lambda s1: t_and(
            s1, w, lambda s2: ladder(s2, i - 1), lambda s2: t_id(s2, here)))

    def body(s):
        neq = eq(succ[n], canon(n))
        return t_cut(s, neq, close, lambda s1: t_cut(
            s1, top, lambda s2: ladder(s2, n), lambda s2: _eq_identity(s2, top, target)))

    return t_or((goal,), goal, lambda s: t_or(s, goal.left, body))


# -- reflection to induction -----------------------------------------------------------

def synth_reflection_to_induction(phi: Formula, x: str, th: Theory) -> Proof:
    """``A x.(~phi(0) | E y.(phi(y) & ~phi(y+1)) | phi(x))`` from one RFN instance.

    Leaves: the RFN axiom for the bracketed formula, a ``PrAx`` obligation for
    its provability at the eigenvariable, and an identity.
    """
    if free_vars(phi) != {x}:
        raise SynthError(f"reflection needs {x} as the only free variable")
    chi = induction_goal(phi, x, Var(x))
    descs = [d for d in th.descriptors("rfn") if d.admits(chi)]
    if not descs:
        raise SynthError(f"theory {th.name} has no rfn schema covering {classify(chi)}")
    d = descs[0]
    rfn = build_RFN(th.pr_name(d), chi, x)
    goal = Forall(x, chi)
    a = _Names(goal, rfn)("a")

    def body(s):
        inst = subst(chi, x, Var(a))

        def neg(sn):
            nr = negate(rfn)
            w = _inst(nr, Var(a))
            return t_ex(sn, nr, Var(a), lambda s1: t_and(
                s1, w, lambda s2: Proof("PrAx", s2, principal=w.left), lambda s2: t_id(s2, inst)))

        return t_cut(s, rfn, lambda sp: t_schema(sp, "rfn", chi, x), neg)

    return t_all((goal,), goal, a, body)


# -- Gentzen jump and lifting -----------------------------------------------------------

@dataclass(frozen=True)
class _Jump:
    formula: Formula     # phi+(x)
    z: str
    w: str
    y: str


def _jump(phi, x):
    used = all_vars(phi) | {x}
    z = fresh_name("z", used)
    w = fresh_name("w", used | {z})
    y = fresh_name("y", used | {z, w})
    below_z = exists_prec(y, Var(z), negate(subst(phi, x, Var(y))))
    below_w = forall_prec(y, Var(w), subst(phi, x, Var(y)))
    f = Forall(z, Or(below_z, Forall(w, Or(negate(jmp(Var(z), Var(x), Var(w))), below_w))))
    return _Jump(f, z, w, y)


def gentzen_jump(phi: Formula, x: str) -> Formula:
    """``A z.(A y prec z. phi(y) -> A w.(jmp(z,x,w) -> A y prec w. phi(y)))``.

    If ``phi`` holds below ``z`` it holds below ``z + w^x``.  Two number
    universals are added; since ``phi`` occurs in both polarities the jump of
    a Pi^1_n or Sigma^1_n formula is Pi^1_{n+1}, and arithmetic stays arithmetic.
    """
    if x not in free_num_vars(phi):
        raise SynthError(f"{x} is not free in {print_formula(phi)}")
    return _jump(phi, x).formula


class _Lifter:
    def __init__(self, phis, x, names):
        self.phis, self.x, self.fresh = phis, x, names

    def prog_at(self, s, nprog, t, below):
        """Use ``~Prog(phi)`` (in ``s``) at ``t``: ``below`` proves ``A y prec t. phi(y)``."""
        return _use(s, nprog, [t], [below, None])

    # Prog(phi) -> Prog(phi+)
    def jump_step(self, s, i):
        phi, x, f = self.phis[i], self.x, self.fresh
        jp = _jump(phi, x)
        nprog = negate(build_Prog(phi, x))
        goal = build_Prog(jp.formula, x)
        a, z0, w0, y0 = f("a"), f("z"), f("w"), f("y")

        def inside(s1, body):              # body: E u prec a. ~phi+(u) | phi+(a)
            hyp = body.left
            return _or(s1, body, lambda s2: _intro(s2, body.right, [z0, w0, y0], lambda s3, g: fin(s3, hyp, g)))

        def fin(s, hyp, g):
            A = exists_prec(jp.y, Var(z0), negate(subst(phi, x, Var(jp.y))))
            return _fact(s, "split", [Var(z0), Var(a), Var(w0), Var(y0)],
                         [None, None, lambda s1, le: self.left_of(s1, le, nprog, A, y0, z0, phi),
                          lambda s1, big: self.big(s1, big, hyp, jp, phi, z0, y0, A)])

        return _all(s, goal, a, inside)

    def left_of(self, s, le, nprog, A, y0, z0, phi):
        """``y0`` lies below ``z0`` or some ``t < y0`` is not below ``z0``."""
        t0 = self.fresh("t")

        def below(s1, bf):
            def leaf(s2, g):
                return _use(s2, le, [Var(t0)], [None, lambda s3, _: _use(s3, A, [Var(t0)], [None, None])])
            return _intro(s1, bf, [t0], leaf)

        return self.prog_at(s, nprog, Var(y0), below)

    def big(self, s, big, hyp, jp, phi, z0, y0, A):
        x, f = self.x, self.fresh
        u0, n0, v0 = f("u"), f("n"), f("v")

        def after(s1, _g):
            return _use(s1, hyp, [Var(u0)], [None, lambda s2, npu: self.osum_ind(
                s2, npu, jp, phi, Var(z0), Var(u0), n0, v0, y0, A)])

        return _intro(s, big, [u0, n0, v0], after)

    def osum_ind(self, s, npu, jp, phi, z, u, n0, v0, y0, A):
        """Induction on ``m``: ``A v.(osum(z,u,m,v) -> A y prec v. phi(y))``."""
        x, f = self.x, self.fresh
        m, v = f("m"), f("v")
        below_v = forall_prec(jp.y, Var(v), subst(phi, x, Var(jp.y)))
        c = Forall(v, Or(negate(osum(z, u, Var(m), Var(v))), below_v))
        f.see(build_Ind(c, m))

        def base(s1, c0):
            v1, y1 = f("v"), f("y")
            return _intro(s1, c0, [v1, y1], lambda s2, g: _fact(
                s2, "osum-zero", [z, u, Var(v1), Var(y1)],
                [None, None, lambda s3, _: _use(s3, A, [Var(y1)], [None, None])]))

        def step(s1, st):
            m1, b1, y2, v2 = f("m"), f("b"), f("y"), f("v")

            def body(s2, g, ncm):
                def through(s3, gv):
                    def leaf(s4, _g):
                        return _use(s4, ncm, [Var(v2)], [None, lambda s5, a2: _use(
                            s5, npu, [Var(v2)], [None, lambda s6, wf: _use(
                                s6, wf, [Var(b1)], [None, lambda s7, yf: _use(s7, yf, [Var(y2)], [None, None])])])])
                    return _intro(s3, gv, [v2], leaf)
                return _fact(s2, "osum-succ", [z, u, Var(m1), Var(b1)], [None, through])

            def split_step(s2, b):
                ncm = b.left
                return _or(s2, b, lambda s3: _intro(s3, b.right, [b1, y2], lambda s4, g: body(s4, g, ncm)))

            return _all(s1, st, m1, split_step)

        def use(s1, ex):
            return _use(s1, ex, [Var(n0)], [lambda s2, nc: _use(
                s2, nc, [Var(v0)], [None, lambda s3, yf: _use(s3, yf, [Var(y0)], [None, None])])])

        return _induct(s, c, m, base, step, use)

    # Prog(psi) -> A x prec w. psi(x)
    def base(self, s, i, g):
        psi, x, f = self.phis[i], self.x, self.fresh
        nprog = negate(build_Prog(psi, x))
        y0, n0, v0 = f("y"), f("n"), f("v")
        return _intro(s, g, [y0], lambda s1, _g: _fact(s1, "below-omega", [Var(y0)], [
            None, lambda s2, gf: _intro(s2, gf, [n0, v0], lambda s3, _h: self.finite_ind(
                s3, psi, nprog, n0, v0, y0))]))

    def finite_ind(self, s, psi, nprog, n0, v0, y0):
        """Induction on ``m``: ``A v.(osum(0,0,m,v) -> A y prec v. psi(y))``."""
        x, f = self.x, self.fresh
        m, v = f("m"), f("v")
        yb = f("y")
        c = Forall(v, Or(negate(osum(ZERO_T, ZERO_T, Var(m), Var(v))),
                         forall_prec(yb, Var(v), subst(psi, x, Var(yb)))))
        f.see(build_Ind(c, m))

        def zero_min(s1, t):
            return _fact(s1, "zero-min", [t], [None])

        def base(s1, c0):
            v1, y1 = f("v"), f("y")
            return _intro(s1, c0, [v1, y1], lambda s2, g: _fact(
                s2, "osum-zero", [ZERO_T, ZERO_T, Var(v1), Var(y1)],
                [None, None, lambda s3, _: zero_min(s3, Var(y1))]))

        def step(s1, st):
            m1, b1, y2, v2, t0, u0 = f("m"), f("b"), f("y"), f("v"), f("t"), f("u")

            def left(s4, le, ncm):
                def below(s5, bf):
                    return _intro(s5, bf, [t0], lambda s6, _g: _use(s6, le, [Var(t0)], [
                        None, lambda s7, _n: _use(s7, ncm, [Var(v2)], [
                            None, lambda s8, yf: _use(s8, yf, [Var(t0)], [None, None])])]))
                return self.prog_at(s4, nprog, Var(y2), below)

            def big(s4, bg):
                return _intro(s4, bg, [u0], lambda s5, _g: zero_min(s5, Var(u0)))

            def body(s2, ncm):
                def through(s3, gv):
                    return _intro(s3, gv, [v2], lambda s4, _g: _fact(
                        s4, "split", [Var(v2), ZERO_T, Var(b1), Var(y2)],
                        [None, None, lambda s5, le: left(s5, le, ncm), big]))
                return _fact(s2, "osum-succ", [ZERO_T, ZERO_T, Var(m1), Var(b1)], [None, through])

            def split_step(s2, b):
                return _or(s2, b, lambda s3: _intro(s3, b.right, [b1, y2], lambda s4, g: body(s4, b.left)))

            return _all(s1, st, m1, split_step)

        def use(s1, ex):
            return _use(s1, ex, [Var(n0)], [lambda s2, nc: _use(
                s2, nc, [Var(v0)], [None, lambda s3, yf: _use(s3, yf, [Var(y0)], [None, None])])])

        return _induct(s, c, m, base, step, use)

    # A x prec w_j. phi+(x) -> A y prec w_{j+1}. phi(y)
    def descent(self, s, i, j, g, hf):
        phi, f = self.phis[i], self.fresh
        y0, x0, w0, y1 = f("y"), f("x"), f("w"), f("y")

        def zero_case(s1, zf):
            return _intro(s1, zf, [y1], lambda s2, _g: _fact(s2, "zero-min", [Var(y1)], [None]))

        def jump_case(s1, wf):
            return _use(s1, wf, [Var(w0)], [None, lambda s2, yf: _use(s2, yf, [Var(y0)], [None, None])])

        def got(s1, _g):
            return _use(s1, hf, [Var(x0)], [None, lambda s2, np: _use(
                s2, np, [ZERO_T], [zero_case, jump_case])])

        return _intro(s, g, [y0], lambda s1, _g: _fact(s1, f"tower-{j}", [Var(y0)], [
            None, lambda s2, q: _intro(s2, q, [x0, w0], got)]))


@dataclass(frozen=True)
class LiftResult:
    proof: Proof
    theory: Theory
    bound_code: int
    level: int          # induction is used for Pi^1_level formulas only
    chain: tuple        # phi, phi+, phi++, ...


def synth_lift(phi: Formula, x: str, k: int, max_k: int = MAX_LIFT) -> LiftResult:
    """Proof of ``Prog(phi) -> A x prec w_{k+1}. phi(x)`` (``w_1 = w``, ``w_{j+1} = w^w_j``).

    Applies the jump ``k`` times, proves transfinite induction up to ``w`` for
    the last formula by ordinary induction, then climbs back down the tower.
    Each step above ``k = max_k`` roughly doubles the proof; raise ``max_k``
    deliberately.
    """
    if x not in free_num_vars(phi):
        raise SynthError(f"{x} is not free in {print_formula(phi)}")
    if not 0 <= k <= max_k:
        raise SynthError(f"k={k} is outside the resource gate 0..{max_k}")
    phis = [phi]
    for _ in range(k):
        phis.append(gentzen_jump(phis[-1], x))
    code = tower_code(k + 1)
    goal = build_TI_below(phi, x, code)
    progs = [build_Prog(p, x) for p in phis]
    b = [forall_prec(x, const(tower_code(k - i + 1)), phis[i]) for i in range(k + 1)]
    facts = [NOTATION_FACTS[n] for n in ("split", "osum-zero", "osum-succ", "below-omega", "zero-min")]
    facts += [NOTATION_FACTS[f"tower-{j}"] for j in range(1, k + 1)]
    names = _Names(goal, *phis, *progs, *b, *facts)
    lf = _Lifter(phis, x, names)

    def finish(s, i):
        # ~B_{i+1} is in s; prove B_i
        j = k - i
        hf = negate(b[i + 1])
        if i == 0:
            return lf.descent(s, 0, j, b[0], hf)
        return t_cut(s, b[i], lambda sp: lf.descent(sp, i, j, b[i], hf), lambda sn: finish(sn, i - 1))

    def stage(s, i):
        if i < k:
            return t_cut(s, progs[i + 1], lambda sp: lf.jump_step(sp, i), lambda sn: stage(sn, i + 1))
        if k == 0:
            return lf.base(s, 0, b[0])
        return t_cut(s, b[k], lambda sp: lf.base(sp, k, b[k]), lambda sn: finish(sn, k - 1))

    proof = t_or((goal,), goal, lambda s: stage(s, 0))
    level = max((classify(p.formula).pi1 for p in _schema_nodes(proof, "ind")), default=0)
    th = make_theory("lift", None, [f"ind-pi1-{level}", "notation-facts"])
    return LiftResult(proof, th, code, level, tuple(phis))


def _schema_nodes(p, kind):
    stack = [p]
    while stack:
        q = stack.pop()
        if q.rule == "SchemaAx" and q.schema == kind:
            yield q
        stack.extend(q.children)


# -- Xi-sequents ---------------------------------------------------------------------

class XiError(ValueError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"at {_pos_text(pos)}: {msg}")
        self.pos = pos


def _pos_text(pos):
    return ".".join(map(str, pos)) or "-"


@dataclass(frozen=True)
class XiContext:
    """End-sequent data for a Xi-audit.

    ``psi`` is the theory sentence ``A X. psi(X)``; ``target`` is either
    ``A X. E Y. phi`` (the Pi case, which needs the distinguished set ``x0``)
    or ``E X. A Y. phi`` (the Sigma case).  Numerals in ``target`` play the
    role of the argument.
    """
    psi: Formula
    target: Formula
    n: int
    x0: Optional[str] = None

    def __post_init__(self):
        if free_vars(self.psi) or free_vars(self.target):
            raise XiError("psi and the target must be closed")
        if not (isinstance(self.psi, Forall) and is_set_var(self.psi.var)):
            raise XiError("psi must start with a set universal")
        t = self.target
        c = classify(t)
        if self.case == "pi":
            if c.pi1 > self.n + 2:
                raise XiError(f"target is not Pi^1_{self.n + 2}")
        elif self.case == "sigma":
            if self.n < 1 or c.sigma1 > self.n + 1:
                raise XiError(f"target is not Sigma^1_{self.n + 1} with n >= 1")
        else:
            raise XiError("target must be A X. E Y. phi or E X. A Y. phi")

    @property
    def case(self):
        t = self.target
        if isinstance(t, (Forall, Exists)) and is_set_var(t.var) and isinstance(t.body, (Forall, Exists)) \
                and is_set_var(t.body.var) and type(t) is not type(t.body):
            return "pi" if isinstance(t, Forall) else "sigma"
        return None

    @property
    def xi(self):
        return (normalize(negate(self.psi)), normalize(self.target))

    def is_lambda(self, f):
        f = normalize(f)
        if f in self.xi:
            return True
        t = self.xi[1]
        return any(normalize(subst_set(t.body, t.var, v)) == f for v in free_set_vars(f))


@dataclass(frozen=True)
class XiSequent:
    pi: tuple
    lam: tuple


@dataclass(frozen=True)
class SigmaXiSequent:
    sigma: tuple
    lam: tuple


@dataclass(frozen=True)
class NotXi:
    formula: Formula


def classify_Xi(seq, ctx: XiContext):
    """Split ``seq`` into its bounded part and its Lambda part, or name the first misfit."""
    lam, rest = [], []
    for f in seq:
        (lam if ctx.is_lambda(f) else rest).append(f)
    for f in rest:
        c = classify(f)
        if (c.pi1 if ctx.case == "pi" else c.sigma1) > (ctx.n if ctx.case == "pi" else ctx.n - 1):
            return NotXi(f)
    if ctx.case == "pi":
        return XiSequent(tuple(rest), tuple(lam))
    return SigmaXiSequent(tuple(rest), tuple(lam))


@dataclass(frozen=True)
class AuditRow:
    pos: tuple
    kind: str           # Xi or SigmaXi (or "sequent" for the plain truth audit)
    verdict: str        # True False Unknown vacuous exempt
    note: str = ""
    x0: Optional[str] = None


@dataclass
class AuditReport:
    rows: list = field(default_factory=list)

    def counts(self):
        return Counter(r.verdict for r in self.rows)

    @property
    def violations(self):
        return [r for r in self.rows if r.verdict == "False"]

    def format(self):
        out = ["pos\tclass\tverdict\tnote"]
        for r in self.rows:
            note = r.note if r.x0 is None else f"X0={r.x0} {r.note}".strip()
            out.append(f"{_pos_text(r.pos)}\t{r.kind}\t{r.verdict}\t{note}")
        c = self.counts()
        out.append(f"# nodes {len(self.rows)}; " + ", ".join(f"{k} {c[k]}" for k in sorted(c))
                   + f"; violations {len(self.violations)}")
        return "\n".join(out) + "\n"


def _disjunction_verdict(fs, u, fixed, budget):
    """Worst verdict of the disjunction over all valuations; (verdict, note)."""
    svars = set().union(*(free_set_vars(f) for f in fs))
    worst, notes = T, set()
    for val in valuations(svars, u, fixed):
        verdicts = [evaluate(f, val, u, budget, closed=True) for f in fs]
        vals = [x.value for x in verdicts]
        v = T if T in vals else (F if all(x is F for x in vals) else U)
        if v is F:
            return F, " ".join(f"{k}={val.sets[k]}" for k in sorted(val.sets))
        if v is U:
            worst = U
            for x in verdicts:
                notes |= x.notes - {"universe-relative"}
    return worst, ", ".join(sorted(notes)) if worst is U else ""


def _require_cut_free(c):
    if descriptor(c).cut_rank != 0:
        raise XiError("the code is not cut-free")


def audit_Xi_truth(c: Code, ctx: XiContext, u: SetUniverse, depth: int = 3, width: int = 3,
                   budget: int = 1000, x0_all: bool = False) -> AuditReport:
    """Evaluate the bounded part of every visited node's sequent.

    The eigenvariable of each introduction of the target's set universal is
    pinned to ``X0``; other free sets range over ``u``.  With ``x0_all`` the
    walk is repeated for every choice of ``X0`` in ``u``.  The root's empty
    bounded part is exempt; elsewhere an empty bounded part is reported as
    ``vacuous``.  A node outside the Xi shape raises :class:`XiError`.
    """
    _require_cut_free(c)
    if ctx.case == "pi" and not x0_all and ctx.x0 not in u.names:
        raise XiError(f"X0={ctx.x0!r} is not a set of the universe")
    choices = u.names if (x0_all and ctx.case == "pi") else (ctx.x0,)
    tree = expand(c, depth, width)
    target = ctx.xi[1]
    rep = AuditReport()
    for x0 in choices:
        stack = [(tree, {})]
        while stack:
            e, bound = stack.pop()
            n = e.node
            cls = classify_Xi(n.seq, ctx)
            if isinstance(cls, NotXi):
                raise XiError(f"not a Xi-sequent: {print_formula(cls.formula)}", e.pos)
            part = cls.pi if ctx.case == "pi" else cls.sigma
            kind = "Xi" if ctx.case == "pi" else "SigmaXi"
            if not part:
                rep.rows.append(AuditRow(e.pos, kind, "exempt" if not e.pos else "vacuous", "", x0))
            else:
                fixed = {v: x0 for v, _ in bound.items() if any(v in free_set_vars(f) for f in part)}
                v, note = _disjunction_verdict(part, u, fixed, budget)
                rep.rows.append(AuditRow(e.pos, kind, str(v), note, x0))
            child_bound = bound
            if ctx.case == "pi" and n.rule == "AllSet" and normalize(n.principal) == target:
                child_bound = {**bound, n.arg: x0}
            for k in reversed(e.children):
                stack.append((k, child_bound))
    rep.rows.sort(key=lambda r: (r.x0 or "", r.pos))
    return rep


def audit_sequent_truth(c: Code, u: SetUniverse, depth: int = 3, width: int = 3,
                        budget: int = 1000) -> AuditReport:
    """Every visited sequent should have a true disjunct under every valuation."""
    _require_cut_free(c)
    rep = AuditReport()
    for e in _walk(expand(c, depth, width)):
        v, note = _disjunction_verdict(e.node.seq, u, {}, budget)
        rep.rows.append(AuditRow(e.pos, "sequent", str(v), note))
    rep.rows.sort(key=lambda r: r.pos)
    return rep


def _walk(e):
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(x.children)
