"""Coded omega-proofs: embedding, local checking and cut elimination.

A code is an operator expression evaluated lazily: ``node()`` yields the
descriptor of its root and ``child(i)`` the code of the i-th premise (for
the omega-rule, ``i`` is the numeral the premise instantiates).  Nothing is
ever materialized beyond what a caller probes.

Sequent conventions
    Sequents contain no free number variables (embedding instantiates them)
    and every closed term is normalized, so syntactic equality of literals
    coincides with equality of their values.  Premises may be *subsets* of
    the conclusion plus the active formula (built-in weakening); ``Rep``
    premises are subsets of the conclusion.

Cut ranks
    ``cut_rank = d`` declares that every cut in the subtree has rank < d,
    so rank 0 means cut-free.  Elimination maps tag a, rank d+1 to tag
    w^a, rank d.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .calculus import Proof, Theory, check_fin, seq_free_vars
from .ordinal import ONE, OMEGA, ZERO, Ordinal, add, compare, format_ordinal, omega_pow, LT
from .syntax import (
    And, Exists, Forall, Formula, Lit, Or, Term, canon, free_num_vars, free_vars, fresh_name,
    is_set_var, literal_value, negate, normalize, normalize_term, print_formula, print_term, rank,
    subst, subst_set, term_subst, term_value, term_vars,
)

OMEGA_ARITY = "omega"
NAT = Ordinal.nat


class EmbedError(ValueError):
    pass


class OutOfTree(LookupError):
    pass


@dataclass(frozen=True)
class Node:
    """Descriptor of one omega-proof node."""
    seq: tuple
    rule: str           # Ax OrIntro AndIntro ExNum OmegaAll AllSet ExSet Cut Rep
    tag: Ordinal
    cut_rank: int
    principal: Optional[Formula] = None
    arg: object = None  # disjunct index, witness, eigenvariable or cut formula
    arity: object = 0   # int or OMEGA_ARITY

    def arg_text(self) -> str:
        a = self.arg
        if a is None:
            return ""
        if isinstance(a, Formula):
            return print_formula(a)
        if isinstance(a, Term):
            return print_term(a)
        return str(a)


# -- sequent helpers --------------------------------------------------------------

def sadd(seq, *fs):
    out = list(seq)
    for f in fs:
        if f not in out:
            out.append(f)
    return tuple(out)


def sremove(seq, f):
    return tuple(g for g in seq if g != f)


def sunion(a, b):
    return sadd(a, *b)


def inst(q, val):
    """Instance of quantifier ``q`` at a numeral/closed term or a set variable."""
    if is_set_var(q.var):
        return subst_set(q.body, q.var, val)
    if isinstance(val, int):
        val = canon(val)
    return normalize(subst(q.body, q.var, val))


def is_axiom(seq) -> bool:
    lits = [f for f in seq if isinstance(f, Lit)]
    ls = set(lits)
    for f in lits:
        if f.rel not in ("in", "Pr") and not _lit_vars(f) and literal_value(f):
            return True
        if negate(f) in ls:
            return True
    return False


def _lit_vars(f):
    out = set()
    for t in f.terms:
        out |= term_vars(t)
    return out


def ident_tag(a: Formula) -> Ordinal:
    return NAT(3 * rank(a))


# -- codes --------------------------------------------------------------------------

class Code:
    """Base class; subclasses implement ``_node`` and ``child``."""

    _cache = None

    def node(self) -> Node:
        if self._cache is None:
            object.__setattr__(self, "_cache", self._node())
        return self._cache

    def _node(self) -> Node:
        raise NotImplementedError

    def child(self, i: int) -> "Code":
        raise NotImplementedError

    # declared bookkeeping
    @property
    def end_sequent(self):
        return self.node().seq

    @property
    def tag(self):
        return self.node().tag

    @property
    def cut_rank(self):
        return self.node().cut_rank


def _check_index(node, i):
    if node.arity == OMEGA_ARITY:
        if not isinstance(i, int) or i < 0:
            raise OutOfTree(i)
    elif not (0 <= i < node.arity):
        raise OutOfTree(i)


class Lazy(Code):
    """A node given directly, with children produced on demand."""

    def __init__(self, node: Node, kids=None):
        self._n = node
        self._kids = kids

    def _node(self):
        return self._n

    def child(self, i):
        _check_index(self._n, i)
        return self._kids(i)


def rep(child: Code, seq, tag: Ordinal, cut_rank: int) -> Code:
    return Lazy(Node(tuple(seq), "Rep", tag, cut_rank, arity=1), lambda i: child)


# -- identity derivations ------------------------------------------------------------

def ident(a: Formula, ctx, cut_rank=0) -> Code:
    """Cut-free omega-derivation of ``ctx, a, ~a`` with tag 3*rank(a)."""
    na = negate(a)
    seq = sadd(tuple(ctx), a, na)
    if isinstance(a, Lit):
        return Lazy(Node(seq, "Ax", ZERO, cut_rank))
    if isinstance(a, (Exists, Or)):
        a, na = na, a
    r = 3 * rank(a)
    if isinstance(a, Forall) and not is_set_var(a.var):
        def kid(n):
            b = inst(a, n)
            s1 = sadd(seq, b)
            inner = ident(b, s1, cut_rank)
            return Lazy(Node(s1, "ExNum", NAT(r - 1), cut_rank, na, canon(n), 1), lambda i: inner)
        return Lazy(Node(seq, "OmegaAll", NAT(r), cut_rank, a, None, OMEGA_ARITY), kid)
    if isinstance(a, Forall):
        e = fresh_name(a.var, seq_free_vars(seq))
        b = inst(a, e)
        s1 = sadd(seq, b)
        inner = ident(b, s1, cut_rank)
        ex = Lazy(Node(s1, "ExSet", NAT(r - 1), cut_rank, na, e, 1), lambda i: inner)
        return Lazy(Node(seq, "AllSet", NAT(r), cut_rank, a, e, 1), lambda i: ex)
    # a = B & C, na = ~B | ~C
    s1 = sadd(seq, na.left)
    s2 = sadd(s1, na.right)
    conj = Lazy(Node(s2, "AndIntro", NAT(r - 2), cut_rank, a, None, 2),
                lambda i: ident(a.left if i == 0 else a.right, sadd(s2, a.left if i == 0 else a.right), cut_rank))
    o2 = Lazy(Node(s1, "OrIntro", NAT(r - 1), cut_rank, na, 1, 1), lambda i: conj)
    return Lazy(Node(seq, "OrIntro", NAT(r), cut_rank, na, 0, 1), lambda i: o2)


# -- embedding -------------------------------------------------------------------------

IND_TAG = add(OMEGA, NAT(4))


class _EmbCtx:
    def __init__(self, theory, cut_rank):
        self.theory = theory
        self.cut_rank = cut_rank
        self.tags = {}

    def tag(self, p: Proof) -> Ordinal:
        k = id(p)
        if k not in self.tags:
            if p.rule == "SchemaAx":
                t = IND_TAG
            elif not p.children:
                t = ZERO
            else:
                t = max((self.tag(c) for c in p.children), key=_okey)
                t = add(t, NAT(2 if p.rule == "OrIntro" else 1))
            self.tags[k] = t
        return self.tags[k]


def _okey(o):
    from functools import cmp_to_key
    return cmp_to_key(compare)(o)


def instantiate_env(f: Formula, env: dict) -> Formula:
    for v in sorted(free_num_vars(f)):
        f = subst(f, v, canon(env.get(v, 0)))
    return normalize(f)


def _env_term(t: Term, env: dict) -> Term:
    for v in sorted(term_vars(t)):
        t = term_subst(t, v, canon(env.get(v, 0)))
    return normalize_term(t)


def _emb(p: Proof, env: dict, ctx: _EmbCtx) -> Code:
    seq = tuple(instantiate_env(f, env) for f in p.seq)
    seq = sadd((), *seq)
    tag = ctx.tag(p)
    r = ctx.cut_rank
    rule = p.rule
    if rule in ("LogAx", "TrueLit", "EqAx"):
        return Lazy(Node(seq, "Ax", tag, r))
    if rule == "SchemaAx":
        from .calculus import schema_instance
        d = next(d for d in ctx.theory.descriptors("ind") if d.admits(p.formula))
        ind = instantiate_env(schema_instance(ctx.theory, d, p.formula, p.var), env)
        return unfold_induction(ind, seq, r)
    principal = instantiate_env(p.principal, env) if p.principal is not None else None
    kids = p.children
    if rule == "OrIntro":
        s1 = sadd(seq, principal.right)
        inner = Lazy(Node(s1, "OrIntro", add(ctx.tag(kids[0]), ONE), r, principal, 0, 1),
                     lambda i: _emb(kids[0], env, ctx))
        return Lazy(Node(seq, "OrIntro", tag, r, principal, 1, 1), lambda i: inner)
    if rule == "AndIntro":
        return Lazy(Node(seq, "AndIntro", tag, r, principal, None, 2), lambda i: _emb(kids[i], env, ctx))
    if rule == "ExNum":
        return Lazy(Node(seq, "ExNum", tag, r, principal, _env_term(p.term, env), 1),
                    lambda i: _emb(kids[0], env, ctx))
    if rule == "AllNum":
        def kid(n):
            e2 = dict(env)
            e2[p.var] = n
            return _emb(kids[0], e2, ctx)
        return Lazy(Node(seq, "OmegaAll", tag, r, principal, None, OMEGA_ARITY), kid)
    if rule in ("ExSet", "AllSet"):
        return Lazy(Node(seq, rule, tag, r, principal, p.var, 1), lambda i: _emb(kids[0], env, ctx))
    if rule == "Cut":
        c = instantiate_env(p.formula, env)
        return Lazy(Node(seq, "Cut", tag, r, None, c, 2), lambda i: _emb(kids[i], env, ctx))
    raise EmbedError(f"cannot embed rule {rule}")


def unfold_induction(ind: Formula, seq, cut_rank) -> Code:
    """Cut-free derivation of ``seq`` (containing ``ind``) through the omega-rule.

    ``ind`` has the shape ``(~phi(0) | E y.(phi(y) & ~phi(y+1))) | A x.phi(x)``.
    The premise at n is closed by a ladder using the step disjunct n times.
    """
    left, every = ind.left, ind.right
    base_neg, step = left.left, left.right
    s1 = sadd(seq, every)
    s2 = sadd(s1, left)
    s3 = sadd(s2, base_neg)
    s4 = sadd(s3, step)
    r = cut_rank
    rk = rank(every.body)
    base_tag = 3 * rk

    def ladder(n, ctx_seq):
        goal = inst(every, n)
        gseq = sadd(ctx_seq, goal)
        if n == 0:
            return ident(goal, ctx_seq, r)
        t = NAT(base_tag + 2 * n)
        w = inst(step, n - 1)           # phi(n-1) & ~phi(n)
        sw = sadd(gseq, w)
        prev = ladder(n - 1, sw)
        idn = ident(goal, sadd(sw, w.right), r)
        conj = Lazy(Node(sw, "AndIntro", NAT(base_tag + 2 * n - 1), r, w, None, 2),
                    lambda i: prev if i == 0 else idn)
        return Lazy(Node(gseq, "ExNum", t, r, step, canon(n - 1), 1), lambda i: conj)

    omega_node = Lazy(Node(s4, "OmegaAll", OMEGA, r, every, None, OMEGA_ARITY), lambda n: ladder(n, s4))
    n3 = Lazy(Node(s3, "OrIntro", add(OMEGA, NAT(1)), r, left, 1, 1), lambda i: omega_node)
    n2 = Lazy(Node(s2, "OrIntro", add(OMEGA, NAT(2)), r, left, 0, 1), lambda i: n3)
    n1 = Lazy(Node(s1, "OrIntro", add(OMEGA, NAT(3)), r, ind, 0, 1), lambda i: n2)
    return Lazy(Node(sadd((), *seq), "OrIntro", IND_TAG, r, ind, 1, 1), lambda i: n1)


class Emb(Code):
    """Embedding of a checked finitary proof; free number variables default to 0."""

    def __init__(self, proof: Proof, theory: Theory, env=None):
        rep_ = check_fin(proof, theory)
        for n in _iter(proof):
            if n.rule in ("TheoryAx", "PrAx"):
                raise EmbedError(f"{n.rule} leaves are not embedded; move the axiom into the end sequent")
            if n.rule == "SchemaAx" and n.schema != "ind":
                raise EmbedError(f"schema {n.schema!r} is not unfolded by the embedding")
        self.proof = proof
        self.theory = theory
        self.env = dict(env or {})
        cuts = list(rep_.cut_ranks)
        self.declared_rank = max(cuts) + 1 if cuts else 0
        self._ctx = _EmbCtx(theory, self.declared_rank)
        self._root = _emb(proof, self.env, self._ctx)

    def _node(self):
        return self._root.node()

    def child(self, i):
        return self._root.child(i)


def _iter(p):
    stack = [p]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.children)


# -- morphisms: inversion, set substitution, dropping false literals ----------------------

def _seq_map(seq, fn):
    return sadd((), *(fn(f) for f in seq))


class Inv(Code):
    """Inversion of the conjunction / universal ``a`` in ``d`` onto one side.

    ``side`` is 0 or 1 for a conjunction, a natural for a number universal,
    or a set variable name for a set universal.
    """

    def __init__(self, d: Code, a: Formula, side):
        self.d, self.a, self.side = d, a, side
        if isinstance(a, And):
            self.comp = a.left if side == 0 else a.right
        else:
            self.comp = inst(a, side)

    def _resolve(self):
        n = self.d.node()
        if self.a not in n.seq:
            return self.d
        if n.principal == self.a and n.rule in ("AndIntro", "OmegaAll", "AllSet"):
            if n.rule == "AllSet":
                kid = self.d.child(0)
                if n.arg != self.side:
                    kid = SetSubst(kid, n.arg, self.side)
                return Inv(kid, self.a, self.side)
            return Inv(self.d.child(self.side), self.a, self.side)
        return None

    def _eigen(self, n):
        if n.rule == "AllSet" and n.arg in free_vars(self.comp):
            return _fresh_set(n, self.comp)
        return n.arg

    def _node(self):
        r = self._resolve()
        if r is not None:
            return r.node()
        n = self.d.node()
        return replace(n, seq=sadd(sremove(n.seq, self.a), self.comp), arg=self._eigen(n))

    def child(self, i):
        r = self._resolve()
        if r is not None:
            return r.child(i)
        n = self.d.node()
        kid = self.d.child(i)
        new = self._eigen(n)
        if new != n.arg:
            kid = SetSubst(kid, n.arg, new)
        return Inv(kid, self.a, self.side)


def _fresh_set(n: Node, *extra):
    avoid = seq_free_vars(n.seq)
    for f in extra:
        avoid |= free_vars(f)
    return fresh_name(n.arg, avoid)


class SetSubst(Code):
    """Replace the free set variable ``old`` by ``new`` throughout ``d``."""

    def __init__(self, d: Code, old: str, new: str):
        self.d, self.old, self.new = d, old, new

    def _base(self):
        n = self.d.node()
        if self.old not in seq_free_vars(n.seq):
            return self.d, n, True
        return self.d, n, False

    def _node(self):
        d, n, untouched = self._base()
        if untouched:
            return n
        f = lambda g: subst_set(g, self.old, self.new)
        arg = n.arg
        if isinstance(arg, Formula):
            arg = f(arg)
        elif n.rule == "ExSet" and arg == self.old:
            arg = self.new
        elif n.rule == "AllSet" and arg == self.new:
            arg = self._fresh_eigen(n)
        return replace(n, seq=_seq_map(n.seq, f), principal=f(n.principal) if n.principal is not None else None,
                       arg=arg)

    def _fresh_eigen(self, n):
        avoid = seq_free_vars(n.seq) | {self.old, self.new}
        return fresh_name(n.arg, avoid)

    def child(self, i):
        d, n, untouched = self._base()
        if untouched:
            return d.child(i)
        kid = d.child(i)
        if n.rule == "AllSet" and n.arg == self.new:
            kid = SetSubst(kid, n.arg, self._fresh_eigen(n))
        return SetSubst(kid, self.old, self.new)


class Drop(Code):
    """Remove a false closed arithmetic literal from every sequent of ``d``."""

    def __init__(self, d: Code, lit: Lit):
        self.d, self.lit = d, lit

    def _node(self):
        n = self.d.node()
        return replace(n, seq=sremove(n.seq, self.lit))

    def child(self, i):
        return Drop(self.d.child(i), self.lit)


class Weaken(Code):
    """``d`` re-rooted on a superset sequent (same tag)."""

    def __init__(self, d: Code, extra):
        self.d, self.extra = d, tuple(extra)

    def _node(self):
        n = self.d.node()
        return replace(n, seq=sunion(n.seq, self.extra))

    def child(self, i):
        return self.d.child(i)


# -- reduction and elimination --------------------------------------------------------------

def _exist_type(c: Formula) -> bool:
    return isinstance(c, (Or, Exists))


def reduce_cut(d0: Code, d1: Code, c: Formula) -> Code:
    """Combine proofs of ``G, c`` and ``D, ~c`` into one of ``G, D``."""
    if isinstance(c, Lit) and c.rel not in ("in", "Pr"):
        if literal_value(c):
            return Drop(d1, negate(c))
        return Drop(d0, c)
    if _exist_type(c) or isinstance(c, Lit):
        return Red(d0, d1, c)
    return Red(d1, d0, negate(c))


class Red(Code):
    """Reduction of a cut on ``c`` (Or/Exists/literal) by walking ``dx``.

    ``dx`` proves ``G, c`` and ``du`` proves ``D, ~c``; the result proves
    ``G, D`` with tag ``tag(du) + tag(dx) + 1``, introducing cuts only on
    immediate components of ``c``.
    """

    def __init__(self, dx: Code, du: Code, c: Formula):
        self.dx, self.du, self.c = dx, du, c
        self.nc = negate(c)

    def _parts(self):
        n = self.dx.node()
        u = self.du.node()
        delta = sremove(u.seq, self.nc)
        seq = sunion(sremove(n.seq, self.c), delta)
        tag = add(add(u.tag, n.tag), ONE)
        rk = max(n.cut_rank, u.cut_rank, rank(self.c))
        return n, u, delta, seq, tag, rk

    def _mode(self, n):
        if self.c not in n.seq:
            return "absent"
        if n.rule == "Ax":
            if isinstance(self.c, Lit) and not is_axiom(sremove(n.seq, self.c)):
                return "essential"
            return "ax"
        if n.principal == self.c and n.rule in ("OrIntro", "ExNum", "ExSet"):
            return "principal"
        return "pass"

    def _eigen(self, n, delta):
        if n.rule == "AllSet" and n.arg in seq_free_vars(delta):
            return fresh_name(n.arg, seq_free_vars(n.seq) | seq_free_vars(delta))
        return n.arg

    def _component(self, n):
        if n.rule == "OrIntro":
            return self.c.left if n.arg == 0 else self.c.right
        return inst(self.c, n.arg)

    def _node(self):
        n, u, delta, seq, tag, rk = self._parts()
        mode = self._mode(n)
        if mode == "absent":
            return n
        if mode == "essential":
            return Node(seq, "Rep", tag, rk, arity=1)
        if mode == "ax":
            return Node(seq, "Ax", tag, rk)
        if mode == "principal":
            return Node(seq, "Cut", tag, rk, None, self._component(n), 2)
        return replace(n, seq=seq, tag=tag, cut_rank=rk, arg=self._eigen(n, delta))

    def child(self, i):
        n, u, delta, seq, tag, rk = self._parts()
        mode = self._mode(n)
        if mode == "absent":
            return self.dx.child(i)
        if mode == "essential":
            if i != 0:
                raise OutOfTree(i)
            return self.du
        if mode == "ax":
            raise OutOfTree(i)
        if mode == "principal":
            if i == 0:
                return Red(self.dx.child(0), self.du, self.c)
            if i == 1:
                side = term_value(n.arg) if n.rule == "ExNum" else n.arg
                return Inv(self.du, self.nc, side)
            raise OutOfTree(i)
        _check_index(n, i)
        kid = self.dx.child(i)
        new = self._eigen(n, delta)
        if new != n.arg:
            kid = SetSubst(kid, n.arg, new)
        return Red(kid, self.du, self.c)


class Elim(Code):
    """One cut-elimination step: tag a, rank d+1  ->  tag w^a, rank d."""

    def __init__(self, d: Code):
        self.d = d
        self.rank_ = max(d.node().cut_rank - 1, 0)

    def _reduces(self, n):
        return n.rule == "Cut" and rank(n.arg) >= self.rank_ and n.cut_rank > 0

    def _node(self):
        n = self.d.node()
        tag = omega_pow(n.tag)
        if self._reduces(n):
            return Node(n.seq, "Rep", tag, self.rank_, arity=1)
        return replace(n, tag=tag, cut_rank=self.rank_)

    def child(self, i):
        n = self.d.node()
        if self._reduces(n):
            if i != 0:
                raise OutOfTree(i)
            e0, e1 = Elim(self.d.child(0)), Elim(self.d.child(1))
            return reduce_cut(e0, e1, n.arg)
        return Elim(self.d.child(i))


def reduce_rank(c: Code) -> Code:
    if c.node().cut_rank < 1:
        raise ValueError("code is already cut-free (declared rank 0)")
    return Elim(c)


def eliminate_all(c: Code) -> Code:
    while c.node().cut_rank > 0:
        c = Elim(c)
    return c


class Patch(Code):
    """``d`` with the descriptor at ``pos`` overridden (for fault injection)."""

    def __init__(self, d: Code, pos, **fields):
        self.d, self.pos, self.fields = d, tuple(pos), fields

    def _node(self):
        n = self.d.node()
        return replace(n, **self.fields) if not self.pos else n

    def child(self, i):
        kid = self.d.child(i)
        if self.pos and self.pos[0] == i:
            return Patch(kid, self.pos[1:], **self.fields)
        return kid if self.pos else kid


# -- navigation and local checking ------------------------------------------------------

def descend(c: Code, pos) -> Code:
    for i in pos:
        n = c.node()
        try:
            _check_index(n, i)
        except OutOfTree:
            raise OutOfTree(tuple(pos))
        c = c.child(i)
    return c


def descriptor(c: Code, pos=()) -> Node:
    return descend(c, pos).node()


def premise_extras(n: Node, i: int):
    """Formulas a premise may add to the conclusion."""
    a = n.principal
    if n.rule == "OrIntro":
        return (a.left if n.arg == 0 else a.right,)
    if n.rule == "AndIntro":
        return (a.left if i == 0 else a.right,)
    if n.rule == "ExNum":
        return (inst(a, n.arg),)
    if n.rule == "OmegaAll":
        return (inst(a, i),)
    if n.rule in ("AllSet", "ExSet"):
        return (inst(a, n.arg),)
    if n.rule == "Cut":
        return (n.arg if i == 0 else negate(n.arg),)
    return ()


def check_node(n: Node, kids) -> Optional[str]:
    """Local correctness of ``n`` against the probed ``kids`` [(index, Node)]."""
    if n.arity == OMEGA_ARITY:
        if n.rule != "OmegaAll":
            return "arity"
    elif len(kids) > n.arity:
        return "arity"
    if n.rule == "Ax":
        if n.arity != 0 or not is_axiom(n.seq):
            return "axiom"
    elif n.rule in ("OrIntro", "AndIntro", "ExNum", "OmegaAll", "AllSet", "ExSet"):
        a = n.principal
        want = {"OrIntro": Or, "AndIntro": And, "ExNum": Exists, "ExSet": Exists,
                "OmegaAll": Forall, "AllSet": Forall}[n.rule]
        if not isinstance(a, want) or a not in n.seq:
            return "principal"
        if n.rule in ("ExNum", "OmegaAll") and is_set_var(a.var):
            return "principal"
        if n.rule in ("ExSet", "AllSet") and not is_set_var(a.var):
            return "principal"
        if n.rule == "ExNum" and (not isinstance(n.arg, Term) or term_vars(n.arg)):
            return "witness"
        if n.rule == "AllSet" and n.arg in seq_free_vars(n.seq):
            return "eigenvariable"
        expect = {"OrIntro": 1, "AndIntro": 2, "ExNum": 1, "AllSet": 1, "ExSet": 1}
        if n.rule in expect and n.arity != expect[n.rule]:
            return "arity"
    elif n.rule == "Cut":
        if n.arity != 2:
            return "arity"
        if rank(n.arg) >= n.cut_rank:
            return "cut-rank"
    elif n.rule == "Rep":
        if n.arity != 1:
            return "arity"
    else:
        return "rule"
    for i, k in kids:
        if compare(k.tag, n.tag) != LT:
            return "tag"
        if k.cut_rank > n.cut_rank:
            return "cut-rank"
        allowed = set(n.seq) | set(premise_extras(n, i))
        if any(f not in allowed for f in k.seq):
            return "sequent"
    return None


def check_local(c: Code, pos=(), width=4) -> Optional[str]:
    """None if the node at ``pos`` is locally correct, else a reason."""
    code = descend(c, pos)
    n = code.node()
    count = width if n.arity == OMEGA_ARITY else n.arity
    kids = [(i, code.child(i).node()) for i in range(count)]
    return check_node(n, kids)


# -- expansion ---------------------------------------------------------------------------

class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Expanded:
    pos: tuple
    node: Node
    children: list
    truncated: bool
    violation: Optional[str]


def expand(c: Code, depth: int, width: int, max_nodes: int = 100_000) -> Expanded:
    """Finite view of ``c``: ``depth`` levels, omega-rule cut to ``width`` children.

    Every emitted node is locally checked against the children it shows.
    """
    count = [0]

    def go(code, pos, d):
        count[0] += 1
        if count[0] > max_nodes:
            raise BudgetExceeded(f"expansion exceeds node budget {max_nodes}")
        n = code.node()
        k = width if n.arity == OMEGA_ARITY else n.arity
        kid_codes = [code.child(i) for i in range(k)]
        viol = check_node(n, [(i, kc.node()) for i, kc in enumerate(kid_codes)])
        kids = []
        if d > 0:
            kids = [go(kc, pos + (i,), d - 1) for i, kc in enumerate(kid_codes)]
        return Expanded(pos, n, kids, n.arity == OMEGA_ARITY and d > 0, viol)

    return go(c, (), depth)


def iter_expanded(e: Expanded):
    yield e
    for k in e.children:
        yield from iter_expanded(k)


def _q(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_expanded(e: Expanded, width: int, indent=0) -> str:
    """Machine-readable nested form mirroring the proof file format."""
    n = e.node
    pad = "  " * indent
    parts = [f"(node {_q(n.rule)}", f"(pos {' '.join(map(str, e.pos))})".replace("(pos )", "(pos)"),
             f"(tag {_q(format_ordinal(n.tag))})", f"(rank {n.cut_rank})"]
    if n.principal is not None:
        parts.append(f"(principal {_q(print_formula(n.principal))})")
    if n.arg is not None:
        parts.append(f"(arg {_q(n.arg_text())})")
    parts.append("(seq" + "".join(" " + _q(print_formula(f)) for f in n.seq) + ")")
    if e.violation:
        parts.append(f"(violation {_q(e.violation)})")
    head = pad + " ".join(parts)
    tail = [format_expanded(k, width, indent + 1) for k in e.children]
    if e.truncated:
        tail.append(pad + "  " + f"(omega-truncated {width})")
    if not tail:
        return head + ")"
    return head + "\n" + "\n".join(tail) + ")"


def render_expanded(e: Expanded, width: int) -> str:
    """Human-readable indented tree."""
    lines = []

    def go(x, ind):
        n = x.node
        arg = f" [{n.arg_text()}]" if n.arg is not None else ""
        mark = f"  !! {x.violation}" if x.violation else ""
        lines.append(f"{'  ' * ind}{n.rule}{arg} tag={format_ordinal(n.tag)} rank={n.cut_rank} : "
                     + ", ".join(print_formula(f) for f in n.seq) + mark)
        for k in x.children:
            go(k, ind + 1)
        if x.truncated:
            lines.append(f"{'  ' * (ind + 1)}... (omega-truncated {width})")

    go(e, 0)
    return "\n".join(lines)


# -- code files ---------------------------------------------------------------------------
#
# A code file records how to rebuild a code: the theory (same key-value lines
# as a theory file), an optional number environment, a list of operators
# applied in order, then ``proof:`` and the finitary proof in the proof file
# format.  Operators:
#     op = elim
#     op = patch <pos> <field>=<value>     fields: tag, rule, cut_rank, add, drop
# where <pos> is dot-separated (``-`` for the root) and add/drop take a
# quoted formula.

class CodeFormatError(ValueError):
    pass


_PATCH_FIELDS = ("tag", "rule", "cut_rank", "add", "drop")


@dataclass(frozen=True)
class CodeSpec:
    theory: Theory
    proof: Proof
    env: tuple = ()          # ((var, value), ...)
    ops: tuple = ()          # ("elim",) or ("patch", pos, field, value)

    def build(self) -> Code:
        c: Code = Emb(self.proof, self.theory, dict(self.env))
        for op in self.ops:
            if op[0] == "elim":
                c = reduce_rank(c)
            else:
                c = _apply_patch(c, *op[1:])
        return c

    def with_op(self, *op) -> "CodeSpec":
        return replace(self, ops=self.ops + (tuple(op),))


def _apply_patch(c, pos, fld, value):
    from .ordinal import parse_ordinal
    from .syntax import parse
    if fld == "tag":
        return Patch(c, pos, tag=parse_ordinal(value))
    if fld == "rule":
        return Patch(c, pos, rule=value)
    if fld == "cut_rank":
        return Patch(c, pos, cut_rank=int(value))
    seq = descriptor(c, pos).seq
    f = normalize(parse(value))
    new = sadd(seq, f) if fld == "add" else sremove(seq, f)
    return Patch(c, pos, seq=new)


def _pos_text(pos):
    return ".".join(map(str, pos)) if pos else "-"


def format_code(spec: CodeSpec) -> str:
    from .calculus import format_proof, format_theory
    lines = [format_theory(spec.theory).rstrip("\n")]
    if spec.env:
        lines.append("env = " + " ".join(f"{k}:{v}" for k, v in spec.env))
    for op in spec.ops:
        if op[0] == "elim":
            lines.append("op = elim")
        else:
            _, pos, fld, value = op
            val = f'"{value}"' if fld in ("add", "drop") else value
            lines.append(f"op = patch {_pos_text(pos)} {fld}={val}")
    lines.append("proof:")
    lines.append(format_proof(spec.proof))
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> CodeSpec:
    from .calculus import parse_proof, parse_theory
    head, sep, body = text.partition("\nproof:\n")
    if not sep:
        raise CodeFormatError("missing 'proof:' section")
    th_lines, env, ops = [], [], []
    for lineno, raw in enumerate(head.splitlines(), 1):
        line = raw.strip()
        key = line.split("=", 1)[0].strip()
        if key == "env":
            for item in line.split("=", 1)[1].split():
                k, _, v = item.partition(":")
                if not v.isdigit():
                    raise CodeFormatError(f"line {lineno}: bad env entry {item!r}")
                env.append((k, int(v)))
        elif key == "op":
            ops.append(_parse_op(line.split("=", 1)[1].strip(), lineno))
        else:
            th_lines.append(raw)
    return CodeSpec(parse_theory("\n".join(th_lines)), parse_proof(body), tuple(env), tuple(ops))


def _parse_op(text, lineno):
    if text == "elim":
        return ("elim",)
    parts = text.split(None, 2)
    if len(parts) != 3 or parts[0] != "patch" or "=" not in parts[2]:
        raise CodeFormatError(f"line {lineno}: bad operator {text!r}")
    pos = () if parts[1] == "-" else tuple(int(x) for x in parts[1].split("."))
    fld, _, value = parts[2].partition("=")
    if fld not in _PATCH_FIELDS:
        raise CodeFormatError(f"line {lineno}: unknown patch field {fld!r}")
    if fld in ("add", "drop"):
        value = value.strip()
        if not (value.startswith('"') and value.endswith('"')):
            raise CodeFormatError(f"line {lineno}: {fld} needs a quoted formula")
        value = value[1:-1]
    return ("patch", pos, fld, value)


def load_code(path) -> CodeSpec:
    with open(path) as fh:
        return parse_code(fh.read())
