"""Three-valued desk-scale evaluation of two-sorted formulas.

Literals and bounded number quantifiers are decided exactly.  Unbounded
number quantifiers are searched up to a budget (a block of like unbounded
quantifiers shares one budget, searching tuples in Cantor order): a
counterexample makes a universal False and a witness makes an existential
True; otherwise the verdict is Unknown.  The exception is a quantifier whose
variable occurs only as the bare element of membership literals: its value
is eventually periodic in the variable, so a finite scan decides it.

Set quantifiers range over a finite universe of eventually periodic sets.
In the default *open* mode a set universal can only be refuted (a
counterexample set is a real counterexample) and a set existential can only
be verified; ``closed=True`` treats the universe as the whole range, which
is what the Xi-audits use.

``Pr`` literals are backed by a certificate store; a missing certificate
gives Unknown, never False.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .ordinal import Ordinal, _decode, MAX_DEPTH, add, encode_nat, mul, omega_pow, unpair
from .schemas import (  # noqa: F401  (builders are part of this module's surface)
    build_Con, build_Ind, build_lemma_con, build_Prog, build_RFN, build_Rfn, build_TI,
    build_TI_below, build_WF, contract_vars, pairing_eq,
)
from .syntax import (
    And, Exists, Forall, Formula, Lit, Or, Var, bounded_exists, bounded_forall, decode, encode,
    free_num_vars, free_vars, is_set_var, subst_num, term_value, term_vars,
)


class Truth3(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __invert__(self):
        return {Truth3.TRUE: Truth3.FALSE, Truth3.FALSE: Truth3.TRUE}.get(self, Truth3.UNKNOWN)

    def __str__(self):
        return self.value


T, F, U = Truth3.TRUE, Truth3.FALSE, Truth3.UNKNOWN


class EvalError(ValueError):
    pass


# -- universes -------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicSet:
    """Membership word ``prefix`` followed by ``period`` repeated forever."""
    prefix: str
    period: str

    def __post_init__(self):
        if not self.period or set(self.prefix + self.period) - {"0", "1"}:
            raise EvalError(f"bad set word {self.prefix}:{self.period}")

    def __contains__(self, n: int) -> bool:
        if n < len(self.prefix):
            return self.prefix[n] == "1"
        return self.period[(n - len(self.prefix)) % len(self.period)] == "1"

    def __str__(self):
        return f"{self.prefix}:{self.period}"


@dataclass(frozen=True)
class SetUniverse:
    names: tuple
    sets: tuple

    def __post_init__(self):
        if not self.names:
            raise EvalError("a universe needs at least one set")

    def __getitem__(self, name) -> PeriodicSet:
        return self.sets[self.names.index(name)]

    def items(self):
        return zip(self.names, self.sets)


def make_universe(spec: dict) -> SetUniverse:
    names = tuple(spec)
    sets = []
    for k in names:
        v = spec[k]
        if isinstance(v, str):
            pre, _, per = v.partition(":")
            v = PeriodicSet(pre, per)
        sets.append(v)
    return SetUniverse(names, tuple(sets))


def parse_universe(text: str) -> SetUniverse:
    spec = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"([A-Za-z_][\w]*)\s*=\s*([01]*):([01]+)", line)
        if not m:
            raise EvalError(f"line {lineno}: expected 'name = prefix:period'")
        spec[m[1]] = PeriodicSet(m[2], m[3])
    return make_universe(spec)


def load_universe(path) -> SetUniverse:
    return parse_universe(Path(path).read_text())


DEFAULT_UNIVERSE = make_universe({"Empty": ":0", "Full": ":1", "Evens": ":10", "Three": "111:0"})


# -- certificates ------------------------------------------------------------------

class CertificateStore:
    """Checked proofs indexed by (theory name, Goedel code of the proved sentence)."""

    def __init__(self):
        self._codes = {}

    def add(self, theory, proof):
        from .calculus import check_fin
        if len(proof.seq) != 1:
            raise EvalError("a certificate must prove a single sentence")
        check_fin(proof, theory)
        code = encode(proof.seq[0])
        self._codes[(theory.name, code)] = proof
        return code

    def has(self, theory_name, code) -> bool:
        return (theory_name, code) in self._codes

    def __len__(self):
        return len(self._codes)

    @classmethod
    def from_directory(cls, path, theory):
        from .calculus import load_proof
        store = cls()
        for p in sorted(Path(path).glob("*.proof")):
            store.add(theory, load_proof(p))
        return store


# -- evaluation ------------------------------------------------------------------------

@dataclass
class Verdict:
    value: Truth3
    notes: set = field(default_factory=set)
    witness: Optional[dict] = None

    @property
    def universe_relative(self):
        return "universe-relative" in self.notes

    def __str__(self):
        extra = f" ({', '.join(sorted(self.notes))})" if self.notes else ""
        w = f" witness {self.witness}" if self.witness else ""
        return f"{self.value}{extra}{w}"


@dataclass
class Valuation:
    nums: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)   # set variable -> universe index or name


class _Ctx:
    def __init__(self, u, budget, certs, closed):
        self.u = u
        self.budget = budget
        self.certs = certs
        self.closed = closed
        self.notes = set()


def evaluate(phi: Formula, valuation: Optional[Valuation] = None, universe: Optional[SetUniverse] = None,
             budget: int = 1000, certs: Optional[CertificateStore] = None, closed: bool = False) -> Verdict:
    v = valuation or Valuation()
    u = universe or DEFAULT_UNIVERSE
    # set variables may be bound by universe index or by name
    v = Valuation(v.nums, {k: (u.names[s] if isinstance(s, int) else s) for k, s in v.sets.items()})
    for name in free_vars(phi):
        if is_set_var(name):
            if name not in v.sets:
                raise EvalError(f"unbound set variable {name}")
            if v.sets[name] not in u.names:
                raise EvalError(f"set {v.sets[name]!r} is not in the universe")
        elif name not in v.nums:
            raise EvalError(f"unbound number variable {name}")
    ctx = _Ctx(u, budget, certs, closed)
    env = dict(v.nums)
    senv = {k: u[s] for k, s in v.sets.items()}
    witness = {}
    val = _ev(phi, env, senv, ctx, witness)
    return Verdict(val, ctx.notes, witness or None)


def _lit(f: Lit, env, senv, ctx):
    if f.rel == "in":
        val = term_value(f.terms[0], env) in senv[f.setvar]
        return F if val == f.neg else T
    if f.rel == "Pr":
        code = term_value(f.terms[0], env)
        if len(f.terms) > 1:
            try:
                g = decode(code)
                free = sorted(free_num_vars(g))
                code = subst_num(code, term_value(f.terms[1], env), free[0]) if len(free) == 1 else None
            except ValueError:
                code = None
        present = code is not None and ctx.certs is not None and ctx.certs.has(f.theory, code)
        if not present:
            ctx.notes.add("certificate-missing")
            return U
        return F if f.neg else T
    from .syntax import literal_value
    return T if literal_value(f, env) else F


def _and(a, b):
    if F in (a, b):
        return F
    return T if a == b == T else U


def _or(a, b):
    if T in (a, b):
        return T
    return F if a == b == F else U


def _code_bound(f, var, env):
    """Finite candidate list for quantifiers bounded by prec/jmp/osum, else None."""
    body = f.body
    if isinstance(f, Forall):
        if not isinstance(body, Or):
            return None
        g, rest = body.left, body.right
        if not (isinstance(g, Lit) and g.neg):
            return None
    else:
        if not isinstance(body, And):
            return None
        g, rest = body.left, body.right
        if not (isinstance(g, Lit) and not g.neg):
            return None
    x = Var(var)
    if g.rel == "jmp" and g.terms[2] == x and all(var not in term_vars(t) for t in g.terms[:2]):
        z, e = (_decode(term_value(t, env), MAX_DEPTH) for t in g.terms[:2])
        if z is None or e is None:
            return (), rest
        return (encode_nat(add(z, omega_pow(e))),), rest
    if g.rel == "osum" and g.terms[3] == x and all(var not in term_vars(t) for t in g.terms[:3]):
        z, e = (_decode(term_value(g.terms[i], env), MAX_DEPTH) for i in (0, 1))
        n = term_value(g.terms[2], env)
        if z is None or e is None:
            return (), rest
        return (encode_nat(add(z, mul(omega_pow(e), Ordinal.nat(n)))),), rest
    if g.rel == "prec" and g.terms[0] == x and var not in term_vars(g.terms[1]):
        top = _decode(term_value(g.terms[1], env), MAX_DEPTH)
        if top is None:
            return (), rest
        if top.is_finite():
            return tuple(encode_nat(Ordinal.nat(k)) for k in range(top.finite_value())), rest
        return "search", rest
    return None


def _ev(f, env, senv, ctx, witness, top=True):
    if isinstance(f, Lit):
        return _lit(f, env, senv, ctx)
    if isinstance(f, And):
        a = _ev(f.left, env, senv, ctx, witness, False)
        if a == F:
            return F
        return _and(a, _ev(f.right, env, senv, ctx, witness, False))
    if isinstance(f, Or):
        a = _ev(f.left, env, senv, ctx, witness, False)
        if a == T:
            return T
        return _or(a, _ev(f.right, env, senv, ctx, witness, False))
    universal = isinstance(f, Forall)
    if is_set_var(f.var):
        return _set_quant(f, env, senv, ctx, witness, top)
    b = bounded_forall(f) if universal else bounded_exists(f)
    if b is not None:
        bound = term_value(b[0], env)
        return _scan(f, range(bound), b[1], env, senv, ctx, witness, top, exact=True)
    cb = _code_bound(f, f.var, env)
    if cb is not None and cb[0] != "search":
        return _scan(f, cb[0], cb[1], env, senv, ctx, witness, top, exact=True)
    if cb is None:
        h = _horizon(ctx.u)
        if h <= ctx.budget and _membership_only(f.body, f.var):
            return _scan(f, range(h), f.body, env, senv, ctx, witness, top, exact=True)
        names, body = _block(f)
        if len(names) > 1:
            return _scan_block(f, names, body, env, senv, ctx, witness, top)
    return _scan(f, range(ctx.budget), f.body, env, senv, ctx, witness, top, exact=False)


def _horizon(u):
    """Past this point every membership vector of the universe has repeated."""
    return max(len(s.prefix) for s in u.sets) + math.lcm(*(len(s.period) for s in u.sets))


def _membership_only(f, x):
    """Does ``x`` occur free in ``f`` only as the bare term of ``in`` literals?

    Then the value of ``f`` depends on ``x`` only through which universe sets
    contain it, so checking ``x`` below the horizon decides the quantifier.
    """
    if isinstance(f, Lit):
        if f.rel == "in" and f.terms[0] == Var(x):
            return True
        return all(x not in term_vars(t) for t in f.terms)
    if isinstance(f, (And, Or)):
        return _membership_only(f.left, x) and _membership_only(f.right, x)
    return f.var == x or _membership_only(f.body, x)


def _guarded(f):
    """Shape test: is ``f`` bounded syntactically or by a prec/jmp/osum guard?"""
    if (bounded_forall(f) if isinstance(f, Forall) else bounded_exists(f)) is not None:
        return True
    body, x = f.body, Var(f.var)
    if not isinstance(body, Or if isinstance(f, Forall) else And):
        return False
    g = body.left
    if not (isinstance(g, Lit) and g.neg == isinstance(f, Forall)):
        return False
    slot = {"jmp": 2, "osum": 3, "prec": 0}.get(g.rel)
    return slot is not None and g.terms[slot] == x


def _block(f):
    """Leading run of like, unguarded number quantifiers with distinct variables."""
    names, body = [f.var], f.body
    while (type(body) is type(f) and not is_set_var(body.var) and body.var not in names
           and not _guarded(body)):
        names.append(body.var)
        body = body.body
    return names, body


def _untuple(i, k):
    out = []
    for _ in range(k - 1):
        a, i = unpair(i)
        out.append(a)
    return out + [i]


def _scan_block(f, names, body, env, senv, ctx, witness, top):
    universal = isinstance(f, Forall)
    stop = F if universal else T
    saved = {v: env[v] for v in names if v in env}
    try:
        for i in range(ctx.budget):
            vals = _untuple(i, len(names))
            env.update(zip(names, vals))
            if _ev(body, env, senv, ctx, witness, False) == stop:
                if top:
                    witness.update(zip(names, vals))
                return stop
    finally:
        for v in names:
            env.pop(v, None)
        env.update(saved)
    ctx.notes.add("budget-limited universal" if universal else "budget-limited existential")
    return U


def _scan(f, values, body, env, senv, ctx, witness, top, exact):
    universal = isinstance(f, Forall)
    stop = F if universal else T
    acc = T if universal else F
    old = env.get(f.var, None)
    had = f.var in env
    try:
        for n in values:
            env[f.var] = n
            val = _ev(body, env, senv, ctx, witness, False)
            if val == stop:
                if top:
                    witness[f.var] = n
                return stop
            if val == U:
                acc = U
    finally:
        if had:
            env[f.var] = old
        else:
            env.pop(f.var, None)
    if not exact:
        ctx.notes.add("budget-limited universal" if universal else "budget-limited existential")
        return U
    return acc


def _set_quant(f, env, senv, ctx, witness, top):
    universal = isinstance(f, Forall)
    stop = F if universal else T
    acc = T if universal else F
    old = senv.get(f.var)
    try:
        for name, s in ctx.u.items():
            senv[f.var] = s
            val = _ev(f.body, env, senv, ctx, witness, False)
            if val == stop:
                if top:
                    witness[f.var] = name
                return stop
            if val == U:
                acc = U
    finally:
        if old is None:
            senv.pop(f.var, None)
        else:
            senv[f.var] = old
    ctx.notes.add("universe-relative")
    if acc != U and not ctx.closed:
        return U
    return acc


def eval_sequent(seq, valuation, universe, budget=1000, certs=None, closed=False):
    """Verdicts of each formula; the sequent is True iff some formula is."""
    return [evaluate(f, valuation, universe, budget, certs, closed) for f in seq]


def valuations(set_vars, universe, fixed=None):
    """All assignments of universe sets to ``set_vars`` (``fixed`` pins some)."""
    import itertools
    fixed = fixed or {}
    free = [v for v in sorted(set_vars) if v not in fixed]
    for combo in itertools.product(universe.names, repeat=len(free)):
        d = dict(fixed)
        d.update(zip(free, combo))
        yield Valuation({}, d)
