"""Two-sorted terms and negation-normal-form formulas.

Variable sort is carried by the name: identifiers starting with an uppercase
letter are set variables, lowercase ones are number variables.

Relation symbols: ``=``, ``<``, ``in``, the notation order ``prec`` and the
ordinal-code relations ``jmp(z, x, w)`` (w codes z + w^x) and
``osum(z, u, n, v)`` (v codes z + w^u * n), plus ``Pr[T](g)`` and the dotted
form ``Pr[T](g, s)`` which stands for ``Pr_T(sub(g, s))``.

ASCII grammar (``print_formula`` emits the canonical subset)::

    formula  := disj ['->' formula]
    disj     := conj {'|' conj}
    conj     := unary {'&' unary}
    unary    := '!' unary | ('A'|'E') ident ['.' formula | unary]
              | literal | '(' formula ')'
    literal  := term ('=' | '!=' | '<' | 'prec') term
              | term ('in' | 'notin') SETVAR
              | 'Pr[' NAME '](' term [',' term] ')'
              | 'jmp(' term ',' term ',' term ')'
              | 'osum(' term ',' term ',' term ',' term ')'
    term     := prod {'+' prod}
    prod     := atom {'*' atom}
    atom     := '0' | '1' | DIGITS | numvar | '(' term ')'

``!`` and ``->`` are input sugar; they are pushed into literals on parsing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional


class SyntaxError_(ValueError):
    """Parse error carrying the character offset."""

    def __init__(self, msg, pos=None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} (at offset {pos})")


ParseError = SyntaxError_


def is_set_var(name: str) -> bool:
    return name[:1].isupper()


# -- terms -----------------------------------------------------------------

class Term:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, other)

    def __mul__(self, other):
        return Mul(self, other)

    def __str__(self):
        return print_term(self)


def _cached_hash(self):
    # deep terms and formulas get hashed many times by sequent set checks
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__,) + tuple(self.__dict__.values()))
        object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Num(Term):
    """Compact numeral constant (abbreviates the numeral of ``value``)."""
    value: int

    def __post_init__(self):
        if self.value < 2:
            raise ValueError("Num is reserved for values >= 2")


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term
    __hash__ = _cached_hash


ZERO_T = Zero()
ONE_T = One()


def numeral(n: int) -> Term:
    """0 for 0; otherwise ((1+1)+...)+1 with n ones."""
    if n < 0:
        raise ValueError("negative numeral")
    if n == 0:
        return ZERO_T
    t: Term = ONE_T
    for _ in range(n - 1):
        t = Add(t, ONE_T)
    return t


#: closed terms with value at most this are normalized to plain numerals
NUMERAL_LIMIT = 255


def canon(n: int) -> Term:
    """Canonical closed term for ``n``: a numeral when small, else ``Num``."""
    if n <= NUMERAL_LIMIT:
        return numeral(n)
    return Num(n)


def const(n: int) -> Term:
    return ZERO_T if n == 0 else ONE_T if n == 1 else Num(n)


def term_value(t: Term, env=None) -> int:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return 1
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Add):
        return term_value(t.left, env) + term_value(t.right, env)
    if isinstance(t, Mul):
        return term_value(t.left, env) * term_value(t.right, env)
    if env is not None and t.name in env:
        return env[t.name]
    raise KeyError(t.name)


def term_vars(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Add, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    return set()


def term_subst(t: Term, name: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == name else t
    if isinstance(t, Add):
        return Add(term_subst(t.left, name, s), term_subst(t.right, name, s))
    if isinstance(t, Mul):
        return Mul(term_subst(t.left, name, s), term_subst(t.right, name, s))
    return t


def term_size(t: Term) -> int:
    if isinstance(t, (Add, Mul)):
        return 1 + term_size(t.left) + term_size(t.right)
    return 1


# -- formulas --------------------------------------------------------------

RELATIONS = ("=", "<", "in", "prec", "Pr", "jmp", "osum")
ARITH_RELATIONS = ("=", "<", "prec", "jmp", "osum")


class Formula:
    __slots__ = ()

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Lit(Formula):
    """Atomic or negated atomic formula.

    ``terms`` holds the number arguments; ``setvar`` is the set argument of
    ``in``; ``theory`` tags a ``Pr`` literal.
    """
    rel: str
    terms: tuple
    neg: bool = False
    setvar: Optional[str] = None
    theory: Optional[str] = None
    __hash__ = _cached_hash


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula
    __hash__ = _cached_hash


Quant = (Forall, Exists)


def eq(s, t):
    return Lit("=", (s, t))


def neq(s, t):
    return Lit("=", (s, t), True)


def lt(s, t):
    return Lit("<", (s, t))


def mem(t, X):
    return Lit("in", (t,), setvar=X)


def nmem(t, X):
    return Lit("in", (t,), True, setvar=X)


def prec_(s, t):
    return Lit("prec", (s, t))


def pr(theory, g, s=None):
    return Lit("Pr", (g,) if s is None else (g, s), theory=theory)


def jmp(z, x, w):
    return Lit("jmp", (z, x, w))


def osum(z, u, n, v):
    return Lit("osum", (z, u, n, v))


def disj(*fs):
    """Left-nested disjunction of one or more formulas."""
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def conj(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def implies(a, b):
    return Or(negate(a), b)


def negate(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return Lit(f.rel, f.terms, not f.neg, f.setvar, f.theory)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, Forall):
        return Exists(f.var, negate(f.body))
    return Forall(f.var, negate(f.body))


def rank(f: Formula) -> int:
    if isinstance(f, Lit):
        return 0
    if isinstance(f, (And, Or)):
        return max(rank(f.left), rank(f.right)) + 1
    return rank(f.body) + 1


def size(f: Formula) -> int:
    if isinstance(f, Lit):
        return 1
    if isinstance(f, (And, Or)):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Quant):
        yield from subformulas(f.body)


def free_vars(f: Formula) -> set:
    """Free variables of both sorts."""
    if isinstance(f, Lit):
        out = set()
        for t in f.terms:
            out |= term_vars(t)
        if f.setvar is not None:
            out.add(f.setvar)
        return out
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def free_num_vars(f: Formula) -> set:
    return {v for v in free_vars(f) if not is_set_var(v)}


def free_set_vars(f: Formula) -> set:
    return {v for v in free_vars(f) if is_set_var(v)}


def all_vars(f: Formula) -> set:
    if isinstance(f, Lit):
        return free_vars(f)
    if isinstance(f, (And, Or)):
        return all_vars(f.left) | all_vars(f.right)
    return all_vars(f.body) | {f.var}


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def fresh_name(base: str, avoid) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def subst(f: Formula, name: str, t: Term) -> Formula:
    """Capture-avoiding substitution of term ``t`` for number variable ``name``."""
    if isinstance(f, Lit):
        return Lit(f.rel, tuple(term_subst(s, name, t) for s in f.terms), f.neg, f.setvar, f.theory)
    if isinstance(f, (And, Or)):
        return type(f)(subst(f.left, name, t), subst(f.right, name, t))
    if f.var == name:
        return f
    if name not in free_vars(f.body):
        return f
    tv = term_vars(t)
    if f.var in tv:
        new = fresh_name(f.var, tv | all_vars(f.body) | {name})
        body = rename_bound(f.body, f.var, new)
        return type(f)(new, subst(body, name, t))
    return type(f)(f.var, subst(f.body, name, t))


def subst_set(f: Formula, name: str, new: str) -> Formula:
    """Capture-avoiding renaming of the free set variable ``name`` to ``new``."""
    if isinstance(f, Lit):
        if f.setvar == name:
            return Lit(f.rel, f.terms, f.neg, new, f.theory)
        return f
    if isinstance(f, (And, Or)):
        return type(f)(subst_set(f.left, name, new), subst_set(f.right, name, new))
    if f.var == name or name not in free_vars(f.body):
        return f
    if f.var == new:
        other = fresh_name(f.var, all_vars(f.body) | {name, new})
        body = rename_bound(f.body, f.var, other)
        return type(f)(other, subst_set(body, name, new))
    return type(f)(f.var, subst_set(f.body, name, new))


def rename_bound(f: Formula, old: str, new: str) -> Formula:
    if is_set_var(old):
        return subst_set(f, old, new)
    return subst(f, old, Var(new))


def map_terms(f: Formula, fn) -> Formula:
    """Apply ``fn`` to every literal argument term."""
    if isinstance(f, Lit):
        return Lit(f.rel, tuple(fn(t) for t in f.terms), f.neg, f.setvar, f.theory)
    if isinstance(f, (And, Or)):
        return type(f)(map_terms(f.left, fn), map_terms(f.right, fn))
    return type(f)(f.var, map_terms(f.body, fn))


def normalize_term(t: Term) -> Term:
    """Replace every maximal closed subterm by its canonical constant."""
    if not term_vars(t):
        return canon(term_value(t))
    if isinstance(t, Add):
        return Add(normalize_term(t.left), normalize_term(t.right))
    if isinstance(t, Mul):
        return Mul(normalize_term(t.left), normalize_term(t.right))
    return t


def normalize(f: Formula) -> Formula:
    return map_terms(f, normalize_term)


def _code_relation(rel, vals):
    from .ordinal import _decode, MAX_DEPTH, add, mul, omega_pow, Ordinal, compare, LT
    if rel == "prec":
        a, b = (_decode(v, MAX_DEPTH) for v in vals)
        return a is not None and b is not None and compare(a, b) == LT
    if rel == "jmp":
        z, x, w = (_decode(v, MAX_DEPTH) for v in vals)
        return None not in (z, x, w) and add(z, omega_pow(x)) == w
    z, u, v = (_decode(vals[i], MAX_DEPTH) for i in (0, 1, 3))
    if None in (z, u, v):
        return False
    return add(z, mul(omega_pow(u), Ordinal.nat(vals[2]))) == v


def literal_value(f: "Lit", env=None):
    """Truth of an arithmetic literal under ``env``; None for ``in``/``Pr``.

    Raises KeyError if a variable is unassigned.
    """
    if f.rel in ("in", "Pr"):
        return None
    vals = [term_value(t, env) for t in f.terms]
    if f.rel == "=":
        v = vals[0] == vals[1]
    elif f.rel == "<":
        v = vals[0] < vals[1]
    else:
        v = _code_relation(f.rel, vals)
    return v != f.neg


def shadows(f: Formula, bound=frozenset()) -> bool:
    """True if some quantifier rebinds a name already bound above it."""
    if isinstance(f, Lit):
        return False
    if isinstance(f, (And, Or)):
        return shadows(f.left, bound) or shadows(f.right, bound)
    return f.var in bound or shadows(f.body, bound | {f.var})


# -- bounded quantifier patterns ---------------------------------------------

def bounded_forall(f: Formula):
    """Match ``A x.(!(x<t) | B)``; return ``(t, B)`` or None."""
    if isinstance(f, Forall) and isinstance(f.body, Or):
        g = f.body.left
        if (isinstance(g, Lit) and g.rel == "<" and g.neg and g.terms[0] == Var(f.var)
                and f.var not in term_vars(g.terms[1])):
            return g.terms[1], f.body.right
    return None


def bounded_exists(f: Formula):
    """Match ``E x.(x<t & B)``; return ``(t, B)`` or None."""
    if isinstance(f, Exists) and isinstance(f.body, And):
        g = f.body.left
        if (isinstance(g, Lit) and g.rel == "<" and not g.neg and g.terms[0] == Var(f.var)
                and f.var not in term_vars(g.terms[1])):
            return g.terms[1], f.body.right
    return None


def forall_lt(x: str, t: Term, body: Formula) -> Formula:
    return Forall(x, Or(Lit("<", (Var(x), t), True), body))


def exists_lt(x: str, t: Term, body: Formula) -> Formula:
    return Exists(x, And(lt(Var(x), t), body))


def forall_prec(x: str, t: Term, body: Formula) -> Formula:
    return Forall(x, Or(Lit("prec", (Var(x), t), True), body))


def exists_prec(x: str, t: Term, body: Formula) -> Formula:
    return Exists(x, And(prec_(Var(x), t), body))


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class FormulaClass:
    """Minimal class of a formula.

    ``tag`` is one of Delta00, Pi0n, Sigma0n (arithmetic formulas) or Pi1n,
    Sigma1n; ``level`` is the n of the tag.  ``pi1``/``sigma1`` are the least
    n with the formula in Pi^1_n / Sigma^1_n (number quantifiers and
    connectives do not raise these levels).  ``matrix_rank`` is the largest
    rank of a maximal set-quantifier-free subformula.
    """
    tag: str
    level: int
    rank: int
    lightface: bool
    closed: bool
    pi1: int
    sigma1: int
    matrix_rank: int

    @property
    def arithmetic(self) -> bool:
        return self.tag in ("Delta00", "Pi0n", "Sigma0n")

    def in_R(self, m: int) -> bool:
        return self.rank <= m

    def is_pi1(self, n: int) -> bool:
        return self.pi1 <= n

    def is_sigma1(self, n: int) -> bool:
        return self.sigma1 <= n

    def in_P(self, n: int, m: int) -> bool:
        return self.pi1 <= n and self.matrix_rank <= m

    def __str__(self):
        if self.tag == "Delta00":
            return "Delta00"
        return f"{self.tag}({self.level})"


def _levels0(f):
    """(sigma, pi) arithmetic levels of a set-quantifier-free formula."""
    if isinstance(f, Lit):
        return 0, 0
    if isinstance(f, (And, Or)):
        sl, pl = _levels0(f.left)
        sr, pr_ = _levels0(f.right)
        return max(sl, sr), max(pl, pr_)
    b = bounded_forall(f) if isinstance(f, Forall) else bounded_exists(f)
    if b is not None:
        return _levels0(b[1])
    s, p = _levels0(f.body)
    if isinstance(f, Forall):
        p2 = max(1, min(p, s + 1))
        return p2 + 1, p2
    s2 = max(1, min(s, p + 1))
    return s2, s2 + 1


def _levels1(f):
    """(sigma1, pi1, matrix_rank)."""
    if isinstance(f, Lit):
        return 0, 0, 0
    if isinstance(f, (And, Or)):
        sl, pl, ml = _levels1(f.left)
        sr, pr_, mr = _levels1(f.right)
        s, p = max(sl, sr), max(pl, pr_)
        m = rank(f) if s == p == 0 else max(ml, mr)
        return s, p, m
    s, p, m = _levels1(f.body)
    if not is_set_var(f.var):
        if s == p == 0:
            return 0, 0, rank(f)
        return s, p, m
    if isinstance(f, Forall):
        p2 = max(1, min(p, s + 1))
        return p2 + 1, p2, m
    s2 = max(1, min(s, p + 1))
    return s2, s2 + 1, m


def classify(f: Formula) -> FormulaClass:
    s1, p1, mrank = _levels1(f)
    fv = free_vars(f)
    common = dict(rank=rank(f), lightface=not any(is_set_var(v) for v in fv), closed=not fv,
                  pi1=p1, sigma1=s1, matrix_rank=mrank)
    if s1 == p1 == 0:
        s0, p0 = _levels0(f)
        if s0 == p0 == 0:
            return FormulaClass("Delta00", 0, **common)
        if p0 < s0:
            return FormulaClass("Pi0n", p0, **common)
        return FormulaClass("Sigma0n", s0, **common)
    if p1 <= s1:
        return FormulaClass("Pi1n", p1, **common)
    return FormulaClass("Sigma1n", s1, **common)


# -- printing --------------------------------------------------------------------

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Add):
        r = print_term(t.right)
        if isinstance(t.right, Add):
            r = f"({r})"
        return f"{print_term(t.left)}+{r}"
    left = print_term(t.left)
    if isinstance(t.left, Add):
        left = f"({left})"
    r = print_term(t.right)
    if isinstance(t.right, (Add, Mul)):
        r = f"({r})"
    return f"{left}*{r}"


def print_formula(f: Formula) -> str:
    if isinstance(f, Lit):
        return _print_lit(f)
    if isinstance(f, (And, Or)):
        left = print_formula(f.left)
        if isinstance(f.left, Quant):
            # a quantifier body extends as far right as possible
            left = f"({left})"
        op = "&" if isinstance(f, And) else "|"
        return f"({left} {op} {print_formula(f.right)})"
    q = "A" if isinstance(f, Forall) else "E"
    return f"{q} {f.var}. {print_formula(f.body)}"


def _print_lit(f: Lit) -> str:
    ts = [print_term(t) for t in f.terms]
    if f.rel == "=":
        return f"{ts[0]}{'!=' if f.neg else '='}{ts[1]}"
    if f.rel == "in":
        return f"{ts[0]} {'notin' if f.neg else 'in'} {f.setvar}"
    if f.rel == "<":
        core = f"{ts[0]}<{ts[1]}"
    elif f.rel == "prec":
        core = f"{ts[0]} prec {ts[1]}"
    elif f.rel == "Pr":
        core = f"Pr[{f.theory}]({', '.join(ts)})"
    else:
        core = f"{f.rel}({', '.join(ts)})"
    return f"!({core})" if f.neg else core


# -- parsing ---------------------------------------------------------------------

_TOKENS = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<neq>!=)
  | (?P<pr>Pr\[(?P<thy>[^\]\s]+)\])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_'\#]*)
  | (?P<sym>[=<+*()&|!.,])
""", re.X)

KEYWORDS = {"in", "notin", "prec", "jmp", "osum", "A", "E"}


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "thy":
            kind = "pr"
        if kind != "ws":
            val = m.group("thy") if kind == "pr" else m.group(0)
            if kind == "ident" and val in KEYWORDS:
                kind = "kw"
            toks.append((kind, val, m.start()))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[self.i + k]

    def at(self, val, kind=None):
        t = self.peek()
        return t[1] == val and (kind is None or t[0] == kind) and t[0] != "ident"

    def expect(self, val):
        t = self.peek()
        if t[1] != val or t[0] == "ident":
            raise ParseError(f"expected {val!r}, found {t[1] or 'end of input'!r}", t[2])
        self.i += 1
        return t

    def fail(self, msg):
        raise ParseError(msg, self.peek()[2])

    # formulas
    def formula(self):
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Or(negate(left), self.formula())
        return left

    def disj(self):
        out = self.conj()
        while self.at("|"):
            self.i += 1
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.unary()
        while self.at("&"):
            self.i += 1
            out = And(out, self.unary())
        return out

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "sym" and val == "!":
            self.i += 1
            return negate(self.unary())
        if kind == "kw" and val in ("A", "E"):
            self.i += 1
            var = self.peek()
            if var[0] != "ident":
                self.fail("expected a variable after quantifier")
            self.i += 1
            if self.at("."):
                self.i += 1
                body = self.formula()
            else:
                body = self.unary()
            return (Forall if val == "A" else Exists)(var[1], body)
        if kind == "sym" and val == "(":
            save = self.i
            try:
                return self.literal()
            except ParseError:
                self.i = save
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        return self.literal()

    def literal(self):
        kind, val, pos = self.peek()
        if kind == "pr":
            self.i += 1
            self.expect("(")
            args = [self.term()]
            if self.at(","):
                self.i += 1
                args.append(self.term())
            self.expect(")")
            return Lit("Pr", tuple(args), theory=val)
        if kind == "kw" and val in ("jmp", "osum"):
            self.i += 1
            self.expect("(")
            args = [self.term()]
            while self.at(","):
                self.i += 1
                args.append(self.term())
            self.expect(")")
            if len(args) != (3 if val == "jmp" else 4):
                raise ParseError(f"wrong arity for {val}", pos)
            return Lit(val, tuple(args))
        left = self.term()
        kind, val, pos = self.peek()
        if val in ("in", "notin") and kind == "kw":
            self.i += 1
            sv = self.peek()
            if sv[0] != "ident" or not is_set_var(sv[1]):
                self.fail("expected a set variable")
            self.i += 1
            return Lit("in", (left,), val == "notin", setvar=sv[1])
        if kind == "neq" or (kind == "sym" and val in ("=", "<")) or (kind == "kw" and val == "prec"):
            self.i += 1
            right = self.term()
            if kind == "neq":
                return Lit("=", (left, right), True)
            return Lit("prec" if val == "prec" else val, (left, right))
        raise ParseError(f"expected a relation, found {val or 'end of input'!r}", pos)

    # terms
    def term(self):
        out = self.prod()
        while self.at("+"):
            self.i += 1
            out = Add(out, self.prod())
        return out

    def prod(self):
        out = self.atom()
        while self.at("*"):
            self.i += 1
            out = Mul(out, self.atom())
        return out

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.i += 1
            return const(int(val))
        if kind == "ident":
            if is_set_var(val):
                raise ParseError(f"set variable {val} used as a term", pos)
            self.i += 1
            return Var(val)
        if kind == "sym" and val == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail(f"unexpected {p.peek()[1]!r}")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "eof":
        p.fail(f"unexpected {p.peek()[1]!r}")
    return t


parse = parse_formula
print_ = print_formula


# -- Goedel numbering ------------------------------------------------------------
#
# A formula is serialized in prefix order to a sequence of naturals:
#   terms:    Var -> 0, name        Zero -> 1       One -> 2
#             Add -> 3, l, r        Mul -> 4, l, r  Num -> 5, value
#   formulas: Lit -> 10 + 2*rel_index + neg, arity, terms..., [setvar|theory]
#             And -> 30, l, r   Or -> 31, l, r   Forall -> 32, name, body
#             Exists -> 33, name, body
# where a name is its length followed by its code points.  The sequence is
# written as LEB128 varints behind a 0x01 marker byte and read as a big-endian
# integer.

_REL_INDEX = {r: i for i, r in enumerate(RELATIONS)}


class CodeError(ValueError):
    pass


def _emit_name(name, out):
    out.append(len(name))
    out.extend(ord(c) for c in name)


def _emit_term(t, out):
    if isinstance(t, Var):
        out.append(0)
        _emit_name(t.name, out)
    elif isinstance(t, Zero):
        out.append(1)
    elif isinstance(t, One):
        out.append(2)
    elif isinstance(t, Num):
        out.extend((5, t.value))
    else:
        out.append(3 if isinstance(t, Add) else 4)
        _emit_term(t.left, out)
        _emit_term(t.right, out)


def _emit_formula(f, out):
    if isinstance(f, Lit):
        out.append(10 + 2 * _REL_INDEX[f.rel] + int(f.neg))
        out.append(len(f.terms))
        for t in f.terms:
            _emit_term(t, out)
        if f.rel == "in":
            _emit_name(f.setvar, out)
        elif f.rel == "Pr":
            _emit_name(f.theory, out)
    elif isinstance(f, (And, Or)):
        out.append(30 if isinstance(f, And) else 31)
        _emit_formula(f.left, out)
        _emit_formula(f.right, out)
    else:
        out.append(32 if isinstance(f, Forall) else 33)
        _emit_name(f.var, out)
        _emit_formula(f.body, out)


def pack(seq) -> int:
    buf = bytearray(b"\x01")
    for n in seq:
        while True:
            byte = n & 0x7F
            n >>= 7
            if n:
                buf.append(byte | 0x80)
            else:
                buf.append(byte)
                break
    return int.from_bytes(bytes(buf), "big")


def unpack(code: int) -> list:
    if code <= 0:
        raise CodeError("not a code")
    raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
    if raw[0] != 1:
        raise CodeError("missing code marker")
    out, n, shift = [], 0, 0
    for byte in raw[1:]:
        if shift and byte == 0:
            raise CodeError("non-minimal varint")
        n |= (byte & 0x7F) << shift
        if byte & 0x80:
            shift += 7
        else:
            out.append(n)
            n, shift = 0, 0
    if shift:
        raise CodeError("truncated varint")
    return out


def encode(f: Formula) -> int:
    seq: list = []
    _emit_formula(f, seq)
    return pack(seq)


class _Reader:
    def __init__(self, seq):
        self.seq = seq
        self.i = 0

    def next(self):
        if self.i >= len(self.seq):
            raise CodeError("code ends early")
        v = self.seq[self.i]
        self.i += 1
        return v

    def name(self):
        n = self.next()
        if n == 0:
            raise CodeError("empty name")
        try:
            return "".join(chr(self.next()) for _ in range(n))
        except (ValueError, OverflowError):
            raise CodeError("bad character") from None

    def term(self):
        tag = self.next()
        if tag == 0:
            name = self.name()
            if is_set_var(name) or not name[0].isalpha():
                raise CodeError("bad number variable name")
            return Var(name)
        if tag == 1:
            return ZERO_T
        if tag == 2:
            return ONE_T
        if tag == 5:
            v = self.next()
            if v < 2:
                raise CodeError("bad numeral constant")
            return Num(v)
        if tag in (3, 4):
            left = self.term()
            return (Add if tag == 3 else Mul)(left, self.term())
        raise CodeError(f"bad term tag {tag}")

    def formula(self):
        tag = self.next()
        if 10 <= tag < 10 + 2 * len(RELATIONS):
            rel = RELATIONS[(tag - 10) // 2]
            neg = bool((tag - 10) % 2)
            arity = self.next()
            want = {"=": (2,), "<": (2,), "prec": (2,), "in": (1,), "Pr": (1, 2), "jmp": (3,), "osum": (4,)}[rel]
            if arity not in want:
                raise CodeError("bad literal arity")
            terms = tuple(self.term() for _ in range(arity))
            setvar = theory = None
            if rel == "in":
                setvar = self.name()
                if not is_set_var(setvar):
                    raise CodeError("bad set variable")
            elif rel == "Pr":
                theory = self.name()
            return Lit(rel, terms, neg, setvar, theory)
        if tag in (30, 31):
            left = self.formula()
            return (And if tag == 30 else Or)(left, self.formula())
        if tag in (32, 33):
            name = self.name()
            if not name[0].isalpha():
                raise CodeError("bad variable name")
            return (Forall if tag == 32 else Exists)(name, self.formula())
        raise CodeError(f"bad formula tag {tag}")


def decode(code: int) -> Formula:
    r = _Reader(unpack(code))
    f = r.formula()
    if r.i != len(r.seq):
        raise CodeError("trailing data in code")
    return f


def is_formula_code(code: int) -> bool:
    try:
        decode(code)
    except CodeError:
        return False
    return True


def _numeral_seq(n):
    # prefix serialization of numeral(n), built without the AST
    if n == 0:
        return [1]
    return [3] * (n - 1) + [2] + [2] * (n - 1)


def subst_num(code: int, n: int, v: str) -> int:
    """Code of the formula with numeral ``n`` put for the free variable ``v``.

    Works on the serialized sequence directly: it scans the prefix encoding,
    tracks binders, and splices in the numeral's encoding at each free
    occurrence of ``v``.
    """
    seq = unpack(code)
    out: list = []
    pos = 0
    hits = 0

    def take():
        nonlocal pos
        if pos >= len(seq):
            raise CodeError("code ends early")
        pos += 1
        return seq[pos - 1]

    def name():
        k = take()
        chars = [take() for _ in range(k)]
        return [k] + chars, "".join(map(chr, chars))

    def term(bound):
        nonlocal hits
        tag = take()
        if tag == 0:
            raw, nm = name()
            if nm == v and nm not in bound:
                out.extend(_numeral_seq(n))
                hits += 1
            else:
                out.append(0)
                out.extend(raw)
        elif tag in (1, 2):
            out.append(tag)
        elif tag == 5:
            out.extend((5, take()))
        elif tag in (3, 4):
            out.append(tag)
            term(bound)
            term(bound)
        else:
            raise CodeError(f"bad term tag {tag}")

    def formula(bound):
        tag = take()
        out.append(tag)
        if 10 <= tag < 10 + 2 * len(RELATIONS):
            rel = RELATIONS[(tag - 10) // 2]
            arity = take()
            out.append(arity)
            for _ in range(arity):
                term(bound)
            if rel in ("in", "Pr"):
                out.extend(name()[0])
        elif tag in (30, 31):
            formula(bound)
            formula(bound)
        elif tag in (32, 33):
            raw, nm = name()
            out.extend(raw)
            formula(bound | {nm})
        else:
            raise CodeError(f"bad formula tag {tag}")

    formula(frozenset())
    if pos != len(seq):
        raise CodeError("trailing data in code")
    if not hits:
        raise CodeError(f"variable {v} is not free in the coded formula")
    return pack(out)
