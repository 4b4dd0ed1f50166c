"""Finitary two-sorted Tait calculus, theory descriptors and the proof checker.

A sequent is a tuple of NNF formulas read disjunctively; equality of
sequents is multiset equality and contraction is implicit.  Every rule uses
*subset* premises: a premise may mention any formula of the conclusion plus
the rule's active formulas, so weakening is built into the rules.

Rule tags and their arguments (``Proof`` fields):

=========  ==========================================================
LogAx      literal pair ``l, ~l`` in the conclusion
TrueLit    closed arithmetic literal true under evaluation
EqAx       ``s!=t, ~m, n`` with ``n`` = ``m`` after replacing some ``s`` by ``t``; or ``t=t``
TheoryAx   the theory's axiom sentence occurs in the conclusion
SchemaAx   ``schema`` kind, ``phi`` and ``var``; the rebuilt instance occurs
PrAx       positive ``Pr`` literal; recorded as a certificate obligation
OrIntro    ``principal`` disjunction, one premise
AndIntro   ``principal`` conjunction, two premises
ExNum      ``principal``, witness ``term``
AllNum     ``principal``, eigenvariable ``var``
ExSet      ``principal``, witness set variable ``var``
AllSet     ``principal``, eigenvariable ``var``
Cut        ``formula``; premises ``Gamma, C`` and ``Gamma, ~C``
=========  ==========================================================
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from . import schemas
from .syntax import (
    And, Exists, Forall, Formula, Lit, Or, Term, Var, classify, free_vars, is_set_var,
    literal_value, negate, parse_formula, parse_term, print_formula, print_term, rank,
    subformulas, subst, subst_set, term_vars, Add, Mul, fresh_name,
)

RULES = ("LogAx", "TrueLit", "EqAx", "TheoryAx", "SchemaAx", "PrAx", "OrIntro", "AndIntro",
         "ExNum", "AllNum", "ExSet", "AllSet", "Cut")
AXIOMS = ("LogAx", "TrueLit", "EqAx", "TheoryAx", "SchemaAx", "PrAx")


# -- theories ------------------------------------------------------------------

@dataclass(frozen=True)
class Descriptor:
    """A schema package.

    ``kind`` is ``ind``, ``ti``, ``rfn`` (uniform reflection), ``lrfn``
    (local reflection) or ``facts`` (notation facts).  ``cls`` is ``None``
    for the full schema, else ``("pi1"|"sigma1", n)``.
    """
    kind: str
    cls: Optional[tuple] = None
    lightface: bool = False
    over: Optional[str] = None

    def admits(self, phi: Formula) -> bool:
        if self.lightface and any(is_set_var(v) for v in free_vars(phi)):
            return False
        if self.cls is None:
            return True
        c = classify(phi)
        which, n = self.cls
        return c.pi1 <= n if which == "pi1" else c.sigma1 <= n

    def key(self) -> str:
        base = {"ind": "ind", "ti": "ti-eps0", "rfn": "rfn", "lrfn": "lrfn", "facts": "notation-facts"}[self.kind]
        if self.kind == "ind" and self.cls is None:
            base = "full-induction"
        if self.lightface:
            base = "lf-" + base
        if self.cls is not None:
            base += f"-{self.cls[0]}-{self.cls[1]}"
        if self.over:
            base += f"@{self.over}"
        return base


_DESC_RE = re.compile(
    r"^(?P<lf>lf-)?(?P<kind>full-induction|ind|ti-eps0|rfn|lrfn|notation-facts)"
    r"(?:-(?P<which>pi1|sigma1)-(?P<n>\d+))?(?:@(?P<over>[A-Za-z0-9_.-]+))?$")


def parse_descriptor(text: str) -> Descriptor:
    m = _DESC_RE.match(text.strip())
    if not m:
        raise TheoryError(f"unknown schema descriptor {text.strip()!r}")
    kind = {"full-induction": "ind", "ind": "ind", "ti-eps0": "ti", "rfn": "rfn", "lrfn": "lrfn",
            "notation-facts": "facts"}[m["kind"]]
    if m["kind"] == "ind" and m["which"] is None:
        raise TheoryError("ind needs a class; use full-induction for the unrestricted schema")
    cls = (m["which"], int(m["n"])) if m["which"] else None
    return Descriptor(kind, cls, bool(m["lf"]), m["over"])


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class Theory:
    name: str
    axiom: Optional[Formula] = None
    schemas: tuple = ()
    axiom_class: Optional[tuple] = None

    def descriptors(self, kind):
        return [d for d in self.schemas if d.kind == kind]

    def pr_name(self, d: Descriptor) -> str:
        return d.over or self.name


def make_theory(name, axiom=None, schemas=(), axiom_class=("pi1", 2)) -> Theory:
    """Assemble a theory; the axiom must be a sentence within the declared class."""
    if isinstance(axiom, str):
        axiom = parse_formula(axiom)
    descs = tuple(parse_descriptor(s) if isinstance(s, str) else s for s in schemas)
    if axiom is not None:
        c = classify(axiom)
        if not c.closed:
            raise TheoryError(f"axiom must be a sentence; free: {sorted(free_vars(axiom))}")
        which, n = axiom_class
        ok = c.pi1 <= n if which == "pi1" else c.sigma1 <= n
        if not ok:
            raise TheoryError(f"class mismatch: declared {which}-{n}, computed {c}")
    return Theory(name, axiom, descs, tuple(axiom_class))


def _unquote(v: str) -> str:
    v = v.strip()
    if len(v) >= 2 and v[0] == v[-1] == '"':
        return v[1:-1].replace('\\"', '"').replace("\\\\", "\\")
    return v


def parse_theory(text: str) -> Theory:
    """Read the key-value theory format (``name``, ``axiom``, ``axiom_class``, ``schemas``)."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise TheoryError(f"line {lineno}: expected key = value")
        k, v = line.split("=", 1)
        k = k.strip()
        if k not in ("name", "axiom", "axiom_class", "schemas"):
            raise TheoryError(f"line {lineno}: unknown key {k!r}")
        fields[k] = _unquote(v)
    if "name" not in fields:
        raise TheoryError("theory needs a name")
    cls = ("pi1", 2)
    if "axiom_class" in fields:
        m = re.fullmatch(r"(pi1|sigma1)-(\d+)", fields["axiom_class"])
        if not m:
            raise TheoryError(f"bad axiom_class {fields['axiom_class']!r}")
        cls = (m[1], int(m[2]))
    names = [s for s in fields.get("schemas", "").split(",") if s.strip()]
    return make_theory(fields["name"], fields.get("axiom"), names, cls)


def format_theory(th: Theory) -> str:
    lines = [f"name = {th.name}"]
    if th.axiom is not None:
        lines.append(f'axiom = "{print_formula(th.axiom)}"')
    if th.axiom_class:
        lines.append(f"axiom_class = {th.axiom_class[0]}-{th.axiom_class[1]}")
    if th.schemas:
        lines.append("schemas = " + ", ".join(d.key() for d in th.schemas))
    return "\n".join(lines) + "\n"


def load_theory(path) -> Theory:
    with open(path) as fh:
        return parse_theory(fh.read())


def schema_instance(th: Theory, d: Descriptor, phi: Formula, var: Optional[str]) -> Formula:
    if d.kind == "ind":
        return schemas.build_Ind(phi, var)
    if d.kind == "ti":
        return schemas.build_TI(phi, var)
    if d.kind == "rfn":
        return schemas.build_RFN(th.pr_name(d), phi, var)
    if d.kind == "lrfn":
        return schemas.build_Rfn(th.pr_name(d), phi)
    raise TheoryError(f"no instance builder for {d.kind}")


# -- proofs ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Proof:
    rule: str
    seq: tuple
    children: tuple = ()
    principal: Optional[Formula] = None
    formula: Optional[Formula] = None     # cut formula, or schema phi
    term: Optional[Term] = None           # ExNum witness
    var: Optional[str] = None             # eigenvariable, set witness, schema variable, fact name
    schema: Optional[str] = None          # SchemaAx kind

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        object.__setattr__(self, "children", tuple(self.children))


class Rejection(Exception):
    def __init__(self, position, reason, detail=""):
        self.position = tuple(position)
        self.reason = reason
        self.detail = detail
        super().__init__(f"rejected at {list(self.position)}: {reason}" + (f" ({detail})" if detail else ""))


@dataclass
class Report:
    height: int
    size: int
    cut_ranks: list
    axiom_tags: Counter
    obligations: list = field(default_factory=list)
    schema_instances: list = field(default_factory=list)

    @property
    def max_cut_rank(self) -> int:
        return max(self.cut_ranks, default=0)

    @property
    def has_cuts(self) -> bool:
        return bool(self.cut_ranks)

    def lines(self):
        out = [f"height {self.height}", f"size {self.size}", f"cuts {len(self.cut_ranks)}",
               f"max-cut-rank {self.max_cut_rank if self.cut_ranks else '-'}"]
        for tag in sorted(self.axiom_tags):
            out.append(f"axiom {tag} {self.axiom_tags[tag]}")
        for th, code, arg in self.obligations:
            out.append(f"obligation Pr[{th}] {code}" + (f" at {arg}" if arg else ""))
        return out


def _replaceable(a: Term, b: Term, s: Term, t: Term) -> bool:
    """True if ``b`` arises from ``a`` by replacing some occurrences of ``s`` with ``t``."""
    if a == b or (a == s and b == t):
        return True
    if type(a) is type(b) and isinstance(a, (Add, Mul)):
        return _replaceable(a.left, b.left, s, t) and _replaceable(a.right, b.right, s, t)
    return False


def is_eq_axiom(seq) -> bool:
    lits = [f for f in seq if isinstance(f, Lit)]
    for f in lits:
        if f.rel == "=" and not f.neg and f.terms[0] == f.terms[1]:
            return True
    neqs = [f for f in lits if f.rel == "=" and f.neg]
    for e in neqs:
        s, t = e.terms
        for m in lits:
            for n in lits:
                if (m.rel != n.rel or m.neg == n.neg or m.setvar != n.setvar or m.theory != n.theory
                        or len(m.terms) != len(n.terms)):
                    continue
                # s=t and m(s) give m(t): the sequent ~m(s), m(t), s!=t is valid
                if all(_replaceable(a, b, s, t) for a, b in zip(m.terms, n.terms)):
                    return True
                if all(_replaceable(a, b, t, s) for a, b in zip(m.terms, n.terms)):
                    return True
    return False


def is_log_axiom(seq) -> bool:
    lits = {f for f in seq if isinstance(f, Lit)}
    return any(negate(f) in lits for f in lits)


def true_literal(seq):
    for f in seq:
        if isinstance(f, Lit) and f.rel not in ("in", "Pr") and not _vars_of_lit(f):
            if literal_value(f):
                return f
    return None


def _vars_of_lit(f: Lit):
    out = set()
    for t in f.terms:
        out |= term_vars(t)
    return out


def seq_free_vars(seq) -> set:
    out = set()
    for f in seq:
        out |= free_vars(f)
    return out


def _instantiate(q, value):
    """Body of quantifier ``q`` with its variable replaced by ``value``."""
    if is_set_var(q.var):
        return subst_set(q.body, q.var, value)
    return subst(q.body, q.var, value)


def check_fin(p: Proof, th: Theory) -> Report:
    """Check every node; raise ``Rejection`` at the first failure (preorder)."""
    rep = Report(0, 0, [], Counter())
    rep.height = _check(p, th, (), rep)
    return rep


def _check(p: Proof, th: Theory, pos, rep: Report) -> int:
    rep.size += 1
    if p.rule not in RULES:
        raise Rejection(pos, "bad-rule", p.rule)
    gamma = set(p.seq)

    def reject(reason, detail=""):
        raise Rejection(pos, reason, detail)

    def arity(k):
        if len(p.children) != k:
            reject("premise-count", f"{p.rule} needs {k} premise(s), got {len(p.children)}")

    def premise(i, extra):
        allowed = gamma | set(extra)
        bad = [f for f in p.children[i].seq if f not in allowed]
        if bad:
            reject("premise-shape", f"premise {i} has foreign formula {print_formula(bad[0])}")

    def need_principal(types):
        a = p.principal
        if a is None or not isinstance(a, types):
            reject("principal", f"{p.rule} needs a principal of the right shape")
        if a not in gamma:
            reject("principal", f"principal {print_formula(a)} is not in the conclusion")
        return a

    if p.rule in AXIOMS:
        arity(0)
        rep.axiom_tags[p.rule] += 1
        if p.rule == "LogAx" and not is_log_axiom(p.seq):
            reject("unrecognized-axiom", "no complementary literal pair")
        elif p.rule == "TrueLit" and true_literal(p.seq) is None:
            reject("unrecognized-axiom", "no closed true arithmetic literal")
        elif p.rule == "EqAx" and not is_eq_axiom(p.seq):
            reject("unrecognized-axiom", "not an equality axiom")
        elif p.rule == "TheoryAx":
            if th.axiom is None or th.axiom not in gamma:
                reject("unrecognized-axiom", "theory axiom absent from the sequent")
        elif p.rule == "SchemaAx":
            _check_schema(p, th, gamma, reject, rep)
        elif p.rule == "PrAx":
            f = p.principal
            if not (isinstance(f, Lit) and f.rel == "Pr" and not f.neg and f in gamma):
                reject("unrecognized-axiom", "PrAx needs a positive Pr literal in the conclusion")
            code = f.terms[0]
            arg = print_term(f.terms[1]) if len(f.terms) > 1 else ""
            rep.obligations.append((f.theory, print_term(code), arg))
        return 0

    if p.rule == "OrIntro":
        arity(1)
        a = need_principal(Or)
        premise(0, (a.left, a.right))
    elif p.rule == "AndIntro":
        arity(2)
        a = need_principal(And)
        premise(0, (a.left,))
        premise(1, (a.right,))
    elif p.rule in ("ExNum", "AllNum", "ExSet", "AllSet"):
        arity(1)
        a = need_principal(Exists if p.rule.startswith("Ex") else Forall)
        want_set = p.rule.endswith("Set")
        if is_set_var(a.var) != want_set:
            reject("principal", f"{p.rule} on a quantifier of the wrong sort")
        if p.rule == "ExNum":
            if p.term is None:
                reject("witness", "ExNum needs a witness term")
            inst = subst(a.body, a.var, p.term)
        else:
            v = p.var
            if v is None or is_set_var(v) != want_set:
                reject("eigenvariable" if p.rule.startswith("All") else "witness",
                       f"{p.rule} needs a {'set' if want_set else 'number'} variable")
            if p.rule.startswith("All") and v in seq_free_vars(p.seq):
                reject("eigenvariable", f"{v} occurs free in the conclusion")
            inst = _instantiate(a, Var(v) if not want_set else v)
        premise(0, (inst,))
    elif p.rule == "Cut":
        arity(2)
        c = p.formula
        if c is None:
            reject("cut", "Cut needs a formula")
        premise(0, (c,))
        premise(1, (negate(c),))
        rep.cut_ranks.append(rank(c))
    h = 0
    for i, ch in enumerate(p.children):
        h = max(h, _check(ch, th, pos + (i,), rep))
    return h + 1


def _check_schema(p, th, gamma, reject, rep):
    kind = p.schema
    if kind == "facts":
        if not th.descriptors("facts"):
            reject("class-violation", "theory has no notation facts")
        fact = schemas.NOTATION_FACTS.get(p.var)
        if fact is None:
            reject("unrecognized-axiom", f"unknown notation fact {p.var!r}")
        if fact not in gamma:
            reject("unrecognized-axiom", f"fact {p.var} absent from the sequent")
        rep.schema_instances.append(("facts", p.var))
        return
    descs = th.descriptors(kind)
    if not descs:
        reject("unrecognized-axiom", f"theory declares no {kind!r} schema")
    phi = p.formula
    if phi is None:
        reject("unrecognized-axiom", "SchemaAx needs phi")
    tried = False
    for d in descs:
        if not d.admits(phi):
            continue
        tried = True
        try:
            inst = schema_instance(th, d, phi, p.var)
        except schemas.SchemaError as e:
            reject("unrecognized-axiom", str(e))
        if inst in gamma:
            rep.schema_instances.append((d.key(), print_formula(phi)))
            return
    if not tried:
        reject("class-violation", f"{print_formula(phi)} of class {classify(phi)} is outside every {kind} schema")
    reject("unrecognized-axiom", "schema instance absent from the sequent")


# -- subformula audit ----------------------------------------------------------------

def skeleton(f: Formula):
    """Shape of ``f`` with terms and variable names erased (sorts kept)."""
    if isinstance(f, Lit):
        return ("L", f.rel, f.neg, f.theory, len(f.terms))
    if isinstance(f, (And, Or)):
        return (type(f).__name__, skeleton(f.left), skeleton(f.right))
    return (type(f).__name__, is_set_var(f.var), skeleton(f.body))


def subformula_skeletons(seq) -> set:
    return {skeleton(g) for f in seq for g in subformulas(f)}


def subformula_audit(p: Proof):
    """Return None if every node formula is a subformula of the end sequent up to
    term substitution and set renaming, else the first violating position."""
    allowed = subformula_skeletons(p.seq)
    stack = [(p, ())]
    while stack:
        node, pos = stack.pop()
        if any(skeleton(f) not in allowed for f in node.seq):
            return pos
        for i in reversed(range(len(node.children))):
            stack.append((node.children[i], pos + (i,)))
    return None


# -- generic derivations -----------------------------------------------------------------

def identity(a: Formula, ctx=()) -> Proof:
    """Cut-free proof of ``ctx, a, ~a`` (eigenvariables fresh for the sequent)."""
    na = negate(a)
    ctx = tuple(ctx)
    if isinstance(a, Lit):
        return Proof("LogAx", ctx + (a, na))
    if isinstance(a, (Exists, Or)):
        a, na = na, a
    if isinstance(a, Forall):
        sort_set = is_set_var(a.var)
        avoid = seq_free_vars(ctx + (a,))
        e = fresh_name(a.var, avoid)
        val = e if sort_set else Var(e)
        inst = _instantiate(a, val)
        inner = identity(inst, ctx)
        ex = Proof("ExSet" if sort_set else "ExNum", ctx + (na, inst), (inner,), principal=na,
                   term=None if sort_set else val, var=e if sort_set else None)
        return Proof("AllSet" if sort_set else "AllNum", ctx + (a, na), (ex,), principal=a, var=e)
    nb, nc = na.left, na.right
    left = identity(a.left, ctx + (nc,))
    right = identity(a.right, ctx + (nb,))
    conj = Proof("AndIntro", ctx + (a, nb, nc), (left, right), principal=a)
    return Proof("OrIntro", ctx + (a, na), (conj,), principal=na)


# -- proof files --------------------------------------------------------------------------

_TOK = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')


def _sexp(text):
    pos, stack, cur = 0, [], []
    text = text.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ProofFormatError(f"bad token at offset {pos}")
        pos = m.end()
        if m.group(1):
            stack.append(cur)
            cur = []
        elif m.group(2):
            if not stack:
                raise ProofFormatError(f"unbalanced ')' at offset {pos}")
            done, cur = cur, stack.pop()
            cur.append(done)
        elif m.group(3) is not None:
            cur.append(("str", re.sub(r"\\(.)", r"\1", m.group(3))))
        else:
            cur.append(("sym", m.group(4)))
    if stack:
        raise ProofFormatError("unbalanced '('")
    if len(cur) != 1:
        raise ProofFormatError("expected exactly one top-level form")
    return cur[0]


class ProofFormatError(ValueError):
    pass


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_proof(p: Proof, indent=0) -> str:
    pad = "  " * indent
    parts = [f"(rule {_q(p.rule)}"]
    if p.principal is not None:
        parts.append(f"(principal {_q(print_formula(p.principal))})")
    if p.formula is not None:
        parts.append(f"(formula {_q(print_formula(p.formula))})")
    if p.term is not None:
        parts.append(f"(term {_q(print_term(p.term))})")
    if p.var is not None:
        parts.append(f"(var {_q(p.var)})")
    if p.schema is not None:
        parts.append(f"(schema {_q(p.schema)})")
    parts.append("(seq" + "".join(" " + _q(print_formula(f)) for f in p.seq) + ")")
    head = pad + " ".join(parts)
    if not p.children:
        return head + ")"
    kids = "\n".join(format_proof(c, indent + 1) for c in p.children)
    return head + "\n" + kids + ")"


def _build(node):
    if not isinstance(node, list) or len(node) < 2 or node[0] != ("sym", "rule") or node[1][0] != "str":
        raise ProofFormatError("expected (rule \"<tag>\" ...)")
    kw = {}
    seq = None
    children = []
    for item in node[2:]:
        if not isinstance(item, list) or not item or item[0][0] != "sym":
            raise ProofFormatError("malformed node item")
        key = item[0][1]
        if key == "rule":
            children.append(_build(item))
            continue
        vals = [v[1] for v in item[1:] if isinstance(v, tuple) and v[0] == "str"]
        if key == "seq":
            seq = tuple(parse_formula(v) for v in vals)
        elif key in ("principal", "formula"):
            kw[key] = parse_formula(vals[0])
        elif key == "term":
            kw["term"] = parse_term(vals[0])
        elif key in ("var", "schema"):
            kw[key] = vals[0]
        else:
            raise ProofFormatError(f"unknown field {key!r}")
    if seq is None:
        raise ProofFormatError("node without (seq ...)")
    return Proof(node[1][1], seq, tuple(children), **kw)


def parse_proof(text: str) -> Proof:
    return _build(_sexp(text))


def load_proof(path) -> Proof:
    with open(path) as fh:
        return parse_proof(fh.read())


def proof_size(p: Proof) -> int:
    return 1 + sum(proof_size(c) for c in p.children)


def proof_height(p: Proof) -> int:
    return 0 if not p.children else 1 + max(proof_height(c) for c in p.children)


def iter_nodes(p: Proof, pos=()):
    yield pos, p
    for i, c in enumerate(p.children):
        yield from iter_nodes(c, pos + (i,))


# -- backward construction helpers ----------------------------------------------------------

def extend(seq, *fs):
    out, seen = list(seq), set(seq)
    for f in fs:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return tuple(out)


def close(seq) -> Proof:
    """Leaf proof of ``seq`` by LogAx, TrueLit or EqAx, whichever applies first."""
    if is_log_axiom(seq):
        return Proof("LogAx", seq)
    if true_literal(seq) is not None:
        return Proof("TrueLit", seq)
    if is_eq_axiom(seq):
        return Proof("EqAx", seq)
    raise ValueError("no axiom closes " + ", ".join(print_formula(f) for f in seq))


def t_or(seq, a, k):
    return Proof("OrIntro", seq, (k(extend(seq, a.left, a.right)),), principal=a)


def t_and(seq, a, kl, kr):
    return Proof("AndIntro", seq, (kl(extend(seq, a.left)), kr(extend(seq, a.right))), principal=a)


def t_ex(seq, a, witness, k):
    """ExNum / ExSet depending on the sort of ``a``'s variable."""
    if is_set_var(a.var):
        return Proof("ExSet", seq, (k(extend(seq, subst_set(a.body, a.var, witness))),),
                     principal=a, var=witness)
    if isinstance(witness, int):
        from .syntax import canon
        witness = canon(witness)
    return Proof("ExNum", seq, (k(extend(seq, subst(a.body, a.var, witness))),), principal=a, term=witness)


def t_all(seq, a, eigen, k):
    if is_set_var(a.var):
        return Proof("AllSet", seq, (k(extend(seq, subst_set(a.body, a.var, eigen))),), principal=a, var=eigen)
    return Proof("AllNum", seq, (k(extend(seq, subst(a.body, a.var, Var(eigen)))),), principal=a, var=eigen)


def t_cut(seq, c, k_pos, k_neg):
    return Proof("Cut", seq, (k_pos(extend(seq, c)), k_neg(extend(seq, negate(c)))), formula=c)


def t_schema(seq, kind, phi, var):
    return Proof("SchemaAx", seq, principal=None, formula=phi, var=var, schema=kind)


def t_id(seq, a):
    """Prove ``seq`` when it contains both ``a`` and its negation."""
    rest = tuple(f for f in seq if f not in (a, negate(a)))
    return _widen(identity(a, rest), seq)


def _widen(p: Proof, seq) -> Proof:
    # identity() orders formulas its own way; re-root on the requested sequent
    return Proof(p.rule, seq, p.children, p.principal, p.formula, p.term, p.var, p.schema)
