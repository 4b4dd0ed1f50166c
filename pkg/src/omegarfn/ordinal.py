"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` summands with strictly
decreasing exponents; the empty tuple is zero.  Values are immutable and
canonical, so structural equality is ordinal equality.

Natural-number codes use the Cantor pairing function::

    code(0)                      = 0
    code(w^e * c + rest)         = 1 + pair(pair(code(e), c - 1), code(rest))

Every natural decodes to *some* summand list; it is a valid code iff the
exponents of that list strictly decrease at every level.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from math import isqrt

LT, EQ, GT = -1, 0, 1

#: default nesting limit for ``omega_tower`` and the parser
MAX_DEPTH = 64


class OrdinalError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if not isinstance(e, Ordinal) or not isinstance(c, int) or c < 1:
                raise OrdinalError(f"bad summand ({e!r}, {c!r})")
            if prev is not None and compare(prev, e) != GT:
                raise OrdinalError("exponents must strictly decrease")
            prev = e

    @classmethod
    def from_summands(cls, summands) -> "Ordinal":
        """Build the canonical ordinal from summands given in any order.

        Summands with equal exponents are merged; the list is read as a
        multiset of ``w^e * c`` pieces, i.e. their natural sum.
        """
        acc: dict = {}
        for e, c in summands:
            if c < 0:
                raise OrdinalError("negative coefficient")
            if c:
                acc[e] = acc.get(e, 0) + c
        keys = sorted(acc, key=_SortKey, reverse=True)
        return cls(tuple((e, acc[e]) for e in keys))

    @classmethod
    def nat(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("negative natural")
        return cls(((ZERO, n),)) if n else ZERO

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def finite_value(self) -> int:
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def depth(self) -> int:
        """Nesting depth of exponents (0 for naturals)."""
        return max((1 + e.depth() for e, _ in self.terms if not e.is_zero()), default=0)

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) == LT

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"


class _SortKey:
    __slots__ = ("o",)

    def __init__(self, o):
        self.o = o

    def __lt__(self, other):
        return compare(self.o, other.o) == LT


ZERO = Ordinal(())
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return LT if ca < cb else GT
    la, lb = len(a.terms), len(b.terms)
    return EQ if la == lb else (LT if la < lb else GT)


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead = b.terms[0][0]
    keep = []
    for e, c in a.terms:
        r = compare(e, lead)
        if r == GT:
            keep.append((e, c))
        elif r == EQ:
            keep.append((e, c + b.terms[0][1]))
            return Ordinal(tuple(keep) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(keep) + b.terms)


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms or not b.terms:
        return ZERO
    lead_e, lead_c = a.terms[0]
    out = ZERO
    for e, c in b.terms:
        if e.is_zero():
            piece = Ordinal(((lead_e, lead_c * c),) + a.terms[1:])
        else:
            piece = Ordinal(((add(lead_e, e), c),))
        out = add(out, piece)
    return out


def omega_pow(a: Ordinal) -> Ordinal:
    return Ordinal(((a, 1),))


def omega_tower(k: int, max_depth: int = MAX_DEPTH) -> Ordinal:
    """omega_0 = 1, omega_{k+1} = w^(omega_k)."""
    if k < 0:
        raise OrdinalError("negative tower height")
    if k > max_depth:
        raise OrdinalError(f"tower height {k} exceeds depth limit {max_depth}")
    out = ONE
    for _ in range(k):
        out = omega_pow(out)
    return out


# -- natural-number codes -------------------------------------------------

def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode_nat(a: Ordinal) -> int:
    code = 0
    for e, c in reversed(a.terms):
        code = 1 + pair(pair(encode_nat(e), c - 1), code)
    return code


def decode_nat(n: int, max_depth: int = MAX_DEPTH) -> Ordinal:
    o = _decode(n, max_depth)
    if o is None:
        raise OrdinalError(f"{n} is not an ordinal code")
    return o


def is_code(n: int) -> bool:
    return n >= 0 and _decode(n, MAX_DEPTH) is not None


def _decode(n: int, depth: int):
    if depth < 0:
        return None
    terms = []
    while n:
        head, n = unpair(n - 1)
        ecode, c = unpair(head)
        e = _decode(ecode, depth - 1)
        if e is None:
            return None
        if terms and compare(terms[-1][0], e) != GT:
            return None
        terms.append((e, c + 1))
    return Ordinal(tuple(terms))


def prec(m: int, n: int) -> bool:
    """The notation order on codes; false unless both are codes."""
    a, b = _decode(m, MAX_DEPTH), _decode(n, MAX_DEPTH)
    return a is not None and b is not None and compare(a, b) == LT


# -- text ------------------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite() or e == OMEGA:
            base = f"w^{format_ordinal(e)}"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|(\^)|(\*)|(\+)|(\()|(\)))")


def parse_ordinal(text: str, max_depth: int = MAX_DEPTH) -> Ordinal:
    """Parse literals like ``w^(w^2*3+1)*2+5``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        toks.append((m.lastindex, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    toks.append((0, "", len(text)))
    i = 0

    def peek():
        return toks[i][0]

    def take(kind):
        nonlocal i
        k, v, p = toks[i]
        if k != kind:
            raise OrdinalError(f"syntax error at {p}: expected {'d w ^ * + ( )'.split()[kind - 1]!r}")
        i += 1
        return v

    def expr(depth):
        if depth > max_depth:
            raise OrdinalError("ordinal literal nested too deeply")
        out = summand(depth)
        while peek() == 5:
            take(5)
            out = add(out, summand(depth))
        return out

    def summand(depth):
        if peek() == 1:
            return Ordinal.nat(int(take(1)))
        take(2)
        exp = ONE
        if peek() == 3:
            take(3)
            if peek() == 6:
                take(6)
                exp = expr(depth + 1)
                take(7)
            elif peek() == 1:
                exp = Ordinal.nat(int(take(1)))
            else:
                take(2)
                exp = OMEGA
        base = omega_pow(exp)
        if peek() == 4:
            take(4)
            base = mul(base, Ordinal.nat(int(take(1))))
        return base

    out = expr(0)
    if peek() != 0:
        raise OrdinalError(f"trailing input at {toks[i][2]}")
    return out
