"""Weight values: exact integers, exact rationals, or opaque symbolic tokens.

No floating point ever enters a weight; multiset equality stays exact.
"""

from __future__ import annotations

from fractions import Fraction


class Symbol:
    """An uninterpreted weight token."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Symbol) and self.name == other.name

    def __hash__(self):
        return hash(("Symbol", self.name))

    def __repr__(self):
        return "Symbol(%r)" % self.name


def is_weight(v) -> bool:
    return isinstance(v, (int, Fraction, Symbol)) and not isinstance(v, bool)


def parse_weight(token: str):
    """Decimal integer, rational p/q, or bare symbolic token."""
    t = token.strip()
    if not t:
        raise ValueError("empty weight token")
    neg = t[1:] if t.startswith("-") else t
    if neg.isdigit():
        return int(t)
    if "/" in t:
        num, _, den = t.partition("/")
        n = num[1:] if num.startswith("-") else num
        if n.isdigit() and den.isdigit() and int(den) != 0:
            q = Fraction(int(num), int(den))
            return int(q) if q.denominator == 1 else q
    return Symbol(t)


def format_weight(w) -> str:
    if isinstance(w, bool):
        raise TypeError("bool is not a weight")
    if isinstance(w, int):
        return str(w)
    if isinstance(w, Fraction):
        if w.denominator == 1:
            return str(w.numerator)
        return "%d/%d" % (w.numerator, w.denominator)
    if isinstance(w, Symbol):
        return w.name
    raise TypeError("not a weight: %r" % (w,))


def weight_sort_key(w):
    """Total order over mixed weights, for canonical output only."""
    if isinstance(w, Symbol):
        return (1, w.name, 0)
    return (0, "", w)
