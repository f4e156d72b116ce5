"""Universal enveloping superalgebra in PBW normal form.

Basis ids are ordered negative roots < Cartan (and central) < positive roots,
ascending ids inside each block.  A PBW monomial is stored as the
non-decreasing tuple of its letters, e.g. ``(3, 3, 7)`` for x_3^2 x_7.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exactnum import WPoly
from .liealg import StructureTable
from .rootsys import positivity

BLOCK_NAMES = ("f", "h", "e")


class RingMismatch(TypeError):
    pass


class UEA:
    """Straightening engine bound to one structure table."""

    def __init__(self, table: StructureTable, strategy: str = "leftmost"):
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown straightening strategy {strategy!r}")
        self.table = table
        self.strategy = strategy
        blocks = []
        for b in table.basis:
            if b.kind == "root":
                blocks.append(0 if positivity(table, b.index) == "negative" else 2)
            else:
                blocks.append(1)
        self.block = blocks
        order = sorted(range(table.dim), key=lambda i: (blocks[i], i))
        self.rank = [0] * table.dim
        for r, i in enumerate(order):
            self.rank[i] = r
        self.odd = [table.parity(i) for i in range(table.dim)]
        self._memo: dict = {}

    # straightening ----------------------------------------------------------
    def _find_defect(self, word):
        rank, odd = self.rank, self.odd
        positions = range(len(word) - 1)
        if self.strategy == "rightmost":
            positions = reversed(positions)
        for p in positions:
            a, b = word[p], word[p + 1]
            if rank[a] > rank[b] or (a == b and odd[a]):
                return p
        return None

    def normal_form(self, word) -> dict:
        """PBW expansion {monomial: Fraction} of a word of basis ids."""
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        p = self._find_defect(word)
        if p is None:
            result = {word: Fraction(1)}
        else:
            result = {}
            a, b = word[p], word[p + 1]
            head, tail = word[:p], word[p + 2:]
            if a == b:
                # x x = 1/2 [x, x] for odd x
                for l, c in self.table.bracket(a, a):
                    _accumulate(result, self.normal_form(head + (l,) + tail), c / 2)
            else:
                sign = -1 if self.odd[a] and self.odd[b] else 1
                _accumulate(result, self.normal_form(head + (b, a) + tail), Fraction(sign))
                for l, c in self.table.bracket(a, b):
                    _accumulate(result, self.normal_form(head + (l,) + tail), c)
        self._memo[word] = result
        return result

    # elements ---------------------------------------------------------------
    def one(self, ring=Fraction):
        return UEAElem(self, {(): _unit(ring)}, ring)

    def gen(self, i: int, coeff=None) -> "UEAElem":
        c = Fraction(1) if coeff is None else coeff
        return UEAElem(self, {(i,): c}, _ring_of(c))

    def word_parity(self, word) -> int:
        return sum(self.odd[i] for i in word) & 1

    def format_monomial(self, mono) -> str:
        if not mono:
            return "1"
        parts = []
        i = 0
        while i < len(mono):
            j = i
            while j < len(mono) and mono[j] == mono[i]:
                j += 1
            x = mono[i]
            s = f"{BLOCK_NAMES[self.block[x]]}[{x}]"
            if j - i > 1:
                s += f"^{j - i}"
            parts.append(s)
            i = j
        return " * ".join(parts)


def _accumulate(target: dict, terms: dict, scale):
    for m, c in terms.items():
        v = target.get(m, 0) + c * scale
        if v:
            target[m] = v
        else:
            target.pop(m, None)


def _ring_of(c):
    return WPoly if isinstance(c, WPoly) else Fraction


def _unit(ring, like=None):
    if ring is WPoly:
        if like is None:
            raise ValueError("a WPoly unit needs a variable list")
        return WPoly.const(like.vars, 1)
    return Fraction(1)


class UEAElem:
    __slots__ = ("uea", "terms", "ring")

    def __init__(self, uea: UEA, terms: dict, ring=Fraction):
        self.uea = uea
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}

    def _check(self, other: "UEAElem"):
        if other.uea.table is not self.uea.table:
            raise ValueError("elements of different enveloping algebras")
        if other.ring is not self.ring and other.terms and self.terms:
            raise RingMismatch(f"{self.ring.__name__} vs {other.ring.__name__}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return UEAElem(self.uea, out, self.ring if self.terms else other.ring)

    def __neg__(self):
        return UEAElem(self.uea, {m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "UEAElem":
        return UEAElem(self.uea, {m: v * c for m, v in self.terms.items()}, self.ring)

    def __mul__(self, other):
        if not isinstance(other, UEAElem):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        nf = self.uea.normal_form
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _accumulate(out, nf(m1 + m2), c1 * c2)
        ring = self.ring if self.ring is not Fraction else other.ring
        return UEAElem(self.uea, out, ring)

    def __rmul__(self, c):
        return self.scale(c)

    def parity_parts(self) -> dict:
        parts: dict = {0: {}, 1: {}}
        for m, c in self.terms.items():
            parts[self.uea.word_parity(m)][m] = c
        return {p: UEAElem(self.uea, t, self.ring) for p, t in parts.items() if t}

    def __eq__(self, other):
        if not isinstance(other, UEAElem):
            return NotImplemented
        return self.uea.table is other.uea.table and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        rank = self.uea.rank
        keyed = sorted(self.terms, key=lambda m: (len(m), [rank[i] for i in m]))
        return " + ".join(f"({self.terms[m]})*{self.uea.format_monomial(m)}" for m in keyed)


def uea_mul(u: UEAElem, v: UEAElem) -> UEAElem:
    return u * v


def uea_bracket(u: UEAElem, v: UEAElem) -> UEAElem:
    """Super-commutator, extended bilinearly over parity components."""
    out = UEAElem(u.uea, {}, u.ring)
    for pu, uu in u.parity_parts().items():
        for pv, vv in v.parity_parts().items():
            sign = -1 if pu and pv else 1
            term = uu * vv - (vv * uu).scale(sign)
            out = out + term
    return out


def random_word(uea: UEA, length: int, rng: random.Random) -> tuple:
    return tuple(rng.randrange(uea.table.dim) for _ in range(length))
