"""Grassmann-Laurent polynomials: Q[t, 1/t] (x) Lambda(xi_1..xi_k, eta_1..eta_k).

Odd generators are numbered 0..2k-1 in the canonical order
xi_1 < ... < xi_k < eta_1 < ... < eta_k; a monomial is a pair
``(tdeg, mask)`` and always stands for t^tdeg times the odd generators of
``mask`` written in canonical order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from . import conventions
from .exactnum import rat


@lru_cache(maxsize=None)
def merge_sign(m1: int, m2: int) -> int:
    """Sign of theta^m1 * theta^m2 re-sorted into canonical order (0 if they overlap)."""
    if m1 & m2:
        return 0
    swaps = 0
    rest = m2
    while rest:
        low = rest & -rest
        swaps += bin(m1 & ~((low << 1) - 1)).count("1")
        rest ^= low
    return -1 if swaps & 1 else 1


def popcount(m: int) -> int:
    return bin(m).count("1")


def xi(i: int) -> int:
    """Generator index of xi_i (1-based i)."""
    return i - 1


def eta(i: int, k: int) -> int:
    """Generator index of eta_i (1-based i)."""
    return k + i - 1


def gen_name(g: int, k: int) -> str:
    return f"x{g + 1}" if g < k else f"y{g - k + 1}"


class SPoly:
    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms=None):
        if k < 0:
            raise ValueError("k must be non-negative")
        self.k = k
        top = 1 << (2 * k)
        clean = {}
        if terms:
            for (a, m), c in terms.items():
                if not 0 <= m < top:
                    raise ValueError(f"mask {m:b} does not fit {2 * k} odd generators")
                if c:
                    clean[(int(a), m)] = rat(c)
        self.terms = clean

    @classmethod
    def _raw(cls, k, terms):
        p = object.__new__(cls)
        p.k = k
        p.terms = terms
        return p

    @classmethod
    def mono(cls, k: int, mask: int = 0, tdeg: int = 0, coeff=1) -> "SPoly":
        return cls(k, {(tdeg, mask): coeff})

    @classmethod
    def const(cls, k: int, c=1) -> "SPoly":
        return cls(k, {(0, 0): c})

    @classmethod
    def gen(cls, k: int, g: int) -> "SPoly":
        if not 0 <= g < 2 * k:
            raise IndexError(f"odd generator {g} out of range for k={k}")
        return cls._raw(k, {(0, 1 << g): Fraction(1)})

    @classmethod
    def t(cls, k: int, n: int = 1) -> "SPoly":
        return cls._raw(k, {(n, 0): Fraction(1)})

    @property
    def top_mask(self) -> int:
        return (1 << (2 * self.k)) - 1

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def parities(self) -> set[int]:
        return {popcount(m) & 1 for (_, m) in self.terms}

    def parity(self) -> int:
        """Parity of a homogeneous polynomial (0 for zero)."""
        ps = self.parities()
        if len(ps) > 1:
            raise ValueError("polynomial is not parity-homogeneous")
        return ps.pop() if ps else 0

    def homogeneous_parts(self) -> list["SPoly"]:
        parts = {0: {}, 1: {}}
        for (a, m), c in self.terms.items():
            parts[popcount(m) & 1][(a, m)] = c
        return [SPoly._raw(self.k, parts[p]) for p in (0, 1) if parts[p]]

    def _check(self, other: "SPoly"):
        if other.k != self.k:
            raise ValueError(f"k mismatch: {self.k} vs {other.k}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPoly.const(self.k, other)
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return SPoly._raw(self.k, out)

    __radd__ = __add__

    def __neg__(self):
        return SPoly._raw(self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPoly.const(self.k, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SPoly":
        c = rat(c)
        if not c:
            return SPoly._raw(self.k, {})
        return SPoly._raw(self.k, {key: v * c for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return smul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPoly.const(self.k, other)
        if not isinstance(other, SPoly):
            return NotImplemented
        return self.k == other.k and self.terms == other.terms

    def __hash__(self):
        return hash((self.k, frozenset(self.terms.items())))

    def __str__(self):
        return format_spoly(self)

    def __repr__(self):
        return f"SPoly({self.k}, {self})"


def smul(f: SPoly, g: SPoly) -> SPoly:
    f._check(g)
    out: dict = {}
    for (a1, m1), c1 in f.terms.items():
        for (a2, m2), c2 in g.terms.items():
            s = merge_sign(m1, m2)
            if not s:
                continue
            key = (a1 + a2, m1 | m2)
            v = out.get(key, 0) + s * c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return SPoly._raw(f.k, out)


def left_partial(i: int, f: SPoly) -> SPoly:
    """Left derivative with respect to the odd generator with index i."""
    if not 0 <= i < 2 * f.k:
        raise IndexError(f"odd generator {i} out of range for k={f.k}")
    bit = 1 << i
    below = bit - 1
    out = {}
    for (a, m), c in f.terms.items():
        if m & bit:
            s = -1 if popcount(m & below) & 1 else 1
            out[(a, m ^ bit)] = s * c
    return SPoly._raw(f.k, out)


def t_partial(f: SPoly) -> SPoly:
    return SPoly._raw(f.k, {(a - 1, m): a * c for (a, m), c in f.terms.items() if a})


def euler_E(f: SPoly) -> SPoly:
    return SPoly._raw(
        f.k, {(a, m): popcount(m) * c for (a, m), c in f.terms.items() if m}
    )


def berezin(f: SPoly) -> Fraction:
    """CONV_SIGN times the coefficient of xi_1..xi_k eta_1..eta_k."""
    if any(a for (a, _) in f.terms):
        raise ValueError("Berezin integral needs t-independent input")
    return conventions.CONV_SIGN * f.terms.get((0, f.top_mask), Fraction(0))


def residue(f: SPoly) -> Fraction:
    """CONV_SIGN times the coefficient of t^-1 xi_1..xi_k eta_1..eta_k."""
    return conventions.CONV_SIGN * f.terms.get((-1, f.top_mask), Fraction(0))


# text form ------------------------------------------------------------------

def format_mono(k: int, tdeg: int, mask: int) -> str:
    factors = []
    if tdeg == 1:
        factors.append("t")
    elif tdeg:
        factors.append(f"t^{tdeg}")
    factors += [gen_name(g, k) for g in range(2 * k) if mask >> g & 1]
    return "*".join(factors) if factors else "1"


def _mono_order(key):
    a, m = key
    return (popcount(m), a, [-(m >> g & 1) for g in range(m.bit_length() + 1)])


def format_spoly(f: SPoly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for key in sorted(f.terms, key=_mono_order):
        c = f.terms[key]
        body = format_mono(f.k, *key)
        mag = abs(c)
        if body == "1":
            body = str(mag)
        elif mag != 1:
            body = f"{mag}*{body}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_FACTOR = re.compile(r"^(?:t(?:\^(-?\d+))?|([xy])(\d+)|(\d+(?:/\d+)?))$")


def parse_spoly(text: str, k: int) -> SPoly:
    """Parse the canonical text form; factors may appear in any order."""
    s = text.replace(" ", "").replace("^-", "^~")
    if not s:
        raise ValueError("empty polynomial text")
    terms = re.findall(r"([+-]?)([^+-]+)", s)
    if "".join(sign + body for sign, body in terms) != s:
        raise ValueError(f"cannot parse {text!r}")
    result = SPoly(k)
    for sign, body in terms:
        term = SPoly.const(k, -1 if sign == "-" else 1)
        for factor in body.replace("^~", "^-").split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            texp, letter, idx, num = m.groups()
            if num is not None:
                term = term.scale(Fraction(num))
            elif letter is not None:
                i = int(idx)
                if not 1 <= i <= k:
                    raise ValueError(f"generator {factor} out of range for k={k}")
                term = term * SPoly.gen(k, xi(i) if letter == "x" else eta(i, k))
            else:
                term = term * SPoly.t(k, int(texp) if texp else 1)
        result = result + term
    return result
