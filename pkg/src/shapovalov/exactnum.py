"""Exact arithmetic: rationals, weight polynomials and fraction-free determinants.

Rationals are :class:`fractions.Fraction`.  Polynomials in the highest-weight
coordinates are :class:`WPoly`, a sparse map from exponent vectors over a fixed
ordered list of :class:`WeightVar` to rational coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

FAMILIES = ("po", "sh", "k16")


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_str(x: Fraction) -> str:
    return str(Fraction(x))


class ArithmeticInconsistency(ArithmeticError):
    """An exact division that should have been exact left a remainder."""


@dataclass(frozen=True, order=True)
class WeightVar:
    """Coordinate of a weight on one Cartan basis element.

    For po/sh the index is a bitmask over {1..k} (bit i-1 set iff i in J);
    for k16 it is the Cartan label 1..8.
    """

    family: str
    index: int
    letter: str = "a"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "k16" and not 1 <= self.index <= 8:
            raise ValueError("k16 weight index must be in 1..8")
        if self.family != "k16" and self.index < 0:
            raise ValueError("subset mask must be non-negative")

    @property
    def name(self) -> str:
        if self.family == "k16":
            return f"{self.letter}{self.index}"
        members = [str(i + 1) for i in range(self.index.bit_length()) if self.index >> i & 1]
        return self.letter + "{" + ",".join(members) + "}"

    def __str__(self):
        return self.name


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class WPoly:
    """Multivariate polynomial with rational coefficients.

    Instances are treated as immutable.  Arithmetic with ``int`` and
    ``Fraction`` operands is supported; two polynomials must share the same
    variable list.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[WeightVar], terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError("exponent vector does not match variable list")
                if c:
                    clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, vars, c) -> "WPoly":
        return cls(vars, {(0,) * len(vars): rat(c)})

    @classmethod
    def var(cls, vars, which) -> "WPoly":
        vars = tuple(vars)
        i = which if isinstance(which, int) else vars.index(which)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    @classmethod
    def _raw(cls, vars, terms) -> "WPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def evaluate(self, values) -> Fraction:
        """Substitute rational values, given as a sequence or a {WeightVar: value} map."""
        if isinstance(values, dict):
            values = [rat(values[v]) for v in self.vars]
        else:
            values = [rat(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for v, k in zip(values, e):
                if k:
                    m *= v**k
            total += m
        return total

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "WPoly":
        if isinstance(other, WPoly):
            if other.vars != self.vars:
                raise ValueError("variable-list mismatch between polynomials")
            return other
        if isinstance(other, (int, Fraction)):
            return WPoly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return WPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return WPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return WPoly._raw(self.vars, {})
            return WPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return WPoly._raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = WPoly.const(self.vars, 1)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return self.exact_div(other)

    def exact_div(self, d: "WPoly") -> "WPoly":
        q = trial_divide(self, d)
        if q is None:
            raise ArithmeticInconsistency(f"({self}) is not divisible by ({d})")
        return q

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * len(self.vars): Fraction(other)}
        if isinstance(other, WPoly):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def monic(self) -> "WPoly":
        """Scale so that the grlex-leading coefficient is 1."""
        if not self.terms:
            return self
        return self * (1 / self.leading()[1])

    # printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for v, k in zip(self.vars, e):
                if k == 1:
                    factors.append(v.name)
                elif k > 1:
                    factors.append(f"{v.name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"WPoly({self})"


def wpoly_arith(p: WPoly, q: WPoly, op: str) -> WPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def trial_divide(p: WPoly, d: WPoly) -> WPoly | None:
    """Return q with p == q*d, or None when d does not divide p."""
    if d.vars != p.vars:
        raise ValueError("variable-list mismatch between polynomials")
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead_e, lead_c = d.leading()
    rem = dict(p.terms)
    quot: dict = {}
    while rem:
        e = max(rem, key=_grlex_key)
        c = rem[e]
        shift = tuple(a - b for a, b in zip(e, lead_e))
        if any(s < 0 for s in shift):
            return None
        f = c / lead_c
        quot[shift] = f
        for de, dc in d.terms.items():
            t = tuple(a + b for a, b in zip(shift, de))
            s = rem.get(t, 0) - f * dc
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return WPoly._raw(p.vars, quot)


def _is_zero(x) -> bool:
    return (not x) if isinstance(x, WPoly) else x == 0


def _exact_div(a, b):
    if isinstance(a, WPoly):
        if isinstance(b, WPoly):
            return a.exact_div(b)
        return a / b
    if isinstance(b, WPoly):
        if not b.is_constant():
            raise ArithmeticInconsistency("rational divided by a non-constant polynomial")
        b = b.constant_value()
    return Fraction(a) / b


def bareiss_det(m: Sequence[Sequence]):
    """Determinant by single-step Bareiss elimination.

    Entries may be WPoly or rationals.  Every division performed is exact;
    a remainder raises :class:`ArithmeticInconsistency`.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1)
    a = [list(row) for row in m]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for r in range(k + 1, n):
                if not _is_zero(a[r][k]):
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return _zero_like(a[0][0])
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = _exact_div(num, prev)
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def _zero_like(x):
    if isinstance(x, WPoly):
        return WPoly(x.vars)
    return Fraction(0)


def weight_vars(family: str, indices: Iterable[int]) -> tuple[WeightVar, ...]:
    return tuple(WeightVar(family, i) for i in indices)
