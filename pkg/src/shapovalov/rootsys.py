"""Weights, positivity, quasiroots and the weight pairing.

Weights of root vectors are taken on the full Cartan subalgebra: the value
on H is the coefficient of x itself in [H, x].  On the diagonalizable part
this is the usual weight; on the remaining Cartan elements it is the
diagonal part of a triangular action.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import conventions
from .exactnum import WeightVar, rat
from .liealg import BandOverflow, StructureTable, form_value, k16_cartan_order, mono_bracket
from .superpoly import popcount


@dataclass(frozen=True)
class GradedWeight:
    lead: int
    d: tuple[int, ...]

    def __add__(self, other):
        return GradedWeight(self.lead + other.lead, tuple(a + b for a, b in zip(self.d, other.d)))

    def __neg__(self):
        return GradedWeight(-self.lead, tuple(-a for a in self.d))

    def __str__(self):
        return f"({self.lead}; {', '.join(map(str, self.d))})"


@dataclass(frozen=True)
class FullWeight:
    """Coordinates on the Cartan basis, listed in :func:`cartan_basis` order."""

    coords: tuple[Fraction, ...]

    def __add__(self, other):
        return FullWeight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return FullWeight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FullWeight(tuple(-a for a in self.coords))

    def scale(self, c) -> "FullWeight":
        c = rat(c)
        return FullWeight(tuple(c * a for a in self.coords))

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    @classmethod
    def zero(cls, n: int) -> "FullWeight":
        return cls((Fraction(0),) * n)


@dataclass(frozen=True)
class Quasiroot:
    multiplicities: tuple[tuple[int, int], ...]  # (root id, n), sorted, n >= 1
    weight: FullWeight
    graded: GradedWeight

    @property
    def height_terms(self) -> int:
        return sum(n for _, n in self.multiplicities)


# Cartan coordinates ---------------------------------------------------------

def _subset_of_cartan_mask(mask: int, k: int) -> int:
    return mask & ((1 << k) - 1)


def cartan_basis(table: StructureTable) -> list[int]:
    """Cartan ids in coordinate order: subsets J by (|J|, J) for po/sh, H_1..H_8 for k16."""
    if table.family == "k16":
        return k16_cartan_order(table)
    k = table.k
    ids = table.cartan_ids()
    return sorted(
        ids,
        key=lambda i: (
            popcount(_subset_of_cartan_mask(table.basis[i].mask, k)),
            _subset_of_cartan_mask(table.basis[i].mask, k),
        ),
    )


def weight_variables(table: StructureTable, letter: str = "a") -> tuple[WeightVar, ...]:
    if table.family == "k16":
        return tuple(WeightVar("k16", i, letter) for i in range(1, 9))
    return tuple(
        WeightVar(table.family, _subset_of_cartan_mask(table.basis[i].mask, table.k), letter)
        for i in cartan_basis(table)
    )


def subset_coordinate(table: StructureTable, J: int) -> int:
    """Position of H_J (J a bitmask over {1..k}) in the coordinate order."""
    for pos, i in enumerate(cartan_basis(table)):
        if _subset_of_cartan_mask(table.basis[i].mask, table.k) == J:
            return pos
    raise KeyError(f"H_J for J={J:b} is not in the Cartan subalgebra of {table.family}")


# weights -------------------------------------------------------------------

def weight_of(table: StructureTable, i: int) -> GradedWeight:
    x = table.basis[i]
    k = table.k
    alpha = [x.mask >> j & 1 for j in range(k)]
    beta = [x.mask >> (k + j) & 1 for j in range(k)]
    d = tuple(a - b for a, b in zip(alpha, beta))
    deg = sum(alpha) + sum(beta)
    if table.family == "k16":
        return GradedWeight(2 * (x.tdeg - 1) + deg, d)
    return GradedWeight(deg - 2, d)


def full_weight_of(table: StructureTable, i: int) -> FullWeight:
    if table.basis[i].kind != "root":
        raise ValueError(f"{table.basis[i].label} is not a root vector")
    coords = []
    for h in cartan_basis(table):
        coords.append(dict(table.bracket(h, i)).get(i, Fraction(0)))
    return FullWeight(tuple(coords))


def _positivity_key(table: StructureTable, i: int) -> tuple:
    w = weight_of(table, i)
    if table.family == "k16":
        return (w.lead,) + tuple(conventions.K16_D_SIGN * a for a in w.d)
    return w.d


def positivity(table: StructureTable, i: int) -> str:
    if table.basis[i].kind != "root":
        raise ValueError(f"{table.basis[i].label} is not a root vector")
    key = _positivity_key(table, i)
    for a in key:
        if a > 0:
            return "positive"
        if a < 0:
            return "negative"
    raise ValueError(f"root vector {table.basis[i].label} has zero weight")


def positive_ids(table: StructureTable) -> list[int]:
    return [i for i in table.root_ids() if positivity(table, i) == "positive"]


def negative_ids(table: StructureTable) -> list[int]:
    return [i for i in table.root_ids() if positivity(table, i) == "negative"]


def height_base(table: StructureTable) -> int:
    return 4 * table.k + 1


def height(table: StructureTable, w: GradedWeight) -> int:
    """Linear height functional, strictly positive on positive roots."""
    n = height_base(table)
    k = table.k
    phi = sum(n ** (k - 1 - j) * a for j, a in enumerate(w.d))
    if table.family == "k16":
        phi = conventions.K16_D_SIGN * phi + w.lead * n**k
    return phi


def root_height(table: StructureTable, i: int) -> int:
    return height(table, weight_of(table, i))


# quasiroots -------------------------------------------------------------------

def enumerate_quasiroots(table: StructureTable, bound: int) -> list[Quasiroot]:
    """All nonzero quasiroots of height <= bound (odd roots used at most once)."""
    if bound < 1:
        raise ValueError("height bound must be >= 1")
    roots = sorted(
        (i for i in positive_ids(table) if root_height(table, i) <= bound),
        key=lambda i: (root_height(table, i), i),
    )
    heights = [root_height(table, i) for i in roots]
    fws = [full_weight_of(table, i) for i in roots]
    gws = [weight_of(table, i) for i in roots]
    ncart = len(cartan_basis(table))
    out: list[Quasiroot] = []

    def rec(pos, budget, chosen):
        if pos == len(roots):
            if chosen:
                fw = FullWeight.zero(ncart)
                gw = GradedWeight(0, (0,) * table.k)
                for p, n in chosen:
                    fw = fw + fws[p].scale(n)
                    for _ in range(n):
                        gw = gw + gws[p]
                mult = tuple((roots[p], n) for p, n in chosen)
                out.append(Quasiroot(mult, fw, gw))
            return
        i = roots[pos]
        cap = budget // heights[pos]
        if table.parity(i):
            cap = min(cap, 1)
        for n in range(cap + 1):
            rec(pos + 1, budget - n * heights[pos], chosen + ([(pos, n)] if n else []))

    rec(0, bound, [])
    return out


# pairing ----------------------------------------------------------------------

def cartan_gram(table: StructureTable) -> list[list[Fraction]]:
    ids = cartan_basis(table)
    return [[form_value(table, i, j) for j in ids] for i in ids]


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("Cartan Gram matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


_INV_CACHE: dict = {}


def inverse_cartan_gram(table: StructureTable) -> list[list[Fraction]]:
    key = (table.family, table.k)
    if key not in _INV_CACHE:
        _INV_CACHE[key] = _invert(cartan_gram(table))
    return _INV_CACHE[key]


def weight_pairing(table: StructureTable, x, y):
    """(x, y) = x G^{-1} y; entries may be rationals or WPoly."""
    ginv = inverse_cartan_gram(table)
    total = 0
    for a, row in zip(x, ginv):
        if not _nonzero(a):
            continue
        for g, b in zip(row, y):
            if g and _nonzero(b):
                total = total + a * g * b
    return total


def _nonzero(v) -> bool:
    return bool(v) if not isinstance(v, Fraction) else v != 0


def weight_of_element(table: StructureTable, element: dict) -> FullWeight:
    """The functional h -> B(element, h) for a Cartan combination {id: coeff}."""
    coords = []
    for h in cartan_basis(table):
        coords.append(sum((c * form_value(table, i, h) for i, c in element.items()), Fraction(0)))
    return FullWeight(tuple(coords))


def rho_element(table: StructureTable) -> dict:
    """The Cartan element called rho in the irreducibility criteria."""
    if table.family == "k16":
        H = k16_cartan_order(table)
        return {H[4]: Fraction(2), H[5]: Fraction(1), H[7]: Fraction(-2)}
    k = table.k
    J = ((1 << k) - 1) & ~(1 << (k - 1))
    h = cartan_basis(table)[subset_coordinate(table, J)]
    return {h: Fraction(-2) ** (k - 2)}


def two_rho_element(table: StructureTable) -> dict:
    return {i: 2 * c for i, c in rho_element(table).items()}


def element_weight_rho(table: StructureTable) -> FullWeight:
    """The weight h -> B(rho_element, h), taken literally."""
    return weight_of_element(table, rho_element(table))


def rho(table: StructureTable) -> FullWeight:
    """rho normalized so that C_2(a) = C_2(a - beta) iff 2(a + rho, beta) = (beta, beta).

    For po/sh this is half the graded sum of positive roots, which equals
    minus the literal weight of rho_element.  For k16 it is twice that weight:
    the Casimir there carries the roots with coefficient 1, not 2.
    """
    lit = element_weight_rho(table)
    return lit.scale(2) if table.family == "k16" else -lit


# structural invariants -----------------------------------------------------------

def _raw_is_positive(table: StructureTable, tdeg: int, mask: int) -> bool:
    """Positivity of a monomial outside the band, read off its weight."""
    k = table.k
    alpha = [mask >> j & 1 for j in range(k)]
    beta = [mask >> (k + j) & 1 for j in range(k)]
    lead = 2 * (tdeg - 1) + sum(alpha) + sum(beta)
    key = (lead,) + tuple(conventions.K16_D_SIGN * (a - b) for a, b in zip(alpha, beta))
    return next((a > 0 for a in key if a), False)


def triangularity_failures(table: StructureTable) -> list[tuple[int, int]]:
    """Pairs (x, y) with x positive or Cartan, y positive, whose bracket leaves n+.

    Brackets that leave a truncation band are classified monomial by monomial.
    """
    pos = set(positive_ids(table))
    bad = []
    for x in itertools.chain(table.cartan_ids(), sorted(pos)):
        for y in sorted(pos):
            try:
                ok = all(l in pos for l, _ in table.bracket(x, y))
            except BandOverflow:
                bx, by = table.basis[x], table.basis[y]
                raw = mono_bracket("kb", table.k, bx.tdeg, bx.mask, by.tdeg, by.mask)
                ok = all(
                    (a, m) in table._index and table._index[(a, m)] in pos
                    if abs(a) <= table.algebra.band
                    else _raw_is_positive(table, a, m)
                    for (a, m), c in raw.items()
                    if c
                )
            if not ok:
                bad.append((x, y))
    return bad


def root_dump(table: StructureTable) -> dict:
    labels = [table.basis[i].label for i in cartan_basis(table)]
    roots = []
    for i in table.root_ids():
        fw = full_weight_of(table, i)
        w = weight_of(table, i)
        roots.append(
            {
                "id": i,
                "gen": table.basis[i].label,
                "weight": [w.lead, *w.d],
                "full_weight": {lab: str(c) for lab, c in zip(labels, fw.coords)},
                "parity": table.parity(i),
                "sign": positivity(table, i),
            }
        )
    r = rho(table)
    return {
        "family": table.family,
        "k": table.k,
        "cartan": labels,
        "roots": roots,
        "rho": {lab: str(c) for lab, c in zip(labels, r.coords)},
    }
