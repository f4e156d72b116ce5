"""Brackets of generating functions and the algebras built from them.

po(0|2k) and sh(0|2k) use the Poisson bracket of Grassmann polynomials,
k^L(1|6) the contact bracket of Laurent-Grassmann polynomials.  Algebras are
packaged as a :class:`StructureTable` whose structure constants are filled
lazily and cached.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import conventions
from .exactnum import rat
from .superpoly import (
    SPoly,
    berezin,
    residue,
    euler_E,
    format_mono,
    left_partial,
    merge_sign,
    parse_spoly,
    popcount,
    smul,
    t_partial,
)

FAMILIES = ("po", "sh", "k16", "loop-po", "loop-sh")
TABLE_FORMAT_VERSION = 1

# Cartan basis of k^L(1|6); monomial orders are deliberate and fix the signs.
K16_CARTAN = (
    "x1*y1",
    "x2*y2",
    "x3*y3",
    "t",
    "t^-1*x2*x3*y3*y2",
    "t^-1*x1*x3*y3*y1",
    "t^-1*x1*x2*y2*y1",
    "t^-2*x1*x2*x3*y3*y2*y1",
)


class BandOverflow(ArithmeticError):
    """A bracket left the truncation band; a larger band is needed."""


# brackets of generating functions ------------------------------------------

def poisson_bracket(f: SPoly, g: SPoly) -> SPoly:
    k = f.k
    out = SPoly(k)
    for part in f.homogeneous_parts():
        acc = SPoly(k)
        for j in range(k):
            x, y = j, k + j
            acc = acc + smul(left_partial(x, part), left_partial(y, g))
            acc = acc + smul(left_partial(y, part), left_partial(x, g))
        out = out + (acc if part.parity() else -acc)
    return out


def _two_minus_E(f: SPoly) -> SPoly:
    return f.scale(2) - euler_E(f)


def contact_bracket(f: SPoly, g: SPoly) -> SPoly:
    return (
        smul(_two_minus_E(f), t_partial(g))
        - smul(t_partial(f), _two_minus_E(g))
        - poisson_bracket(f, g)
    )


def hamiltonian_field(f: SPoly, g: SPoly) -> SPoly:
    """H_f applied to g."""
    return poisson_bracket(f, g)


def apply_field(f: SPoly, g: SPoly) -> SPoly:
    """The contact vector field K_f applied to the function g."""
    return (
        smul(_two_minus_E(f), t_partial(g))
        - hamiltonian_field(f, g)
        + smul(t_partial(f), euler_E(g))
    )


def supertrace(f: SPoly) -> Fraction:
    return berezin(f)


@lru_cache(maxsize=None)
def _mono_pb(k: int, m: int, n: int) -> tuple:
    """Poisson bracket of canonical monomials theta^m, theta^n as ((mask, coeff), ...)."""
    out: dict = {}
    lead = 1 if popcount(m) & 1 else -1
    for j in range(k):
        for a, b in ((j, k + j), (k + j, j)):
            ba, bb = 1 << a, 1 << b
            if not (m & ba and n & bb):
                continue
            m2, n2 = m ^ ba, n ^ bb
            s = merge_sign(m2, n2)
            if not s:
                continue
            s *= -1 if popcount(m & (ba - 1)) & 1 else 1
            s *= -1 if popcount(n & (bb - 1)) & 1 else 1
            key = m2 | n2
            out[key] = out.get(key, 0) + lead * s
    return tuple((key, c) for key, c in sorted(out.items()) if c)


def mono_bracket(kind: str, k: int, a: int, m: int, b: int, n: int) -> dict:
    """Bracket of t^a theta^m and t^b theta^n; returns {(tdeg, mask): int}.

    ``kind`` is "pb" (Poisson, t treated as a loop parameter) or "kb" (contact).
    """
    out: dict = {}
    if kind == "kb":
        for key, c in _mono_pb(k, m, n):
            out[(a + b, key)] = -c
        s = merge_sign(m, n)
        if s:
            c = (2 - popcount(m)) * b - a * (2 - popcount(n))
            if c:
                key = (a + b - 1, m | n)
                v = out.get(key, 0) + s * c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out
    for key, c in _mono_pb(k, m, n):
        out[(a + b, key)] = c
    return out


# algebras ------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraId:
    family: str
    k: int
    band: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.family == "k16" and self.k != 3:
            raise ValueError("k^L(1|6) has k = 3")
        needs_band = self.family in ("k16", "loop-po", "loop-sh")
        if needs_band and (self.band is None or self.band < 1):
            raise ValueError(f"{self.family} needs a band T >= 1")
        if not needs_band and self.band is not None:
            raise ValueError(f"{self.family} takes no band")

    @property
    def base_family(self) -> str:
        return self.family.removeprefix("loop-")

    def to_json(self) -> dict:
        return {"family": self.family, "k": self.k, "band": self.band}


@dataclass(frozen=True)
class BasisElement:
    index: int
    tdeg: int
    mask: int
    coeff: int  # gen = coeff * t^tdeg theta^mask, coeff = +-1
    parity: int
    kind: str  # "cartan", "root" or "central"
    k: int

    @property
    def gen(self) -> SPoly:
        if self.kind == "central":
            return SPoly(self.k)
        return SPoly.mono(self.k, self.mask, self.tdeg, self.coeff)

    @property
    def label(self) -> str:
        if self.kind == "central":
            return "z"
        body = format_mono(self.k, self.tdeg, self.mask)
        return ("-" if self.coeff < 0 else "") + body

    @property
    def degree(self) -> int:
        return popcount(self.mask)


@dataclass
class StructureTable:
    algebra: AlgebraId
    basis: list[BasisElement]
    _index: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)
    _preset: bool = field(default=False, repr=False)

    def __post_init__(self):
        self._index = {(b.tdeg, b.mask): b.index for b in self.basis if b.kind != "central"}

    @property
    def k(self) -> int:
        return self.algebra.k

    @property
    def family(self) -> str:
        return self.algebra.family

    @property
    def dim(self) -> int:
        return len(self.basis)

    def parity(self, i: int) -> int:
        return self.basis[i].parity

    def index_of(self, tdeg: int, mask: int) -> int:
        return self._index[(tdeg, mask)]

    def find(self, text: str) -> int:
        """Index of the basis element proportional to the monomial in ``text``."""
        f = parse_spoly(text, self.k)
        if len(f.terms) != 1:
            raise ValueError("expected a single monomial")
        ((key, _),) = f.terms.items()
        return self._index[key]

    @property
    def central_index(self) -> int | None:
        for b in self.basis:
            if b.kind == "central":
                return b.index
        return None

    def cartan_ids(self) -> list[int]:
        return [b.index for b in self.basis if b.kind == "cartan"]

    def root_ids(self) -> list[int]:
        return [b.index for b in self.basis if b.kind == "root"]

    def bracket(self, i: int, j: int) -> tuple:
        """[x_i, x_j] as a tuple of (index, Fraction); raises BandOverflow."""
        key = (i, j)
        hit = self._cache.get(key)
        if hit is None:
            if self._preset:
                hit = ()
            else:
                hit = self._compute(i, j)
            self._cache[key] = hit
        if hit is _OVERFLOW:
            raise BandOverflow(
                f"[{self.basis[i].label}, {self.basis[j].label}] leaves band {self.algebra.band}"
            )
        return hit

    def is_complete(self, i: int, j: int) -> bool:
        try:
            self.bracket(i, j)
        except BandOverflow:
            return False
        return True

    def _compute(self, i: int, j: int):
        x, y = self.basis[i], self.basis[j]
        fam = self.algebra.family
        if x.kind == "central" or y.kind == "central":
            return ()
        kind = "kb" if fam == "k16" else "pb"
        raw = mono_bracket(kind, self.k, x.tdeg, x.mask, y.tdeg, y.mask)
        out: dict = {}
        scale = x.coeff * y.coeff
        drop_center = fam in ("sh", "loop-sh")
        for (a, m), c in raw.items():
            if drop_center and m == 0:
                continue
            if (a, m) not in self._index:
                if self.algebra.band is not None and abs(a) > self.algebra.band:
                    return _OVERFLOW
                raise AssertionError(
                    f"bracket of {x.label} and {y.label} produced {format_mono(self.k, a, m)}"
                )
            l = self._index[(a, m)]
            out[l] = out.get(l, 0) + Fraction(scale * c * self.basis[l].coeff)
        if fam.startswith("loop-"):
            c = loop_cocycle(x.gen, y.gen)
            if c:
                out[self.central_index] = c
        return tuple((l, c) for l, c in sorted(out.items()) if c)

    def bracket_elements(self, u: dict, v: dict) -> dict:
        """Bilinear bracket of two combinations {index: coeff}."""
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for l, c in self.bracket(i, j):
                    out[l] = out.get(l, 0) + a * b * c
        return {l: c for l, c in out.items() if c}

    def all_brackets(self) -> dict:
        """Every computable nonzero bracket (i <= j); overflowing pairs are listed separately."""
        entries, incomplete = {}, []
        for i in range(self.dim):
            for j in range(i, self.dim):
                try:
                    br = self.bracket(i, j)
                except BandOverflow:
                    incomplete.append((i, j))
                    continue
                if br:
                    entries[(i, j)] = br
        return {"entries": entries, "incomplete": incomplete}

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        data = self.all_brackets()
        return {
            "version": TABLE_FORMAT_VERSION,
            "algebra": self.algebra.to_json(),
            "basis": [
                {"id": b.index, "gen": b.label, "parity": b.parity, "kind": b.kind}
                for b in self.basis
            ],
            "brackets": [
                [i, j, [[l, str(c)] for l, c in br]] for (i, j), br in sorted(data["entries"].items())
            ],
            "incomplete": [list(p) for p in data["incomplete"]],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, doc: dict) -> "StructureTable":
        if doc.get("version") != TABLE_FORMAT_VERSION:
            raise ValueError(f"unsupported table version {doc.get('version')!r}")
        alg = AlgebraId(**doc["algebra"])
        basis = []
        for entry in doc["basis"]:
            if entry["kind"] == "central":
                basis.append(BasisElement(entry["id"], 0, 0, 1, 0, "central", alg.k))
                continue
            text = entry["gen"]
            f = parse_spoly(text.lstrip("-"), alg.k)
            ((key, c),) = f.terms.items()
            coeff = -int(c) if text.startswith("-") else int(c)
            basis.append(
                BasisElement(entry["id"], key[0], key[1], coeff, entry["parity"], entry["kind"], alg.k)
            )
        table = cls(alg, basis)
        for i in range(table.dim):
            for j in range(table.dim):
                table._cache[(i, j)] = ()
        for i, j, terms in doc["brackets"]:
            br = tuple((l, Fraction(c)) for l, c in terms)
            table._cache[(i, j)] = br
            sign = -1 if table.parity(i) * table.parity(j) == 0 else 1
            table._cache[(j, i)] = tuple((l, sign * c) for l, c in br)
        for i, j in doc.get("incomplete", []):
            table._cache[(i, j)] = _OVERFLOW
            table._cache[(j, i)] = _OVERFLOW
        table._preset = True
        return table


_OVERFLOW = object()


def _masks_by_degree(k: int) -> list[int]:
    return sorted(range(1 << (2 * k)), key=lambda m: (popcount(m), m))


def _is_cartan_mask(m: int, k: int) -> bool:
    lo, hi = m & ((1 << k) - 1), m >> k
    return lo == hi


def build_algebra(alg: AlgebraId) -> StructureTable:
    k, fam = alg.k, alg.family
    basis: list[BasisElement] = []
    top = (1 << (2 * k)) - 1

    def add(tdeg, mask, coeff, kind):
        basis.append(BasisElement(len(basis), tdeg, mask, coeff, popcount(mask) & 1, kind, k))

    if fam in ("po", "sh"):
        for m in _masks_by_degree(k):
            if fam == "sh" and m in (0, top):
                continue
            add(0, m, 1, "cartan" if _is_cartan_mask(m, k) else "root")
    elif fam == "k16":
        cartan = {}
        for text in K16_CARTAN:
            ((key, c),) = parse_spoly(text, k).terms.items()
            cartan[key] = int(c)
        for a in range(-alg.band, alg.band + 1):
            for m in _masks_by_degree(k):
                if (a, m) in cartan:
                    add(a, m, cartan[(a, m)], "cartan")
                else:
                    add(a, m, 1, "root")
    else:
        for a in range(-alg.band, alg.band + 1):
            for m in _masks_by_degree(k):
                if fam == "loop-sh" and m in (0, top):
                    continue
                add(a, m, 1, "root")
        basis.append(BasisElement(len(basis), 0, 0, 1, 0, "central", k))
    return StructureTable(alg, basis)


def k16_cartan_order(table: StructureTable) -> list[int]:
    """Indices of H_1..H_8 in the order of K16_CARTAN."""
    out = []
    for text in K16_CARTAN:
        ((key, _),) = parse_spoly(text, 3).terms.items()
        out.append(table.index_of(*key))
    return out


# loop algebra data ----------------------------------------------------------

def _pairing_coefficient(prod: SPoly, tdeg: int) -> Fraction:
    return conventions.CONV_SIGN * prod.terms.get((tdeg, prod.top_mask), Fraction(0))


def loop_form(x: SPoly, y: SPoly) -> Fraction:
    """Constant term of the Laurent-valued form B(x, y) = int x y vol."""
    return _pairing_coefficient(smul(x, y), 0)


def loop_cocycle(x: SPoly, y: SPoly) -> Fraction:
    """c(x, y) = Res B(x, dy) with d(t^n) = n t^(n-1) dt."""
    return _pairing_coefficient(smul(x, t_partial(y)), -1)


def loop_bracket(x: tuple[SPoly, Fraction], y: tuple[SPoly, Fraction], sh: bool = False):
    """Bracket in the central extension; elements are (loop part, central part)."""
    f, g = x[0], y[0]
    br = poisson_bracket(f, g)
    if sh:
        br = SPoly(br.k, {key: c for key, c in br.terms.items() if key[1]})
    return br, loop_cocycle(f, g)


def affine_form(x: SPoly, a, y: SPoly, b) -> Fraction:
    return loop_form(x, y) + rat(a) * rat(b)


def super_jacobi_defect(table: StructureTable, i: int, j: int, l: int) -> dict:
    """(-1)^{p_i p_l}[x_i,[x_j,x_l]] + cyclic; empty dict when the identity holds."""
    p = table.parity
    out: dict = {}
    for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
        sign = -1 if p(a) * p(c) else 1
        inner = dict(table.bracket(b, c))
        for m, coef in table.bracket_elements({a: 1}, inner).items():
            out[m] = out.get(m, 0) + sign * coef
    return {m: c for m, c in out.items() if c}


def super_antisymmetry_defects(table: StructureTable, pairs: Iterable[tuple[int, int]]) -> list:
    bad = []
    for i, j in pairs:
        sign = -1 if table.parity(i) * table.parity(j) else 1
        lhs = dict(table.bracket(j, i))
        rhs = {l: -sign * c for l, c in table.bracket(i, j)}
        if lhs != rhs:
            bad.append((i, j))
    return bad


def form_value(table: StructureTable, i: int, j: int) -> Fraction:
    """The invariant form B(x_i, x_j) of the table's family."""
    x, y = table.basis[i], table.basis[j]
    fam = table.family
    if fam.startswith("loop-"):
        if x.kind == "central" or y.kind == "central":
            return Fraction(1) if x.kind == y.kind else Fraction(0)
        return loop_form(x.gen, y.gen)
    prod = smul(x.gen, y.gen)
    if fam == "k16":
        return residue(prod)
    return berezin(prod)
