"""Invariant forms, dual bases, quadratic Casimir elements and their checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import conventions
from .liealg import StructureTable, form_value, k16_cartan_order
from .rootsys import (
    FullWeight,
    cartan_basis,
    full_weight_of,
    positive_ids,
    subset_coordinate,
    weight_of,
    weight_of_element,
)
from .uea import UEA, UEAElem, uea_bracket


class DegenerateForm(ValueError):
    pass


def bilinear_B(table: StructureTable, i: int, j: int) -> Fraction:
    return form_value(table, i, j)


def _partner(table: StructureTable, i: int) -> int:
    x = table.basis[i]
    if x.kind == "central":
        return i
    mask = ((1 << (2 * table.k)) - 1) ^ x.mask
    fam = table.family
    if fam == "k16":
        tdeg = -1 - x.tdeg
    elif fam.startswith("loop-"):
        tdeg = -x.tdeg
    else:
        tdeg = 0
    try:
        return table.index_of(tdeg, mask)
    except KeyError:
        raise DegenerateForm(f"{x.label} has no partner in the basis") from None


def _has_partner(table: StructureTable, i: int) -> bool:
    try:
        _partner(table, i)
    except DegenerateForm:
        return False
    return True


@dataclass(frozen=True)
class DualAssignment:
    """i -> (j, scale): the dual of x_i is scale * x_j."""

    pairs: dict
    side: str

    def __getitem__(self, i):
        return self.pairs[i]

    def element(self, i) -> dict:
        j, s = self.pairs[i]
        return {j: s}


def _duals(table: StructureTable, side: str, ids=None) -> DualAssignment:
    pairs = {}
    if ids is None:
        ids = range(table.dim)
        if table.algebra.band is not None:
            # band edges have their partners outside the band
            ids = [i for i in ids if _has_partner(table, i)]
    for i in ids:
        j = _partner(table, i)
        b = bilinear_B(table, i, j) if side == "right" else bilinear_B(table, j, i)
        if not b:
            raise DegenerateForm(f"B pairs {table.basis[i].label} trivially with its partner")
        pairs[i] = (j, 1 / b)
    return DualAssignment(pairs, side)


def right_duals(table: StructureTable, ids=None) -> DualAssignment:
    """Duals with B(e, e^*) = 1."""
    return _duals(table, "right", ids)


def left_duals(table: StructureTable, ids=None) -> DualAssignment:
    """Duals with B(e^*, e) = 1."""
    return _duals(table, "left", ids)


def linear_term(table: StructureTable) -> dict:
    """The degree-one part of the Casimir element, as {cartan id: coeff}."""
    if table.family == "k16":
        H = k16_cartan_order(table)
        return {H[4]: Fraction(4), H[5]: Fraction(2), H[7]: Fraction(-4)}
    k = table.k
    J = ((1 << k) - 1) & ~(1 << (k - 1))
    h = cartan_basis(table)[subset_coordinate(table, J)]
    return {h: Fraction(-2) ** (k - 1)}


def quadratic_terms(table: StructureTable, duals: DualAssignment, grade: int | None = None):
    """List of (coeff, left id, right id) for the quadratic part of C_2."""
    terms = []
    if table.family == "k16":
        if grade is None:
            raise ValueError("k16 Casimir needs a grade window")
        root_coeff = Fraction(1)
        roots = [i for i in positive_ids(table) if weight_of(table, i).lead <= grade]
        H = k16_cartan_order(table)
        cartan = H[:4]
        if any(i not in duals.pairs for i in roots + cartan):
            raise ValueError(f"band {table.algebra.band} too small for grade window {grade}")
    else:
        root_coeff = Fraction(2)
        roots = positive_ids(table)
        cartan = cartan_basis(table)
    for i in roots:
        j, s = duals[i]
        terms.append((root_coeff * s, j, i))
    for h in cartan:
        j, s = duals[h]
        terms.append((s, h, j))
    return terms


def build_casimir(table: StructureTable, duals: DualAssignment, uea: UEA | None = None,
                  grade: int | None = None) -> UEAElem:
    uea = uea or UEA(table)
    terms: dict = {}
    for c, a, b in quadratic_terms(table, duals, grade):
        for m, v in uea.normal_form((a, b)).items():
            terms[m] = terms.get(m, 0) + c * v
    for h, c in linear_term(table).items():
        terms[(h,)] = terms.get((h,), 0) + c
    return UEAElem(uea, terms)


def centrality_check(C: UEAElem, ids=None) -> list[tuple[int, UEAElem]]:
    """Basis elements x with [C, x] != 0, paired with the bracket."""
    uea = C.uea
    failures = []
    for i in ids if ids is not None else range(uea.table.dim):
        br = uea_bracket(C, uea.gen(i))
        if br:
            failures.append((i, br))
    return failures


def casimir_report(table: StructureTable, side: str = "right") -> dict:
    duals = right_duals(table) if side == "right" else left_duals(table)
    uea = UEA(table)
    C = build_casimir(table, duals, uea)
    failures = centrality_check(C)
    return {
        "family": table.family,
        "k": table.k,
        "duals": side,
        "convention": {
            "conv_sign": conventions.CONV_SIGN,
            "dual_signs": {
                table.basis[i].label: str(s) for i, (_, s) in sorted(duals.pairs.items())
            },
        },
        "casimir": str(C),
        "failures": [
            {"basis": table.basis[i].label, "bracket": str(br)} for i, br in failures
        ],
    }


def two_rho_check(table: StructureTable) -> dict:
    """Compare (even positive roots) - (odd positive roots) with the weight of the linear term."""
    n = len(cartan_basis(table))
    total = FullWeight.zero(n)
    for i in positive_ids(table):
        w = full_weight_of(table, i)
        total = total - w if table.parity(i) else total + w
    target = weight_of_element(table, linear_term(table))
    labels = [table.basis[i].label for i in cartan_basis(table)]
    return {
        "family": table.family,
        "k": table.k,
        "root_sum": {l: str(c) for l, c in zip(labels, total.coords)},
        "linear_term_weight": {l: str(c) for l, c in zip(labels, target.coords)},
        "passed": total == target,
    }


def casimir_rho(table: StructureTable) -> FullWeight:
    """rho read off the linear term of C_2 (half its weight for po/sh, all of it for k16)."""
    lam = weight_of_element(table, linear_term(table))
    return lam if table.family == "k16" else lam.scale(Fraction(1, 2))
