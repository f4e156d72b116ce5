"""Verma modules, Shapovalov Gram blocks and the irreducibility criteria.

A Verma vector is a dict {monomial: coefficient} where the monomial is a
PBW-ordered tuple of negative-root ids and ``()`` is the highest-weight
vector v_a.  Coefficients are WPoly (symbolic weight) or Fraction (numeric).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .casimir import DualAssignment, casimir_rho, right_duals
from .exactnum import WPoly, bareiss_det, rat, trial_divide
from .liealg import StructureTable
from .rootsys import (
    FullWeight,
    GradedWeight,
    Quasiroot,
    cartan_basis,
    enumerate_quasiroots,
    height,
    negative_ids,
    rho,
    subset_coordinate,
    weight_of,
    weight_pairing,
    weight_variables,
)
from .uea import UEA


class HighestWeight:
    """Values of the highest weight on every Cartan basis element."""

    def __init__(self, table: StructureTable, values: Sequence):
        ids = cartan_basis(table)
        if len(values) != len(ids):
            raise ValueError(f"expected {len(ids)} weight coordinates, got {len(values)}")
        self.table = table
        self.values = tuple(values)
        self.by_id = dict(zip(ids, self.values))
        self.symbolic = any(isinstance(v, WPoly) for v in values)

    @classmethod
    def symbolic_weight(cls, table: StructureTable, letter: str = "a") -> "HighestWeight":
        vars = weight_variables(table, letter)
        return cls(table, [WPoly.var(vars, i) for i in range(len(vars))])

    @classmethod
    def numeric(cls, table: StructureTable, values) -> "HighestWeight":
        return cls(table, [rat(v) for v in values])

    def one(self):
        if self.symbolic:
            return WPoly.const(self.values[0].vars, 1)
        return Fraction(1)

    def zero(self):
        return self.one() * 0


@dataclass
class VermaModule:
    table: StructureTable
    weight: HighestWeight
    uea: UEA = None
    _act_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.uea is None:
            self.uea = UEA(self.table)
        self._neg_block = [b == 0 for b in self.uea.block]
        self._pos_block = [b == 2 for b in self.uea.block]

    def vacuum(self) -> dict:
        return {(): self.weight.one()}

    def _act_mono(self, x: int, mono: tuple) -> dict:
        """x . (mono v_a) with rational-in-weight coefficients, cached."""
        key = (x, mono)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        by_id = self.weight.by_id
        for word, c in self.uea.normal_form((x,) + mono).items():
            n = 0
            while n < len(word) and self._neg_block[word[n]]:
                n += 1
            rest = word[n:]
            if any(self._pos_block[i] for i in rest):
                continue
            coeff = c
            for h in rest:
                coeff = by_id[h] * coeff
            neg = word[:n]
            v = out.get(neg)
            v = coeff if v is None else v + coeff
            out[neg] = v
        out = {m: c for m, c in out.items() if c}
        self._act_cache[key] = out
        return out

    def act(self, x: int, v: dict) -> dict:
        out: dict = {}
        for mono, c in v.items():
            for m, d in self._act_mono(x, mono).items():
                term = d * c
                prev = out.get(m)
                out[m] = term if prev is None else prev + term
        return {m: c for m, c in out.items() if c}

    def act_word(self, word: Sequence[int], v: dict) -> dict:
        """Apply word[0] word[1] ... word[-1] to v (rightmost letter first)."""
        for x in reversed(word):
            v = self.act(x, v)
            if not v:
                break
        return v

    def monomial_vector(self, mono: tuple) -> dict:
        return {tuple(mono): self.weight.one()}


# weight spaces ------------------------------------------------------------------

def block_weight(table: StructureTable, w: GradedWeight) -> GradedWeight:
    """The weight that labels a Gram block (po/sh: d-part only)."""
    if table.family == "k16":
        return w
    return GradedWeight(0, w.d)


def weight_space_basis(table: StructureTable, deficit: GradedWeight, uea: UEA | None = None) -> list[tuple]:
    """PBW monomials in negative roots of total weight -deficit."""
    uea = uea or UEA(table)
    deficit = block_weight(table, deficit)
    target_phi = height(table, deficit)
    if target_phi < 0:
        return []
    if target_phi == 0:
        return [()] if deficit == block_weight(table, GradedWeight(0, (0,) * table.k)) else []
    negs = sorted(negative_ids(table), key=lambda i: uea.rank[i])
    weights = {i: block_weight(table, -weight_of(table, i)) for i in negs}
    lowered = [i for i in negs if weights[i].lead > 0]
    level = [i for i in negs if weights[i].lead == 0]
    results = []

    def level_part(remaining: GradedWeight):
        budget = height(table, remaining)
        cands = [i for i in level if height(table, weights[i]) <= budget]
        found = []

        def rec(pos, w, budget, chosen):
            if budget == 0:
                if w == remaining:
                    found.append(tuple(chosen))
                return
            if pos == len(cands):
                return
            i = cands[pos]
            h = height(table, weights[i])
            cap = budget // h
            if table.parity(i):
                cap = min(cap, 1)
            for n in range(cap, -1, -1):
                ww = w
                for _ in range(n):
                    ww = ww + weights[i]
                rec(pos + 1, ww, budget - n * h, chosen + [i] * n)

        rec(0, GradedWeight(0, (0,) * table.k), budget, [])
        return found

    def lowered_part(pos, remaining: GradedWeight, chosen):
        if remaining.lead == 0:
            for tail in level_part(remaining):
                mono = tuple(sorted(chosen + list(tail), key=lambda i: uea.rank[i]))
                results.append(mono)
            return
        if pos == len(lowered):
            return
        i = lowered[pos]
        w = weights[i]
        cap = remaining.lead // w.lead
        if table.parity(i):
            cap = min(cap, 1)
        for n in range(cap, -1, -1):
            r = remaining
            for _ in range(n):
                r = GradedWeight(r.lead - w.lead, tuple(a - b for a, b in zip(r.d, w.d)))
            lowered_part(pos + 1, r, chosen + [i] * n)

    lowered_part(0, deficit, [])
    results = sorted(set(results), key=lambda m: (len(m), [uea.rank[i] for i in m]))
    return results


# Gram blocks -------------------------------------------------------------------

def _sigma(table: StructureTable, duals: DualAssignment, mono: tuple):
    """Contravariant image of a negative monomial: (sign * scale, reversed dual word)."""
    coeff = Fraction(1)
    word = []
    for x in mono:
        if x not in duals.pairs:
            raise KeyError(f"no dual for {table.basis[x].label}")
        j, s = duals[x]
        coeff *= s
        word.append(j)
    parities = [table.parity(x) for x in mono]
    swaps = sum(
        parities[i] * parities[j] for i in range(len(mono)) for j in range(i + 1, len(mono))
    )
    if swaps & 1:
        coeff = -coeff
    return coeff, tuple(reversed(word))


@dataclass
class GramBlock:
    deficit: GradedWeight
    basis: list[tuple]
    matrix: list[list]
    det: object

    @property
    def size(self) -> int:
        return len(self.basis)


def gram_matrix(module: VermaModule, deficit: GradedWeight, duals: DualAssignment | None = None,
                basis: list[tuple] | None = None) -> GramBlock:
    table = module.table
    duals = duals or right_duals(table)
    if basis is None:
        basis = weight_space_basis(table, deficit, module.uea)
    zero = module.weight.zero()
    rows = [_sigma(table, duals, u) for u in basis]
    matrix = []
    columns = [module.monomial_vector(w) for w in basis]
    for coeff, word in rows:
        row = []
        for col in columns:
            v = module.act_word(word, col)
            entry = v.get((), zero)
            row.append(entry * coeff if entry else zero)
        matrix.append(row)
    det = bareiss_det(matrix) if basis else module.weight.one()
    return GramBlock(block_weight(table, deficit), basis, matrix, det)


def block_deficits(table: StructureTable, bound: int) -> list[GradedWeight]:
    """Distinct block weights of U(n-) with height <= bound."""
    seen = set()
    for q in enumerate_quasiroots(table, bound):
        seen.add(block_weight(table, q.graded))
    return sorted(seen, key=lambda w: (height(table, w), w.lead, w.d))


# linear factors ---------------------------------------------------------------------

def criterion_form(table: StructureTable, a, beta: FullWeight, rho_weight: FullWeight | None = None):
    """2(a + rho, beta) - (beta, beta)."""
    r = rho(table) if rho_weight is None else rho_weight
    shifted = [x + y for x, y in zip(a, r.coords)]
    return 2 * weight_pairing(table, shifted, beta.coords) - weight_pairing(table, beta.coords, beta.coords)


def linear_candidates(table: StructureTable, bound: int, rho_weight: FullWeight | None = None):
    """[(quasiroot, L_beta)] with L_beta symbolic in the highest-weight variables."""
    a = HighestWeight.symbolic_weight(table).values
    out = []
    for q in enumerate_quasiroots(table, bound):
        L = criterion_form(table, a, q.weight, rho_weight)
        if not isinstance(L, WPoly):
            L = WPoly.const(a[0].vars, L)
        out.append((q, L))
    return out


@dataclass
class Factor:
    linear: WPoly  # monic
    multiplicity: int
    quasiroots: list
    candidate: WPoly  # L_beta before normalization

    def __iter__(self):
        return iter((self.linear, self.multiplicity, self.quasiroots))


@dataclass
class Factorization:
    det: WPoly
    factors: list  # of Factor
    residual: WPoly
    degenerate: bool

    @property
    def passed(self) -> bool:
        return not self.degenerate and self.residual.is_constant() and not self.residual.is_zero()


def shapovalov_det(block: GramBlock, candidates) -> Factorization:
    det = block.det
    if not isinstance(det, WPoly):
        raise TypeError("factor matching needs a symbolic determinant")
    if det.is_zero():
        return Factorization(det, [], det, True)
    groups: dict = {}
    for q, L in candidates:
        if L.is_constant():
            continue
        key = L.monic()
        groups.setdefault(key, []).append((q, L))
    residual = det
    factors = []
    for key in sorted(groups, key=str):
        n = 0
        while True:
            q = trial_divide(residual, key)
            if q is None:
                break
            residual = q
            n += 1
        if n:
            members = groups[key]
            factors.append(Factor(key, n, [q for q, _ in members], members[0][1]))
    return Factorization(det, factors, residual, False)


# numeric verdicts -------------------------------------------------------------------

def irreducible(table: StructureTable, a: Sequence, bound: int, rho_weight: FullWeight | None = None):
    """(verdict, witnesses): quasiroots of height <= bound with 2(a+rho,beta) = (beta,beta)."""
    a = [rat(x) for x in a]
    witnesses = [q for q in enumerate_quasiroots(table, bound)
                 if criterion_form(table, a, q.weight, rho_weight) == 0]
    return (not witnesses), witnesses


def gram_verdict(table: StructureTable, a: Sequence, bound: int, uea: UEA | None = None,
                 duals: DualAssignment | None = None):
    """(verdict, singular block weights) from numeric Gram determinants up to the bound."""
    module = VermaModule(table, HighestWeight.numeric(table, a), uea)
    duals = duals or right_duals(table)
    singular = []
    for d in block_deficits(table, bound):
        block = gram_matrix(module, d, duals)
        if block.det == 0:
            singular.append(d)
    return (not singular), singular


def _dual_value(table, a, J):
    """a evaluated on the right dual of H_J."""
    from .casimir import right_duals as _rd

    ids = cartan_basis(table)
    duals = _rd(table, [ids[J]])
    j, s = duals[ids[J]]
    return s * a[ids.index(j)]


def explicit_criterion(table: StructureTable, a: Sequence, b: Sequence) -> bool:
    """The expanded coordinate inequality; True means "holds" (no obstruction from b)."""
    a = [rat(x) for x in a]
    b = [rat(x) for x in b]
    if table.family == "k16":
        lhs = sum(a[i] * a[i + 4] for i in range(4))
        rhs = (sum(a[i] * b[i + 4] for i in range(4)) + sum(b[i] * a[i + 4] for i in range(4))
               + sum(b[i] * b[i + 4] for i in range(4)) - 4 * b[4] - 2 * b[5] + 4 * b[7])
        return lhs != rhs
    n = len(a)
    lhs = sum(a[J] * _dual_value(table, a, J) for J in range(n))
    rhs = sum(a[J] * _dual_value(table, b, J) for J in range(n))
    rhs += sum(b[J] * _dual_value(table, a, J) for J in range(n))
    rhs += sum(b[J] * _dual_value(table, b, J) for J in range(n))
    k = table.k
    Jk = ((1 << k) - 1) & ~(1 << (k - 1))
    rhs -= Fraction(-2) ** (k - 1) * b[subset_coordinate(table, Jk)]
    return lhs != rhs


def explicit_criterion_check(table: StructureTable, a: Sequence, beta: FullWeight) -> dict:
    """Evaluate the abstract and expanded forms of the criterion for b = a - beta."""
    a = [rat(x) for x in a]
    b = [x - y for x, y in zip(a, beta.coords)]
    abstract = criterion_form(table, a, beta) != 0
    return {"abstract": abstract, "explicit": explicit_criterion(table, a, b)}


def casimir_eigenvalue(table: StructureTable, a: Sequence):
    """Scalar by which C_2 acts on v_a (from its Cartan part)."""
    from .casimir import linear_term, quadratic_terms

    duals = right_duals(table)
    ids = cartan_basis(table)
    pos = {h: i for i, h in enumerate(ids)}
    total = 0
    grade = 0 if table.family == "k16" else None
    for c, left, right in quadratic_terms(table, duals, grade):
        if left in pos and right in pos:
            total = total + c * a[pos[left]] * a[pos[right]]
    for h, c in linear_term(table).items():
        total = total + c * a[pos[h]]
    return total


__all__ = [
    "HighestWeight",
    "VermaModule",
    "GramBlock",
    "Factor",
    "Factorization",
    "Quasiroot",
    "weight_space_basis",
    "gram_matrix",
    "block_deficits",
    "criterion_form",
    "linear_candidates",
    "shapovalov_det",
    "irreducible",
    "gram_verdict",
    "explicit_criterion",
    "explicit_criterion_check",
    "casimir_eigenvalue",
    "casimir_rho",
]


# k16 scalar action ----------------------------------------------------------------

def k16_scalar_check(band: int = 5, grade: int = 3) -> dict:
    """C_2 on v_a and on f v_a for negative roots f with lead deficit <= grade."""
    from .casimir import build_casimir
    from .liealg import AlgebraId, BandOverflow, build_algebra

    if band < grade + 2:
        raise ValueError(f"band {band} too small for grade window {grade}")
    table = build_algebra(AlgebraId("k16", 3, band))
    uea = UEA(table)
    module = VermaModule(table, HighestWeight.symbolic_weight(table), uea)
    C = build_casimir(table, right_duals(table), uea, grade)

    def apply_C(v):
        out: dict = {}
        for word, c in C.terms.items():
            for m, x in module.act_word(word, v).items():
                out[m] = out.get(m, 0) + x * c
        return {m: x for m, x in out.items() if x}

    top = apply_C(module.vacuum())
    scalar = top.get((), module.weight.zero())
    failures = []
    if set(top) - {()}:
        failures.append({"vector": "v_a", "reason": "not an eigenvector"})
    checked = 0
    for f in negative_ids(table):
        if -weight_of(table, f).lead > grade:
            continue
        checked += 1
        v = module.monomial_vector((f,))
        try:
            w = apply_C(v)
        except BandOverflow as exc:
            failures.append({"vector": table.basis[f].label, "reason": f"band overflow: {exc}"})
            continue
        expected = {(f,): scalar}
        if w != expected:
            failures.append({"vector": table.basis[f].label, "reason": "C_2 f v_a != c(a) f v_a"})
    return {"band": band, "grade": grade, "scalar": str(scalar), "checked": checked,
            "failures": failures, "passed": not failures}
