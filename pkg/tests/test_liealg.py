import json
import random
from fractions import Fraction
from itertools import product

import pytest

from shapovalov.liealg import (
    AlgebraId,
    BandOverflow,
    StructureTable,
    affine_form,
    apply_field,
    build_algebra,
    contact_bracket,
    form_value,
    k16_cartan_order,
    loop_bracket,
    loop_cocycle,
    loop_form,
    poisson_bracket,
    super_antisymmetry_defects,
    super_jacobi_defect,
    supertrace,
)
from shapovalov.superpoly import SPoly, parse_spoly, popcount


def P(text, k):
    return parse_spoly(text, k)


def monomials(k, band):
    return [SPoly.mono(k, m, a) for a in range(-band, band + 1) for m in range(1 << (2 * k))]


def parity(f):
    return f.parity()


# vector-field homomorphism ---------------------------------------------------

def field_commutator(f, g, h):
    sign = -1 if parity(f) and parity(g) else 1
    return apply_field(f, apply_field(g, h)) - apply_field(g, apply_field(f, h)).scale(sign)


@pytest.mark.parametrize("k", [1, 2])
def test_contact_bracket_is_field_commutator(k):
    """[K_f, K_g] = K_{[f, g]} on the generators t, theta_i (both sides are derivations)."""
    band = 2
    gens = [SPoly.t(k)] + [SPoly.gen(k, i) for i in range(2 * k)]
    mons = monomials(k, band)
    for f, g in product(mons, repeat=2):
        br = contact_bracket(f, g)
        for h in gens:
            assert field_commutator(f, g, h) == apply_field(br, h)


def test_field_examples():
    k = 1
    x, y = P("x1", k), P("y1", k)
    assert apply_field(x, y) == SPoly.const(k, -1)
    assert apply_field(SPoly.t(k), x) == x
    assert apply_field(SPoly.const(k), SPoly.t(k)) == SPoly.const(k, 2)


def test_poisson_examples():
    k = 1
    x, y = P("x1", k), P("y1", k)
    assert poisson_bracket(x, y) == SPoly.const(k, 1)
    assert poisson_bracket(P("x1*y1", k), x) == x
    assert poisson_bracket(P("x1*y1", k), y) == -y
    assert poisson_bracket(SPoly.const(k), x).is_zero()


def test_contact_examples():
    k = 3
    t, x = SPoly.t(k), P("x1", k)
    assert contact_bracket(t, x) == -x
    assert contact_bracket(SPoly.const(k), t) == SPoly.const(k, 2)


# tables -------------------------------------------------------------------------

@pytest.mark.parametrize("family,k,dim", [("po", 1, 4), ("po", 2, 16), ("po", 3, 64), ("sh", 2, 14), ("sh", 3, 62)])
def test_dimensions_and_root_counts(algebra, family, k, dim):
    from shapovalov.rootsys import negative_ids, positive_ids

    t = algebra(family, k)
    assert t.dim == dim
    assert len(t.cartan_ids()) == (2**k if family == "po" else 2**k - 2)
    assert len(positive_ids(t)) == len(negative_ids(t)) == (dim - len(t.cartan_ids())) // 2


@pytest.mark.parametrize("family,k", [("po", 1), ("po", 2), ("sh", 2)])
def test_jacobi_exhaustive(algebra, family, k):
    t = algebra(family, k)
    for i, j, l in product(range(t.dim), repeat=3):
        assert super_jacobi_defect(t, i, j, l) == {}


@pytest.mark.parametrize("family,k", [("po", 2), ("sh", 3)])
def test_super_antisymmetry(algebra, family, k):
    t = algebra(family, k)
    assert super_antisymmetry_defects(t, product(range(t.dim), repeat=2)) == []


def test_jacobi_k16_sampled(algebra):
    t = algebra("k16", 3, 3)
    rng = random.Random(7)
    checked = 0
    while checked < 400:
        i, j, l = (rng.randrange(t.dim) for _ in range(3))
        try:
            assert super_jacobi_defect(t, i, j, l) == {}
        except BandOverflow:
            continue
        checked += 1


def test_k16_cartan_abelian(algebra):
    t = algebra("k16", 3, 2)
    H = k16_cartan_order(t)
    assert len(H) == 8
    for a, b in product(H, repeat=2):
        assert t.bracket(a, b) == ()
    # H_5 is stored with the reversed eta order
    assert t.basis[H[4]].coeff == -1 and t.basis[H[4]].label == "-t^-1*x2*x3*y2*y3"


def test_band_overflow_is_flagged(algebra):
    t = algebra("k16", 3, 1)
    i, j = t.find("t"), t.find("t")
    assert t.bracket(i, j) == ()
    with pytest.raises(BandOverflow):
        t.bracket(t.find("t^-1"), t.find("t^-1*x1"))


def test_algebra_id_validation():
    with pytest.raises(ValueError):
        AlgebraId("gl", 2)
    with pytest.raises(ValueError):
        AlgebraId("k16", 2, 3)
    with pytest.raises(ValueError):
        AlgebraId("k16", 3)
    with pytest.raises(ValueError):
        AlgebraId("po", 2, 3)


@pytest.mark.parametrize("family,k,band", [("po", 2, None), ("k16", 3, 1), ("loop-po", 1, 1)])
def test_json_roundtrip(algebra, family, k, band):
    t = algebra(family, k, band)
    text = t.dumps()
    back = StructureTable.from_json(json.loads(text))
    assert back.dumps() == text
    for i, j in product(range(min(t.dim, 40)), repeat=2):
        if t.is_complete(i, j):
            assert back.bracket(i, j) == t.bracket(i, j)


def test_find_and_labels(algebra):
    t = algebra("po", 2)
    i = t.find("y1*x1")
    assert t.basis[i].label == "x1*y1"
    with pytest.raises(ValueError):
        t.find("x1 + y1")


def test_supertrace_kills_brackets():
    k = 2
    mons = monomials(k, 0)
    for f, g in product(mons, repeat=2):
        assert supertrace(poisson_bracket(f, g)) == 0


def test_form_invariance_po(algebra):
    t = algebra("po", 2)
    for i, j, l in product(range(t.dim), repeat=3):
        lhs = sum(c * form_value(t, m, l) for m, c in t.bracket(i, j))
        rhs = sum(c * form_value(t, i, m) for m, c in t.bracket(j, l))
        assert lhs == rhs


# loop layer --------------------------------------------------------------------

def random_loop(rng, k=2, band=3, terms=3):
    f = SPoly(k)
    for _ in range(terms):
        f = f + SPoly.mono(k, rng.randrange(1 << (2 * k)), rng.randint(-band, band), rng.randint(-3, 3))
    parts = f.homogeneous_parts()
    return parts[rng.randrange(len(parts))] if parts else SPoly.mono(k, 1, 1)


def _sign(f, g):
    return -1 if parity(f) and parity(g) else 1


def test_loop_cocycle_random_triples():
    rng = random.Random(2024)
    for _ in range(1000):
        x, y, z = (random_loop(rng) for _ in range(3))
        assert loop_cocycle(x, y) == -_sign(x, y) * loop_cocycle(y, x)
        lhs = loop_cocycle(poisson_bracket(x, y), z)
        rhs = loop_cocycle(x, poisson_bracket(y, z)) - _sign(x, y) * loop_cocycle(y, poisson_bracket(x, z))
        assert lhs == rhs


def test_affine_form_invariance_random_triples():
    rng = random.Random(99)
    for _ in range(1000):
        x, y, z = (random_loop(rng) for _ in range(3))
        xy, c_xy = loop_bracket((x, 0), (y, 0))
        yz, c_yz = loop_bracket((y, 0), (z, 0))
        assert affine_form(xy, c_xy, z, 0) == affine_form(x, 0, yz, c_yz)


def test_loop_table_has_cocycle(algebra):
    t = algebra("loop-po", 1, 1)
    z = t.central_index
    i, j = t.find("t*x1"), t.find("t^-1*y1")
    expected = loop_cocycle(t.basis[i].gen, t.basis[j].gen)
    assert expected != 0
    assert dict(t.bracket(i, j)).get(z) == expected
    assert form_value(t, z, z) == 1
    assert loop_form(P("x1*y1", 1), SPoly.const(1)) == form_value(t, t.find("x1*y1"), t.find("1"))
