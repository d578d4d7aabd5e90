import random

import pytest
from hypothesis import given, settings, strategies as st

from modunits.curve import (
    cusps,
    galois_group,
    infinity,
    is_rational_divisor,
    level_new,
    point_divisor,
    valid_levels,
    zero,
)
from modunits.eta import EtaLabel, ExponentVector, all_labels, canonical_labels, vector_divisor
from modunits.linalg import integer_kernel
from modunits.units import (
    check_theorem1,
    degree0_coordinates,
    divisor_from_degree0,
    divisor_of,
    is_principal,
    theorem1_defects,
    unit_basis,
    unit_basis_rational,
)

from _support import gammas, lattice_vector, ligozat, multiplier_trivial, random_vector


def delta_quotient(L):
    return ExponentVector(L, {(1, 0): 24, (L.N, 0): -24})


def test_criterion_examples():
    for N in valid_levels(600):
        if N > 1:
            assert check_theorem1(delta_quotient(level_new(N))) == (True, None)
    assert check_theorem1(ExponentVector(level_new(4), {(1, 0): 8, (4, 0): -8})) == (True, None)
    for N in (2, 11, 23, 36, 48):
        L = level_new(N)
        assert check_theorem1(ExponentVector(L, {(1, 0): 1, (N, 0): -1})) == (False, "(b)")
    assert check_theorem1(ExponentVector(level_new(73), {(1, 0): 1, (73, 0): -1})) == (False, "(d)")
    assert check_theorem1(ExponentVector(level_new(11), {(1, 0): 1})) == (False, "(a)")
    assert check_theorem1(ExponentVector(level_new(11))) == (True, None)


def test_out_of_range_labels_are_rejected():
    L = level_new(16)
    with pytest.raises(ValueError):
        ExponentVector(L, {EtaLabel(1, 5, 4): 1})
    with pytest.raises(ValueError):
        ExponentVector(L, {EtaLabel(1, 0, 2): 1})


def test_defects_report_every_row():
    L = level_new(48)
    v = ExponentVector(L, {(1, 0): 1, (2, 0): -1})
    rows = theorem1_defects(v)
    assert [name for name, _, _ in rows][:3] == ["(a)", "(b)", "(c)"]
    assert dict((name, res) for name, _, res in rows[:2]) == {"(a)": 0, "(b)": 23}


def test_basis_examples():
    L11 = level_new(11)
    B = unit_basis(L11)
    assert B.rank == 1
    D = divisor_of(B.basis[0])
    five = (point_divisor(L11, zero(L11)) - point_divisor(L11, infinity(L11))) * 5
    assert D in (five, -five)
    assert unit_basis(level_new(4)).rank == 2
    assert unit_basis(level_new(1)).rank == 0


def test_divisor_examples():
    L = level_new(11)
    assert divisor_of(ExponentVector(L)).is_zero()
    D = divisor_of(delta_quotient(L))
    assert D[infinity(L)] == -10 and D[zero(L)] == 10 and D.degree() == 0


def test_rank_is_cusps_minus_one():
    for N in valid_levels(400):
        L = level_new(N)
        assert unit_basis(L).rank == len(cusps(L)) - 1


def test_random_units_have_integral_divisors():
    rng = random.Random(11)
    levels = valid_levels(150)
    for _ in range(10_000):
        L = level_new(rng.choice(levels))
        v = lattice_vector(L, rng)
        assert check_theorem1(v)[0]
        D = vector_divisor(v)
        assert D.is_integral() and D.degree() == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([9, 11, 16, 36, 48, 72, 144, 288]), st.integers(0, 10**6))
def test_principal_round_trip(N, seed):
    L = level_new(N)
    rng = random.Random(seed)
    v = lattice_vector(L, rng, canonical_labels(L))
    assert is_principal(divisor_of(v)) == v


def test_principal_examples_level_11():
    L = level_new(11)
    D = point_divisor(L, zero(L)) - point_divisor(L, infinity(L))
    assert is_principal(D) is None
    f = is_principal(D * 5)
    assert f is not None and divisor_of(f) == D * 5


def test_degree0_coordinates_round_trip():
    L = level_new(36)
    rng = random.Random(0)
    for _ in range(50):
        x = [rng.randint(-9, 9) for _ in range(len(cusps(L)) - 1)]
        assert degree0_coordinates(divisor_from_degree0(L, x)) == x
    with pytest.raises(ValueError):
        degree0_coordinates(point_divisor(L, zero(L)))


def test_divisor_map_is_injective_on_units():
    for N in (9, 36, 48, 72, 144, 576):
        B = unit_basis(level_new(N))
        assert integer_kernel([list(r) for r in B.divisor_matrix]) == []


def test_rational_units():
    for N in (2, 6, 11, 30, 210):
        L = level_new(N)
        assert len(unit_basis_rational(L)) == unit_basis(L).rank
    L9 = level_new(9)
    assert len(unit_basis_rational(L9)) == 2 < unit_basis(L9).rank
    for N in (9, 36, 48, 144):
        for v in unit_basis_rational(level_new(N)):
            assert check_theorem1(v)[0] and is_rational_divisor(divisor_of(v))


def test_galois_stability_of_units():
    for N in (9, 16, 36, 48, 72, 144):
        L = level_new(N)
        for v in unit_basis(L).basis:
            D = divisor_of(v)
            for sigma in galois_group(L):
                w = is_principal(D.galois(sigma))
                assert w is not None
                assert divisor_of(w) == D.galois(sigma)


def test_ligozat_sample():
    rng = random.Random(5)
    for N in valid_levels(100):
        L = level_new(N)
        labels = [lab for lab in all_labels(L) if lab.k == 0]
        for _ in range(50):
            v = random_vector(L, rng, labels, scale=rng.choice([1, 2, 12, 24]))
            assert check_theorem1(v)[0] == ligozat(v)


@pytest.mark.parametrize("N", [9, 16, 36, 48])
def test_exact_oracle_sample(N):
    L = level_new(N)
    rng = random.Random(N)
    gs = gammas(N, 60, N)
    for _ in range(30):
        v = random_vector(L, rng) if rng.random() < 0.5 else lattice_vector(L, rng)
        assert check_theorem1(v)[0] == multiplier_trivial(v, gs)
