import random
from math import gcd

import pytest

from modunits import arith
from modunits.curve import galois_generators, galois_group, is_rational_divisor, level_new, valid_levels
from modunits.cuspgroup import (
    NotGaloisInvariant,
    class_group,
    class_group_fixed,
    class_group_rational,
    eta_tilde,
    fixed_generator_divisors,
    is_fixed,
    rationalize,
    verify_theorem3,
)
from modunits.curve import cusps, galois_orbits, infinity, orbit_sum, point_divisor
from modunits.eta import ExponentVector, all_labels, vector_divisor
from modunits.units import check_theorem1, divisor_of, is_principal, unit_basis


def test_group_examples():
    assert class_group(level_new(11)).invariant_factors == (5,)
    assert class_group(level_new(23)).invariant_factors == (11,)
    assert class_group(level_new(4)).invariant_factors == ()
    assert class_group(level_new(1)).invariant_factors == ()


def test_mazur_orders():
    for p in range(2, 100):
        if any(p % q == 0 for q in range(2, p)):
            continue
        G = class_group(level_new(p)).group
        assert G.order == (p - 1) // gcd(p - 1, 12)
        assert G.is_cyclic()


# rational torsion of the genus-one curves X_0(N), from the standard tables
GENUS_ONE = {11: (5,), 14: (6,), 15: (2, 4), 17: (4,), 19: (3,), 20: (6,), 21: (2, 4), 24: (2, 4), 27: (3,), 32: (4,), 36: (6,)}


@pytest.mark.parametrize("N, expected", sorted(GENUS_ONE.items()))
def test_genus_one_torsion(N, expected):
    assert class_group_fixed(level_new(N)).invariant_factors == expected


def test_rational_cusps_give_whole_group():
    for N in valid_levels(200):
        L = level_new(N)
        if L.n > 2:
            continue
        C = class_group(L).invariant_factors
        assert class_group_rational(L).invariant_factors == C
        assert class_group_fixed(L).invariant_factors == C


def test_rational_inside_fixed():
    for N in (9, 36, 48, 72, 144, 576):
        L = level_new(N)
        G = class_group(L)
        CQ, CF = class_group_rational(L), class_group_fixed(L)
        assert all(is_fixed(G, y) for y in CQ.generators)
        assert CF.order % CQ.order == 0


@pytest.mark.parametrize("N", [9, 36, 48, 72, 144])
def test_theorem3_examples(N):
    rep = verify_theorem3(level_new(N))
    assert rep.equal and rep.C_Q == rep.C_fixed


def test_frozen_orders():
    rep = verify_theorem3(level_new(48))
    assert (rep.C, rep.C_Q) == ((2, 4, 8, 8), (4, 4, 8))
    rep = verify_theorem3(level_new(36))
    assert (rep.C, rep.C_Q) == ((2, 6), (6,))


def test_class_coordinates_round_trip():
    for N in (36, 48, 72, 144):
        G = class_group(level_new(N))
        rng = random.Random(N)
        for _ in range(30):
            y = tuple(rng.randrange(d) for d in G.moduli)
            assert G.coordinates(G.divisor(y)) == y
            assert G.class_order(G.divisor(y)) == G.element_order(y)


def test_galois_acts_trivially_on_principal_classes():
    for N in (9, 36, 48, 72, 144):
        L = level_new(N)
        G = class_group(L)
        zero = tuple(0 for _ in G.moduli)
        for v in unit_basis(L).basis:
            D = divisor_of(v)
            for sigma in galois_group(L):
                assert G.coordinates(D.galois(sigma)) == zero


def test_rationalize_rational_input_is_unchanged():
    L = level_new(36)
    for orbit in galois_orbits(L):
        D = orbit_sum(L, orbit) - point_divisor(L, infinity(L), len(orbit))
        res = rationalize(D)
        assert res.divisor == D and res.unit.is_zero()


@pytest.mark.parametrize("N", [9, 16, 27, 36, 48, 64, 72, 144, 192])
def test_rationalize_postconditions(N):
    L = level_new(N)
    for D in fixed_generator_divisors(L):
        res = rationalize(D)
        assert is_rational_divisor(res.divisor)
        assert is_principal(D - res.divisor) is not None
        assert check_theorem1(res.unit)[0]
        assert vector_divisor(res.unit) == D - res.divisor
        assert not res.fallback
        again = rationalize(res.divisor)
        assert again.divisor == res.divisor and again.unit.is_zero()


def test_rationalize_rejects_moving_classes():
    L = level_new(36)
    G = class_group(L)
    with pytest.raises(NotGaloisInvariant):
        rationalize(G.divisor((1, 0)))


def test_replacement_blocks_have_integral_orders():
    # eta_tilde asserts the order of each block at oo and 0; the quotient
    # eta_{m,k} / eta_tilde must then have integral orders there too
    for N in valid_levels(400):
        L = level_new(N)
        if L.n < 3:
            continue
        oo, zero = infinity(L), cusps(L)[0]
        for lab in all_labels(L):
            if lab.k == 0:
                continue
            q = ExponentVector(L, {lab: 1}) - eta_tilde(L, lab)
            D = vector_divisor(q)
            assert q.weight_sum() == 0
            assert D[oo].denominator == 1 and D[zero].denominator == 1


def test_galois_generators_cover_units_mod_n():
    for n in (1, 2, 3, 4, 6, 8, 12, 24):
        L = level_new(n * n)
        reached = {1 % n}
        gens = [s.ell % n for s in galois_generators(L)] if n > 1 else []
        frontier = list(reached)
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = a * g % n
                if b not in reached:
                    reached.add(b)
                    frontier.append(b)
        assert len(reached) == arith.euler_phi(n)
