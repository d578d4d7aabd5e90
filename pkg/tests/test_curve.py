import random

import pytest
from hypothesis import given, settings, strategies as st

from modunits import arith
from modunits.curve import (
    InvalidLevel,
    canonicalize,
    cusps,
    galois_apply,
    galois_element,
    galois_element_mod24,
    galois_group,
    galois_orbits,
    infinity,
    is_rational_divisor,
    level_new,
    make_cusp,
    orbit_sum,
    point_divisor,
    valid_levels,
    zero,
)
from modunits.oracle import random_gamma0

sample_levels = st.sampled_from(valid_levels(600))


def test_level_examples():
    assert level_new(48).triple == (48, 4, 3)
    assert level_new(11).triple == (11, 1, 11)
    assert level_new(576).triple == (576, 24, 1)
    for bad in (25, 0, -4, 49, 256, 9 * 9):
        with pytest.raises(InvalidLevel):
            level_new(bad)


def test_cusp_examples():
    assert len(cusps(level_new(11))) == 2
    assert len(cusps(level_new(36))) == 12
    L9 = level_new(9)
    assert [(x.c, x.a) for x in cusps(L9)] == [(1, 1), (3, 1), (3, 2), (9, 1)]


def test_cusp_count_formula():
    for N in valid_levels(1000):
        L = level_new(N)
        expected = sum(arith.euler_phi(arith.xgcd(d, N // d)[0]) for d in arith.divisors(N))
        assert len(cusps(L)) == expected


def test_widths_sum_to_index():
    for N in valid_levels(1000):
        L = level_new(N)
        assert sum(x.width for x in cusps(L)) == arith.psi(N)


def test_galois_examples():
    L = level_new(9)
    minus = galois_element_mod24(L, -1)
    assert galois_apply(minus, make_cusp(L, 3, 1), L) == make_cusp(L, 3, 2)
    for N in (9, 36, 48, 144, 576):
        L = level_new(N)
        for ell in (5, 7, 11, 13, 23):
            s = galois_element_mod24(L, ell)
            assert galois_apply(s, zero(L), L) == zero(L)
            if ell % L.n == 1 % L.n:
                assert all(galois_apply(s, x, L) == x for x in cusps(L))


@settings(max_examples=60, deadline=None)
@given(sample_levels, st.data())
def test_galois_action_composes(N, data):
    L = level_new(N)
    units = [u for u in range(1, 24 * N) if arith.xgcd(u, 24 * N)[0] == 1]
    a = data.draw(st.sampled_from(units[:200]))
    b = data.draw(st.sampled_from(units[:200]))
    sa, sb, sab = galois_element(L, a), galois_element(L, b), galois_element(L, a * b)
    for x in cusps(L):
        assert galois_apply(sa, galois_apply(sb, x, L), L) == galois_apply(sab, x, L)


def test_galois_factors_through_units_mod_n():
    for N in (36, 72, 144, 576):
        L = level_new(N)
        by_class = {}
        for ell in range(1, 24 * 20):
            if arith.xgcd(ell, 24 * N)[0] != 1:
                continue
            perm = tuple(galois_apply(galois_element(L, ell), x, L) for x in cusps(L))
            assert by_class.setdefault(ell % L.n, perm) == perm


def test_rationality_examples():
    L = level_new(9)
    x1, x2 = make_cusp(L, 3, 1), make_cusp(L, 3, 2)
    oo = infinity(L)
    assert is_rational_divisor(point_divisor(L, zero(L)) - point_divisor(L, oo))
    assert not is_rational_divisor(point_divisor(L, x1) - point_divisor(L, x2))
    assert is_rational_divisor(point_divisor(L, x1) + point_divisor(L, x2) - point_divisor(L, oo, 2))


def test_orbit_sums_are_rational():
    for N in (9, 36, 48, 144, 576):
        L = level_new(N)
        orbits = galois_orbits(L)
        assert sorted(x for o in orbits for x in o) == list(cusps(L))
        for o in orbits:
            assert is_rational_divisor(orbit_sum(L, o))
        assert len(galois_group(L)) == arith.euler_phi(L.n)


@settings(max_examples=80, deadline=None)
@given(sample_levels, st.integers(0, 10**6))
def test_canonicalization_is_gamma0_invariant(N, seed):
    L = level_new(N)
    rng = random.Random(seed)
    x = rng.choice(cusps(L))
    g = random_gamma0(rng, N)
    p, q = x.numerator, x.c
    assert canonicalize(L, p, q) == x
    image = canonicalize(L, g.a * p + g.b * q, g.c * p + g.d * q)
    assert image == x
    assert canonicalize(L, image.numerator, image.c) == image


def test_canonicalize_infinity():
    L = level_new(48)
    assert canonicalize(L, 1, 0) == infinity(L)
    assert canonicalize(L, 5, 48) == infinity(L)
    assert canonicalize(L, 7, 1) == zero(L)
