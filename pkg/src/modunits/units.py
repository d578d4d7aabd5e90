"""Modular units on X_0(N) as exponent vectors of generalized eta quotients.

The modularity test, the full unit lattice in canonical coordinates, the
divisor map and principality testing.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import arith
from .curve import (
    CuspidalDivisor,
    cusps,
    galois_orbits,
    infinity,
    is_rational_divisor,
    orbit_sum,
    point_divisor,
)
from .eta import EtaLabel, ExponentVector, canonical_labels, h_of, vector_divisor
from .linalg import congruence_lattice, matvec, smith_normal_form_with_inverse, transpose


def _check_labels(vector):
    for lab in vector.entries:
        if lab.h != h_of(vector.level, lab.m) or not 0 <= lab.k < lab.h:
            raise ValueError(f"{lab} is not a label of level {vector.level.N} with 0 <= k < h")


@lru_cache(maxsize=65536)
def condition_forms(level, lab):
    """Linear forms (modulus, coefficient) of one label for the modularity test.

    Modulus 0 marks an equation over Z; modulus 2 rows come from the square
    conditions, one per prime.
    """
    N, n = level.N, level.n
    m, k, h = lab.m, lab.k, lab.h
    forms = [
        ("(a)", 0, 1),
        ("(b)", 24, m),
        ("(c)", 24, N * gcd(h, k) ** 2 // (m * h * h)),
    ]
    if n % 2:
        forms.append(("(d)", 3, k))
        primes = arith.prime_divisors(N)
    else:
        forms.append(("(d)", n, k * n // h + (n // 2) * arith.ord2(m)))
        primes = [p for p in arith.prime_divisors(N) if p != 2]
    for p in primes:
        forms.append(("(d)", 2, arith.valuation(m, p)))
    return tuple(forms)


@lru_cache(maxsize=None)
def _forms_layout(level):
    """Condition names and moduli in the order produced by condition_forms."""
    return tuple((name, mod) for name, mod, _ in condition_forms(level, EtaLabel(level.N, 0, 1)))


def check_theorem1(vector):
    """Is prod eta_{m,k}^e a modular function on X_0(N)?

    Returns (verdict, letter of the first failed condition or None).

    >>> from modunits.curve import level_new
    >>> L = level_new(4)
    >>> check_theorem1(ExponentVector(L, {(1, 0): 8, (4, 0): -8}))
    (True, None)
    >>> check_theorem1(ExponentVector(level_new(11), {(1, 0): 1, (11, 0): -1}))
    (False, '(b)')
    """
    _check_labels(vector)
    layout = _forms_layout(vector.level)
    sums = [0] * len(layout)
    for lab, e in vector.items():
        for i, (_, _, coeff) in enumerate(condition_forms(vector.level, lab)):
            sums[i] += e * coeff
    for (name, mod), s in zip(layout, sums):
        if (s if mod == 0 else s % mod):
            return False, name
    return True, None


def theorem1_defects(vector):
    """Residues of every condition row; used to diagnose condition (d) failures."""
    _check_labels(vector)
    layout = _forms_layout(vector.level)
    sums = [0] * len(layout)
    for lab, e in vector.items():
        for i, (_, _, coeff) in enumerate(condition_forms(vector.level, lab)):
            sums[i] += e * coeff
    return [(name, mod, s if mod == 0 else s % mod) for (name, mod), s in zip(layout, sums)]


@dataclass(frozen=True)
class UnitLattice:
    level: object
    labels: tuple
    basis: tuple  # ExponentVectors
    divisor_matrix: tuple  # rows: cusps, columns: basis vectors

    @property
    def rank(self):
        return len(self.basis)

    def vector(self, coeffs):
        out = ExponentVector(self.level)
        for c, b in zip(coeffs, self.basis):
            if c:
                out = out + b * c
        return out


def _lattice_kernel(labels, level):
    """Rows of the unit lattice on `labels`.

    Condition (a) is solved by eliminating the last coordinate; the rest are
    congruences, so the lattice in the remaining coordinates contains 24 Z^(s-1)
    and its HNF is computed with entries kept modulo 24.
    """
    layout = _forms_layout(level)
    s = len(labels)
    rows = [[0] * s for _ in layout]
    for j, lab in enumerate(labels):
        for i, (_, _, coeff) in enumerate(condition_forms(level, lab)):
            rows[i][j] = coeff
    cong, mods = [], []
    for row, (_, mod) in zip(rows, layout):
        if mod:
            cong.append([row[j] - row[-1] for j in range(s - 1)])
            mods.append(mod)
    ys = congruence_lattice(cong, mods, s - 1)
    return [y + [-sum(y)] for y in ys]


@lru_cache(maxsize=None)
def unit_basis(level):
    """HNF basis of all exponent vectors on canonical labels passing the modularity test."""
    labels = canonical_labels(level)
    rows = _lattice_kernel(labels, level)
    basis = tuple(ExponentVector.from_labels(level, labels, r) for r in rows)
    cols = []
    for v in basis:
        d = vector_divisor(v)
        if not d.is_integral() or d.degree() != 0:
            raise AssertionError(f"unit {v} has divisor {d}")
        cols.append(d.int_vector())
    expected = len(cusps(level)) - 1
    if len(basis) != expected:
        raise AssertionError(f"unit lattice of level {level.N} has rank {len(basis)}, expected {expected}")
    return UnitLattice(level, labels, basis, tuple(map(tuple, transpose(cols))) if cols else ())


def divisor_of(vector):
    return vector_divisor(vector)


@dataclass(frozen=True)
class _Presentation:
    """Degree-0 divisors in the basis (x) - (oo), x != oo, and the SNF of the relations."""

    index: tuple  # cusp positions other than infinity
    U: tuple
    D: tuple  # diagonal entries
    V: tuple
    U_inv: tuple


@lru_cache(maxsize=None)
def presentation(level):
    lattice = unit_basis(level)
    oo = cusps(level).index(infinity(level))
    index = tuple(i for i in range(len(cusps(level))) if i != oo)
    R = [[lattice.divisor_matrix[i][j] for j in range(lattice.rank)] for i in index]
    if not R:
        return _Presentation(index, (), (), (), ())
    U, D, V, U_inv = smith_normal_form_with_inverse(R)
    diag = tuple(D[i][i] for i in range(len(index)))
    if any(d == 0 for d in diag):
        raise AssertionError(f"unit divisors of level {level.N} do not have full rank")
    return _Presentation(index, tuple(map(tuple, U)), diag, tuple(map(tuple, V)), tuple(map(tuple, U_inv)))


def degree0_coordinates(D):
    """Coefficients of an integral degree-0 divisor in the basis (x) - (oo)."""
    if not D.is_integral():
        raise ValueError("divisor is not integral")
    if D.degree() != 0:
        raise ValueError("divisor does not have degree 0")
    vec = D.int_vector()
    return [vec[i] for i in presentation(D.level).index]


def is_principal(D):
    """The unique unit vector f on canonical labels with div f = D, or None."""
    x = degree0_coordinates(D)
    pres = presentation(D.level)
    lattice = unit_basis(D.level)
    if not x:
        return ExponentVector(D.level)
    y = matvec(pres.U, x)
    z = []
    for yi, d in zip(y, pres.D):
        if yi % d:
            return None
        z.append(yi // d)
    f = lattice.vector(matvec(pres.V, z))
    if divisor_of(f) != D:
        raise AssertionError("principality witness has the wrong divisor")
    return f


def divisor_from_degree0(level, x):
    """Inverse of degree0_coordinates."""
    pres = presentation(level)
    vec = [Fraction(0)] * len(cusps(level))
    oo = cusps(level).index(infinity(level))
    for i, v in zip(pres.index, x):
        vec[i] += v
        vec[oo] -= v
    return CuspidalDivisor.from_vector(level, vec)


def rational_degree0_basis(level):
    """Degree-0 coordinates of orbit_sum(O) - |O| (oo) for each orbit O other than {oo}."""
    oo = infinity(level)
    out = []
    for orbit in galois_orbits(level):
        if oo in orbit:
            continue
        D = orbit_sum(level, orbit) - point_divisor(level, oo, len(orbit))
        out.append(degree0_coordinates(D))
    return out


@lru_cache(maxsize=None)
def unit_basis_rational(level):
    """Basis of the units whose divisor is Galois-fixed.

    A rational degree-0 divisor W a (W: orbit basis) is principal iff
    U W a = 0 modulo the invariant factors, which is a congruence lattice in a.
    """
    lattice = unit_basis(level)
    pres = presentation(level)
    W = rational_degree0_basis(level)
    if not W or not pres.D:
        return ()
    UW = [[sum(u * w for u, w in zip(row, col)) for col in W] for row in pres.U]
    rows, mods = [], []
    for row, d in zip(UW, pres.D):
        if d > 1:
            rows.append(row)
            mods.append(d)
    out = []
    for a in congruence_lattice(rows, mods, len(W)):
        x = [sum(ai * col[i] for ai, col in zip(a, W)) for i in range(len(pres.index))]
        y = matvec(pres.U, x)
        z = [yi // d for yi, d in zip(y, pres.D)]
        v = lattice.vector(matvec(pres.V, z))
        if not is_rational_divisor(divisor_of(v)):
            raise AssertionError("rational unit basis contains a non-rational divisor")
        out.append(v)
    return tuple(out)
