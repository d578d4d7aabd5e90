"""Levels N = n^2 M, cusps of X_0(N), Galois action on cusps, cuspidal divisors."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import arith

UNITS_MOD_24 = (1, 5, 7, 11, 13, 17, 19, 23)


class InvalidLevel(ValueError):
    pass


@dataclass(frozen=True)
class Level:
    N: int
    n: int
    M: int
    divisors: tuple = field(repr=False, compare=False)
    index: int = field(repr=False, compare=False)

    @property
    def triple(self):
        return (self.N, self.n, self.M)


@lru_cache(maxsize=None)
def level_new(N):
    """Validate N and return its decomposition N = n^2 M, n | 24, M squarefree.

    >>> level_new(48).triple
    (48, 4, 3)
    """
    if not isinstance(N, int) or N < 1:
        raise InvalidLevel(f"invalid level {N!r}: must be a positive integer")
    # N/s^2 is squarefree for exactly one s, the square part of N
    n = arith.square_part(N)
    if 24 % n:
        raise InvalidLevel(
            f"invalid level {N}: N = {n}^2 * {N // n**2} and {n} does not divide 24"
        )
    return Level(N, n, N // (n * n), arith.divisors(N), arith.psi(N))


def is_valid_level(N):
    try:
        level_new(N)
    except InvalidLevel:
        return False
    return True


def valid_levels(upto, start=1):
    return [N for N in range(start, upto + 1) if is_valid_level(N)]


@dataclass(frozen=True, order=True)
class Cusp:
    """The cusp a/c of X_0(N); c | N and a is the canonical residue mod gcd(c, N/c)."""

    c: int
    a: int
    width: int = field(compare=False)
    numerator: int = field(compare=False, repr=False)

    def __str__(self):
        if self.c == 1:
            return "0"
        return f"{self.a}/{self.c}"

    def is_infinity(self, level):
        return self.c == level.N


def _lift_numerator(r, g, c):
    """Smallest a = r (mod g), a >= 1, with gcd(a, c) = 1."""
    a = r if r > 0 else r + g
    while gcd(a, c) != 1:
        a += g
    return a


def make_cusp(level, c, a):
    N = level.N
    if N % c:
        raise ValueError(f"{c} does not divide {N}")
    g = gcd(c, N // c)
    r = a % g
    if g == 1:
        r = 1
    if gcd(r, g) != 1:
        raise ValueError(f"{a}/{c} is not a cusp: gcd({a}, {g}) != 1")
    if level.n % g:
        raise AssertionError(f"gcd(c, N/c) = {g} does not divide n = {level.n}")
    return Cusp(c, r, N // (c * g), _lift_numerator(r, g, c))


def canonicalize(level, p, q):
    """Canonical cusp equivalent to p/q under Gamma_0(N); q = 0 means infinity."""
    N = level.N
    if q == 0:
        return make_cusp(level, N, 1)
    d = gcd(p, q)
    p, q = p // d, q // d
    if q < 0:
        p, q = -p, -q
    c = gcd(q, N)
    g = gcd(c, N // c)
    return make_cusp(level, c, (p * (q // c)) % g if g > 1 else 1)


@lru_cache(maxsize=None)
def cusps(level):
    """Canonical representatives of all cusps, ordered by (c, a).

    >>> [str(x) for x in cusps(level_new(9))]
    ['0', '1/3', '2/3', '1/9']
    """
    out = []
    for c in level.divisors:
        g = gcd(c, level.N // c)
        for r in range(1, g + 1):
            if gcd(r, g) == 1:
                out.append(make_cusp(level, c, r))
    return tuple(out)


def cusp_index(level):
    return {x: i for i, x in enumerate(cusps(level))}


def infinity(level):
    return make_cusp(level, level.N, 1)


def zero(level):
    return make_cusp(level, 1, 1)


@dataclass(frozen=True)
class GaloisElement:
    """sigma_ell, acting through ell' = ell^(-1) mod N."""

    ell: int
    ell_inv: int
    N: int


def galois_element(level, ell):
    """sigma_ell for ell prime to N (ell is only used modulo 24 and modulo N)."""
    if gcd(ell, level.N) != 1 or gcd(ell, 24) != 1:
        raise ValueError(f"ell = {ell} is not prime to {level.N} and 24")
    ell_inv = arith.inverse_mod(ell, level.N)
    if (ell - ell_inv) % level.n:
        raise AssertionError("ell and its inverse differ modulo n")
    return GaloisElement(ell % (24 * level.N), ell_inv, level.N)


def galois_element_mod24(level, ell):
    """sigma for the class of ell mod 24, choosing a representative prime to N."""
    ell %= 24
    if ell not in UNITS_MOD_24:
        raise ValueError(f"{ell} is not a unit modulo 24")
    rep = ell
    while gcd(rep, level.N) != 1:
        rep += 24
    return galois_element(level, rep)


def galois_apply(sigma, x, level):
    """Image of the cusp a/c: the class of ell' a / c.

    >>> L = level_new(9)
    >>> str(galois_apply(galois_element_mod24(L, -1), make_cusp(L, 3, 1), L))
    '2/3'
    """
    if sigma.N != level.N:
        raise ValueError("Galois element built for another level")
    g = gcd(x.c, level.N // x.c)
    if g == 1:
        return x
    return make_cusp(level, x.c, (sigma.ell_inv * x.a) % g)


def galois_generators(level):
    """Galois elements whose classes generate (Z/n)^*, one per distinct action."""
    seen = set()
    out = []
    for ell in UNITS_MOD_24:
        if ell == 1:
            continue
        key = ell % level.n if level.n > 1 else 0
        if key == 1 % level.n or key in seen:
            continue
        seen.add(key)
        out.append(galois_element_mod24(level, ell))
    return out


def galois_group(level):
    """One sigma for each class in (Z/n)^*."""
    seen = {}
    for ell in UNITS_MOD_24:
        key = ell % level.n if level.n > 1 else 0
        seen.setdefault(key, galois_element_mod24(level, ell))
    return list(seen.values())


def galois_orbits(level):
    """Partition of the cusps into Galois orbits (lists of cusps)."""
    todo = list(cusps(level))
    group = galois_group(level)
    done = set()
    orbits = []
    for x in todo:
        if x in done:
            continue
        orbit = sorted({galois_apply(s, x, level) for s in group})
        done.update(orbit)
        orbits.append(orbit)
    return orbits


class CuspidalDivisor:
    """A Q-linear combination of cusps of X_0(N).

    Coefficients are kept as exact rationals; zero coefficients are dropped.
    """

    __slots__ = ("level", "coefficients")

    def __init__(self, level, coefficients=None):
        self.level = level
        coeffs = {}
        for x, v in (coefficients or {}).items():
            v = Fraction(v)
            if v:
                coeffs[x] = v
        self.coefficients = coeffs

    @classmethod
    def from_vector(cls, level, vec):
        return cls(level, dict(zip(cusps(level), vec)))

    def vector(self):
        return [self.coefficients.get(x, Fraction(0)) for x in cusps(self.level)]

    def int_vector(self):
        if not self.is_integral():
            raise ValueError("divisor is not integral")
        return [int(v) for v in self.vector()]

    def __getitem__(self, x):
        return self.coefficients.get(x, Fraction(0))

    def degree(self):
        return sum(self.coefficients.values(), Fraction(0))

    def is_integral(self):
        return all(v.denominator == 1 for v in self.coefficients.values())

    def is_zero(self):
        return not self.coefficients

    def __eq__(self, other):
        if not isinstance(other, CuspidalDivisor):
            return NotImplemented
        return self.level == other.level and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.level.N, frozenset(self.coefficients.items())))

    def __add__(self, other):
        self._check(other)
        out = dict(self.coefficients)
        for x, v in other.coefficients.items():
            out[x] = out.get(x, 0) + v
        return CuspidalDivisor(self.level, out)

    def __neg__(self):
        return CuspidalDivisor(self.level, {x: -v for x, v in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return CuspidalDivisor(self.level, {x: v * k for x, v in self.coefficients.items()})

    __rmul__ = __mul__

    def _check(self, other):
        if self.level != other.level:
            raise ValueError("divisors live on different levels")

    def galois(self, sigma):
        out = {}
        for x, v in self.coefficients.items():
            y = galois_apply(sigma, x, self.level)
            out[y] = out.get(y, 0) + v
        return CuspidalDivisor(self.level, out)

    def __repr__(self):
        terms = " + ".join(f"{v}*({x})" for x, v in sorted(self.coefficients.items()))
        return f"CuspidalDivisor(N={self.level.N}: {terms or '0'})"


def point_divisor(level, x, mult=1):
    return CuspidalDivisor(level, {x: mult})


def is_rational_divisor(D):
    """True iff D is fixed by every sigma_ell."""
    return all(D.galois(s) == D for s in galois_generators(D.level))


def orbit_sum(level, orbit):
    return CuspidalDivisor(level, {x: 1 for x in orbit})
