"""Generalized eta functions eta_{m,k}(tau) = eta(m tau + k/h(m)) on X_0(N).

Covers the label catalog, orders at cusps, exact multipliers, q-expansions
and the rewriting of arbitrary labels into the canonical index set
0 <= k < phi(h(m)).
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import arith
from .curve import CuspidalDivisor, cusps
from .cyclotomic import RootOfUnity
from .linalg import solve_integer
from .qseries import eta_shift_qexp


@dataclass(frozen=True, order=True)
class EtaLabel:
    m: int
    k: int
    h: int

    @property
    def shift(self):
        return Fraction(self.k, self.h)

    def is_canonical(self):
        return self.k < arith.euler_phi(self.h)

    def __str__(self):
        return f"eta({self.m}t+{self.k}/{self.h})" if self.k else f"eta({self.m}t)"


def h_of(level, m):
    """Largest h with m h^2 | N.

    >>> from modunits.curve import level_new
    >>> h_of(level_new(48), 1), h_of(level_new(48), 2)
    (4, 2)
    """
    if m < 1 or level.N % m:
        raise ValueError(f"{m} does not divide N = {level.N}")
    h = arith.square_part(level.N // m)
    if level.n % h:
        raise AssertionError(f"h({m}) = {h} does not divide n = {level.n}")
    return h


def label(level, m, k=0):
    h = h_of(level, m)
    return EtaLabel(m, k % h, h)


def shift_label(level, m, x):
    """Label of eta(m tau + x) for a rational shift x."""
    h = h_of(level, m)
    k = Fraction(x) * h
    if k.denominator != 1:
        raise ValueError(f"eta({m}t + {x}) is not in the catalog of level {level.N}")
    return EtaLabel(m, int(k) % h, h)


@lru_cache(maxsize=None)
def all_labels(level):
    return tuple(EtaLabel(m, k, h) for m in level.divisors for h in [h_of(level, m)] for k in range(h))


@lru_cache(maxsize=None)
def canonical_labels(level):
    return tuple(lab for lab in all_labels(level) if lab.is_canonical())


def pair_count(level):
    """sum over h | n of phi(h) 2^omega(N/h^2): the size of the canonical catalog."""
    return sum(
        arith.euler_phi(h) * 2 ** arith.omega(level.N // (h * h))
        for h in arith.divisors(level.n)
    )


def eta_order_at_cusp(level, lab, x):
    """Order of eta_{m,k} at the cusp a/c in the local parameter.

    With a'/c' the reduced form of (m h a + k c)/(h c), the order is
    c N / (24 m c'^2 gcd(c, N/c)).
    """
    N, c, a = level.N, x.c, x.numerator
    num = lab.m * lab.h * a + lab.k * c
    den = lab.h * c
    c1 = den // gcd(num, den)
    return Fraction(c * N, 24 * lab.m * c1 * c1 * gcd(c, N // c))


@lru_cache(maxsize=None)
def _divisor_vector(level, lab):
    return tuple(eta_order_at_cusp(level, lab, x) for x in cusps(level))


def eta_divisor(level, lab):
    return CuspidalDivisor.from_vector(level, _divisor_vector(level, lab))


def divisor_vector(level, lab):
    return _divisor_vector(level, lab)


# --- multipliers ---------------------------------------------------------


@dataclass(frozen=True)
class MatrixSL2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"{self} does not have determinant 1")

    def __matmul__(self, o):
        return MatrixSL2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def normalized(self):
        """The one of +-gamma with c > 0, or c = 0 and d = 1."""
        if self.c < 0 or (self.c == 0 and self.d < 0):
            return MatrixSL2(-self.a, -self.b, -self.c, -self.d)
        return self

    def in_gamma0(self, N):
        return self.c % N == 0

    def act(self, tau):
        return (self.a * tau + self.b) / (self.c * tau + self.d)


def _kronecker_odd(a, b):
    """(a|b) for odd b of either sign, taken as (a| |b|)."""
    return arith.jacobi(a, abs(b))


def epsilon(gamma):
    """Exact root of unity in eta(gamma tau) = eps * sqrt((c tau + d)/i) * eta(tau).

    gamma is first replaced by -gamma if needed so that c > 0 (or c = 0, d = 1);
    the square root is the principal branch for that normalized matrix.
    Returns a 24th root of unity.
    """
    g = gamma.normalized()
    a, b, c, d = g.a, g.b, g.c, g.d
    if c == 0:
        return RootOfUnity.zeta24(b)
    if c % 2:
        j = 3 * (1 - c) + b * d * (1 - c * c) + c * (a + d)
        sym = arith.jacobi(d, c)
    elif d % 2:
        j = a * c * (1 - d * d) + d * (b - c + 3)
        sym = _kronecker_odd(c, d)
    else:
        raise ValueError("c and d cannot both be even")
    if sym == -1:
        j += 12
    return RootOfUnity.zeta24(j % 24)


def conjugated_matrix(lab, gamma):
    """sigma gamma sigma^-1 for sigma = (m h, k; 0, h), entries checked integral."""
    m, k, h = lab.m, lab.k, lab.h
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    entries = (
        a + Fraction(k * c, h * m),
        Fraction(k * (d - a), h) + b * m - Fraction(k * k * c, h * h * m),
        Fraction(c, m),
        d - Fraction(k * c, h * m),
    )
    if any(e.denominator != 1 for e in entries):
        raise AssertionError(f"conjugate of {gamma} by {lab} is not integral")
    return MatrixSL2(*(int(e) for e in entries))


def eta_multiplier(level, lab, gamma):
    """Exact mu with eta_{m,k}(gamma tau) = mu sqrt((c tau + d)/i) eta_{m,k}(tau).

    gamma must lie in Gamma_0(N); it is normalized as in `epsilon`.
    """
    if not gamma.in_gamma0(level.N):
        raise ValueError(f"{gamma} is not in Gamma_0({level.N})")
    g = gamma.normalized()
    if g.c == 0:
        return RootOfUnity.zeta24(g.b * lab.m)
    return epsilon(conjugated_matrix(lab, g))


# --- q-expansions ----------------------------------------------------------


@lru_cache(maxsize=512)
def eta_qexp(lab, terms):
    """q-expansion of eta(m tau + k/h) through q^(m/24 + terms)."""
    return eta_shift_qexp([(lab.m, lab.shift, 1)], terms)


def vector_qexp(vector, terms):
    return eta_shift_qexp([(lab.m, lab.shift, e) for lab, e in vector.items()], terms)


# --- exponent vectors ------------------------------------------------------


class ExponentVector:
    """Integer exponents e_{m,k} on labels of one level: the function prod eta_{m,k}^e."""

    __slots__ = ("level", "entries")

    def __init__(self, level, entries=None):
        self.level = level
        clean = {}
        for lab, e in (entries or {}).items():
            if not isinstance(lab, EtaLabel):
                lab = label(level, *lab)
            elif lab.h != h_of(level, lab.m) or not 0 <= lab.k < lab.h:
                raise ValueError(f"{lab} is not a label of level {level.N}")
            e = int(e)
            if e:
                clean[lab] = clean.get(lab, 0) + e
        self.entries = {lab: e for lab, e in sorted(clean.items()) if e}

    @classmethod
    def from_labels(cls, level, labels, coeffs):
        return cls(level, dict(zip(labels, coeffs)))

    def items(self):
        return self.entries.items()

    def __getitem__(self, lab):
        return self.entries.get(lab, 0)

    def __len__(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def coords(self, labels):
        return [self.entries.get(lab, 0) for lab in labels]

    def __eq__(self, other):
        if not isinstance(other, ExponentVector):
            return NotImplemented
        return self.level == other.level and self.entries == other.entries

    def __hash__(self):
        return hash((self.level.N, frozenset(self.entries.items())))

    def __add__(self, other):
        if self.level != other.level:
            raise ValueError("vectors live on different levels")
        out = Counter(self.entries)
        out.update(other.entries)
        return ExponentVector(self.level, out)

    def __neg__(self):
        return ExponentVector(self.level, {lab: -e for lab, e in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, t):
        return ExponentVector(self.level, {lab: t * e for lab, e in self.entries.items()})

    __rmul__ = __mul__

    def __repr__(self):
        body = ", ".join(f"({lab.m},{lab.k}):{e}" for lab, e in self.entries.items())
        return f"ExponentVector(N={self.level.N}, {{{body}}})"

    def weight_sum(self):
        return sum(self.entries.values())

    def galois(self, ell):
        """f^{sigma_ell}: eta_{m,k} -> eta_{m, ell k}."""
        return ExponentVector(
            self.level, {EtaLabel(lab.m, (ell * lab.k) % lab.h, lab.h): e for lab, e in self.entries.items()}
        )


def vector_divisor(vector):
    level = vector.level
    out = [Fraction(0)] * len(cusps(level))
    for lab, e in vector.items():
        for i, v in enumerate(_divisor_vector(level, lab)):
            out[i] += e * v
    return CuspidalDivisor.from_vector(level, out)


# --- rewriting to canonical labels -----------------------------------------

# cyclotomic polynomials Phi_h for h | 24, lowest degree first
_CYCLOTOMIC = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
    24: (1, 0, 0, 0, -1, 0, 0, 0, 1),
}


def _reduce_power(h, k):
    """Coefficients of t^k modulo Phi_h(t), degree < phi(h)."""
    phi = _CYCLOTOMIC[h]
    deg = len(phi) - 1
    poly = [0] * (k + 1)
    poly[k] = 1
    for i in range(k, deg - 1, -1):
        t = poly[i]
        if t:
            for j, c in enumerate(phi):
                poly[i - deg + j] -= t * c
    return poly[:deg] + [0] * (deg - len(poly[:deg]))


@lru_cache(maxsize=None)
def _distribution_coefficients(h, k):
    """Integers a_j (j < phi(h)) and c_{p,k0} with

        t^k = sum a_j t^j + sum c_{p,k0} t^k0 (1 + t^(h/p) + ... + t^((p-1)h/p))

    in Z[t]/(t^h - 1), p running over primes dividing h.
    """
    a = _reduce_power(h, k)
    primes = arith.prime_divisors(h)
    columns = [(p, k0) for p in primes for k0 in range(h)]
    A = [[0] * len(columns) for _ in range(h)]
    for col, (p, k0) in enumerate(columns):
        for j in range(p):
            A[(k0 + j * (h // p)) % h][col] += 1
    rhs = [0] * h
    rhs[k] += 1
    for j, aj in enumerate(a):
        rhs[j] -= aj
    sol = solve_integer(A, rhs)
    if sol is None:
        raise AssertionError(f"no distribution relation reduces t^{k} modulo Phi_{h}")
    return tuple(a), tuple((p, k0, c) for (p, k0), c in zip(columns, sol) if c)


def rewrite_to_canonical(level, lab):
    """ExponentVector on canonical labels equal to eta_{m,k} up to a constant.

    Uses only the distribution relations
        prod_{j mod p} eta(y + j/p) = const * eta(p y)^(p+1) / eta(p^2 y),  p = 2, 3,
    i.e. the half-shift and third-shift identities, applied with y = m tau + k0/h.
    Every application moves the leftover factors to the larger indices p m, p^2 m,
    so the recursion terminates.
    """
    return ExponentVector(level, dict(_rewrite(level, lab)))


@lru_cache(maxsize=None)
def _rewrite(level, lab):
    h = lab.h
    if lab.is_canonical():
        return ((lab, 1),)
    out = Counter()
    a, rels = _distribution_coefficients(h, lab.k)
    for j, aj in enumerate(a):
        if aj:
            out[EtaLabel(lab.m, j, h)] += aj
    for p, k0, c in rels:
        x = Fraction(k0, h)
        up = shift_label(level, p * lab.m, p * x)
        up2 = shift_label(level, p * p * lab.m, p * p * x)
        for sub, e in _rewrite(level, up):
            out[sub] += c * (p + 1) * e
        for sub, e in _rewrite(level, up2):
            out[sub] -= c * e
    return tuple((k, v) for k, v in sorted(out.items()) if v)


def canonicalize_vector(vector):
    """Rewrite every label of `vector` onto canonical labels."""
    out = Counter()
    for lab, e in vector.items():
        for sub, f in _rewrite(vector.level, lab):
            out[sub] += e * f
    return ExponentVector(vector.level, out)


def galois_divisor_check(level, lab, sigma):
    """(div eta_{m,k})^sigma == div eta_{m, ell k}."""
    img = eta_divisor(level, lab).galois(sigma)
    twisted = EtaLabel(lab.m, (sigma.ell * lab.k) % lab.h, lab.h)
    return img == eta_divisor(level, twisted)

