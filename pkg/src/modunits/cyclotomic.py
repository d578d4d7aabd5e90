"""Exact arithmetic in Q(zeta_24) and exact roots of unity.

Elements of Q(zeta_24) are stored in the power basis 1, z, ..., z^7 where
z = exp(2 pi i / 24) and z^8 = z^4 - 1.  Coordinates are ints or Fractions.
"""

import cmath
from fractions import Fraction
from math import gcd

CONDUCTOR = 24
DEGREE = 8
_ZETA = cmath.exp(2j * cmath.pi / CONDUCTOR)


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _reduce(coeffs):
    """Reduce a coefficient list of any length modulo x^8 - x^4 + 1."""
    c = list(coeffs)
    for i in range(len(c) - 1, DEGREE - 1, -1):
        t = c[i]
        if t:
            c[i - 4] += t
            c[i - 8] -= t
    c = c[:DEGREE]
    c += [0] * (DEGREE - len(c))
    return c


# _POW_TERMS[j] lists (coordinate, sign) pairs with z^j = sum sign * z^coordinate
_POW_TERMS = []
for _j in range(CONDUCTOR):
    _v = _reduce([0] * _j + [1])
    _POW_TERMS.append(tuple((i, s) for i, s in enumerate(_v) if s))

# _SHIFT[s] lists (src, dst, sign): z^s * z^src contributes sign * z^dst
_SHIFT = [
    tuple((src, dst, sign) for src in range(DEGREE) for dst, sign in _POW_TERMS[(src + s) % CONDUCTOR])
    for s in range(CONDUCTOR)
]


def rotate(coords, s):
    """Multiply a raw coordinate list by z^s."""
    s %= CONDUCTOR
    if s == 0:
        return list(coords)
    out = [0] * DEGREE
    for src, dst, sign in _SHIFT[s]:
        x = coords[src]
        if x:
            out[dst] += x if sign == 1 else -x
    return out


class CyclotomicInt:
    """An element of Q(zeta_24) in the power basis.

    Despite the name, coordinates may be rational: normalized series divide
    by leading coefficients.

    >>> CyclotomicInt.zeta(8).coords
    (-1, 0, 0, 0, 1, 0, 0, 0)
    """

    __slots__ = ("coords",)

    def __init__(self, coords=(0,) * DEGREE):
        coords = tuple(_normalize(x) for x in coords)
        if len(coords) > DEGREE:
            coords = tuple(_reduce(coords))
        elif len(coords) < DEGREE:
            coords = coords + (0,) * (DEGREE - len(coords))
        self.coords = coords

    @classmethod
    def from_int(cls, x):
        return cls((x,))

    @classmethod
    def zeta(cls, j=1):
        """z^j with z = exp(2 pi i / 24)."""
        c = [0] * DEGREE
        for i, s in _POW_TERMS[j % CONDUCTOR]:
            c[i] = s
        return cls(c)

    def __repr__(self):
        return f"CyclotomicInt({list(self.coords)})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.from_int(other)
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.from_int(other)
        return CyclotomicInt([a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt([-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicInt([a * other for a in self.coords])
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        prod = [0] * (2 * DEGREE - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicInt(_reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = CyclotomicInt.from_int(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def mul_zeta(self, s):
        """self * z^s, without a general multiplication."""
        return CyclotomicInt(rotate(self.coords, s))

    def galois(self, ell):
        """Apply sigma_ell: z -> z^ell, for ell prime to 24."""
        if gcd(ell, CONDUCTOR) != 1:
            raise ValueError(f"{ell} is not a unit modulo 24")
        out = [0] * DEGREE
        for i, a in enumerate(self.coords):
            if a:
                for k, s in _POW_TERMS[(i * ell) % CONDUCTOR]:
                    out[k] += s * a
        return CyclotomicInt(out)

    def to_complex(self):
        return sum(complex(a) * _ZETA**i for i, a in enumerate(self.coords) if a)

    __complex__ = to_complex


def cyc_embed_root(h, j):
    """exp(2 pi i j / h) as a CyclotomicInt; h must divide 24.

    >>> cyc_embed_root(2, 1).coords
    (-1, 0, 0, 0, 0, 0, 0, 0)
    """
    if h <= 0 or CONDUCTOR % h:
        raise ValueError(f"{h} does not divide 24")
    return CyclotomicInt.zeta(j * (CONDUCTOR // h))


def cyc_complex(x):
    return x.to_complex()


class RootOfUnity:
    """exp(2 pi i * exponent), exponent a rational in [0, 1) with denominator | 576."""

    __slots__ = ("exponent",)
    MODULUS = 576

    def __init__(self, exponent=0):
        e = Fraction(exponent) % 1
        if self.MODULUS % e.denominator:
            raise ValueError(f"denominator of {e} does not divide {self.MODULUS}")
        self.exponent = e

    @classmethod
    def zeta24(cls, j):
        return cls(Fraction(j, 24))

    def __repr__(self):
        return f"RootOfUnity({self.exponent})"

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self):
        return hash(self.exponent)

    def __mul__(self, other):
        return RootOfUnity(self.exponent + other.exponent)

    def __truediv__(self, other):
        return RootOfUnity(self.exponent - other.exponent)

    def __pow__(self, e):
        return RootOfUnity(self.exponent * e)

    def inverse(self):
        return RootOfUnity(-self.exponent)

    def is_one(self):
        return self.exponent == 0

    def order(self):
        return self.exponent.denominator

    def as_cyclotomic(self):
        j = self.exponent * CONDUCTOR
        if j.denominator != 1:
            raise ValueError(f"{self} is not a 24th root of unity")
        return CyclotomicInt.zeta(int(j))

    def to_complex(self):
        return cmath.exp(2j * cmath.pi * float(self.exponent))

    __complex__ = to_complex
