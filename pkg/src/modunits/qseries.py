"""Truncated q-expansions with coefficients in Q(zeta_24).

A QExpansion stands for  phase * q^offset * sum_{i=0}^{T} coeffs[i] q^i,
known modulo q^(offset + T + 1).
"""

import cmath
from fractions import Fraction

from .cyclotomic import DEGREE, CyclotomicInt, RootOfUnity, rotate


class QExpansion:
    __slots__ = ("offset", "phase", "coeffs", "truncation")

    def __init__(self, offset, phase, coeffs, truncation=None):
        self.offset = Fraction(offset)
        self.phase = phase if phase is not None else RootOfUnity(0)
        coeffs = [c if isinstance(c, CyclotomicInt) else CyclotomicInt(c) for c in coeffs]
        if truncation is None:
            truncation = len(coeffs) - 1
        self.coeffs = tuple(coeffs[: truncation + 1])
        self.truncation = truncation

    def __repr__(self):
        shown = ", ".join(str(list(c.coords)) for c in self.coeffs[:4])
        return f"QExpansion(q^{self.offset} * {self.phase}, [{shown}, ...] + O(q^{self.truncation + 1}))"

    def __len__(self):
        return len(self.coeffs)

    def leading_index(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __mul__(self, other):
        T = min(self.truncation, other.truncation)
        out = [[0] * DEGREE for _ in range(T + 1)]
        for i, a in enumerate(self.coeffs[: T + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: T + 1 - i]):
                if b:
                    prod = (a * b).coords
                    row = out[i + j]
                    for t in range(DEGREE):
                        row[t] += prod[t]
        return QExpansion(self.offset + other.offset, self.phase * other.phase, out, T)

    def is_proportional(self, other, terms=None):
        """True if the two series agree up to a nonzero constant, as far as both are known.

        The constant is allowed to absorb the phases; only the q-offsets and
        the coefficient ratios are compared.
        """
        T = min(self.truncation, other.truncation)
        if terms is not None:
            T = min(T, terms)
        i, j = self.leading_index(), other.leading_index()
        if i is None or j is None:
            return i is None and j is None
        if self.offset + i != other.offset + j:
            return False
        a0, b0 = self.coeffs[i], other.coeffs[j]
        for s in range(T + 1 - max(i, j)):
            a = self.coeffs[i + s]
            b = other.coeffs[j + s]
            if a * b0 != b * a0:
                return False
        return True

    def evaluate(self, tau):
        """Numeric value at tau (complex, Im tau > 0) from the known terms."""
        q = cmath.exp(2j * cmath.pi * tau)
        s = 0j
        qi = 1
        for c in self.coeffs:
            if c:
                s += c.to_complex() * qi
            qi *= q
        return self.phase.to_complex() * cmath.exp(2j * cmath.pi * tau * float(self.offset)) * s


def euler_product(factors, terms):
    """Coefficients of prod_(step, twist, e) prod_{l>=1} (1 - z^(twist*l) q^(step*l))^e.

    z = exp(2 pi i / 24).  Works on raw coordinate lists; returns a list of
    terms + 1 coordinate lists (exponents 0..terms).
    """
    f = [[0] * DEGREE for _ in range(terms + 1)]
    f[0][0] = 1
    for step, twist, e in factors:
        if e == 0:
            continue
        for _ in range(abs(e)):
            for ell in range(1, terms // step + 1):
                shift = step * ell
                rot = (twist * ell) % 24
                if e > 0:
                    # f <- f * (1 - z^rot q^shift): update from the top down
                    for n in range(terms, shift - 1, -1):
                        src = f[n - shift]
                        if any(src):
                            dst = f[n]
                            if rot == 0:
                                for t in range(DEGREE):
                                    dst[t] -= src[t]
                            else:
                                r = rotate(src, rot)
                                for t in range(DEGREE):
                                    dst[t] -= r[t]
                else:
                    # f <- f / (1 - z^rot q^shift): g[n] = f[n] + z^rot g[n - shift]
                    for n in range(shift, terms + 1):
                        src = f[n - shift]
                        if any(src):
                            dst = f[n]
                            if rot == 0:
                                for t in range(DEGREE):
                                    dst[t] += src[t]
                            else:
                                r = rotate(src, rot)
                                for t in range(DEGREE):
                                    dst[t] += r[t]
    return f


def eta_shift_qexp(factors, terms):
    """q-expansion of prod eta(d tau + x)^e for factors (d, x, e), x a rational shift.

    Each eta(d tau + x) = exp(2 pi i x / 24) q^(d/24) prod (1 - exp(2 pi i l x) q^(d l));
    the shift x must have denominator dividing 24.
    """
    offset = Fraction(0)
    phase = RootOfUnity(0)
    euler = []
    for d, x, e in factors:
        x = Fraction(x) % 1
        if 24 % x.denominator:
            raise ValueError(f"shift {x} does not have denominator dividing 24")
        offset += Fraction(d * e, 24)
        phase = phase * RootOfUnity(x / 24) ** e
        euler.append((d, int(x * 24), e))
    return QExpansion(offset, phase, euler_product(euler, terms), terms)


def log_coefficients(series, terms):
    """Coefficients L_1..L_terms of log(F) for a series F with F_0 = 1 (Fraction coords)."""
    F = [list(c.coords) for c in series.coeffs[: terms + 1]]
    if F[0] != [1] + [0] * (DEGREE - 1):
        raise ValueError("log needs constant term 1")
    L = [None] + [CyclotomicInt() for _ in range(terms)]
    Fc = [CyclotomicInt(c) for c in F]
    for n in range(1, terms + 1):
        acc = Fc[n] * n
        for i in range(1, n):
            if L[i] and Fc[n - i]:
                acc = acc - (L[i] * i) * Fc[n - i]
        L[n] = acc * Fraction(1, n)
    return L
