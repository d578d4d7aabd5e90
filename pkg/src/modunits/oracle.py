"""Floating-point evaluation of eta and numeric modularity checks.

This path shares no code with the exact multiplier computation: eta is
evaluated by moving tau into the standard fundamental domain with the two
classical rules eta(tau + 1) = e(1/24) eta(tau) and eta(-1/tau) =
sqrt(tau/i) eta(tau), then summing Euler's pentagonal series.
"""

import cmath
import math
import random
from fractions import Fraction

from .arith import xgcd
from .eta import MatrixSL2

_TWO_PI_I = 2j * math.pi
_E24 = cmath.exp(_TWO_PI_I / 24)


def _pentagonal_sum(q, terms):
    s = 1 + 0j
    for n in range(1, terms):
        sign = -1 if n % 2 else 1
        s += sign * (q ** (n * (3 * n - 1) // 2) + q ** (n * (3 * n + 1) // 2))
    return s


def eta_series(tau, terms=60):
    """eta(tau) = q^(1/24) sum_n (-1)^n q^(n(3n-1)/2), summed directly."""
    q = cmath.exp(_TWO_PI_I * tau)
    return cmath.exp(_TWO_PI_I * tau / 24) * _pentagonal_sum(q, terms)


def _log_eta_moebius(p, q, r, s, tau, terms=40):
    """A logarithm of eta at the point (p tau + q)/(r tau + s), p s - q r > 0.

    The reduction to the fundamental domain is tracked on the integer matrix,
    and every intermediate point is recomputed from tau itself.  Points very
    close to the real line (such as m gamma tau for large c) would otherwise
    lose their precision before the reduction starts.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"{tau} is not in the upper half-plane")
    if p * s - q * r <= 0:
        raise ValueError("matrix must have positive determinant")
    log_factor = 0j
    for _ in range(10_000):
        z = (p * tau + q) / (r * tau + s)
        b = math.floor(z.real + 0.5)
        if b:
            # eta(z) = e(b/24) eta(z - b)
            log_factor += _TWO_PI_I * b / 24
            p, q = p - b * r, q - b * s
            z = (p * tau + q) / (r * tau + s)
        if abs(z) < 1 - 1e-15:
            # eta(z) = eta(-1/z) / sqrt(z/i)
            log_factor -= cmath.log(z / 1j) / 2
            p, q, r, s = -r, -s, p, q
        else:
            break
    else:
        raise RuntimeError("fundamental-domain reduction did not terminate")
    z = (p * tau + q) / (r * tau + s)
    qz = cmath.exp(_TWO_PI_I * z)
    return log_factor + _TWO_PI_I * z / 24 + cmath.log(_pentagonal_sum(qz, terms))


def log_eta_eval(tau, terms=40):
    """A logarithm of eta(tau), Im(tau) > 0, via reduction to the fundamental domain.

    Working with logarithms keeps points close to the real line usable: their
    reduced images have huge imaginary part and eta itself would underflow.
    """
    return _log_eta_moebius(1, 0, 0, 1, tau, terms)


def eta_eval(tau, terms=40):
    """eta(tau) for Im(tau) > 0."""
    return cmath.exp(log_eta_eval(tau, terms))


def log_eta_shift(m, shift, tau, gamma=None):
    """A logarithm of eta(m gamma(tau) + shift); gamma defaults to the identity."""
    a, b, c, d = (1, 0, 0, 1) if gamma is None else (gamma.a, gamma.b, gamma.c, gamma.d)
    x = Fraction(shift)
    k, h = x.numerator, x.denominator
    # m (a t + b)/(c t + d) + k/h = ((m h a + k c) t + (m h b + k d)) / (h c t + h d)
    p, q, r, s = m * h * a + k * c, m * h * b + k * d, h * c, h * d
    if r < 0 or (r == 0 and s < 0):
        p, q, r, s = -p, -q, -r, -s
    return _log_eta_moebius(p, q, r, s, tau)


def eta_shift_eval(m, shift, tau, gamma=None):
    return cmath.exp(log_eta_shift(m, shift, tau, gamma))


def vector_eval(vector, tau):
    value = 1 + 0j
    for lab, e in vector.items():
        value *= eta_shift_eval(lab.m, lab.shift, tau) ** e
    return value


def vector_log_ratio(vector, tau, gamma):
    """log f(gamma tau) - log f(tau) for the eta product f, up to 2 pi i Z."""
    total = 0j
    for lab, e in vector.items():
        total += e * (log_eta_shift(lab.m, lab.shift, tau, gamma) - log_eta_shift(lab.m, lab.shift, tau))
    return total


def random_sl2(rng, bound=50):
    """Random element of SL(2, Z) with |c|, |d| <= bound and c != 0."""
    while True:
        c = rng.randint(-bound, bound)
        d = rng.randint(-bound, bound)
        if c == 0:
            continue
        g, x, y = xgcd(d, -c)
        if g != 1:
            continue
        # x d - y c = 1, so (x, y; c, d) has determinant 1
        a, b = x, y
        t = rng.randint(-2, 2)
        return MatrixSL2(a + t * c, b + t * d, c, d)


def random_gamma0(rng, N, tbound=5, dbound=None):
    """Random element of Gamma_0(N): c = N t with |t| <= tbound, d prime to c."""
    dbound = dbound or max(50, 2 * N)
    while True:
        t = rng.randint(-tbound, tbound)
        c = N * t
        d = rng.randint(-dbound, dbound)
        if d == 0:
            continue
        if c == 0:
            if d not in (1, -1):
                continue
            return MatrixSL2(d, rng.randint(-10, 10) * d, 0, d)
        g, x, y = xgcd(d, -c)
        if g != 1:
            continue
        return MatrixSL2(x, y, c, d)


def random_tau(rng, im_range=(0.5, 2.0)):
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(*im_range))


def _automorphy(g, tau):
    # translations (c = 0) carry no square-root factor: eta(tau + b) = e(b/24) eta(tau)
    return cmath.sqrt((g.c * tau + g.d) / 1j) if g.c else 1


def multiplier_ratio(gamma, tau):
    """eta(gamma tau) / (sqrt((c tau + d)/i) eta(tau)) for the normalized gamma."""
    g = gamma.normalized()
    return eta_shift_eval(1, 0, tau, g) / (_automorphy(g, tau) * eta_eval(tau))


def label_multiplier_ratio(lab, gamma, tau):
    g = gamma.normalized()
    return eta_shift_eval(lab.m, lab.shift, tau, g) / (_automorphy(g, tau) * eta_shift_eval(lab.m, lab.shift, tau))


def modularity_check_numeric(vector, trials=50, tolerance=1e-8, seed=0, max_retries=20):
    """True iff |f(gamma tau)/f(tau) - 1| < tolerance for `trials` random gamma in Gamma_0(N).

    f is the weight-0 eta product described by `vector`; gamma has c = N t with
    |t| <= 5 and a random d prime to c.
    """
    if vector.weight_sum() != 0:
        raise ValueError("numeric modularity check needs a weight-0 product")
    rng = random.Random(seed)
    N = vector.level.N
    for _ in range(trials):
        gamma = random_gamma0(rng, N)
        for _attempt in range(max_retries):
            tau = random_tau(rng, (0.5, 1.5))
            try:
                log_ratio = vector_log_ratio(vector, tau, gamma)
            except (ValueError, ZeroDivisionError, OverflowError):
                continue
            if math.isfinite(log_ratio.real) and math.isfinite(log_ratio.imag):
                break
        else:
            raise RuntimeError("could not find a nondegenerate sample point")
        if abs(cmath.exp(log_ratio) - 1) >= tolerance:
            return False
    return True


def series_identity_numeric(lhs, rhs, rng, points=20, tolerance=1e-9):
    """Check that lhs(tau)/rhs(tau) is constant at random tau; lhs, rhs are callables."""
    ratios = []
    for _ in range(points):
        tau = random_tau(rng, (0.6, 1.5))
        ratios.append(lhs(tau) / rhs(tau))
    r0 = ratios[0]
    return all(abs(r / r0 - 1) < tolerance for r in ratios)
