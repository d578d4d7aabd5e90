"""The cuspidal class group C(N), its rational subgroups and rationalization.

C(N) is presented as degree-0 cuspidal divisors modulo divisors of units.
With R the matrix of unit divisors in the basis (x) - (oo) and U R V = D its
Smith form, the class of a divisor with coordinates x is U x taken modulo the
invariant factors.  Only the coordinates with d_i > 1 are kept.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import arith
from .curve import (
    cusps,
    galois_apply,
    galois_generators,
    infinity,
    is_rational_divisor,
)
from .eta import ExponentVector, canonical_labels, shift_label, vector_divisor
from .linalg import congruence_lattice, hnf_modular, smith_normal_form_with_inverse, solve_integer, transpose
from .units import (
    check_theorem1,
    degree0_coordinates,
    divisor_from_degree0,
    is_principal,
    presentation,
    rational_degree0_basis,
    theorem1_defects,
    unit_basis,
)

log = logging.getLogger(__name__)


class NotGaloisInvariant(ValueError):
    pass


class TheoremViolation(AssertionError):
    """An internal check that should hold for every valid level failed."""


def _lcm_all(xs):
    out = 1
    for x in xs:
        out = arith.lcm(out, x)
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """A finite abelian group given by invariant factors d_1 | d_2 | ...

    `generators` are coordinate vectors in the ambient class group, one per
    invariant factor; for C(N) itself they are the unit vectors.
    """

    invariant_factors: tuple
    generators: tuple = field(default=(), compare=False)

    @property
    def order(self):
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_cyclic(self):
        return len(self.invariant_factors) <= 1


@dataclass(frozen=True)
class CuspidalClassGroup:
    level: object
    moduli: tuple  # nontrivial invariant factors
    rows: tuple  # rows of U for the nontrivial coordinates, reduced
    lift: tuple  # columns of U^-1 for the nontrivial coordinates, reduced mod exponent

    @property
    def group(self):
        k = len(self.moduli)
        gens = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        return AbelianGroup(self.moduli, gens)

    @property
    def invariant_factors(self):
        return self.moduli

    @property
    def order(self):
        return self.group.order

    @property
    def exponent(self):
        return _lcm_all(self.moduli)

    def coordinates(self, D):
        """Class of an integral degree-0 divisor in Z/d_1 x ... x Z/d_k."""
        x = degree0_coordinates(D)
        return tuple(sum(u * v for u, v in zip(row, x)) % d for row, d in zip(self.rows, self.moduli))

    def reduce(self, y):
        return tuple(v % d for v, d in zip(y, self.moduli))

    def divisor(self, y):
        """A divisor representing the class with coordinates y."""
        e = self.exponent
        x = [sum(col[i] * v for col, v in zip(self.lift, y)) % e for i in range(len(presentation(self.level).index))]
        return divisor_from_degree0(self.level, x)

    def element_order(self, y):
        return _lcm_all(d // gcd(v, d) for v, d in zip(y, self.moduli))

    def class_order(self, D):
        return self.element_order(self.coordinates(D))

    def galois_matrix(self, sigma):
        """Matrix of sigma on the coordinates (entries of row i reduced mod d_i)."""
        level = self.level
        pres = presentation(level)
        cs = cusps(level)
        where = {i: t for t, i in enumerate(pres.index)}
        perm = [where[cs.index(galois_apply(sigma, cs[i], level))] for i in pres.index]
        cols = []
        for col in self.lift:
            moved = [0] * len(col)
            for a, v in enumerate(col):
                moved[perm[a]] += v
            cols.append([sum(u * v for u, v in zip(row, moved)) % d for row, d in zip(self.rows, self.moduli)])
        A = transpose(cols) if cols else []
        # the action must preserve the relations: A (d_j e_j) = 0 mod d_i
        for i, di in enumerate(self.moduli):
            for j, dj in enumerate(self.moduli):
                if (A[i][j] * dj) % di:
                    raise TheoremViolation("Galois action does not preserve principal divisors")
        return A


@lru_cache(maxsize=None)
def class_group(level):
    """C(N) with its coordinate map.

    >>> from modunits.curve import level_new
    >>> class_group(level_new(11)).invariant_factors
    (5,)
    """
    pres = presentation(level)
    keep = [i for i, d in enumerate(pres.D) if d > 1]
    moduli = tuple(pres.D[i] for i in keep)
    e = _lcm_all(moduli)
    rows = tuple(tuple(u % pres.D[i] for u in pres.U[i]) for i in keep)
    lift = tuple(tuple(row[i] % e for row in pres.U_inv) for i in keep)
    return CuspidalClassGroup(level, moduli, rows, lift)


def _subgroup_from_lattice(moduli, basis):
    """Invariant factors and generators of L / D Z^k for an HNF basis of L containing D Z^k."""
    k = len(moduli)
    if k == 0:
        return AbelianGroup(())
    # rows of M express d_i e_i in the basis: M B = D, B upper triangular
    M = []
    for i, d in enumerate(moduli):
        target = [0] * k
        target[i] = d
        m = [0] * k
        for j in range(k):
            rest = target[j] - sum(m[l] * basis[l][j] for l in range(j))
            if rest % basis[j][j]:
                raise AssertionError("lattice does not contain the relations")
            m[j] = rest // basis[j][j]
        M.append(m)
    # U' M^T V' = S, so with W = (U'^-1)^T the rows of W B generate L / D Z^k diagonally
    _, S, _, Ui = smith_normal_form_with_inverse(transpose(M))
    factors, gens = [], []
    for i in range(k):
        s = S[i][i]
        if s > 1:
            w = [Ui[j][i] for j in range(k)]
            g = [sum(w[l] * basis[l][t] for l in range(k)) % moduli[t] for t in range(k)]
            factors.append(s)
            gens.append(tuple(g))
    return AbelianGroup(tuple(factors), tuple(gens))


def subgroup_generated(G, vectors):
    """Subgroup of the class group G generated by coordinate vectors."""
    k = len(G.moduli)
    if k == 0:
        return AbelianGroup(())
    rels = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(G.moduli)]
    basis = hnf_modular(list(vectors) + rels, G.exponent, k)
    return _subgroup_from_lattice(G.moduli, basis)


@lru_cache(maxsize=None)
def class_group_rational(level):
    """C_Q(N): generated by the classes of rational degree-0 divisors."""
    G = class_group(level)
    gens = [G.coordinates(divisor_from_degree0(level, x)) for x in rational_degree0_basis(level)]
    return subgroup_generated(G, gens)


@lru_cache(maxsize=None)
def class_group_fixed(level):
    """C(N)(Q): classes fixed by every sigma_ell."""
    G = class_group(level)
    k = len(G.moduli)
    if k == 0:
        return AbelianGroup(())
    rows, mods = [], []
    for sigma in galois_generators(level):
        A = G.galois_matrix(sigma)
        for i, d in enumerate(G.moduli):
            rows.append([A[i][j] - int(i == j) for j in range(k)])
            mods.append(d)
    basis = congruence_lattice(rows, mods, k)
    # make sure the relations are inside (they are, when the action is well defined)
    rels = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(G.moduli)]
    basis = hnf_modular(basis + rels, G.exponent, k)
    return _subgroup_from_lattice(G.moduli, basis)


def fixed_generator_divisors(level):
    """Divisor representatives of the generators of C(N)(Q)."""
    G = class_group(level)
    return [G.divisor(g) for g in class_group_fixed(level).generators]


def is_fixed(G, y, sigmas=None):
    for sigma in sigmas if sigmas is not None else galois_generators(G.level):
        A = G.galois_matrix(sigma)
        if G.reduce([sum(a * v for a, v in zip(row, y)) for row in A]) != G.reduce(y):
            return False
    return True


@dataclass(frozen=True)
class Theorem3Report:
    level: object
    C: tuple
    C_Q: tuple
    C_fixed: tuple
    order_Q: int
    order_fixed: int

    @property
    def equal(self):
        return self.order_Q == self.order_fixed


def verify_theorem3(level):
    """Compare C_Q(N) and C(N)(Q); the inclusion is checked on generators."""
    G = class_group(level)
    CQ = class_group_rational(level)
    CF = class_group_fixed(level)
    sigmas = galois_generators(level)
    for y in CQ.generators:
        if not is_fixed(G, y, sigmas):
            raise TheoremViolation(f"rational class {y} of level {level.N} is not Galois-fixed")
    if CF.order % CQ.order:
        raise TheoremViolation("order of C_Q does not divide the order of the fixed subgroup")
    return Theorem3Report(level, G.invariant_factors, CQ.invariant_factors, CF.invariant_factors, CQ.order, CF.order)


# --- rationalization ---------------------------------------------------------

CORRECTION = {(1, 0): 2, (4, 0): 7, (2, 0): -7, (8, 0): -2}


@dataclass(frozen=True)
class Rationalization:
    divisor: object  # D'
    unit: object  # g with D - D' = div g
    order: int  # order r of [D]
    corrected: bool  # the correction factor was used
    fallback: bool  # the generic lattice search was used


def _expand_shift(m, x):
    """eta(m tau + x) ~ prod eta(d tau + y)^e with y in {0, 1/2}; returns {(d, y): e}.

    Applies the two integral-order blocks recursively: for 3 | den(x)
        eta(m t + x) ~ eta(m t + 3x)^4 eta(9m t + 3x) / eta(3m t + 3x)^4,
    and for 4 | den(x)
        eta(m t + x) ~ eta(2m t + 4x)^3 eta(8m t + 4x)^3 / (eta(m t + 4x) eta(4m t + 4x)^3 eta(16m t + 4x)),
    where "~" means the quotient has weight 0 and integral orders at oo and 0.
    """
    x = Fraction(x) % 1
    H = x.denominator
    if H <= 2:
        return {(m, x): 1}
    y = (x * 3) % 1 if H % 3 == 0 else (x * 4) % 1
    if H % 3 == 0:
        parts = [(m, 4), (9 * m, 1), (3 * m, -4)]
    elif H % 4 == 0:
        parts = [(2 * m, 3), (8 * m, 3), (m, -1), (4 * m, -3), (16 * m, -1)]
    else:
        raise AssertionError(f"shift {x} has denominator outside the catalog")
    out = {}
    for d, e in parts:
        for key, f in _expand_shift(d, y).items():
            out[key] = out.get(key, 0) + e * f
    return {key: v for key, v in out.items() if v}


def _block_vector(level, m, x):
    """The single-step block eta(m t + x) / (its one-step replacement) as a vector."""
    H = Fraction(x).denominator
    if H % 3 == 0:
        y = (3 * Fraction(x)) % 1
        parts = {(m, x): 1, (3 * m, y): 4, (m, y): -4, (9 * m, y): -1}
    else:
        y = (4 * Fraction(x)) % 1
        parts = {(m, x): 1, (m, y): 1, (4 * m, y): 3, (16 * m, y): 1, (2 * m, y): -3, (8 * m, y): -3}
    entries = {}
    for (d, s), e in parts.items():
        lab = shift_label(level, d, s)
        entries[lab] = entries.get(lab, 0) + e
    return ExponentVector(level, entries)


def _check_blocks(level, m, x):
    """Assert the order computation of each block used to expand eta(m t + x)."""
    x = Fraction(x) % 1
    H = x.denominator
    if H <= 2:
        return
    v = _block_vector(level, m, x)
    D = vector_divisor(v)
    oo, zero = infinity(level), cusps(level)[0]
    expected0 = Fraction(-level.N, m * H * H) if H % 3 == 0 else Fraction(0)
    if v.weight_sum() != 0 or D[oo] != 0 or D[zero] != expected0:
        raise TheoremViolation(f"block for eta({m}t+{x}) has orders {D[oo]}, {D[zero]}")
    y = (x * 3) % 1 if H % 3 == 0 else (x * 4) % 1
    ms = [m, 3 * m, 9 * m] if H % 3 == 0 else [m, 2 * m, 4 * m, 8 * m, 16 * m]
    for d in ms:
        _check_blocks(level, d, y)


def eta_tilde(level, lab):
    """The replacement of eta_{m,k} by eta(d t) and eta(d t + 1/2) factors."""
    _check_blocks(level, lab.m, lab.shift)
    entries = {}
    for (d, y), e in _expand_shift(lab.m, lab.shift).items():
        l2 = shift_label(level, d, y)
        entries[l2] = entries.get(l2, 0) + e
    return ExponentVector(level, entries)


def _case_congruences(level, eprime):
    """The congruences on e' forced by (f^sigma / f)^(1/r) being a unit, in each case's own form."""
    n = level.n
    items = [(lab, e) for lab, e in eprime.items()]
    if n == 3:
        ok = sum(e for lab, e in items if lab.k == 1) % 3 == 0
    elif n == 6:
        ok = (-2 * sum(e for lab, e in items if lab.h == 6) + 2 * sum(e for lab, e in items if lab.h == 3)) % 6 == 0
    elif n == 4:
        ok = sum(e for lab, e in items if lab.h == 4 and lab.k == 1) % 2 == 0
    elif n == 8:
        s8 = sum({1: 6, 2: 4, 3: 2}[lab.k] * e for lab, e in items if lab.h == 8)
        s4 = 4 * sum(e for lab, e in items if lab.h == 4)
        ok = (s8 + s4) % 8 == 0
    elif n in (12, 24):
        ok = (2 * sum((n // lab.h) * lab.k * e for lab, e in items)) % n == 0
    else:
        ok = not items
    # the uniform version: -2 sum e' k n/h = 0 mod n
    uniform = (-2 * sum(lab.k * (n // lab.h) * e for lab, e in items)) % n == 0 if n % 2 == 0 else ok
    if ok != uniform:
        raise TheoremViolation("case congruence and its uniform form disagree")
    return ok


def _fallback(D):
    """Generic search: a unit g and a rational D' with D = D' + div g."""
    level = D.level
    pres = presentation(level)
    lattice = unit_basis(level)
    W = rational_degree0_basis(level)
    R = [[lattice.divisor_matrix[i][j] for j in range(lattice.rank)] for i in pres.index]
    A = [list(R[i]) + [w[i] for w in W] for i in range(len(pres.index))]
    sol = solve_integer(A, degree0_coordinates(D))
    if sol is None:
        raise TheoremViolation("no rational divisor is equivalent to D")
    g = lattice.vector(sol[: lattice.rank])
    return g


def rationalize(D):
    """A rational cuspidal divisor D' with D - D' principal.

    D must be integral of degree 0 with a Galois-invariant class.  Follows the
    explicit construction: with r the order of [D] and div f = r D,
    g = prod (eta_{m,k} / eta~_{m,k})^(e_{m,k}/r) over k != 0, possibly times
    eta(t)^2 eta(4t)^7 / (eta(2t)^7 eta(8t)^2), and D' = D - div g.
    """
    level = D.level
    G = class_group(level)
    y = G.coordinates(D)
    for sigma in galois_generators(level):
        if G.coordinates(D.galois(sigma) - D) != G.reduce([0] * len(y)):
            raise NotGaloisInvariant("class not Galois-invariant")
    if is_rational_divisor(D):
        return Rationalization(D, ExponentVector(level), G.element_order(y), False, False)
    r = G.element_order(y)
    f = is_principal(D * r)
    if f is None:
        raise TheoremViolation(f"r D is not principal for r = {r}")
    eprime = {}
    for lab in canonical_labels(level):
        if lab.k == 0:
            continue
        e = f[lab]
        if e % r:
            raise TheoremViolation(f"divisibility r = {r} does not divide e = {e} at {lab}")
        if e:
            eprime[lab] = e // r
    ev = ExponentVector(level, eprime)
    # (f^{sigma_-1} / f)^(1/r) must itself be a unit
    twisted = ev.galois(-1) - ev
    if not check_theorem1(twisted)[0] or not _case_congruences(level, ev):
        raise TheoremViolation("the congruences for e' fail")
    g = ExponentVector(level)
    for lab, e in ev.items():
        quotient = ExponentVector(level, {lab: 1}) - eta_tilde(level, lab)
        Dq = vector_divisor(quotient)
        oo, zero = infinity(level), cusps(level)[0]
        if quotient.weight_sum() != 0 or Dq[oo].denominator != 1 or Dq[zero].denominator != 1:
            raise TheoremViolation(f"eta_tilde for {lab} does not have integral orders at oo and 0")
        g = g + quotient * e
    corrected = False
    ok, bad = check_theorem1(g)
    if not ok:
        defects = [(name, mod, res) for name, mod, res in theorem1_defects(g) if res]
        n = level.n
        if (
            n % 2 == 0
            and level.N % 8 == 0
            and len(defects) == 1
            and defects[0][0] == "(d)"
            and defects[0][1] == n
            and defects[0][2] == n // 2
        ):
            g = g + ExponentVector(level, CORRECTION)
            corrected = True
    fallback = False
    Dp = D - vector_divisor(g) if check_theorem1(g)[0] else None
    if Dp is None or not Dp.is_integral() or not is_rational_divisor(Dp):
        log.warning("rationalize: explicit construction failed at level %d; using lattice search", level.N)
        g = _fallback(D)
        Dp = D - vector_divisor(g)
        fallback = True
        if not is_rational_divisor(Dp):
            raise TheoremViolation("lattice search returned a non-rational divisor")
    return Rationalization(Dp, g, r, corrected, fallback)
