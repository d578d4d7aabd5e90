"""Integer matrices: Smith and Hermite normal forms, kernels, solving.

Matrices are plain lists of rows of Python ints.  All routines copy their
input; nothing is modified in place from the caller's point of view.
"""

from typing import NamedTuple

from .arith import xgcd


class SnfResult(NamedTuple):
    U: list
    D: list
    V: list


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def shape(A):
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if any(len(r) != cols for r in A):
        raise ValueError("ragged matrix")
    return rows, cols


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(x * y for x, y in zip(row, v)) for row in A]


def det(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D in Smith form.

    Pivots on the entry of least absolute value; no modular tricks.

    >>> smith_normal_form([[2, 0], [0, 3]]).D
    [[1, 0], [0, 6]]
    """
    return SnfResult(*_smith(A, False)[:3])


def smith_normal_form_with_inverse(A):
    """(U, D, V, U^-1); the inverse is tracked during the reduction."""
    return _smith(A, True)


def _smith(A, track):
    m, n = shape(A)
    D = [list(r) for r in A]
    U = identity(m)
    V = identity(n)
    Ui = identity(m) if track else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        if track:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            rd, rs = D[dst], D[src]
            for j in range(n):
                if rs[j]:
                    rd[j] += q * rs[j]
            ud, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]
            if track:
                # U^-1 picks up the inverse operation on the right
                for row in Ui:
                    if row[dst]:
                        row[src] -= q * row[dst]

    def add_col(dst, src, q):
        if q:
            for row in D:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                return U, D, V, Ui
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            if track:
                for row in Ui:
                    row[t] = -row[t]
    return U, D, V, Ui


def elementary_divisors(A):
    D = smith_normal_form(A).D
    return [D[i][i] for i in range(min(shape(A)))]


def hnf_rows(vectors):
    """Row-style Hermite normal form of the lattice spanned by `vectors`.

    Returns a list of nonzero rows in echelon form: positive pivots, and the
    entries above each pivot reduced into [0, pivot).  The result is a basis
    of the lattice and depends only on the lattice.
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = []
    pivots = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        # gcd-combine every row with a nonzero entry in this column
        piv = nz[0]
        for r in nz[1:]:
            a, b = piv[col], r[col]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = [x * u + y * v for u, v in zip(piv, r)]
            other = [bg * u - ag * v for u, v in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pivots.append(col)
        rows = rest
        col += 1
    for i in range(len(basis)):
        c = pivots[i]
        p = basis[i][c]
        for k in range(i):
            q = basis[k][c] // p
            if q:
                basis[k] = [u - q * v for u, v in zip(basis[k], basis[i])]
    return basis


def integer_kernel(A, ncols=None):
    """Basis of {x in Z^n : A x = 0}, returned HNF-reduced.

    >>> integer_kernel([[2, 4]])
    [[2, -1]]
    """
    if not A:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return identity(ncols)
    m, n = shape(A)
    # rows of [A^T | I]; row-reduce the A^T block
    aug = [[A[i][j] for i in range(m)] + [int(j == k) for k in range(n)] for j in range(n)]
    red = _echelon(aug, m)
    kernel = [row[m:] for row in red if not any(row[:m])]
    return hnf_rows(kernel)


def _echelon(rows, width):
    """Unimodular row reduction of the first `width` columns."""
    rows = [list(r) for r in rows]
    out = []
    for col in range(width):
        nz = [r for r in rows if r[col]]
        if not nz:
            continue
        rest = [r for r in rows if not r[col]]
        piv = nz[0]
        for r in nz[1:]:
            a, b = piv[col], r[col]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = [x * u + y * v for u, v in zip(piv, r)]
            rest.append([bg * u - ag * v for u, v in zip(piv, r)])
            piv = new_piv
        out.append(piv)
        rows = rest
    return out + rows


def solve_integer(A, b):
    """Some integer x with A x = b, or None if there is none.

    >>> solve_integer([[2]], [3]) is None
    True
    """
    m, n = shape(A)
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    if m == 0:
        return [0] * n
    U, D, V = smith_normal_form(A)
    c = matvec(U, b)
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(V, y)


def inverse_unimodular(A):
    """Inverse of a unimodular integer matrix."""
    n = len(A)
    aug = [list(A[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        # bring a unit into the pivot slot by gcd steps
        for r in range(piv + 1, n):
            while aug[r][col]:
                q = aug[piv][col] // aug[r][col]
                aug[piv] = [u - q * v for u, v in zip(aug[piv], aug[r])]
                aug[piv], aug[r] = aug[r], aug[piv]
        if piv != col:
            aug[piv], aug[col] = aug[col], aug[piv]
        p = aug[col][col]
        if p not in (1, -1):
            raise ValueError("matrix is not unimodular")
        if p == -1:
            aug[col] = [-x for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                q = aug[r][col]
                aug[r] = [u - q * v for u, v in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def hnf_modular(vectors, modulus, n):
    """HNF basis of the lattice spanned by `vectors` together with modulus * Z^n.

    Since the lattice contains modulus * Z^n, every entry can be kept in
    [0, modulus) while reducing.  Returns n rows, upper triangular, with
    positive pivots dividing the modulus.

    >>> hnf_modular([[1, 1]], 4, 2)
    [[1, 1], [0, 4]]
    """
    rows = [[x % modulus for x in v] for v in vectors]
    rows = [r for r in rows if any(r)]
    basis = []
    for col in range(n):
        piv = [0] * n
        piv[col] = modulus
        rest = []
        for r in rows:
            if not r[col]:
                rest.append(r)
                continue
            a, b = piv[col], r[col]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = [(x * u + y * v) % modulus for u, v in zip(piv, r)]
            new_piv[col] = g
            other = [(bg * u - ag * v) % modulus for u, v in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        # piv[col] * (modulus / piv[col]) e_col is in the lattice, so its tail is too
        tail = [(u * (modulus // piv[col])) % modulus for u in piv]
        tail[col] = 0
        if any(tail):
            rest.append(tail)
        basis.append(piv)
        rows = rest
    for i in range(n):
        p = basis[i][i]
        for k in range(i):
            q = basis[k][i] // p
            if q:
                basis[k] = [u - q * v for u, v in zip(basis[k], basis[i])]
    return basis


def congruence_lattice(rows, moduli, n):
    """HNF basis of {x in Z^n : rows[i] . x = 0 mod moduli[i] for all i}.

    All moduli must be positive.

    >>> congruence_lattice([[1, 1]], [2], 2)
    [[1, 1], [0, 2]]
    """
    if not rows:
        return identity(n)
    big = 1
    for m in moduli:
        big = big * m // xgcd(big, m)[0]
    basis = identity(n)
    for row, m in zip(rows, moduli):
        values = [sum(u * v for u, v in zip(row, b)) % m for b in basis]
        if not any(values):
            continue
        # kernel of a -> sum a_j values_j mod m, found by gcd elimination
        order = [j for j, v in enumerate(values) if v]
        j0 = order[0]
        coeff = [int(j == j0) for j in range(n)]
        gens = []
        cur = values[j0]
        for j in order[1:]:
            g, x, y = xgcd(cur, values[j])
            # new combination has value g; the complement has value 0
            comp = [(values[j] // g) * u for u in coeff]
            comp[j] -= cur // g
            gens.append(comp)
            coeff = [x * u for u in coeff]
            coeff[j] += y
            cur = g
        coeff_mult = m // xgcd(cur, m)[0]
        gens.append([coeff_mult * u for u in coeff])
        for j in range(n):
            if not values[j]:
                gens.append([int(i == j) for i in range(n)])
        new = [[sum(a * b[t] for a, b in zip(gen, basis)) for t in range(n)] for gen in gens]
        basis = hnf_modular(new, big, n)
    return basis
