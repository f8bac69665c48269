"""Exact integer matrix kernels: products, determinants, Smith/Hermite forms.

Matrices are tuples of tuples of ints (immutable, hashable). Everything here
is exact; no floats.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = tuple[tuple[int, ...], ...]


def mat(rows) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(ra[t] * cb[t] for t in range(k)) for cb in bt) for ra in a
    )


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_pow(m: Matrix, k: int) -> Matrix:
    if k < 0:
        return mat_pow(mat_inverse_unimodular(m), -k)
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_vec(m: Matrix, v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def det(m: Matrix) -> int:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inverse_unimodular(m: Matrix) -> Matrix:
    """Inverse of an integer matrix with det +-1 (stays integral)."""
    d = det(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for row in aug:
        ints = []
        for x in row[n:]:
            assert x.denominator == 1
            ints.append(int(x))
        out.append(tuple(ints))
    return tuple(out)


def smith_invariant_factors(m: Matrix) -> tuple[int, ...]:
    """Nonnegative invariant factors d1 | d2 | ... of an integer matrix.

    Returns min(rows, cols) values; trailing zeros indicate rank deficiency.
    """
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = min(rows, cols)
    factors = []
    top = 0
    left = 0
    while top < rows and left < cols:
        # locate a pivot of minimal absolute value
        piv = None
        for i in range(top, rows):
            for j in range(left, cols):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[top], a[i] = a[i], a[top]
        for row in a:
            row[left], row[j] = row[j], row[left]
        p = a[top][left]
        dirty = False
        for i in range(top + 1, rows):
            q = a[i][left] // p
            if q:
                for j in range(left, cols):
                    a[i][j] -= q * a[top][j]
            if a[i][left]:
                dirty = True
        for j in range(left + 1, cols):
            q = a[top][j] // p
            if q:
                for i in range(top, rows):
                    a[i][j] -= q * a[i][left]
            if a[top][j]:
                dirty = True
        if dirty:
            continue
        # pivot must divide the remaining block for true invariant factors
        offender = None
        for i in range(top + 1, rows):
            for j in range(left + 1, cols):
                if a[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(left, cols):
                a[top][j] += a[offender][j]
            continue
        factors.append(abs(p))
        top += 1
        left += 1
    while len(factors) < r:
        factors.append(0)
    return tuple(factors)


def stack(*matrices: Matrix) -> Matrix:
    return tuple(row for m in matrices for row in m)


def torus_kernel_size(m: Matrix) -> int | None:
    """Number of x in (R/Z)^d with m.x integral, or None when infinite.

    The count is the product of the d invariant factors of m; a zero factor
    (rank < d) means a positive-dimensional kernel.
    """
    d = len(m[0])
    factors = smith_invariant_factors(m)
    if len(factors) < d or any(f == 0 for f in factors[:d]):
        return None
    out = 1
    for f in factors[:d]:
        out *= f
    return out


def hnf_columns(vectors: list[tuple[int, ...]], dim: int) -> Matrix | None:
    """Column-style Hermite normal form of the lattice spanned by vectors.

    Returns an upper-triangular dim x dim matrix with positive diagonal and
    each row reduced modulo its diagonal entry, or None when the span has
    rank < dim.
    """
    basis: list[list[int]] = [list(v) for v in vectors]
    # column echelon via integer row ops on the transposed picture: we reduce
    # the generating set working coordinate by coordinate from the bottom row.
    cols = [list(v) for v in basis]
    h: list[list[int] | None] = [None] * dim
    work = cols
    for row in range(dim - 1, -1, -1):
        live = [c for c in work if any(c[r] != 0 for r in range(row + 1))]
        pivots = [c for c in live if c[row] != 0]
        rest = [c for c in live if c[row] == 0]
        if not pivots:
            work = rest
            h[row] = None
            continue
        # gcd-combine all pivots into one column with positive entry at `row`
        p = pivots[0]
        for c in pivots[1:]:
            while c[row] != 0:
                if abs(c[row]) < abs(p[row]):
                    p, c = c, p
                q = c[row] // p[row]
                for r in range(dim):
                    c[r] -= q * p[r]
            if any(c[r] != 0 for r in range(row)):
                rest.append(c)
        if p[row] < 0:
            p = [-x for x in p]
        h[row] = p
        work = rest
    if any(col is None for col in h):
        return None
    hm = [list(col) for col in h]  # hm[j] is the column with pivot at row j
    # reduce entries to the right of each diagonal into [0, diag)
    for i in range(dim):
        for j in range(i + 1, dim):
            q = hm[j][i] // hm[i][i]
            if q:
                for r in range(dim):
                    hm[j][r] -= q * hm[i][r]
    return tuple(tuple(hm[j][i] for j in range(dim)) for i in range(dim))


def lattice_contains(h: Matrix, v: tuple[int, ...]) -> bool:
    """Membership of v in the lattice spanned by the columns of HNF matrix h."""
    n = len(h)
    rem = list(v)
    for i in range(n - 1, -1, -1):
        if rem[i] % h[i][i] != 0:
            return False
        t = rem[i] // h[i][i]
        for r in range(n):
            rem[r] -= t * h[r][i]
    return all(x == 0 for x in rem)
