"""Dense Gaussian elimination over an exact field.

Entries only need ``+ - *``, truthiness for zero tests and ``mpq(1) / x``.
That covers mpq, Gaussian rationals and truncated Laurent series; for the
latter, ``pivot_key`` picks the entry of lowest valuation so as little
precision as possible is lost.
"""

from gmpy2 import mpq


def row_reduce(rows, ncols, pivot_key=None):
    """Reduced row echelon form.  Returns (rows, pivot column list)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        candidates = [i for i in range(r, len(rows)) if rows[i][c]]
        if not candidates:
            continue
        p = min(candidates, key=lambda i: pivot_key(rows[i][c])) if pivot_key else candidates[0]
        rows[r], rows[p] = rows[p], rows[r]
        inv = mpq(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve(A, b, pivot_key=None, zero=0):
    """One solution of A x = b with free unknowns set to ``zero``.

    Returns None when the system is inconsistent.
    """
    if not A:
        return [] if all(not x for x in b) else None
    n = len(A[0])
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    red, pivots = row_reduce(aug, n, pivot_key)
    for row in red[len(pivots):]:
        if row[n]:
            return None
    x = [zero] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return x


def rank(A, pivot_key=None):
    if not A:
        return 0
    return len(row_reduce(A, len(A[0]), pivot_key)[1])


def nullspace(A, zero=0, one=1):
    """Basis of {x : A x = 0} for a scalar matrix."""
    if not A:
        return []
    n = len(A[0])
    red, pivots = row_reduce(A, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis
