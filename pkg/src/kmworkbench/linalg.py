"""Exact dense linear algebra over a field (``Fraction`` or Gaussian rationals)."""

from fractions import Fraction


def _field(x):
    # ints become Fractions; anything with its own division is left alone
    return Fraction(x) if isinstance(x, int) else x


def row_reduce(rows):
    """Reduced row echelon form. Returns ``(rref, pivot_columns)``."""
    m = [[_field(x) for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows):
    if not rows:
        return 0
    return len(row_reduce(rows)[1])


def solve(A, b):
    """Solve the square system ``A x = b`` exactly; ``None`` if ``A`` is singular."""
    n = len(A)
    if n == 0:
        return []
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red, piv = row_reduce(aug)
    if piv != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def inverse(A):
    """Inverse of a square matrix, or ``None`` if singular."""
    n = len(A)
    if n == 0:
        return []
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in red[:n]]


def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v)), 0) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), 0) for col in Bt] for row in A]
