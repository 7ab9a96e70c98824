"""Exact two-phase simplex over the rationals (Bland's rule).

Solves ``min c.x  s.t.  A x = b, x >= 0``.  Infeasible problems come back
with a Farkas vector ``y`` satisfying ``y A >= 0`` and ``y b < 0``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list = None
    value: Fraction = None
    farkas: list = None
    ray: list = field(default=None, repr=False)


def _pivot(T, r, c):
    inv = 1 / T[r][c]
    T[r] = [v * inv for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c]:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]


def _run(T, basis, allowed):
    """Iterate on tableau ``T`` (last row = reduced costs, last column = rhs)."""
    m = len(T) - 1
    obj = T[-1]
    while True:
        entering = next((j for j in allowed if obj[j] < 0), None)
        if entering is None:
            return OPTIMAL, None
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED, entering
        r = best[1]
        _pivot(T, r, entering)
        basis[r] = entering
        obj = T[-1]


def solve_lp(c, A, b):
    m = len(A)
    n = len(c)
    c = [Fraction(v) for v in c]
    rows = []
    sign = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        s = -1 if rhs < 0 else 1
        sign.append(s)
        rows.append([s * v for v in row] + [Fraction(int(k == i)) for k in range(m)] + [s * rhs])
    # phase I: minimise the sum of artificials
    obj = [Fraction(0)] * (n + m + 1)
    for row in rows:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    T = rows + [obj]
    basis = [n + i for i in range(m)]
    _run(T, basis, range(n + m))
    if T[-1][-1] != 0:
        # reduced cost of artificial i is 1 - y_i in the flipped system
        y = [1 - T[-1][n + i] for i in range(m)]
        farkas = [-y[i] * sign[i] for i in range(m)]
        return LPResult(INFEASIBLE, farkas=farkas)
    # drive remaining artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j]), None)
            if j is None:
                continue  # redundant row
            _pivot(T, i, j)
            basis[i] = j
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase II objective row: reduced costs c_j - c_B B^{-1} A_j
    obj = list(c) + [Fraction(0)]
    for i, bj in enumerate(basis):
        cb = c[bj]
        if cb:
            obj = [o - cb * t for o, t in zip(obj, T[i])]
    T.append(obj)
    status, entering = _run(T, basis, range(n))
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        x[bj] = T[i][-1]
    if status == UNBOUNDED:
        ray = [Fraction(0)] * n
        ray[entering] = Fraction(1)
        for i, bj in enumerate(basis):
            ray[bj] = -T[i][entering]
        return LPResult(UNBOUNDED, x=x, ray=ray)
    return LPResult(OPTIMAL, x=x, value=sum((ci * xi for ci, xi in zip(c, x)), Fraction(0)))


def feasible_point(A, b):
    """A nonnegative solution of ``A x = b`` or an :class:`LPResult` with a Farkas vector."""
    n = len(A[0]) if A else 0
    return solve_lp([0] * n, A, b)
