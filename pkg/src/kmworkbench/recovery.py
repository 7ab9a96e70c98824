"""Recover basic classes and coefficients from truncated series data.

Pipeline: divide out ``exp(Q/2)``, read the moments ``m_n = sum_i a_i (K_i.z)^n``
along a separating direction ``z``, solve the exponential-sum problem by
Prony's method, then read off coordinates from moments of first
derivatives.  Everything is exact; any non-integral intermediate aborts.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from .errors import (AmbiguousRecovery, BoundExceeded, DegenerateRestriction, DimensionMismatch,
                     InsufficientMoments, InvalidInput, NonIntegerCoordinate, NonIntegerRoot,
                     RecoveryError)
from .lattice import IntersectionLattice
from .linalg import inverse, solve
from .series import KMStructure, contract, expand_structure, normalize_C


@dataclass(frozen=True)
class MomentSequence:
    z: tuple
    moments: tuple


def directional_moments(C, z):
    """``m_n = n! * C_n(z)`` for ``n = 0..D``."""
    if len(z) != C.nvars:
        raise DimensionMismatch("direction has the wrong length")
    z = tuple(Fraction(v) for v in z)
    return MomentSequence(z, tuple(factorial(n) * p.evaluate(z) for n, p in enumerate(C.parts)))


def _canonical_vectors(rank, k):
    """Integer vectors of max-norm ``k``, one per sign class, in a fixed order."""
    out = []
    for v in product(range(-k, k + 1), repeat=rank):
        if max(map(abs, v)) != k:
            continue
        first = next(c for c in v if c)
        if first > 0:
            out.append(v)
    out.sort(key=lambda v: (sum(map(abs, v)), sum(c < 0 for c in v), v))
    return out


def separating_direction(candidates=None, rank=None, bound=None):
    """Integer functional ``w`` with ``K -> K.w`` injective.

    With ``candidates`` the search runs over vectors of increasing max-norm;
    with a coordinate ``bound`` B it returns ``(1, 2B+1, (2B+1)^2, ...)``,
    injective on the box ``[-B, B]^rank``.
    """
    if candidates is not None:
        cands = [tuple(K) for K in candidates]
        if rank is None:
            if not cands:
                raise InvalidInput("rank is needed for an empty candidate list")
            rank = len(cands[0])
        if any(len(K) != rank for K in cands):
            raise DimensionMismatch("candidates have inconsistent lengths")
        if rank == 0:
            return ()
        if len(set(cands)) <= 1:
            return (1,) + (0,) * (rank - 1)
        k = 1
        while True:
            for w in _canonical_vectors(rank, k):
                values = {sum(a * b for a, b in zip(K, w)) for K in cands}
                if len(values) == len(set(cands)):
                    return w
            k += 1
    if bound is None or rank is None:
        raise InvalidInput("need a candidate list or a coordinate bound with a rank")
    if bound < 0:
        raise InvalidInput("bound must be non-negative")
    base = 2 * bound + 1
    return tuple(base ** j for j in range(rank))


# ---- exact integer root isolation ------------------------------------------

def _poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _sturm_chain(p):
    chain = [[Fraction(c) for c in p]]
    deriv = [Fraction(i * c) for i, c in enumerate(p)][1:]
    while deriv and deriv[-1] == 0:
        deriv.pop()
    chain.append(deriv)
    while True:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            return chain
        chain.append([-c for c in r])


def integer_roots(coeffs):
    """Distinct integer roots of a monic integer polynomial (coefficients low to high).

    Raises :class:`NonIntegerRoot` unless all roots are distinct integers.
    Real roots are isolated on the integers by Sturm-sequence bisection.
    """
    p = list(coeffs)
    deg = len(p) - 1
    if deg == 0:
        return []
    if any(Fraction(c).denominator != 1 for c in p):
        raise NonIntegerRoot("recurrence has non-integral coefficients")
    p = [int(c) for c in p]
    chain = _sturm_chain(p)
    if len(chain[-1]) > 1:
        raise NonIntegerRoot("recurrence has a repeated root")
    cache = {}

    def changes(x):
        if x not in cache:
            signs = [s for s in (_poly_eval(q, x) for q in chain) if s]
            cache[x] = sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))
        return cache[x]

    R = 1 + max(abs(c) for c in p[:-1])
    lo, hi = -R - 1, R
    if changes(lo) - changes(hi) != deg:
        raise NonIntegerRoot("recurrence has non-real roots")
    roots = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = changes(a) - changes(b)
        if n == 0:
            continue
        if b - a == 1:
            if _poly_eval(p, b) != 0:
                raise NonIntegerRoot(f"root in ({a}, {b}) is not an integer")
            roots.append(b)
            continue
        mid = (a + b) // 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(roots)


def prony(m):
    """Exact Prony: ``m_n = sum_i a_i lam_i^n`` with integer ``lam_i``.

    Returns ``[(a_i, lam_i)]`` sorted by ``lam_i``.  The number of terms is
    the smallest ``p`` whose Hankel system is nonsingular and whose
    recurrence holds on all given moments.
    """
    moments = [Fraction(v) for v in (m.moments if isinstance(m, MomentSequence) else m)]
    N = len(moments) - 1
    if N < 0:
        raise InsufficientMoments("no moments")
    if not any(moments):
        return []
    p = 1
    while 2 * p - 1 <= N:
        H = [[moments[i + j] for j in range(p)] for i in range(p)]
        c = solve(H, [-moments[p + i] for i in range(p)])
        if c is not None and all(
                moments[n + p] + sum(ck * moments[n + k] for k, ck in enumerate(c)) == 0
                for n in range(N - p + 1)):
            lams = integer_roots(list(c) + [1])
            V = [[Fraction(lam) ** n for lam in lams] for n in range(p)]
            amps = solve(V, moments[:p])
            if amps is None or any(a == 0 for a in amps):
                raise NonIntegerRoot("degenerate Vandermonde system")
            for n in range(N + 1):
                if sum(a * lam ** n for a, lam in zip(amps, lams)) != moments[n]:
                    raise RecoveryError("moments are not an exponential sum")
            return list(zip(amps, lams))
        p += 1
    raise InsufficientMoments(f"Hankel rank did not stabilise within {N + 1} moments")


# ---- structure recovery -----------------------------------------------------

@dataclass
class RecoveryResult:
    structure: KMStructure
    direction: tuple
    functional: tuple
    moments: tuple
    nodes: list
    reexpansion_equal: bool
    notes: list = field(default_factory=list)


def _vandermonde_amplitudes(lams, moments, p):
    V = [[Fraction(lam) ** n for lam in lams] for n in range(p)]
    b = solve(V, list(moments[:p]))
    for n in range(p, len(moments)):
        if sum(bi * lam ** n for bi, lam in zip(b, lams)) != moments[n]:
            raise RecoveryError("derivative moments are inconsistent with the recovered nodes")
    return b


def recover(q, L, bound=None, candidates=None, workers=1):
    """Full recovery with a transcript; see :func:`recover_structure`."""
    if q.nvars != L.rank:
        raise DimensionMismatch("series and lattice ranks differ")
    if not L.is_nondegenerate():
        raise AmbiguousRecovery("intersection form is degenerate; classes are defined only modulo its radical")
    n = L.rank
    if candidates is not None:
        candidates = sorted({tuple(K) for K in candidates})
        w = separating_direction(candidates, n)
    elif bound is not None:
        w = separating_direction(rank=n, bound=bound)
    else:
        raise InvalidInput("recovery needs a coordinate bound or a candidate list")
    Qinv = inverse([list(row) for row in L.Q])
    z = tuple(sum((Qinv[i][j] * w[j] for j in range(n)), Fraction(0)) for i in range(n))
    C = normalize_C(q, L)
    ms = directional_moments(C, z)
    nodes = prony(ms)
    p = len(nodes)
    if q.D < 2 * p:
        raise AmbiguousRecovery(f"{p} terms found but truncation {q.D} < {2 * p} leaves them uncertified")
    amps = [a for a, _ in nodes]
    lams = [lam for _, lam in nodes]

    if candidates is not None:
        by_value = {sum(a * b for a, b in zip(K, w)): K for K in candidates}
        classes = []
        for lam in lams:
            if lam not in by_value:
                raise BoundExceeded(f"node {lam} matches no candidate class")
            classes.append(by_value[lam])
    else:
        def coordinate(j):
            e = [0] * n
            e[j] = 1
            mj = directional_moments(contract(C, e, 1), z).moments
            b = _vandermonde_amplitudes(lams, mj, p)
            return [bi / a for bi, a in zip(b, amps)]

        if workers > 1 and n > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                cols = list(pool.map(coordinate, range(n)))
        else:
            cols = [coordinate(j) for j in range(n)]
        classes = []
        for i in range(p):
            y = [cols[j][i] for j in range(n)]  # Q K_i
            if any(v.denominator != 1 for v in y):
                raise NonIntegerCoordinate(f"Q K has non-integral entries {y}")
            K = [sum((Qinv[r][c] * y[c] for c in range(n)), Fraction(0)) for r in range(n)]
            if any(v.denominator != 1 for v in K):
                raise NonIntegerCoordinate(f"recovered class {K} is not integral")
            K = tuple(int(v) for v in K)
            if sum(a * b for a, b in zip(K, w)) != lams[i]:
                raise RecoveryError("recovered class disagrees with its node")
            if any(abs(v) > bound for v in K):
                raise BoundExceeded(f"class {K} exceeds the coordinate bound {bound}")
            classes.append(K)
    s = KMStructure(L, tuple(zip(amps, classes)))
    if expand_structure(s, q.D) != q:
        raise RecoveryError("re-expansion of the recovered structure differs from the input")
    return RecoveryResult(structure=s, direction=z, functional=tuple(w), moments=ms.moments,
                          nodes=nodes, reexpansion_equal=True)


def recover_structure(q, L, bound=None, candidates=None, workers=1):
    """Invert :func:`~kmworkbench.series.expand_structure`.

    Needs either a coordinate ``bound`` on the classes or a finite
    ``candidates`` list, and truncation ``D >= 2p`` for ``p`` terms.
    """
    return recover(q, L, bound=bound, candidates=candidates, workers=workers).structure


def recover_linear(q, L, candidates):
    """Candidate-list backend: solve for one amplitude per candidate."""
    if q.nvars != L.rank:
        raise DimensionMismatch("series and lattice ranks differ")
    if not L.is_nondegenerate():
        raise AmbiguousRecovery("intersection form is degenerate")
    cands = sorted({tuple(K) for K in candidates})
    n = L.rank
    w = separating_direction(cands, n)
    Qinv = inverse([list(row) for row in L.Q])
    z = tuple(sum((Qinv[i][j] * w[j] for j in range(n)), Fraction(0)) for i in range(n))
    ms = directional_moments(normalize_C(q, L), z).moments
    c = len(cands)
    if len(ms) < c:
        raise AmbiguousRecovery(f"{c} candidates need truncation >= {c - 1}")
    nodes = [sum(a * b for a, b in zip(K, w)) for K in cands]
    amps = solve([[Fraction(v) ** k for v in nodes] for k in range(c)], list(ms[:c])) if c else []
    for k in range(c, len(ms)):
        if sum(a * v ** k for a, v in zip(amps, nodes)) != ms[k]:
            raise RecoveryError("moments are not supported on the candidate list")
    s = KMStructure(L, tuple((a, K) for a, K in zip(amps, cands) if a))
    if expand_structure(s, q.D) != q:
        raise RecoveryError("re-expansion of the recovered structure differs from the input")
    return s


def restrict_series(q, basis):
    """Pull back along ``t -> sum_k t_k basis[k]``."""
    if any(len(b) != q.nvars for b in basis):
        raise DimensionMismatch("basis vectors have the wrong length")
    return q.substitute([[b[j] for b in basis] for j in range(q.nvars)])


def recover_from_NS(q_NS, surf, bound=None, candidates=None, workers=1):
    """Recover the full structure from the series restricted to the NS sublattice.

    ``bound`` and ``candidates`` refer to coordinates in the NS basis.  The
    result lives on the full lattice; expand it with the full form to
    reconstruct the whole series.
    """
    basis = surf.ns_basis
    if basis is None:
        raise InvalidInput("surface has no NS basis")
    gram = IntersectionLattice(surf.lattice.gram(basis))
    if not gram.is_nondegenerate():
        raise DegenerateRestriction("intersection form restricted to NS is degenerate")
    sub = recover_structure(q_NS, gram, bound=bound, candidates=candidates, workers=workers)
    n = surf.lattice.rank
    terms = []
    for a, kappa in sub.terms:
        K = tuple(sum(k * b[j] for k, b in zip(kappa, basis)) for j in range(n))
        terms.append((a, K))
    return KMStructure(surf.lattice, tuple(terms))
