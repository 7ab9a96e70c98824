"""Finitely generated rational cones standing in for the closed effective cone.

Membership is decided by exact linear feasibility, so every answer carries a
certificate: nonnegative multipliers when the point is inside, a separating
functional (nonnegative on the generators, negative on the point) when not.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor, gcd

from .errors import (DimensionMismatch, InvalidInput, InvalidSectionData, NotInCone,
                     ParityViolation, Unbounded)
from .lattice import IntersectionLattice, as_class, parity_equal, signature
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp


@dataclass(frozen=True)
class RationalCone:
    rank: int
    generators: tuple = ()

    def __post_init__(self):
        gens = []
        for g in self.generators:
            g = tuple(Fraction(v) for v in g)
            if len(g) != self.rank:
                raise DimensionMismatch(f"generator {g} has the wrong length")
            if not any(g):
                raise InvalidInput("cone generators must be nonzero")
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    def matrix(self):
        """Generators as the columns of a ``rank x len(generators)`` matrix."""
        return [[g[i] for g in self.generators] for i in range(self.rank)]


@dataclass(frozen=True)
class Inside:
    multipliers: tuple

    inside = True


@dataclass(frozen=True)
class Outside:
    functional: tuple

    inside = False


def _primitive(v):
    """Positive rescaling of a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(x) for x in ints)


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def check_certificate(cone, x, cert):
    """Exactly re-validate a membership certificate."""
    x = [Fraction(v) for v in x]
    if cert.inside:
        lam = cert.multipliers
        if len(lam) != len(cone.generators) or any(l < 0 for l in lam):
            return False
        total = [sum((l * g[i] for l, g in zip(lam, cone.generators)), Fraction(0)) for i in range(cone.rank)]
        return total == x
    phi = cert.functional
    return all(_dot(phi, g) >= 0 for g in cone.generators) and _dot(phi, x) < 0


def membership(cone, x):
    """Decide ``x in cone``; returns :class:`Inside` or :class:`Outside`."""
    if len(x) != cone.rank:
        raise DimensionMismatch("point and cone have different dimensions")
    x = [Fraction(v) for v in x]
    res = solve_lp([0] * len(cone.generators), cone.matrix(), x)
    if res.status == INFEASIBLE:
        cert = Outside(_primitive(res.farkas))
    else:
        cert = Inside(tuple(res.x))
    assert check_certificate(cone, x, cert)
    return cert


def is_nef(lattice, cone, H):
    """True iff ``Q(H, g) >= 0`` for every generator ``g``."""
    if isinstance(lattice, IntersectionLattice):
        L = lattice
    else:
        L = lattice.lattice
    L.check(H)
    if cone.rank != L.rank:
        raise DimensionMismatch("cone and lattice have different dimensions")
    QH = L.apply(H)
    return all(_dot(QH, g) >= 0 for g in cone.generators)


def lineality_witness(cone):
    """Nonnegative multipliers ``nu`` with ``sum nu_j g_j = 0`` and ``sum nu_j = 1``, or ``None``."""
    m = len(cone.generators)
    if m == 0:
        return None
    A = cone.matrix() + [[1] * m]
    b = [0] * cone.rank + [1]
    res = solve_lp([0] * m, A, b)
    return None if res.status == INFEASIBLE else tuple(res.x)


def is_salient(cone):
    """True iff the cone contains no line."""
    return lineality_witness(cone) is None


@dataclass(frozen=True)
class Decomposition:
    C: tuple
    D: tuple
    C_certificate: Inside
    D_certificate: Inside


def decompose(KX, Ki, cone):
    """Split ``KX = C + D`` with ``Ki = C - D`` and both halves in the cone."""
    if len(KX) != cone.rank or len(Ki) != cone.rank:
        raise DimensionMismatch("classes and cone have different dimensions")
    if any((a - b) % 2 for a, b in zip(KX, Ki)):
        raise ParityViolation(f"(KX - K)/2 is not integral for K = {tuple(Ki)}")
    C = tuple((a + b) // 2 for a, b in zip(KX, Ki))
    D = tuple((a - b) // 2 for a, b in zip(KX, Ki))
    cert_C = membership(cone, C)
    if not cert_C.inside:
        raise NotInCone("C", C, cert_C.functional)
    cert_D = membership(cone, D)
    if not cert_D.inside:
        raise NotInCone("D", D, cert_D.functional)
    return Decomposition(C, D, cert_C, cert_D)


def adjunction_equality_detect(surf, cone, Ki, H, g):
    """Does ``Ki`` attain equality in the adjunction bound for the section ``(H, g)``?"""
    L = surf.lattice
    L.check(Ki)
    L.check(H)
    if not is_nef(L, cone, H):
        raise InvalidSectionData(f"H = {tuple(H)} is not nef")
    if 2 * g - 2 != L.square(H) + L.pair(surf.KX, H):
        raise InvalidSectionData(f"2g - 2 = {2 * g - 2} differs from H^2 + KX.H = "
                                 f"{L.square(H) + L.pair(surf.KX, H)}")
    return 2 * g - 2 == L.square(H) + L.pair(Ki, H)


def candidate_box(KX, cone):
    """Integer bounding box of ``{x : x in cone, KX - x in cone}``; ``None`` if empty."""
    m = len(cone.generators)
    G = cone.matrix()
    A = [row + row for row in G]
    lo, hi = [], []
    for i in range(cone.rank):
        bounds = []
        for sgn in (1, -1):
            c = [sgn * v for v in G[i]] + [0] * m
            res = solve_lp(c, A, KX)
            if res.status == INFEASIBLE:
                return None
            if res.status == UNBOUNDED:
                raise Unbounded("candidate region is unbounded")
            bounds.append(sgn * res.value)
        lo.append(ceil(bounds[0]))
        hi.append(floor(bounds[1]))
    return lo, hi


def enumerate_candidates(KX, cone, w2, workers=1):
    """All integral ``K = w2 mod 2`` with a cone decomposition, sorted lexicographically."""
    KX = as_class(KX, cone.rank)
    if len(w2) != cone.rank:
        raise DimensionMismatch("w2 has the wrong length")
    if not is_salient(cone):
        raise Unbounded("cone contains a line; the candidate region is unbounded")
    box = candidate_box(KX, cone)
    if box is None:
        return []
    lo, hi = box
    points = list(product(*(range(a, b + 1) for a, b in zip(lo, hi))))

    def test(D):
        K = tuple(k - 2 * d for k, d in zip(KX, D))
        if any((a - b) % 2 for a, b in zip(K, w2)):
            return None
        try:
            decompose(KX, K, cone)
        except NotInCone:
            return None
        return K

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(test, points))
    else:
        found = [test(D) for D in points]
    return sorted(K for K in found if K is not None)


@dataclass
class GentypeReport:
    hypotheses_met: bool
    hypotheses: dict
    entries: list = field(default_factory=list)

    @property
    def ok(self):
        return self.hypotheses_met and all(e["ok"] for e in self.entries)


def gentype_bound_check(surf, cone, candidates):
    """Check ``K^2 <= KX^2`` with equality exactly at ``K = +-KX``.

    Hypotheses (Hodge-index signature on the working lattice, ``KX`` nef,
    ``KX^2 > 0``) are evaluated first; if one fails no verdicts are issued.
    """
    L = surf.lattice
    KX = surf.KX
    work = surf.working_lattice()
    n_plus, n_minus, n_zero = signature(work)
    kx2 = L.square(KX)
    hyp = {
        "hodge_index": n_plus == 1 and n_zero == 0,
        "KX_nef": is_nef(L, cone, KX),
        "KX_square_positive": kx2 > 0,
    }
    report = GentypeReport(hypotheses_met=all(hyp.values()), hypotheses=hyp)
    if not report.hypotheses_met:
        return report
    minus_KX = tuple(-v for v in KX)
    for K in candidates:
        K = as_class(K, L.rank)
        k2 = L.square(K)
        D = [Fraction(a - b, 2) for a, b in zip(KX, K)]
        audit = 4 * (L.pair(D, D) - L.pair(KX, D))
        is_pm = K == KX or K == minus_KX
        if k2 < kx2:
            status, ok = "strict", not is_pm
        elif k2 == kx2:
            status, ok = ("equality", True) if is_pm else ("equality-not-pm-KX", False)
        else:
            status, ok = "exceeds", False
        report.entries.append({
            "K": K, "K2": k2, "KX2": kx2, "status": status, "ok": ok,
            "audit": audit, "identity_holds": k2 == kx2 + audit,
        })
    return report
