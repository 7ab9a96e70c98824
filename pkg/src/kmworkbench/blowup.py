"""Blow-ups: lattice extension by exceptional classes and the E^4 / E^6
contraction identities between series on the blow-up and on the base.

For one exceptional class ``E`` (``E^2 = -1``) and ``x = t E`` the series of a
term ``(a, K + eps E)`` carries the factor ``exp(-t^2/2 - eps t)``, whose
``n``-th derivative at ``t = 0`` is the Hermite number ``He_n(-eps)``.  With
``He_4(+-1) = -2`` and ``He_6(+-1) = 16`` this fixes the coefficient split
``a / 2^l`` (so that the E^4 contraction is an exact inverse) and the audit
factor ``-8`` of the E^6 contraction.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InvalidInput, TruncationTooShallow, WrongArity
from .lattice import IntersectionLattice
from .series import HomogeneousPolynomial, KMStructure, TruncatedSeries, contract

E6_AUDIT_FACTOR = Fraction(-8)


@dataclass(frozen=True)
class BlowupMap:
    base: IntersectionLattice
    extended: IntersectionLattice
    l: int

    @property
    def exceptional_indices(self):
        n = self.base.rank
        return tuple(range(n, n + self.l))

    def exceptional(self, j):
        """The class ``E_j`` (``j`` counted from 0) in extended coordinates."""
        v = [0] * self.extended.rank
        v[self.base.rank + j] = 1
        return tuple(v)

    def embed(self, K):
        self.base.check(K)
        return tuple(K) + (0,) * self.l


def blowup_lattice(L, l):
    """``Q_hat = Q (+) diag(-1, ..., -1)`` with ``l`` new exceptional classes."""
    if l < 1:
        raise InvalidInput("need at least one blow-up")
    n = L.rank
    Q = [list(row) + [0] * l for row in L.Q]
    for j in range(l):
        Q.append([0] * (n + l))
        Q[n + j][n + j] = -1
    return BlowupMap(L, IntersectionLattice(tuple(map(tuple, Q))), l)


def blowup_structure(s, bm):
    """Each term ``(a, K)`` becomes the ``2^l`` terms ``(a / 2^l, K + sum eps_j E_j)``."""
    if s.lattice != bm.base:
        raise InvalidInput("structure does not live on the base lattice of the blow-up")
    share = Fraction(1, 2 ** bm.l)
    terms = []
    for a, K in s.terms:
        for signs in product((1, -1), repeat=bm.l):
            terms.append((a * share, tuple(K) + signs))
    return KMStructure(bm.extended, tuple(terms))


def _restrict_to_base(series, bm):
    n = bm.base.rank
    parts = []
    for p in series.parts:
        terms = {e[:n]: c for e, c in p.terms.items() if not any(e[n:])}
        parts.append(HomogeneousPolynomial(n, p.degree, terms, check=False))
    return TruncatedSeries(n, series.D, parts)


def blowdown_E4(series, bm):
    """``(-1/2)^l`` times the fourfold contraction along every ``E_j``, restricted to the base."""
    if series.nvars != bm.extended.rank:
        raise InvalidInput("series does not live on the blown-up lattice")
    if series.D < 4 * bm.l:
        raise TruncationTooShallow(f"need truncation >= {4 * bm.l}, have {series.D}")
    out = series
    for j in range(bm.l):
        out = contract(out, bm.exceptional(j), 4)
    return _restrict_to_base(out.scale(Fraction(-1, 2) ** bm.l), bm)


@dataclass(frozen=True)
class E6Result:
    """Raw ``-1/2 * E^6`` contraction on the base.

    For the blow-up of a structure ``s`` the series equals
    ``audit_factor * expand_structure(s)``.
    """

    series: TruncatedSeries
    audit_factor: Fraction = E6_AUDIT_FACTOR


def blowdown_E6(series, bm):
    if bm.l != 1:
        raise WrongArity(f"E^6 contraction needs a single blow-up, got l = {bm.l}")
    if series.nvars != bm.extended.rank:
        raise InvalidInput("series does not live on the blown-up lattice")
    if series.D < 6:
        raise TruncationTooShallow(f"need truncation >= 6, have {series.D}")
    out = contract(series, bm.exceptional(0), 6).scale(Fraction(-1, 2))
    return E6Result(_restrict_to_base(out, bm))
