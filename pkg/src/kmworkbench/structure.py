"""Raw Donaldson polynomial data: simple-type check, degree flattening,
and verification of the basic-class properties of a claimed structure.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import (Collision, DegreeMismatch, DimensionMismatch, EmptyStructure,
                     InsufficientData, InvalidInput, NegativeSelfIntersection)
from .lattice import as_class, neg, parity_equal
from .series import HomogeneousPolynomial, TruncatedSeries


@dataclass(frozen=True)
class RawEntry:
    """``q_k(pt^j, -)`` restricted to the 2-dimensional classes."""

    k: int
    j: int
    poly: HomogeneousPolynomial

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput(f"k must be positive, got {self.k}")
        if self.j not in (0, 1, 2):
            raise InvalidInput(f"point power j must be 0, 1 or 2, got {self.j}")


@dataclass(frozen=True)
class RawPolynomialFamily:
    nvars: int
    entries: tuple = ()

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if (e.k, e.j) in seen:
                raise Collision(f"two entries for (k={e.k}, j={e.j})")
            if e.poly.nvars != self.nvars:
                raise DimensionMismatch(f"entry (k={e.k}, j={e.j}) has the wrong number of variables")
            seen.add((e.k, e.j))
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: (e.k, e.j))))

    def get(self, k, j):
        for e in self.entries:
            if e.k == k and e.j == j:
                return e.poly
        return None


@dataclass(frozen=True)
class SurfaceConstraint:
    """An embedded surface: its class, genus, and whether it is connected."""

    sigma: tuple
    genus: int
    connected: bool = True

    def __post_init__(self):
        if self.genus < 0:
            raise InvalidInput("genus must be non-negative")
        object.__setattr__(self, "sigma", as_class(self.sigma))


@dataclass
class SimpleTypeReport:
    simple: bool
    checked: list
    failing: list


def check_simple_type(raw):
    """Compare ``q_k(pt^2, -)`` with ``4 q_{k-1}`` wherever both are present."""
    checked, failing = [], []
    for e in raw.entries:
        if e.j != 2:
            continue
        lower = raw.get(e.k - 1, 0)
        if lower is None:
            continue
        checked.append(e.k)
        if e.poly != lower.scale(4):
            failing.append(e.k)
    if not checked:
        raise InsufficientData("no k with both q_k(pt^2, -) and q_(k-1) present")
    return SimpleTypeReport(simple=not failing, checked=checked, failing=failing)


def flattened_degree(k, j, b_plus):
    """Degree on H_2 of ``q_k(pt^j, -)``; ``None`` when the entry does not map."""
    if b_plus % 2 == 0:
        raise InvalidInput("b_plus must be odd")
    d = 4 * k - 2 * j - 3 * (1 + b_plus) // 2
    return d if d >= 0 else None


def flatten_to_series(raw, b_plus):
    """Degree-indexed series with part ``d`` equal to ``q_d / d!``.

    Entries with ``j = 2`` are only used by :func:`check_simple_type`;
    entries whose degree would be negative fall in the "otherwise zero" case
    and are dropped.
    """
    if b_plus < 3 or b_plus % 2 == 0:
        raise InvalidInput(f"b_plus must be odd and >= 3, got {b_plus}")
    mapped = {}
    for e in raw.entries:
        if e.j == 2:
            continue
        d = flattened_degree(e.k, e.j, b_plus)
        if d is None:
            continue
        if not e.poly.is_zero() and e.poly.degree != d:
            raise DegreeMismatch(f"q_{e.k}(pt^{e.j}) has degree {e.poly.degree}, expected {d}")
        if d in mapped:
            raise Collision(f"two entries map to degree {d}")
        mapped[d] = e.poly
    D = max(mapped, default=-1)
    parts = [None] * (D + 1)
    for d, p in mapped.items():
        parts[d] = HomogeneousPolynomial(raw.nvars, d, p.terms, check=False).scale(Fraction(1, factorial(d)))
    return TruncatedSeries(raw.nvars, D, parts)


def export_raw(series, b_plus):
    """Inverse of :func:`flatten_to_series`: one raw entry per representable degree.

    Only degrees congruent to ``-3(1 + b_plus)/2`` mod 2 are reachable
    (through ``j = 0`` or ``j = 1``); a nonzero part of the other parity has
    no raw counterpart and raises :class:`DegreeMismatch`.
    """
    shift = 3 * (1 + b_plus) // 2
    entries = []
    for d, p in enumerate(series.parts):
        for j in (0, 1):
            if (d + 2 * j + shift) % 4 == 0:
                k = (d + 2 * j + shift) // 4
                if k >= 1:
                    entries.append(RawEntry(k, j, p.scale(factorial(d))))
                elif not p.is_zero():
                    raise DegreeMismatch(f"degree {d} would need k < 1")
                break
        else:
            if not p.is_zero():
                raise DegreeMismatch(f"degree {d} cannot be expressed as q_k or q_k(pt)")
    return RawPolynomialFamily(series.nvars, tuple(entries))


@dataclass
class KMReport:
    parity_ok: bool
    negation_ok: bool
    adjunction_ok: bool
    parity_violations: list = field(default_factory=list)
    negation_violations: list = field(default_factory=list)
    adjunction_violations: list = field(default_factory=list)
    skipped_constraints: list = field(default_factory=list)

    @property
    def ok(self):
        return self.parity_ok and self.negation_ok and self.adjunction_ok


def verify_km_properties(s, surf, constraints=None):
    """Check parity, negation closure and the adjunction inequality.

    Constraints with ``sigma^2 < 0``, a zero class, or flagged disconnected
    lie outside the hypotheses of the inequality; they are listed as skipped.
    """
    L = surf.lattice
    if s.rank != L.rank:
        raise DimensionMismatch("structure and surface ranks differ")
    if constraints is None:
        constraints = surf.constraints
    parity_bad = [K for K in s.classes if not parity_equal(L, K, surf.w2)]
    classes = set(s.classes)
    negation_bad = [K for K in s.classes if neg(K) not in classes]
    adj_bad, skipped = [], []
    for c in constraints:
        L.check(c.sigma, "surface class")
        s2 = L.square(c.sigma)
        if not any(c.sigma):
            skipped.append((c, "homologically trivial"))
            continue
        if s2 < 0:
            skipped.append((c, "negative self-intersection"))
            continue
        if not c.connected:
            skipped.append((c, "not connected"))
            continue
        for K in s.classes:
            rhs = s2 + L.pair(K, c.sigma)
            if 2 * c.genus - 2 < rhs:
                adj_bad.append((K, c, 2 * c.genus - 2, rhs))
    return KMReport(
        parity_ok=not parity_bad,
        negation_ok=not negation_bad,
        adjunction_ok=not adj_bad,
        parity_violations=parity_bad,
        negation_violations=negation_bad,
        adjunction_violations=adj_bad,
        skipped_constraints=skipped,
    )


def min_genus_bound(s, sigma):
    """Smallest genus allowed for a connected surface in class ``sigma``."""
    L = s.lattice
    L.check(sigma)
    if not s.terms:
        raise EmptyStructure("genus bound needs at least one class")
    s2 = L.square(sigma)
    if s2 < 0:
        raise NegativeSelfIntersection(f"sigma^2 = {s2} < 0")
    if not any(sigma):
        raise InvalidInput("sigma must be homologically nontrivial")
    top = s2 + max(L.pair(K, sigma) for K in s.classes)
    # ceil((top + 2) / 2)
    return max(0, -(-(top + 2) // 2))
