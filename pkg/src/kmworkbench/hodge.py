"""Hodge-adapted coordinates with exact Gaussian-rational periods.

A :class:`HodgeBasis` splits ``lattice (x) C`` into vectors tagged
``(2,0)``, ``(1,1)`` and ``(0,2)``.  Polynomials rewritten in the dual
coordinates of such a basis have a bidegree per monomial: a ``(2,0)``
coordinate contributes ``(2,0)`` per power, a ``(0,2)`` coordinate ``(0,2)``
and a ``(1,1)`` coordinate ``(1,1)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .errors import DimensionMismatch, InvalidInput, SingularBasis
from .linalg import rank as _rank
from .series import HomogeneousPolynomial, TruncatedSeries, evaluate, expand_structure

H20, H11, H02 = "2,0", "1,1", "0,2"
TAGS = (H20, H11, H02)


class GaussianRational:
    """Exact ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        return GaussianRational(other) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def is_real(self):
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}+{self.im}i"


def _conj(v):
    return tuple(GaussianRational._coerce(c).conjugate() for c in v)


def _bilinear(L, u, v):
    return sum((ui * q * vj for ui, row in zip(u, L.Q) for q, vj in zip(row, v) if q), GaussianRational())


@dataclass(frozen=True)
class HodgeBasis:
    """Tagged basis of ``lattice (x) C``.

    The ``(0,2)`` vectors must be the conjugates of the ``(2,0)`` vectors, in
    the same order.  Besides the period relations ``Q(w, w) = 0`` and
    ``Q(w, conj w) > 0`` we require the ``(2,0)`` span to be isotropic and
    ``Q``-orthogonal to the ``(1,1)`` vectors, as in a genuine Hodge structure.
    """

    lattice: object
    vectors: tuple  # of (tag, tuple of GaussianRational)

    def __post_init__(self):
        L = self.lattice
        vecs = []
        for tag, v in self.vectors:
            if tag not in TAGS:
                raise InvalidInput(f"unknown Hodge type tag {tag!r}")
            v = tuple(GaussianRational._coerce(c) if not isinstance(c, GaussianRational) else c for c in v)
            if len(v) != L.rank:
                raise DimensionMismatch("Hodge vector has the wrong length")
            vecs.append((tag, v))
        object.__setattr__(self, "vectors", tuple(vecs))
        if len(vecs) != L.rank:
            raise SingularBasis(f"{len(vecs)} vectors cannot form a basis in rank {L.rank}")
        if _rank([list(v) for _, v in vecs]) != L.rank:
            raise SingularBasis("Hodge vectors are linearly dependent")
        hol = self.holomorphic
        anti = [v for t, v in vecs if t == H02]
        if len(hol) != len(anti):
            raise InvalidInput("#(2,0) must equal #(0,2)")
        for w, wb in zip(hol, anti):
            if _conj(w) != wb:
                raise InvalidInput("each (0,2) vector must be the conjugate of the matching (2,0) vector")
        for t, v in vecs:
            if t == H11 and not all(c.is_real() for c in v):
                raise InvalidInput("(1,1) vectors must have real coordinates")
        for i, w in enumerate(hol):
            p = _bilinear(L, w, _conj(w))
            if not p.is_real() or p.re <= 0:
                raise InvalidInput("period relation Q(w, conj w) > 0 fails")
            for w2 in hol[i:]:
                if _bilinear(L, w, w2):
                    raise InvalidInput("period relation Q(w, w') = 0 fails")
            for t, v in vecs:
                if t == H11 and _bilinear(L, w, v):
                    raise InvalidInput("(1,1) vectors must be Q-orthogonal to the (2,0) part")

    @property
    def holomorphic(self):
        return [v for t, v in self.vectors if t == H20]

    @property
    def tags(self):
        return [t for t, _ in self.vectors]

    def columns(self):
        """Substitution rows: ``x_j = sum_k b_k[j] c_k``."""
        n = self.lattice.rank
        return [[v[j] for _, v in self.vectors] for j in range(n)]

    def conjugated(self):
        """Same basis with each (2,0) vector swapped with its (0,2) partner."""
        swap = {H20: H02, H02: H20, H11: H11}
        return HodgeBasis(self.lattice, tuple((swap[t], v) for t, v in self.vectors))


def to_hodge_coordinates(hb, f):
    """Rewrite a homogeneous polynomial in the dual coordinates of ``hb``."""
    if f.nvars != hb.lattice.rank:
        raise DimensionMismatch("polynomial and basis ranks differ")
    return f.substitute(hb.columns())


def bidegree(hb, exponent):
    tags = hb.tags
    p = sum(k for t, k in zip(tags, exponent) if t == H20)
    q = sum(k for t, k in zip(tags, exponent) if t == H02)
    r = sum(k for t, k in zip(tags, exponent) if t == H11)
    return 2 * p + r, 2 * q + r


@dataclass
class PurityReport:
    pure: bool
    violations: list = field(default_factory=list)  # (d, exponent, coefficient, bidegree)


def purity_check(hb, series):
    """Every monomial of part ``d`` must have bidegree ``(d, d)`` in Hodge coordinates."""
    violations = []
    for d, part in enumerate(series.parts):
        if part.is_zero():
            continue
        for e, c in to_hodge_coordinates(hb, part).sorted_terms():
            bd = bidegree(hb, e)
            if bd != (d, d):
                violations.append((d, e, c, bd))
    return PurityReport(pure=not violations, violations=violations)


def restrict_to_type(hb, series, tag=H02):
    """Hodge-coordinate form of ``series`` with every coordinate not of type ``tag`` set to zero."""
    keep = [t == tag for t in hb.tags]
    parts = []
    for part in series.parts:
        h = to_hodge_coordinates(hb, part)
        terms = {e: c for e, c in h.terms.items() if all(k == 0 or ok for k, ok in zip(e, keep))}
        parts.append(HomogeneousPolynomial(h.nvars, h.degree, terms, check=False))
    return TruncatedSeries(series.nvars, series.D, parts)


@dataclass
class Type11Report:
    ok: bool
    offenders: list = field(default_factory=list)  # (K, index of w, Q(K, w))


def classes_type11_check(hb, s):
    """A class is of type (1,1) iff it is Q-orthogonal to every (2,0) vector."""
    offenders = []
    for K in s.classes:
        for i, w in enumerate(hb.holomorphic):
            v = _bilinear(hb.lattice, K, w)
            if v:
                offenders.append((K, i, v))
                break
    return Type11Report(ok=not offenders, offenders=offenders)


@dataclass
class FormsReport:
    hypotheses_met: bool
    holds: bool = False
    point: tuple = None
    exponent: Fraction = None  # Q(x,x)/2
    period: Fraction = None  # Q(w, conj w)
    q0: Fraction = None
    checks: dict = field(default_factory=dict)
    offenders: list = field(default_factory=list)


def forms_identity_check(hb, s, omega_index=0, D=8):
    """Check ``q(w + conj w) = q0 * exp(Q(w, conj w))`` symbolically and on the truncation."""
    t11 = classes_type11_check(hb, s)
    if not t11.ok:
        return FormsReport(hypotheses_met=False, offenders=t11.offenders)
    hol = hb.holomorphic
    if not 0 <= omega_index < len(hol):
        raise InvalidInput(f"no (2,0) vector with index {omega_index}")
    w = hol[omega_index]
    L = hb.lattice
    x = tuple(2 * c.re for c in w)
    period = _bilinear(L, w, _conj(w)).re
    exponent, pairs = evaluate(s, x, L)
    q0 = s.q0
    checks = {
        "classes_orthogonal_to_point": all(v == 0 for _, v in pairs),
        "exponent_equals_period": exponent == period,
    }
    truncated = expand_structure(s, D).evaluate(x)
    partial, term = Fraction(0), Fraction(1)
    for m in range(D // 2 + 1):
        if m:
            term = term * period / m
        partial += term
    checks["truncation_matches"] = truncated == q0 * partial
    return FormsReport(hypotheses_met=True, holds=all(checks.values()), point=x,
                       exponent=exponent, period=period, q0=q0, checks=checks)
