"""Truncated multivariate power series with exact coefficients.

A series is a function of ``x`` in the lattice, written in the dual
coordinates ``x_0, ..., x_{n-1}`` of the fixed basis.  Part ``d`` of a
:class:`TruncatedSeries` stores ``q_d / d!``, so that multiplication and
directional differentiation are the natural operations.

Coefficients are ``Fraction`` by default; the polynomial code only needs
``+``, ``*`` and truthiness, so Gaussian rationals work too.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

from .errors import DimensionMismatch, InvalidInput, NegativeOrder
from .lattice import IntersectionLattice, as_class


def _add_into(acc, terms, c=1):
    for e, v in terms.items():
        s = acc.get(e, 0) + c * v
        if s:
            acc[e] = s
        else:
            acc.pop(e, None)


def _mul_terms(A, B):
    out = {}
    for ea, ca in A.items():
        for eb, cb in B.items():
            e = tuple(i + j for i, j in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


class HomogeneousPolynomial:
    """Homogeneous polynomial of a fixed degree in ``nvars`` variables.

    ``terms`` maps exponent tuples to nonzero coefficients.  Treat instances
    as immutable.
    """

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars, degree, terms=None, check=True):
        self.nvars = nvars
        self.degree = degree
        terms = dict(terms or {})
        if check:
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DimensionMismatch(f"exponent {e} has the wrong length for {nvars} variables")
                if any(k < 0 for k in e) or sum(e) != degree:
                    raise InvalidInput(f"exponent {e} does not have degree {degree}")
                if isinstance(c, int):
                    c = Fraction(c)
                if c:
                    clean[e] = c
            terms = clean
        self.terms = terms

    @classmethod
    def zero(cls, nvars, degree):
        return cls(nvars, degree, {}, check=False)

    @classmethod
    def constant(cls, nvars, c):
        c = Fraction(c) if isinstance(c, int) else c
        return cls(nvars, 0, {(0,) * nvars: c} if c else {}, check=False)

    @classmethod
    def linear(cls, coeffs):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c) if isinstance(c, int) else c
        return cls(n, 1, terms, check=False)

    @classmethod
    def quadratic_form(cls, Q):
        """The polynomial ``x -> Q(x, x)``."""
        n = len(Q)
        terms = {}
        for i in range(n):
            for j in range(i, n):
                c = Q[i][j] if i == j else 2 * Q[i][j]
                if c:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = Fraction(c)
        return cls(n, 2, terms, check=False)

    def is_zero(self):
        return not self.terms

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch("polynomials live in different numbers of variables")

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.nvars == other.nvars
        return self.nvars == other.nvars and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check_compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise InvalidInput("cannot add homogeneous polynomials of different degrees")
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return HomogeneousPolynomial(self.nvars, self.degree, acc, check=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return HomogeneousPolynomial.zero(self.nvars, self.degree)
        return HomogeneousPolynomial(self.nvars, self.degree,
                                     {e: c * v for e, v in self.terms.items()}, check=False)

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return self.scale(other)
        self._check_compatible(other)
        return HomogeneousPolynomial(self.nvars, self.degree + other.degree,
                                     _mul_terms(self.terms, other.terms), check=False)

    __rmul__ = __mul__

    def derivative(self, v):
        """Directional derivative along ``v``."""
        if len(v) != self.nvars:
            raise DimensionMismatch("direction has the wrong length")
        if self.degree == 0:
            return HomogeneousPolynomial.zero(self.nvars, 0)
        out = {}
        nz = [(j, vj) for j, vj in enumerate(v) if vj]
        for e, c in self.terms.items():
            for j, vj in nz:
                k = e[j]
                if k:
                    e2 = e[:j] + (k - 1,) + e[j + 1:]
                    s = out.get(e2, 0) + c * k * vj
                    if s:
                        out[e2] = s
                    else:
                        del out[e2]
        return HomogeneousPolynomial(self.nvars, self.degree - 1, out, check=False)

    def evaluate(self, x):
        if len(x) != self.nvars:
            raise DimensionMismatch("point has the wrong length")
        powers = [[1] * (self.degree + 1) for _ in x]
        for j, xj in enumerate(x):
            for k in range(1, self.degree + 1):
                powers[j][k] = powers[j][k - 1] * xj
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for j, k in enumerate(e):
                if k:
                    t = t * powers[j][k]
            total = total + t
        return total

    def substitute(self, columns):
        """Compose with the linear map ``x_j = sum_k columns[j][k] t_k``.

        ``columns`` has one row per current variable; the result lives in
        ``len(columns[0])`` variables.
        """
        if len(columns) != self.nvars:
            raise DimensionMismatch("substitution has the wrong number of rows")
        m = len(columns[0]) if columns else 0
        forms = [HomogeneousPolynomial.linear(row).terms for row in columns]
        cache = {}

        def power(j, k):
            key = (j, k)
            if key not in cache:
                if k == 0:
                    cache[key] = {(0,) * m: 1}
                else:
                    cache[key] = _mul_terms(power(j, k - 1), forms[j])
            return cache[key]

        out = {}
        for e, c in self.terms.items():
            t = {(0,) * m: c}
            for j, k in enumerate(e):
                if k:
                    t = _mul_terms(t, power(j, k))
            _add_into(out, t)
        return HomogeneousPolynomial(m, self.degree, out, check=False)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if self.is_zero():
            return f"HomogeneousPolynomial({self.nvars}, {self.degree}, 0)"
        body = " + ".join(f"{c}*x^{list(e)}" for e, c in self.sorted_terms())
        return f"HomogeneousPolynomial({self.nvars}, {self.degree}, {body})"


class TruncatedSeries:
    """Parts ``0..D`` of a power series; ``parts[d]`` is homogeneous of degree ``d``.

    ``D = -1`` is the series carrying no information (e.g. after
    differentiating past the truncation).
    """

    __slots__ = ("nvars", "D", "parts")

    def __init__(self, nvars, D, parts=None):
        if D < -1:
            raise InvalidInput("truncation degree must be >= -1")
        self.nvars = nvars
        self.D = D
        parts = list(parts) if parts is not None else []
        if len(parts) > D + 1:
            raise InvalidInput("more parts than the truncation degree allows")
        parts += [None] * (D + 1 - len(parts))
        out = []
        for d, p in enumerate(parts):
            if p is None:
                p = HomogeneousPolynomial.zero(nvars, d)
            elif p.is_zero():
                p = HomogeneousPolynomial.zero(nvars, d)
            elif p.degree != d or p.nvars != nvars:
                raise InvalidInput(f"part {d} has degree {p.degree} in {p.nvars} variables")
            out.append(p)
        self.parts = tuple(out)

    @classmethod
    def zero(cls, nvars, D):
        return cls(nvars, D)

    @classmethod
    def one(cls, nvars, D):
        return cls(nvars, D, [HomogeneousPolynomial.constant(nvars, 1)] if D >= 0 else [])

    def part(self, d):
        if d > self.D:
            raise InvalidInput(f"degree {d} is beyond the truncation {self.D}")
        return self.parts[d]

    def is_zero(self):
        return all(p.is_zero() for p in self.parts)

    def truncate(self, D):
        if D > self.D:
            raise InvalidInput("cannot extend a truncated series")
        return TruncatedSeries(self.nvars, D, self.parts[:D + 1])

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch("series live on lattices of different rank")

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.D == other.D and self.parts == other.parts

    def __add__(self, other):
        self._check_compatible(other)
        D = min(self.D, other.D)
        return TruncatedSeries(self.nvars, D, [a + b for a, b in zip(self.parts[:D + 1], other.parts)])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TruncatedSeries(self.nvars, self.D, [p.scale(c) for p in self.parts])

    def evaluate(self, x):
        if len(x) != self.nvars:
            raise DimensionMismatch("point has the wrong length")
        return sum((p.evaluate(x) for p in self.parts), Fraction(0))

    def substitute(self, columns):
        m = len(columns[0]) if columns else 0
        return TruncatedSeries(m, self.D, [p.substitute(columns) for p in self.parts])

    def __repr__(self):
        return f"TruncatedSeries(nvars={self.nvars}, D={self.D}, parts={list(self.parts)})"


@dataclass(frozen=True)
class KMStructure:
    """The closed form ``exp(Q/2) * sum_i a_i exp(K_i)``.

    ``terms`` is a tuple of ``(a, K)`` with ``a`` a nonzero ``Fraction`` and
    ``K`` an integer tuple; terms are kept sorted by class.
    """

    lattice: IntersectionLattice
    terms: tuple = ()

    def __post_init__(self):
        n = self.lattice.rank
        clean = []
        seen = set()
        for a, K in self.terms:
            a = Fraction(a)
            if a == 0:
                raise InvalidInput("structure coefficients must be nonzero")
            K = as_class(K, n)
            if K in seen:
                raise InvalidInput(f"class {K} appears twice")
            seen.add(K)
            clean.append((a, K))
        clean.sort(key=lambda t: t[1])
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def rank(self):
        return self.lattice.rank

    @property
    def classes(self):
        return tuple(K for _, K in self.terms)

    @property
    def q0(self):
        """Degree-zero value ``sum_i a_i``."""
        return sum((a for a, _ in self.terms), Fraction(0))

    def __len__(self):
        return len(self.terms)


def _linear_form(L, K):
    return HomogeneousPolynomial.linear(L.apply(K)).terms


def _int_linear(L, K):
    n = L.rank
    return {tuple(int(i == j) for i in range(n)): c for j, c in enumerate(L.apply(K)) if c}


def _int_quadratic(Q):
    return {e: int(c) for e, c in HomogeneousPolynomial.quadratic_form(Q).terms.items()}


def _lcm_denominators(values):
    out = 1
    for v in values:
        d = Fraction(v).denominator
        out = out * d // gcd(out, d)
    return out


def _exp_parts_scaled(nvars, D, lin, quad):
    # G_d = d! * (degree-d part of exp(Q(x,x)/2 + l(x))), all integral.
    # The Euler operator gives  d F_d = l F_{d-1} + Q F_{d-2},  hence
    #   G_d = l G_{d-1} + (d-1) Q G_{d-2}.
    G = [{(0,) * nvars: 1}]
    for d in range(1, D + 1):
        nxt = _mul_terms(G[d - 1], lin) if lin else {}
        if quad and d >= 2:
            _add_into(nxt, _mul_terms(G[d - 2], quad), d - 1)
        G.append(nxt)
    return G


def _from_scaled(nvars, acc, denominators):
    return [HomogeneousPolynomial(nvars, d, {e: Fraction(v, den) for e, v in t.items()}, check=False)
            for d, (t, den) in enumerate(zip(acc, denominators))]


def expand_structure(s, D, lattice=None):
    """Truncation at degree ``D`` of ``exp(Q(x,x)/2) * sum_i a_i exp(K_i . x)``."""
    if D < 0:
        raise InvalidInput("truncation degree must be >= 0")
    L = lattice or s.lattice
    n = L.rank
    if s.rank != n:
        raise DimensionMismatch("structure and lattice ranks differ")
    quad = _int_quadratic(L.Q)
    A = _lcm_denominators(a for a, _ in s.terms)
    acc = [{} for _ in range(D + 1)]
    for a, K in s.terms:
        weight = int(a * A)
        for d, p in enumerate(_exp_parts_scaled(n, D, _int_linear(L, K), quad)):
            _add_into(acc[d], p, weight)
    return TruncatedSeries(n, D, _from_scaled(n, acc, [A * factorial(d) for d in range(D + 1)]))


def expand_exponential_sum(s, D, lattice=None):
    """Truncation of ``sum_i a_i exp(K_i . x)`` (no Gaussian factor)."""
    L = lattice or s.lattice
    n = L.rank
    acc = [{} for _ in range(D + 1)]
    for a, K in s.terms:
        lin = _linear_form(L, K)
        term = {(0,) * n: a}
        for d in range(D + 1):
            if d:
                term = {e: c / d for e, c in _mul_terms(term, lin).items()}
            _add_into(acc[d], term)
    return TruncatedSeries(n, D, [HomogeneousPolynomial(n, d, t, check=False) for d, t in enumerate(acc)])


def gaussian_series(L, D, sign=1):
    """Truncation of ``exp(sign * Q(x,x)/2)``."""
    if sign == 1:
        return expand_structure(KMStructure(L, ((1, (0,) * L.rank),)), D)
    return normalize_C(TruncatedSeries.one(L.rank, D), L)


def evaluate(obj, x, lattice=None):
    """Evaluate a series at ``x``, or return closed-form exponent data for a structure.

    For a :class:`KMStructure` the result is ``(Q(x,x)/2, [(a_i, K_i . x), ...])``
    so that the value ``sum_i a_i exp(Q(x,x)/2 + K_i . x)`` stays symbolic.
    """
    x = [Fraction(v) for v in x]
    if isinstance(obj, TruncatedSeries):
        return obj.evaluate(x)
    L = lattice or obj.lattice
    L.check(x, "point")
    half_square = Fraction(L.pair(x, x), 2)
    return half_square, [(a, L.pair(K, x)) for a, K in obj.terms]


def mul_truncated(f, g):
    """Cauchy product, truncated at ``min(f.D, g.D)``."""
    f._check_compatible(g)
    D = min(f.D, g.D)
    n = f.nvars
    acc = [{} for _ in range(D + 1)]
    for i in range(D + 1):
        a = f.parts[i].terms
        if not a:
            continue
        for j in range(D + 1 - i):
            b = g.parts[j].terms
            if b:
                _add_into(acc[i + j], _mul_terms(a, b))
    return TruncatedSeries(n, D, [HomogeneousPolynomial(n, d, t, check=False) for d, t in enumerate(acc)])


def normalize_C(q, L):
    """Multiply by ``exp(-Q(x,x)/2)``, truncating at ``q.D``.

    Equivalent to ``mul_truncated(exp(-Q/2), q)``; each part of ``q`` is pushed
    through repeated multiplication by the (sparse) quadratic form instead,
    in integers over a common denominator.
    """
    if q.nvars != L.rank:
        raise DimensionMismatch("series and lattice ranks differ")
    n, D = q.nvars, q.D
    quad = _int_quadratic(L.Q)
    M = _lcm_denominators(c for p in q.parts for c in p.terms.values())
    # degree-d denominator 2^m m! with m = d // 2 covers every term landing there
    dens = [2 ** (d // 2) * factorial(d // 2) for d in range(D + 1)]
    acc = [{} for _ in range(D + 1)]
    for j, p in enumerate(q.parts):
        t = {e: int(c * M) for e, c in p.terms.items()}
        m = 0
        while t and j + 2 * m <= D:
            d = j + 2 * m
            _add_into(acc[d], t, (-1) ** m * (dens[d] // (2 ** m * factorial(m))))
            if not quad:
                break
            t = _mul_terms(t, quad)
            m += 1
    return TruncatedSeries(n, D, _from_scaled(n, acc, [M * den for den in dens]))


def contract(f, v, r):
    """``r``-fold directional derivative along ``v``; truncation drops to ``D - r``.

    With parts stored as ``q_n / n!`` this is exactly slot contraction of the
    symmetric multilinear forms: ``q(v^r, x^{n-r}) / (n-r)!``.
    """
    if r < 0:
        raise NegativeOrder(f"contraction order must be >= 0, got {r}")
    if len(v) != f.nvars:
        raise DimensionMismatch("direction has the wrong length")
    v = [Fraction(c) for c in v]
    parts = list(f.parts)
    for _ in range(r):
        parts = [p.derivative(v) for p in parts[1:]]
    return TruncatedSeries(f.nvars, f.D - r, parts)
