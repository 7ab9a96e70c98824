"""Integral lattices with a symmetric intersection form.

Classes are plain tuples of integers, coordinates in the fixed lattice basis.
Everything here is exact; there is no tolerance anywhere.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DimensionMismatch, InvalidInput
from .linalg import rank as _rank


@dataclass(frozen=True)
class IntersectionLattice:
    """Finite-rank lattice with intersection form ``Q`` (symmetric, integral)."""

    Q: tuple

    def __post_init__(self):
        Q = tuple(tuple(row) for row in self.Q)
        n = len(Q)
        for row in Q:
            if len(row) != n:
                raise DimensionMismatch("intersection form must be square")
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise InvalidInput(f"intersection form entries must be integers, got {x!r}")
        for i in range(n):
            for j in range(i):
                if Q[i][j] != Q[j][i]:
                    raise InvalidInput(f"intersection form is not symmetric at ({i}, {j})")
        object.__setattr__(self, "Q", Q)

    @classmethod
    def diagonal(cls, *entries):
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def rank(self):
        return len(self.Q)

    def check(self, x, what="class"):
        if len(x) != self.rank:
            raise DimensionMismatch(f"{what} has length {len(x)}, lattice rank is {self.rank}")

    def apply(self, x):
        """``Q x``: the dual coordinates of the linear form ``y -> Q(x, y)``."""
        self.check(x)
        return tuple(sum(q * xi for q, xi in zip(row, x)) for row in self.Q)

    def pair(self, x, y):
        self.check(x)
        self.check(y)
        return sum(xi * q * yj for xi, row in zip(x, self.Q) if xi for q, yj in zip(row, y) if q)

    def square(self, x):
        return self.pair(x, x)

    def is_nondegenerate(self):
        return _rank([list(row) for row in self.Q]) == self.rank

    def gram(self, basis):
        """Gram matrix of ``Q`` restricted to the span of ``basis``."""
        return tuple(tuple(self.pair(u, v) for v in basis) for u in basis)


def as_class(coords, rank=None):
    """Validate integer coordinates and return them as a tuple."""
    out = []
    for c in coords:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise InvalidInput(f"class coordinate {c} is not an integer")
            c = c.numerator
        if isinstance(c, bool) or not isinstance(c, int):
            raise InvalidInput(f"class coordinate {c!r} is not an integer")
        out.append(c)
    if rank is not None and len(out) != rank:
        raise DimensionMismatch(f"class has length {len(out)}, expected {rank}")
    return tuple(out)


def add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def neg(x):
    return tuple(-a for a in x)


def scale(c, x):
    return tuple(c * a for a in x)


def pair(L, x, y):
    """Evaluate ``Q(x, y) = x^T Q y``."""
    if len(x) != len(y):
        raise DimensionMismatch("classes have different lengths")
    return L.pair(x, y)


def parity_equal(L, x, w):
    """True iff ``x`` reduces to the mod-2 vector ``w`` coordinatewise."""
    L.check(x)
    if len(w) != len(x):
        raise DimensionMismatch("parity vector has the wrong length")
    return all((a - b) % 2 == 0 for a, b in zip(x, w))


def signature(L):
    """Return ``(n_plus, n_minus, n_zero)`` by symmetric Gaussian reduction over Q.

    Sylvester's law of inertia makes the counts basis independent, so the
    congruence moves used here (pivoting, adding a row/column pair) are safe.
    """
    M = [[Fraction(x) for x in row] for row in L.Q]
    idx = list(range(len(M)))
    n_plus = n_minus = 0
    while idx:
        piv = next((i for i in idx if M[i][i]), None)
        if piv is None:
            pair_ij = next(((i, j) for i in idx for j in idx if i < j and M[i][j]), None)
            if pair_ij is None:
                break
            i, j = pair_ij
            # congruence e_i -> e_i + e_j makes the (i, i) entry 2 M[i][j] != 0
            for k in range(len(M)):
                M[i][k] += M[j][k]
            for k in range(len(M)):
                M[k][i] += M[k][j]
            piv = i
        d = M[piv][piv]
        if d > 0:
            n_plus += 1
        else:
            n_minus += 1
        idx.remove(piv)
        col = [M[j][piv] for j in range(len(M))]
        for j in idx:
            if col[j]:
                f = col[j] / d
                for k in idx:
                    M[j][k] -= f * M[piv][k]
    return n_plus, n_minus, len(L.Q) - n_plus - n_minus


@dataclass(frozen=True)
class SurfaceDescriptor:
    """Input data for one surface.

    ``cone`` is a :class:`~kmworkbench.cone.RationalCone`, ``hodge`` a
    :class:`~kmworkbench.hodge.HodgeBasis`, ``constraints`` a tuple of
    :class:`~kmworkbench.structure.SurfaceConstraint`.
    """

    lattice: IntersectionLattice
    b_plus: int
    w2: tuple
    KX: tuple
    ns_basis: Optional[tuple] = None
    cone: object = None
    hodge: object = None
    constraints: tuple = ()
    exceptional: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        L = self.lattice
        if self.b_plus < 3 or self.b_plus % 2 == 0:
            raise InvalidInput(f"b_plus must be odd and >= 3, got {self.b_plus}")
        w2 = tuple(int(v) % 2 for v in self.w2)
        if len(w2) != L.rank:
            raise DimensionMismatch("w2 has the wrong length")
        object.__setattr__(self, "w2", w2)
        KX = as_class(self.KX, L.rank)
        object.__setattr__(self, "KX", KX)
        if not parity_equal(L, KX, w2):
            raise InvalidInput("KX is not congruent to w2 mod 2")
        if self.ns_basis is not None:
            basis = tuple(as_class(b, L.rank) for b in self.ns_basis)
            object.__setattr__(self, "ns_basis", basis)
            gram = IntersectionLattice(L.gram(basis))
            if not gram.is_nondegenerate():
                raise InvalidInput("intersection form restricted to the NS basis is degenerate")
        for i in self.exceptional:
            if not 0 <= i < L.rank:
                raise DimensionMismatch(f"exceptional index {i} out of range")

    @property
    def rank(self):
        return self.lattice.rank

    def working_lattice(self):
        """The NS sublattice if one is given, else the whole lattice."""
        if self.ns_basis is None:
            return self.lattice
        return IntersectionLattice(self.lattice.gram(self.ns_basis))
