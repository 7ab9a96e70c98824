"""JSON file formats with exact rational literals.

Rationals are written as reduced ``"p/q"`` strings (or ``"p"``); integers may
also appear as JSON integers.  Floating-point literals are rejected.  Output
is canonical: sorted keys, sorted monomials and terms, two-space indent.
"""

import json
import re
from fractions import Fraction

from .cone import RationalCone
from .errors import DimensionMismatch, ParseError, WorkbenchError
from .hodge import TAGS, GaussianRational, HodgeBasis
from .lattice import IntersectionLattice, SurfaceDescriptor
from .series import HomogeneousPolynomial, KMStructure, TruncatedSeries
from .structure import RawEntry, RawPolynomialFamily, SurfaceConstraint

_RATIONAL = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def rational_str(x):
    return str(Fraction(x))


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def loads(text):
    floats = []

    def no_float(s):
        floats.append(s)
        raise ValueError(s)

    try:
        return json.loads(text, parse_float=no_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError:
        lit = floats[0]
        pos = text.find(lit)
        line = text.count("\n", 0, pos) + 1
        col = pos - text.rfind("\n", 0, pos)
        raise ParseError(f"floating-point literal {lit} is not allowed; use a \"p/q\" string",
                         line, col) from None


def load_file(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _where(path):
    return "/".join(str(p) for p in path) or "<root>"


def _req(obj, key, path):
    if not isinstance(obj, dict):
        raise ParseError(f"{_where(path)}: expected an object")
    if key not in obj:
        raise ParseError(f"{_where(path)}: missing key {key!r}")
    return obj[key]


def parse_int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{_where(path)}: expected an integer, got {v!r}")
    return v


def parse_rational(v, path):
    if isinstance(v, bool):
        raise ParseError(f"{_where(path)}: expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str) and _RATIONAL.match(v):
        try:
            return Fraction(v.replace(" ", ""))
        except ZeroDivisionError:
            raise ParseError(f"{_where(path)}: zero denominator in {v!r}") from None
    raise ParseError(f"{_where(path)}: expected a rational like \"p/q\", got {v!r}")


def _list(v, path):
    if not isinstance(v, list):
        raise ParseError(f"{_where(path)}: expected a list")
    return v


def parse_int_vector(v, path, length=None):
    out = tuple(parse_int(x, path + [i]) for i, x in enumerate(_list(v, path)))
    if length is not None and len(out) != length:
        raise ParseError(f"{_where(path)}: expected length {length}, got {len(out)}")
    return out


def parse_rational_vector(v, path, length=None):
    out = tuple(parse_rational(x, path + [i]) for i, x in enumerate(_list(v, path)))
    if length is not None and len(out) != length:
        raise ParseError(f"{_where(path)}: expected length {length}, got {len(out)}")
    return out


def _wrap(fn, *args):
    # semantic validation errors inside constructors become parse errors
    try:
        return fn(*args)
    except ParseError:
        raise
    except WorkbenchError as exc:
        raise ParseError(str(exc)) from None


# ---- surface descriptor -----------------------------------------------------

def parse_lattice(obj, path=()):
    path = list(path)
    Q = _list(_req(obj, "Q", path), path + ["Q"])
    rank = len(Q)
    if "rank" in obj and parse_int(obj["rank"], path + ["rank"]) != rank:
        raise ParseError(f"{_where(path + ['rank'])}: rank disagrees with Q")
    rows = tuple(parse_int_vector(r, path + ["Q", i], rank) for i, r in enumerate(Q))
    return _wrap(IntersectionLattice, rows)


def parse_surface(obj):
    L = parse_lattice(obj)
    n = L.rank
    b_plus = parse_int(_req(obj, "b_plus", []), ["b_plus"])
    w2 = parse_int_vector(_req(obj, "w2", []), ["w2"], n)
    KX = parse_int_vector(_req(obj, "KX", []), ["KX"], n)
    ns = None
    if obj.get("ns_basis") is not None:
        ns = tuple(parse_int_vector(b, ["ns_basis", i], n) for i, b in enumerate(_list(obj["ns_basis"], ["ns_basis"])))
    cone = None
    if obj.get("cone") is not None:
        gens = _list(_req(obj["cone"], "generators", ["cone"]), ["cone", "generators"])
        cone = _wrap(RationalCone, n, tuple(parse_rational_vector(g, ["cone", "generators", i], n)
                                            for i, g in enumerate(gens)))
    hodge = None
    if obj.get("hodge") is not None:
        vecs = []
        for i, v in enumerate(_list(_req(obj["hodge"], "vectors", ["hodge"]), ["hodge", "vectors"])):
            p = ["hodge", "vectors", i]
            tag = _req(v, "type", p)
            if tag not in TAGS:
                raise ParseError(f"{_where(p + ['type'])}: unknown Hodge type {tag!r}")
            re_ = parse_rational_vector(_req(v, "re", p), p + ["re"], n)
            im = parse_rational_vector(v.get("im", [0] * n), p + ["im"], n)
            vecs.append((tag, tuple(GaussianRational(a, b) for a, b in zip(re_, im))))
        hodge = _wrap(HodgeBasis, L, tuple(vecs))
    constraints = []
    for i, c in enumerate(_list(obj.get("surfaces", []), ["surfaces"])):
        p = ["surfaces", i]
        sigma = parse_int_vector(_req(c, "class", p), p + ["class"], n)
        genus = parse_int(_req(c, "genus", p), p + ["genus"])
        connected = c.get("connected", True)
        if not isinstance(connected, bool):
            raise ParseError(f"{_where(p + ['connected'])}: expected true or false")
        constraints.append(_wrap(SurfaceConstraint, sigma, genus, connected))
    exceptional = parse_int_vector(obj.get("exceptional", []), ["exceptional"])
    return _wrap(SurfaceDescriptor, L, b_plus, w2, KX, ns, cone, hodge, tuple(constraints),
                 exceptional, str(obj.get("name", "")))


def dump_surface(surf):
    out = {
        "rank": surf.rank,
        "Q": [list(r) for r in surf.lattice.Q],
        "b_plus": surf.b_plus,
        "w2": list(surf.w2),
        "KX": list(surf.KX),
    }
    if surf.name:
        out["name"] = surf.name
    if surf.ns_basis is not None:
        out["ns_basis"] = [list(b) for b in surf.ns_basis]
    if surf.cone is not None:
        out["cone"] = {"generators": [[rational_str(x) for x in g] for g in surf.cone.generators]}
    if surf.hodge is not None:
        out["hodge"] = {"vectors": [{"type": t, "re": [rational_str(c.re) for c in v],
                                     "im": [rational_str(c.im) for c in v]} for t, v in surf.hodge.vectors]}
    if surf.constraints:
        out["surfaces"] = [{"class": list(c.sigma), "genus": c.genus, "connected": c.connected}
                           for c in surf.constraints]
    if surf.exceptional:
        out["exceptional"] = list(surf.exceptional)
    return out


# ---- structures ---------------------------------------------------------------

def parse_structure(obj, lattice):
    n = lattice.rank
    if isinstance(obj, list):
        terms_raw, path = obj, []
    else:
        if "rank" in obj and parse_int(obj["rank"], ["rank"]) != n:
            raise DimensionMismatch(f"structure has rank {obj['rank']}, surface has rank {n}")
        terms_raw, path = _list(_req(obj, "terms", []), ["terms"]), ["terms"]
    terms = []
    for i, t in enumerate(terms_raw):
        p = path + [i]
        a = parse_rational(_req(t, "a", p), p + ["a"])
        K = parse_int_vector(_req(t, "K", p), p + ["K"])
        if len(K) != n:
            raise DimensionMismatch(f"{_where(p + ['K'])}: class has length {len(K)}, surface has rank {n}")
        terms.append((a, K))
    return _wrap(KMStructure, lattice, tuple(terms))


def dump_structure(s):
    return {"rank": s.rank, "terms": [{"a": rational_str(a), "K": list(K)} for a, K in s.terms]}


# ---- series -------------------------------------------------------------------

def _parse_monomials(lst, path, nvars):
    terms = {}
    for i, m in enumerate(_list(lst, path)):
        p = path + [i]
        e = parse_int_vector(_req(m, "e", p), p + ["e"], nvars)
        if any(k < 0 for k in e):
            raise ParseError(f"{_where(p + ['e'])}: negative exponent")
        if e in terms:
            raise ParseError(f"{_where(p + ['e'])}: repeated monomial")
        terms[e] = parse_rational(_req(m, "c", p), p + ["c"])
    return terms


def _dump_monomials(poly):
    return [{"e": list(e), "c": rational_str(c)} for e, c in poly.sorted_terms()]


def parse_series(obj):
    n = parse_int(_req(obj, "rank", []), ["rank"])
    D = parse_int(_req(obj, "D", []), ["D"])
    parts = [None] * (D + 1) if D >= 0 else []
    for i, part in enumerate(_list(_req(obj, "parts", []), ["parts"])):
        p = ["parts", i]
        d = parse_int(_req(part, "d", p), p + ["d"])
        if not 0 <= d <= D:
            raise ParseError(f"{_where(p + ['d'])}: degree {d} outside 0..{D}")
        if parts[d] is not None:
            raise ParseError(f"{_where(p + ['d'])}: degree {d} given twice")
        terms = _parse_monomials(_req(part, "monomials", p), p + ["monomials"], n)
        parts[d] = _wrap(HomogeneousPolynomial, n, d, terms)
    return _wrap(TruncatedSeries, n, D, parts)


def dump_series(q):
    return {"rank": q.nvars, "D": q.D,
            "parts": [{"d": d, "monomials": _dump_monomials(p)} for d, p in enumerate(q.parts)]}


# ---- raw polynomial families ----------------------------------------------------

def parse_raw_family(obj):
    n = parse_int(_req(obj, "rank", []), ["rank"])
    entries = []
    for i, e in enumerate(_list(_req(obj, "entries", []), ["entries"])):
        p = ["entries", i]
        k = parse_int(_req(e, "k", p), p + ["k"])
        j = parse_int(_req(e, "j", p), p + ["j"])
        terms = _parse_monomials(_req(e, "monomials", p), p + ["monomials"], n)
        degrees = {sum(x) for x in terms}
        if len(degrees) > 1:
            raise ParseError(f"{_where(p)}: polynomial is not homogeneous")
        deg = degrees.pop() if degrees else parse_int(e.get("degree", 0), p + ["degree"])
        poly = _wrap(HomogeneousPolynomial, n, deg, terms)
        entries.append(_wrap(RawEntry, k, j, poly))
    fam = _wrap(RawPolynomialFamily, n, tuple(entries))
    b_plus = obj.get("b_plus")
    if b_plus is not None:
        b_plus = parse_int(b_plus, ["b_plus"])
    return fam, b_plus


def dump_raw_family(fam, b_plus=None):
    out = {"rank": fam.nvars,
           "entries": [{"k": e.k, "j": e.j, "degree": e.poly.degree, "monomials": _dump_monomials(e.poly)}
                       for e in fam.entries]}
    if b_plus is not None:
        out["b_plus"] = b_plus
    return out


# ---- candidate lists --------------------------------------------------------------

def parse_candidates(obj, rank):
    lst = obj["candidates"] if isinstance(obj, dict) else obj
    return [parse_int_vector(K, ["candidates", i], rank) for i, K in enumerate(_list(lst, ["candidates"]))]


def dump_candidates(cands, rank):
    return {"rank": rank, "count": len(cands), "candidates": [list(K) for K in sorted(cands)]}
