"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or
directly with ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from cli_cases import CASES, FIXTURES, run_cli
from corpus import km_corpus
from hodge_corpus import RANK3, RANK4, Twisted, non_type11_structure, type11_structure
from oracles import brute_candidates_2d, hermite_numbers
from kmworkbench import formats
from kmworkbench.blowup import blowdown_E4, blowup_lattice, blowup_structure
from kmworkbench.cone import RationalCone, check_certificate, decompose, enumerate_candidates, gentype_bound_check
from kmworkbench.hodge import classes_type11_check, forms_identity_check, purity_check
from kmworkbench.lattice import IntersectionLattice, SurfaceDescriptor
from kmworkbench.recovery import recover_from_NS, recover_structure, restrict_series
from kmworkbench.series import (HomogeneousPolynomial, KMStructure, expand_exponential_sum, expand_structure,
                                normalize_C)
from kmworkbench.structure import RawEntry, RawPolynomialFamily, check_simple_type


CORPUS = km_corpus(seed=2024, count=200, max_rank=4)
TIME_LIMIT = 60.0


def report(number, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    return ok


def criterion_1():
    """Expand to D = 2p and recover: exact multiset equality on 200 structures in under 60 s."""
    start = time.perf_counter()
    mismatches = 0
    for s in CORPUS:
        back = recover_structure(expand_structure(s, 2 * len(s)), s.lattice, bound=5)
        mismatches += back != s
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < TIME_LIMIT
    return report(1, ok, f"{len(CORPUS) - mismatches}/{len(CORPUS)} round-trips exact in {elapsed:.1f} s "
                         f"(limit {TIME_LIMIT:.0f} s)")


def criterion_2():
    """exp(-Q/2) times the expansion equals the truncated sum of exponentials."""
    bad = 0
    for s in CORPUS:
        D = 2 * len(s)
        bad += normalize_C(expand_structure(s, D), s.lattice) != expand_exponential_sum(s, D)
    return report(2, bad == 0, f"{len(CORPUS) - bad}/{len(CORPUS)} normalizations exact")


def criterion_3():
    """Blow-down of the blow-up returns the expansion, for l = 1, 2 on the rank <= 3 corpus."""
    hermite_ok = all(hermite_numbers(b, 6)[4] == -2 and hermite_numbers(b, 6)[6] == 16 for b in (1, -1))
    small = [s for s in CORPUS if s.rank <= 3]
    bad = 0
    for l in (1, 2):
        bm_cache = {}
        for s in small:
            bm = bm_cache.setdefault(s.lattice, blowup_lattice(s.lattice, l))
            D = 4 * l + 2
            back = blowdown_E4(expand_structure(blowup_structure(s, bm), D), bm)
            bad += back != expand_structure(s, D - 4 * l)
    total = 2 * len(small)
    return report(3, hermite_ok and bad == 0,
                  f"He_4(+-1) = -2 and He_6(+-1) = 16: {hermite_ok}; {total - bad}/{total} blow-down round-trips exact")


def criterion_4():
    """Cone fixture: enumeration, negation closure, certificates, and K^2 <= KX^2 = 8 with equality only at +-KX."""
    L = IntersectionLattice.diagonal(1, -1)
    KX, w2 = (3, 1), (1, 1)
    cone = RationalCone(2, ((1, 1), (1, -1)))
    surf = SurfaceDescriptor(L, 3, w2, KX, cone=cone)
    cands = enumerate_candidates(KX, cone, w2)
    oracle = brute_candidates_2d(KX, cone.generators, w2, 20)
    negation_closed = sorted(tuple(-v for v in K) for K in cands) == cands
    certified = True
    for K in cands:
        dec = decompose(KX, K, cone)
        certified &= check_certificate(cone, dec.C, dec.C_certificate)
        certified &= check_certificate(cone, dec.D, dec.D_certificate)
    rep = gentype_bound_check(surf, cone, cands)
    kx2 = L.square(KX)
    bound_ok = rep.hypotheses_met and all(e["K2"] <= kx2 and e["identity_holds"] for e in rep.entries)
    equality = sorted(tuple(e["K"]) for e in rep.entries if e["K2"] == kx2)
    ok = (cands == oracle and negation_closed and certified and bound_ok and rep.ok
          and kx2 == 8 and equality == [(-3, -1), (3, 1)])
    return report(4, ok, f"{len(cands)} candidates (brute force {len(oracle)}), negation-closed {negation_closed}, "
                         f"certificates {certified}, max K^2 = {max(e['K2'] for e in rep.entries)} <= {kx2}, "
                         f"equality at {equality}")


def _hodge_corpus(seed):
    """Rank-3 Gaussian Hodge bases under random integral changes of basis."""
    rng = random.Random(seed)
    good, bad = [], []
    for _ in range(100):
        t = Twisted(rng)
        good.append((t.basis, t.pull_structure(type11_structure(rng, RANK3, max_terms=4, coord=4))))
    for _ in range(100):
        t = Twisted(rng)
        s, offender = non_type11_structure(rng, RANK3, max_terms=4, coord=4)
        s = t.pull_structure(s)
        offender = t.pull_structure(KMStructure(RANK3, ((1, offender),))).classes[0]
        bad.append((t.basis, s, offender))
    return good, bad


GOOD, BAD = _hodge_corpus(99)


def criterion_5():
    """Purity at every degree <= 8 for (1,1) structures; failure with a named offender otherwise."""
    good_ok = sum(classes_type11_check(hb, s).ok and purity_check(hb, expand_structure(s, 8)).pure
                  for hb, s in GOOD)
    bad_ok = 0
    for hb, s, offender in BAD:
        t11 = classes_type11_check(hb, s)
        named = [K for K, _, _ in t11.offenders] == [offender]
        bad_ok += (not t11.ok) and named and not purity_check(hb, expand_structure(s, 8)).pure
    return report(5, good_ok == 100 and bad_ok == 100,
                  f"{good_ok}/100 (1,1) structures pure, {bad_ok}/100 impure structures flagged with offender")


def criterion_6():
    """The holomorphic-form identity holds symbolically on every (1,1) structure."""
    held = 0
    for hb, s in GOOD:
        rep = forms_identity_check(hb, s, 0, 8)
        held += rep.hypotheses_met and rep.holds and rep.exponent == rep.period and rep.q0 == s.q0
    return report(6, held == 100, f"{held}/100 identities exact")


def criterion_7():
    """Recovery from the NS restriction agrees with full recovery on 100 (1,1) structures."""
    rng = random.Random(7)
    surf = SurfaceDescriptor(RANK4, 3, (0, 0, 0, 0), (0, 0, 0, 0), ns_basis=((0, 0, 1, 0), (0, 0, 0, 1)))
    agree = 0
    for _ in range(100):
        s = type11_structure(rng, RANK4, max_terms=5, coord=4)
        q = expand_structure(s, 2 * len(s))
        full = recover_structure(q, RANK4, bound=4)
        ns = recover_from_NS(restrict_series(q, surf.ns_basis), surf, bound=4)
        agree += ns == full == s and expand_structure(ns, q.D) == q
    return report(7, agree == 100, f"{agree}/100 NS recoveries equal the full recovery")


def criterion_8():
    """Simple-type classification of constructed and golden families."""
    Qx = HomogeneousPolynomial.quadratic_form(((1, 0), (0, -1)))
    Lx = HomogeneousPolynomial.linear((1, 2))
    constructed = [
        (RawPolynomialFamily(2, (RawEntry(1, 0, Qx), RawEntry(2, 2, Qx.scale(4)))), True),
        (RawPolynomialFamily(2, (RawEntry(1, 0, Qx + Lx * Lx), RawEntry(2, 2, Qx.scale(4)))), False),
        (RawPolynomialFamily(2, (RawEntry(1, 0, Qx), RawEntry(2, 2, Qx.scale(4)),
                                 RawEntry(2, 0, Lx * Lx * Qx), RawEntry(3, 2, Lx * Lx * Qx.scale(4)))), True),
        (RawPolynomialFamily(2, (RawEntry(1, 0, Qx), RawEntry(2, 2, Qx.scale(4)),
                                 RawEntry(2, 0, Lx * Lx * Qx), RawEntry(3, 2, Lx * Lx * Qx.scale(-4)))), False),
    ]
    golden = []
    for name, expected in (("raw_simple.json", True), ("raw_not_simple.json", False)):
        fam, _ = formats.parse_raw_family(formats.load_file(FIXTURES / name))
        golden.append((fam, expected))
    cases = constructed + golden
    right = sum(check_simple_type(fam).simple == expected for fam, expected in cases)
    return report(8, right == len(cases), f"{right}/{len(cases)} families classified correctly")


def criterion_9():
    """Every fixture command is byte-identical across two runs and across thread counts."""
    stable = 0
    for _, argv, _ in CASES:
        first = run_cli(argv)
        stable += first == run_cli(argv) == run_cli(argv, threads=2) == run_cli(argv, threads=8)
    return report(9, stable == len(CASES), f"{stable}/{len(CASES)} commands deterministic")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.acceptance
@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [check() for check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
