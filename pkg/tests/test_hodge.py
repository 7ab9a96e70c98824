import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodge_corpus import (RANK3, Twisted, non_type11_structure, random_basis, standard_basis,
                          type11_structure)
from kmworkbench.errors import InvalidInput, SingularBasis
from kmworkbench.hodge import (H02, H11, H20, GaussianRational, HodgeBasis, classes_type11_check,
                               forms_identity_check, purity_check, restrict_to_type,
                               to_hodge_coordinates)
from kmworkbench.lattice import IntersectionLattice
from kmworkbench.series import HomogeneousPolynomial as HP
from kmworkbench.series import KMStructure, TruncatedSeries, expand_structure, normalize_C

G = GaussianRational
HB = standard_basis(RANK3)


def test_gaussian_arithmetic():
    a, b = G(1, 2), G(Fraction(1, 2), -1)
    assert a * b == G(Fraction(5, 2), 0)
    assert (a / b) * b == a
    assert a.conjugate() == G(1, -2)
    assert G(3) == 3 and hash(G(3)) == hash(Fraction(3))


def test_hodge_coordinates_example():
    f = to_hodge_coordinates(HB, HP.quadratic_form(RANK3.Q))
    # coordinates (a, b, c) dual to (w, conj w, e3)
    assert f.terms == {(1, 1, 0): 4, (0, 0, 2): -1}
    c = HP.constant(3, 7)
    assert to_hodge_coordinates(HB, c) == c


def test_identity_basis_leaves_polynomial():
    L = IntersectionLattice.diagonal(1, -1)
    hb = HodgeBasis(L, ((H11, (1, 0)), (H11, (0, 1))))
    f = HP.quadratic_form(L.Q) + HP.linear((1, 2)) * HP.linear((3, -1))
    assert to_hodge_coordinates(hb, f) == f


def test_basis_validation():
    with pytest.raises(SingularBasis):
        HodgeBasis(RANK3, ((H20, (1, G(0, 1), 0)), (H02, (1, G(0, -1), 0))))
    with pytest.raises(SingularBasis):
        HodgeBasis(RANK3, ((H11, (1, 0, 0)), (H11, (1, 0, 0)), (H11, (0, 0, 1))))
    with pytest.raises(InvalidInput):
        # (0,2) vector is not the conjugate
        HodgeBasis(RANK3, ((H20, (1, G(0, 1), 0)), (H02, (1, G(0, 1), 0)), (H11, (0, 0, 1))))
    with pytest.raises(InvalidInput):
        # Q(w, w) != 0
        HodgeBasis(RANK3, ((H20, (1, G(0, 2), 0)), (H02, (1, G(0, -2), 0)), (H11, (0, 0, 1))))
    with pytest.raises(InvalidInput):
        # Q(w, conj w) < 0
        L = IntersectionLattice.diagonal(-1, -1, 1)
        HodgeBasis(L, ((H20, (1, G(0, 1), 0)), (H02, (1, G(0, -1), 0)), (H11, (0, 0, 1))))
    with pytest.raises(InvalidInput):
        HodgeBasis(RANK3, ((H20, (1, G(0, 1), 0)), (H02, (1, G(0, -1), 0)), (H11, (0, 0, G(0, 1)))))


def test_purity_examples():
    s = KMStructure(RANK3, ((1, (0, 0, 1)), (Fraction(-2, 3), (0, 0, -2))))
    assert purity_check(HB, expand_structure(s, 8)).pure
    # Q(w, x) = 2 b in Hodge coordinates, so its square has bidegree (0, 4)
    w = HB.holomorphic[0]
    lin = HP(3, 1, {(1, 0, 0): w[0], (0, 1, 0): w[1]}, check=False)
    rep = purity_check(HB, TruncatedSeries(3, 2, [None, None, lin * lin]))
    assert not rep.pure and rep.violations[0][3] == (0, 4)
    assert purity_check(HB, TruncatedSeries.zero(3, 5)).pure


def test_type11_examples():
    assert classes_type11_check(HB, KMStructure(RANK3, ((1, (0, 0, 1)),))).ok
    rep = classes_type11_check(HB, KMStructure(RANK3, ((1, (1, 0, 0)),)))
    assert not rep.ok and rep.offenders == [((1, 0, 0), 0, 1)]
    assert classes_type11_check(HB, KMStructure(RANK3, ())).ok


def test_forms_examples():
    rep = forms_identity_check(HB, KMStructure(RANK3, ((1, (0, 0, 1)), (1, (0, 0, -1)))))
    assert rep.hypotheses_met and rep.holds
    assert rep.point == (2, 0, 0) and rep.exponent == 2 and rep.period == 2 and rep.q0 == 2
    rep = forms_identity_check(HB, KMStructure(RANK3, ((1, (0, 0, 0)),)))
    assert rep.holds and rep.q0 == 1
    rep = forms_identity_check(HB, KMStructure(RANK3, ((1, (1, 0, 0)),)))
    assert not rep.hypotheses_met and not rep.holds


# ---- properties -------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_type11_structures_are_pure(seed):
    rng = random.Random(seed)
    hb = random_basis(rng, RANK3)
    s = type11_structure(rng, RANK3)
    assert classes_type11_check(hb, s).ok
    assert purity_check(hb, expand_structure(s, 6)).pure


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_non_type11_class_is_named_and_impure(seed):
    rng = random.Random(seed)
    hb = random_basis(rng, RANK3)
    s, bad = non_type11_structure(rng, RANK3)
    rep = classes_type11_check(hb, s)
    assert [K for K, _, _ in rep.offenders] == [bad]
    assert not purity_check(hb, expand_structure(s, 4)).pure


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_purity_invariant_under_conjugation(seed):
    rng = random.Random(seed)
    hb = random_basis(rng, RANK3)
    if rng.random() < 0.5:
        s = type11_structure(rng, RANK3)
    else:
        s, _ = non_type11_structure(rng, RANK3)
    q = expand_structure(s, 4)
    assert purity_check(hb, q).pure == purity_check(hb.conjugated(), q).pure


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_restriction_to_02_is_constant(seed):
    rng = random.Random(seed)
    hb = random_basis(rng, RANK3)
    s = type11_structure(rng, RANK3)
    C = normalize_C(expand_structure(s, 6), RANK3)
    r = restrict_to_type(hb, C, H02)
    assert r.parts[0].terms == ({(0, 0, 0): s.q0} if s.q0 else {})
    assert all(p.is_zero() for p in r.parts[1:])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_purity_survives_integral_change_of_basis(seed):
    rng = random.Random(seed)
    t = Twisted(rng)
    s = t.pull_structure(type11_structure(rng, RANK3))
    bad, _ = non_type11_structure(rng, RANK3)
    bad = t.pull_structure(bad)
    assert classes_type11_check(t.basis, s).ok and purity_check(t.basis, expand_structure(s, 5)).pure
    assert forms_identity_check(t.basis, s, 0, 6).holds
    assert not classes_type11_check(t.basis, bad).ok
    assert not purity_check(t.basis, expand_structure(bad, 5)).pure
