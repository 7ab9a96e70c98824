import json
import random
from fractions import Fraction

import pytest

from cli_cases import CASES, FIXTURES, golden_path, run_cli
from corpus import random_lattice, random_structure
from oracles import series_dict, taylor_structure
from kmworkbench import formats
from kmworkbench.cone import Outside, check_certificate
from kmworkbench.errors import ParseError
from kmworkbench.hodge import classes_type11_check, purity_check
from kmworkbench.lattice import IntersectionLattice
from kmworkbench.series import expand_structure
from kmworkbench.structure import check_simple_type


def load(name):
    return formats.load_file(FIXTURES / name)


@pytest.mark.parametrize("name,argv,expected", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, expected):
    code, out, err = run_cli(argv)
    assert code == expected, err
    text = err if name.startswith("error") else out
    assert text == golden_path(name, code).read_text(encoding="utf-8")


@pytest.mark.parametrize("name,argv,expected", CASES, ids=[c[0] for c in CASES])
def test_thread_count_does_not_change_output(name, argv, expected):
    assert run_cli(argv, threads=4) == run_cli(argv)


def test_expand_golden_matches_taylor_oracle():
    surf = formats.parse_surface(load("two_term_surface.json"))
    s = formats.parse_structure(load("two_term_structure.json"), surf.lattice)
    q = formats.parse_series(load("golden/expand_two_term.json"))
    assert q.D == 6
    assert series_dict(q) == taylor_structure(surf.lattice.Q, s.terms, 6)


def test_recover_golden_is_original_structure():
    original = formats.dumps(load("two_term_structure.json"))
    surf = formats.parse_surface(load("two_term_surface.json"))
    canon = formats.dumps(formats.dump_structure(formats.parse_structure(json.loads(original), surf.lattice)))
    assert (FIXTURES / "golden/recover_two_term.json").read_text() == canon


def test_fail_witnesses_revalidate():
    adj = load("golden/verify_adjunction.json")
    L = formats.parse_surface(load("adjunction_surface.json")).lattice
    for w in next(c for c in adj["checks"] if c["name"] == "adjunction")["witness"]:
        assert 2 * w["genus"] - 2 < L.square(w["sigma"]) + L.pair(w["K"], w["sigma"])
    dec = load("golden/decompose_gentype.json")
    cone = formats.parse_surface(load("gentype_surface.json")).cone
    failed = [c for c in dec["checks"] if c["verdict"] == "fail"]
    assert failed
    for c in failed:
        w = c["witness"]
        phi = tuple(Fraction(v) for v in w["functional"])
        assert check_certificate(cone, w["point"], Outside(phi))
    hodge = formats.parse_surface(load("hodge_surface.json"))
    bad = formats.parse_structure(load("hodge_bad_structure.json"), hodge.lattice)
    pur = load("golden/purity_hodge_bad.json")
    named = [tuple(w["K"]) for c in pur["checks"] if c["name"] == "type_1_1" for w in c["witness"]]
    assert set(named) == {K for K, _, _ in classes_type11_check(hodge.hodge, bad).offenders}
    wit = next(c for c in pur["checks"] if c["name"] == "purity")["witness"]
    rep = purity_check(hodge.hodge, expand_structure(bad, 3))
    assert [(w["degree"], tuple(w["e"]), tuple(w["bidegree"])) for w in wit] == \
        [(d, e, bd) for d, e, _, bd in rep.violations]
    assert all(tuple(w["bidegree"]) != (w["degree"], w["degree"]) for w in wit)
    st = load("golden/simple_type_bad.json")
    fam, _ = formats.parse_raw_family(load("raw_not_simple.json"))
    assert st["checks"][0]["witness"]["failing_k"] == check_simple_type(fam).failing


def test_every_fail_verdict_has_witness():
    for name, _, _ in CASES:
        if name.startswith("error"):
            continue
        report = load(f"golden/{name}.json")
        for c in report.get("checks", []):
            if c["verdict"] == "fail":
                assert c.get("witness"), (name, c["name"])


def test_blowup_surface_out(tmp_path):
    out = tmp_path / "blown.json"
    code, _, _ = run_cli(["blowup", "-s", "two_term_surface.json", "two_term_structure.json",
                          "--surface-out", str(out)])
    assert code == 0
    assert out.read_text() == (FIXTURES / "two_term_blown_surface.json").read_text()


def test_recover_transcript(tmp_path):
    path = tmp_path / "t.json"
    code, out, _ = run_cli(["recover", "-s", "two_term_surface.json", "golden/expand_two_term.json",
                            "--bound", "2", "--transcript", str(path)])
    assert code == 0
    t = json.loads(path.read_text())["transcript"]
    assert t["reexpansion_equal"] and t["functional"] == [1, 5]
    assert [n["value"] for n in t["nodes"]] == [-1, 1]


def test_expand_recover_expand_is_byte_identical(tmp_path):
    rng = random.Random(17)
    for i in range(8):
        L = random_lattice(rng, rng.randint(1, 3))
        s = random_structure(rng, L, max_terms=4, coord=3)
        surf_obj = {"rank": L.rank, "Q": [list(r) for r in L.Q], "b_plus": 3, "w2": [0] * L.rank,
                    "KX": [0] * L.rank}
        (tmp_path / "surf.json").write_text(formats.dumps(surf_obj))
        (tmp_path / "s.json").write_text(formats.dumps(formats.dump_structure(s)))
        D = str(2 * len(s))
        c1, q1, _ = run_cli(["expand", "-s", str(tmp_path / "surf.json"), str(tmp_path / "s.json"), "--degree", D])
        (tmp_path / "q.json").write_text(q1)
        c2, s2, _ = run_cli(["recover", "-s", str(tmp_path / "surf.json"), str(tmp_path / "q.json"), "--bound", "3"])
        (tmp_path / "s2.json").write_text(s2)
        c3, q3, _ = run_cli(["expand", "-s", str(tmp_path / "surf.json"), str(tmp_path / "s2.json"), "--degree", D])
        assert (c1, c2, c3) == (0, 0, 0)
        assert q3 == q1
        assert s2 == (tmp_path / "s.json").read_text()


# ---- formats ------------------------------------------------------------------------

def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        formats.loads('{\n  "a": 1,\n  "b": 0.25\n}')
    assert (info.value.line, info.value.column) == (3, 8)
    with pytest.raises(ParseError) as info:
        formats.loads('{\n  "a": [1, 2\n}')
    assert info.value.line == 3


def test_rational_literals():
    assert formats.parse_rational("-6/4", ["x"]) == Fraction(-3, 2)
    assert formats.parse_rational(7, ["x"]) == 7
    for bad in ("1/0", "abc", True, "1.5", None):
        with pytest.raises(ParseError):
            formats.parse_rational(bad, ["x"])
    assert formats.rational_str(Fraction(4, -6)) == "-2/3"


def test_surface_round_trip():
    for name in ("hodge_surface.json", "gentype_surface.json", "k3_surface.json", "two_term_blown_surface.json"):
        surf = formats.parse_surface(load(name))
        again = formats.parse_surface(json.loads(formats.dumps(formats.dump_surface(surf))))
        assert again == surf


def test_series_and_raw_round_trip():
    q = formats.parse_series(load("hodge_series.json"))
    assert formats.parse_series(formats.dump_series(q)) == q
    fam, b = formats.parse_raw_family(load("raw_simple.json"))
    fam2, b2 = formats.parse_raw_family(formats.dump_raw_family(fam, b))
    assert fam2 == fam and b2 == b == 3


def test_structure_accepts_bare_list():
    L = IntersectionLattice.diagonal(1, -1)
    s = formats.parse_structure([{"a": "1/2", "K": [1, 1]}], L)
    assert s.terms == ((Fraction(1, 2), (1, 1)),)


def test_semantic_errors_are_parse_errors():
    obj = load("two_term_surface.json")
    obj["Q"] = [[1, 2], [0, 1]]
    with pytest.raises(ParseError):
        formats.parse_surface(obj)
    obj = load("two_term_surface.json")
    del obj["KX"]
    with pytest.raises(ParseError, match="KX"):
        formats.parse_surface(obj)
