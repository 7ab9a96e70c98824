"""The CLI fixture suite: one entry per golden file.

Each case is ``(name, argv, exit_code)``; argv paths are relative to the
fixtures directory.  Successful commands have their stdout frozen in
``fixtures/golden/<name>.json``; failing ones have stderr in ``<name>.err``.
"""

import contextlib
import io
import os
from pathlib import Path

from kmworkbench.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"

CASES = [
    ("verify_k3", ["verify", "k3_surface.json", "k3_structure.json"], 0),
    ("verify_adjunction", ["verify", "adjunction_surface.json", "adjunction_structure.json"], 2),
    ("verify_hodge", ["verify", "hodge_surface.json", "hodge_structure.json"], 0),
    ("verify_hodge_bad", ["verify", "hodge_surface.json", "hodge_bad_structure.json"], 2),
    ("verify_gentype", ["verify", "gentype_surface.json", "adjunction_structure.json"], 0),
    ("expand_two_term", ["expand", "-s", "two_term_surface.json", "two_term_structure.json", "--degree", "6"], 0),
    ("recover_two_term", ["recover", "-s", "two_term_surface.json", "golden/expand_two_term.json",
                          "--bound", "2"], 0),
    ("recover_hodge_ns", ["recover", "-s", "hodge_surface.json", "hodge_series.json", "--ns", "--bound", "3"], 0),
    ("decompose_gentype", ["decompose", "-s", "gentype_surface.json", "--class", "1,1", "--class=-3,-1",
                           "--class", "5,1", "--section", "2,1", "--genus", "5"], 2),
    ("enumerate_quadrant", ["enumerate", "-s", "quadrant_surface.json"], 0),
    ("enumerate_gentype", ["enumerate", "-s", "gentype_surface.json"], 0),
    ("gentype", ["gentype", "-s", "gentype_surface.json"], 0),
    ("gentype_quadrant", ["gentype", "-s", "quadrant_surface.json"], 0),
    ("nef", ["nef", "-s", "gentype_surface.json", "--class", "3,1", "--class", "0,1"], 0),
    ("blowup_two_term", ["blowup", "-s", "two_term_surface.json", "two_term_structure.json", "-l", "2"], 0),
    ("blowdown_two_term", ["blowdown", "-s", "two_term_surface.json", "two_term_blown_series.json"], 0),
    ("blowdown_e6_two_term", ["blowdown", "-s", "two_term_surface.json", "two_term_blown_series.json", "--e6"], 0),
    ("purity_hodge", ["purity", "-s", "hodge_surface.json", "--structure", "hodge_structure.json"], 0),
    ("purity_hodge_bad", ["purity", "-s", "hodge_surface.json", "--structure", "hodge_bad_structure.json",
                          "--degree", "3"], 2),
    ("forms_hodge", ["forms", "-s", "hodge_surface.json", "hodge_structure.json"], 0),
    ("forms_hodge_bad", ["forms", "-s", "hodge_surface.json", "hodge_bad_structure.json"], 0),
    ("genus_hodge", ["genus", "-s", "hodge_surface.json", "hodge_structure.json", "--class", "0,0,2,1",
                     "--class", "0,0,1,0"], 0),
    ("simple_type_ok", ["simple-type", "raw_simple.json"], 0),
    ("simple_type_bad", ["simple-type", "raw_not_simple.json"], 2),
    ("flatten_raw", ["flatten", "raw_simple.json"], 0),
    ("error_malformed", ["verify", "malformed.json", "k3_structure.json"], 3),
    ("error_float", ["expand", "-s", "two_term_surface.json", "float_structure.json", "--degree", "2"], 3),
    ("error_dimension", ["expand", "-s", "hodge_surface.json", "two_term_structure.json", "--degree", "2"], 4),
    ("error_recovery", ["recover", "-s", "two_term_surface.json", "golden/expand_two_term.json",
                        "--bound", "0"], 6),
    ("error_class_length", ["genus", "-s", "hodge_surface.json", "hodge_structure.json", "--class", "1,2"], 4),
    ("error_no_cone", ["enumerate", "-s", "two_term_surface.json"], 7),
    ("error_not_salient", ["enumerate", "-s", "line_surface.json"], 5),
]


def run_cli(argv, threads=None):
    """Run the CLI in the fixtures directory; returns ``(exit_code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    args = (["--threads", str(threads)] if threads else []) + list(argv)
    cwd = os.getcwd()
    os.chdir(FIXTURES)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(args)
    finally:
        os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


def golden_path(name, code):
    return GOLDEN / (f"{name}.json" if code == 0 or not name.startswith("error") else f"{name}.err")


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, argv, expected in CASES:
        code, out, err = run_cli(argv)
        assert code == expected, (name, code, err)
        text = out if not name.startswith("error") else err
        golden_path(name, code).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    regenerate()
