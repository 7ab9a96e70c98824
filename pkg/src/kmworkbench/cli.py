"""Command-line front end.

Exit codes: 0 ok, 2 verification failure, 3 parse error, 4 dimension
mismatch, 5 unbounded / not salient, 6 recovery failure, 7 other invalid
input.  Reports and data files go to stdout (or ``-o``) as canonical JSON.
"""

import argparse
import sys
from fractions import Fraction

from . import formats
from .blowup import blowdown_E4, blowdown_E6, blowup_lattice, blowup_structure
from .cone import (adjunction_equality_detect, decompose, enumerate_candidates,
                   gentype_bound_check, is_nef)
from .errors import DimensionMismatch, InvalidInput, NotInCone, ParityViolation, WorkbenchError
from .hodge import classes_type11_check, forms_identity_check, purity_check
from .lattice import SurfaceDescriptor
from .recovery import recover, recover_from_NS, restrict_series
from .series import expand_structure
from .structure import (check_simple_type, flatten_to_series, min_genus_bound,
                        verify_km_properties)

PASS, FAIL, HNM = "pass", "fail", "hypotheses-not-met"

r = formats.rational_str


def _vec(v):
    return [r(x) if isinstance(x, Fraction) else x for x in v]


class Report:
    def __init__(self, echo):
        self.echo = echo
        self.checks = []
        self.data = {}

    def add(self, name, verdict, witness=None, **info):
        entry = {"name": name, "verdict": verdict}
        if witness is not None:
            entry["witness"] = witness
        entry.update(info)
        self.checks.append(entry)

    @property
    def verdict(self):
        verdicts = {c["verdict"] for c in self.checks}
        if FAIL in verdicts:
            return FAIL
        if verdicts == {HNM}:
            return HNM
        return PASS

    def to_json(self):
        out = {"command": self.echo, "verdict": self.verdict, "checks": self.checks}
        out.update(self.data)
        return out


def _echo(args):
    skip = {"threads", "func", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, obj):
    text = formats.dumps(obj)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _surface(args):
    return formats.parse_surface(formats.load_file(args.surface))


def _structure(path, surf):
    return formats.parse_structure(formats.load_file(path), surf.lattice)


def _parse_class(text, rank):
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidInput(f"cannot read class {text!r}; use comma-separated integers") from None
    if len(v) != rank:
        raise DimensionMismatch(f"class {text!r} has length {len(v)}, expected {rank}")
    return v


# ---- commands -------------------------------------------------------------------

def cmd_verify(args):
    surf = _surface(args)
    s = _structure(args.structure, surf)
    rep = Report(_echo(args))
    km = verify_km_properties(s, surf)
    rep.add("parity", PASS if km.parity_ok else FAIL,
            witness=[list(K) for K in km.parity_violations] or None, w2=list(surf.w2))
    rep.add("negation_closure", PASS if km.negation_ok else FAIL,
            witness=[list(K) for K in km.negation_violations] or None)
    rep.add("adjunction", PASS if km.adjunction_ok else FAIL,
            witness=[{"K": list(K), "sigma": list(c.sigma), "genus": c.genus, "lhs": lhs, "rhs": rhs}
                     for K, c, lhs, rhs in km.adjunction_violations] or None,
            skipped=[{"sigma": list(c.sigma), "genus": c.genus, "reason": why}
                     for c, why in km.skipped_constraints])
    if surf.cone is not None:
        failures, decomps = [], []
        for K in s.classes:
            try:
                dec = decompose(surf.KX, K, surf.cone)
                decomps.append({"K": list(K), "C": list(dec.C), "D": list(dec.D),
                                "C_multipliers": _vec(dec.C_certificate.multipliers),
                                "D_multipliers": _vec(dec.D_certificate.multipliers)})
            except ParityViolation:
                failures.append({"K": list(K), "reason": "parity"})
            except NotInCone as exc:
                failures.append({"K": list(K), "reason": f"{exc.which} not in cone",
                                 "point": list(exc.point), "functional": _vec(exc.functional)})
        rep.add("decomposition", FAIL if failures else PASS, witness=failures or None,
                certificates=decomps)
    if surf.hodge is not None:
        t11 = classes_type11_check(surf.hodge, s)
        rep.add("type_1_1", PASS if t11.ok else FAIL,
                witness=[{"K": list(K), "omega_index": i, "pairing": str(v)} for K, i, v in t11.offenders] or None)
    _emit(args, rep.to_json())
    return 0 if rep.verdict != FAIL else 2


def cmd_expand(args):
    surf = _surface(args)
    s = _structure(args.structure, surf)
    _emit(args, formats.dump_series(expand_structure(s, args.degree)))
    return 0


def _recover_hint(args, lattice_rank):
    if args.candidates:
        cands = formats.parse_candidates(formats.load_file(args.candidates), lattice_rank)
        return None, cands
    if args.bound is None:
        raise InvalidInput("recover needs --bound or --candidates")
    return args.bound, None


def cmd_recover(args):
    surf = _surface(args)
    q = formats.parse_series(formats.load_file(args.series))
    if args.ns:
        if surf.ns_basis is None:
            raise InvalidInput("--ns needs an ns_basis in the surface descriptor")
        bound, cands = _recover_hint(args, len(surf.ns_basis))
        if q.nvars == surf.rank:
            q = restrict_series(q, surf.ns_basis)
        s = recover_from_NS(q, surf, bound=bound, candidates=cands, workers=args.threads)
        transcript = {"mode": "ns", "reexpansion_equal": True}
    else:
        bound, cands = _recover_hint(args, surf.rank)
        res = recover(q, surf.lattice, bound=bound, candidates=cands, workers=args.threads)
        s = res.structure
        transcript = {"mode": "candidates" if cands is not None else "bound",
                      "functional": list(res.functional), "direction": _vec(res.direction),
                      "moments": _vec(res.moments),
                      "nodes": [{"a": r(a), "value": lam} for a, lam in res.nodes],
                      "reexpansion_equal": res.reexpansion_equal}
    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps({"command": _echo(args), "transcript": transcript}))
    _emit(args, formats.dump_structure(s))
    return 0


def _need_cone(surf):
    if surf.cone is None:
        raise InvalidInput("surface descriptor has no cone")
    return surf.cone


def cmd_decompose(args):
    surf = _surface(args)
    cone = _need_cone(surf)
    rep = Report(_echo(args))
    classes = [_parse_class(c, surf.rank) for c in args.cls or []]
    if args.structure:
        classes += list(_structure(args.structure, surf).classes)
    for K in classes:
        name = f"decompose[{','.join(map(str, K))}]"
        try:
            dec = decompose(surf.KX, K, cone)
        except ParityViolation as exc:
            rep.add(name, FAIL, witness={"K": list(K), "reason": "parity", "detail": str(exc)})
            continue
        except NotInCone as exc:
            rep.add(name, FAIL, witness={"K": list(K), "reason": f"{exc.which} not in cone",
                                         "point": list(exc.point), "functional": _vec(exc.functional)})
            continue
        rep.add(name, PASS, C=list(dec.C), D=list(dec.D),
                C_multipliers=_vec(dec.C_certificate.multipliers),
                D_multipliers=_vec(dec.D_certificate.multipliers))
    if args.section:
        H = _parse_class(args.section, surf.rank)
        for K in classes:
            eq = adjunction_equality_detect(surf, cone, K, H, args.genus)
            rep.add(f"section_equality[{','.join(map(str, K))}]", PASS,
                    equality=eq, is_KX=tuple(K) == surf.KX)
    _emit(args, rep.to_json())
    return 0 if rep.verdict != FAIL else 2


def cmd_enumerate(args):
    surf = _surface(args)
    cone = _need_cone(surf)
    cands = enumerate_candidates(surf.KX, cone, surf.w2, workers=args.threads)
    _emit(args, formats.dump_candidates(cands, surf.rank))
    return 0


def cmd_gentype(args):
    surf = _surface(args)
    cone = _need_cone(surf)
    if args.candidates:
        cands = formats.parse_candidates(formats.load_file(args.candidates), surf.rank)
    else:
        cands = enumerate_candidates(surf.KX, cone, surf.w2, workers=args.threads)
    res = gentype_bound_check(surf, cone, cands)
    rep = Report(_echo(args))
    if not res.hypotheses_met:
        rep.add("gentype_bound", HNM, hypotheses=res.hypotheses)
    else:
        for e in res.entries:
            rep.add(f"bound[{','.join(map(str, e['K']))}]", PASS if e["ok"] else FAIL,
                    witness=None if e["ok"] else {"K": list(e["K"]), "K2": e["K2"], "KX2": e["KX2"]},
                    status=e["status"], K2=e["K2"], KX2=e["KX2"], audit=r(e["audit"]),
                    identity_holds=e["identity_holds"])
        rep.data["hypotheses"] = res.hypotheses
    _emit(args, rep.to_json())
    return 0 if rep.verdict != FAIL else 2


def cmd_blowup(args):
    surf = _surface(args)
    s = _structure(args.structure, surf)
    bm = blowup_lattice(surf.lattice, args.l)
    hat = blowup_structure(s, bm)
    if args.surface_out:
        # canonical class of the blow-up is KX + sum E_j
        new = SurfaceDescriptor(bm.extended, surf.b_plus, tuple(surf.w2) + (1,) * args.l,
                                tuple(surf.KX) + (1,) * args.l,
                                exceptional=tuple(surf.exceptional) + bm.exceptional_indices,
                                name=surf.name + (" blown up" if surf.name else ""))
        with open(args.surface_out, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps(formats.dump_surface(new)))
    _emit(args, formats.dump_structure(hat))
    return 0


def cmd_blowdown(args):
    surf = _surface(args)
    q = formats.parse_series(formats.load_file(args.series))
    bm = blowup_lattice(surf.lattice, args.l)
    if args.e6:
        res = blowdown_E6(q, bm)
        out = formats.dump_series(res.series)
        out["audit_factor"] = r(res.audit_factor)
    else:
        out = formats.dump_series(blowdown_E4(q, bm))
    _emit(args, out)
    return 0


def _series_or_structure(args, surf):
    if args.series:
        return formats.parse_series(formats.load_file(args.series)), None
    s = _structure(args.structure, surf)
    return expand_structure(s, args.degree), s


def cmd_purity(args):
    surf = _surface(args)
    if surf.hodge is None:
        raise InvalidInput("surface descriptor has no Hodge basis")
    q, s = _series_or_structure(args, surf)
    rep = Report(_echo(args))
    res = purity_check(surf.hodge, q)
    rep.add("purity", PASS if res.pure else FAIL,
            witness=[{"degree": d, "e": list(e), "c": str(c), "bidegree": list(bd)}
                     for d, e, c, bd in res.violations] or None)
    if s is not None:
        t11 = classes_type11_check(surf.hodge, s)
        rep.add("type_1_1", PASS if t11.ok else FAIL,
                witness=[{"K": list(K), "omega_index": i, "pairing": str(v)} for K, i, v in t11.offenders] or None)
    _emit(args, rep.to_json())
    return 0 if rep.verdict != FAIL else 2


def cmd_forms(args):
    surf = _surface(args)
    if surf.hodge is None:
        raise InvalidInput("surface descriptor has no Hodge basis")
    s = _structure(args.structure, surf)
    res = forms_identity_check(surf.hodge, s, args.omega, args.degree)
    rep = Report(_echo(args))
    if not res.hypotheses_met:
        rep.add("forms_identity", HNM,
                offenders=[{"K": list(K), "omega_index": i, "pairing": str(v)} for K, i, v in res.offenders])
    else:
        rep.add("forms_identity", PASS if res.holds else FAIL,
                witness=None if res.holds else {k: v for k, v in res.checks.items()},
                point=_vec(res.point), exponent=r(res.exponent), period=r(res.period),
                q0=r(res.q0), value=f"{r(res.q0)}*exp({r(res.exponent)})", checks=res.checks)
    _emit(args, rep.to_json())
    return 0 if rep.verdict != FAIL else 2


def cmd_genus(args):
    surf = _surface(args)
    s = _structure(args.structure, surf)
    rep = Report(_echo(args))
    for c in args.cls:
        sigma = _parse_class(c, surf.rank)
        g = min_genus_bound(s, sigma)
        rep.add(f"genus_bound[{c}]", PASS, sigma=list(sigma), genus=g,
                sigma_square=surf.lattice.square(sigma))
    _emit(args, rep.to_json())
    return 0


def cmd_simple_type(args):
    fam, _ = formats.parse_raw_family(formats.load_file(args.raw))
    res = check_simple_type(fam)
    rep = Report(_echo(args))
    rep.add("simple_type", PASS if res.simple else FAIL,
            witness={"failing_k": res.failing} if res.failing else None, checked_k=res.checked)
    _emit(args, rep.to_json())
    return 0 if res.simple else 2


def cmd_flatten(args):
    fam, b_plus = formats.parse_raw_family(formats.load_file(args.raw))
    if args.b_plus is not None:
        b_plus = args.b_plus
    if b_plus is None:
        raise InvalidInput("b_plus must be given in the file or with --b-plus")
    _emit(args, formats.dump_series(flatten_to_series(fam, b_plus)))
    return 0


def cmd_nef(args):
    surf = _surface(args)
    cone = _need_cone(surf)
    rep = Report(_echo(args))
    for c in args.cls:
        H = _parse_class(c, surf.rank)
        QH = surf.lattice.apply(H)
        pairings = [r(sum((a * b for a, b in zip(QH, g)), Fraction(0))) for g in cone.generators]
        rep.add(f"nef[{c}]", PASS, nef=is_nef(surf.lattice, cone, H), pairings=pairings)
    _emit(args, rep.to_json())
    return 0


# ---- parser -----------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="kmwb", description="Exact workbench for Donaldson series in basic-class form.")
    p.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("-o", "--output", help="write to a file instead of stdout")
        return sp

    sp = add("verify", cmd_verify, "check parity, negation, adjunction, cone and Hodge conditions")
    sp.add_argument("surface")
    sp.add_argument("structure")

    sp = add("expand", cmd_expand, "expand a structure into a truncated series")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("structure")
    sp.add_argument("--degree", type=int, required=True)

    sp = add("recover", cmd_recover, "recover a structure from a series")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("series")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--candidates")
    sp.add_argument("--ns", action="store_true", help="recover from the restriction to the NS basis")
    sp.add_argument("--transcript", help="write the recovery transcript here")

    sp = add("decompose", cmd_decompose, "decompose classes as C - D with C + D = KX")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("--class", dest="cls", action="append", help="comma-separated class (repeatable)")
    sp.add_argument("--structure")
    sp.add_argument("--section", help="hyperplane class H for the equality test")
    sp.add_argument("--genus", type=int, default=0)

    sp = add("enumerate", cmd_enumerate, "enumerate candidate classes allowed by the cone")
    sp.add_argument("-s", "--surface", required=True)

    sp = add("gentype", cmd_gentype, "check K^2 <= KX^2 over candidates")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("--candidates")

    sp = add("nef", cmd_nef, "test classes for nefness against the cone")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("--class", dest="cls", action="append", required=True)

    sp = add("blowup", cmd_blowup, "blow up a structure l times")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("structure")
    sp.add_argument("-l", type=int, default=1)
    sp.add_argument("--surface-out", help="also write the blown-up surface descriptor")

    sp = add("blowdown", cmd_blowdown, "contract a blown-up series back to the base")
    sp.add_argument("-s", "--surface", required=True, help="descriptor of the base surface")
    sp.add_argument("series")
    sp.add_argument("-l", type=int, default=1)
    sp.add_argument("--e6", action="store_true", help="use the E^6 contraction (l = 1)")

    sp = add("purity", cmd_purity, "check Hodge purity of a series")
    sp.add_argument("-s", "--surface", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--structure")
    g.add_argument("--series")
    sp.add_argument("--degree", type=int, default=8)

    sp = add("forms", cmd_forms, "check the holomorphic-form evaluation identity")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("structure")
    sp.add_argument("--omega", type=int, default=0)
    sp.add_argument("--degree", type=int, default=8)

    sp = add("genus", cmd_genus, "lower bound on the genus of surfaces in given classes")
    sp.add_argument("-s", "--surface", required=True)
    sp.add_argument("structure")
    sp.add_argument("--class", dest="cls", action="append", required=True)

    sp = add("simple-type", cmd_simple_type, "check the simple-type recursion on raw data")
    sp.add_argument("raw")

    sp = add("flatten", cmd_flatten, "flatten raw polynomial data into a series")
    sp.add_argument("raw")
    sp.add_argument("--b-plus", type=int)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except WorkbenchError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
