"""Command-line interface.

Subcommands:

* ``classify``        — classify a twist and emit a certificate document.
* ``verify``          — re-check a certificate document from scratch.
* ``schur``           — evaluate the Schur polynomial S_r.
* ``enumerate``       — graded dimensions of the fermion or boson spaces.
* ``probe-wakimoto``  — boson-side evidence vs. the classifier verdict.
* ``relations``       — randomized relation suites (clifford, super, affine).

All output is JSON on stdout with sorted keys, so identical invocations
produce byte-identical output.  Exit status: 0 on success, 1 when a check
fails (verification, agreement, or relation failures), 2 on usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .classify import DEFAULT_CFG, Certificate, Verdict, classify, verify_certificate
from .fock import (
    FermionVec,
    enumerate_basis,
    fmt_halfodd,
)
from .scalars import ChiParseError, parse_chi, parse_rational, format_rational
from .schur import schur_rec, schur_at_minus_chi
from .span import ClosureConfig
from .superalg import anticommutator_check, same_species_anticommutator
from .weyl import (
    WeylAction,
    WeylVec,
    affine_relation_check,
    enumerate_weyl_basis,
    evidence_agrees,
    wakimoto_probe,
    weyl_charge,
    weyl_weight,
)
from .fock import apply_psi_dmode, charge as fermion_charge, weight as fermion_weight

__all__ = ["main"]


def _emit(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2))


def _chi_from_args(args):
    if getattr(args, "chi", None) is not None:
        return parse_chi(args.chi)
    if getattr(args, "chi_file", None) is not None:
        with open(args.chi_file, encoding="utf-8") as fh:
            return parse_chi(fh.read())
    return None


def _cfg_from_args(args) -> ClosureConfig:
    w = args.window
    return ClosureConfig(Fraction(args.cutoff), (-w, w), Fraction(args.excursion))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_classify(args) -> int:
    chi = _chi_from_args(args)
    if chi is None:
        raise ChiParseError("a twist is required (--chi or --chi-file)")
    cfg = _cfg_from_args(args)
    verdict, cert = classify(chi, cfg)
    _emit(
        {
            "chi": chi.to_json_obj(),
            "verdict": verdict.to_json_obj(),
            "certificate": cert.to_json_obj(),
        }
    )
    return 0


def _cmd_verify(args) -> int:
    if args.certificate == "-":
        text = sys.stdin.read()
    else:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChiParseError(f"malformed certificate JSON: {exc}") from exc
    try:
        chi = parse_chi(doc["chi"])
        verdict = Verdict.from_json_obj(doc["verdict"])
        cert = Certificate.from_json_obj(doc["certificate"])
    except (KeyError, TypeError) as exc:
        raise ChiParseError(f"certificate document missing field: {exc}") from exc
    recorded = cert.data.get("cfg")
    base = ClosureConfig.from_json_obj(recorded) if recorded else DEFAULT_CFG
    lo, hi = base.charge_window
    cfg = ClosureConfig(
        Fraction(args.cutoff) if args.cutoff is not None else base.weight_cutoff,
        (-args.window, args.window) if args.window is not None else (lo, hi),
        Fraction(args.excursion) if args.excursion is not None else base.excursion,
    )
    start = (
        parse_rational(args.start_weight, field="start-weight")
        if args.start_weight is not None
        else None
    )
    report = verify_certificate(chi, verdict, cert, cfg=cfg, start_weight=start)
    _emit(
        {
            "chi": chi.to_json_obj(),
            "verdict": verdict.to_json_obj(),
            "report": report.to_json_obj(),
        }
    )
    return 0 if report.ok else 1


def _cmd_schur(args) -> int:
    if args.at is not None:
        xs = [
            parse_rational(part.strip(), field=f"at[{i}]")
            for i, part in enumerate(args.at.split(","))
        ]
        value = schur_rec(args.ell, xs)
        _emit({"ell": args.ell, "xs": [format_rational(x) for x in xs], "value": format_rational(value)})
        return 0
    chi = _chi_from_args(args)
    if chi is None:
        raise ChiParseError("schur needs --at or a twist (--chi/--chi-file)")
    value = schur_at_minus_chi(args.ell, chi)
    _emit({"ell": args.ell, "chi": chi.to_json_obj(), "value": format_rational(value)})
    return 0


def _cmd_enumerate(args) -> int:
    max_weight = parse_rational(args.max_weight, field="max-weight")
    if args.space == "weyl":
        window = (-args.window, args.window)
        states = enumerate_weyl_basis(max_weight, window)
        graded: dict[tuple, int] = {}
        for st in states:
            key = (Fraction(weyl_weight(st)), weyl_charge(st))
            graded[key] = graded.get(key, 0) + 1
        labels = [str(st) for st in states]
    else:
        ambient = args.space == "ambient"
        states = enumerate_basis(max_weight, ambient=ambient)
        graded = {}
        for st in states:
            key = (fermion_weight(st), fermion_charge(st))
            graded[key] = graded.get(key, 0) + 1
        labels = [str(st) for st in states]
    doc = {
        "space": args.space,
        "max_weight": format_rational(max_weight),
        "count": len(states),
        "graded": [
            {"weight": format_rational(w), "charge": c, "dim": d}
            for (w, c), d in sorted(graded.items())
        ],
    }
    if args.states:
        doc["states"] = labels
    _emit(doc)
    return 0


def _cmd_probe(args) -> int:
    chi = _chi_from_args(args)
    if chi is None:
        raise ChiParseError("a twist is required (--chi or --chi-file)")
    cfg = _cfg_from_args(args)
    verdict, _ = classify(chi, cfg)
    evidence = wakimoto_probe(chi, cfg)
    agrees = evidence_agrees(verdict.status, evidence)
    _emit(
        {
            "chi": chi.to_json_obj(),
            "verdict": verdict.to_json_obj(),
            "evidence": evidence.to_json_obj(),
            "agrees": agrees,
        }
    )
    return 0 if agrees else 1


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))


def _sample_fermion_vecs(rng, bound, ambient, trials):
    states = enumerate_basis(bound, ambient=ambient)
    out = []
    for _ in range(trials):
        picks = rng.sample(states, k=min(len(states), rng.randint(1, 3)))
        out.append(
            FermionVec.from_items(
                [(st, _random_rational(rng)) for st in picks], ambient=ambient
            )
        )
    return out


def _cmd_relations(args) -> int:
    rng = random.Random(args.seed)
    bound = parse_rational(args.weight, field="weight")
    modes = [2 * k - 1 for k in range(-args.max_mode + 1, args.max_mode + 1)]
    chi = _chi_from_args(args)
    failures: list[str] = []
    checked = 0
    if args.suite == "clifford":
        vecs = _sample_fermion_vecs(rng, bound, True, args.trials)
        for v in vecs:
            for dr in modes:
                for ds in modes:
                    for sp1, sp2 in (("+", "-"), ("+", "+"), ("-", "-")):
                        lhs = apply_psi_dmode(
                            sp1, dr, apply_psi_dmode(sp2, ds, v)
                        ) + apply_psi_dmode(sp2, ds, apply_psi_dmode(sp1, dr, v))
                        want = v if (sp1 != sp2 and dr + ds == 0) else FermionVec.zero(True)
                        checked += 1
                        if lhs != want:
                            failures.append(
                                f"{{Psi{sp1}({fmt_halfodd(dr)}),Psi{sp2}({fmt_halfodd(ds)})}}"
                            )
    elif args.suite == "super":
        if chi is None:
            raise ChiParseError("suite 'super' needs a twist (--chi/--chi-file)")
        vecs = _sample_fermion_vecs(rng, bound, False, args.trials)
        for v in vecs:
            for dr in modes:
                r = Fraction(dr, 2)
                for ds in modes:
                    s = Fraction(ds, 2)
                    checked += 3
                    if not anticommutator_check(r, s, v, chi):
                        failures.append(f"{{G+({fmt_halfodd(dr)}),G-({fmt_halfodd(ds)})}}")
                    for sp in ("+", "-"):
                        if not same_species_anticommutator(sp, r, s, v, chi).is_zero():
                            failures.append(
                                f"{{G{sp}({fmt_halfodd(dr)}),G{sp}({fmt_halfodd(ds)})}}"
                            )
    else:  # affine
        if chi is None:
            raise ChiParseError("suite 'affine' needs a twist (--chi/--chi-file)")
        action = WeylAction(chi)
        window = (-args.window, args.window)
        states = enumerate_weyl_basis(bound, window)
        vecs = []
        for _ in range(args.trials):
            picks = rng.sample(states, k=min(len(states), rng.randint(1, 3)))
            vecs.append(WeylVec({st: _random_rational(rng) for st in picks}))
        for v in vecs:
            for m in range(-args.max_mode, args.max_mode + 1):
                for n in range(-args.max_mode, args.max_mode + 1):
                    for name, ok in affine_relation_check(m, n, v, chi, action):
                        checked += 1
                        if not ok:
                            failures.append(f"{name} at (m,n)=({m},{n})")
    _emit(
        {
            "suite": args.suite,
            "seed": args.seed,
            "checked": checked,
            "failures": sorted(set(failures)),
        }
    )
    return 0 if not failures else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    chi_parent = argparse.ArgumentParser(add_help=False)
    group = chi_parent.add_mutually_exclusive_group()
    group.add_argument("--chi", help="twist as inline JSON {\"coeffs\": [...]}")
    group.add_argument("--chi-file", help="path to a twist JSON document")

    cfg_parent = argparse.ArgumentParser(add_help=False)
    cfg_parent.add_argument("--cutoff", default="4", help="weight cutoff (rational, default 4)")
    cfg_parent.add_argument(
        "--window", type=int, default=3, help="half-width of the charge window (default 3)"
    )
    cfg_parent.add_argument(
        "--excursion", default="2", help="extra exploration headroom (rational, default 2)"
    )

    parser = argparse.ArgumentParser(
        prog="wakimoto",
        description="Exact classification tools for twisted fermion modules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[chi_parent, cfg_parent], help="classify a twist")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", help="re-check a certificate document")
    p.add_argument("--certificate", required=True, help="certificate JSON path ('-' for stdin)")
    p.add_argument("--cutoff", default=None, help="override the recorded weight cutoff")
    p.add_argument("--window", type=int, default=None, help="override the charge half-width")
    p.add_argument("--excursion", default=None, help="override the exploration headroom")
    p.add_argument("--start-weight", default=None, help="max weight of cyclicity generators")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("schur", parents=[chi_parent], help="evaluate the Schur polynomial")
    p.add_argument("--ell", type=int, required=True, help="degree r of S_r")
    p.add_argument("--at", default=None, help="comma-separated rationals x_1,...,x_r")
    p.set_defaults(func=_cmd_schur)

    p = sub.add_parser("enumerate", help="graded dimensions of a basis window")
    p.add_argument(
        "--space",
        choices=["charged", "ambient", "weyl"],
        default="charged",
        help="which space to enumerate",
    )
    p.add_argument("--max-weight", default="4", help="weight bound (rational)")
    p.add_argument("--window", type=int, default=3, help="charge half-width (weyl only)")
    p.add_argument("--states", action="store_true", help="also list the monomials")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser(
        "probe-wakimoto",
        parents=[chi_parent],
        help="compare boson-side evidence with the verdict",
    )
    p.add_argument("--cutoff", default="3", help="weight cutoff (rational, default 3)")
    p.add_argument(
        "--window", type=int, default=2, help="half-width of the charge window (default 2)"
    )
    p.add_argument(
        "--excursion", default="2", help="extra exploration headroom (rational, default 2)"
    )
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser(
        "relations", parents=[chi_parent], help="randomized relation suites"
    )
    p.add_argument("--suite", choices=["clifford", "super", "affine"], required=True)
    p.add_argument("--max-mode", type=int, default=3, help="mode bound (default 3)")
    p.add_argument("--weight", default="3", help="weight bound for sampled vectors")
    p.add_argument("--window", type=int, default=3, help="charge half-width (affine only)")
    p.add_argument("--trials", type=int, default=5, help="number of sampled vectors")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.set_defaults(func=_cmd_relations)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChiParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
