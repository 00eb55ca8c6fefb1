"""Irreducibility classification of the twisted charged-fermion module.

``classify`` decides among five mutually exclusive cases by exact
arithmetic on the twist series chi and emits a certificate.  A separate
``verify_certificate`` re-derives every claim from scratch:

* case "i"   — chi has a pole (some chi_m != 0 with m > 0): irreducible.
* case "ii"  — pole-free with chi_0 = 1 or chi_0 not an integer: irreducible.
* case "iii" — pole-free, ell = chi_0 - 1 >= 1 and S_ell(-chi) != 0:
  irreducible; the certificate carries the lowering word whose image on the
  staircase vector Omega_ell is a nonzero multiple of the vacuum.
* "schur_zero" — ell >= 1 but S_ell(-chi) = 0: reducible; the certificate
  carries the singular vector w annihilated by all positive modes, plus a
  truncated-closure run showing the vacuum is not reached from Omega_ell.
* "neg_ell"  — ell <= -1: reducible; with q = -ell - 1 the monomial
  Psi-(-q-1/2)|0> stays outside the truncated closure of the vacuum, whose
  graded dimension is strictly smaller than the full space in the window.

Positive closure facts (memberships) are exact proofs; negative facts are
evidence scoped to the closure window recorded in the certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .fock import (
    FermionState,
    FermionVec,
    charge,
    enumerate_basis,
    fmt_halfodd,
    parse_state,
    vacuum_vec,
    vec_from_json_obj,
)
from .scalars import ChiSeries, ell_of, format_rational, pole_order
from .schur import schur_at_minus_chi
from .span import ClosureConfig, closure, cyclic_probe
from .superalg import (
    FOCK_SPACE,
    OperatorWord,
    a_module_ops,
    apply_Gminus,
    apply_Gplus,
    apply_word,
    gminus_string_on_omega,
    omega,
    omega_vec,
    singular_w,
)

__all__ = [
    "DEFAULT_CFG",
    "Verdict",
    "Certificate",
    "Check",
    "Report",
    "classify",
    "verify_certificate",
]

DEFAULT_CFG = ClosureConfig()

_IRREDUCIBLE_KINDS = {"pole": "i", "generic_weight": "ii", "schur_nonzero": "iii"}
_REDUCIBLE_KINDS = {"schur_zero": "schur_zero", "neg_ell": "neg_ell"}


@dataclass(frozen=True)
class Verdict:
    status: str  # "irreducible" | "reducible"
    case: str  # "i" | "ii" | "iii" | "schur_zero" | "neg_ell"
    data: dict

    def to_json_obj(self) -> dict:
        return {"status": self.status, "case": self.case, "data": dict(self.data)}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Verdict":
        return cls(obj["status"], obj["case"], dict(obj.get("data", {})))


@dataclass(frozen=True)
class Certificate:
    kind: str
    data: dict

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "data": dict(self.data)}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Certificate":
        return cls(obj["kind"], dict(obj.get("data", {})))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json_obj(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Report:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_obj(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json_obj() for c in self.checks]}


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _annihilation_failures(w: FermionVec, chi: ChiSeries, nmax: int) -> list[str]:
    bad = []
    for n in range(1, nmax + 1):
        if not apply_Gplus(n, w).is_zero():
            bad.append(f"G+({fmt_halfodd(2 * n - 1)})")
        if not apply_Gminus(n, w, chi).is_zero():
            bad.append(f"G-({fmt_halfodd(2 * n - 1)})")
    return bad


def classify(chi: ChiSeries, cfg: ClosureConfig = DEFAULT_CFG) -> tuple[Verdict, Certificate]:
    """Decide irreducibility of the twisted module and build a certificate.

    The irreducible cases are settled by scalar arithmetic alone; the
    reducible cases additionally run the span engine inside ``cfg`` to
    attach concrete witness data.
    """
    p = pole_order(chi)
    if p >= 1:
        lead = format_rational(chi.coeff(p))
        verdict = Verdict("irreducible", "i", {"pole_order": p, "chi_p": lead})
        cert = Certificate("pole", {"pole_order": p, "chi_p": lead, "cfg": cfg.to_json_obj()})
        return verdict, cert
    chi0 = chi.coeff(0)
    ell = ell_of(chi)
    if ell is None or ell == 0:
        c0 = format_rational(chi0)
        verdict = Verdict("irreducible", "ii", {"chi0": c0})
        cert = Certificate("generic_weight", {"chi0": c0, "cfg": cfg.to_json_obj()})
        return verdict, cert
    if ell >= 1:
        sval = schur_at_minus_chi(ell, chi)
        if sval != 0:
            word = OperatorWord(tuple(("G-", 2 * i - 1) for i in range(1, ell + 1)))
            coeff = gminus_string_on_omega(ell, chi)
            verdict = Verdict(
                "irreducible", "iii", {"ell": ell, "schur_value": format_rational(sval)}
            )
            cert = Certificate(
                "schur_nonzero",
                {
                    "ell": ell,
                    "schur_value": format_rational(sval),
                    "lowering_word": word.to_json_obj(),
                    "vacuum_coefficient": format_rational(coeff),
                    "cfg": cfg.to_json_obj(),
                },
            )
            return verdict, cert
        w = singular_w(ell, chi)
        nmax = max(4, ell + 2)
        ops = a_module_ops(chi, cfg)
        basis = closure([omega_vec(ell)], ops, cfg, FOCK_SPACE)
        vacuum_excluded = not basis.contains(vacuum_vec())
        verdict = Verdict("reducible", "schur_zero", {"ell": ell})
        cert = Certificate(
            "schur_zero",
            {
                "ell": ell,
                "omega": str(omega(ell)),
                "w": w.to_json_obj(),
                "annihilation_range": nmax,
                "annihilation_failures": _annihilation_failures(w, chi, nmax),
                "vacuum_excluded": vacuum_excluded,
                "closure": basis.report(),
                "cfg": cfg.to_json_obj(),
            },
        )
        return verdict, cert
    q = -ell - 1
    excluded_state = FermionState((2 * q + 1,), ())
    ops = a_module_ops(chi, cfg)
    basis = closure([vacuum_vec()], ops, cfg, FOCK_SPACE)
    excluded = not basis.contains(FermionVec.basis(excluded_state))
    closure_dim = sum(basis.graded_dimension().values())
    lo, hi = cfg.charge_window
    full_dim = sum(
        1 for st in enumerate_basis(cfg.weight_cutoff) if lo <= charge(st) <= hi
    )
    verdict = Verdict("reducible", "neg_ell", {"ell": ell, "q": q})
    cert = Certificate(
        "neg_ell",
        {
            "ell": ell,
            "q": q,
            "excluded_state": str(excluded_state),
            "excluded": excluded,
            "closure_dimension": closure_dim,
            "full_dimension": full_dim,
            "closure": basis.report(),
            "cfg": cfg.to_json_obj(),
        },
    )
    return verdict, cert


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _cyclic_failures(
    chi: ChiSeries, cfg: ClosureConfig, start_weight: Fraction
) -> tuple[int, list[str]]:
    """Probe every charged basis vector up to start_weight for cyclicity."""
    ops = a_module_ops(chi, cfg)
    vac = vacuum_vec()
    lo, hi = cfg.charge_window
    states = [st for st in enumerate_basis(start_weight) if lo <= charge(st) <= hi]
    failures = [
        str(st)
        for st in states
        if not cyclic_probe(FermionVec.basis(st), vac, ops, cfg, FOCK_SPACE)
    ]
    return len(states), failures


def verify_certificate(
    chi: ChiSeries,
    verdict: Verdict,
    cert: Certificate,
    cfg: Optional[ClosureConfig] = None,
    start_weight: Optional[Fraction] = None,
) -> Report:
    """Re-derive every certificate claim from chi alone.

    Never raises on a failing claim — each one becomes a failed check in the
    report.  ``cfg`` defaults to the window recorded in the certificate;
    ``start_weight`` bounds the generators probed for cyclicity in the
    irreducible cases (default: min(5/2, weight cutoff)).
    """
    if cfg is None:
        recorded = cert.data.get("cfg")
        cfg = ClosureConfig.from_json_obj(recorded) if recorded else DEFAULT_CFG
    if start_weight is None:
        start_weight = min(Fraction(5, 2), cfg.weight_cutoff)
    checks: list[Check] = []

    def add(name: str, passed, detail: str = "") -> bool:
        checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    kind = cert.kind
    expected_case = _IRREDUCIBLE_KINDS.get(kind) or _REDUCIBLE_KINDS.get(kind)
    expected_status = "irreducible" if kind in _IRREDUCIBLE_KINDS else "reducible"
    add(
        "verdict_matches_certificate",
        expected_case == verdict.case and verdict.status == expected_status,
        f"kind={kind}, case={verdict.case}, status={verdict.status}",
    )
    if expected_case is None:
        return Report(tuple(checks))

    p = pole_order(chi)
    ell = ell_of(chi)

    if kind == "pole":
        ok_p = p >= 1 and p == cert.data.get("pole_order")
        add("pole_order", ok_p, f"pole_order={p}")
        lead = chi.coeff(p) if p >= 1 else Fraction(0)
        add(
            "pole_coefficient",
            ok_p and lead != 0 and format_rational(lead) == cert.data.get("chi_p"),
            f"chi_{p}={format_rational(lead)}",
        )
        n, failures = _cyclic_failures(chi, cfg, start_weight)
        add("cyclic_probes", not failures, f"{n - len(failures)}/{n} generators cyclic")
        return Report(tuple(checks))

    if kind == "generic_weight":
        add("pole_free", p == 0, f"pole_order={p}")
        chi0 = chi.coeff(0)
        add(
            "weight_generic",
            format_rational(chi0) == cert.data.get("chi0")
            and (chi0 == 1 or chi0.denominator != 1),
            f"chi0={format_rational(chi0)}",
        )
        n, failures = _cyclic_failures(chi, cfg, start_weight)
        add("cyclic_probes", not failures, f"{n - len(failures)}/{n} generators cyclic")
        return Report(tuple(checks))

    if kind == "schur_nonzero":
        ell_ok = add(
            "ell",
            p == 0 and ell is not None and ell >= 1 and ell == cert.data.get("ell"),
            f"ell={ell}",
        )
        if ell_ok:
            sval = schur_at_minus_chi(ell, chi)
            add(
                "schur_nonzero",
                sval != 0 and format_rational(sval) == cert.data.get("schur_value"),
                f"S_{ell}(-chi)={format_rational(sval)}",
            )
            word = OperatorWord.from_json_obj(cert.data.get("lowering_word", []))
            image = apply_word(word, omega_vec(ell), chi)
            expected = Fraction(cert.data.get("vacuum_coefficient", "0"))
            derived = Fraction(math.factorial(ell)) * (-1) ** ell * sval
            add(
                "lowering_word_reaches_vacuum",
                expected != 0 and expected == derived and image == expected * vacuum_vec(),
                f"coefficient={format_rational(expected)}",
            )
        n, failures = _cyclic_failures(chi, cfg, start_weight)
        add("cyclic_probes", not failures, f"{n - len(failures)}/{n} generators cyclic")
        return Report(tuple(checks))

    if kind == "schur_zero":
        ell_ok = add(
            "ell",
            p == 0 and ell is not None and ell >= 1 and ell == cert.data.get("ell"),
            f"ell={ell}",
        )
        if not ell_ok:
            return Report(tuple(checks))
        sval = schur_at_minus_chi(ell, chi)
        add("schur_vanishes", sval == 0, f"S_{ell}(-chi)={format_rational(sval)}")
        try:
            recorded_w = vec_from_json_obj(cert.data.get("w", []))
        except (ValueError, KeyError, TypeError) as exc:
            add("witness_matches", False, f"unreadable witness: {exc}")
            return Report(tuple(checks))
        add(
            "witness_matches",
            not recorded_w.is_zero() and recorded_w == singular_w(ell, chi),
            f"{len(recorded_w.terms)} terms",
        )
        nmax = int(cert.data.get("annihilation_range", max(4, ell + 2)))
        failures = _annihilation_failures(recorded_w, chi, nmax)
        add(
            "witness_annihilated",
            not failures,
            f"modes n=1..{nmax}" + (f"; failing: {failures}" if failures else ""),
        )
        basis = closure([omega_vec(ell)], a_module_ops(chi, cfg), cfg, FOCK_SPACE)
        excluded = not basis.contains(vacuum_vec())
        add(
            "vacuum_excluded",
            excluded and cert.data.get("vacuum_excluded") is True,
            f"closure dimension {basis.dimension()}",
        )
        return Report(tuple(checks))

    # kind == "neg_ell"
    ell_ok = add(
        "ell",
        p == 0 and ell is not None and ell <= -1 and ell == cert.data.get("ell"),
        f"ell={ell}",
    )
    if not ell_ok:
        return Report(tuple(checks))
    q = -ell - 1
    add("q", q == cert.data.get("q"), f"q={q}")
    try:
        excluded_state = parse_state(cert.data.get("excluded_state", ""))
    except ValueError as exc:
        add("excluded_state", False, f"unreadable state: {exc}")
        return Report(tuple(checks))
    add(
        "excluded_state",
        excluded_state == FermionState((2 * q + 1,), ()),
        str(excluded_state),
    )
    basis = closure([vacuum_vec()], a_module_ops(chi, cfg), cfg, FOCK_SPACE)
    add(
        "state_excluded",
        not basis.contains(FermionVec.basis(excluded_state)),
        f"weight {fmt_halfodd(2 * q + 1)} monomial not reached",
    )
    closure_dim = sum(basis.graded_dimension().values())
    lo, hi = cfg.charge_window
    full_dim = sum(1 for st in enumerate_basis(cfg.weight_cutoff) if lo <= charge(st) <= hi)
    add(
        "proper_within_window",
        closure_dim < full_dim
        and closure_dim == cert.data.get("closure_dimension")
        and full_dim == cert.data.get("full_dimension"),
        f"closure {closure_dim} < full {full_dim}",
    )
    return Report(tuple(checks))
