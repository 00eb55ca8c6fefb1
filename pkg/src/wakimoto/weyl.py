"""Free-boson (Weyl) realization of the twisted sl2 current action.

A Weyl pair a(n), a*(n) with [a(n), a*(m)] = delta_{n+m,0} acts on the Fock
space generated from |0> with a(n)|0> = 0 for n >= 0 and a*(n)|0> = 0 for
n >= 1 (so a*(0) creates).  A basis monomial is

    a(-n_1) ... a(-n_r) a*(-k_1) ... a*(-k_s) |0>,

with n_i >= 1 and k_j >= 0, each side a multiset.  Weight of a(-n) and
a*(-n) is n; charge of a* is +1 and of a is -1.

The current modes twisted by a series chi act through

    e(n) = a(n),
    h(n) = -2 sum_{m+k=n} :a*(m) a(k): - chi_n,
    f(n) = -sum_{m1+m2+k=n} :a*(m1) a*(m2) a(k): + 2n a*(n)
           - sum_j chi_j a*(n-j),

with normal ordering putting annihilators on the right.  On any fixed
monomial only finitely many summands act nonzero, and the candidate windows
below enumerate exactly those, so every action is computed exactly.  The
resulting bracket relations hold with central scalar -2:

    [h(m), e(n)] = 2 e(m+n),         [h(m), f(n)] = -2 f(m+n),
    [e(m), f(n)] = h(m+n) - 2m delta_{m+n,0},
    [h(m), h(n)] = -4m delta_{m+n,0},   [e,e] = [f,f] = 0.

``wakimoto_probe`` gathers reducibility evidence on this side: cyclicity of
every small basis vector, and joint kernels of the raising modes in each
graded piece.  ``evidence_agrees`` compares it with the classifier verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Iterator, Mapping, Optional

from .scalars import ChiSeries, format_rational, pole_order
from .span import ClosureConfig, Space, cyclic_probe, joint_kernel

__all__ = [
    "WeylState",
    "WeylVec",
    "WEYL_VACUUM",
    "WEYL_SPACE",
    "weyl_vacuum_vec",
    "weyl_weight",
    "weyl_charge",
    "weyl_state_key",
    "apply_a",
    "apply_astar",
    "apply_e",
    "apply_h",
    "apply_f",
    "WeylAction",
    "enumerate_weyl_basis",
    "affine_relation_check",
    "wakimoto_ops",
    "DEFAULT_PROBE_CFG",
    "wakimoto_probe",
    "Evidence",
    "evidence_agrees",
]


@dataclass(frozen=True)
class WeylState:
    """Canonical boson monomial; both mode multisets stored ascending."""

    a_modes: tuple[int, ...] = ()
    astar_modes: tuple[int, ...] = ()

    def __post_init__(self):
        if any(not isinstance(n, int) or n < 1 for n in self.a_modes):
            raise ValueError(f"a modes must be positive integers: {self.a_modes!r}")
        if any(not isinstance(n, int) or n < 0 for n in self.astar_modes):
            raise ValueError(f"a* modes must be non-negative integers: {self.astar_modes!r}")
        if tuple(sorted(self.a_modes)) != self.a_modes or tuple(sorted(self.astar_modes)) != self.astar_modes:
            raise ValueError("mode multisets must be sorted ascending")

    def __str__(self) -> str:
        parts = []
        for prefix, modes in (("a", self.a_modes), ("a*", self.astar_modes)):
            for d in sorted(set(modes), reverse=True):
                cnt = modes.count(d)
                tok = f"{prefix}({-d})"
                parts.append(tok if cnt == 1 else f"{tok}^{cnt}")
        parts.append("|0>")
        return " ".join(parts)


WEYL_VACUUM = WeylState((), ())


def weyl_weight(state: WeylState) -> int:
    return sum(state.a_modes) + sum(state.astar_modes)


def weyl_charge(state: WeylState) -> int:
    return len(state.astar_modes) - len(state.a_modes)


def weyl_state_key(state: WeylState):
    return (weyl_weight(state), weyl_charge(state), state.a_modes, state.astar_modes)


class WeylVec:
    """Sparse rational combination of :class:`WeylState` monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[WeylState, Fraction]] = None):
        data: dict[WeylState, Fraction] = {}
        if terms:
            for st, c in terms.items():
                c = Fraction(c)
                if c:
                    data[st] = c
        self.terms = data

    @classmethod
    def zero(cls) -> "WeylVec":
        return cls()

    @classmethod
    def basis(cls, state: WeylState) -> "WeylVec":
        return cls({state: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, state: WeylState) -> Fraction:
        return self.terms.get(state, Fraction(0))

    def __add__(self, other: "WeylVec") -> "WeylVec":
        data = dict(self.terms)
        for st, c in other.terms.items():
            data[st] = data.get(st, Fraction(0)) + c
        return WeylVec(data)

    def __sub__(self, other: "WeylVec") -> "WeylVec":
        data = dict(self.terms)
        for st, c in other.terms.items():
            data[st] = data.get(st, Fraction(0)) - c
        return WeylVec(data)

    def __neg__(self) -> "WeylVec":
        return WeylVec({st: -c for st, c in self.terms.items()})

    def _scaled(self, scalar) -> "WeylVec":
        s = Fraction(scalar)
        return WeylVec({st: s * c for st, c in self.terms.items()})

    def __mul__(self, scalar) -> "WeylVec":
        return self._scaled(scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "WeylVec":
        return self._scaled(Fraction(1) / Fraction(scalar))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylVec) and self.terms == other.terms

    __hash__ = None

    def sorted_items(self) -> list[tuple[WeylState, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: weyl_state_key(kv[0]))

    def to_json_obj(self) -> list[dict]:
        return [{"state": str(st), "value": format_rational(c)} for st, c in self.sorted_items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "WeylVec(0)"
        body = " + ".join(f"({c})*{st}" for st, c in self.sorted_items())
        return f"WeylVec({body})"


WEYL_SPACE = Space(weight_of=weyl_weight, charge_of=weyl_charge, sort_key=weyl_state_key)


def weyl_vacuum_vec() -> WeylVec:
    return WeylVec.basis(WEYL_VACUUM)


# ---------------------------------------------------------------------------
# single-mode actions
# ---------------------------------------------------------------------------


def _remove_one(modes: tuple[int, ...], value: int) -> tuple[int, ...]:
    out = list(modes)
    out.remove(value)
    return tuple(out)


def _insert_one(modes: tuple[int, ...], value: int) -> tuple[int, ...]:
    return tuple(sorted(modes + (value,)))


def apply_a(n: int, v: WeylVec) -> WeylVec:
    """Mode a(n): contraction against a*(-n) for n >= 0, creation below."""
    data: dict[WeylState, Fraction] = {}
    for st, c in v.terms.items():
        if n >= 0:
            mult = st.astar_modes.count(n)
            if not mult:
                continue
            new = WeylState(st.a_modes, _remove_one(st.astar_modes, n))
            coeff = c * mult
        else:
            new = WeylState(_insert_one(st.a_modes, -n), st.astar_modes)
            coeff = c
        data[new] = data.get(new, Fraction(0)) + coeff
    return WeylVec(data)


def apply_astar(n: int, v: WeylVec) -> WeylVec:
    """Mode a*(n): contraction against a(-n) for n >= 1, creation below."""
    data: dict[WeylState, Fraction] = {}
    for st, c in v.terms.items():
        if n >= 1:
            mult = st.a_modes.count(n)
            if not mult:
                continue
            new = WeylState(_remove_one(st.a_modes, n), st.astar_modes)
            coeff = -c * mult
        else:
            new = WeylState(st.a_modes, _insert_one(st.astar_modes, -n))
            coeff = c
        data[new] = data.get(new, Fraction(0)) + coeff
    return WeylVec(data)


def _apply_normal_ordered(factors: list[tuple[str, int]], v: WeylVec) -> WeylVec:
    """Apply a normal-ordered product: all annihilators act first.

    Valid because annihilators commute among themselves, as do creators, so
    the only reordering a normal-ordered product suppresses is the
    annihilator/creator contraction.
    """
    ann: list[tuple[str, int]] = []
    cre: list[tuple[str, int]] = []
    for kind, m in factors:
        if (kind == "a" and m >= 0) or (kind == "a*" and m >= 1):
            ann.append((kind, m))
        else:
            cre.append((kind, m))
    for kind, m in ann + cre:
        if v.is_zero():
            break
        v = apply_a(m, v) if kind == "a" else apply_astar(m, v)
    return v


def apply_e(n: int, v: WeylVec, chi: Optional[ChiSeries] = None) -> WeylVec:
    return apply_a(n, v)


def apply_h(n: int, v: WeylVec, chi: ChiSeries) -> WeylVec:
    """h(n) = -2 sum_{m+k=n} :a*(m) a(k): - chi_n."""
    out = WeylVec.zero()
    for st, c in v.terms.items():
        a_set = set(st.a_modes)
        s_set = set(st.astar_modes)
        cands = set(a_set)
        cands.update(n - k for k in s_set if n - k <= 0)
        cands.update(range(n + 1, 1))
        acc = WeylVec.zero()
        base = WeylVec({st: c})
        for m in sorted(cands):
            k = n - m
            if k >= 0 and k not in s_set:
                continue
            acc = acc + _apply_normal_ordered([("a*", m), ("a", k)], base)
        out = out + acc
    return -2 * out - chi.coeff(n) * v


def apply_f(n: int, v: WeylVec, chi: ChiSeries) -> WeylVec:
    """f(n) = -sum :a*a*a: + 2n a*(n) - sum_j chi_j a*(n-j)."""
    cubic = WeylVec.zero()
    for st, c in v.terms.items():
        a_set = set(st.a_modes)
        s_set = set(st.astar_modes)
        low = n - max(a_set, default=0) - max(s_set, default=0)
        cands = sorted(a_set | set(range(min(low, 1), 1)))
        base = WeylVec({st: c})
        acc = WeylVec.zero()
        for m1 in cands:
            for m2 in cands:
                k = n - m1 - m2
                if k >= 0 and k not in s_set:
                    continue
                acc = acc + _apply_normal_ordered(
                    [("a*", m1), ("a*", m2), ("a", k)], base
                )
        cubic = cubic + acc
    out = -cubic + 2 * n * apply_astar(n, v)
    for j in chi.support:
        out = out - chi.coeff(j) * apply_astar(n - j, v)
    return out


class WeylAction:
    """Mode operators for a fixed twist, memoized per basis monomial.

    Relation suites and closure probes revisit the same monomials many
    times; caching the single-monomial images keeps those exact runs fast.
    """

    _RAW = {"e": apply_e, "h": apply_h, "f": apply_f}

    def __init__(self, chi: ChiSeries):
        self.chi = chi
        self._cache: dict[tuple[str, int, WeylState], tuple] = {}

    def apply(self, kind: str, n: int, v: WeylVec) -> WeylVec:
        raw = self._RAW[kind]
        data: dict[WeylState, Fraction] = {}
        for st, c in v.terms.items():
            key = (kind, n, st)
            items = self._cache.get(key)
            if items is None:
                items = tuple(raw(n, WeylVec.basis(st), self.chi).sorted_items())
                self._cache[key] = items
            for out_state, coeff in items:
                data[out_state] = data.get(out_state, Fraction(0)) + c * coeff
        return WeylVec(data)

    def e(self, n: int, v: WeylVec) -> WeylVec:
        return self.apply("e", n, v)

    def h(self, n: int, v: WeylVec) -> WeylVec:
        return self.apply("h", n, v)

    def f(self, n: int, v: WeylVec) -> WeylVec:
        return self.apply("f", n, v)


# ---------------------------------------------------------------------------
# basis enumeration
# ---------------------------------------------------------------------------


def _bounded_partitions(budget: int, max_part: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All multisets of positive integers with sum <= budget, ascending."""
    yield ()
    top = budget if max_part is None else min(max_part, budget)
    for p in range(top, 0, -1):
        for rest in _bounded_partitions(budget - p, p):
            yield rest + (p,)


def enumerate_weyl_basis(
    weight_cutoff, charge_window: tuple[int, int]
) -> list[WeylState]:
    """All monomials with weight <= cutoff and charge inside the window.

    The zero mode a*(0) is weightless, so its multiplicity is bounded by the
    charge window alone.
    """
    budget = math.floor(Fraction(weight_cutoff))
    lo, hi = charge_window
    states = []
    for a_part in _bounded_partitions(budget):
        rest = budget - sum(a_part)
        for s_part in _bounded_partitions(rest):
            base = len(s_part) - len(a_part)
            for zeros in range(0, max(0, hi - base) + 1):
                ch = base + zeros
                if not lo <= ch <= hi:
                    continue
                states.append(WeylState(a_part, (0,) * zeros + s_part))
    return sorted(states, key=weyl_state_key)


# ---------------------------------------------------------------------------
# relation suite
# ---------------------------------------------------------------------------


def affine_relation_check(
    m: int, n: int, v: WeylVec, chi: ChiSeries, action: Optional[WeylAction] = None
) -> list[tuple[str, bool]]:
    """Evaluate every bracket relation at modes (m, n) on the vector v."""
    act = action if action is not None else WeylAction(chi)
    delta = 1 if m + n == 0 else 0
    he = act.h(m, act.e(n, v)) - act.e(n, act.h(m, v))
    hf = act.h(m, act.f(n, v)) - act.f(n, act.h(m, v))
    ef = act.e(m, act.f(n, v)) - act.f(n, act.e(m, v))
    hh = act.h(m, act.h(n, v)) - act.h(n, act.h(m, v))
    ee = act.e(m, act.e(n, v)) - act.e(n, act.e(m, v))
    ff = act.f(m, act.f(n, v)) - act.f(n, act.f(m, v))
    return [
        ("[h,e]=2e", he == 2 * act.e(m + n, v)),
        ("[h,f]=-2f", hf == -2 * act.f(m + n, v)),
        ("[e,f]=h-2m*delta", ef == act.h(m + n, v) + (-2 * m * delta) * v),
        ("[h,h]=-4m*delta", hh == (-4 * m * delta) * v),
        ("[e,e]=0", ee.is_zero()),
        ("[f,f]=0", ff.is_zero()),
    ]


# ---------------------------------------------------------------------------
# reducibility evidence
# ---------------------------------------------------------------------------


def wakimoto_ops(
    chi: ChiSeries, cfg: ClosureConfig, action: Optional[WeylAction] = None
) -> list[tuple[str, object]]:
    """Current modes able to move weight within the truncation window."""
    act = action if action is not None else WeylAction(chi)
    bound = math.floor(cfg.weight_cutoff + cfg.excursion)
    pad = max((abs(j) for j in chi.support), default=0)
    span_n = bound + pad
    ops: list[tuple[str, object]] = []
    for n in range(-span_n, span_n + 1):
        ops.append((f"e({n})", partial(act.e, n)))
        ops.append((f"h({n})", partial(act.h, n)))
        ops.append((f"f({n})", partial(act.f, n)))
    return ops


@dataclass(frozen=True)
class Evidence:
    """Reducibility evidence from the boson side.

    ``all_cyclic`` — every probed basis vector regenerates the vacuum inside
    the window.  ``candidates`` — nonzero joint kernels of the raising modes
    in graded pieces other than the vacuum line, i.e. singular-vector
    candidates (their existence alone does not decide reducibility).
    """

    all_cyclic: bool
    non_cyclic: tuple[str, ...]
    candidates: tuple[dict, ...]
    probed: int
    cfg: ClosureConfig

    def to_json_obj(self) -> dict:
        return {
            "all_cyclic": self.all_cyclic,
            "non_cyclic": list(self.non_cyclic),
            "candidates": [dict(c) for c in self.candidates],
            "probed": self.probed,
            "cfg": self.cfg.to_json_obj(),
        }


DEFAULT_PROBE_CFG = ClosureConfig(Fraction(3), (-2, 2), Fraction(2))


def wakimoto_probe(chi: ChiSeries, cfg: ClosureConfig = DEFAULT_PROBE_CFG) -> Evidence:
    """Collect cyclicity and singular-candidate evidence within the window."""
    action = WeylAction(chi)
    ops = wakimoto_ops(chi, cfg, action)
    states = enumerate_weyl_basis(cfg.weight_cutoff, cfg.charge_window)
    vac = weyl_vacuum_vec()
    non_cyclic = tuple(
        str(st)
        for st in states
        if not cyclic_probe(WeylVec.basis(st), vac, ops, cfg, WEYL_SPACE)
    )
    nmax = 2 * math.floor(cfg.weight_cutoff) + max(pole_order(chi), 0) + 1
    ann: list[tuple[str, object]] = [("e(0)", partial(action.e, 0))]
    for n in range(1, nmax + 1):
        ann.append((f"e({n})", partial(action.e, n)))
        ann.append((f"h({n})", partial(action.h, n)))
        ann.append((f"f({n})", partial(action.f, n)))
    pieces: dict[tuple[int, int], list[WeylState]] = {}
    for st in states:
        pieces.setdefault((weyl_weight(st), weyl_charge(st)), []).append(st)
    candidates = []
    for (w, c), piece in sorted(pieces.items()):
        if (w, c) == (0, 0):
            continue
        kernel = joint_kernel(ann, piece, WeylVec, WEYL_SPACE)
        if kernel.dimension():
            candidates.append(
                {
                    "weight": w,
                    "charge": c,
                    "dimension": kernel.dimension(),
                    "vectors": [row.to_json_obj() for row in kernel.rows()],
                }
            )
    return Evidence(
        all_cyclic=not non_cyclic,
        non_cyclic=non_cyclic,
        candidates=tuple(candidates),
        probed=len(states),
        cfg=cfg,
    )


def evidence_agrees(verdict_status: str, evidence: Evidence) -> bool:
    """Does boson-side evidence line up with the classifier verdict?

    Irreducible verdicts demand full cyclicity; reducible ones demand a
    cyclicity failure or at least one singular candidate.
    """
    if verdict_status == "irreducible":
        return evidence.all_cyclic
    return (not evidence.all_cyclic) or bool(evidence.candidates)
