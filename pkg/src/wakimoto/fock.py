"""Charged free-fermion Fock space over the rationals.

Two families of odd generators ``Psi+(r)`` and ``Psi-(r)`` indexed by
half-odd modes ``r`` satisfy

    {Psi+(r), Psi-(s)} = delta_{r+s,0},      {Psi±(r), Psi±(s)} = 0,

and positive modes kill the vacuum ``|0>``.  A basis vector is the canonical
word

    Psi-(-lam_1) ... Psi-(-lam_r) Psi+(-mu_1) ... Psi+(-mu_s) |0>

with ``lam`` and ``mu`` strictly decreasing tuples of positive half-odds.
The whole space F allows ``mu_j >= 1/2``; the charged subspace (the kernel
of ``Psi-(1/2)``) is spanned by words with ``mu_j >= 3/2``, and that smaller
space is where the twisted module structure lives.

Half-odd modes are stored as doubled odd integers so every index computation
stays integral; weights are returned as exact ``Fraction`` values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

__all__ = [
    "PLUS",
    "MINUS",
    "FermionState",
    "FermionVec",
    "VACUUM",
    "vacuum_vec",
    "parse_state",
    "vec_from_json_obj",
    "weight",
    "charge",
    "state_key",
    "apply_psi",
    "apply_psi_dmode",
    "enumerate_basis",
    "graded_dimension",
    "check_tilde",
    "fmt_halfodd",
    "parse_halfodd",
    "as_dmode",
]

PLUS = "+"
MINUS = "-"


def as_dmode(mode: Union[Fraction, int, str]) -> int:
    """Convert a half-odd mode to its doubled-integer representation."""
    if isinstance(mode, str):
        mode = Fraction(mode)
    d = 2 * Fraction(mode)
    if d.denominator != 1 or int(d) % 2 == 0:
        raise ValueError(f"mode must be half-odd, got {mode!r}")
    return int(d)


def fmt_halfodd(d: int) -> str:
    """Doubled odd integer -> literal like ``-3/2``."""
    return f"{d}/2"


def parse_halfodd(text: str) -> int:
    d = as_dmode(Fraction(text.strip()))
    return d


@dataclass(frozen=True)
class FermionState:
    """Canonical monomial ``(lam, mu)``: doubled, strictly decreasing, odd, >= 1."""

    lam: tuple[int, ...] = ()
    mu: tuple[int, ...] = ()

    def __post_init__(self):
        for name, part in (("lam", self.lam), ("mu", self.mu)):
            last = None
            for d in part:
                if not isinstance(d, int) or d < 1 or d % 2 == 0:
                    raise ValueError(f"{name} entries must be positive doubled odd ints: {part}")
                if last is not None and d >= last:
                    raise ValueError(f"{name} must be strictly decreasing: {part}")
                last = d

    @classmethod
    def from_modes(cls, lam: Iterable[Union[Fraction, str]] = (), mu: Iterable[Union[Fraction, str]] = ()) -> "FermionState":
        dl = tuple(sorted((as_dmode(x) for x in lam), reverse=True))
        dm = tuple(sorted((as_dmode(x) for x in mu), reverse=True))
        return cls(dl, dm)

    def fits_tilde(self) -> bool:
        """True when the monomial lies in the charged subspace (mu >= 3/2)."""
        return all(d >= 3 for d in self.mu)

    def __str__(self) -> str:
        parts = [f"Psi-(-{fmt_halfodd(d)})" for d in self.lam]
        parts += [f"Psi+(-{fmt_halfodd(d)})" for d in self.mu]
        parts.append("|0>")
        return " ".join(parts)


VACUUM = FermionState((), ())


def weight(state: FermionState) -> Fraction:
    return Fraction(sum(state.lam) + sum(state.mu), 2)


def charge(state: FermionState) -> int:
    return len(state.mu) - len(state.lam)


def state_key(state: FermionState):
    """Global basis order: weight, then charge, then lexicographic (lam, mu)."""
    return (weight(state), charge(state), state.lam, state.mu)


class FermionVec:
    """Sparse rational linear combination of :class:`FermionState` monomials.

    ``ambient`` records whether the vector is considered inside the whole
    Fock space F (allowing ``Psi+(-1/2)`` factors) or inside the charged
    subspace.  All stored states must be compatible with the flag.  Equality
    compares coefficients only.
    """

    __slots__ = ("terms", "ambient")

    def __init__(self, terms: Optional[Mapping[FermionState, Fraction]] = None, ambient: bool = False):
        acc: dict[FermionState, Fraction] = {}
        for st, c in (terms or {}).items():
            q = c if isinstance(c, Fraction) else Fraction(c)
            if q:
                acc[st] = q
        if not ambient:
            for st in acc:
                if not st.fits_tilde():
                    raise ValueError(f"state {st} needs ambient=True (mu entry 1/2)")
        self.terms = acc
        self.ambient = ambient

    @classmethod
    def zero(cls, ambient: bool = False) -> "FermionVec":
        return cls({}, ambient)

    @classmethod
    def basis(cls, state: FermionState, ambient: Optional[bool] = None) -> "FermionVec":
        if ambient is None:
            ambient = not state.fits_tilde()
        return cls({state: Fraction(1)}, ambient)

    @classmethod
    def from_items(cls, items: Iterable[tuple[FermionState, Fraction]], ambient: bool = False) -> "FermionVec":
        acc: dict[FermionState, Fraction] = {}
        for st, c in items:
            acc[st] = acc.get(st, Fraction(0)) + Fraction(c)
        return cls(acc, ambient)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, state: FermionState) -> Fraction:
        return self.terms.get(state, Fraction(0))

    def __add__(self, other: "FermionVec") -> "FermionVec":
        acc = dict(self.terms)
        for st, c in other.terms.items():
            acc[st] = acc.get(st, Fraction(0)) + c
        return FermionVec(acc, self.ambient or other.ambient)

    def __sub__(self, other: "FermionVec") -> "FermionVec":
        acc = dict(self.terms)
        for st, c in other.terms.items():
            acc[st] = acc.get(st, Fraction(0)) - c
        return FermionVec(acc, self.ambient or other.ambient)

    def __neg__(self) -> "FermionVec":
        return FermionVec({st: -c for st, c in self.terms.items()}, self.ambient)

    def _scaled(self, scalar) -> "FermionVec":
        q = Fraction(scalar)
        if not q:
            return FermionVec.zero(self.ambient)
        return FermionVec({st: q * c for st, c in self.terms.items()}, self.ambient)

    def __mul__(self, scalar) -> "FermionVec":
        return self._scaled(scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "FermionVec":
        return self._scaled(Fraction(1, 1) / Fraction(scalar))

    def __eq__(self, other) -> bool:
        return isinstance(other, FermionVec) and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def max_weight(self) -> Optional[Fraction]:
        return max((weight(st) for st in self.terms), default=None)

    def charges(self) -> set[int]:
        return {charge(st) for st in self.terms}

    def sorted_items(self) -> list[tuple[FermionState, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: state_key(kv[0]))

    def to_json_obj(self) -> list[dict]:
        from .scalars import format_rational

        return [{"state": str(st), "value": format_rational(c)} for st, c in self.sorted_items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "FermionVec(0)"
        body = " + ".join(f"({c})*{st}" for st, c in self.sorted_items())
        return f"FermionVec({body})"


def vacuum_vec(ambient: bool = False) -> FermionVec:
    return FermionVec.basis(VACUUM, ambient)


_STATE_TOKEN_RE = re.compile(r"Psi([+-])\(-(\d+)/2\)\Z")


def parse_state(text: str) -> FermionState:
    """Inverse of ``str(FermionState)``; accepts only canonical words."""
    tokens = text.split()
    if not tokens or tokens[-1] != "|0>":
        raise ValueError(f"state text must end with |0>: {text!r}")
    lam: list[int] = []
    mu: list[int] = []
    for tok in tokens[:-1]:
        m = _STATE_TOKEN_RE.match(tok)
        if m is None:
            raise ValueError(f"bad factor {tok!r} in state text")
        (lam if m.group(1) == MINUS else mu).append(int(m.group(2)))
    return FermionState(tuple(lam), tuple(mu))


def vec_from_json_obj(obj, ambient: bool = False) -> FermionVec:
    """Inverse of ``FermionVec.to_json_obj``."""
    from .scalars import parse_rational

    items = []
    for i, entry in enumerate(obj):
        state = parse_state(entry["state"])
        items.append((state, parse_rational(entry["value"], field=f"terms[{i}].value")))
    return FermionVec.from_items(items, ambient=ambient)


# ---------------------------------------------------------------------------
# single-generator action on canonical words
# ---------------------------------------------------------------------------

_Gen = tuple[int, int]  # (species: -1 | +1, doubled mode)


def _state_word(state: FermionState) -> tuple[_Gen, ...]:
    return tuple((-1, -d) for d in state.lam) + tuple((+1, -d) for d in state.mu)


def _word_state(word: tuple[_Gen, ...]) -> FermionState:
    lam = tuple(-d for sp, d in word if sp < 0)
    mu = tuple(-d for sp, d in word if sp > 0)
    return FermionState(lam, mu)


def _apply_gen(sp: int, d: int, word: tuple[_Gen, ...]) -> list[tuple[int, tuple[_Gen, ...]]]:
    """Act with one generator on a canonical word; returns (sign, word) terms.

    Annihilators (d > 0) sweep right, picking up a contraction against each
    opposite-species factor of opposite mode, and die on the vacuum.
    Creators insert at their canonical slot with the transposition sign, or
    vanish by exclusion when the slot is already occupied.
    """
    if d > 0:
        out = []
        sign = 1
        for i, (sp2, d2) in enumerate(word):
            if sp2 != sp and d + d2 == 0:
                out.append((sign, word[:i] + word[i + 1 :]))
            sign = -sign
        return out
    key = (0 if sp < 0 else 1, d)
    sign = 1
    for i, (sp2, d2) in enumerate(word):
        if sp2 == sp and d2 == d:
            return []
        if key < (0 if sp2 < 0 else 1, d2):
            return [(sign, word[:i] + ((sp, d),) + word[i:])]
        sign = -sign
    return [(sign, word + ((sp, d),))]


def apply_psi_dmode(species: str, dmode: int, v: FermionVec) -> FermionVec:
    """Fast path of :func:`apply_psi` taking the doubled mode directly."""
    if species not in (PLUS, MINUS):
        raise ValueError(f"species must be '+' or '-', got {species!r}")
    if dmode % 2 == 0:
        raise ValueError(f"mode must be half-odd, got doubled value {dmode}")
    sp = +1 if species == PLUS else -1
    ambient = v.ambient or (sp > 0 and dmode == -1)
    acc: dict[FermionState, Fraction] = {}
    for st, c in v.terms.items():
        for sign, w in _apply_gen(sp, dmode, _state_word(st)):
            st2 = _word_state(w)
            acc[st2] = acc.get(st2, Fraction(0)) + sign * c
    return FermionVec(acc, ambient)


def apply_psi(species: str, mode: Union[Fraction, str], v: FermionVec) -> FermionVec:
    """Apply ``Psi<species>(mode)`` to a vector, reordering into canonical form."""
    return apply_psi_dmode(species, as_dmode(mode), v)


# ---------------------------------------------------------------------------
# basis enumeration and grading
# ---------------------------------------------------------------------------


def _distinct_parts(min_d: int, budget: int) -> Iterator[tuple[int, ...]]:
    """Strictly increasing tuples of odd ints >= min_d with sum <= budget."""
    yield ()
    p = min_d
    while p <= budget:
        for rest in _distinct_parts(p + 2, budget - p):
            yield (p,) + rest
        p += 2


def enumerate_basis(max_weight: Fraction, ambient: bool = False) -> list[FermionState]:
    """All basis monomials of weight <= max_weight, in the global basis order."""
    mw = Fraction(max_weight)
    if mw < 0:
        raise ValueError("max_weight must be >= 0")
    budget = int(2 * mw)  # floor of the doubled bound; exact for half-integral input
    mu_min = 1 if ambient else 3
    states: list[FermionState] = []
    for lam_asc in _distinct_parts(1, budget):
        rest = budget - sum(lam_asc)
        lam = tuple(reversed(lam_asc))
        for mu_asc in _distinct_parts(mu_min, rest):
            states.append(FermionState(lam, tuple(reversed(mu_asc))))
    states.sort(key=state_key)
    return states


def graded_dimension(max_weight: Fraction, ambient: bool = False) -> dict[tuple[Fraction, int], int]:
    """Counts of basis monomials grouped by (weight, charge)."""
    out: dict[tuple[Fraction, int], int] = {}
    for st in enumerate_basis(max_weight, ambient):
        key = (weight(st), charge(st))
        out[key] = out.get(key, 0) + 1
    return out


def check_tilde(v: FermionVec) -> bool:
    """True iff ``Psi-(1/2)`` annihilates the vector (charged-subspace test)."""
    return apply_psi_dmode(MINUS, 1, v).is_zero()
