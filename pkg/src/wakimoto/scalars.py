"""Exact scalars and the twist series chi.

Every coefficient in this package is an exact rational (``fractions.Fraction``);
nothing is ever rounded.  A *twist* is a finitely supported Laurent series

    chi(z) = sum_m chi_m z^(-m-1),

stored as a map from the integer index ``m`` to the rational coefficient
``chi_m``.  Indices ``m > 0`` form the pole part; a twist with no pole and
integral ``chi_0`` determines the level ``ell = chi_0 - 1`` that drives the
irreducibility criterion.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

__all__ = [
    "ChiParseError",
    "ChiSeries",
    "parse_rational",
    "format_rational",
    "parse_chi",
    "pole_order",
    "ell_of",
]

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


class ChiParseError(ValueError):
    """Raised for malformed twist documents or rational literals."""


def parse_rational(text: str, field: str = "value") -> Fraction:
    """Parse an exact rational literal ``"p"`` or ``"p/q"``.

    The error message names the offending ``field`` so callers can surface
    useful diagnostics for nested documents.
    """
    if not isinstance(text, str):
        raise ChiParseError(f"{field}: expected a string rational, got {type(text).__name__}")
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ChiParseError(f"{field}: not a rational literal: {text!r}")
    num, _, den = s.partition("/")
    if den:
        d = int(den)
        if d == 0:
            raise ChiParseError(f"{field}: zero denominator in {text!r}")
        return Fraction(int(num), d)
    return Fraction(int(num))


def format_rational(q) -> str:
    """Render a rational as ``"p"`` or ``"p/q"`` in lowest terms."""
    return str(Fraction(q))


class ChiSeries:
    """Finitely supported twist coefficients ``m -> chi_m``.

    Immutable and hashable; zero coefficients are dropped on construction so
    two series are equal iff they have identical support and values.
    """

    __slots__ = ("_items", "_map")

    def __init__(self, coeffs: Union[Mapping[int, object], Iterable[tuple]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for m, val in items:
            if isinstance(m, bool) or not isinstance(m, int):
                raise ChiParseError(f"m: index must be an integer, got {m!r}")
            q = val if isinstance(val, Fraction) else Fraction(val)
            if m in acc:
                raise ChiParseError(f"m: duplicate index {m}")
            if q:
                acc[m] = q
        self._items: tuple[tuple[int, Fraction], ...] = tuple(sorted(acc.items()))
        self._map = dict(self._items)

    def coeff(self, m: int) -> Fraction:
        return self._map.get(m, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self._items)

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._items

    def is_zero(self) -> bool:
        return not self._items

    def to_json_obj(self) -> dict:
        return {"coeffs": [{"m": m, "value": format_rational(v)} for m, v in self._items]}

    def __eq__(self, other) -> bool:
        return isinstance(other, ChiSeries) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{m}: {v}" for m, v in self._items)
        return f"ChiSeries({{{body}}})"


def pole_order(chi: ChiSeries) -> int:
    """Largest positive support index, or 0 when the pole part vanishes."""
    return max((m for m in chi.support if m > 0), default=0)


def ell_of(chi: ChiSeries) -> Optional[int]:
    """``chi_0 - 1`` when the twist has no pole part and integral ``chi_0``.

    Returns ``None`` otherwise; the classifier treats that as the generically
    irreducible regime.
    """
    if pole_order(chi) != 0:
        return None
    c0 = chi.coeff(0)
    if c0.denominator != 1:
        return None
    return int(c0) - 1


def parse_chi(doc: Union[str, Mapping]) -> ChiSeries:
    """Parse ``{"coeffs": [{"m": <int>, "value": "<p/q>"}, ...]}``.

    Accepts a JSON text or an already-decoded mapping.  Malformed JSON, a
    non-integer index, a duplicate index, or a bad rational (including zero
    denominators) raise :class:`ChiParseError` naming the offending field.
    """
    if isinstance(doc, str):
        try:
            obj = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ChiParseError(f"malformed JSON: {exc}") from exc
    else:
        obj = doc
    if not isinstance(obj, Mapping):
        raise ChiParseError("document: expected a JSON object with a 'coeffs' list")
    coeffs = obj.get("coeffs")
    if not isinstance(coeffs, list):
        raise ChiParseError("coeffs: expected a list of {m, value} entries")
    seen: set[int] = set()
    pairs: list[tuple[int, Fraction]] = []
    for idx, entry in enumerate(coeffs):
        if not isinstance(entry, Mapping):
            raise ChiParseError(f"coeffs[{idx}]: expected an object with 'm' and 'value'")
        if "m" not in entry:
            raise ChiParseError(f"coeffs[{idx}].m: missing")
        m = entry["m"]
        if isinstance(m, bool) or not isinstance(m, int):
            raise ChiParseError(f"coeffs[{idx}].m: expected an integer, got {m!r}")
        if m in seen:
            raise ChiParseError(f"coeffs[{idx}].m: duplicate index {m}")
        seen.add(m)
        if "value" not in entry:
            raise ChiParseError(f"coeffs[{idx}].value: missing")
        q = parse_rational(entry["value"], field=f"coeffs[{idx}].value")
        if q:
            pairs.append((m, q))
    return ChiSeries(pairs)
