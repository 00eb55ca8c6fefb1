"""Exact truncated span closure over graded sparse vectors.

The engine maintains a row-echelon basis of a subspace spanned by repeatedly
applying a finite family of mode operators to some generators, inside a
finite window: total weight at most ``weight_cutoff + excursion`` and charge
inside ``charge_window``.  An operator result is admitted only when *every*
monomial of the result fits in the window, so each stored row is an exact
element of the module generated by the inputs — membership answers are never
polluted by dropped terms.  Consequently a positive membership answer is a
proof, while a negative answer is evidence scoped to the configuration.

Scalar operators (e.g. central or diagonal mode actions) map a vector to a
multiple of itself and can never enlarge a span, so operator families only
need the genuinely shifting modes.

The engine is generic over the basis-key type via a :class:`Space` adapter
supplying weight, charge and a global total order on keys.  All iteration is
sorted, so identical inputs produce identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

__all__ = [
    "ClosureConfig",
    "Space",
    "SpanBasis",
    "closure",
    "cyclic_probe",
    "joint_kernel",
]

OpFamily = Sequence[tuple[str, Callable[[Any], Any]]]


@dataclass(frozen=True)
class ClosureConfig:
    """Truncation window for closures.

    ``weight_cutoff`` bounds the reported span; exploration is allowed the
    extra ``excursion`` headroom; ``charge_window`` is an inclusive (lo, hi)
    pair.
    """

    weight_cutoff: Fraction = Fraction(4)
    charge_window: tuple[int, int] = (-3, 3)
    excursion: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, "weight_cutoff", Fraction(self.weight_cutoff))
        object.__setattr__(self, "excursion", Fraction(self.excursion))
        lo, hi = self.charge_window
        if self.weight_cutoff < 0 or self.excursion < 0 or lo > hi:
            raise ValueError(f"bad closure config: {self}")

    def to_json_obj(self) -> dict:
        return {
            "weight_cutoff": str(self.weight_cutoff),
            "charge_window": list(self.charge_window),
            "excursion": str(self.excursion),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ClosureConfig":
        lo, hi = obj["charge_window"]
        return cls(
            weight_cutoff=Fraction(obj["weight_cutoff"]),
            charge_window=(int(lo), int(hi)),
            excursion=Fraction(obj["excursion"]),
        )


@dataclass(frozen=True)
class Space:
    """Adapter describing a graded basis: weight, charge, total order."""

    weight_of: Callable[[Any], Fraction]
    charge_of: Callable[[Any], int]
    sort_key: Callable[[Any], Any]


class SpanBasis:
    """Fully reduced row-echelon basis with pivot coefficient 1.

    Rows are kept up to ``weight_cutoff + excursion``; reporting helpers
    describe the largest subspace supported inside the cutoff, which is
    representative-independent.  ``contains`` reduces a query against every
    row, which is sound because each row is an exact member of the
    underlying module.
    """

    def __init__(self, space: Space, cfg: Optional[ClosureConfig] = None):
        self.space = space
        self.cfg = cfg
        self._rows: dict[Any, Any] = {}  # pivot key -> vector

    # -- construction -------------------------------------------------

    def _pivot(self, v):
        return min(v.terms, key=self.space.sort_key)

    def reduce(self, v):
        """Remainder of v after eliminating every known pivot component.

        Interior components matter too, not just the leading one: rows stay
        fully reduced so the row set is the unique reduced echelon basis of
        the span and restricted reporting cannot hide a low-weight row
        behind a high-weight tail.  Eliminating the smallest hit first makes
        progress monotone (a row's support lies at or above its pivot).
        """
        while not v.is_zero():
            hit = min(
                (s for s in v.terms if s in self._rows),
                key=self.space.sort_key,
                default=None,
            )
            if hit is None:
                return v
            v = v - v.terms[hit] * self._rows[hit]
        return v

    def insert(self, v) -> bool:
        """Insert a vector, keeping full reduction; True if the span grew."""
        v = self.reduce(v)
        if v.is_zero():
            return False
        p = self._pivot(v)
        v = v * (Fraction(1) / v.terms[p])
        for q, row in list(self._rows.items()):
            c = row.terms.get(p)
            if c:
                self._rows[q] = row - c * v
        self._rows[p] = v
        return True

    # -- queries ------------------------------------------------------

    def contains(self, v) -> bool:
        return self.reduce(v).is_zero()

    def rows(self) -> list:
        return [self._rows[p] for p in sorted(self._rows, key=self.space.sort_key)]

    def pivots(self) -> list:
        return sorted(self._rows, key=self.space.sort_key)

    def dimension(self) -> int:
        return len(self._rows)

    def restricted_rows(self) -> list:
        """Echelon basis of the largest subspace supported inside the cutoff.

        A row kept for exploration may carry a tail in the excursion zone
        even though some combination with other rows does not; reporting
        must not depend on which representative the elimination happened to
        keep.  Low rows pass through; for the tailed ones we solve exactly
        for the combinations whose beyond-cutoff components cancel.
        """
        if self.cfg is None:
            return self.rows()
        w = self.cfg.weight_cutoff
        low, tailed = [], []
        for r in self.rows():
            (low if all(self.space.weight_of(s) <= w for s in r.terms) else tailed).append(r)
        out = SpanBasis(self.space, self.cfg)
        for r in low:
            out.insert(r)
        if tailed:
            constraints: dict[Any, dict[int, Fraction]] = {}
            for j, r in enumerate(tailed):
                for s, c in r.terms.items():
                    if self.space.weight_of(s) > w:
                        constraints.setdefault(s, {})[j] = c
            ordered = [constraints[s] for s in sorted(constraints, key=self.space.sort_key)]
            for combo in _solve_kernel(ordered, len(tailed)):
                v = None
                for j, q in combo.items():
                    term = q * tailed[j]
                    v = term if v is None else v + term
                out.insert(v)
        return out.rows()

    def graded_dimension(self) -> dict[tuple, int]:
        """Pivot counts per (weight, charge), restricted to the cutoff."""
        out: dict[tuple, int] = {}
        for r in self.restricted_rows():
            p = self._pivot(r)
            key = (self.space.weight_of(p), self.space.charge_of(p))
            out[key] = out.get(key, 0) + 1
        return out

    def report(self, memberships: Optional[dict[str, bool]] = None) -> dict:
        body = {
            "cfg": self.cfg.to_json_obj() if self.cfg else None,
            "dimension": sum(self.graded_dimension().values()),
            "graded_dimension": [
                {"weight": str(w), "charge": c, "dim": d}
                for (w, c), d in sorted(self.graded_dimension().items())
            ],
        }
        if memberships is not None:
            body["membership"] = dict(sorted(memberships.items()))
        return body


def _solve_kernel(constraint_rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Kernel basis of an exact sparse linear system over column indices.

    Rows are fully reduced against each other, so the free-column read-off
    below is valid.  One kernel vector per free column, in ascending order.
    """
    rows: dict[int, dict[int, Fraction]] = {}  # pivot col -> reduced row
    for src in constraint_rows:
        row = dict(src)
        while row:
            hit = min((c for c in row if c in rows), default=None)
            if hit is None:
                break
            f = row[hit]
            for c2, v2 in rows[hit].items():
                row[c2] = row.get(c2, Fraction(0)) - f * v2
            row = {c2: v2 for c2, v2 in row.items() if v2}
        if not row:
            continue
        p = min(row)
        inv = Fraction(1) / row[p]
        row = {c2: inv * v2 for c2, v2 in row.items()}
        for q, other in list(rows.items()):
            f = other.get(p)
            if f:
                merged = dict(other)
                for c2, v2 in row.items():
                    merged[c2] = merged.get(c2, Fraction(0)) - f * v2
                rows[q] = {c2: v2 for c2, v2 in merged.items() if v2}
        rows[p] = row
    out = []
    for f in range(ncols):
        if f in rows:
            continue
        coeffs = {f: Fraction(1)}
        for p, row in rows.items():
            c = row.get(f)
            if c:
                coeffs[p] = -c
        out.append(coeffs)
    return out


def _admissible(v, cfg: ClosureConfig, space: Space, bound: Fraction) -> bool:
    lo, hi = cfg.charge_window
    return all(
        space.weight_of(s) <= bound and lo <= space.charge_of(s) <= hi for s in v.terms
    )


def closure(
    generators: Iterable,
    ops: OpFamily,
    cfg: ClosureConfig,
    space: Space,
    stop_if_contains=None,
) -> SpanBasis:
    """Least fixpoint of the operator family inside the truncation window.

    Every operator is applied to every row until a full sweep adds nothing.
    When ``stop_if_contains`` is given, the loop returns early as soon as
    that vector reduces to zero — used for membership probes where a partial
    basis already certifies the positive answer.
    """
    bound = cfg.weight_cutoff + cfg.excursion
    basis = SpanBasis(space, cfg)
    for g in generators:
        if not g.is_zero() and _admissible(g, cfg, space, bound):
            basis.insert(g)
    if stop_if_contains is not None and basis.contains(stop_if_contains):
        return basis
    changed = True
    while changed:
        changed = False
        for pivot in basis.pivots():
            row = basis._rows.get(pivot)
            if row is None:
                continue
            for _, op in ops:
                w = op(row)
                if w.is_zero() or not _admissible(w, cfg, space, bound):
                    continue
                if basis.insert(w):
                    changed = True
                    if stop_if_contains is not None and basis.contains(stop_if_contains):
                        return basis
    return basis


def cyclic_probe(v, vacuum, ops: OpFamily, cfg: ClosureConfig, space: Space) -> bool:
    """Does the truncated closure of ``[v]`` contain the vacuum vector?"""
    basis = closure([v], ops, cfg, space, stop_if_contains=vacuum)
    return basis.contains(vacuum)


def joint_kernel(
    ann_ops: OpFamily,
    piece: Sequence,
    make_vec: Callable[[dict], Any],
    space: Space,
) -> SpanBasis:
    """Exact joint kernel of the annihilators on the span of ``piece``.

    ``piece`` lists the basis keys of one graded component; the result is a
    row-echelon basis (over those keys) of the simultaneous kernel.
    """
    cols = sorted(piece, key=space.sort_key)
    unit_images = []
    for s in cols:
        vec = make_vec({s: Fraction(1)})
        unit_images.append([op(vec) for _, op in ann_ops])
    # constraint rows: one per (operator, output key)
    constraints: dict[Any, dict[int, Fraction]] = {}
    for j in range(len(ann_ops)):
        for i, images in enumerate(unit_images):
            for out_state, c in images[j].terms.items():
                constraints.setdefault((j, out_state), {})[i] = c
    ordered = [
        constraints[k]
        for k in sorted(constraints, key=lambda k: (k[0], space.sort_key(k[1])))
    ]
    kernel = SpanBasis(space)
    for coeffs in _solve_kernel(ordered, len(cols)):
        kernel.insert(make_vec({cols[i]: q for i, q in coeffs.items()}))
    return kernel
