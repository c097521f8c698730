"""Constructive intermediate densities between nested sets.

Given ``X ⊆ Y`` and a rational target ``xi`` strictly between their
densities, :func:`construct` builds nested stages::

    X = A_1 ⊆ A_2 ⊆ ... ⊆ A_n ⊆ B_n ⊆ ... ⊆ B_1 = Y

with ``value(A_n) < xi <= value(B_n)`` and ``B_n - A_n`` confined to a single
residue class modulo some ``k_n >= n``.  The union of the ``A_n`` has density
exactly ``xi``; each stage pins that limit to within ``1/k_n``.

Each step splits the current gap along residue classes modulo ``k``
(:func:`split_residues`).  On ``APSet`` inputs all values are exact
rationals, so every inequality of every stage is checked with no tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .apset import (
    APSet,
    ResourceCapError,
    _checked_lcm,
    _mask_to_array,
    _NUMPY_THRESHOLD,
    complement,
    difference,
    intersect,
    is_subset,
    residue_family,
    residue_interval,
    union,
)
from .density import CANONICAL, DensityFunctional, canonical_value

MAX_DEPTH = 10
EXHAUSTIVE_CAP = 12


class PreconditionError(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Exact rational from an int, Fraction or ``"p/q"`` text; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"malformed rational {value!r}") from None
    raise TypeError(f"targets must be exact rationals, got {type(value).__name__}")


def _frac_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# residue splitting


@dataclass(frozen=True)
class SplitResult:
    k: int
    H0: tuple[int, ...]
    h0: int
    value_low: Fraction
    value_high: Fraction
    low: APSet = field(repr=False)
    high: APSet = field(repr=False)


@dataclass(frozen=True)
class SearchState:
    """Witnesses of the exhaustive search, as residue tuples."""

    H_a: tuple[int, ...]
    H0: tuple[int, ...]
    H_b: tuple[int, ...]
    sizes: dict = field(default_factory=dict)


def _check_split(A: APSet, B: APSet, a, b, k: int) -> tuple[Fraction, Fraction]:
    a, b = as_rational(a), as_rational(b)
    if not isinstance(k, int) or k < 1:
        raise PreconditionError(f"k must be a positive integer, got {k!r}")
    if not is_subset(A, B):
        raise PreconditionError("A must be a subset of B")
    va, vb = canonical_value(A), canonical_value(B)
    if not va <= a < b <= vb:
        raise PreconditionError(
            f"need value(A)={va} <= a={a} < b={b} <= value(B)={vb}"
        )
    if k * (b - a) <= 1:
        raise PreconditionError(f"k={k} must exceed 1/(b-a) = {1 / (b - a)}")
    return a, b


def _class_counts(gap: APSet, g: int) -> np.ndarray:
    # residues of the gap's periodic part, bucketed mod g
    if gap.residue_count <= _NUMPY_THRESHOLD:
        counts = np.zeros(g, dtype=np.int64)
        for r in gap.residues:
            counts[r % g] += 1
        return counts
    res = _mask_to_array(gap.mask, gap.modulus)
    return np.bincount(res % g, minlength=g).astype(np.int64)


def split_residues(A: APSet, B: APSet, a, b, k: int) -> SplitResult:
    """Greedy residue split of the gap ``B - A`` modulo ``k``.

    Residues ``h = 0, 1, ...`` are added in order; ``h0`` is the first one
    whose class pushes ``value(A ∪ (B ∩ V_{k,H}))`` to ``b`` or beyond and
    ``H0 = {0, ..., h0-1}``.  One class adds at most ``1/k < b - a``, so the
    value before ``h0`` already exceeds ``a``.

    The class of ``h`` meets a gap residue ``r`` (mod ``m``) exactly when
    ``r ≡ h (mod gcd(m, k))``, in a single class mod ``lcm(m, k)``.  The
    running values are therefore read off bucket counts instead of being
    recomputed set by set.
    """
    a, b = _check_split(A, B, a, b, k)
    va = canonical_value(A)
    gap = difference(B, A)
    m = gap.modulus
    g = math.gcd(m, k)
    big = _checked_lcm(m, k)
    counts = _class_counts(gap, g)
    per_cycle = int(counts.sum())
    cyc = np.cumsum(counts)

    # smallest prefix of residues reaching b, in units of 1/big
    need = math.ceil((b - va) * big)
    full_cycles = (need - 1) // per_cycle
    rest = need - full_cycles * per_cycle
    j = int(np.searchsorted(cyc, rest))
    h0 = full_cycles * g + j
    below = full_cycles * per_cycle + (int(cyc[j - 1]) if j else 0)

    low = union(A, intersect(B, residue_interval(k, 0, h0)))
    high = union(low, intersect(B, residue_interval(k, h0, h0 + 1)))
    value_low, value_high = canonical_value(low), canonical_value(high)
    if value_low != va + Fraction(below, big):
        raise AssertionError("bucket count disagrees with the constructed set")
    return SplitResult(k, tuple(range(h0)), h0, value_low, value_high, low, high)


def _bits_of(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def exhaustive_split(
    A: APSet, B: APSet, a, b, k: int, cap: int = EXHAUSTIVE_CAP
) -> tuple[SplitResult, SearchState]:
    """Subset-search split over all ``H ⊆ {0..k-1}``, for cross-validation.

    Takes ``H_a`` of least size with value above ``a``, then the largest
    ``H0 ⊇ H_a`` with value in ``(a, b)``, then the smallest ``H_b ⊇ H0``
    with value at least ``b``; ``H_b`` has exactly one more residue than
    ``H0``.  Every value comes from a freshly built set.  Ties break
    towards the numerically smaller bitmask.
    """
    a, b = _check_split(A, B, a, b, k)
    if k > cap:
        raise PreconditionError(f"exhaustive search limited to k <= {cap}, got {k}")
    pieces = [intersect(B, residue_family(k, [h])) for h in range(k)]
    sets = [A]
    for H in range(1, 1 << k):
        low_bit = (H & -H).bit_length() - 1
        sets.append(union(sets[H & (H - 1)], pieces[low_bit]))
    vals = [canonical_value(s) for s in sets]
    size = int.bit_count

    fam_l = [H for H in range(1 << k) if vals[H] > a]
    H_a = min(fam_l, key=lambda H: (size(H), H))
    fam_m = [H for H in range(1 << k) if H & H_a == H_a and a < vals[H] < b]
    H0 = min(fam_m, key=lambda H: (-size(H), H))
    fam_s = [H for H in range(1 << k) if H & H0 == H0 and vals[H] >= b]
    H_b = min(fam_s, key=lambda H: (size(H), H))
    if size(H_b) != size(H0) + 1:
        raise AssertionError("minimal completion must add exactly one residue")
    h0 = (H_b & ~H0).bit_length() - 1

    split = SplitResult(k, _bits_of(H0), h0, vals[H0], vals[H_b], sets[H0], sets[H_b])
    state = SearchState(
        _bits_of(H_a), _bits_of(H0), _bits_of(H_b),
        {"L": len(fam_l), "M": len(fam_m), "S": len(fam_s)},
    )
    return split, state


# ---------------------------------------------------------------------------
# nested construction


@dataclass(frozen=True)
class Stage:
    n: int
    A: APSet = field(repr=False)
    B: APSet = field(repr=False)
    k: int
    h: int
    valA: Fraction
    valB: Fraction

    def to_json(self, include_sets: bool = True) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "h": self.h,
            "valA": _frac_text(self.valA),
            "valB": _frac_text(self.valB),
        }
        if include_sets:
            out["A"] = self.A.to_json()
            out["B"] = self.B.to_json()
        else:
            out["A"] = _summary(self.A)
            out["B"] = _summary(self.B)
        return out


def _summary(a: APSet) -> dict:
    return {"m": a.modulus, "count": a.residue_count,
            "add": sorted(a.added), "del": sorted(a.removed)}


@dataclass(frozen=True)
class DarbouxRequest:
    X: APSet
    Y: APSet
    target: Fraction
    depth: int = 3

    def __post_init__(self):
        object.__setattr__(self, "target", as_rational(self.target))
        if not 0 <= self.target <= 1:
            raise PreconditionError(f"target {self.target} outside [0, 1]")
        if not isinstance(self.depth, int) or self.depth < 1:
            raise PreconditionError("depth must be a positive integer")

    def to_json(self) -> dict:
        return {"X": self.X.to_json(), "Y": self.Y.to_json(),
                "target": _frac_text(self.target), "depth": self.depth}


@dataclass(frozen=True)
class DarbouxTrace:
    """Stages of a construction.

    For ``sense == "upper"`` stages satisfy ``valA < xi <= valB`` with
    upper-density values; for ``"lower"`` they satisfy ``valA <= xi < valB``
    with lower-density values.  ``truncated`` is set when a resource cap
    stopped the refinement early; the stored stages remain valid.
    """

    request: DarbouxRequest
    stages: tuple[Stage, ...]
    sense: str = "upper"
    boundary: bool = False
    truncated: bool = False
    stop_reason: str | None = None

    @property
    def certificate(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, s.k) for s in self.stages)

    @property
    def result(self) -> APSet:
        return self.stages[-1].A

    def to_json(self, include_sets: bool = True) -> dict:
        return {
            "request": self.request.to_json(),
            "sense": self.sense,
            "boundary": self.boundary,
            "stages": [s.to_json(include_sets) for s in self.stages],
            "certificate": [_frac_text(c) for c in self.certificate],
            "truncated": self.truncated,
            "stop_reason": self.stop_reason,
        }

    def verify(self) -> list[str]:
        """Recheck every stage invariant exactly; returns the failures found."""
        xi = self.request.target
        value = canonical_value if self.sense == "upper" else _lower_value
        problems = []
        st = self.stages
        if not is_subset(self.request.X, st[0].A):
            problems.append("X not contained in A_1")
        if not is_subset(st[0].B, self.request.Y):
            problems.append("B_1 not contained in Y")
        for s in st:
            if value(s.A) != s.valA or value(s.B) != s.valB:
                problems.append(f"stage {s.n}: stored values are stale")
            if self.boundary:
                below_x = s.A == self.request.X and xi <= s.valA
                if s.A != s.B or not (s.valA == xi or below_x):
                    problems.append(f"stage {s.n}: boundary stage must hit target")
                continue
            inside = (s.valA < xi <= s.valB) if self.sense == "upper" else (
                s.valA <= xi < s.valB)
            if not inside:
                problems.append(f"stage {s.n}: target not bracketed")
            if s.k < s.n:
                problems.append(f"stage {s.n}: modulus {s.k} below stage index")
            if s.valB - s.valA > Fraction(1, s.k):
                problems.append(f"stage {s.n}: value gap exceeds 1/k")
            if not is_subset(s.A, s.B):
                problems.append(f"stage {s.n}: A not within B")
            if not is_subset(difference(s.B, s.A), residue_family(s.k, [s.h])):
                problems.append(f"stage {s.n}: gap leaves its residue class")
        for prev, nxt in zip(st, st[1:]):
            if not (is_subset(prev.A, nxt.A) and is_subset(nxt.B, prev.B)):
                problems.append(f"stages {prev.n}->{nxt.n}: not nested")
        return problems


def _lower_value(a: APSet) -> Fraction:
    return 1 - canonical_value(complement(a))


def refine(stage: Stage, xi) -> Stage:
    """One inductive step: split the gap of ``stage`` around ``xi``."""
    xi = as_rational(xi)
    if not stage.valA < xi <= stage.valB:
        raise PreconditionError(
            f"target {xi} not in ({stage.valA}, {stage.valB}]"
        )
    k = max(stage.n + 1, math.floor(1 / (xi - stage.valA)) + 1)
    split = split_residues(stage.A, stage.B, stage.valA, xi, k)
    return Stage(stage.n + 1, split.low, split.high, k, split.h0,
                 split.value_low, split.value_high)


def _require_exact(functional: DensityFunctional):
    if not functional.exact:
        raise PreconditionError(
            f"functional {functional.name!r} is not exact; the construction "
            "needs exact values"
        )


def construct(
    req: DarbouxRequest,
    functional: DensityFunctional = CANONICAL,
    max_depth: int = MAX_DEPTH,
) -> DarbouxTrace:
    """Run the nested construction for ``req`` up to ``req.depth`` stages.

    A target at or below ``value(X)``, or equal to ``value(Y)``, yields a
    single boundary stage holding that endpoint set.  When a resource cap
    trips, the stages built so far are returned with ``truncated=True``.
    """
    _require_exact(functional)
    if req.depth > max_depth:
        raise PreconditionError(f"depth {req.depth} exceeds limit {max_depth}")
    X, Y, xi = req.X, req.Y, req.target
    if not is_subset(X, Y):
        raise PreconditionError("X must be a subset of Y")
    vx, vy = canonical_value(X), canonical_value(Y)
    if vx > vy:
        # cannot happen for a monotone functional; guard regardless
        raise PreconditionError(f"value(X)={vx} exceeds value(Y)={vy}")
    if xi > vy:
        raise PreconditionError(f"target {xi} above value(Y)={vy}")

    if xi <= vx or xi == vy:
        # at or below value(X) the answer is X itself; at value(Y) it is Y
        S, v = (X, vx) if xi <= vx else (Y, vy)
        stage = Stage(1, S, S, 1, 0, v, v)
        return DarbouxTrace(req, (stage,), boundary=True)

    stages = [Stage(1, X, Y, 1, 0, vx, vy)]
    truncated, reason = False, None
    while len(stages) < req.depth:
        try:
            stages.append(refine(stages[-1], xi))
        except ResourceCapError as exc:
            truncated, reason = True, str(exc)
            break
    return DarbouxTrace(req, tuple(stages), truncated=truncated, stop_reason=reason)


def dual_construct(
    req: DarbouxRequest,
    functional: DensityFunctional = CANONICAL,
    max_depth: int = MAX_DEPTH,
) -> DarbouxTrace:
    """Same construction for the lower density, via complements.

    Runs :func:`construct` on ``(Y^c, X^c, 1 - xi)`` and complements every
    stage: the stage ``(A, B)`` becomes ``(B^c, A^c)``.
    """
    _require_exact(functional)
    X, Y, xi = req.X, req.Y, req.target
    if not is_subset(X, Y):
        raise PreconditionError("X must be a subset of Y")
    lx, ly = _lower_value(X), _lower_value(Y)
    if xi > ly:
        raise PreconditionError(f"lower target {xi} above lower value(Y)={ly}")
    if xi < lx:
        stage = Stage(1, X, X, 1, 0, lx, lx)
        return DarbouxTrace(req, (stage,), sense="lower", boundary=True)
    upper_req = DarbouxRequest(complement(Y), complement(X), 1 - xi, req.depth)
    up = construct(upper_req, functional, max_depth)
    stages = tuple(
        Stage(s.n, complement(s.B), complement(s.A), s.k, s.h, 1 - s.valB, 1 - s.valA)
        for s in up.stages
    )
    return DarbouxTrace(req, stages, sense="lower", boundary=up.boundary,
                        truncated=up.truncated, stop_reason=up.stop_reason)


class Verdict(NamedTuple):
    kind: str  # "IN", "OUT" or "UNDECIDED"
    stage: int | None = None

    def __str__(self) -> str:
        return self.kind if self.stage is None else f"{self.kind}({self.stage})"


def member_at_depth(trace: DarbouxTrace, x: int) -> Verdict:
    """Where ``x`` stands relative to the limit set ``A = ∪ A_n``.

    ``IN(n)`` if ``n`` is the first stage with ``x in A_n``, ``OUT(n)`` if it
    is the first with ``x`` outside ``B_n``, otherwise ``UNDECIDED``.
    """
    for s in trace.stages:
        if s.A.contains(x):
            return Verdict("IN", s.n)
        if not s.B.contains(x):
            return Verdict("OUT", s.n)
    return Verdict("UNDECIDED")
