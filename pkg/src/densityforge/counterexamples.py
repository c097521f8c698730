"""Set functions that fail the intermediate-value behaviour of densities.

Three functionals each keep most density axioms but have an image with
gaps (``{0} ∪ {1/k}`` or ``{0, 1}``), so intermediate values are skipped:

* :func:`gap_sup` -- reciprocal of the smallest gap between consecutive
  elements; drops subadditivity.
* :func:`dichotomy` -- 1 on sets of positive density, else 0; drops the
  scaling law.
* :func:`inf_reciprocal` -- reciprocal of the least positive element; drops
  shift invariance.

The second half concerns a non-monotone quasi-density ``theta*`` built from
the upper asymptotic density and an index ``iota``.  On the factorial-block
family below it takes values ``<= 7/16`` or ``>= 9/16`` on every set between
``X`` and ``Y``, never ``1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .apset import EMPTY, APSet, ap, difference
from .density import (
    DensityEstimate,
    DensityFunctional,
    canonical_value,
    estimate_upper_asymptotic,
)

HALF = Fraction(1, 2)


def _scan_limit(a: APSet) -> int:
    # two full periods past the last exception cover every tail gap
    return a.max_exception + 2 * a.modulus + 2


def _min_gap(elems: Sequence[int]) -> int:
    return min(y - x for x, y in zip(elems, elems[1:]))


def gap_sup(a: APSet) -> Fraction:
    """``1 / (smallest gap between consecutive elements)``, 0 on finite sets.

    Gaps are taken over the whole set, 0 included.  See
    :func:`gap_sup_positive` for the variant restricted to ``a ∩ N+``.
    """
    if a.is_finite():
        return Fraction(0)
    return Fraction(1, _min_gap(a.elements_below(_scan_limit(a))))


def gap_sup_positive(a: APSet) -> Fraction:
    """As :func:`gap_sup` but over the positive elements only.

    On N this variant breaks the shift law: for ``{0, 1} ∪ (10N + 5)`` the
    positive part has smallest gap 4, while after a shift by 1 the gap
    ``1 -> 2`` appears.
    """
    if a.is_finite():
        return Fraction(0)
    elems = [x for x in a.elements_below(_scan_limit(a)) if x > 0]
    return Fraction(1, _min_gap(elems))


def dichotomy(a: APSet) -> Fraction:
    return Fraction(1 if canonical_value(a) > 0 else 0)


def least_positive(a: APSet) -> int | None:
    for y in range(1, a.max_exception + a.modulus + 2):
        if a.contains(y):
            return y
    return None


def inf_reciprocal(a: APSet) -> Fraction:
    """``1 / min(a ∩ N+)``, with 0 when there is no positive element."""
    y = least_positive(a)
    return Fraction(0) if y is None else Fraction(1, y)


GAP_SUP = DensityFunctional("gap_sup", gap_sup)
GAP_SUP_POSITIVE = DensityFunctional("gap_sup_positive", gap_sup_positive)
DICHOTOMY = DensityFunctional("dichotomy", dichotomy)
INF_RECIPROCAL = DensityFunctional("inf_reciprocal", inf_reciprocal)


# ---------------------------------------------------------------------------
# factorial blocks and theta*


@dataclass(frozen=True)
class Example4Family:
    """``X`` = union of blocks ``[(2n-1)!/4 + 3(2n)!/4 + 1, (2n)! + 1]`` for
    ``2 <= n <= n_max``, and ``Y = X ∪ 4N``.

    ``iota_X`` and ``iota_Y`` are fixed constants, not computed.
    """

    n_max: int = 3
    iota_X: int = 4
    iota_Y: int = 1

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")

    @property
    def blocks(self) -> tuple[tuple[int, int], ...]:
        out = []
        for n in range(2, self.n_max + 1):
            lo = Fraction(math.factorial(2 * n - 1), 4) + Fraction(
                3 * math.factorial(2 * n), 4) + 1
            out.append((math.ceil(lo), math.factorial(2 * n) + 1))
        return tuple(out)

    @property
    def scan_bound(self) -> int:
        """First integer past the last block."""
        return self.blocks[-1][1] + 1

    @property
    def schedule(self) -> list[int]:
        return [hi + 1 for _, hi in self.blocks]

    def in_X(self, x: int) -> bool:
        return any(lo <= x <= hi for lo, hi in self.blocks)

    def in_Y(self, x: int) -> bool:
        return x % 4 == 0 or self.in_X(x)

    def tagged_X(self) -> TaggedSet:
        return TaggedSet("X", self.iota_X, extra=EMPTY)

    def tagged_Y(self) -> TaggedSet:
        return TaggedSet("Y", self.iota_Y, extra=ap(4, 0))


# d*(X): the blocks fill a quarter of [0, (2n)!] up to o(1)
DSTAR_X = Fraction(1, 4)


def dstar_with(extra: APSet) -> Fraction:
    """Upper asymptotic density of ``X ∪ extra`` (untruncated blocks).

    Inside the blocks every integer counts, outside only ``extra`` does,
    and the ratio peaks at block ends: ``d + (1 - d) * d*(X)``.
    """
    d = canonical_value(extra)
    return d + (1 - d) * DSTAR_X


@dataclass(frozen=True)
class TaggedSet:
    """A set between ``X`` and ``Y`` carrying a caller-supplied ``iota``.

    The set is either ``X ∪ extra`` for an APSet ``extra`` (its upper
    density is exact) or an arbitrary ``predicate`` (density estimated).
    """

    name: str
    iota: int | None
    extra: APSet | None = None
    predicate: Callable[[int], bool] | None = field(default=None, compare=False)

    def __post_init__(self):
        if (self.extra is None) == (self.predicate is None):
            raise ValueError("give exactly one of extra or predicate")

    def membership(self, fam: Example4Family) -> Callable[[int], bool]:
        if self.predicate is not None:
            return self.predicate
        extra = self.extra
        return lambda x: fam.in_X(x) or extra.contains(x)


@dataclass(frozen=True)
class ThetaValue:
    name: str
    iota: int
    value: Fraction | float
    exact: bool
    dstar: Fraction | float
    lower_bound: Fraction
    upper_bound: Fraction
    estimate: DensityEstimate | None = None

    @property
    def certified_not_half(self) -> bool:
        return self.upper_bound < HALF or self.lower_bound > HALF

    def to_json(self) -> dict:
        def num(v):
            return f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v
        return {
            "name": self.name,
            "iota": self.iota,
            "value": num(self.value),
            "exact": self.exact,
            "dstar": num(self.dstar),
            "lower_bound": num(self.lower_bound),
            "upper_bound": num(self.upper_bound),
            "certified_not_half": self.certified_not_half,
            "estimate": None if self.estimate is None else self.estimate.to_json(),
        }


def theta_formula(iota, dstar):
    """``d*`` if ``iota <= 3``, ``3/4 (iota - 1) d*`` if finite and ``>= 4``, else 0."""
    if iota <= 3:
        return dstar
    if math.isfinite(iota):
        return Fraction(3, 4) * (iota - 1) * dstar
    return 0 * dstar


def theta_star(fam: Example4Family, s: TaggedSet) -> ThetaValue:
    """``theta*`` of a tagged set between ``X`` and ``Y``.

    Exact when ``s`` is ``X ∪ extra``; otherwise built from a prefix-count
    estimate of ``d*``.  The bounds come from ``d*(X) <= d*(s) <= d*(Y)``
    and are certified either way.
    """
    if s.iota is None:
        raise ValueError(f"set {s.name!r} carries no iota tag")
    if s.iota not in (1, 2, 3, 4):
        raise ValueError(f"iota of a set between X and Y lies in 1..4, got {s.iota}")
    estimate = estimate_upper_asymptotic(s.membership(fam), fam.schedule)
    lo = theta_formula(s.iota, DSTAR_X)
    hi = theta_formula(s.iota, dstar_with(ap(4, 0)))
    if s.extra is not None:
        d = dstar_with(s.extra)
        return ThetaValue(s.name, s.iota, theta_formula(s.iota, d), True, d,
                          lo, hi, estimate)
    d = estimate.value
    return ThetaValue(s.name, s.iota, float(theta_formula(s.iota, Fraction(d))),
                      False, d, lo, hi, estimate)


@dataclass(frozen=True)
class DemoReport:
    n_max: int
    dstar_X_estimate: DensityEstimate
    entries: tuple[ThetaValue, ...]
    note: str = "demonstrative: covers the sampled sets only"

    @property
    def attains_half(self) -> bool:
        return any(e.value == HALF for e in self.entries)

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "dstar_X_estimate": self.dstar_X_estimate.to_json(),
            "dstar_X": "1/4",
            "entries": [e.to_json() for e in self.entries],
            "attains_half": self.attains_half,
            "note": self.note,
        }


def _check_between(fam: Example4Family, s: TaggedSet):
    contains = s.membership(fam)
    for x in range(fam.scan_bound):
        inside = contains(x)
        if fam.in_X(x) and not inside:
            raise ValueError(f"sample {s.name!r} misses {x} of X")
        if inside and not fam.in_Y(x):
            raise ValueError(f"sample {s.name!r} contains {x} outside Y")
    if s.extra is not None and canonical_value(difference(s.extra, ap(4, 0))) > 0:
        raise ValueError(f"sample {s.name!r} eventually leaves Y")


def symmetric_darboux_demo(
    fam: Example4Family, samples: Sequence[TaggedSet]
) -> DemoReport:
    """Evaluate ``theta*`` on sampled sets between ``X`` and ``Y``."""
    for s in samples:
        _check_between(fam, s)
    head = estimate_upper_asymptotic(fam.in_X, [fam.scan_bound - 1])
    return DemoReport(fam.n_max, head, tuple(theta_star(fam, s) for s in samples))


def default_samples(fam: Example4Family) -> list[TaggedSet]:
    top = math.factorial(2 * fam.n_max)
    head_of_4n = APSet.finite(range(0, top + 1, 4))
    return [
        fam.tagged_X(),
        fam.tagged_Y(),
        TaggedSet(f"X+(4N below {top})", 4, extra=head_of_4n),
        TaggedSet("X+8N", 1, extra=ap(8, 0)),
        TaggedSet("X+12N", 1, extra=ap(12, 0)),
        TaggedSet("X+16N (counted)", 1,
                  predicate=lambda x: x % 16 == 0 or fam.in_X(x)),
    ]
