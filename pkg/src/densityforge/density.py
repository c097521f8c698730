"""Density functionals on eventually periodic sets, plus counting estimators.

Every upper quasi-density takes the same value on an :class:`APSet`: the
fraction ``|R|/m`` of residues in its periodic part.  A union of residue
classes minus finitely many points sits below the set and the same union
plus finitely many points sits above it, and both bounds evaluate to
``|R|/m``.  :func:`canonical_value` is therefore exact for the whole class.

The estimators count members of prefixes or windows.  They serve as
independent numeric cross-checks and never feed the exact constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .apset import APSet, complement

Predicate = Callable[[int], bool]
SetLike = Union[APSet, Predicate]


def canonical_value(a: APSet) -> Fraction:
    return Fraction(a.residue_count, a.modulus)


@dataclass(frozen=True)
class DensityFunctional:
    """A named set function on APSets.

    ``exact`` is true only when ``eval`` returns the value every upper
    quasi-density is forced to take.
    """

    name: str
    eval: Callable[[APSet], Fraction] = field(compare=False)
    exact: bool = False

    def __call__(self, a: APSet) -> Fraction:
        return self.eval(a)


CANONICAL = DensityFunctional("canonical", canonical_value, exact=True)

_LOWER_PREFIX = "lower_"


def lower_conjugate(f: DensityFunctional) -> DensityFunctional:
    """The conjugate ``a -> 1 - f(complement(a))``."""
    if f.name.startswith(_LOWER_PREFIX):
        name = f.name[len(_LOWER_PREFIX):]
    else:
        name = _LOWER_PREFIX + f.name

    def conj(a: APSet) -> Fraction:
        return 1 - Fraction(f.eval(complement(a)))

    return DensityFunctional(name, conj, exact=f.exact)


LOWER_CANONICAL = lower_conjugate(CANONICAL)


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    samples: tuple[tuple[int, Fraction], ...]
    bound: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "samples": [[n, float(r)] for n, r in self.samples],
            "bound": None if self.bound is None else _frac_text(self.bound),
        }


def _frac_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _membership(s: SetLike, n: int) -> np.ndarray:
    contains = s.contains if isinstance(s, APSet) else s
    return np.fromiter((bool(contains(x)) for x in range(n)), dtype=bool, count=n)


def estimate_upper_asymptotic(s: SetLike, schedule: Sequence[int]) -> DensityEstimate:
    """Prefix ratios ``|s ∩ [0, N)| / N`` along ``schedule``.

    The reported value is the largest ratio over the second half of the
    schedule, a heuristic stand-in for the limsup.  For APSet input the
    estimate carries the rigorous bound ``(m + |add| + |del|) / N`` taken at
    the smallest N of that tail.
    """
    sched = [int(n) for n in schedule]
    if not sched:
        raise ValueError("schedule must be nonempty")
    if sched[0] < 1 or any(b <= a for a, b in zip(sched, sched[1:])):
        raise ValueError("schedule must be strictly increasing positive integers")

    if isinstance(s, APSet):
        counts = [s.prefix_count(n) for n in sched]
    else:
        csum = np.cumsum(_membership(s, sched[-1]))
        counts = [int(csum[n - 1]) for n in sched]
    samples = tuple((n, Fraction(c, n)) for n, c in zip(sched, counts))
    tail = samples[len(samples) // 2:]
    value = max(r for _, r in tail)
    bound = None
    if isinstance(s, APSet):
        bound = Fraction(s.modulus + s.finite_size, tail[0][0])
    return DensityEstimate(float(value), samples, bound)


def estimate_banach(s: SetLike, window: int, scan: int) -> DensityEstimate:
    """Largest fill ratio of a length-``window`` block inside ``[0, scan)``."""
    window, scan = int(window), int(scan)
    if not 1 <= window <= scan:
        raise ValueError("need 1 <= window <= scan")
    csum = np.concatenate(([0], np.cumsum(_membership(s, scan), dtype=np.int64)))
    best = int((csum[window:] - csum[:-window]).max())
    ratio = Fraction(best, window)
    return DensityEstimate(float(ratio), ((scan, ratio),), None)
