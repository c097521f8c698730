"""Eventually periodic subsets of the naturals.

An :class:`APSet` is stored as a periodic part ``P = {x >= 0 : x mod m in R}``
together with two finite exception sets: ``added`` (elements outside ``P``)
and ``removed`` (elements of ``P`` that are left out).  The residue set ``R``
is kept as an integer bitmask, so boolean operations on large moduli run as
big-integer bit operations instead of Python-level loops.

Every instance produced by this module is canonical: ``m`` is the minimal
period of ``P``.  Since an eventually periodic set determines its periodic
part uniquely, two canonical instances denote the same set exactly when their
fields are equal.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import numpy as np

DEFAULT_LCM_CAP = 10**9
DEFAULT_FINITE_CAP = 10**4

# popcount above which residue extraction goes through numpy
_NUMPY_THRESHOLD = 1 << 12


class ResourceCapError(RuntimeError):
    """Raised when a modulus or finite part outgrows its configured cap.

    This signals resource exhaustion, not malformed input.
    """


@dataclass(frozen=True)
class Limits:
    lcm_cap: int = DEFAULT_LCM_CAP
    finite_cap: int = DEFAULT_FINITE_CAP


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar(
    "densityforge_limits", default=Limits()
)


def current_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def limits(lcm_cap: int | None = None, finite_cap: int | None = None):
    """Temporarily override the resource caps for the current context.

    >>> with limits(lcm_cap=100):
    ...     current_limits().lcm_cap
    100
    """
    cur = _LIMITS.get()
    new = Limits(
        lcm_cap=cur.lcm_cap if lcm_cap is None else int(lcm_cap),
        finite_cap=cur.finite_cap if finite_cap is None else int(finite_cap),
    )
    if new.lcm_cap < 1 or new.finite_cap < 0:
        raise ValueError("caps must be positive")
    token = _LIMITS.set(new)
    try:
        yield new
    finally:
        _LIMITS.reset(token)


# ---------------------------------------------------------------------------
# bitmask helpers


def _full(width: int) -> int:
    return (1 << width) - 1


def _tile(mask: int, width: int, reps: int) -> int:
    """Repeat a ``width``-bit pattern ``reps`` times (O(log reps) big-int ops)."""
    out, shift = 0, 0
    blk, blen = mask, width
    while reps:
        if reps & 1:
            out |= blk << shift
            shift += blen
        reps >>= 1
        if reps:
            blk |= blk << blen
            blen <<= 1
    return out


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_to_array(mask: int, width: int) -> np.ndarray:
    nbytes = (width + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")[:width]
    return np.flatnonzero(bits)


def _array_to_mask(residues: np.ndarray, width: int) -> int:
    bits = np.zeros(width, dtype=np.uint8)
    bits[residues] = 1
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _residue_list(mask: int, width: int) -> list[int]:
    if mask.bit_count() <= _NUMPY_THRESHOLD:
        return list(_iter_bits(mask))
    return _mask_to_array(mask, width).tolist()


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def _min_period(mask: int, m: int) -> tuple[int, int]:
    # periods dividing m are closed under gcd, so stripping one prime at a
    # time reaches the minimal period
    for p in _prime_factors(m):
        while m % p == 0:
            d = m // p
            if (mask >> d) != (mask & _full(m - d)):
                break
            m, mask = d, mask & _full(d)
    return m, mask


def _checked_lcm(a: int, b: int) -> int:
    out = math.lcm(a, b)
    cap = current_limits().lcm_cap
    if out > cap:
        raise ResourceCapError(f"modulus lcm({a}, {b}) = {out} exceeds cap {cap}")
    return out


def _checked_modulus(m: int) -> int:
    cap = current_limits().lcm_cap
    if m > cap:
        raise ResourceCapError(f"modulus {m} exceeds cap {cap}")
    return m


def _as_natural(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        raise TypeError(f"{what} must be an integer, got {x!r}")
    x = int(x)
    if x < 0:
        raise ValueError(f"{what} must be nonnegative, got {x}")
    return x


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class APSet:
    """Canonical eventually periodic subset of ``N = {0, 1, 2, ...}``.

    Construct through :meth:`from_parts`, :meth:`periodic`, :meth:`finite` or
    the module helpers; the raw constructor performs no canonicalization.
    """

    modulus: int
    mask: int
    added: frozenset[int] = frozenset()
    removed: frozenset[int] = frozenset()

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_parts(
        cls,
        m: int,
        residues: Iterable[int] = (),
        added: Iterable[int] = (),
        removed: Iterable[int] = (),
    ) -> APSet:
        """Build the set ``(P | added) - removed`` and canonicalize it.

        ``added`` and ``removed`` must be disjoint.  Elements of ``added``
        already in ``P`` and elements of ``removed`` outside ``P`` are
        dropped.
        """
        m = _as_natural(m, "modulus")
        if m < 1:
            raise ValueError("modulus must be positive")
        _checked_modulus(m)
        res = sorted({_as_natural(r, "residue") for r in residues})
        if res and res[-1] >= m:
            raise ValueError(f"residue {res[-1]} out of range for modulus {m}")
        add = {_as_natural(x, "element") for x in added}
        rem = {_as_natural(x, "element") for x in removed}
        if add & rem:
            raise ValueError(f"added and removed overlap: {sorted(add & rem)}")
        if len(res) > _NUMPY_THRESHOLD:
            mask = _array_to_mask(np.asarray(res, dtype=np.int64), m)
        else:
            mask = 0
            for r in res:
                mask |= 1 << r
        add = {x for x in add if not (mask >> (x % m)) & 1}
        rem = {x for x in rem if (mask >> (x % m)) & 1}
        return cls._build(m, mask, add, rem)

    @classmethod
    def periodic(cls, m: int, residues: Iterable[int]) -> APSet:
        return cls.from_parts(m, residues)

    @classmethod
    def finite(cls, elements: Iterable[int]) -> APSet:
        return cls.from_parts(1, (), elements)

    @classmethod
    def _build(cls, m: int, mask: int, add, rem) -> APSet:
        # caller guarantees add misses P and rem lies inside P
        m, mask = _min_period(mask, m)
        cap = current_limits().finite_cap
        if len(add) + len(rem) > cap:
            raise ResourceCapError(
                f"finite part of size {len(add) + len(rem)} exceeds cap {cap}"
            )
        return cls(m, mask, frozenset(add), frozenset(rem))

    # -- views --------------------------------------------------------------

    @cached_property
    def residues(self) -> tuple[int, ...]:
        return tuple(_residue_list(self.mask, self.modulus))

    @property
    def residue_count(self) -> int:
        return self.mask.bit_count()

    @property
    def finite_size(self) -> int:
        return len(self.added) + len(self.removed)

    @property
    def max_exception(self) -> int:
        """Largest element of ``added | removed``, or -1 when both are empty."""
        return max(self.added | self.removed, default=-1)

    def is_empty(self) -> bool:
        return self.mask == 0 and not self.added

    def is_finite(self) -> bool:
        return self.mask == 0

    def in_periodic_part(self, x: int) -> bool:
        return bool((self.mask >> (x % self.modulus)) & 1)

    def contains(self, x: int) -> bool:
        if x < 0:
            return False
        if x in self.added:
            return True
        if x in self.removed:
            return False
        return bool((self.mask >> (x % self.modulus)) & 1)

    __contains__ = contains

    def prefix_count(self, n: int) -> int:
        """``|self ∩ [0, n)|`` by period counting."""
        n = _as_natural(n, "bound")
        q, r = divmod(n, self.modulus)
        count = q * self.mask.bit_count() + (self.mask & _full(r)).bit_count()
        count += sum(1 for x in self.added if x < n)
        count -= sum(1 for x in self.removed if x < n)
        return count

    def elements_below(self, n: int) -> list[int]:
        """Sorted members smaller than ``n``."""
        out = set()
        res = self.residues
        m = self.modulus
        for base in range(0, n, m):
            for r in res:
                y = base + r
                if y >= n:
                    break
                out.add(y)
        out -= self.removed
        out |= {x for x in self.added if x < n}
        return sorted(out)

    # -- algebra (operators) ------------------------------------------------

    def __or__(self, other: APSet) -> APSet:
        return union(self, other)

    def __and__(self, other: APSet) -> APSet:
        return intersect(self, other)

    def __sub__(self, other: APSet) -> APSet:
        return difference(self, other)

    def __invert__(self) -> APSet:
        return complement(self)

    def __le__(self, other: APSet) -> bool:
        return is_subset(self, other)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "m": self.modulus,
            "R": list(self.residues),
            "add": sorted(self.added),
            "del": sorted(self.removed),
        }

    @classmethod
    def from_json(cls, data: dict) -> APSet:
        return cls.from_parts(
            data["m"], data.get("R", ()), data.get("add", ()), data.get("del", ())
        )

    def __repr__(self) -> str:
        res = self.residues if self.residue_count <= 16 else None
        rtxt = "{" + ",".join(map(str, res)) + "}" if res is not None else (
            f"<{self.residue_count} residues>"
        )
        parts = [f"m={self.modulus}", f"R={rtxt}"]
        if self.added:
            parts.append("add={" + ",".join(map(str, sorted(self.added))) + "}")
        if self.removed:
            parts.append("del={" + ",".join(map(str, sorted(self.removed))) + "}")
        return f"APSet({', '.join(parts)})"


EMPTY = APSet(1, 0)
NAT = APSet(1, 1)


def ap(k: int, h: int) -> APSet:
    """The progression ``{k*t + h : t >= 0}``."""
    return affine(NAT, k, h)


def residue_family(k: int, residues: Iterable[int]) -> APSet:
    """Union of the classes ``k*N + h`` for ``h`` in ``residues``."""
    return APSet.from_parts(k, residues)


def residue_interval(k: int, lo: int, hi: int) -> APSet:
    """Union of the classes ``k*N + h`` for ``lo <= h < hi``, built as a mask."""
    k = _as_natural(k, "modulus")
    if k < 1 or not 0 <= lo <= hi <= k:
        raise ValueError(f"need 0 <= lo <= hi <= k, got k={k}, lo={lo}, hi={hi}")
    _checked_modulus(k)
    return APSet._build(k, _full(hi) ^ _full(lo), (), ())


# ---------------------------------------------------------------------------
# boolean operations

_OPS = {
    "or": (lambda p, q: p | q, lambda s, t: s or t),
    "and": (lambda p, q: p & q, lambda s, t: s and t),
    "sub": (lambda p, q: p & ~q, lambda s, t: s and not t),
}


def _combine(a: APSet, b: APSet, op: str) -> APSet:
    m = _checked_lcm(a.modulus, b.modulus)
    pa = _tile(a.mask, a.modulus, m // a.modulus)
    pb = _tile(b.mask, b.modulus, m // b.modulus)
    mask_op, elem_op = _OPS[op]
    mask = mask_op(pa, pb)
    add, rem = set(), set()
    for x in a.added | a.removed | b.added | b.removed:
        inside = elem_op(a.contains(x), b.contains(x))
        periodic = bool((mask >> (x % m)) & 1)
        if inside and not periodic:
            add.add(x)
        elif periodic and not inside:
            rem.add(x)
    return APSet._build(m, mask, add, rem)


def union(a: APSet, b: APSet) -> APSet:
    return _combine(a, b, "or")


def intersect(a: APSet, b: APSet) -> APSet:
    return _combine(a, b, "and")


def difference(a: APSet, b: APSet) -> APSet:
    return _combine(a, b, "sub")


def complement(a: APSet) -> APSet:
    """Complement relative to N; the period is unchanged."""
    return APSet(a.modulus, a.mask ^ _full(a.modulus), a.removed, a.added)


def is_subset(a: APSet, b: APSet) -> bool:
    return difference(a, b).is_empty()


def affine(a: APSet, k: int, h: int = 0) -> APSet:
    """The image ``{k*x + h : x in a}``; the modulus becomes ``k*m``."""
    k = _as_natural(k, "dilation")
    h = _as_natural(h, "shift")
    if k < 1:
        raise ValueError("dilation must be positive")
    m = a.modulus
    big = _checked_modulus(k * m)
    shift = h % big
    if a.residue_count <= _NUMPY_THRESHOLD:
        mask = 0
        for r in _iter_bits(a.mask):
            mask |= 1 << ((k * r + shift) % big)
    else:
        res = _mask_to_array(a.mask, m).astype(np.int64)
        mask = _array_to_mask((k * res + shift) % big, big)

    # the periodic image also covers its classes below h; those are exceptions
    q, r = divmod(h, big)
    below = q * mask.bit_count() + (mask & _full(r)).bit_count()
    cap = current_limits().finite_cap
    if below + a.finite_size > cap:
        raise ResourceCapError(
            f"affine image has {below + a.finite_size} exceptional elements, cap {cap}"
        )
    rem = set()
    if below:
        res_list = _residue_list(mask, big)
        for base in range(0, h, big):
            for y in res_list:
                if base + y >= h:
                    break
                rem.add(base + y)
    rem.update(k * x + h for x in a.removed)
    add = {k * x + h for x in a.added}
    return APSet._build(big, mask, add, rem)


def translate(a: APSet, h: int) -> APSet:
    return affine(a, 1, h)
