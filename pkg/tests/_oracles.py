"""Independent reference computations used by the tests.

Nothing here calls into the library's set algebra: sets are plain Python
sets of integers below a bound, densities are counted by brute force.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from densityforge import APSet
from densityforge.dsl import (
    Affine,
    APAtom,
    Complement,
    Difference,
    EmptyAtom,
    FiniteAtom,
    Intersection,
    NatAtom,
    UnionExpr,
)


def raw_member(m, residues, added, removed, x) -> bool:
    return (x % m in residues or x in added) and x not in removed


def members(a: APSet, bound: int) -> set[int]:
    """Elements below ``bound`` read off the stored fields only."""
    res = set(a.residues)
    return {x for x in range(bound)
            if raw_member(a.modulus, res, a.added, a.removed, x)}


def horizon(*sets: APSet, extra: int = 0) -> int:
    """A bound past which every set listed is purely periodic, doubled."""
    m = math.lcm(*(s.modulus for s in sets))
    top = max((s.max_exception for s in sets), default=0)
    return 2 * m + top + extra + 2


def brute_density(a: APSet) -> Fraction:
    """Density of the tail: count one full period past the exceptions."""
    start = a.max_exception + 1
    m = a.modulus
    hits = sum(1 for x in range(start, start + m)
               if raw_member(m, set(a.residues), a.added, a.removed, x))
    return Fraction(hits, m)


def least_period(pred, start: int, limit: int) -> int:
    """Smallest p with pred(x) == pred(x + p) on [start, start + 2*limit)."""
    for p in range(1, limit + 1):
        if all(pred(x) == pred(x + p) for x in range(start, start + 2 * limit)):
            return p
    raise AssertionError("no period found")


def all_subsets(k: int):
    for r in range(k + 1):
        yield from combinations(range(k), r)


# -- hypothesis strategies ---------------------------------------------------


@st.composite
def apsets(draw, max_modulus: int = 12, max_exceptions: int = 4, span: int = 40):
    m = draw(st.integers(1, max_modulus))
    res = draw(st.sets(st.integers(0, m - 1)))
    exc = draw(st.sets(st.integers(0, span), max_size=max_exceptions))
    add = [x for x in exc if x % m not in res]
    rem = [x for x in exc if x % m in res]
    return APSet.from_parts(m, res, add, rem)


_atoms = st.one_of(
    st.builds(APAtom, st.integers(1, 6), st.integers(0, 8)),
    st.just(NatAtom()),
    st.just(EmptyAtom()),
    st.builds(lambda xs: FiniteAtom(tuple(sorted(xs))),
              st.sets(st.integers(0, 30), min_size=1, max_size=4)),
)


def _extend(children):
    return st.one_of(
        st.builds(UnionExpr, children, children),
        st.builds(Intersection, children, children),
        st.builds(Difference, children, children),
        st.builds(Complement, children),
        st.builds(Affine, children, st.integers(1, 3), st.integers(0, 5)),
    )


set_exprs = st.recursive(_atoms, _extend, max_leaves=6)


def expr_text(e) -> str:
    """Fully parenthesized DSL text for an expression tree."""
    match e:
        case APAtom(k, h):
            return f"AP({k},{h})"
        case NatAtom():
            return "N"
        case EmptyAtom():
            return "EMPTY"
        case FiniteAtom(xs):
            return "{" + ",".join(map(str, xs)) + "}"
        case UnionExpr(l, r):
            return f"({expr_text(l)} + {expr_text(r)})"
        case Intersection(l, r):
            return f"({expr_text(l)} & {expr_text(r)})"
        case Difference(l, r):
            return f"({expr_text(l)} \\ {expr_text(r)})"
        case Complement(o):
            return f"~{expr_text(o)}"
        case Affine(o, k, h):
            return f"({k}*{expr_text(o)} + {h})" if h else f"({k}*{expr_text(o)})"
    raise TypeError(e)


def expr_bound(e) -> int:
    """Moduli product times two plus the largest literal: a safe scan bound."""
    mods, top = [1], [0]

    def walk(n):
        match n:
            case APAtom(k, h):
                mods.append(k)
                top.append(h)
            case FiniteAtom(xs):
                top.append(max(xs))
            case UnionExpr(l, r) | Intersection(l, r) | Difference(l, r):
                walk(l)
                walk(r)
            case Complement(o):
                walk(o)
            case Affine(o, k, h):
                mods.append(k)
                top.append(h)
                walk(o)

    walk(e)
    prod = math.prod(mods)
    return 2 * prod * (sum(top) + 1) + 2 * prod + 10
