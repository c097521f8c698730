import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from densityforge import (
    EMPTY,
    NAT,
    APSet,
    ResourceCapError,
    affine,
    ap,
    complement,
    difference,
    intersect,
    is_subset,
    limits,
    residue_family,
    translate,
    union,
)
from densityforge.apset import current_limits

from _oracles import apsets, horizon, least_period, members, raw_member


def fields(a: APSet):
    return a.modulus, a.residues, set(a.added), set(a.removed)


# -- worked examples ----------------------------------------------------------


def test_partition_of_n():
    assert union(ap(2, 0), ap(2, 1)) == NAT
    assert fields(NAT) == (1, (0,), set(), set())


def test_coprime_intersection():
    assert intersect(ap(2, 0), ap(3, 0)) == ap(6, 0)


def test_finite_perturbation():
    a = APSet.from_parts(4, [1], added=[2], removed=[13])
    assert fields(a) == (4, (1,), {2}, {13})


def test_complement_of_evens():
    assert complement(ap(2, 0)) == ap(2, 1)


def test_difference_from_n():
    d = difference(NAT, ap(4, 1))
    assert (d.modulus, d.residues) == (4, (0, 2, 3))


def test_crt_intersection_matches_brute_scan():
    # the class mod 52 is whatever 0..51 has in both progressions
    scan = [x for x in range(52) if x % 4 == 1 and x % 13 == 0]
    assert scan == [13]
    got = intersect(ap(4, 1), ap(13, 0))
    assert got == APSet.periodic(52, scan)
    assert got != APSet.periodic(52, [40])


def test_affine_examples():
    assert affine(NAT, 4, 1) == ap(4, 1)
    # 2(3t+1)+5 = 6t+7: residue 1 mod 6 with 1 itself missing
    img = affine(ap(3, 1), 2, 5)
    assert img == ap(6, 7)
    assert fields(img) == (6, (1,), set(), {1})
    assert members(img, 40) == {x for x in range(40) if x >= 7 and x % 6 == 1}


def test_shift_of_positive_naturals():
    pos = APSet.from_parts(1, [0], removed=[0])
    shifted = affine(pos, 1, 3)
    assert members(shifted, 50) == set(range(4, 50))
    assert fields(shifted) == (1, (0,), set(), {0, 1, 2, 3})
    assert translate(NAT, 3) == APSet.from_parts(1, [0], removed=[0, 1, 2])


def test_residue_family_examples():
    assert fields(residue_family(4, {0, 1})) == (4, (0, 1), set(), set())
    assert residue_family(7, range(7)) == NAT
    assert residue_family(6, []) == EMPTY
    # modulus divides k
    assert residue_family(6, {1, 3, 5}) == ap(2, 1)


def test_contains_examples():
    assert ap(4, 1).contains(9)
    assert 13 not in APSet.from_parts(4, [1], removed=[13])
    assert not EMPTY.contains(0)


def test_prefix_count_examples():
    assert ap(4, 1).prefix_count(100) == 25
    assert NAT.prefix_count(7) == 7
    a = union(residue_family(6, {1, 3}), APSet.finite([10]))
    naive = sum(1 for x in range(600) if x % 6 in (1, 3) or x == 10)
    assert a.prefix_count(600) == naive


def test_subset_examples():
    assert is_subset(ap(4, 1), ap(2, 1))
    assert not is_subset(ap(2, 1), ap(4, 1))
    assert 3 in difference(ap(2, 1), ap(4, 1))
    assert is_subset(EMPTY, ap(5, 2))


def test_json_shape():
    a = APSet.from_parts(4, [1], added=[2], removed=[13])
    assert a.to_json() == {"m": 4, "R": [1], "add": [2], "del": [13]}
    assert APSet.from_json(json.loads(json.dumps(a.to_json()))) == a


def test_invalid_parts():
    with pytest.raises(ValueError):
        APSet.from_parts(0, [])
    with pytest.raises(ValueError):
        APSet.from_parts(3, [3])
    with pytest.raises(ValueError):
        APSet.from_parts(3, [0], added=[4], removed=[4])
    with pytest.raises(ValueError):
        affine(NAT, 0, 1)


def test_lcm_cap():
    with limits(lcm_cap=50):
        assert current_limits().lcm_cap == 50
        with pytest.raises(ResourceCapError):
            intersect(ap(7, 0), ap(11, 0))
    assert intersect(ap(7, 0), ap(11, 0)).modulus == 77


def test_finite_cap():
    with limits(finite_cap=5):
        with pytest.raises(ResourceCapError):
            APSet.finite(range(6))
        with pytest.raises(ResourceCapError):
            translate(NAT, 10)
    with pytest.raises(ValueError):
        with limits(lcm_cap=0):
            pass


def test_large_modulus_paths_agree():
    # more residues than the bitmask/array switch point
    res = [r for r in range(9072) if r % 3 != 2 or r % 7 == 0]
    a = APSet.periodic(9072, res)
    assert a.modulus == 21
    b = affine(a, 500, 3)
    assert b.modulus == 10500
    assert b.residue_count == a.residue_count


# -- properties ---------------------------------------------------------------


@given(apsets(), apsets())
def test_boolean_ops_match_pointwise(a, b):
    n = horizon(a, b)
    ma, mb = members(a, n), members(b, n)
    assert members(union(a, b), n) == ma | mb
    assert members(intersect(a, b), n) == ma & mb
    assert members(difference(a, b), n) == ma - mb
    assert members(complement(a), n) == set(range(n)) - ma


@given(apsets())
def test_canonical_form(a):
    # minimal period of the tail, and no absorbable exceptions
    n = horizon(a)
    start = a.max_exception + 1
    assert least_period(a.contains, start, a.modulus) == a.modulus
    assert not a.added & set(x for x in range(n) if x % a.modulus in a.residues)
    assert all(x % a.modulus in a.residues for x in a.removed)


@given(apsets(), apsets())
def test_equality_iff_same_members(a, b):
    n = horizon(a, b)
    assert (a == b) == (members(a, n) == members(b, n))


@given(apsets(), apsets())
def test_boolean_laws(a, b):
    assert union(a, a) == a
    assert intersect(a, a) == a
    assert complement(complement(a)) == a
    assert complement(union(a, b)) == intersect(complement(a), complement(b))
    assert complement(intersect(a, b)) == union(complement(a), complement(b))
    assert is_subset(a, b) == (union(a, b) == b)


@given(apsets(), st.integers(1, 6), st.integers(0, 12))
def test_affine_pointwise(a, k, h):
    img = affine(a, k, h)
    assert (k * a.modulus) % img.modulus == 0
    n = k * (horizon(a) - 1) + h + 1
    expect = {k * x + h for x in members(a, horizon(a))}
    assert members(img, n) == {y for y in expect if y < n}


@given(apsets(max_modulus=6), st.integers(1, 4), st.integers(0, 6),
       st.integers(1, 4), st.integers(0, 6))
def test_affine_composition(a, k1, h1, k2, h2):
    assert affine(affine(a, k1, h1), k2, h2) == affine(a, k1 * k2, k2 * h1 + h2)


@given(apsets(), st.integers(0, 400))
def test_prefix_count_matches_loop(a, n):
    assert a.prefix_count(n) == len(members(a, n))
    assert a.elements_below(n) == sorted(members(a, n))


@given(apsets())
def test_json_round_trip(a):
    assert APSet.from_json(json.loads(json.dumps(a.to_json()))) == a


@given(st.integers(1, 10), st.sets(st.integers(0, 30), max_size=5),
       st.sets(st.integers(0, 30), max_size=5))
def test_from_parts_semantics(m, added, removed):
    res = {r for r in range(m) if r % 2 == 0}
    removed -= added
    a = APSet.from_parts(m, res, added, removed)
    n = 2 * m + 32
    assert members(a, n) == {x for x in range(n)
                             if raw_member(m, res, added, removed, x)}
