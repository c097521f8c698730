import pytest
from hypothesis import assume, given

from densityforge import EMPTY, NAT, APSet, ap, parse_apset
from densityforge.dsl import (
    Affine,
    APAtom,
    Complement,
    Difference,
    DSLSyntaxError,
    FiniteAtom,
    Intersection,
    NatAtom,
    UnionExpr,
    expr_contains,
    format_apset,
    normalize,
    parse_set_expr,
)

from _oracles import apsets, expr_bound, expr_text, members, set_exprs


def test_single_atom():
    assert parse_set_expr("AP(4,1)") == APAtom(4, 1)


def test_union_and_difference_tree():
    tree = parse_set_expr("AP(2,0) + {5} \\ {4}")
    assert tree == UnionExpr(APAtom(2, 0), Difference(FiniteAtom((5,)), FiniteAtom((4,))))


def test_affine_node():
    assert parse_set_expr("2*AP(3,1)+5") == Affine(APAtom(3, 1), 2, 5)


def test_affine_shift_versus_union():
    # "+ 3*N" starts another dilation, so it is a union
    assert parse_set_expr("2*N + 3*N") == UnionExpr(Affine(NatAtom(), 2, 0),
                                                   Affine(NatAtom(), 3, 0))


def test_precedence():
    # complement, then affine, then &, then \, then union
    assert parse_set_expr("~N & N") == Intersection(Complement(NatAtom()), NatAtom())
    assert parse_set_expr("N \\ N & N") == Difference(NatAtom(), Intersection(NatAtom(), NatAtom()))
    assert parse_set_expr("N | N \\ N") == UnionExpr(NatAtom(), Difference(NatAtom(), NatAtom()))
    assert parse_set_expr("N \\ {1} \\ {2}") == Difference(
        Difference(NatAtom(), FiniteAtom((1,))), FiniteAtom((2,)))


def test_whitespace_and_atoms():
    assert parse_apset("  EMPTY ") == EMPTY
    assert parse_apset("(N)") == NAT
    assert parse_apset("{3, 1, 3}") == APSet.finite([1, 3])


@pytest.mark.parametrize("text, offset", [
    ("AP(4,", 5),
    ("AP(4 1)", 5),
    ("N +", 3),
    ("N N", 2),
    ("{}", 1),
    ("AP(4,1) $", 8),
    ("é N", 0),
    ("N é", 2),
])
def test_syntax_error_offsets(text, offset):
    with pytest.raises(DSLSyntaxError) as info:
        parse_set_expr(text)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


def test_non_positive_modulus():
    with pytest.raises(DSLSyntaxError, match="non-positive modulus"):
        parse_set_expr("AP(0,1)")
    with pytest.raises(DSLSyntaxError):
        parse_set_expr("0*N")


def test_normalize_examples():
    assert parse_apset("AP(2,0) + AP(2,1)") == NAT
    assert parse_apset("AP(2,0) & AP(3,0)") == ap(6, 0)
    assert parse_apset("AP(4,1) \\ {13} + {2}") == APSet.from_parts(4, [1], [2], [13])
    assert normalize("2*AP(3,1)+5") == ap(6, 7)


def test_format_examples():
    assert format_apset(NAT) == "N"
    assert format_apset(EMPTY) == "EMPTY"
    assert format_apset(APSet.finite([7, 2])) == "{2,7}"
    assert format_apset(parse_apset("AP(2,0) + {5} \\ {4}")) == "AP(2,0) + {5}"
    assert (format_apset(APSet.from_parts(4, [0, 1], [2], [13]))
            == "(AP(4,0) + AP(4,1)) \\ {13} + {2}")


@given(set_exprs)
def test_normalize_is_faithful(e):
    bound = expr_bound(e)
    assume(bound <= 20_000)
    a = normalize(e)
    assert members(a, bound) == {x for x in range(bound) if expr_contains(e, x)}


@given(set_exprs)
def test_text_round_trip(e):
    assert parse_set_expr(expr_text(e)) == e


@given(apsets())
def test_format_round_trip_and_idempotence(a):
    text = format_apset(a)
    assert parse_apset(text) == a
    assert format_apset(parse_apset(text)) == text
    # normalizing a canonical set's own text changes nothing
    assert normalize(parse_set_expr(format_apset(normalize(text)))) == normalize(text)
