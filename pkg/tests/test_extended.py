import pytest

from tlfunctor.errors import IndexOutOfRange, ParseError, ShapeMismatch
from tlfunctor.extended import (
    build_c,
    dominate,
    domination_sizes,
    ext_equal,
    fullness_check,
    parse,
    relations_well_defined,
    verify_c_d_images,
    words_spot_checks,
)


def test_parser_precedence():
    w = parse("cup * id:1 ; id:1 * cap", 3)
    assert (w.source.strands, w.target.strands) == (1, 1)
    assert ext_equal(w, parse("id:1", 3), r=3)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse("p+ ; p+", 3)
    assert exc.value.position == 3
    with pytest.raises(ParseError):
        parse("f:2 ; (g:3", 3)


def test_ext_equal_rejects_mismatched_shapes():
    with pytest.raises(ShapeMismatch):
        ext_equal(parse("f:2", 3), parse("id:1", 3), r=3)


def test_c_index_range():
    with pytest.raises(IndexOutOfRange):
        build_c(2, "+", 3)


def test_small_dominations():
    assert [d.n for d in dominate(0, 3)] == [0]
    assert [d.n for d in dominate(1, 3)] == [1]
    assert domination_sizes(4, 3) == {0: 1, 1: 0, 2: 3, 3: 0, 4: 1}


def test_fullness_examples():
    assert fullness_check(2, 2, 3).full
    assert fullness_check(1, 0, 3).dimension == 0
    witness = fullness_check(5, 2, 3)
    assert witness.full and witness.tangle_rank < witness.rank


@pytest.mark.parametrize("check", [relations_well_defined, verify_c_d_images, words_spot_checks])
def test_extended_checks_at_level_three(check):
    rep = check(3)
    assert rep.ok, rep.to_text()
