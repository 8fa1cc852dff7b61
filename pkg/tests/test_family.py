import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_wps_well_formed
from wcihodge.family import (
    Family,
    ParseError,
    Trichotomy,
    ValidationError,
    canonical_degree,
    format_family,
    gcd_degree_condition,
    is_linear_cone,
    is_wps_well_formed,
    parse_family,
    singular_strata,
    smooth_fano_necessary,
    summarize,
    trichotomy_label,
)


def F(w, d):
    return Family(tuple(w), tuple(d))


def test_parse_shorthand_and_canonical_form():
    f = parse_family("P(1^4,3) : 6")
    assert f == F((1, 1, 1, 1, 3), (6,))
    assert str(f) == "P(1^4,3) : 6"
    assert parse_family("P^5 : 2,3") == F((1,) * 6, (2, 3))
    assert parse_family(" P( 3,1,1 ):2 ") == F((1, 1, 3), (2,))
    assert format_family(parse_family("P(1,4,5,6,8,8,8,8):16")) == "P(1,4,5,6,8^4) : 16"


@pytest.mark.parametrize("text,pos", [
    ("Q(1,1):2", 0),
    ("P(1,x):2", 4),
    ("P(1,1) 2", 7),
    ("P(1,1):2)", 8),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_family(text)
    assert err.value.position == pos


@pytest.mark.parametrize("w,d,rule", [
    ((1,), (2,), "ambient-dimension"),
    ((0, 1, 1), (2,), "positive-weights"),
    ((1, 1, 1), (), "codimension"),
    ((1, 1, 1), (1,), "degree-at-least-2"),
    ((1, 1, 1), (2, 2, 2), "codimension"),
])
def test_validation_rules(w, d, rule):
    with pytest.raises(ValidationError) as err:
        F(w, d)
    assert err.value.rule == rule


families_st = st.builds(
    lambda w, d: F(w, d[: len(w) - 1]),
    st.lists(st.integers(1, 9), min_size=2, max_size=8),
    st.lists(st.integers(2, 20), min_size=1, max_size=4),
)


@settings(max_examples=100, deadline=None)
@given(families_st)
def test_canonical_form_round_trips(family):
    assert parse_family(str(family)) == family


def test_summaries():
    s = summarize(F((1, 1, 1, 1, 3), (6,)))
    assert (s.n, s.l, s.s, s.d, s.index, s.p, s.r) == (3, 3, 0, 6, 1, 1, 5)
    s = summarize(F((1,) * 6, (3,)))
    assert (s.n, s.index, s.p, s.r) == (4, 3, 1, 0)
    s = summarize(F((1,) * 6 + (2,), (4,)))
    assert (s.n, s.index, s.p, s.r) == (5, 4, 1, 0)
    s = summarize(F((1,) * 4, (5,)))
    assert s.p is None and s.r is None
    assert summarize(F((1,) * 6, (2, 3))).to_dict()["i_X"] == 1


def test_wps_well_formed_values():
    assert not is_wps_well_formed((1, 2, 2))
    assert is_wps_well_formed((1, 1, 2))
    assert is_wps_well_formed((1, 4, 5, 6, 8, 8, 8, 8))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=2, max_size=6))
def test_wps_well_formed_matches_brute_force(weights):
    assert is_wps_well_formed(weights) == brute_wps_well_formed(weights)


def test_linear_cone():
    assert is_linear_cone(F((1, 1, 2), (2,)))
    assert not is_linear_cone(F((1, 1, 1, 1, 3), (6,)))
    assert not is_linear_cone(F((1, 1, 1, 1, 2, 2), (4,)))


def test_gcd_degree_condition():
    # only t = 1 <= k is constrained; 4 is even, so the condition holds
    assert gcd_degree_condition(F((1, 1, 1, 1, 2, 2), (4,)))
    assert gcd_degree_condition(F((1,) * 6 + (2,), (4,)))
    assert gcd_degree_condition(F((1,) * 8, (2, 3, 5)))
    assert not gcd_degree_condition(F((1, 1, 1, 3), (4,)))
    # two weights divisible by 2 and k = 2: both degrees must be even
    assert not gcd_degree_condition(F((1, 1, 1, 2, 2), (4, 3)))
    assert gcd_degree_condition(F((1, 1, 1, 1, 2, 2), (4, 4)))
    # prime by prime is not enough: 4 must divide a degree, not just 2
    assert not gcd_degree_condition(F((1, 1, 1, 4), (6,)))


def test_trichotomy():
    quartic = F((1,) * 5, (4,))
    assert canonical_degree(quartic) == -1 and trichotomy_label(quartic) is Trichotomy.FANO
    quintic = F((1,) * 5, (5,))
    assert canonical_degree(quintic) == 0 and trichotomy_label(quintic) is Trichotomy.CALABI_YAU
    surface = F((1,) * 4, (5,))
    assert canonical_degree(surface) == 1 and trichotomy_label(surface) is Trichotomy.GENERAL_TYPE


def test_smooth_fano_necessary():
    assert smooth_fano_necessary(F((1, 1, 1, 1, 3), (6,)))
    assert not smooth_fano_necessary(F((1, 1, 7), (6,)))
    assert not smooth_fano_necessary(F((1, 1, 1, 1), (2, 2)))
    assert not smooth_fano_necessary(F((1,) * 5, (5,)))


def test_singular_strata():
    assert list(singular_strata((1, 1, 2))) == [(2,)]
    assert set(singular_strata((1, 2, 2))) == {(1,), (2,), (1, 2)}
