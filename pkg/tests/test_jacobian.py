import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import euler_number as euler_oracle
from oracles import hypersurface_primitive_hodge, jacobian_dim_exact
from wcihodge.family import Family, is_linear_cone, is_wps_well_formed, summarize
from wcihodge.jacobian import (
    PRIMES,
    BigradedContext,
    CapacityError,
    HodgeDiamond,
    MiddleRow,
    closed_form_for,
    dim_bigraded,
    dim_graded_piece,
    euler_number,
    hodge_diamond,
    lower_bound,
    macaulay_matrix,
    middle_betti,
    middle_row,
    quadric_cubic_closed_forms,
)
from wcihodge.regularity import Verdict, quasi_smooth_hypersurface, smooth_general_member


def F(w, d):
    return Family(tuple(w), tuple(d))


def ctx(w, d):
    return BigradedContext(F(w, d))


def test_dim_graded_piece_examples():
    assert dim_graded_piece(ctx((1,) * 5, (4,)), 1) == 30
    assert dim_graded_piece(ctx((1,) * 5, (4,)), 0) == 0
    assert dim_graded_piece(ctx((1, 1, 2, 3), (6,)), 1) == 8


@pytest.mark.parametrize("w,d,q,e", [
    ((1,) * 5, (4,), 1, -1),
    ((1,) * 6, (3,), 2, -3),
    ((1,) * 6, (3,), 1, -3),
    ((1,) * 6, (2, 2), 1, -2),
    ((1,) * 7, (2, 3), 1, -2),
    ((1, 1, 2, 3), (6,), 1, -1),
    ((1, 1, 1, 2, 3), (6,), 1, -2),
    ((1, 1, 1, 1, 2, 2), (4,), 1, -4),
    ((1, 1, 1, 3, 3, 3), (6,), 1, -6),
    ((1,) * 4, (3,), 1, 0),
    ((1,) * 5, (2, 2), 2, 0),
])
def test_dim_bigraded_matches_exact_oracle(w, d, q, e):
    assert dim_bigraded(ctx(w, d), q, e) == jacobian_dim_exact(w, d, q, e)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=3, max_size=5), st.integers(3, 10), st.integers(0, 3))
def test_quasi_smooth_hypersurfaces_match_series(weights, degree, q):
    fam = F(weights, (degree,))
    if (degree in fam.weights or fam.index <= 0 or q > fam.dim
            or not is_wps_well_formed(fam.weights)
            or quasi_smooth_hypersurface(fam.weights, degree) is not Verdict.CERTIFIED):
        return
    c = BigradedContext(fam)
    if c.basis_size(q, -fam.index) > 600:
        return
    assert dim_graded_piece(c, q) == hypersurface_primitive_hodge(fam.weights, degree, q)


def test_macaulay_matrix_shape():
    c = ctx((1,) * 5, (4,))
    import numpy as np

    coefs = [np.ones(len(s), dtype=np.int64) for s in c._equation_supports]
    A = macaulay_matrix(c, 1, -1, coefs, PRIMES[0])
    assert A.shape[1] == c.basis_size(1, -1) == 35


def test_piece_preconditions():
    with pytest.raises(ValueError):
        dim_graded_piece(ctx((1,) * 5, (4,)), -1)
    with pytest.raises(ValueError):
        dim_graded_piece(ctx((1,) * 4, (5,)), 3)
    with pytest.raises(ValueError):
        dim_bigraded(ctx((1,) * 5, (4,)), 1, -1, trials=0)


def test_capacity_error():
    with pytest.raises(CapacityError):
        dim_graded_piece(ctx((1,) * 6, (3,)), 2, capacity=10)


@pytest.mark.parametrize("w,d,row", [
    ((1,) * 6, (2, 3), (0, 20, 20, 0)),
    ((1,) * 5, (2,), (0, 0, 0, 0)),
    ((1,) * 7, (2, 2, 2), (0, 14, 14, 0)),
    ((1,) * 6, (3,), (0, 1, 20, 1, 0)),
    ((1,) * 6, (2,), (0, 0, 1, 0, 0)),
])
def test_middle_rows(w, d, row):
    mr = middle_row(ctx(w, d))
    assert mr.values == row and mr.is_symmetric()


def test_middle_row_without_mirror_is_symmetric():
    mr = middle_row(ctx((1,) * 5, (3,)), mirror=False)
    assert mr.values == (0, 5, 5, 0) and set(mr.sources) == {"rank"}


def test_series_route_matches_rank():
    c = ctx((1, 1, 1, 1, 2, 2), (4,))
    by_rank = middle_row(c)
    by_series = middle_row(c, rank_limit=0)
    assert by_rank.values == by_series.values
    # the empty q = 0 piece is always ranked
    assert by_series.sources[:3] == ("rank", "series", "series")


@pytest.mark.parametrize("w,d", [
    ((1,) * 6, (2, 3)), ((1,) * 7, (2, 2, 2)), ((1,) * 6, (2, 2)), ((1,) * 7, (2, 3)), ((1,) * 8, (2, 2)),
])
def test_euler_route_matches_rank(w, d):
    c = ctx(w, d)
    fam = c.family
    n, top = fam.dim, fam.dim // 2
    sizes = [c.basis_size(q, -fam.index) for q in range(top + 1)]
    assert sizes[-1] > max(sizes[:-1])
    via_euler = middle_row(c, rank_limit=max(sizes[:-1]))
    assert via_euler.sources[top] == "euler"
    assert via_euler.values == middle_row(c).values
    assert middle_betti(fam) == sum(via_euler.values) + (1 if n % 2 == 0 else 0)


def test_hypersurfaces_prefer_the_series_route():
    c = ctx((1,) * 6, (3,))
    row = middle_row(c, rank_limit=0)
    assert row.sources[2] == "series" and row.values == (0, 1, 20, 1, 0)


@pytest.mark.parametrize("w,d", [
    ((1,) * 5, (4,)), ((1,) * 6, (2, 3)), ((1, 1, 1, 1, 3), (6,)), ((1, 1, 1, 2, 3), (6,)), ((1,) * 7, (2, 2, 2)),
    ((1,) * 6 + (2,), (4,)), ((1,) * 4, (3,)),
])
def test_euler_number_matches_sympy(w, d):
    assert euler_number(F(w, d)) == euler_oracle(w, d)


def test_middle_row_requires_fano():
    with pytest.raises(ValueError):
        middle_row(ctx((1,) * 5, (5,)))


def test_middle_row_validation():
    with pytest.raises(ValueError):
        MiddleRow(2, (0, 1))


def test_diamonds():
    quadric = hodge_diamond(ctx((1,) * 4, (2,)))
    assert quadric[1, 1] == 2
    assert all(quadric[p, q] == (p == q) for p in range(3) for q in range(3) if (p, q) != (1, 1))
    cubic = hodge_diamond(ctx((1,) * 6, (3,)))
    assert cubic[1, 3] == cubic[3, 1] == 1 and cubic[2, 2] == 21
    assert cubic.hodge_level() == 2
    assert hodge_diamond(ctx((1,) * 5, (2,))).hodge_level() == float("-inf")
    d = HodgeDiamond.from_middle_row(MiddleRow(3, (0, 5, 5, 0)))
    assert d.to_rows()[1] == [0, 1, 5, 0] and d.primitive_middle() == (0, 5, 5, 0)


def test_closed_form_examples():
    assert quadric_cubic_closed_forms(5, 2, 0).value == 2 and quadric_cubic_closed_forms(5, 2, 0).exact
    assert quadric_cubic_closed_forms(4, 0, 1).value == 5 and quadric_cubic_closed_forms(4, 0, 1).exact
    assert quadric_cubic_closed_forms(5, 0, 1).value == 1 and quadric_cubic_closed_forms(5, 0, 1).exact
    # the r = 1 count includes the monomials with one quadric variable
    assert quadric_cubic_closed_forms(6, 1, 1).value == 8
    with pytest.raises(ValueError):
        quadric_cubic_closed_forms(4, 0, 0)
    with pytest.raises(ValueError):
        quadric_cubic_closed_forms(4, 1, 3)
    with pytest.raises(ValueError):
        closed_form_for(F((1, 1, 1, 1, 3), (6,)))


def test_closed_forms_match_rank_small():
    for N, k1, k2 in [(6, 1, 1), (5, 2, 0), (8, 0, 1), (7, 0, 2), (7, 1, 1)]:
        cf = quadric_cubic_closed_forms(N, k1, k2)
        fam = F((1,) * (N + 1), (2,) * k1 + (3,) * k2)
        s = summarize(fam)
        assert cf.exact
        assert cf.value == dim_graded_piece(BigradedContext(fam), s.p)


def test_lower_bounds():
    assert lower_bound(summarize(F((1,) * 5, (4,)))) == 30
    assert lower_bound(summarize(F((1, 1, 1, 1, 3), (6,)))) == 52
    assert lower_bound(summarize(F((1, 1, 1, 2, 3), (6,)))) == 15
    assert lower_bound(summarize(F((1,) * 6, (3,)))) == 1
    with pytest.raises(ValueError):
        lower_bound(summarize(F((1,) * 5, (2,))))
    with pytest.raises(ValueError):
        lower_bound(summarize(F((1,) * 5, (5,))))


def test_seeds_and_primes_agree():
    c = ctx((1,) * 7, (2, 3))
    values = {dim_graded_piece(c, 1, seed=s, prime=p) for s in (1, 2) for p in PRIMES[:2]}
    assert values == {8}


def test_smooth_cross_check_for_linear_cone_is_not_required():
    fam = F((1, 1, 2), (2,))
    assert is_linear_cone(fam)
    assert smooth_general_member(fam) is Verdict.CERTIFIED
