from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from corrgap import closedform as cf
from corrgap import distributions as dist
from corrgap.closedform import Region
from corrgap.distributions import (
    ConstructionError,
    check_pairwise_independent,
    construct_large,
    construct_small,
    covariance_signs,
    cylinder_moments,
    cylinder_signature,
    identical_n4,
    product_distribution,
    region_distribution_n3,
    spread_rank1_witness,
)
from corrgap.extensions import Distribution, concave_closure
from corrgap.setfn import F_FAMILIES, extremal_catalog

from strategies import extremal_mix, marginals, unit_rationals

HALF = Fraction(1, 2)


@st.composite
def small_profile(draw, n_max: int = 8):
    """All but the largest marginal sum to at most 1."""
    n = draw(st.integers(2, n_max))
    cuts = sorted(draw(st.lists(st.integers(0, 24), min_size=n - 1, max_size=n - 1)))
    parts = [Fraction(b - a, 24) for a, b in zip([0] + cuts, cuts)]
    low = max(parts)
    top = draw(st.integers(0, 24).map(lambda k: low + (1 - low) * Fraction(k, 24)))
    xs = parts + [top]
    perm = draw(st.permutations(range(n)))
    return tuple(xs[i] for i in perm)


@given(small_profile())
def test_construct_small(x):
    d = construct_small(x)
    assert check_pairwise_independent(d, x)


@given(small_profile())
def test_construct_large(x):
    y = tuple(1 - v for v in x)
    d = construct_large(y)
    assert check_pairwise_independent(d, y)


def test_construct_small_atoms_below_top():
    x = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)]
    d = construct_small(x)
    assert d.prob(0) == (1 - Fraction(7, 12)) * HALF
    assert d.prob((1,)) == Fraction(1, 4) * HALF


def test_construction_preconditions():
    with pytest.raises(ConstructionError):
        construct_small([Fraction(2, 3)] * 3)
    with pytest.raises(ConstructionError):
        construct_large([Fraction(1, 3)] * 3)
    with pytest.raises(ConstructionError):
        identical_n4(HALF, "small")
    with pytest.raises(ConstructionError):
        identical_n4(HALF, "large")
    with pytest.raises(ConstructionError):
        identical_n4(HALF, "middle")


@given(st.integers(0, 24))
def test_identical_n4(k):
    p = Fraction(k, 72)  # covers [0, 1/3]
    d = identical_n4(p, "small")
    assert check_pairwise_independent(d, [p] * 4)
    assert len(d.support) <= 6
    q = 1 - p
    d = identical_n4(q, "large")
    assert check_pairwise_independent(d, [q] * 4)


@given(marginals(5))
def test_product_distribution(x):
    d = product_distribution(x)
    assert check_pairwise_independent(d, x)
    assert all(v == 0 for v in cylinder_moments(d, x).values())


def test_checker_witnesses():
    d = Distribution.from_weights(2, {0: HALF, 3: HALF})
    assert check_pairwise_independent(d, [HALF, HALF]).witness == ("pair", 1, 2)
    assert check_pairwise_independent(d, [HALF, Fraction(1, 3)]).witness == ("marginal", 2)


@pytest.mark.parametrize("n", range(2, 11))
def test_spread_rank1_witness(n):
    d = spread_rank1_witness(n)
    assert check_pairwise_independent(d, [Fraction(1, n)] * n)
    assert 1 - d.prob(0) == 1 - Fraction(1, n) + Fraction(1, n * n)


# -- region laws for the concave closure ----------------------------------------------


def region_points(region: Region):
    """Grid points of [0,1]^3 in ``region`` (F3_1 split for the middle band)."""
    grid = [Fraction(i, 12) for i in range(13)]
    fam = region_families(region)[0]
    return [
        (a, b, c)
        for a in grid for b in grid for c in grid
        if cf.region_n3((a, b, c), fam) is region
    ]


@pytest.mark.parametrize("region", list(Region), ids=str)
def test_region_laws_have_marginals_x(region):
    pts = region_points(region)
    assert pts
    for x in pts[::7]:
        assert region_distribution_n3(x, region).marginals() == x


def region_families(region: Region):
    if region in (Region.R1, Region.R14):
        return F_FAMILIES
    return (F_FAMILIES[(int(region) - 2) // 4],)


@pytest.mark.parametrize("region", list(Region), ids=str)
def test_region_laws_attain_the_closure(region):
    pts = region_points(region)[::23]
    for family in region_families(region):
        for g in extremal_catalog(3, family):
            for x in pts:
                d = region_distribution_n3(x, region)
                assert d.expectation(g) == concave_closure(g, x).value


def test_region_law_rejects_outside_points():
    with pytest.raises(ConstructionError):
        region_distribution_n3([HALF] * 3, Region.R1)
    with pytest.raises(ConstructionError):
        region_distribution_n3([HALF] * 3, Region.R14)
    with pytest.raises(ConstructionError):
        region_distribution_n3([Fraction(1, 10)] * 3, Region.R5)


# -- cylinder dependence ----------------------------------------------------------------


@given(st.lists(unit_rationals(24), min_size=3, max_size=3))
def test_closure_laws_negative_cylinder_dependence(x):
    s = sum(x)
    assume(s <= 1 or s >= 2)
    region = Region.R1 if s <= 1 else Region.R14
    sig = cylinder_signature(region_distribution_n3(x, region), x)
    assert sig.all_nonpositive


@given(marginals(3, den=24))
def test_family_endpoint_triplet_signs(x):
    lo, hi = cf.omega_bounds_n3(x)
    prod = x[0] * x[1] * x[2]
    top = cf.pairwise_family_n3(x, hi)
    bottom = cf.pairwise_family_n3(x, lo)
    assert top.moment(0b111) <= prod
    assert bottom.moment(0b111) >= prod
    for d in (top, bottom):
        assert cylinder_signature(d, x).pairs_zero


@given(extremal_mix(3), marginals(3, den=24))
def test_optimal_omega_sign_follows_slope(f, x):
    d = cf.f_pp_n3_witness(f, x)
    sig = cylinder_signature(d, x)
    if cf.pp_slope_n3(f) > 0:
        assert sig.sign((1, 2, 3)) <= 0
    else:
        assert sig.sign((1, 2, 3)) >= 0


def test_signature_json():
    x = [HALF] * 3
    sig = cylinder_signature(cf.pairwise_family_n3(x, 0), x)
    assert sig.to_json() == {"1,2": 0, "1,3": 0, "2,3": 0, "1,2,3": 1}


# -- covariance sign table -------------------------------------------------------------------


@pytest.mark.parametrize("region", sorted(dist.SIGN_TABLE_F31), ids=str)
def test_covariance_sign_table(region):
    expected = dist.SIGN_TABLE_F31[region]
    interior = [x for x in region_points(region) if all(0 < v < 1 for v in x)]
    assert interior
    for x in interior:
        signs = covariance_signs(region_distribution_n3(x, region))
        for pair, want in zip([(1, 2), (1, 3), (2, 3)], expected):
            if want is None:
                disc = dist.sign_discriminant(region, x)
                want = (disc > 0) - (disc < 0)
            assert signs[pair] == want, (x, pair)


@pytest.mark.parametrize("region", [Region.R2, Region.R5], ids=str)
def test_plus_minus_rows_take_both_signs(region):
    seen = {covariance_signs(region_distribution_n3(x, region))[(2, 3)] for x in region_points(region)}
    assert {-1, 1} <= seen


def test_covariances_need_two_elements():
    with pytest.raises(ConstructionError):
        covariance_signs(Distribution.from_weights(1, {1: 1}))
