import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from corrgap.distributions import product_distribution
from corrgap.extensions import (
    CapExceeded,
    DualCertificate,
    Distribution,
    ExtensionError,
    all_extensions,
    check_dual_feasible,
    concave_closure,
    convex_closure,
    indicator,
    lower_pairwise,
    multilinear,
    pairs,
    upper_pairwise,
)
from corrgap.setfn import make_setfn, uniform_matroid_rank, weighted_coverage

from oracles import extension_by_vertices, product_expectation
from strategies import arbitrary_setfn, coverage_setfn, marginals

LP_EXTENSIONS = [
    (concave_closure, False, "max"),
    (upper_pairwise, True, "max"),
    (convex_closure, False, "min"),
    (lower_pairwise, True, "min"),
]


def instance(n_max: int, fn=coverage_setfn):
    return st.integers(1, n_max).flatmap(lambda n: st.tuples(fn(n), marginals(n)))


def random_coverage(rng: random.Random, n: int):
    m = rng.randint(1, 6)
    weights = [rng.randint(0, 6) for _ in range(m)]
    covers = [{j for j in range(1, m + 1) if rng.random() < 0.4} for _ in range(n)]
    return weighted_coverage(n, weights, covers)


# -- oracle agreement ------------------------------------------------------------


@given(instance(3, arbitrary_setfn))
def test_lp_extensions_match_vertex_enumeration(case):
    f, x = case
    for ext, pairwise, sense in LP_EXTENSIONS:
        assert ext(f, x).value == extension_by_vertices(f.values, x, pairwise, sense)


@pytest.mark.parametrize("seed", range(3))
def test_concave_closure_matches_vertex_enumeration_n4(seed):
    rng = random.Random(seed)
    f = random_coverage(rng, 4)
    x = [Fraction(rng.randint(0, 6), 6) for _ in range(4)]
    assert concave_closure(f, x).value == extension_by_vertices(f.values, x, False, "max")
    assert convex_closure(f, x).value == extension_by_vertices(f.values, x, False, "min")


@given(instance(5, arbitrary_setfn))
def test_multilinear_matches_direct_sum(case):
    f, x = case
    assert multilinear(f, x) == product_expectation(f.values, x)


# -- invariants ---------------------------------------------------------------------


@given(instance(5))
def test_sandwich(case):
    f, x = case
    v = all_extensions(f, x)
    assert v["f_minus"] <= v["f_mm"] <= v["F"] <= v["f_pp"] <= v["f_plus"]


@pytest.mark.parametrize("n", [6, 7, 8])
def test_sandwich_larger_n(n):
    rng = random.Random(n)
    for _ in range(3):
        f = random_coverage(rng, n)
        x = [Fraction(rng.randint(0, 12), 12) for _ in range(n)]
        v = all_extensions(f, x)
        assert v["f_minus"] <= v["f_mm"] <= v["F"] <= v["f_pp"] <= v["f_plus"]


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(arbitrary_setfn(n), st.integers(0, (1 << n) - 1))))
def test_vertex_consistency(case):
    f, mask = case
    x = indicator(f.n, mask)
    assert set(all_extensions(f, x).values()) == {f.values[mask]}


@given(instance(4, arbitrary_setfn))
def test_witnesses_and_certificates(case):
    f, x = case
    for ext, pairwise, _ in LP_EXTENSIONS:
        res = ext(f, x)
        d = res.witness
        assert d.marginals() == tuple(x)
        if pairwise:
            for i, j in pairs(f.n):
                assert d.moment((1 << i) | (1 << j)) == x[i] * x[j]
        assert d.expectation(f) == res.value
        assert check_dual_feasible(f, res.certificate)
        assert res.certificate.objective(x) == res.value
        assert (res.certificate.lambda_ij is not None) == pairwise


@given(instance(6, arbitrary_setfn))
def test_pairwise_lp_feasible_via_product_law(case):
    f, x = case
    d = product_distribution(x)
    assert d.marginals() == tuple(x)
    assert lower_pairwise(f, x).value <= d.expectation(f) <= upper_pairwise(f, x).value


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(arbitrary_setfn(n), marginals(n), marginals(n))))
def test_midpoint_concavity_and_convexity(case):
    f, x, y = case
    mid = [(a + b) / 2 for a, b in zip(x, y)]
    assert 2 * concave_closure(f, mid).value >= concave_closure(f, x).value + concave_closure(f, y).value
    assert 2 * convex_closure(f, mid).value <= convex_closure(f, x).value + convex_closure(f, y).value


@given(instance(4, arbitrary_setfn), st.integers(0, 5), st.integers(1, 4))
def test_affine_equivariance(case, shift, scale):
    f, x = case
    g = make_setfn(f.n, [shift + scale * v for v in f.values])
    for ext, _, _ in LP_EXTENSIONS:
        assert ext(g, x).value == shift + scale * ext(f, x).value


@given(instance(4, arbitrary_setfn))
def test_complement_symmetry(case):
    # f(S) -> f(complement S) with x -> 1 - x maps feasible laws onto feasible laws
    f, x = case
    g = make_setfn(f.n, [f.values[f.full ^ m] for m in range(1 << f.n)])
    xc = [1 - v for v in x]
    assert concave_closure(g, xc).value == concave_closure(f, x).value
    assert upper_pairwise(g, xc).value == upper_pairwise(f, x).value


@given(instance(4))
def test_determinism(case):
    f, x = case
    assert upper_pairwise(f, x) == upper_pairwise(f, x)
    assert concave_closure(f, x) == concave_closure(f, x)


# -- small pieces ------------------------------------------------------------------------


def test_rank1_reference_values():
    f = uniform_matroid_rank(2, 1)
    v = all_extensions(f, [Fraction(1, 2)] * 2)
    assert v == {
        "F": Fraction(3, 4),
        "f_plus": 1,
        "f_pp": Fraction(3, 4),
        "f_minus": Fraction(1, 2),
        "f_mm": Fraction(3, 4),
    }


def test_caps():
    f = uniform_matroid_rank(3, 1)
    with pytest.raises(CapExceeded):
        upper_pairwise(f, [0, 0, 0], cap=2)
    with pytest.raises(CapExceeded):
        concave_closure(f, [0, 0, 0], cap=2)


def test_marginal_validation():
    f = uniform_matroid_rank(2, 1)
    with pytest.raises(ExtensionError):
        multilinear(f, [Fraction(3, 2), 0])
    with pytest.raises(ExtensionError):
        multilinear(f, [0])


def test_distribution_validation_and_json():
    d = Distribution.from_weights(2, {0: "1/2", 3: "1/2", 1: 0})
    assert d.support == {0: Fraction(1, 2), 3: Fraction(1, 2)}
    assert Distribution.from_json(d.to_json()) == d
    assert d.complement() == d
    with pytest.raises(ExtensionError):
        Distribution(2, {0: Fraction(1, 2)})
    with pytest.raises(ExtensionError):
        Distribution.from_weights(2, {0: -1, 1: 2})
    with pytest.raises(ExtensionError):
        Distribution(1, {2: Fraction(1)})


def test_certificate_checker_reports_violation():
    f = uniform_matroid_rank(2, 1)
    cert = DualCertificate(Fraction(0), (Fraction(1, 2), Fraction(1)))
    v = check_dual_feasible(f, cert)
    assert not v and v.witness == (1,)
    lower = DualCertificate(Fraction(0), (Fraction(1), Fraction(1)), sense="lower")
    v = check_dual_feasible(f, lower)
    assert not v and v.witness == (1, 2)
    doc = DualCertificate(Fraction(0), (Fraction(1),) * 2, (Fraction(-1),), label="t").to_json()
    assert doc["lambda_ij"] == {"1,2": "-1"} and doc["label"] == "t"
