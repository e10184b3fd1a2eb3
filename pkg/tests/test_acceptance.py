"""End-to-end acceptance criteria, each under its wall-clock limit.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary. Run standalone with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import random
import time
from fractions import Fraction

from corrgap import closedform as cf
from corrgap import distributions as dist
from corrgap import gap
from corrgap.closedform import Region
from corrgap.extensions import (
    all_extensions,
    concave_closure,
    indicator,
    multilinear,
    upper_pairwise,
)
from corrgap.setfn import (
    EXTREMAL_N2,
    Subpolytope,
    extremal,
    make_setfn,
    uniform_matroid_rank,
)

SUMMARY: list[str] = []
HALF = Fraction(1, 2)


def criterion(number: int, title: str, limit: float):
    """Time the body, check the limit, record one summary line."""

    def wrap(body):
        @functools.wraps(body)
        def run():
            start = time.perf_counter()
            detail, error = "", None
            try:
                detail = body() or ""
            except AssertionError as exc:
                error = exc
            elapsed = time.perf_counter() - start
            if error is None and elapsed >= limit:
                error = AssertionError(f"took {elapsed:.1f} s, limit {limit:g} s")
            status = "PASS" if error is None else "FAIL"
            note = detail if error is None else f"{error}"
            line = f"[{status}] criterion {number:2d}: {title} ({elapsed:.2f} s / {limit:g} s) {note}".rstrip()
            SUMMARY.append(line)
            print(line)
            if error is not None:
                raise error

        return run

    return wrap


def rand_rational(rng: random.Random, max_den: int = 48) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


def mix(rng: random.Random, catalog, n: int):
    raw = [rng.randint(0, 20) for _ in catalog]
    if not any(raw):
        raw[0] = 1
    total = sum(raw)
    values = [sum(Fraction(w, total) * g.values[m] for w, g in zip(raw, catalog)) for m in range(1 << n)]
    return make_setfn(n, values)


# -----------------------------------------------------------------------------------------


@criterion(1, "reference table values for f1, f2 at x = 1/2", 1)
def test_criterion_01_reference_values():
    f1 = make_setfn(3, [0, "1/3", "1/2", "3/4", "3/5", "4/5", "5/6", 1])
    f2 = make_setfn(3, [0, "1/3", "1/2", "3/4", "1/2", "4/5", "5/6", 1])
    x = [HALF] * 3
    got = [
        concave_closure(f1, x).value,
        upper_pairwise(f1, x).value,
        concave_closure(f2, x).value,
        upper_pairwise(f2, x).value,
    ]
    assert got == [Fraction(27, 40), Fraction(73, 120), Fraction(13, 20), Fraction(143, 240)], got
    return "27/40 73/120 13/20 143/240"


@criterion(2, "n=2 closed forms equal the LP on 1000 instances", 10)
def test_criterion_02_n2_closed_forms():
    rng = random.Random("criterion-2")
    catalog = [extremal(k) for k in EXTREMAL_N2]
    for _ in range(1000):
        f = mix(rng, catalog, 2)
        x = [rand_rational(rng) for _ in range(2)]
        assert cf.f_plus_n2(f, x) == concave_closure(f, x).value, (f, x)
        assert cf.f_pp_n2(f, x) == upper_pairwise(f, x).value, (f, x)
    return "1000/1000 exact"


@criterion(3, "n=3 closed forms equal the LP on 1000 instances", 120)
def test_criterion_03_n3_closed_forms():
    rng = random.Random("criterion-3")
    for _ in range(1000):
        f = gap.gen_extremal_mix_n3(rng).f
        x = [rand_rational(rng) for _ in range(3)]
        assert cf.f_plus_n3(f, x) == concave_closure(f, x).value, (f, x)
        assert cf.f_pp_n3(f, x) == upper_pairwise(f, x).value, (f, x)
    return "1000/1000 exact"


@criterion(4, "max f+/f++ over 10^4 n=3 instances <= 4/3, tight instance = 4/3", 300)
def test_criterion_04_three_elements():
    res = gap.scan("extremal-mix-n3", 10_000, seed=2024)
    assert res.instances_evaluated == 10_000
    assert res.max_ratio <= Fraction(4, 3) and not res.violations, res.max_ratio
    corpus = gap.scan_corpus([(uniform_matroid_rank(3, 1), [HALF, Fraction(1, 4), Fraction(1, 4)])])
    assert corpus.max_ratio == Fraction(4, 3), corpus.max_ratio
    return f"scan max {res.max_ratio} ({float(res.max_ratio):.4f}), corpus 4/3"


@criterion(5, "rank-1 pairwise formula equals LP f++ for n=2..8", 120)
def test_criterion_05_rank1_formula():
    rng = random.Random("criterion-5")
    for n in range(2, 9):
        f = uniform_matroid_rank(n, 1)
        for _ in range(50):
            x = [rand_rational(rng, 24) for _ in range(n)]
            assert cf.f_pp_rank1(x) == upper_pairwise(f, x).value, (n, x)
    return "350/350 exact"


@criterion(6, "k-uniform identical marginals: closed form, bound, equality cases", 300)
def test_criterion_06_kuniform():
    equal_cases = []
    for n in range(2, 9):
        for k in range(1, n + 1):
            f = uniform_matroid_rank(n, k)
            bound = cf.kuniform_ratio_bound(k)
            for i in range(9):
                p = Fraction(i, 8)
                x = [p] * n
                plus, pp = cf.kuniform_identical(n, k, p)
                assert plus == concave_closure(f, x).value, (n, k, p)
                assert pp == upper_pairwise(f, x).value, (n, k, p)
                r = plus / pp if pp else Fraction(1)
                assert r <= bound, (n, k, p, r)
                if r == bound:
                    equal_cases.append((n, k, p))
    assert (4, 2, HALF) in equal_cases and (8, 4, HALF) in equal_cases
    assert cf.kuniform_identical(4, 2, HALF)[0] / cf.kuniform_identical(4, 2, HALF)[1] == Fraction(8, 7)
    assert cf.kuniform_identical(8, 4, HALF)[0] / cf.kuniform_identical(8, 4, HALF)[1] == Fraction(16, 15)
    for n in (2, 4, 6, 8):
        assert (n, n // 2, HALF) in equal_cases
    return "ratios 8/7 at (4,2,1/2) and 16/15 at (8,4,1/2)"


@criterion(7, "500 instances per hypothesis class, LP ratio <= 4/3", 300)
def test_criterion_07_hypothesis_classes():
    worst = []
    for name in (
        "small-probabilities",
        "large-probabilities",
        "simplex-max-singleton",
        "simplex-equal-singletons",
        "identical-extreme-marginals",
    ):
        res = gap.scan(name, 500, seed=7)
        assert res.max_ratio <= Fraction(4, 3) and not res.violations, (name, res.max_ratio)
        inst = res.argmax_instance
        verdicts = {b.theorem: b for b in gap.applicable_bounds(inst.f, inst.x)}
        assert verdicts[name].applies, name
        worst.append(f"{float(res.max_ratio):.4f}")
    return "max ratios " + " ".join(worst)


@criterion(8, "constructions pass the exact pairwise check on 200 marginals each", 60)
def test_criterion_08_constructions():
    rng = random.Random("criterion-8")
    for _ in range(200):
        n = rng.randint(2, 8)
        cuts = sorted(rng.randint(0, 60) for _ in range(n - 1))
        parts = [Fraction(b - a, 60) for a, b in zip([0] + cuts, cuts)]
        lo = max(parts)
        x = parts + [lo + (1 - lo) * Fraction(rng.randint(0, 60), 60)]
        rng.shuffle(x)
        assert dist.check_pairwise_independent(dist.construct_small(x), x), x
        y = [1 - v for v in x]
        assert dist.check_pairwise_independent(dist.construct_large(y), y), y
    for i in range(200):
        p = Fraction(rng.randint(0, 60), 180)
        regime = "small" if i % 2 == 0 else "large"
        q = p if regime == "small" else 1 - p
        assert dist.check_pairwise_independent(dist.identical_n4(q, regime), [q] * 4), q
    return "600/600 pairwise independent"


def _simplex_point(rng: random.Random, den: int = 60) -> list[Fraction]:
    cuts = sorted(rng.randint(0, den) for _ in range(3))
    return [Fraction(b - a, den) for a, b in zip([0] + cuts, cuts)]


@criterion(9, "cylinder dependence signs of the closure and family laws", 60)
def test_criterion_09_cylinders():
    rng = random.Random("criterion-9")
    for _ in range(100):
        x = _simplex_point(rng)  # sum <= 1
        assert dist.cylinder_signature(dist.region_distribution_n3(x, Region.R1), x).all_nonpositive
        y = [1 - v for v in x]  # sum >= 2
        assert dist.cylinder_signature(dist.region_distribution_n3(y, Region.R14), y).all_nonpositive
    for _ in range(100):
        x = [rand_rational(rng, 30) for _ in range(3)]
        lo, hi = cf.omega_bounds_n3(x)
        prod = x[0] * x[1] * x[2]
        assert cf.pairwise_family_n3(x, hi).moment(0b111) <= prod, x
        assert cf.pairwise_family_n3(x, lo).moment(0b111) >= prod, x
    return "400/400 signs"


def _interior_points(rng: random.Random, region: Region, count: int) -> list[list[Fraction]]:
    out = []
    while len(out) < count:
        x = [Fraction(rng.randint(1, 59), 60) for _ in range(3)]
        if cf.region_n3(x, Subpolytope.F3_1) is region:
            out.append(x)
    return out


@criterion(10, "covariance sign table for the region laws", 60)
def test_criterion_10_covariance_signs():
    rng = random.Random("criterion-10")
    both = {Region.R2: set(), Region.R5: set()}
    checked = 0
    for region, expected in dist.SIGN_TABLE_F31.items():
        for x in _interior_points(rng, region, 50):
            signs = dist.covariance_signs(dist.region_distribution_n3(x, region))
            for pair, want in zip([(1, 2), (1, 3), (2, 3)], expected):
                if want is None:
                    disc = dist.sign_discriminant(region, x)
                    want = (disc > 0) - (disc < 0)
                    both[region].add(signs[pair])
                assert signs[pair] == want, (region, x, pair)
                checked += 1
    for region, seen in both.items():
        assert {-1, 1} <= seen, (region, seen)
    return f"{checked} signs, both signs seen on the discriminant rows"


@criterion(11, "unbounded gaps without structure; rank-1 pairwise lower bound n<=10", 30)
def test_criterion_11_unbounded_gap_and_rank1_floor():
    for eps in (Fraction(1, 10), Fraction(1, 100)):
        for case in gap.counterexample_demos(eps):
            ratio = case.f_plus / case.F
            assert ratio == 1 / eps, (case.name, eps, ratio)
    for n in range(2, 11):
        f = uniform_matroid_rank(n, 1)
        x = [Fraction(1, n)] * n
        floor = 1 - Fraction(1, n) + Fraction(1, n * n)
        pp = upper_pairwise(f, x).value
        assert pp >= floor, (n, pp)
        assert pp / multilinear(f, x) >= floor / (1 - (1 - Fraction(1, n)) ** n)
    return "f+/F = 1/eps; f++ >= 1 - 1/n + 1/n^2 up to n = 10"


@criterion(12, "sandwich and vertex consistency on 1000 instances, n <= 6", 120)
def test_criterion_12_invariants():
    rng = random.Random("criterion-12")
    for _ in range(1000):
        n = rng.randint(1, 6)
        f = gap.random_coverage(rng, n, rng.randint(1, 6))
        x = [Fraction(rng.randint(0, 24), 24) for _ in range(n)]
        v = all_extensions(f, x)
        assert v["f_minus"] <= v["f_mm"] <= v["F"] <= v["f_pp"] <= v["f_plus"], (f, x)
        mask = rng.randrange(1 << n)
        at_vertex = all_extensions(f, indicator(n, mask))
        assert set(at_vertex.values()) == {f.values[mask]}, (f, mask)
    return "1000/1000"


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
