"""Correlation-gap reports, bound applicability, and the randomized ratio scan.

The three ratios reported are f+/F (cost of ignoring all correlation),
f+/f++ (cost of assuming only pairwise independence) and f++/F. Every ratio
uses the 0/0 = 1 convention.
"""

from __future__ import annotations

import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Sequence

from . import closedform as cf
from .extensions import (
    DualCertificate,
    Distribution,
    as_marginals,
    concave_closure,
    convex_closure,
    lower_pairwise,
    multilinear,
    upper_pairwise,
)
from .rational import RationalLike, fmt, ratio, to_fraction
from .setfn import (
    EXTREMAL_N3,
    SetFunction,
    SubpolytopeLabels,
    check_monotone,
    check_submodular,
    classify_subpolytope,
    from_set_order,
    make_setfn,
    normalize,
    uniform_matroid_rank,
    weighted_coverage,
)

FOUR_THIRDS = Fraction(4, 3)
E_RATIO_OVERESTIMATE = Fraction(1582, 1000)


# -- e / (e - 1) -------------------------------------------------------------------


def e_enclosure(terms: int = 40) -> tuple[Fraction, Fraction]:
    """Rational lo < e < hi from the factorial series and its tail bound."""
    lo = sum((Fraction(1, factorial(k)) for k in range(terms + 1)), Fraction(0))
    return lo, lo + Fraction(1, factorial(terms) * terms)


def e_ratio_enclosure(terms: int = 40) -> tuple[Fraction, Fraction]:
    """Rational enclosure of e/(e-1); the map is decreasing in e."""
    lo, hi = e_enclosure(terms)
    return hi / (hi - 1), lo / (lo - 1)


# -- bound verdicts -------------------------------------------------------------------


@dataclass(frozen=True)
class BoundVerdict:
    theorem: str
    applies: bool
    bound: Fraction
    ratio: str  # which ratio the bound is on
    holds: bool | None = None  # filled in by gap_report when applies

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "applies": self.applies,
            "bound": fmt(self.bound),
            "ratio": self.ratio,
            "holds": self.holds,
        }


def _kuniform_level(f: SetFunction) -> int | None:
    """k if f is min(|S|, k) or min(|S|, k)/k, else None."""
    for k in range(1, f.n + 1):
        rank = uniform_matroid_rank(f.n, k)
        if f.values == rank.values or f.values == tuple(v / k for v in rank.values):
            return k
    return None


def applicable_bounds(
    f: SetFunction, x: Sequence[RationalLike], e_bound: Fraction = E_RATIO_OVERESTIMATE
) -> list[BoundVerdict]:
    """Which proven bounds cover (f, x), decided exactly from their hypotheses.

    Every bound below assumes f monotone submodular; hypotheses on x that
    refer to a sorted order use ascending order.
    """
    xs = as_marginals(x, f.n)
    n = f.n
    ms = bool(check_monotone(f)) and bool(check_submodular(f))
    asc = sorted(xs)
    total = sum(xs)
    identical = len(set(xs)) == 1
    singles = [f((i + 1,)) for i in range(n)]
    top_x = max(xs)
    k = _kuniform_level(f)

    def v(name, hypothesis, bound, on="f_plus/f_pp"):
        return BoundVerdict(name, ms and hypothesis, bound, on)

    out = [
        v("mutual-independence-gap", True, e_bound, "f_plus/F"),
        v("rank1-closed-form", k == 1, FOUR_THIRDS),
        v("three-or-fewer-elements", n <= 3, FOUR_THIRDS),
        v("small-probabilities", sum(asc[:-1]) <= 1 and asc[-1] <= Fraction(1, 4), FOUR_THIRDS),
        v("large-probabilities", sum(asc[1:]) >= n - 2 and asc[0] >= Fraction(3, 4), FOUR_THIRDS),
        v(
            "simplex-max-singleton",
            total <= 1 and any(xs[i] == top_x and singles[i] == max(singles) for i in range(n)),
            FOUR_THIRDS,
        ),
        v("simplex-equal-singletons", total <= 1 and len(set(singles)) == 1, FOUR_THIRDS),
        v(
            "identical-extreme-marginals",
            n >= 2 and identical and (xs[0] <= Fraction(1, n - 1) or xs[0] >= Fraction(n - 2, n - 1)),
            FOUR_THIRDS,
        ),
        v(
            "k-uniform-identical",
            k is not None and identical,
            cf.kuniform_ratio_bound(k) if k else FOUR_THIRDS,
        ),
    ]
    return out


# -- gap report --------------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    f: SetFunction
    x: tuple[Fraction, ...]
    F: Fraction
    f_plus: Fraction
    f_pp: Fraction
    f_minus: Fraction
    f_mm: Fraction
    ratio_plus_over_F: Fraction
    ratio_plus_over_pp: Fraction
    ratio_pp_over_F: Fraction
    closed_forms: dict[str, Fraction]
    regions: dict[str, str]
    subpolytopes: SubpolytopeLabels | None
    witnesses: dict[str, Distribution]
    certificates: dict[str, DualCertificate]
    bounds: list[BoundVerdict]

    def to_json(self) -> dict:
        return {
            "n": self.f.n,
            "f": self.f.to_json(),
            "x": [fmt(v) for v in self.x],
            "F": fmt(self.F),
            "f_plus": fmt(self.f_plus),
            "f_pp": fmt(self.f_pp),
            "f_minus": fmt(self.f_minus),
            "f_mm": fmt(self.f_mm),
            "ratio_plus_over_F": fmt(self.ratio_plus_over_F),
            "ratio_plus_over_pp": fmt(self.ratio_plus_over_pp),
            "ratio_pp_over_F": fmt(self.ratio_pp_over_F),
            "closed_forms": {k: fmt(v) for k, v in self.closed_forms.items()},
            "regions": self.regions,
            "subpolytopes": self.subpolytopes.to_json() if self.subpolytopes else None,
            "witnesses": {k: d.to_json() for k, d in self.witnesses.items()},
            "certificates": {k: c.to_json() for k, c in self.certificates.items()},
            "applicable_bounds": [b.to_json() for b in self.bounds],
        }


def closed_form_values(f: SetFunction, x: Sequence[Fraction]) -> dict[str, Fraction]:
    """Every closed form that applies to (f, x), keyed by the extension it computes."""
    out: dict[str, Fraction] = {}
    ms = bool(check_monotone(f)) and bool(check_submodular(f))
    if f.n == 2:
        out["f_pp"] = cf.f_pp_n2(f, x)
        if ms:
            out["f_plus"] = cf.f_plus_n2(f, x)
    elif f.n == 3:
        out["f_pp"] = cf.f_pp_n3(f, x)
        if ms:
            out["f_plus"] = cf.f_plus_n3(f, x)
    if f.values == uniform_matroid_rank(f.n, 1).values:
        out["f_pp_rank1"] = cf.f_pp_rank1(x)
    return out


def _bound_holds(b: BoundVerdict, r_pF: Fraction, r_ppp: Fraction) -> bool | None:
    if b.ratio == "f_plus/F":
        lo, hi = e_ratio_enclosure()
        if r_pF <= lo:
            return True
        if r_pF > hi:
            return False
        return None  # inside the enclosure: undecided
    return r_ppp <= b.bound


def gap_report(
    f: SetFunction,
    x: Sequence[RationalLike],
    e_bound: Fraction = E_RATIO_OVERESTIMATE,
    cap: int | None = None,
) -> GapReport:
    """All extensions, ratios, labels and bound verdicts for one instance.

    ``cap`` overrides the default ground-size limits of the LPs.
    """
    xs = as_marginals(x, f.n)
    if e_bound < e_ratio_enclosure()[1]:
        raise ValueError(f"e_bound {e_bound} is not above e/(e-1)")
    caps = {} if cap is None else {"cap": cap}
    F = multilinear(f, xs)
    plus = concave_closure(f, xs, **caps)
    pp = upper_pairwise(f, xs, **caps)
    minus = convex_closure(f, xs, **caps)
    mm = lower_pairwise(f, xs, **caps)
    r_pF = ratio(plus.value, F)
    r_ppp = ratio(plus.value, pp.value)
    r_ppF = ratio(pp.value, F)

    regions: dict[str, str] = {}
    labels = None
    if f.n == 3:
        for fam in cf.FAMILY_DUALS:
            regions[fam.value] = str(cf.region_n3(xs, fam))
        lo_v, hi_v = f.values[0], f.values[f.full]
        if check_monotone(f) and hi_v > lo_v:
            labels = classify_subpolytope(normalize(f))

    bounds = []
    for b in applicable_bounds(f, xs, e_bound):
        holds = _bound_holds(b, r_pF, r_ppp) if b.applies else None
        bounds.append(BoundVerdict(b.theorem, b.applies, b.bound, b.ratio, holds))

    return GapReport(
        f=f,
        x=xs,
        F=F,
        f_plus=plus.value,
        f_pp=pp.value,
        f_minus=minus.value,
        f_mm=mm.value,
        ratio_plus_over_F=r_pF,
        ratio_plus_over_pp=r_ppp,
        ratio_pp_over_F=r_ppF,
        closed_forms=closed_form_values(f, xs),
        regions=regions,
        subpolytopes=labels,
        witnesses={"f_plus": plus.witness, "f_pp": pp.witness, "f_minus": minus.witness, "f_mm": mm.witness},
        certificates={
            "f_plus": plus.certificate,
            "f_pp": pp.certificate,
            "f_minus": minus.certificate,
            "f_mm": mm.certificate,
        },
        bounds=bounds,
    )


# -- instance generators ---------------------------------------------------------------

GRID = 24  # denominator of random marginals
DIRICHLET_GRID = 60


@dataclass(frozen=True)
class Instance:
    f: SetFunction
    x: tuple[Fraction, ...]
    params: dict = field(default_factory=dict)


def _grid_x(rng: random.Random, n: int, den: int = GRID) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(0, den), den) for _ in range(n))


def _simplex_weights(rng: random.Random, parts: int, den: int = DIRICHLET_GRID) -> list[Fraction]:
    """Uniform point of the discretized simplex (spacings of sorted uniform cuts)."""
    cuts = sorted(rng.randint(0, den) for _ in range(parts - 1))
    edges = [0, *cuts, den]
    return [Fraction(b - a, den) for a, b in zip(edges, edges[1:])]


def gen_extremal_mix_n3(rng: random.Random) -> Instance:
    w = _simplex_weights(rng, len(EXTREMAL_N3))
    table = [Fraction(0)] * 8
    for wk, vec in zip(w, EXTREMAL_N3.values()):
        for i, v in enumerate(vec):
            table[i] += wk * Fraction(v)
    return Instance(from_set_order(3, table), _grid_x(rng, 3), {"n": 3})


def random_coverage(rng: random.Random, n: int, m: int) -> SetFunction:
    weights = [rng.randint(1, 10) for _ in range(m)]
    covers = [[j + 1 for j in range(m) if rng.random() < 0.5] for _ in range(n)]
    return weighted_coverage(n, weights, covers)


def gen_coverage_random(rng: random.Random, n: int, m: int) -> Instance:
    return Instance(random_coverage(rng, n, m), _grid_x(rng, n), {"n": n, "m": m})


def gen_matroid_rank(rng: random.Random, n: int, k: int) -> Instance:
    return Instance(uniform_matroid_rank(n, k), _grid_x(rng, n), {"n": n, "k": k})


def _pick_n(rng: random.Random, n: int | None) -> int:
    return n if n is not None else rng.randint(2, 8)


def _small_profile(rng: random.Random, n: int) -> list[Fraction]:
    """x with max <= 1/4 and all but the largest summing to at most 1."""
    xs = [Fraction(rng.randint(0, GRID), 4 * GRID) for _ in range(n)]
    s = sum(sorted(xs)[:-1])
    if s > 1:
        xs = [v / s for v in xs]
    return xs


def gen_small_probabilities(rng: random.Random, n: int | None = None) -> Instance:
    n = _pick_n(rng, n)
    f = random_coverage(rng, n, n + 2)
    return Instance(f, tuple(_small_profile(rng, n)), {"n": n})


def gen_large_probabilities(rng: random.Random, n: int | None = None) -> Instance:
    n = _pick_n(rng, n)
    f = random_coverage(rng, n, n + 2)
    return Instance(f, tuple(1 - v for v in _small_profile(rng, n)), {"n": n})


def gen_simplex_max_singleton(rng: random.Random, n: int | None = None) -> Instance:
    n = _pick_n(rng, n)
    f = random_coverage(rng, n, n + 2)
    w = sorted(_simplex_weights(rng, n + 1, GRID)[:n])  # sum <= 1
    singles = [f((i + 1,)) for i in range(n)]
    best = max(range(n), key=lambda i: (singles[i], -i))
    others = [i for i in range(n) if i != best]
    rng.shuffle(others)
    x = [Fraction(0)] * n
    x[best] = w[-1]
    for i, v in zip(others, w[:-1]):
        x[i] = v
    return Instance(f, tuple(x), {"n": n})


def gen_simplex_equal_singletons(rng: random.Random, n: int | None = None) -> Instance:
    n = _pick_n(rng, n)
    m = n + 2
    r = rng.randint(1, m)
    covers = [sorted(rng.sample(range(1, m + 1), r)) for _ in range(n)]
    f = weighted_coverage(n, [1] * m, covers)
    x = _simplex_weights(rng, n + 1, GRID)[:n]
    return Instance(f, tuple(x), {"n": n})


def gen_identical_extreme(rng: random.Random, n: int | None = None) -> Instance:
    n = _pick_n(rng, n)
    f = random_coverage(rng, n, n + 2)
    t = Fraction(rng.randint(0, GRID), GRID * max(n - 1, 1))
    p = t if rng.random() < 0.5 else 1 - t
    return Instance(f, (p,) * n, {"n": n})


_GENERATORS: dict[str, tuple[Callable[..., Instance], int, int]] = {
    # name: (function, min params, max params)
    "extremal-mix-n3": (gen_extremal_mix_n3, 0, 0),
    "coverage-random": (gen_coverage_random, 2, 2),
    "matroid-rank": (gen_matroid_rank, 2, 2),
    "small-probabilities": (gen_small_probabilities, 0, 1),
    "large-probabilities": (gen_large_probabilities, 0, 1),
    "simplex-max-singleton": (gen_simplex_max_singleton, 0, 1),
    "simplex-equal-singletons": (gen_simplex_equal_singletons, 0, 1),
    "identical-extreme-marginals": (gen_identical_extreme, 0, 1),
}

GENERATOR_NAMES = tuple(_GENERATORS)

_SPEC = re.compile(r"^([a-z0-9-]+)(?:\(([0-9,\s]*)\))?$")


def parse_generator(spec: str) -> tuple[str, tuple[int, ...]]:
    """``"coverage-random(5,4)"`` -> ("coverage-random", (5, 4))."""
    m = _SPEC.match(spec.strip())
    if not m or m.group(1) not in _GENERATORS:
        raise ValueError(f"unknown generator {spec!r}; choose from {', '.join(GENERATOR_NAMES)}")
    name = m.group(1)
    args = tuple(int(a) for a in (m.group(2) or "").split(",") if a.strip())
    _, lo, hi = _GENERATORS[name]
    if not lo <= len(args) <= hi:
        raise ValueError(f"{name} takes between {lo} and {hi} integer parameters, got {len(args)}")
    return name, args


def instance_rng(seed: int, index: int) -> random.Random:
    """Independent stream per instance, so results never depend on scheduling."""
    return random.Random(f"{seed}:{index}")


def make_instance(spec: str, seed: int, index: int) -> Instance:
    name, args = parse_generator(spec)
    return _GENERATORS[name][0](instance_rng(seed, index), *args)


# -- scan ------------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    index: int
    f_plus: Fraction
    f_pp: Fraction
    ratio: Fraction
    params: dict


@dataclass(frozen=True)
class ScanResult:
    generator: str
    seed: int
    bound: Fraction
    instances_evaluated: int
    max_ratio: Fraction
    argmax_index: int
    argmax_instance: Instance
    violations: tuple[ScanRow, ...]
    rows: tuple[ScanRow, ...]

    def to_json(self) -> dict:
        inst = self.argmax_instance
        return {
            "generator": self.generator,
            "seed": self.seed,
            "bound": fmt(self.bound),
            "instances_evaluated": self.instances_evaluated,
            "max_ratio": fmt(self.max_ratio),
            "argmax": {"index": self.argmax_index, "f": inst.f.to_json(), "x": [fmt(v) for v in inst.x]},
            "violations": [
                {"index": r.index, "ratio": fmt(r.ratio), "f_plus": fmt(r.f_plus), "f_pp": fmt(r.f_pp)}
                for r in self.violations
            ],
        }

    def csv_rows(self) -> list[list[str]]:
        header = ["index", "ratio_num", "ratio_den", "params"]
        body = [
            [
                str(r.index),
                str(r.ratio.numerator),
                str(r.ratio.denominator),
                ";".join(f"{k}={v}" for k, v in sorted(r.params.items())),
            ]
            for r in self.rows
        ]
        return [header, *body]


def evaluate(inst: Instance, index: int = 0) -> ScanRow:
    plus = concave_closure(inst.f, inst.x).value
    pp = upper_pairwise(inst.f, inst.x).value
    return ScanRow(index, plus, pp, ratio(plus, pp), inst.params)


def _evaluate_generated(job: tuple[str, int, int]) -> ScanRow:
    spec, seed, index = job
    return evaluate(make_instance(spec, seed, index), index)


def _collect(
    label: str, seed: int, lookup: Callable[[int], Instance], rows: list[ScanRow], bound
) -> ScanResult:
    if not rows:
        raise ValueError("scan needs at least one instance")
    rows.sort(key=lambda r: r.index)
    best = max(rows, key=lambda r: (r.ratio, -r.index))
    return ScanResult(
        generator=label,
        seed=seed,
        bound=bound,
        instances_evaluated=len(rows),
        max_ratio=best.ratio,
        argmax_index=best.index,
        argmax_instance=lookup(best.index),
        violations=tuple(r for r in rows if r.ratio > bound),
        rows=tuple(rows),
    )


def scan(
    generator: str,
    count: int,
    seed: int,
    workers: int = 1,
    bound: Fraction = FOUR_THIRDS,
) -> ScanResult:
    """Evaluate f+/f++ by LP on ``count`` generated instances."""
    if count < 1:
        raise ValueError("count must be positive")
    parse_generator(generator)
    jobs = [(generator, seed, i) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_generated, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        rows = [_evaluate_generated(j) for j in jobs]
    return _collect(generator, seed, lambda i: make_instance(generator, seed, i), rows, bound)


def scan_corpus(
    corpus: Iterable[tuple[SetFunction, Sequence[RationalLike]]], bound: Fraction = FOUR_THIRDS
) -> ScanResult:
    instances = [Instance(f, as_marginals(x, f.n), {"n": f.n}) for f, x in corpus]
    rows = [evaluate(inst, i) for i, inst in enumerate(instances)]
    return _collect("corpus", 0, instances.__getitem__, rows, bound)


# -- unbounded gaps without monotonicity or submodularity ----------------------------------


@dataclass(frozen=True)
class CounterexampleCase:
    name: str
    f: SetFunction
    x: tuple[Fraction, ...]
    f_plus: Fraction
    F: Fraction
    ratio: Fraction
    expected_f_plus: Fraction
    expected_F: Fraction

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "f": self.f.to_json(),
            "x": [fmt(v) for v in self.x],
            "f_plus": fmt(self.f_plus),
            "F": fmt(self.F),
            "ratio": fmt(self.ratio),
            "expected_f_plus": fmt(self.expected_f_plus),
            "expected_F": fmt(self.expected_F),
        }


def counterexample_demos(epsilon: RationalLike, eta: RationalLike = 1) -> list[CounterexampleCase]:
    """Two-element functions whose f+/F equals 1/epsilon.

    One is submodular but not monotone (value eta on {1} only, x = (eps, 1-eps));
    the other is monotone but not submodular (value eta on {1,2} only, x = (eps, eps)).
    """
    eps, h = to_fraction(epsilon), to_fraction(eta)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {eps}")
    if h <= 0:
        raise ValueError(f"eta must be positive, got {h}")
    cases = [
        ("non-monotone", make_setfn(2, [0, h, 0, 0]), (eps, 1 - eps)),
        ("non-submodular", make_setfn(2, [0, 0, 0, h]), (eps, eps)),
    ]
    out = []
    for name, f, x in cases:
        plus = concave_closure(f, x).value
        F = multilinear(f, x)
        out.append(CounterexampleCase(name, f, x, plus, F, ratio(plus, F), h * eps, h * eps * eps))
    return out
