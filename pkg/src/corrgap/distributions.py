"""Explicit joint laws with prescribed marginals, and dependence diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import exact_lp
from .closedform import Region
from .extensions import Distribution, as_marginals, pairs
from .rational import RationalLike, fmt, to_fraction
from .setfn import Verdict, elements_of, mask_of, popcount


class ConstructionError(ValueError):
    """A construction's precondition does not hold."""


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


# -- constructions ------------------------------------------------------------


def product_distribution(x: Sequence[RationalLike]) -> Distribution:
    """Mutually independent inclusion with probabilities x."""
    xs = as_marginals(x)
    weights = [Fraction(1)]
    for xi in xs:
        weights = [w * (1 - xi) for w in weights] + [w * xi for w in weights]
    return Distribution.from_weights(len(xs), weights)


def _ascending(xs: Sequence[Fraction]) -> list[int]:
    """0-based indices ordering x ascending (stable)."""
    return sorted(range(len(xs)), key=lambda i: xs[i])


def _complete_tail(y: Sequence[Fraction], special: int) -> dict[int, Fraction]:
    """Weights on sets containing ``special`` with the moments a pairwise
    independent law with marginals y must put there:

    total y_s; for i != s, mass on sets with i equal to y_i y_s; for pairs
    i, j != s, mass on sets with i and j equal to y_i y_j.
    """
    n = len(y)
    others = [i for i in range(n) if i != special]
    masks = [(1 << special) | mask_of(i + 1 for i in sub)
             for r in range(len(others) + 1) for sub in combinations(others, r)]
    rows = [[1] * len(masks)]
    rhs = [y[special]]
    for i in others:
        rows.append([(s >> i) & 1 for s in masks])
        rhs.append(y[i] * y[special])
    for i, j in combinations(others, 2):
        rows.append([(s >> i) & (s >> j) & 1 for s in masks])
        rhs.append(y[i] * y[j])
    lp = exact_lp.LinearProgram.build([0] * len(masks), rows, rhs, "max")
    sol = exact_lp.solve(lp)
    if not sol.optimal:
        raise RuntimeError(
            f"pairwise independent completion infeasible for y={[fmt(v) for v in y]}; "
            "a completion always exists here, so this is a defect"
        )
    return {s: p for s, p in zip(masks, sol.primal) if p}


def construct_small(x: Sequence[RationalLike]) -> Distribution:
    """Pairwise independent law when all but the largest marginal sum to at most 1.

    With x sorted ascending and n the largest: sets without n carry
    P(∅) = (1 - sum_{i<n} x_i)(1 - x_n) and P({i}) = x_i (1 - x_n); the sets
    containing n are filled by an exact feasibility LP.
    """
    xs = as_marginals(x)
    n = len(xs)
    order = _ascending(xs)
    top = order[-1]
    rest = sum((xs[i] for i in order[:-1]), Fraction(0))
    if rest > 1:
        raise ConstructionError(f"the {n - 1} smallest marginals sum to {rest} > 1")
    weights = {0: (1 - rest) * (1 - xs[top])}
    for i in order[:-1]:
        weights[1 << i] = xs[i] * (1 - xs[top])
    weights.update(_complete_tail(xs, top))
    return Distribution.from_weights(n, weights)


def construct_large(x: Sequence[RationalLike]) -> Distribution:
    """Pairwise independent law when all but the smallest marginal sum to at least n - 2.

    With x sorted ascending and 1 the smallest: sets containing 1 carry
    P([n]) = x_1 (sum_{i>=2} x_i - (n - 2)) and P([n] minus i) = x_1 (1 - x_i);
    the sets omitting 1 are filled by an exact feasibility LP.
    """
    xs = as_marginals(x)
    n = len(xs)
    full = (1 << n) - 1
    order = _ascending(xs)
    low = order[0]
    rest = sum((xs[i] for i in order[1:]), Fraction(0))
    if rest < n - 2:
        raise ConstructionError(f"the {n - 1} largest marginals sum to {rest} < {n - 2}")
    weights = {full: xs[low] * (rest - (n - 2))}
    for i in order[1:]:
        weights[full ^ (1 << i)] = xs[low] * (1 - xs[i])
    # sets omitting `low` are complements of sets containing it, with the
    # inclusion moments of 1 - x
    tail = _complete_tail([1 - v for v in xs], low)
    for s, p in tail.items():
        weights[full ^ s] = weights.get(full ^ s, Fraction(0)) + p
    return Distribution.from_weights(n, weights)


def identical_n4(x: RationalLike, regime: str) -> Distribution:
    """Explicit six-atom pairwise independent laws for four inputs of marginal x."""
    p = to_fraction(x)
    if regime == "small":
        if not 0 <= p <= Fraction(1, 3):
            raise ConstructionError(f"small regime needs 0 <= x <= 1/3, got {p}")
        weights = {0: (1 - 3 * p) * (1 - p), 0b1111: p * p}
        for i in range(4):
            weights[1 << i] = p * (1 - p)
    elif regime == "large":
        if not Fraction(2, 3) <= p <= 1:
            raise ConstructionError(f"large regime needs 2/3 <= x <= 1, got {p}")
        weights = {0: (1 - p) ** 2, 0b1111: p * (3 * p - 2)}
        for i in range(4):
            weights[0b1111 ^ (1 << i)] = p * (1 - p)
    else:
        raise ConstructionError(f"regime must be 'small' or 'large', got {regime!r}")
    return Distribution.from_weights(4, weights)


# element relabelings mapping the F3_1 constructions onto the other families
_FAMILY_PERM = {0: (0, 1, 2), 1: (1, 0, 2), 2: (2, 0, 1)}


def _permute(weights: dict[int, Fraction], perm: Sequence[int]) -> dict[int, Fraction]:
    """Send element i (0-based) to perm[i]."""
    out: dict[int, Fraction] = {}
    for s, p in weights.items():
        t = mask_of(perm[e - 1] + 1 for e in elements_of(s))
        out[t] = out.get(t, Fraction(0)) + p
    return out


def region_distribution_n3(x: Sequence[RationalLike], region: Region) -> Distribution:
    """The law attaining the concave closure on ``region`` for functions of that family.

    R1 puts mass on ∅ and singletons, R14 on pairs and [3]; the middle
    regions are four-atom laws (R2..R5 for F3_1; R6..R13 are the same laws
    with the elements relabelled).
    """
    xs = as_marginals(x, 3)
    s = sum(xs)
    r = Region(region)
    if r is Region.R1:
        if s > 1:
            raise ConstructionError(f"x sums to {s} > 1, not in R1")
        return Distribution.from_weights(3, {0: 1 - s, 1: xs[0], 2: xs[1], 4: xs[2]})
    if r is Region.R14:
        if s < 2:
            raise ConstructionError(f"x sums to {s} < 2, not in R14")
        return Distribution.from_weights(
            3, {0b011: 1 - xs[2], 0b101: 1 - xs[1], 0b110: 1 - xs[0], 0b111: s - 2}
        )
    fam, k = divmod(int(r) - 2, 4)
    perm = _FAMILY_PERM[fam]
    # coordinates seen from the F3_1 layout: y_i = x_{perm[i]}
    y1, y2, y3 = (xs[perm[i]] for i in range(3))
    layouts = [
        {0b001: y1, 0b010: 1 - y1 - y3, 0b100: 1 - y1 - y2, 0b110: y1 + y2 + y3 - 1},
        {0b001: 1 - y3, 0b100: 1 - y1 - y2, 0b101: y1 + y3 - 1, 0b110: y2},
        {0b001: 1 - y2, 0b010: 1 - y1 - y3, 0b011: y1 + y2 - 1, 0b110: y3},
        {0b001: 2 - y1 - y2 - y3, 0b011: y1 + y2 - 1, 0b101: y1 + y3 - 1, 0b110: 1 - y1},
    ]
    weights = layouts[k]
    if any(p < 0 for p in weights.values()):
        raise ConstructionError(f"x = {[fmt(v) for v in xs]} is not in region {r}")
    return Distribution.from_weights(3, _permute(weights, perm))


# -- diagnostics ------------------------------------------------------------------


def check_pairwise_independent(d: Distribution, x: Sequence[RationalLike]) -> Verdict:
    """Exact check of marginals and pair moments; witness names the first failure."""
    xs = as_marginals(x, d.n)
    for i in range(d.n):
        if d.moment(1 << i) != xs[i]:
            return Verdict(False, ("marginal", i + 1))
    for i, j in pairs(d.n):
        if d.moment((1 << i) | (1 << j)) != xs[i] * xs[j]:
            return Verdict(False, ("pair", i + 1, j + 1))
    return Verdict(True)


@dataclass(frozen=True)
class CylinderSignature:
    """Signs of P(all of S included) - prod_{i in S} x_i for every |S| >= 2."""

    n: int
    signs: dict[int, int]

    @property
    def all_nonpositive(self) -> bool:
        return all(s <= 0 for s in self.signs.values())

    @property
    def all_nonnegative(self) -> bool:
        return all(s >= 0 for s in self.signs.values())

    @property
    def pairs_zero(self) -> bool:
        return all(s == 0 for m, s in self.signs.items() if popcount(m) == 2)

    def sign(self, subset) -> int:
        return self.signs[mask_of(subset)]

    def to_json(self) -> dict:
        return {",".join(map(str, elements_of(m))): s for m, s in self.signs.items()}


def cylinder_moments(d: Distribution, x: Sequence[RationalLike]) -> dict[int, Fraction]:
    xs = as_marginals(x, d.n)
    out = {}
    for mask in range(1 << d.n):
        if popcount(mask) < 2:
            continue
        prod = Fraction(1)
        for e in elements_of(mask):
            prod *= xs[e - 1]
        out[mask] = d.moment(mask) - prod
    return out


def cylinder_signature(d: Distribution, x: Sequence[RationalLike]) -> CylinderSignature:
    return CylinderSignature(d.n, {m: _sign(v) for m, v in cylinder_moments(d, x).items()})


def covariances(d: Distribution) -> dict[tuple[int, int], Fraction]:
    """Cov(c_i, c_j) for 1-based pairs i < j."""
    xs = d.marginals()
    return {
        (i + 1, j + 1): d.moment((1 << i) | (1 << j)) - xs[i] * xs[j] for i, j in pairs(d.n)
    }


def covariance_signs(d: Distribution) -> dict[tuple[int, int], int]:
    if d.n < 2:
        raise ConstructionError("covariances need at least two elements")
    return {k: _sign(v) for k, v in covariances(d).items()}


# Expected covariance signs of the F3_1 region laws for pairs (1,2), (1,3), (2,3).
# None marks a pair whose sign follows the discriminant in SIGN_DISCRIMINANTS.
SIGN_TABLE_F31 = {
    Region.R1: (-1, -1, -1),
    Region.R2: (-1, -1, None),
    Region.R3: (-1, -1, 1),
    Region.R4: (-1, -1, 1),
    Region.R5: (-1, -1, None),
    Region.R14: (-1, -1, -1),
}


def sign_discriminant(region: Region, x: Sequence[RationalLike]) -> Fraction:
    """Cov(c_2, c_3) of the R2 / R5 laws as a polynomial in x."""
    x1, x2, x3 = as_marginals(x, 3)
    if region is Region.R2:
        return x1 - (1 - x2) * (1 - x3)
    if region is Region.R5:
        return 1 - x1 - x2 * x3
    raise ConstructionError(f"no discriminant for {region}")


def spread_rank1_witness(n: int) -> Distribution:
    """Pairwise independent law with all marginals 1/n on n + 2 atoms.

    P(∅) = P({i}) = 1/n - 1/n^2 and P([n]) = 1/n^2; it includes at least one
    element with probability 1 - 1/n + 1/n^2.
    """
    if n < 2:
        raise ConstructionError("need n >= 2")
    a = Fraction(1, n) - Fraction(1, n * n)
    weights = {0: a, (1 << n) - 1: Fraction(1, n * n)}
    for i in range(n):
        weights[1 << i] = a
    return Distribution.from_weights(n, weights)
