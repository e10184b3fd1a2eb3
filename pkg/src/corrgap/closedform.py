"""Closed-form extension values for small ground sets and symmetric cases.

Every function here has an LP counterpart in :mod:`corrgap.extensions`; the
tests hold the two to exact equality.

The LP-defined extensions commute with affine rescaling ``a + b f`` (b > 0)
because every feasible distribution has total mass one. The n = 2, 3 formulas
are stated for normalized functions (f(∅) = 0, f(full) = 1), so monotone
inputs are normalized first and the result mapped back.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from itertools import permutations
from typing import Callable, NamedTuple, Sequence

from .extensions import DualCertificate, Distribution, as_marginals
from .rational import RationalLike, to_fraction
from .setfn import (
    SetFunction,
    Subpolytope,
    check_monotone,
    check_submodular,
    classify_subpolytope,
    normalize,
)


class ClosedFormError(ValueError):
    pass


def _require_n(f: SetFunction, n: int) -> None:
    if f.n != n:
        raise ClosedFormError(f"this closed form is for n = {n}, got n = {f.n}")


def _monotone_submodular(f: SetFunction) -> None:
    if not check_monotone(f):
        raise ClosedFormError("f is not monotone")
    if not check_submodular(f):
        raise ClosedFormError("f is not submodular")


def _rescaled(f: SetFunction, formula: Callable[[SetFunction], Fraction]) -> Fraction:
    """Evaluate ``formula`` on the normalized copy of a monotone f and undo the scaling."""
    lo, hi = f.values[0], f.values[f.full]
    if hi == lo:
        return lo  # monotone with f(∅) = f(full): constant
    return lo + (hi - lo) * formula(normalize(f))


# -- n = 2 ------------------------------------------------------------------


def f_plus_n2(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """Concave closure for monotone submodular f on two elements."""
    _require_n(f, 2)
    _monotone_submodular(f)
    x1, x2 = as_marginals(x, 2)

    def formula(g: SetFunction) -> Fraction:
        a, b = g((1,)), g((2,))
        return min(a * x1 + b * x2, a + b - 1 + (1 - b) * x1 + (1 - a) * x2)

    return _rescaled(f, formula)


def f_pp_n2(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """Upper pairwise extension on two elements.

    Pairwise independence of two inputs is full independence, so this is the
    multilinear polynomial; for normalized f it reads
    ``f(1) x1 + f(2) x2 + (1 - f(1) - f(2)) x1 x2``. Valid for any f.
    """
    _require_n(f, 2)
    x1, x2 = as_marginals(x, 2)
    e, a, b, ab = f.values
    return e + (a - e) * x1 + (b - e) * x2 + (ab - a - b + e) * x1 * x2


# -- n = 3: dual certificates and regions -----------------------------------------


class Region(enum.IntEnum):
    R1 = 1
    R2 = 2
    R3 = 3
    R4 = 4
    R5 = 5
    R6 = 6
    R7 = 7
    R8 = 8
    R9 = 9
    R10 = 10
    R11 = 11
    R12 = 12
    R13 = 13
    R14 = 14

    def __str__(self) -> str:
        return self.name


# the two pair sums that split the middle band, and the first region index
_FAMILY_SPLIT = {
    Subpolytope.F3_1: ((0, 1), (0, 2), 2),
    Subpolytope.F3_2: ((0, 1), (1, 2), 6),
    Subpolytope.F3_3: ((0, 2), (1, 2), 10),
}

# certificates whose dual objective is tight on each region
FAMILY_DUALS = {
    Subpolytope.F3_1: (2, 3, 4, 5),
    Subpolytope.F3_2: (6, 7, 8, 9),
    Subpolytope.F3_3: (10, 11, 12, 13),
}


def dual_table_n3(f: SetFunction) -> list[DualCertificate]:
    """The fourteen structured dual solutions for n = 3, labelled lambda1..lambda14.

    Entries are (lambda_0, lambda_1, lambda_2, lambda_3) built from singleton
    values and marginals f(i|j). lambda1 and lambda14 are feasible for every
    normalized monotone submodular f; the others only on their family
    (``valid_on``). lambda14 uses f([3]) where a normalized f has 1.
    """
    _require_n(f, 3)
    f1, f2, f3 = f((1,)), f((2,)), f((3,))
    f12, f13, f23, top = f((1, 2)), f((1, 3)), f((2, 3)), f((1, 2, 3))

    def m(i: int, j: int) -> Fraction:
        return f.marginal(i, [j])

    rows = [
        (0, f1, f2, f3),
        (f2 - m(2, 3), f1 - f2 + m(2, 3), m(2, 3), m(3, 2)),
        (f1 - m(1, 3), m(1, 3), m(2, 3), m(3, 1)),
        (f2 - m(2, 1), m(1, 2), m(2, 1), m(3, 2)),
        (f23 - m(3, 1) - m(2, 1), m(2, 1) + f13 - f23, m(2, 1), m(3, 1)),
        (f1 - m(1, 3), m(1, 3), f2 - f1 + m(1, 3), m(3, 1)),
        (f2 - m(2, 3), m(1, 3), m(2, 3), m(3, 2)),
        (f2 - m(2, 1), m(1, 2), m(2, 1), m(3, 1)),
        (f13 - m(1, 2) - m(3, 2), m(1, 2), m(1, 2) + f23 - f13, m(3, 2)),
        (f1 - m(1, 2), m(1, 2), m(2, 1), f3 - f2 + m(2, 1)),
        (f2 - m(2, 3), m(1, 2), m(2, 3), m(3, 2)),
        (f3 - m(3, 1), m(1, 3), m(2, 1), m(3, 1)),
        (f12 - m(1, 3) - m(2, 3), m(1, 3), m(2, 3), m(2, 3) + f13 - f12),
        (f12 + f13 + f23 - 2 * top, top - f23, top - f13, top - f12),
    ]
    valid = {1: "F3", 14: "F3"}
    for family, idx in FAMILY_DUALS.items():
        for k in idx:
            valid[k] = family.value
    return [
        DualCertificate(
            Fraction(r[0]),
            tuple(Fraction(v) for v in r[1:]),
            label=f"lambda{k}",
            valid_on=valid[k],
        )
        for k, r in enumerate(rows, 1)
    ]


def region_n3(x: Sequence[RationalLike], family: Subpolytope) -> Region:
    """Region of [0,1]^3 on which one structured dual is optimal, for the given family.

    R1: sum <= 1; R14: sum >= 2; in between, two pair sums of the family pick
    one of four regions (``<= 1`` versus ``> 1`` each, first pair major).
    """
    xs = as_marginals(x, 3)
    if family not in _FAMILY_SPLIT:
        raise ClosedFormError(f"regions are defined for F3_1..F3_3, got {family}")
    s = sum(xs)
    if s <= 1:
        return Region.R1
    if s >= 2:
        return Region.R14
    (a, b), (c, d), base = _FAMILY_SPLIT[family]
    first = xs[a] + xs[b] > 1
    second = xs[c] + xs[d] > 1
    return Region(base + 2 * first + second)


def designated_dual(region: Region) -> int:
    """Index k of the certificate lambda_k that is tight on ``region``."""
    return int(region)


def f_plus_n3(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """Concave closure for monotone submodular f on three elements.

    The minimum over the canonical family's four dual objectives and those of
    lambda1 and lambda14; each is a valid upper bound and one is tight.
    """
    _require_n(f, 3)
    _monotone_submodular(f)
    xs = as_marginals(x, 3)

    def formula(g: SetFunction) -> Fraction:
        family = classify_subpolytope(g).canonical_f
        if family is None:  # impossible for monotone submodular g
            raise ClosedFormError("f lies in none of F3_1, F3_2, F3_3")
        duals = dual_table_n3(g)
        zeta = min(duals[0].objective(xs), duals[13].objective(xs))
        return min(zeta, *(duals[k - 1].objective(xs) for k in FAMILY_DUALS[family]))

    return _rescaled(f, formula)


# -- n = 3: the pairwise independent family -------------------------------------


class OmegaBounds(NamedTuple):
    low: Fraction
    high: Fraction


def omega_bounds_n3(x: Sequence[RationalLike]) -> OmegaBounds:
    """Range of omega = P(empty set) over pairwise independent laws with marginals x."""
    xs = as_marginals(x, 3)
    x1, x2, x3 = xs
    low = max(Fraction(0), *((1 - xs[i]) * (1 - xs[j] - xs[k]) for i, j, k in permutations(range(3))))
    prod_in = x1 * x2 * x3
    prod_out = (1 - x1) * (1 - x2) * (1 - x3)
    high = min(prod_in + prod_out, (1 - x1) * (1 - x2), (1 - x1) * (1 - x3), (1 - x2) * (1 - x3))
    return OmegaBounds(low, high)


def _family_weights(xs: Sequence[Fraction], omega: Fraction) -> list[Fraction]:
    """Bitmask-indexed weights of the one-parameter family (may be negative off-range)."""
    x1, x2, x3 = xs
    w = [Fraction(0)] * 8
    w[0b000] = omega
    w[0b001] = -omega + (1 - x2) * (1 - x3)
    w[0b010] = -omega + (1 - x1) * (1 - x3)
    w[0b100] = -omega + (1 - x1) * (1 - x2)
    w[0b011] = omega + (x1 + x2 - 1) * (1 - x3)
    w[0b101] = omega + (x1 + x3 - 1) * (1 - x2)
    w[0b110] = omega + (x2 + x3 - 1) * (1 - x1)
    w[0b111] = -omega + x1 * x2 * x3 + (1 - x1) * (1 - x2) * (1 - x3)
    return w


def pairwise_family_n3(x: Sequence[RationalLike], omega: RationalLike) -> Distribution:
    """The pairwise independent law with marginals x and P(empty set) = omega.

    For three inputs these laws form a segment parametrized by omega; every
    atom probability is affine in omega.
    """
    xs = as_marginals(x, 3)
    w0 = to_fraction(omega)
    lo, hi = omega_bounds_n3(xs)
    if not lo <= w0 <= hi:
        raise ClosedFormError(f"omega = {w0} outside [{lo}, {hi}]")
    return Distribution.from_weights(3, _family_weights(xs, w0))


# slope of E[f] in omega: +1 on ∅ and pairs, -1 on singletons and [3]
_OMEGA_SIGN = (1, -1, -1, 1, -1, 1, 1, -1)


def pp_slope_n3(f: SetFunction) -> Fraction:
    """d E[f] / d omega along the family; equals g2 - g1 for normalized f."""
    _require_n(f, 3)
    return sum((s * v for s, v in zip(_OMEGA_SIGN, f.values)), Fraction(0))


def pp_intercept_n3(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """E[f] along the family extrapolated to omega = 0 (the h(x) term)."""
    _require_n(f, 3)
    xs = as_marginals(x, 3)
    return sum((w * v for w, v in zip(_family_weights(xs, Fraction(0)), f.values)), Fraction(0))


def h_polynomial_n3(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """The intercept written out for normalized f, with g1 = 1 + sum f(i), g2 = sum f(i,j)."""
    _require_n(f, 3)
    xs = as_marginals(x, 3)
    single = [f((i,)) for i in (1, 2, 3)]
    g1 = 1 + sum(single)
    g2 = f((1, 2)) + f((1, 3)) + f((2, 3))
    total = sum((xi * fi for xi, fi in zip(xs, single)), Fraction(0))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        total -= xs[i] * xs[j] * (single[i] + single[j] - f((i + 1, j + 1)))
    x1, x2, x3 = xs
    total -= (g2 - g1) * (x1 * x2 * x3 + (1 - x1) * (1 - x2) * (1 - x3))
    return total


def optimal_omega_n3(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """Endpoint of the omega range maximizing E[f]; the lower one on ties."""
    bounds = omega_bounds_n3(x)
    return bounds.high if pp_slope_n3(f) > 0 else bounds.low


def f_pp_n3(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """Upper pairwise extension on three elements, for any f.

    E[f] is affine in omega over the feasible segment, so the maximum sits at
    an endpoint: intercept + max over {low, high} of slope * omega.
    """
    _require_n(f, 3)
    xs = as_marginals(x, 3)
    return pp_intercept_n3(f, xs) + pp_slope_n3(f) * optimal_omega_n3(f, xs)


def f_pp_n3_witness(f: SetFunction, x: Sequence[RationalLike]) -> Distribution:
    return pairwise_family_n3(x, optimal_omega_n3(f, x))


# -- symmetric families -----------------------------------------------------------


def f_pp_rank1(x: Sequence[RationalLike]) -> Fraction:
    """Upper pairwise extension of min(|S|, 1) for any n."""
    xs = as_marginals(x)
    top = max(xs)
    return min(Fraction(1), sum(xs) * (1 - top) + top * top)


def _check_knp(n: int, k: int, p: Fraction) -> None:
    if not 1 <= k <= n:
        raise ClosedFormError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0 <= p <= 1:
        raise ClosedFormError(f"p = {p} outside [0, 1]")


def expected_excess_bounds(n: int, k: int, p: RationalLike) -> tuple[Fraction, Fraction]:
    """Lower bounds on E[(|S| - k)^+] for n inputs of marginal p.

    First under arbitrary dependence, second under pairwise independence.
    """
    q = to_fraction(p)
    _check_knp(n, k, q)
    excess = max(n * q - k, Fraction(0))
    return excess, max(excess, q * ((n * q - k) + (1 - q)))


def kuniform_identical(n: int, k: int, p: RationalLike) -> tuple[Fraction, Fraction]:
    """(f_plus, f_pp) for the rank of the k-uniform matroid at x = (p, ..., p)."""
    q = to_fraction(p)
    _, pairwise = expected_excess_bounds(n, k, q)
    return min(n * q, Fraction(k)), n * q - pairwise


def kuniform_ratio_bound(k: int) -> Fraction:
    return Fraction(4 * k, 4 * k - 1)


# -- elementary inequalities used by the n = 3 argument -----------------------------


def ineq_i1(a: Fraction, b: Fraction) -> Fraction:
    """a + b - 4ab, nonnegative when a + b <= 1."""
    return a + b - 4 * a * b


def ineq_i2(a: Fraction, b: Fraction) -> Fraction:
    """4a + 4b - 4ab - 3, nonnegative when a + b >= 1."""
    return 4 * a + 4 * b - 4 * a * b - 3


def ineq_i3(a: Fraction, b: Fraction, c: Fraction) -> Fraction:
    """a + b - 4ab / c, nonnegative when a + b <= c <= 1."""
    return a + b - 4 * a * b / c


def structured_duals_n3(f: SetFunction) -> list[DualCertificate]:
    """:func:`dual_table_n3` for any monotone f, mapped back from its normalized copy."""
    _require_n(f, 3)
    if not check_monotone(f):
        raise ClosedFormError("f is not monotone")
    lo, hi = f.values[0], f.values[f.full]
    if hi == lo:
        raise ClosedFormError("f is constant; the structured duals are degenerate")
    return [
        DualCertificate(
            lo + (hi - lo) * c.lambda0,
            tuple((hi - lo) * v for v in c.lambda_i),
            label=c.label,
            valid_on=c.valid_on,
        )
        for c in dual_table_n3(normalize(f))
    ]
