"""Continuous extensions of set functions.

* ``multilinear``      expected value under mutually independent inputs
* ``concave_closure``  max expected value over all joint laws with marginals x
* ``upper_pairwise``   the same max restricted to pairwise independent laws
* ``convex_closure`` / ``lower_pairwise``  the corresponding minima

The four LP-defined extensions return the optimal distribution found by the
simplex and the optimal dual vector as a certificate; both are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import exact_lp
from .rational import RationalLike, fmt, fractions, to_fraction
from .setfn import SetFunction, Verdict, elements_of, mask_of

MAX_N_PLUS = 12
MAX_N_PAIRWISE = 10

MarginalVector = tuple[Fraction, ...]


class CapExceeded(ValueError):
    """Ground set too large for the exhaustive LP."""


class ExtensionError(ValueError):
    pass


def as_marginals(x: Sequence[RationalLike], n: int | None = None) -> MarginalVector:
    xs = fractions(x)
    if n is not None and len(xs) != n:
        raise ExtensionError(f"marginal vector has length {len(xs)}, expected {n}")
    for i, v in enumerate(xs, 1):
        if not 0 <= v <= 1:
            raise ExtensionError(f"x_{i} = {v} is outside [0, 1]")
    return xs


def indicator(n: int, subset: Iterable[int] | int) -> MarginalVector:
    mask = subset if isinstance(subset, int) else mask_of(subset)
    return tuple(Fraction((mask >> i) & 1) for i in range(n))


def pairs(n: int) -> list[tuple[int, int]]:
    """0-based index pairs (i, j), i < j, in lexicographic order."""
    return list(combinations(range(n), 2))


# -- distributions ------------------------------------------------------------


@dataclass(frozen=True)
class Distribution:
    """Finite law on subsets of [n]: bitmask -> positive probability summing to 1."""

    n: int
    support: Mapping[int, Fraction]

    def __post_init__(self) -> None:
        full = 1 << self.n
        total = Fraction(0)
        for mask, p in self.support.items():
            if not 0 <= mask < full:
                raise ExtensionError(f"atom {mask} is not a subset of [{self.n}]")
            if p <= 0:
                raise ExtensionError(f"atom {elements_of(mask)} has probability {p} <= 0")
            total += p
        if total != 1:
            raise ExtensionError(f"probabilities sum to {total}, not 1")

    @classmethod
    def from_weights(cls, n: int, weights: Mapping[int, RationalLike] | Sequence) -> "Distribution":
        """Build from a mask->weight mapping (or dense list); zero atoms are dropped."""
        items = weights.items() if isinstance(weights, Mapping) else enumerate(weights)
        support: dict[int, Fraction] = {}
        for mask, p in items:
            q = to_fraction(p)
            if q < 0:
                raise ExtensionError(f"atom {elements_of(mask)} has negative weight {q}")
            if q:
                support[mask] = support.get(mask, Fraction(0)) + q
        return cls(n, dict(sorted(support.items())))

    def prob(self, subset: Iterable[int] | int) -> Fraction:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return self.support.get(mask, Fraction(0))

    def moment(self, subset: Iterable[int] | int) -> Fraction:
        """P(every element of the subset is included)."""
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return sum((p for s, p in self.support.items() if s & mask == mask), Fraction(0))

    def marginals(self) -> MarginalVector:
        return tuple(self.moment(1 << i) for i in range(self.n))

    def expectation(self, f: SetFunction) -> Fraction:
        if f.n != self.n:
            raise ExtensionError("distribution and set function sizes differ")
        return sum((p * f.values[s] for s, p in self.support.items()), Fraction(0))

    def complement(self) -> "Distribution":
        full = (1 << self.n) - 1
        return Distribution.from_weights(self.n, {full ^ s: p for s, p in self.support.items()})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "atoms": [{"set": s, "p": fmt(p)} for s, p in sorted(self.support.items())],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Distribution":
        return cls.from_weights(int(doc["n"]), {int(a["set"]): a["p"] for a in doc["atoms"]})


# -- dual certificates ----------------------------------------------------------


@dataclass(frozen=True)
class DualCertificate:
    """Dual vector (lambda_0, lambda_i, optional lambda_ij).

    An ``upper`` certificate satisfies ``lambda_0 + sum_{i in S} lambda_i
    + sum_{i<j in S} lambda_ij >= f(S)`` for every S and bounds the max
    extensions from above; a ``lower`` one satisfies ``<=`` and bounds the min
    extensions from below. ``lambda_ij`` is ordered as :func:`pairs`.
    """

    lambda0: Fraction
    lambda_i: tuple[Fraction, ...]
    lambda_ij: tuple[Fraction, ...] | None = None
    sense: str = "upper"
    label: str | None = None
    valid_on: str | None = None

    @property
    def n(self) -> int:
        return len(self.lambda_i)

    def level(self, mask: int) -> Fraction:
        """Dual left-hand side evaluated at subset ``mask``."""
        total = self.lambda0 + sum(
            (l for i, l in enumerate(self.lambda_i) if mask >> i & 1), Fraction(0)
        )
        if self.lambda_ij is not None:
            for (i, j), l in zip(pairs(self.n), self.lambda_ij):
                if mask >> i & 1 and mask >> j & 1:
                    total += l
        return total

    def objective(self, x: Sequence[RationalLike]) -> Fraction:
        xs = fractions(x)
        total = self.lambda0 + sum((l * xi for l, xi in zip(self.lambda_i, xs)), Fraction(0))
        if self.lambda_ij is not None:
            for (i, j), l in zip(pairs(self.n), self.lambda_ij):
                total += l * xs[i] * xs[j]
        return total

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.lambda0, *self.lambda_i) + tuple(self.lambda_ij or ())

    def to_json(self) -> dict:
        doc = {
            "lambda0": fmt(self.lambda0),
            "lambda_i": [fmt(v) for v in self.lambda_i],
            "sense": self.sense,
        }
        if self.lambda_ij is not None:
            doc["lambda_ij"] = {
                f"{i + 1},{j + 1}": fmt(v) for (i, j), v in zip(pairs(self.n), self.lambda_ij)
            }
        if self.label:
            doc["label"] = self.label
        if self.valid_on:
            doc["valid_on"] = self.valid_on
        return doc


def check_dual_feasible(f: SetFunction, cert: DualCertificate) -> Verdict:
    """Exhaustive check of the dual constraints; witness is a violating subset."""
    if cert.n != f.n:
        raise ExtensionError(f"certificate is for n={cert.n}, function has n={f.n}")
    for mask in range(1 << f.n):
        lhs = cert.level(mask)
        bad = lhs < f.values[mask] if cert.sense == "upper" else lhs > f.values[mask]
        if bad:
            return Verdict(False, elements_of(mask))
    return Verdict(True)


# -- the extensions ---------------------------------------------------------------


class Extension(NamedTuple):
    value: Fraction
    witness: Distribution
    certificate: DualCertificate


def multilinear(f: SetFunction, x: Sequence[RationalLike]) -> Fraction:
    """sum_S f(S) prod_{i in S} x_i prod_{i not in S} (1 - x_i), exactly."""
    xs = as_marginals(x, f.n)
    # weights[mask] built one element at a time
    weights = [Fraction(1)]
    for xi in xs:
        weights = [w * (1 - xi) for w in weights] + [w * xi for w in weights]
    return sum((w * v for w, v in zip(weights, f.values) if v), Fraction(0))


@lru_cache(maxsize=None)
def _moment_matrix(n: int, pairwise: bool) -> tuple[tuple[Fraction, ...], ...]:
    full = 1 << n
    one, zero = Fraction(1), Fraction(0)
    rows = [tuple(one for _ in range(full))]
    for i in range(n):
        rows.append(tuple(one if s >> i & 1 else zero for s in range(full)))
    if pairwise:
        for i, j in pairs(n):
            rows.append(tuple(one if (s >> i & 1 and s >> j & 1) else zero for s in range(full)))
    return tuple(rows)


def moment_targets(x: MarginalVector, pairwise: bool) -> tuple[Fraction, ...]:
    rhs = [Fraction(1), *x]
    if pairwise:
        rhs.extend(x[i] * x[j] for i, j in pairs(len(x)))
    return tuple(rhs)


def extension_lp(
    f: SetFunction, x: Sequence[RationalLike], pairwise: bool, sense: str = "max"
) -> exact_lp.LinearProgram:
    """The primal LP over theta(S): total mass 1, marginals x (and x_i x_j)."""
    xs = as_marginals(x, f.n)
    return exact_lp.LinearProgram(
        f.values, _moment_matrix(f.n, pairwise), moment_targets(xs, pairwise), sense
    )


def _solve_extension(f, x, pairwise: bool, sense: str, cap: int) -> Extension:
    if f.n > cap:
        raise CapExceeded(f"n = {f.n} exceeds the ground-size cap {cap}")
    lp = extension_lp(f, x, pairwise, sense)
    sol = exact_lp.solve(lp)
    if not sol.optimal:
        # always feasible (the product law) and bounded (finite polytope)
        raise RuntimeError(f"extension LP returned {sol.status}; this is a solver defect")
    n = f.n
    y = sol.dual
    cert = DualCertificate(
        y[0],
        tuple(y[1 : n + 1]),
        tuple(y[n + 1 :]) if pairwise else None,
        sense="upper" if sense == "max" else "lower",
    )
    witness = Distribution.from_weights(n, {s: p for s, p in enumerate(sol.primal) if p})
    return Extension(sol.value, witness, cert)


def concave_closure(f: SetFunction, x: Sequence[RationalLike], cap: int = MAX_N_PLUS) -> Extension:
    return _solve_extension(f, x, False, "max", cap)


def upper_pairwise(f: SetFunction, x: Sequence[RationalLike], cap: int = MAX_N_PAIRWISE) -> Extension:
    return _solve_extension(f, x, True, "max", cap)


def convex_closure(f: SetFunction, x: Sequence[RationalLike], cap: int = MAX_N_PLUS) -> Extension:
    return _solve_extension(f, x, False, "min", cap)


def lower_pairwise(f: SetFunction, x: Sequence[RationalLike], cap: int = MAX_N_PAIRWISE) -> Extension:
    return _solve_extension(f, x, True, "min", cap)


def all_extensions(f: SetFunction, x: Sequence[RationalLike]) -> dict[str, Fraction]:
    """Values of all five extensions, keyed F, f_plus, f_pp, f_minus, f_mm."""
    return {
        "F": multilinear(f, x),
        "f_plus": concave_closure(f, x).value,
        "f_pp": upper_pairwise(f, x).value,
        "f_minus": convex_closure(f, x).value,
        "f_mm": lower_pairwise(f, x).value,
    }
