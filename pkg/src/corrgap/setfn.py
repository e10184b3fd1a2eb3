"""Set functions on small ground sets, stored as exact value tables.

Subsets of ``[n] = {1, ..., n}`` are bitmasks: element ``i`` is bit ``i - 1``.
``values[mask]`` is ``f(S)``. Everything here is exhaustive over all ``2**n``
subsets, which is the intended regime (n up to about 12).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence, Union

from .rational import RationalLike, fmt, fractions

Subset = Union[int, Iterable[int]]


class SetFunctionError(ValueError):
    pass


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for i in elements:
        if i < 1:
            raise SetFunctionError(f"elements are 1-based, got {i}")
        m |= 1 << (i - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def set_order(n: int) -> list[int]:
    """Masks ordered by size, then lexicographically: ∅, {1}, {2}, ..., {1,2}, ..."""
    return [mask_of(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]


@dataclass(frozen=True)
class SetFunction:
    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SetFunctionError(f"ground set size must be >= 1, got {self.n}")
        if len(self.values) != 1 << self.n:
            raise SetFunctionError(
                f"expected {1 << self.n} values for n={self.n}, got {len(self.values)}"
            )
        for mask, v in enumerate(self.values):
            if v < 0:
                raise SetFunctionError(f"negative value {v} at subset {elements_of(mask)}")

    def __call__(self, subset: Subset) -> Fraction:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        return self.values[mask]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def marginal(self, i: int, subset: Subset = 0) -> Fraction:
        """f(i | S) = f(S ∪ {i}) - f(S)."""
        mask = subset if isinstance(subset, int) else mask_of(subset)
        bit = 1 << (i - 1)
        return self.values[mask | bit] - self.values[mask & ~bit]

    @property
    def is_normalized(self) -> bool:
        return self.values[0] == 0 and self.values[self.full] == 1

    def in_set_order(self) -> tuple[Fraction, ...]:
        return tuple(self.values[m] for m in set_order(self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "values": [fmt(v) for v in self.values], "order": "bitmask"}

    def __str__(self) -> str:
        return "(" + ", ".join(fmt(v) for v in self.values) + ")"


def make_setfn(n: int, values: Sequence[RationalLike]) -> SetFunction:
    """Build a set function from a bitmask-ordered value table."""
    return SetFunction(n, fractions(values))


def from_set_order(n: int, values: Sequence[RationalLike]) -> SetFunction:
    """Build from values listed as f(∅), f(1), ..., f(n), f(1,2), ... (size, then lex)."""
    vals = fractions(values)
    order = set_order(n)
    if len(vals) != len(order):
        raise SetFunctionError(f"expected {len(order)} values for n={n}, got {len(vals)}")
    table = [Fraction(0)] * len(order)
    for mask, v in zip(order, vals):
        table[mask] = v
    return SetFunction(n, tuple(table))


def from_json(doc: dict) -> SetFunction:
    order = doc.get("order", "bitmask")
    n = int(doc["n"])
    if order == "bitmask":
        return make_setfn(n, doc["values"])
    if order == "set":
        return from_set_order(n, doc["values"])
    raise SetFunctionError(f"unknown value order {order!r}")


def from_callable(n: int, fn) -> SetFunction:
    """Tabulate ``fn(elements_tuple)`` over every subset."""
    return make_setfn(n, [fn(elements_of(m)) for m in range(1 << n)])


# -- verdicts ---------------------------------------------------------------


class Verdict(NamedTuple):
    holds: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_monotone(f: SetFunction) -> Verdict:
    """Witness is (S, i) with f(S ∪ {i}) < f(S)."""
    for mask in range(1 << f.n):
        for i in range(1, f.n + 1):
            bit = 1 << (i - 1)
            if mask & bit:
                continue
            if f.values[mask | bit] < f.values[mask]:
                return Verdict(False, (elements_of(mask), i))
    return Verdict(True)


def check_submodular(f: SetFunction) -> Verdict:
    """Witness is (S, T) with f(S) + f(T) < f(S ∩ T) + f(S ∪ T).

    Uses the local form f(S+i) + f(S+j) >= f(S) + f(S+i+j), which is
    equivalent to the full lattice inequality.
    """
    v = f.values
    for mask in range(1 << f.n):
        free = [1 << k for k in range(f.n) if not mask & (1 << k)]
        for a, b in combinations(free, 2):
            if v[mask | a] + v[mask | b] < v[mask] + v[mask | a | b]:
                return Verdict(False, (elements_of(mask | a), elements_of(mask | b)))
    return Verdict(True)


def is_monotone_submodular(f: SetFunction) -> bool:
    return bool(check_monotone(f)) and bool(check_submodular(f))


def normalize(f: SetFunction) -> SetFunction:
    """g(S) = (f(S) - f(∅)) / (f([n]) - f(∅))."""
    lo, hi = f.values[0], f.values[f.full]
    if hi <= lo:
        raise SetFunctionError(
            "cannot normalize: f([n]) must exceed f(∅)"
            + (" (constant function)" if hi == lo else "")
        )
    span = hi - lo
    return SetFunction(f.n, tuple((v - lo) / span for v in f.values))


# -- constructors -----------------------------------------------------------


def uniform_matroid_rank(n: int, k: int) -> SetFunction:
    """f(S) = min(|S|, k). Not normalized for k > 1."""
    if not 1 <= k <= n:
        raise SetFunctionError(f"need 1 <= k <= n, got k={k}, n={n}")
    return SetFunction(n, tuple(Fraction(min(popcount(m), k)) for m in range(1 << n)))


def weighted_coverage(
    n: int, weights: Sequence[RationalLike], cover_sets: Sequence[Iterable[int]]
) -> SetFunction:
    """f(S) = total weight of items covered by the sets T_i, i in S.

    ``cover_sets[i-1]`` is T_i, a subset of items ``1..m`` where m = len(weights).
    """
    w = fractions(weights)
    if any(x < 0 for x in w):
        raise SetFunctionError("coverage weights must be nonnegative")
    if len(cover_sets) != n:
        raise SetFunctionError(f"need {n} cover sets, got {len(cover_sets)}")
    m = len(w)
    covers = []
    for t in cover_sets:
        t = tuple(t)
        bad = [j for j in t if not 1 <= j <= m]
        if bad:
            raise SetFunctionError(f"cover set references item(s) {bad} outside 1..{m}")
        covers.append(mask_of(t))
    values = []
    for mask in range(1 << n):
        covered = 0
        for i in range(n):
            if mask >> i & 1:
                covered |= covers[i]
        values.append(sum((w[j] for j in range(m) if covered >> j & 1), Fraction(0)))
    return SetFunction(n, tuple(values))


def ksum_objective(
    c: Sequence[RationalLike], y: Sequence[int], k: int
) -> SetFunction:
    """f_y(S) = sum of the k largest c_i * y_i over i in S."""
    cs = fractions(c)
    n = len(cs)
    if len(y) != n:
        raise SetFunctionError("c and y must have the same length")
    if not 1 <= k <= n:
        raise SetFunctionError(f"need 1 <= k <= n, got k={k}, n={n}")
    if any(v < 0 for v in cs):
        raise SetFunctionError("weights c must be nonnegative")
    if any(v not in (0, 1) for v in y):
        raise SetFunctionError("y must be a 0/1 vector")
    weights = [ci * yi for ci, yi in zip(cs, y)]
    values = []
    for mask in range(1 << n):
        picked = sorted((weights[i] for i in range(n) if mask >> i & 1), reverse=True)
        values.append(sum(picked[:k], Fraction(0)))
    return SetFunction(n, tuple(values))


def direct_sum(parts: Sequence[SetFunction]) -> SetFunction:
    """f(S) = sum_i f_i(S ∩ block_i); blocks are laid out in argument order."""
    if not parts:
        raise SetFunctionError("direct_sum needs at least one part")
    n = sum(p.n for p in parts)
    values = []
    for mask in range(1 << n):
        total = Fraction(0)
        shift = 0
        for p in parts:
            total += p.values[(mask >> shift) & p.full]
            shift += p.n
        values.append(total)
    return SetFunction(n, tuple(values))


# -- extremal functions and subpolytopes for n = 2, 3 -----------------------


class Subpolytope(enum.Enum):
    F3_1 = "F3_1"
    F3_2 = "F3_2"
    F3_3 = "F3_3"
    G3_1 = "G3_1"
    G3_2 = "G3_2"


F_FAMILIES = (Subpolytope.F3_1, Subpolytope.F3_2, Subpolytope.F3_3)
G_FAMILIES = (Subpolytope.G3_1, Subpolytope.G3_2)

_h = Fraction(1, 2)

# (f(∅), f(1), f(2), f(1,2))
EXTREMAL_N2 = {
    "e1": (0, 1, 0, 1),
    "e2": (0, 0, 1, 1),
    "e3": (0, 1, 1, 1),
}

# (f(∅), f(1), f(2), f(3), f(1,2), f(1,3), f(2,3), f(1,2,3))
EXTREMAL_N3 = {
    "E1": (0, 1, 0, 0, 1, 1, 0, 1),
    "E2": (0, 0, 1, 0, 1, 0, 1, 1),
    "E3": (0, 0, 0, 1, 0, 1, 1, 1),
    "E4": (0, 1, 1, 0, 1, 1, 1, 1),
    "E5": (0, 1, 0, 1, 1, 1, 1, 1),
    "E6": (0, 0, 1, 1, 1, 1, 1, 1),
    "E7": (0, 1, 1, 1, 1, 1, 1, 1),
    "E8": (0, _h, _h, _h, 1, 1, 1, 1),
}

_EXCLUDED = {Subpolytope.F3_1: "E6", Subpolytope.F3_2: "E5", Subpolytope.F3_3: "E4"}


def extremal(name: str) -> SetFunction:
    """Look up one extremal function by its name (e1..e3, E1..E8)."""
    if name in EXTREMAL_N2:
        return from_set_order(2, EXTREMAL_N2[name])
    if name in EXTREMAL_N3:
        return from_set_order(3, EXTREMAL_N3[name])
    raise KeyError(name)


def extremal_catalog(n: int, family: Subpolytope | None = None) -> list[SetFunction]:
    """Extreme points of the normalized monotone submodular polytope (n = 2, 3).

    With ``family`` (n = 3, F3_k only), the extreme points of that subpolytope.
    """
    if n == 2:
        if family is not None:
            raise SetFunctionError("subpolytope families are defined for n = 3 only")
        return [extremal(k) for k in EXTREMAL_N2]
    if n == 3:
        if family is None:
            return [extremal(k) for k in EXTREMAL_N3]
        if family not in _EXCLUDED:
            raise SetFunctionError(f"no extreme-point catalog for {family.value}")
        return [extremal(k) for k in EXTREMAL_N3 if k != _EXCLUDED[family]]
    raise SetFunctionError(f"extremal catalog only available for n in (2, 3), got {n}")


def _family_inequalities(f: SetFunction, family: Subpolytope) -> bool:
    m = f.marginal
    if family is Subpolytope.F3_1:
        return m(3, [2]) >= m(3, [1]) and m(2, [3]) >= m(2, [1])
    if family is Subpolytope.F3_2:
        return m(3, [1]) >= m(3, [2]) and m(1, [3]) >= m(1, [2])
    if family is Subpolytope.F3_3:
        return m(2, [1]) >= m(2, [3]) and m(1, [2]) >= m(1, [3])
    cyc = cyclic_marginal_sum(f)
    if family is Subpolytope.G3_1:
        return cyc <= 1
    return cyc >= 1


def cyclic_marginal_sum(f: SetFunction) -> Fraction:
    """f(1|2) + f(2|3) + f(3|1)."""
    return f.marginal(1, [2]) + f.marginal(2, [3]) + f.marginal(3, [1])


def in_subpolytope(f: SetFunction, family: Subpolytope) -> bool:
    """Membership in F3 (normalized monotone submodular) plus the family's inequalities."""
    if f.n != 3:
        return False
    return (
        f.is_normalized
        and bool(check_monotone(f))
        and bool(check_submodular(f))
        and _family_inequalities(f, family)
    )


@dataclass(frozen=True)
class SubpolytopeLabels:
    f_families: frozenset
    g_families: frozenset
    canonical_f: Subpolytope | None
    canonical_g: Subpolytope

    def to_json(self) -> dict:
        return {
            "F": sorted(s.value for s in self.f_families),
            "G": sorted(s.value for s in self.g_families),
            "canonical_F": self.canonical_f.value if self.canonical_f else None,
            "canonical_G": self.canonical_g.value,
        }


def classify_subpolytope(f: SetFunction) -> SubpolytopeLabels:
    """F3_k / G3_k memberships by marginal inequalities, plus canonical labels.

    The canonical F label is the smallest k with f in F3_k, so the canonical
    labels partition the polytope. Requires a normalized n = 3 function.
    """
    if f.n != 3:
        raise SetFunctionError(f"subpolytopes are defined for n = 3, got n = {f.n}")
    if not f.is_normalized:
        raise SetFunctionError("classify_subpolytope needs f(∅) = 0 and f([3]) = 1")
    fams = frozenset(k for k in F_FAMILIES if _family_inequalities(f, k))
    gams = frozenset(k for k in G_FAMILIES if _family_inequalities(f, k))
    canon_f = next((k for k in F_FAMILIES if k in fams), None)
    canon_g = Subpolytope.G3_1 if cyclic_marginal_sum(f) <= 1 else Subpolytope.G3_2
    return SubpolytopeLabels(fams, gams, canon_f, canon_g)
