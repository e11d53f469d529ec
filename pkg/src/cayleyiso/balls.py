"""Breadth-first ball enumeration, exact growth counts and derived quantities.

The central object is :class:`BallTable`: every element of the ball of radius
R around the identity, its exact word norm, and the exact counts b_r (ball),
s_r (sphere) and the sum of norms over each ball.  All counts are Python
integers, hence arbitrary precision by construction.

Frontier expansion follows generator-list order with a FIFO queue, so element
discovery order (and everything derived from it) is reproducible.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParams, HorizonExceeded, MemoryBudgetExceeded, RadiusOutOfRange
from .groups import Group

__all__ = [
    "INFINITE",
    "BallTable",
    "GrowthEstimate",
    "enumerate_ball",
    "phi",
    "average_length",
    "growth_rate_upper",
    "table_for_volume",
]

#: default cap on enumerated elements; CLI can override via flag or environment
DEFAULT_MAX_ELEMENTS = 5_000_000


class _Infinite:
    """Sentinel for a provably infinite value (empty infimum on an exhausted
    group).  Never produced for a merely too-small horizon."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"


INFINITE = _Infinite()


@dataclass
class BallTable:
    """Memoized BFS output for one group up to ``max_radius``.

    ``elements`` lists every member of B(max_radius) in discovery order, so
    ``elements[:b[r]]`` is exactly B(r).  ``norm_of`` maps payload to word
    norm.  Immutable once built; share freely.
    """

    group: Group
    max_radius: int
    elements: list
    norm_of: dict
    b: list
    s: list
    length_sum: list
    exhausted: bool

    def norm(self, a) -> int:
        """Exact word norm of ``a``; HorizonExceeded if outside the table."""
        try:
            return self.norm_of[a]
        except KeyError:
            raise HorizonExceeded(
                f"element {self.group.format_element(a)} outside B({self.max_radius})"
            ) from None

    def __contains__(self, a) -> bool:
        return a in self.norm_of

    def members(self, r: int) -> list:
        """The ball B(r) as a list in discovery order."""
        self._check_radius(r)
        return self.elements[: self.b[r]]

    def volume_at(self, x) -> int:
        """|B(x)| for a rational radius: 0 below zero, floor otherwise."""
        if x < 0:
            return 0
        r = math.floor(x)
        if r <= self.max_radius:
            return self.b[r]
        if self.exhausted:
            return self.b[self.max_radius]
        raise HorizonExceeded(f"radius {x} beyond table horizon {self.max_radius}")

    def _check_radius(self, r):
        if not isinstance(r, int) or r < 0 or r > self.max_radius:
            raise RadiusOutOfRange(f"radius {r!r} not in [0, {self.max_radius}]")

    def csv_rows(self):
        """Rows ``r, b_r, s_r, length_sum_r, avg_len_num, avg_len_den``."""
        rows = []
        for r in range(self.max_radius + 1):
            avg = Fraction(self.length_sum[r], self.b[r])
            rows.append((r, self.b[r], self.s[r], self.length_sum[r], avg.numerator, avg.denominator))
        return rows

    def to_json_dict(self):
        return {
            "group": self.group.descriptor,
            "max_radius": self.max_radius,
            "exhausted": self.exhausted,
            "rows": [
                {
                    "r": r,
                    "b": b,
                    "s": s,
                    "length_sum": ls,
                    "avg_len": {"num": num, "den": den},
                }
                for (r, b, s, ls, num, den) in self.csv_rows()
            ],
        }


def enumerate_ball(group: Group, radius: int, max_elements: int | None = None) -> BallTable:
    """Enumerate B(radius) by breadth-first search from the identity.

    Raises :class:`MemoryBudgetExceeded` (carrying the last completed radius)
    if the ball outgrows ``max_elements``.
    """
    if not isinstance(radius, int) or radius < 0:
        raise RadiusOutOfRange(f"radius must be a non-negative integer, got {radius!r}")
    budget = DEFAULT_MAX_ELEMENTS if max_elements is None else max_elements
    e = group.identity
    elements = [e]
    norm_of = {e: 0}
    b = [1]
    s = [1]
    length_sum = [0]
    exhausted = False
    frontier = [e]
    mul = group.mul
    gens = group.generators
    for r in range(1, radius + 1):
        new_frontier = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in norm_of:
                    norm_of[y] = r
                    new_frontier.append(y)
                    if len(norm_of) > budget:
                        raise MemoryBudgetExceeded(
                            f"ball of {group.descriptor} exceeded {budget} elements "
                            f"at radius {r}",
                            last_completed_radius=r - 1,
                        )
        elements.extend(new_frontier)
        s.append(len(new_frontier))
        b.append(b[-1] + len(new_frontier))
        length_sum.append(length_sum[-1] + r * len(new_frontier))
        frontier = new_frontier
        if not new_frontier:
            exhausted = True
            for r2 in range(r + 1, radius + 1):
                s.append(0)
                b.append(b[-1])
                length_sum.append(length_sum[-1])
            break
    table = BallTable(group, radius, elements, norm_of, b, s, length_sum, exhausted)
    _assert_count_sanity(table)
    return table


def _assert_count_sanity(t: BallTable):
    # b_r = b_{r-1} + s_r and the degree bounds are theorems; a violation
    # here means the BFS itself is broken.
    k = len(t.group.generators)
    for r in range(1, t.max_radius + 1):
        assert t.b[r] == t.b[r - 1] + t.s[r]
        if r >= 2:
            assert t.s[r] <= (k - 1) * t.s[r - 1]
            assert t.b[r] <= k * t.b[r - 1]


def phi(table: BallTable, v):
    """Least radius whose ball volume strictly exceeds ``v``.

    ``v`` must be a non-negative integer or Fraction.  Returns INFINITE only
    when the table shows the group exhausted (the infimum of the empty set);
    raises HorizonExceeded when the horizon is simply too small.
    """
    if isinstance(v, float):
        raise BadParams("phi takes exact volumes (int or Fraction), not float")
    if v < 0:
        raise BadParams(f"volume must be >= 0, got {v}")
    r = bisect_right(table.b, v)
    if r <= table.max_radius:
        return r
    if table.exhausted:
        return INFINITE
    raise HorizonExceeded(
        f"b_{table.max_radius} = {table.b[-1]} <= {v}; enlarge the table radius"
    )


def average_length(table: BallTable, r: int) -> Fraction:
    """Average word norm over B(r), as an exact rational (always <= r)."""
    table._check_radius(r)
    return Fraction(table.length_sum[r], table.b[r])


@dataclass(frozen=True)
class GrowthEstimate:
    """Subadditive upper estimates for the exponential growth rate.

    ``fekete_inf`` = min over 1 <= n <= horizon of ln(b_n)/n, an upper bound
    for the true limit.  ``is_exponential_evidence`` is a heuristic flag only,
    never a proof: it holds when late increments of ln(b_n) stay comparable to
    the mid-horizon ones.  Polynomial growth halves those increments with n,
    exponential growth keeps them essentially constant.
    """

    horizon: int
    per_n: tuple
    fekete_inf: float
    is_exponential_evidence: bool


# Increment-flatness threshold: Z^d up to d = 4 stays below ~0.63 at any
# horizon >= 4, the exponential built-ins stay above ~0.79.
_EVIDENCE_RATIO = 0.7
_EVIDENCE_MIN_HORIZON = 4


def growth_rate_upper(table: BallTable, horizon: int) -> GrowthEstimate:
    """Per-n values ln(b_n)/n and their running minimum at the horizon."""
    if not isinstance(horizon, int) or horizon < 1 or horizon > table.max_radius:
        raise RadiusOutOfRange(f"horizon {horizon!r} not in [1, {table.max_radius}]")
    per_n = tuple(math.log(table.b[n]) / n for n in range(1, horizon + 1))
    fekete_inf = min(per_n)
    evidence = False
    if horizon >= _EVIDENCE_MIN_HORIZON and fekete_inf > 0:
        # two-step averaged log-increments damp parity wobbles
        half = math.ceil(horizon / 2)
        late = (math.log(table.b[horizon]) - math.log(table.b[horizon - 2])) / 2
        mid = (math.log(table.b[half]) - math.log(table.b[half - 2])) / 2
        evidence = late > 0 and late >= _EVIDENCE_RATIO * mid
    return GrowthEstimate(horizon, per_n, fekete_inf, evidence)


def table_for_volume(group: Group, volume, max_elements: int | None = None,
                     start_radius: int = 4) -> BallTable:
    """Smallest-effort table with b_R > volume (or the group exhausted).

    Doubles the radius until the volume is strictly exceeded, so callers can
    evaluate the growth inverse without guessing a horizon.
    """
    radius = max(1, start_radius)
    while True:
        table = enumerate_ball(group, radius, max_elements=max_elements)
        if table.b[-1] > volume or table.exhausted:
            return table
        radius *= 2
