"""Bound conversions between the two inequality shapes, and scoped certificates.

Two parameter shapes describe one lower bound each:

    CscBound(c, alpha):       for all finite non-empty W,
                              |bd W| / |W| >= c / Phi[(1+alpha) |W|]
    FolnerBound(c, alpha, rho): for all n >= 1,
                              folner(n) >= |B(c n - rho)| / (1 + alpha)

The conversions are parameter passthrough one way and a volume inflation by
|S|^ceil(rho+c) the other way.  Certification is always scoped: a certificate
records the finite family of sets it actually checked and never claims more.
A failing certificate, by contrast, is a genuine disproof with a witness.

The quotient estimate divides window statistics of ln(folner(n))/n by the
subadditive growth-rate minimum.  A lower limit of a sequence cannot be
bounded from finite data, so the estimate reports labeled window statistics
and an always-empty certified interval, with explicit caveats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .balls import INFINITE, BallTable, enumerate_ball, growth_rate_upper, phi, table_for_volume
from .errors import (
    BadParams,
    EmptyGeneratingSet,
    InsufficientData,
    NotApplicable,
)
from .folner import LowerBound, min_ratio_table
from .groups import Group
from .isoperimetry import FiniteSubset

__all__ = [
    "CscBound",
    "FolnerBound",
    "BallSubsetsScope",
    "ConnectedScope",
    "Certificate",
    "FolnerFormCheck",
    "QuotientEstimate",
    "csc_to_folner",
    "folner_to_csc",
    "check_folner_form",
    "certify_at_scale",
    "quotient_estimate",
]


def _fraction(value, name: str) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise BadParams(f"{name} must be an exact rational, got {value!r}")


@dataclass(frozen=True)
class CscBound:
    """Outer-constant shape: ratio >= c / Phi[(1+alpha)|W|] for all W."""

    c: Fraction
    alpha: Fraction

    def params_dict(self):
        return {"c": str(self.c), "alpha": str(self.alpha)}


@dataclass(frozen=True)
class FolnerBound:
    """Inner-constant shape: folner(n) >= |B(c n - rho)| / (1+alpha) for all n."""

    c: Fraction
    alpha: Fraction
    rho: Fraction

    def params_dict(self):
        return {"c": str(self.c), "alpha": str(self.alpha), "rho": str(self.rho)}


def csc_to_folner(bound: CscBound, rho) -> FolnerBound:
    """Outer-to-inner direction: same (c, alpha), any strictly positive rho."""
    c = _fraction(bound.c, "c")
    alpha = _fraction(bound.alpha, "alpha")
    rho = _fraction(rho, "rho")
    if c <= 0:
        raise BadParams(f"conversion requires c > 0, got {c}")
    if alpha < 0:
        raise BadParams(f"alpha must be >= 0, got {alpha}")
    if rho <= 0:
        raise BadParams(f"conversion requires rho > 0, got {rho}")
    return FolnerBound(c, alpha, rho)


def folner_to_csc(bound: FolnerBound, generating_set_size: int) -> CscBound:
    """Inner-to-outer direction: volume inflation |S|^ceil(rho+c) (1+alpha).

    The returned shape keeps c and absorbs the inflation into the effective
    alpha, so its Phi argument is |S|^ceil(rho+c) (1+alpha) |W|.
    """
    c = _fraction(bound.c, "c")
    alpha = _fraction(bound.alpha, "alpha")
    rho = _fraction(bound.rho, "rho")
    if c <= 0:
        raise BadParams(f"conversion requires c > 0, got {c}")
    if alpha < 0 or rho < 0:
        raise BadParams("alpha and rho must be >= 0")
    if not isinstance(generating_set_size, int) or generating_set_size < 1:
        raise EmptyGeneratingSet(
            f"conversion needs a non-empty generating set, got size {generating_set_size!r}"
        )
    exponent = math.ceil(rho + c)
    inflation = Fraction(generating_set_size) ** exponent * (1 + alpha)
    return CscBound(c, inflation - 1)


@dataclass(frozen=True)
class BallSubsetsScope:
    """Every non-empty subset of the ball of the given radius."""

    radius: int = 2

    def describe(self):
        return f"all non-empty subsets of B({self.radius})"


@dataclass(frozen=True)
class ConnectedScope:
    """Every connected subset containing the identity, up to the given size."""

    max_size: int

    def describe(self):
        return f"connected subsets containing e with size <= {self.max_size}"


# Guard for the exponential subset scope; 2^20 masks is already generous.
_MAX_SUBSET_SCOPE_BITS = 20


@dataclass
class Certificate:
    """Result of checking a CscBound over a stated finite scope.

    A pass is evidence at scale only; a fail carries a concrete witness and
    disproves the bound outright.
    """

    group: str
    bound: CscBound
    scope: object
    holds: bool
    witness: object
    checked_sets: int
    derived_bounds: dict

    def to_json_dict(self):
        return {
            "form": "csc",
            "params": self.bound.params_dict(),
            "scope": self.scope.describe(),
            "group": self.group,
            "holds": self.holds,
            "witness": self.witness.keys() if self.witness is not None else None,
            "checked_sets": self.checked_sets,
            "derived_bounds": self.derived_bounds,
        }


def _rhs_by_size(group: Group, bound: CscBound, max_size: int, max_elements=None):
    """rhs(m) = c / Phi[(1+alpha) m]; zero where Phi is the infinite sentinel."""
    table = table_for_volume(group, (1 + bound.alpha) * max_size, max_elements=max_elements)
    rhs = [None] * (max_size + 1)
    for m in range(1, max_size + 1):
        r = phi(table, (1 + bound.alpha) * m)
        rhs[m] = Fraction(0) if r is INFINITE else bound.c / Fraction(r)
    return rhs


def certify_at_scale(group: Group, bound: CscBound, scope,
                     max_elements: int | None = None) -> Certificate:
    """Check the outer-shape bound over every set in the scope, exactly."""
    bound = CscBound(_fraction(bound.c, "c"), _fraction(bound.alpha, "alpha"))
    if bound.c < 0 or bound.alpha < 0:
        raise BadParams("c and alpha must be >= 0")
    if isinstance(scope, BallSubsetsScope):
        return _certify_ball_subsets(group, bound, scope, max_elements)
    if isinstance(scope, ConnectedScope):
        return _certify_connected(group, bound, scope, max_elements)
    raise BadParams(f"unknown scope {scope!r}")


def _certify_ball_subsets(group, bound, scope, max_elements):
    base = enumerate_ball(group, scope.radius + 1, max_elements=max_elements)
    members = base.members(scope.radius)
    n = len(members)
    if n > _MAX_SUBSET_SCOPE_BITS:
        raise BadParams(
            f"B({scope.radius}) has {n} elements; 2^{n} subsets is beyond the "
            f"exhaustive scope limit (2^{_MAX_SUBSET_SCOPE_BITS})"
        )
    rhs = _rhs_by_size(group, bound, n, max_elements)
    # precompute, per member, its member-neighbors as a bitmask and whether it
    # always has a neighbor outside the member list
    index = {x: i for i, x in enumerate(members)}
    nbr_mask = []
    always_boundary = []
    for x in members:
        mask = 0
        outside = False
        for s in group.generators:
            y = group.mul(x, s)
            j = index.get(y)
            if j is None:
                outside = True
            else:
                mask |= 1 << j
        nbr_mask.append(mask)
        always_boundary.append(outside)
    min_ratio_seen = None
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        bcount = 0
        m = mask
        while m:
            low = m & (-m)
            i = low.bit_length() - 1
            m ^= low
            if always_boundary[i] or nbr_mask[i] & ~mask:
                bcount += 1
        ratio = Fraction(bcount, size)
        if min_ratio_seen is None or ratio < min_ratio_seen:
            min_ratio_seen = ratio
        if ratio < rhs[size]:
            witness = FiniteSubset(group, [members[i] for i in range(n) if mask >> i & 1])
            return Certificate(
                group.descriptor, bound, scope, False, witness, mask,
                {"failing_size": size, "lhs": str(ratio), "rhs": str(rhs[size])},
            )
    return Certificate(
        group.descriptor, bound, scope, True, None, (1 << n) - 1,
        {"min_ratio_seen": str(min_ratio_seen)},
    )


def _certify_connected(group, bound, scope, max_elements):
    # rhs depends on a set only through its cardinality, so checking the
    # per-size minimum ratio is exactly equivalent to checking every set
    table = min_ratio_table(group, scope.max_size)
    rhs = _rhs_by_size(group, bound, scope.max_size, max_elements)
    per_size = {}
    for m in range(1, scope.max_size + 1):
        if table.min_boundary[m] is None:
            continue
        lhs = table.min_ratio(m)
        per_size[m] = str(lhs)
        if lhs < rhs[m]:
            return Certificate(
                group.descriptor, bound, scope, False, table.witness_subset(m),
                sum(table.count[1 : m + 1]),
                {"failing_size": m, "lhs": str(lhs), "rhs": str(rhs[m])},
            )
    return Certificate(
        group.descriptor, bound, scope, True, None, sum(table.count),
        {"per_size_min_ratio": per_size},
    )


@dataclass
class FolnerFormCheck:
    """Evaluation of an inner-shape bound against Folner records.

    Rows are ``(n, value_text, rhs, status)`` with status one of ``holds``,
    ``fails``, ``indeterminate`` (a lower-bound record too weak to decide).
    """

    bound: FolnerBound
    rows: list
    holds: bool
    indeterminate: int

    def to_json_dict(self):
        return {
            "params": self.bound.params_dict(),
            "holds": self.holds,
            "indeterminate": self.indeterminate,
            "rows": [
                {"n": n, "value": v, "rhs": str(r), "status": s}
                for (n, v, r, s) in self.rows
            ],
        }


def check_folner_form(bound: FolnerBound, table: BallTable, records) -> FolnerFormCheck:
    """Compare folner(n) records against |B(c n - rho)| / (1+alpha), exactly."""
    rows = []
    holds = True
    indeterminate = 0
    for record in sorted(records, key=lambda rec: rec.n):
        radius = bound.c * record.n - bound.rho
        rhs = Fraction(table.volume_at(radius), 1) / (1 + bound.alpha)
        value = record.value
        if value is INFINITE:
            status = "holds"
        elif isinstance(value, LowerBound):
            if value.bound >= rhs:
                status = "holds"
            else:
                status = "indeterminate"
                indeterminate += 1
        else:
            status = "holds" if value >= rhs else "fails"
        if status == "fails":
            holds = False
        rows.append((record.n, record.value_text(), rhs, status))
    return FolnerFormCheck(bound, rows, holds, indeterminate)


@dataclass
class QuotientEstimate:
    """Window statistics toward the optimal-constant quotient.

    Every numeric field carries its bound direction in the name; nothing is
    certified (``certified_interval`` stays None at any finite horizon) and
    ``caveats`` spells out why.  Logarithms force floats here; all inequality
    checking elsewhere stays exact.
    """

    group: str
    horizon: int
    window: tuple
    numerator_lower: float
    numerator_upper: object
    denominator_upper: float
    c_lower: float
    certified_interval: object
    caveats: tuple

    def to_json_dict(self):
        def num(x):
            if x is None:
                return None
            if math.isinf(x):
                return "infinite"
            return x

        return {
            "group": self.group,
            "horizon": self.horizon,
            "window": list(self.window),
            "numerator_lower": num(self.numerator_lower),
            "numerator_upper": num(self.numerator_upper),
            "denominator_upper": self.denominator_upper,
            "c_lower": num(self.c_lower),
            "certified_interval": self.certified_interval,
            "caveats": list(self.caveats),
        }


def quotient_estimate(group: Group, horizon: int, records, table: BallTable) -> QuotientEstimate:
    """Divide Folner window statistics by the growth-rate upper estimate.

    Requires heuristic evidence of exponential growth at the horizon
    (NotApplicable otherwise) and at least one record in the back-half window
    (InsufficientData otherwise).
    """
    growth = growth_rate_upper(table, horizon)
    if not growth.is_exponential_evidence:
        raise NotApplicable(
            f"no exponential-growth evidence for {group.descriptor} at horizon {horizon}"
        )
    lo = math.ceil(horizon / 2)
    window = {rec.n: rec for rec in records if lo <= rec.n <= horizon}
    if not window:
        raise InsufficientData(
            f"no Folner records in the window [{lo}, {horizon}]"
        )
    lower_stats = []
    upper_stats = []
    for n, rec in sorted(window.items()):
        value = rec.value
        if value is INFINITE:
            lower_stats.append(math.inf)
        elif isinstance(value, LowerBound):
            lower_stats.append(math.log(value.bound) / n)
        else:
            lower_stats.append(math.log(value) / n)
            upper_stats.append(math.log(value) / n)
        if rec.family_upper is not None and not isinstance(value, int):
            upper_stats.append(math.log(rec.family_upper) / n)
    numerator_lower = min(lower_stats)
    numerator_upper = min(upper_stats) if upper_stats else None
    denominator_upper = growth.fekete_inf
    c_lower = numerator_lower / denominator_upper
    caveats = (
        f"numerator fields are window minima of ln(value)/n over n in [{lo}, {horizon}], "
        "not bounds on the lower limit, which no finite computation can bracket",
        "denominator_upper bounds the growth limit from above only, so c_lower is "
        "not a certified lower bound of the optimal constant",
        "exponential growth is heuristic evidence at this horizon, not a proof",
    )
    return QuotientEstimate(
        group.descriptor,
        horizon,
        (lo, horizon),
        numerator_lower,
        numerator_upper,
        denominator_upper,
        c_lower,
        None,
        caveats,
    )
