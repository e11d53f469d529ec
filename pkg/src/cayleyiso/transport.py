"""Mass-transport structures on finite subsets and their counting identities.

For a subset W and radius r the ledger materializes, exhaustively and exactly:

    W_g       elements x of W with x*g outside W, for every g in B(r)
    rays      pairs (x, g) with x in W, |g| <= r, x*g outside W
    exit map  for x in W_g, the first point x*g_k of the chosen geodesic
              of g that lies on the inner boundary of W

The two countings are two index orders of the same pair set, so their totals
agree; that equality is asserted at build time and re-checkable through
:func:`verify_lemma`.

Geodesic choice: the lexicographically smallest letter sequence with respect
to the fixed generator order, obtained by greedy descent (take the smallest
generator index that decreases the word norm).  Any fixed choice works; this
one makes ledgers reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .balls import INFINITE, BallTable, phi
from .errors import (
    BadParams,
    EmptySet,
    ExitNotFound,
    HorizonExceeded,
    PreconditionUnmet,
)
from .isoperimetry import FiniteSubset

__all__ = [
    "GeodesicWord",
    "TransportLedger",
    "LemmaReport",
    "LEMMAS",
    "geodesic_word",
    "build_ledger",
    "verify_lemma",
]

LEMMAS = ("spheres", "balls", "transport", "counting", "ray-lower", "conclude", "fiber")


@dataclass(frozen=True)
class GeodesicWord:
    """A minimal-length expression of ``target`` with its prefix path.

    ``letters[k]`` is a generator index; ``prefixes[k]`` is the product of the
    first k letters, so ``prefixes[0]`` is the identity and ``prefixes[-1]``
    is the target.
    """

    target: object
    letters: tuple
    prefixes: tuple

    def __len__(self):
        return len(self.letters)


def geodesic_word(table: BallTable, g) -> GeodesicWord:
    """Deterministic minimal-length expression of ``g`` (see module docstring)."""
    group = table.group
    norm = table.norm(g)  # HorizonExceeded if outside the table
    letters = []
    prefixes = [group.identity]
    rest = g
    rest_norm = norm
    gens = group.generators
    inverses = [group.inv(s) for s in gens]
    while rest_norm > 0:
        for j, s in enumerate(gens):
            shorter = group.mul(inverses[j], rest)
            if table.norm_of.get(shorter, rest_norm + 1) == rest_norm - 1:
                letters.append(j)
                prefixes.append(group.mul(prefixes[-1], s))
                rest = shorter
                rest_norm -= 1
                break
        else:  # impossible on a correct table: some first letter must descend
            raise RuntimeError(
                f"no descending generator at {group.format_element(rest)}"
            )
    return GeodesicWord(g, tuple(letters), tuple(prefixes))


@dataclass
class TransportLedger:
    """Exhaustive transport data for one (subset, radius) pair."""

    omega: FiniteSubset
    r: int
    table: BallTable
    omega_g: dict
    rays: dict
    exit_fibers: dict
    sum_omega_g: int
    sum_rays: int
    max_fiber: int

    def to_json_dict(self):
        group = self.omega.group
        return {
            "group": group.descriptor,
            "omega_size": len(self.omega),
            "r": self.r,
            "sum_rays": self.sum_rays,
            "sum_omega_g": self.sum_omega_g,
            "max_fiber": self.max_fiber,
            "boundary_size": len(self.omega.boundary_set()),
        }


def build_ledger(omega: FiniteSubset, table: BallTable, r: int,
                 size_cap: int = 64, radius_cap: int = 6) -> TransportLedger:
    """Populate W_g, rays and exit fibers by iterating W x B(r) exhaustively.

    The iteration is |W| x |B(r)|, so default caps keep accidental requests
    desk-sized; raise ``size_cap`` / ``radius_cap`` explicitly for more.
    """
    if not omega.elements:
        raise EmptySet("transport ledger needs a non-empty subset")
    if not isinstance(r, int) or r < 1:
        raise BadParams(f"radius must be a positive integer, got {r!r}")
    if len(omega) > size_cap:
        raise BadParams(
            f"|W| = {len(omega)} exceeds the ledger size cap {size_cap}; "
            f"pass size_cap explicitly to go bigger"
        )
    if r > radius_cap:
        raise BadParams(
            f"radius {r} exceeds the ledger radius cap {radius_cap}; "
            f"pass radius_cap explicitly to go bigger"
        )
    if r > table.max_radius:
        raise HorizonExceeded(f"ledger radius {r} beyond table horizon {table.max_radius}")
    group = omega.group
    mul = group.mul
    inside = omega.elements
    ball = table.members(r)
    omega_sorted = omega.sorted_elements()

    rays = {x: [] for x in omega_sorted}
    omega_g = {}
    for g in ball:
        exits = []
        for x in omega_sorted:
            if mul(x, g) not in inside:
                exits.append(x)
                rays[x].append(g)
        omega_g[g] = tuple(exits)
    rays = {x: tuple(gs) for x, gs in rays.items()}

    boundary = omega.boundary_set()
    exit_fibers = {}
    for g in ball:
        xs = omega_g[g]
        if not xs or table.norm_of[g] == 0:
            continue
        word = geodesic_word(table, g)
        for x in xs:
            for prefix in word.prefixes:
                point = mul(x, prefix)
                if point in boundary:
                    key = (g, point)
                    exit_fibers[key] = exit_fibers.get(key, 0) + 1
                    break
            else:
                raise ExitNotFound(
                    f"path from {group.format_element(x)} by "
                    f"{group.format_element(g)} never met the boundary"
                )

    sum_omega_g = sum(len(xs) for xs in omega_g.values())
    sum_rays = sum(len(gs) for gs in rays.values())
    # two countings of the same pair set; inequality here is a bug, not data
    assert sum_omega_g == sum_rays
    max_fiber = max(exit_fibers.values(), default=0)
    return TransportLedger(
        omega, r, table, omega_g, rays, exit_fibers, sum_omega_g, sum_rays, max_fiber
    )


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one verifier; a failure names its witness and falsifies the
    implementation, never the statement."""

    which: str
    holds: bool
    witness: object
    detail: str

    def to_json_dict(self):
        return {
            "which": self.which,
            "holds": self.holds,
            "witness": self.witness,
            "detail": self.detail,
        }


def verify_lemma(which: str, table: BallTable | None = None,
                 ledger: TransportLedger | None = None, alpha=None) -> LemmaReport:
    """Check one counting statement on a concrete table or ledger.

    ``spheres`` and ``balls`` need a table; the rest need a ledger (and
    ``ray-lower`` / ``conclude`` an exact rational ``alpha``).
    """
    if which not in LEMMAS:
        raise BadParams(f"unknown lemma {which!r}; choose from {LEMMAS}")
    if which in ("spheres", "balls"):
        if table is None:
            raise BadParams(f"lemma {which!r} needs a ball table")
        return _verify_counts(which, table)
    if ledger is None:
        raise BadParams(f"lemma {which!r} needs a transport ledger")
    if which == "transport":
        return _verify_transport(ledger)
    if which == "counting":
        return _verify_counting(ledger)
    if which == "fiber":
        return _verify_fiber(ledger)
    if alpha is None:
        raise BadParams(f"lemma {which!r} needs alpha")
    alpha = Fraction(alpha)
    if alpha < 0:
        raise BadParams(f"alpha must be >= 0, got {alpha}")
    if which == "ray-lower":
        return _verify_ray_lower(ledger, alpha)
    return _verify_conclude(ledger, alpha)


def _verify_counts(which: str, table: BallTable) -> LemmaReport:
    k = len(table.group.generators)
    for r in range(2, table.max_radius + 1):
        if which == "spheres":
            ok = table.s[r] <= (k - 1) * table.s[r - 1]
        else:
            ok = table.b[r] <= k * table.b[r - 1]
        if not ok:
            return LemmaReport(which, False, {"r": r},
                               f"violated at radius {r}")
    return LemmaReport(which, True, None,
                       f"radii 2..{table.max_radius} on {table.group.descriptor}")


def _verify_transport(ledger: TransportLedger) -> LemmaReport:
    group = ledger.omega.group
    bsize = len(ledger.omega.boundary_set())
    for g, xs in ledger.omega_g.items():
        if len(xs) > ledger.table.norm_of[g] * bsize:
            return LemmaReport(
                "transport", False, {"g": group.format_element(g)},
                f"|W_g| = {len(xs)} exceeds |g| |bd W| = {ledger.table.norm_of[g] * bsize}",
            )
    return LemmaReport("transport", True, None,
                       f"all {len(ledger.omega_g)} translates within bound")


def _verify_counting(ledger: TransportLedger) -> LemmaReport:
    lhs = sum(len(gs) for gs in ledger.rays.values())
    rhs = sum(len(xs) for xs in ledger.omega_g.values())
    if lhs != rhs:
        return LemmaReport("counting", False, {"sum_rays": lhs, "sum_omega_g": rhs},
                           "the two countings disagree")
    return LemmaReport("counting", True, None, f"both countings equal {lhs}")


def _verify_fiber(ledger: TransportLedger) -> LemmaReport:
    group = ledger.omega.group
    for (g, b), count in ledger.exit_fibers.items():
        if count > ledger.table.norm_of[g]:
            return LemmaReport(
                "fiber", False,
                {"g": group.format_element(g), "b": group.format_element(b)},
                f"fiber of size {count} exceeds |g| = {ledger.table.norm_of[g]}",
            )
    return LemmaReport("fiber", True, None,
                       f"all {len(ledger.exit_fibers)} fibers within bound")


def _verify_ray_lower(ledger: TransportLedger, alpha: Fraction) -> LemmaReport:
    size = len(ledger.omega)
    needed = (1 + alpha) * size
    if ledger.table.b[ledger.r] < needed:
        raise PreconditionUnmet(
            f"|B({ledger.r})| = {ledger.table.b[ledger.r]} < (1+alpha)|W| = {needed}"
        )
    group = ledger.omega.group
    floor = alpha * size
    for x, gs in ledger.rays.items():
        if len(gs) < floor:
            return LemmaReport(
                "ray-lower", False, {"x": group.format_element(x)},
                f"|rays({group.format_element(x)})| = {len(gs)} below alpha |W| = {floor}",
            )
    return LemmaReport("ray-lower", True, None,
                       f"every ray set has size >= {floor}")


def _verify_conclude(ledger: TransportLedger, alpha: Fraction) -> LemmaReport:
    size = len(ledger.omega)
    r = phi(ledger.table, (1 + alpha) * size)
    if r is INFINITE or r != ledger.r:
        raise PreconditionUnmet(
            f"ledger radius {ledger.r} is not the growth inverse at (1+alpha)|W| "
            f"(got {r!r})"
        )
    group = ledger.omega.group
    floor = alpha / (1 + alpha) * ledger.table.b[r - 1]
    for x, gs in ledger.rays.items():
        if len(gs) < floor:
            return LemmaReport(
                "conclude", False, {"x": group.format_element(x)},
                f"|rays({group.format_element(x)})| = {len(gs)} below "
                f"(alpha/(1+alpha)) b_(r-1) = {floor}",
            )
    return LemmaReport("conclude", True, None,
                       f"every ray set has size >= {floor}")
