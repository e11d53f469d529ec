"""Inner boundaries, boundary ratios and the five isoperimetric inequality forms.

All comparisons are exact: left-hand sides and right-hand sides are
``fractions.Fraction`` values, so strict inequalities can never be flipped by
rounding.

Inequality forms (``form`` argument of :func:`check_inequality`):

    ``csc-original``  ratio >= 1 / (4 |S| Phi[2 |W|])
    ``avg-growth``    ratio >= (a/(1+a)) (b_{r-1}/b_r) / E[|X_r|], r = Phi[(1+a)|W|]
    ``growth-cor``    ratio >= (a/(1+a)) (b_{r-1}/b_r) / r,       r = Phi[(1+a)|W|]
    ``epsilon``       ratio >  (1-e) / Phi[(1/e)|W|]              (strict)
    ``pete-correia``  ratio >  (1/2) / Phi[2 |W|]                 (strict)

where W is the finite subset, ratio = |boundary| / |W|, and Phi is the growth
inverse from the ball table.  When Phi is the infinite sentinel (exhausted
finite group, large inflation) the right-hand side is zero and the inequality
holds vacuously.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .balls import INFINITE, BallTable, average_length, phi
from .errors import BadParams, EmptySet, MalformedElement
from .groups import Group

__all__ = [
    "FORMS",
    "STRICT_FORMS",
    "FiniteSubset",
    "InequalityReport",
    "boundary",
    "boundary_ratio",
    "check_inequality",
]

FORMS = ("csc-original", "avg-growth", "growth-cor", "epsilon", "pete-correia")
STRICT_FORMS = frozenset({"epsilon", "pete-correia"})


class FiniteSubset:
    """A finite set of group elements with a lazily cached inner boundary.

    Immutable after construction.  Element payloads are validated once here so
    downstream loops can trust them.
    """

    __slots__ = ("group", "elements", "_boundary")

    def __init__(self, group: Group, elements):
        self.group = group
        elems = frozenset(elements)
        for a in elems:
            group.check_element(a)
        self.elements = elems
        self._boundary = None

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return a in self.elements

    def __eq__(self, other):
        return (
            isinstance(other, FiniteSubset)
            and self.group == other.group
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.group.descriptor, self.elements))

    def __repr__(self):
        return f"<subset of {self.group.descriptor}, size {len(self.elements)}>"

    def sorted_elements(self) -> list:
        """Elements in canonical key order (deterministic output order)."""
        return sorted(self.elements, key=self.group.key)

    def keys(self) -> list:
        return [self.group.format_element(a) for a in self.sorted_elements()]

    def translate(self, g) -> "FiniteSubset":
        """Left translate g * W."""
        mul = self.group.mul
        return FiniteSubset(self.group, (mul(g, x) for x in self.elements))

    def boundary_set(self) -> frozenset:
        if self._boundary is None:
            mul = self.group.mul
            inside = self.elements
            gens = self.group.generators
            self._boundary = frozenset(
                x for x in inside if any(mul(x, s) not in inside for s in gens)
            )
        return self._boundary

    @classmethod
    def from_keys(cls, group: Group, lines) -> "FiniteSubset":
        elems = []
        for line in lines:
            line = line.strip()
            if not line:
                continue
            elems.append(group.parse_element(line))
        return cls(group, elems)


def boundary(group: Group, omega: FiniteSubset) -> FiniteSubset:
    """Inner boundary: elements of W with a right generator-neighbor outside W."""
    if omega.group != group:
        raise MalformedElement("subset belongs to a different group")
    return FiniteSubset(group, omega.boundary_set())


def boundary_ratio(omega: FiniteSubset) -> Fraction:
    """|boundary(W)| / |W| as an exact rational."""
    if not omega.elements:
        raise EmptySet("boundary ratio of the empty set is undefined")
    return Fraction(len(omega.boundary_set()), len(omega))


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check, with exact sides.

    ``holds`` means lhs >= rhs, or lhs > rhs for the strict forms.  When
    ``radius_used`` is the infinite sentinel, rhs is zero by convention.
    """

    form: str
    lhs: Fraction
    rhs: Fraction
    holds: bool
    strict: bool
    radius_used: object
    params: dict

    def to_json_dict(self):
        return {
            "form": self.form,
            "lhs": {"num": self.lhs.numerator, "den": self.lhs.denominator},
            "rhs": {"num": self.rhs.numerator, "den": self.rhs.denominator},
            "holds": self.holds,
            "strict": self.strict,
            "radius_used": "infinite" if self.radius_used is INFINITE else self.radius_used,
            "params": {k: str(v) for k, v in self.params.items()},
        }


def _as_fraction(value, name: str) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise BadParams(f"{name} must be an exact rational, got {value!r}")


def inequality_rhs(table: BallTable, form: str, size: int, alpha=None, eps=None):
    """Right-hand side of ``form`` for a subset of cardinality ``size``.

    Depends on the subset only through its cardinality; exposed separately so
    batch checkers can cache it.  Returns ``(rhs, radius_used)``.
    """
    if form not in FORMS:
        raise BadParams(f"unknown inequality form {form!r}")
    if size < 1:
        raise EmptySet("inequality forms require a non-empty subset")
    if form in ("csc-original", "pete-correia"):
        volume = 2 * size
    elif form in ("avg-growth", "growth-cor"):
        alpha = _as_fraction(alpha, "alpha")
        if alpha < 0:
            raise BadParams(f"alpha must be >= 0, got {alpha}")
        volume = (1 + alpha) * size
    else:  # epsilon
        eps = _as_fraction(eps, "eps")
        if not (0 < eps < 1):
            raise BadParams(f"eps must satisfy 0 < eps < 1, got {eps}")
        volume = size / eps
    r = phi(table, volume)
    if r is INFINITE:
        return Fraction(0), INFINITE
    if form == "csc-original":
        rhs = Fraction(1, 4 * len(table.group.generators) * r)
    elif form == "pete-correia":
        rhs = Fraction(1, 2 * r)
    elif form == "epsilon":
        rhs = (1 - eps) * Fraction(1, r)
    else:
        front = alpha / (1 + alpha) * Fraction(table.b[r - 1], table.b[r])
        if form == "avg-growth":
            avg = average_length(table, r)
            rhs = front / avg
        else:
            rhs = front / r
    return rhs, r


def check_inequality(omega: FiniteSubset, table: BallTable, form: str,
                     alpha=None, eps=None) -> InequalityReport:
    """Evaluate one inequality form on a concrete subset, exactly."""
    lhs = boundary_ratio(omega)
    rhs, r = inequality_rhs(table, form, len(omega), alpha=alpha, eps=eps)
    strict = form in STRICT_FORMS
    if r is INFINITE:
        holds = True
    elif strict:
        holds = lhs > rhs
    else:
        holds = lhs >= rhs
    params = {}
    if form in ("avg-growth", "growth-cor"):
        params["alpha"] = _as_fraction(alpha, "alpha")
    elif form == "epsilon":
        params["eps"] = _as_fraction(eps, "eps")
    return InequalityReport(form, lhs, rhs, holds, strict, r, params)
