"""Linear Bell functionals on behaviors.

An expression is a coefficient tensor c(a,b,x,y) over the same spaces
as a behavior; its value on a box is the full contraction.  The local
bound enumerates all deterministic strategies exhaustively (cost
|X|^|A| * |Y|^|B|, fine at two settings and two outcomes per side, and
deliberately unpruned); the no-signalling bound is an exact LP over the
no-signalling polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

from .boxes import Behavior, LabelSet, deterministic_behavior
from .errors import LpFailure, SpaceMismatch
from .scalar import ONE, ZERO, Scalar, as_scalar
from .simplex import OPTIMAL, LpProblem, solve_lp


@dataclass(frozen=True)
class BellExpression:
    """Coefficient tensor defining a linear functional on behaviors."""

    settings_a: LabelSet
    settings_b: LabelSet
    outcomes_x: LabelSet
    outcomes_y: LabelSet
    coefficients: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        expected = len(self.settings_a) * len(self.settings_b) * len(self.outcomes_x) * len(self.outcomes_y)
        if len(self.coefficients) != expected:
            raise ValueError(f"coefficient tensor has {len(self.coefficients)} entries, expected {expected}")

    @property
    def spaces(self) -> tuple[LabelSet, LabelSet, LabelSet, LabelSet]:
        return (self.settings_a, self.settings_b, self.outcomes_x, self.outcomes_y)

    def coefficient(self, a: str, b: str, x: str, y: str) -> Scalar:
        ia = self.settings_a.position(a)
        ib = self.settings_b.position(b)
        ix = self.outcomes_x.position(x)
        iy = self.outcomes_y.position(y)
        if None in (ia, ib, ix, iy):
            raise SpaceMismatch(f"no coefficient at ({a},{b},{x},{y})")
        nx, ny = len(self.outcomes_x), len(self.outcomes_y)
        return self.coefficients[((ia * len(self.settings_b) + ib) * nx + ix) * ny + iy]

    @classmethod
    def from_function(
        cls,
        settings_a: LabelSet,
        settings_b: LabelSet,
        outcomes_x: LabelSet,
        outcomes_y: LabelSet,
        fn: Callable[[str, str, str, str], Scalar],
    ) -> BellExpression:
        coefficients = tuple(
            as_scalar(fn(a, b, x, y))
            for a in settings_a
            for b in settings_b
            for x in outcomes_x
            for y in outcomes_y
        )
        return cls(settings_a, settings_b, outcomes_x, outcomes_y, coefficients)


def evaluate(expression: BellExpression, behavior: Behavior) -> Scalar:
    """Full contraction sum c(a,b,x,y) * P(x,y|a,b)."""
    if expression.spaces != behavior.spaces:
        raise SpaceMismatch("expression and behavior spaces differ")
    total = ZERO
    for coefficient, probability in zip(expression.coefficients, behavior.table):
        if not coefficient.is_zero():
            total = total + coefficient * probability
    return total


def chsh() -> BellExpression:
    """The CHSH correlator functional on settings A in {0,2}, B in {1,3}.

    Coefficients are s(a,b)*x*y with the sign flipped on the (0,3)
    setting pair, so the maximally violating box evaluates to +2*sqrt2.
    """
    settings_a = LabelSet(("0", "2"))
    settings_b = LabelSet(("1", "3"))
    outcomes = LabelSet(("+1", "-1"))
    values = {"+1": 1, "-1": -1}

    def coefficient(a: str, b: str, x: str, y: str) -> Scalar:
        sign = -1 if (a, b) == ("0", "3") else 1
        return as_scalar(sign * values[x] * values[y])

    return BellExpression.from_function(settings_a, settings_b, outcomes, outcomes, coefficient)


@dataclass(frozen=True)
class DeterministicStrategy:
    """A pair of functions from settings to outcomes, one per side."""

    outputs_a: tuple[str, ...]
    outputs_b: tuple[str, ...]

    def to_behavior(self, spaces: tuple[LabelSet, LabelSet, LabelSet, LabelSet]) -> Behavior:
        sa, sb, ox, oy = spaces
        return deterministic_behavior(sa, sb, ox, oy, self.outputs_a, self.outputs_b)


def local_bound(expression: BellExpression) -> tuple[Scalar, DeterministicStrategy]:
    """Exact maximum over all deterministic local strategies.

    Ties are broken by the first strategy in lexicographic order of the
    (Alice, Bob) output tables, so the witness is deterministic.
    """
    sa, sb, ox, oy = expression.spaces
    best_value: Scalar | None = None
    best_strategy: DeterministicStrategy | None = None
    for outputs_a in product(ox.labels, repeat=len(sa)):
        for outputs_b in product(oy.labels, repeat=len(sb)):
            strategy = DeterministicStrategy(outputs_a, outputs_b)
            value = evaluate(expression, strategy.to_behavior(expression.spaces))
            if best_value is None or value > best_value:
                best_value = value
                best_strategy = strategy
    return best_value, best_strategy


def _ns_lp(expression: BellExpression) -> LpProblem:
    """LP over table entries: nonnegativity, exact normalization per
    setting pair, and marginal equality against the first counterpart
    setting (equalities encoded as inequality pairs)."""
    sa, sb, ox, oy = expression.spaces
    na, nb, nx, ny = len(sa), len(sb), len(ox), len(oy)
    n = na * nb * nx * ny

    def idx(ia: int, ib: int, ix: int, iy: int) -> int:
        return ((ia * nb + ib) * nx + ix) * ny + iy

    rows: list[tuple[Scalar, ...]] = []
    rhs: list[Scalar] = []

    def add_equality(coeffs: dict[int, Scalar], value: Scalar) -> None:
        forward = [ZERO] * n
        for j, coefficient in coeffs.items():
            forward[j] = coefficient
        rows.append(tuple(forward))
        rhs.append(value)
        rows.append(tuple(-v for v in forward))
        rhs.append(-value)

    for ia in range(na):
        for ib in range(nb):
            add_equality({idx(ia, ib, ix, iy): ONE for ix in range(nx) for iy in range(ny)}, ONE)
    for ia in range(na):
        for ix in range(nx):
            for ib in range(1, nb):
                coeffs: dict[int, Scalar] = {}
                for iy in range(ny):
                    coeffs[idx(ia, ib, ix, iy)] = ONE
                    coeffs[idx(ia, 0, ix, iy)] = -ONE
                add_equality(coeffs, ZERO)
    for ib in range(nb):
        for iy in range(ny):
            for ia in range(1, na):
                coeffs = {}
                for ix in range(nx):
                    coeffs[idx(ia, ib, ix, iy)] = ONE
                    coeffs[idx(0, ib, ix, iy)] = -ONE
                add_equality(coeffs, ZERO)
    return LpProblem(tuple(expression.coefficients), tuple(rows), tuple(rhs))


def ns_bound(expression: BellExpression) -> Scalar:
    """Exact maximum of the functional over all no-signalling behaviors."""
    solution = solve_lp(_ns_lp(expression))
    if solution.status != OPTIMAL:
        raise LpFailure(f"no-signalling bound LP ended {solution.status}")
    return solution.value
