"""Bipartite behaviors (boxes) and finite joint tables.

A behavior is a conditional distribution P(x,y|a,b) over finite label
sets, stored as an exact Scalar per cell.  All operations are pure and
all values immutable, so everything here is safe for concurrent use.

Construction only checks structure (label sets and table shape); the
probabilistic invariants are the job of :func:`validate_behavior`,
which reports violations instead of raising so that deliberately broken
tables can be inspected.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Literal, Sequence

from .errors import (
    BadPartition,
    InvalidBehavior,
    InvalidJointTable,
    SpaceMismatch,
    UnknownOutcome,
    UnknownSetting,
    WeightSumMismatch,
)
from .scalar import ONE, ZERO, Scalar, as_scalar, format_scalar

Side = Literal["alice", "bob"]


@dataclass(frozen=True)
class LabelSet:
    """Ordered set of distinct non-empty labels; order defines indexing."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("label set must not be empty")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"labels must be non-empty strings, got {label!r}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels!r}")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def position(self, label: str) -> int | None:
        try:
            return self.labels.index(label)
        except ValueError:
            return None


def _require_setting(space: LabelSet, label: str, side: str) -> int:
    pos = space.position(label)
    if pos is None:
        raise UnknownSetting(f"unknown {side} setting {label!r}; known: {space.labels}")
    return pos


def _require_outcome(space: LabelSet, label: str, side: str) -> int:
    pos = space.position(label)
    if pos is None:
        raise UnknownOutcome(f"unknown {side} outcome {label!r}; known: {space.labels}")
    return pos


@dataclass(frozen=True)
class Behavior:
    """Conditional distribution P(x,y|a,b), row-major over (a,b,x,y)."""

    settings_a: LabelSet
    settings_b: LabelSet
    outcomes_x: LabelSet
    outcomes_y: LabelSet
    table: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(self.table))
        expected = len(self.settings_a) * len(self.settings_b) * len(self.outcomes_x) * len(self.outcomes_y)
        if len(self.table) != expected:
            raise ValueError(f"table has {len(self.table)} entries, expected {expected}")
        for value in self.table:
            if not isinstance(value, Scalar):
                raise TypeError(f"table entries must be Scalar, got {type(value).__name__}")

    @property
    def spaces(self) -> tuple[LabelSet, LabelSet, LabelSet, LabelSet]:
        return (self.settings_a, self.settings_b, self.outcomes_x, self.outcomes_y)

    def _index(self, ia: int, ib: int, ix: int, iy: int) -> int:
        nx, ny = len(self.outcomes_x), len(self.outcomes_y)
        return ((ia * len(self.settings_b) + ib) * nx + ix) * ny + iy

    def at(self, ia: int, ib: int, ix: int, iy: int) -> Scalar:
        return self.table[self._index(ia, ib, ix, iy)]

    def p(self, a: str, b: str, x: str, y: str) -> Scalar:
        """Cell lookup by labels."""
        return self.at(
            _require_setting(self.settings_a, a, "alice"),
            _require_setting(self.settings_b, b, "bob"),
            _require_outcome(self.outcomes_x, x, "alice"),
            _require_outcome(self.outcomes_y, y, "bob"),
        )

    def cells(self) -> Iterator[tuple[tuple[str, str, str, str], Scalar]]:
        """Iterate ((a,b,x,y), value) in canonical row-major order."""
        i = 0
        for a in self.settings_a:
            for b in self.settings_b:
                for x in self.outcomes_x:
                    for y in self.outcomes_y:
                        yield (a, b, x, y), self.table[i]
                        i += 1

    @classmethod
    def from_function(
        cls,
        settings_a: LabelSet,
        settings_b: LabelSet,
        outcomes_x: LabelSet,
        outcomes_y: LabelSet,
        fn: Callable[[str, str, str, str], Scalar],
    ) -> Behavior:
        table = tuple(
            as_scalar(fn(a, b, x, y))
            for a in settings_a
            for b in settings_b
            for x in outcomes_x
            for y in outcomes_y
        )
        return cls(settings_a, settings_b, outcomes_x, outcomes_y, table)


def deterministic_behavior(
    settings_a: LabelSet,
    settings_b: LabelSet,
    outcomes_x: LabelSet,
    outcomes_y: LabelSet,
    outputs_a: Sequence[str],
    outputs_b: Sequence[str],
) -> Behavior:
    """Behavior induced by fixed outcome assignments per setting.

    outputs_a[i] is Alice's outcome for her i-th setting, likewise
    outputs_b for Bob; the result has exactly one unit cell per (a, b).
    """
    if len(outputs_a) != len(settings_a) or len(outputs_b) != len(settings_b):
        raise ValueError("one output per setting is required")
    fa = dict(zip(settings_a, outputs_a))
    fb = dict(zip(settings_b, outputs_b))
    for out in outputs_a:
        _require_outcome(outcomes_x, out, "alice")
    for out in outputs_b:
        _require_outcome(outcomes_y, out, "bob")
    return Behavior.from_function(
        settings_a,
        settings_b,
        outcomes_x,
        outcomes_y,
        lambda a, b, x, y: ONE if (fa[a] == x and fb[b] == y) else ZERO,
    )


def uniform_behavior(
    settings_a: LabelSet, settings_b: LabelSet, outcomes_x: LabelSet, outcomes_y: LabelSet
) -> Behavior:
    cell = ONE / (len(outcomes_x) * len(outcomes_y))
    return Behavior.from_function(settings_a, settings_b, outcomes_x, outcomes_y, lambda a, b, x, y: cell)


@dataclass(frozen=True)
class BehaviorReport:
    """Outcome of validate_behavior; empty fields mean a valid box."""

    negative_cells: tuple[tuple[str, str, str, str, Scalar], ...]
    bad_normalizations: tuple[tuple[str, str, Scalar], ...]

    @property
    def ok(self) -> bool:
        return not self.negative_cells and not self.bad_normalizations

    def summary(self) -> str:
        if self.ok:
            return "valid"
        parts = []
        for a, b, x, y, value in self.negative_cells:
            parts.append(f"negative cell P({x},{y}|{a},{b}) = {format_scalar(value)}")
        for a, b, total in self.bad_normalizations:
            parts.append(f"row ({a},{b}) sums to {format_scalar(total)}")
        return "; ".join(parts)


def validate_behavior(behavior: Behavior) -> BehaviorReport:
    """Check nonnegativity and exact per-(a,b) normalization."""
    negatives: list[tuple[str, str, str, str, Scalar]] = []
    bad_rows: list[tuple[str, str, Scalar]] = []
    totals: dict[tuple[str, str], Scalar] = {}
    for (a, b, x, y), value in behavior.cells():
        if value.sign() < 0:
            negatives.append((a, b, x, y, value))
        totals[(a, b)] = totals.get((a, b), ZERO) + value
    for (a, b), total in totals.items():
        if total != ONE:
            bad_rows.append((a, b, total))
    return BehaviorReport(tuple(negatives), tuple(bad_rows))


def marginal(behavior: Behavior, side: Side, settings: tuple[str, str]) -> dict[str, Scalar]:
    """One-side outcome distribution P(x|a,b) or P(y|a,b)."""
    a, b = settings
    ia = _require_setting(behavior.settings_a, a, "alice")
    ib = _require_setting(behavior.settings_b, b, "bob")
    result: dict[str, Scalar] = {}
    if side == "alice":
        for ix, x in enumerate(behavior.outcomes_x):
            total = ZERO
            for iy in range(len(behavior.outcomes_y)):
                total = total + behavior.at(ia, ib, ix, iy)
            result[x] = total
    elif side == "bob":
        for iy, y in enumerate(behavior.outcomes_y):
            total = ZERO
            for ix in range(len(behavior.outcomes_x)):
                total = total + behavior.at(ia, ib, ix, iy)
            result[y] = total
    else:
        raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")
    return result


@dataclass(frozen=True)
class NsWitness:
    """Counterexample to no-signalling: one marginal value moved when the
    other party changed setting."""

    side: Side
    setting: str
    counterpart_reference: str
    counterpart_other: str
    outcome: str
    value_reference: Scalar
    value_other: Scalar

    def __post_init__(self) -> None:
        if self.value_reference == self.value_other:
            raise ValueError("witness values must differ")

    def describe(self) -> str:
        own = "a" if self.side == "alice" else "b"
        other = "b" if self.side == "alice" else "a"
        return (
            f"{self.side} marginal at {own}={self.setting}, outcome {self.outcome} "
            f"depends on the counterpart: {other}={self.counterpart_reference} gives "
            f"{format_scalar(self.value_reference)} but {other}={self.counterpart_other} gives "
            f"{format_scalar(self.value_other)}"
        )


def is_no_signalling(behavior: Behavior) -> tuple[bool, NsWitness | None]:
    """Check that each party's marginals ignore the other's setting.

    Marginals are compared against the first counterpart setting; the
    equality relation is transitive so this is equivalent to comparing
    all pairs.  Requires a valid behavior.
    """
    report = validate_behavior(behavior)
    if not report.ok:
        raise InvalidBehavior(report.summary())
    b_ref = behavior.settings_b.labels[0]
    for a in behavior.settings_a:
        reference = marginal(behavior, "alice", (a, b_ref))
        for b in behavior.settings_b.labels[1:]:
            other = marginal(behavior, "alice", (a, b))
            for x in behavior.outcomes_x:
                if reference[x] != other[x]:
                    return False, NsWitness("alice", a, b_ref, b, x, reference[x], other[x])
    a_ref = behavior.settings_a.labels[0]
    for b in behavior.settings_b:
        reference = marginal(behavior, "bob", (a_ref, b))
        for a in behavior.settings_a.labels[1:]:
            other = marginal(behavior, "bob", (a, b))
            for y in behavior.outcomes_y:
                if reference[y] != other[y]:
                    return False, NsWitness("bob", b, a_ref, a, y, reference[y], other[y])
    return True, None


def mix(components: Iterable[tuple[Scalar | int, Behavior]]) -> Behavior:
    """Entrywise convex combination of behaviors sharing one set of spaces."""
    pairs = [(as_scalar(w), behavior) for w, behavior in components]
    if not pairs:
        raise WeightSumMismatch("empty mixture")
    spaces = pairs[0][1].spaces
    for _, behavior in pairs:
        if behavior.spaces != spaces:
            raise SpaceMismatch("mixture components must share all label sets")
    total = ZERO
    for weight, _ in pairs:
        if weight.sign() < 0:
            raise WeightSumMismatch(f"negative mixture weight {format_scalar(weight)}")
        total = total + weight
    if total != ONE:
        raise WeightSumMismatch(f"mixture weights sum to {format_scalar(total)}, expected 1")
    size = len(pairs[0][1].table)
    table = [ZERO] * size
    for weight, behavior in pairs:
        if weight.is_zero():
            continue
        for i in range(size):
            table[i] = table[i] + weight * behavior.table[i]
    return Behavior(*spaces, tuple(table))


@dataclass(frozen=True)
class JointTable:
    """Exact joint distribution over a list of named finite variables."""

    variables: tuple[tuple[str, LabelSet], ...]
    table: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple((name, space) for name, space in self.variables))
        object.__setattr__(self, "table", tuple(self.table))
        names = [name for name, _ in self.variables]
        if len(set(names)) != len(names):
            raise InvalidJointTable(f"duplicate variable names in {names}")
        if not names:
            raise InvalidJointTable("joint table needs at least one variable")
        expected = 1
        for _, space in self.variables:
            expected *= len(space)
        if len(self.table) != expected:
            raise InvalidJointTable(f"table has {len(self.table)} entries, expected {expected}")
        total = ZERO
        for value in self.table:
            if value.sign() < 0:
                raise InvalidJointTable(f"negative entry {format_scalar(value)}")
            total = total + value
        if total != ONE:
            raise InvalidJointTable(f"entries sum to {format_scalar(total)}, expected 1")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    def assignments(self) -> Iterator[tuple[str, ...]]:
        yield from product(*(space.labels for _, space in self.variables))

    def value(self, assignment: Sequence[str]) -> Scalar:
        index = 0
        for (name, space), label in zip(self.variables, assignment):
            pos = space.position(label)
            if pos is None:
                raise UnknownOutcome(f"variable {name} has no value {label!r}")
            index = index * len(space) + pos
        return self.table[index]

    @classmethod
    def from_function(
        cls,
        variables: Sequence[tuple[str, LabelSet]],
        fn: Callable[..., Scalar],
    ) -> JointTable:
        variables = tuple(variables)
        table = tuple(as_scalar(fn(*assignment)) for assignment in product(*(s.labels for _, s in variables)))
        return cls(variables, table)

    def marginal_over(self, names: Sequence[str]) -> dict[tuple[str, ...], Scalar]:
        """Marginal distribution of the named variables, in the given order."""
        positions = []
        for name in names:
            if name not in self.names:
                raise BadPartition(f"unknown variable {name!r}")
            positions.append(self.names.index(name))
        result: dict[tuple[str, ...], Scalar] = {}
        for assignment, value in zip(self.assignments(), self.table):
            key = tuple(assignment[i] for i in positions)
            result[key] = result.get(key, ZERO) + value
        return result


@dataclass(frozen=True)
class ProductWitness:
    """Assignment where a joint table differs from the product of its
    two block marginals."""

    assignment: tuple[tuple[str, str], ...]
    joint_value: Scalar
    left_value: Scalar
    right_value: Scalar

    def __post_init__(self) -> None:
        if self.joint_value == self.left_value * self.right_value:
            raise ValueError("witness must violate the product identity")

    def describe(self) -> str:
        where = ", ".join(f"{name}={label}" for name, label in self.assignment)
        return (
            f"at {where}: joint {format_scalar(self.joint_value)} != "
            f"{format_scalar(self.left_value)} * {format_scalar(self.right_value)} "
            f"= {format_scalar(self.left_value * self.right_value)}"
        )


def check_product(
    joint: JointTable, left: Sequence[str], right: Sequence[str]
) -> tuple[bool, ProductWitness | None]:
    """Exact independence test between two blocks of variables.

    left and right must partition the table's variables; returns the
    first violating assignment (in table order) as a witness.
    """
    left = tuple(left)
    right = tuple(right)
    names = set(joint.names)
    if not left or not right:
        raise BadPartition("both blocks of the partition must be non-empty")
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise BadPartition("duplicate variable in partition block")
    if set(left) & set(right):
        raise BadPartition(f"blocks overlap on {sorted(set(left) & set(right))}")
    if set(left) | set(right) != names:
        missing = sorted(names - set(left) - set(right))
        unknown = sorted((set(left) | set(right)) - names)
        raise BadPartition(f"not a partition (missing {missing}, unknown {unknown})")
    left_marginal = joint.marginal_over(left)
    right_marginal = joint.marginal_over(right)
    left_positions = [joint.names.index(name) for name in left]
    right_positions = [joint.names.index(name) for name in right]
    for assignment, value in zip(joint.assignments(), joint.table):
        lv = left_marginal[tuple(assignment[i] for i in left_positions)]
        rv = right_marginal[tuple(assignment[i] for i in right_positions)]
        if value != lv * rv:
            witness = ProductWitness(
                tuple(zip(joint.names, assignment)),
                value,
                lv,
                rv,
            )
            return False, witness
    return True, None
