"""Maximal local-content decomposition of no-signalling behaviors.

The local content of a box is the largest weight p such that the box
splits as p * (mixture of local deterministic vertices) plus
(1-p) * (no-signalling remainder).  Entrywise domination by the box is
equivalent to the remainder being a valid behavior, and its
no-signalling follows automatically because the defining equalities are
affine and hold for the box and for every vertex.  The maximization is
an exact LP over the vertex weights, solved by the field simplex.

This is the standard convex-decomposition quantity; the qualitative
notion it grounds does not come with a numeric definition, so all
output labels the value "maximal local content (decomposition-based)".
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .boxes import (
    Behavior,
    LabelSet,
    deterministic_behavior,
    is_no_signalling,
    uniform_behavior,
    validate_behavior,
)
from .errors import InvalidBehavior, InvalidDecomposition, LpFailure, SignallingInput
from .hvmodel import HiddenVariableModel
from .scalar import ONE, ZERO, Scalar, format_scalar
from .simplex import OPTIMAL, LpProblem, LpSolution, solve_lp

Spaces = tuple[LabelSet, LabelSet, LabelSet, LabelSet]


def enumerate_local_vertices(spaces: Spaces) -> tuple[Behavior, ...]:
    """All deterministic local behaviors, in lexicographic order of the
    (Alice, Bob) output tables; there are |X|^|A| * |Y|^|B| of them."""
    settings_a, settings_b, outcomes_x, outcomes_y = spaces
    vertices = []
    for outputs_a in product(outcomes_x.labels, repeat=len(settings_a)):
        for outputs_b in product(outcomes_y.labels, repeat=len(settings_b)):
            vertices.append(
                deterministic_behavior(settings_a, settings_b, outcomes_x, outcomes_y, outputs_a, outputs_b)
            )
    return tuple(vertices)


@dataclass(frozen=True)
class LocalDecomposition:
    """Vertex weights, remainder box and total local content.

    ``vertices`` holds only the support (positive-weight) vertices.
    When ``local_content`` is one the decomposition is fully local; the
    residual field then carries an unused uniform box to avoid a 0/0
    normalization, flagged by ``residual_used``.
    """

    vertices: tuple[Behavior, ...]
    weights: tuple[Scalar, ...]
    residual: Behavior
    local_content: Scalar
    residual_used: bool = True
    certificate: LpSolution | None = None


def content_lp_problem(behavior: Behavior, vertices: tuple[Behavior, ...]) -> LpProblem:
    """maximize sum(q) s.t. sum_i q_i * D_i <= behavior entrywise, q >= 0."""
    rows = tuple(
        tuple(vertex.table[cell] for vertex in vertices) for cell in range(len(behavior.table))
    )
    return LpProblem((ONE,) * len(vertices), rows, behavior.table)


def max_local_content(behavior: Behavior) -> LocalDecomposition:
    """Exact maximal local content of a valid no-signalling box."""
    report = validate_behavior(behavior)
    if not report.ok:
        raise InvalidBehavior(report.summary())
    ok, witness = is_no_signalling(behavior)
    if not ok:
        raise SignallingInput(
            f"no local decomposition exists for a signalling box ({witness.describe()})"
        )
    vertices = enumerate_local_vertices(behavior.spaces)
    problem = content_lp_problem(behavior, vertices)
    solution = solve_lp(problem)
    if solution.status != OPTIMAL:
        raise LpFailure(f"local-content LP ended {solution.status}")
    content = solution.value
    support = [(vertex, q) for vertex, q in zip(vertices, solution.q) if q.sign() > 0]
    local_part = [ZERO] * len(behavior.table)
    for vertex, q in support:
        for i, cell in enumerate(vertex.table):
            if not cell.is_zero():
                local_part[i] = local_part[i] + q * cell
    if content != ONE:
        remainder_weight = ONE - content
        residual = Behavior(
            *behavior.spaces,
            tuple((cell - local) / remainder_weight for cell, local in zip(behavior.table, local_part)),
        )
        residual_used = True
    else:
        residual = uniform_behavior(*behavior.spaces)
        residual_used = False
    return LocalDecomposition(
        vertices=tuple(v for v, _ in support),
        weights=tuple(q for _, q in support),
        residual=residual,
        local_content=content,
        residual_used=residual_used,
        certificate=solution,
    )


def _is_deterministic_vertex(behavior: Behavior) -> bool:
    if not validate_behavior(behavior).ok:
        return False
    if any(not (cell.is_zero() or cell == ONE) for cell in behavior.table):
        return False
    ok, _ = is_no_signalling(behavior)
    return ok


def _strategy_of_vertex(vertex: Behavior) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Recover the output tables of a deterministic no-signalling vertex."""
    b0 = vertex.settings_b.labels[0]
    a0 = vertex.settings_a.labels[0]
    outputs_a = []
    for a in vertex.settings_a:
        for x in vertex.outcomes_x:
            if any(vertex.p(a, b0, x, y) == ONE for y in vertex.outcomes_y):
                outputs_a.append(x)
                break
    outputs_b = []
    for b in vertex.settings_b:
        for y in vertex.outcomes_y:
            if any(vertex.p(a0, b, x, y) == ONE for x in vertex.outcomes_x):
                outputs_b.append(y)
                break
    return tuple(outputs_a), tuple(outputs_b)


def _strategy_label(outputs: tuple[str, ...]) -> str:
    if len(set(outputs)) == 1:
        return outputs[0]
    return ",".join(outputs)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class DecompositionReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def summary(self) -> str:
        return "; ".join(
            f"{check.name}: {'ok' if check.ok else 'FAIL'}" + (f" ({check.detail})" if check.detail else "")
            for check in self.checks
        )


def verify_decomposition(decomposition: LocalDecomposition, behavior: Behavior) -> DecompositionReport:
    """Re-check every decomposition invariant against the target box.

    Works by direct arithmetic on the decomposition data; it shares no
    code with the LP and so serves as its external auditor.
    """
    checks: list[CheckResult] = []
    d = decomposition

    negative = [format_scalar(q) for q in d.weights if q.sign() < 0]
    checks.append(CheckResult("weights_nonnegative", not negative, ", ".join(negative)))

    total = ZERO
    for q in d.weights:
        total = total + q
    checks.append(
        CheckResult(
            "local_content_is_weight_sum",
            total == d.local_content and len(d.weights) == len(d.vertices),
            f"sum {format_scalar(total)} vs recorded {format_scalar(d.local_content)}",
        )
    )
    checks.append(
        CheckResult(
            "local_content_at_most_one",
            (d.local_content - ONE).sign() <= 0,
            format_scalar(d.local_content),
        )
    )

    bad_vertices = [
        i
        for i, vertex in enumerate(d.vertices)
        if vertex.spaces != behavior.spaces or not _is_deterministic_vertex(vertex)
    ]
    checks.append(
        CheckResult(
            "vertices_are_local_deterministic",
            not bad_vertices,
            f"offending indices {bad_vertices}" if bad_vertices else "",
        )
    )

    residual_report = validate_behavior(d.residual) if d.residual_used else None
    if d.residual_used:
        checks.append(
            CheckResult(
                "residual_valid",
                d.residual.spaces == behavior.spaces and residual_report.ok,
                residual_report.summary() if not residual_report.ok else "",
            )
        )

    if not bad_vertices:
        recombined = [ZERO] * len(behavior.table)
        for vertex, q in zip(d.vertices, d.weights):
            for i, cell in enumerate(vertex.table):
                if not cell.is_zero():
                    recombined[i] = recombined[i] + q * cell
        if d.residual_used:
            remainder_weight = ONE - d.local_content
            recombined = [
                value + remainder_weight * cell for value, cell in zip(recombined, d.residual.table)
            ]
        mismatch = next(
            (i for i, (got, want) in enumerate(zip(recombined, behavior.table)) if got != want), None
        )
        checks.append(
            CheckResult(
                "reconstruction_exact",
                mismatch is None,
                "" if mismatch is None else f"first differing cell index {mismatch}",
            )
        )

        original_ns, _ = is_no_signalling(behavior) if validate_behavior(behavior).ok else (False, None)
        if original_ns and d.residual_used and residual_report.ok:
            residual_ns, ns_witness = is_no_signalling(d.residual)
            checks.append(
                CheckResult(
                    "residual_no_signalling",
                    residual_ns,
                    "" if residual_ns else ns_witness.describe(),
                )
            )
    return DecompositionReport(tuple(checks))


def decomposition_to_model(decomposition: LocalDecomposition) -> HiddenVariableModel:
    """Package a decomposition as an explicit hidden-variable model.

    Each vertex becomes a hidden pair labelled by its output tables
    (collapsed to the bare outcome when constant), and the remainder,
    when present, becomes the pair ("0","0").
    """
    d = decomposition
    for q in d.weights:
        if q.sign() < 0:
            raise InvalidDecomposition(f"negative weight {format_scalar(q)}")
    total = ZERO
    for q in d.weights:
        total = total + q
    if total != d.local_content or (d.local_content - ONE).sign() > 0:
        raise InvalidDecomposition("weights are inconsistent with the recorded local content")
    for vertex in d.vertices:
        if not _is_deterministic_vertex(vertex):
            raise InvalidDecomposition("vertices must be deterministic local behaviors")

    pairs: list[tuple[str, str]] = []
    weights: list[Scalar] = []
    kernels: list[Behavior] = []
    for vertex, q in zip(d.vertices, d.weights):
        outputs_a, outputs_b = _strategy_of_vertex(vertex)
        pairs.append((_strategy_label(outputs_a), _strategy_label(outputs_b)))
        weights.append(q)
        kernels.append(vertex)
    if d.local_content != ONE:
        if not validate_behavior(d.residual).ok:
            raise InvalidDecomposition("residual is not a valid behavior")
        label = ("0", "0")
        while label in pairs:
            label = (label[0] + "'", label[1] + "'")
        pairs.append(label)
        weights.append(ONE - d.local_content)
        kernels.append(d.residual)
    return HiddenVariableModel(tuple(pairs), tuple(weights), tuple(kernels))
