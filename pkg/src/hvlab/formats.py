"""JSON file formats for boxes, models and Bell expressions.

JSON is the container; every number is a string in the exact scalar
grammar, because raw JSON numbers cannot represent sqrt(2).  Table maps
are keyed by the literal setting labels joined with "|", which is why
labels may not contain that character.  Serialization emits canonical
scalar strings, so parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .bell import BellExpression
from .boxes import Behavior, LabelSet, validate_behavior
from .errors import (
    FileFormatError,
    HvlabError,
    InvalidBehavior,
    InvalidModel,
)
from .hvmodel import (
    ExtendedModel,
    HiddenVariableModel,
    WExtension,
    validate_extended_model,
    validate_model,
)
from .scalar import Scalar, format_scalar, parse_scalar

_SPACE_KEYS = ("settings_a", "settings_b", "outcomes_x", "outcomes_y")


def _parse_label_array(data: Any, key: str) -> LabelSet:
    if not isinstance(data, list) or not data:
        raise FileFormatError(f"{key} must be a non-empty array of strings")
    for label in data:
        if not isinstance(label, str) or not label:
            raise FileFormatError(f"{key} entries must be non-empty strings")
        if "|" in label:
            raise FileFormatError(f"label {label!r} in {key} contains the reserved character '|'")
    try:
        return LabelSet(tuple(data))
    except ValueError as exc:
        raise FileFormatError(f"{key}: {exc}") from exc


def _parse_spaces(data: dict[str, Any]) -> tuple[LabelSet, LabelSet, LabelSet, LabelSet]:
    return tuple(_parse_label_array(data.get(key), key) for key in _SPACE_KEYS)


def _parse_cell(text: Any, where: str) -> Scalar:
    if not isinstance(text, str):
        raise FileFormatError(f"{where}: expected a scalar string, got {type(text).__name__}")
    try:
        return parse_scalar(text)
    except HvlabError as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def _parse_table(
    data: Any,
    spaces: tuple[LabelSet, LabelSet, LabelSet, LabelSet],
    where: str,
) -> tuple[Scalar, ...]:
    settings_a, settings_b, outcomes_x, outcomes_y = spaces
    if not isinstance(data, dict):
        raise FileFormatError(f"{where} must be an object keyed by 'a|b'")
    expected_keys = {f"{a}|{b}" for a in settings_a for b in settings_b}
    if set(data.keys()) != expected_keys:
        raise FileFormatError(
            f"{where} keys must be exactly the setting product {sorted(expected_keys)}"
        )
    table: list[Scalar] = []
    for a in settings_a:
        for b in settings_b:
            block = data[f"{a}|{b}"]
            if (
                not isinstance(block, list)
                or len(block) != len(outcomes_x)
                or any(not isinstance(row, list) or len(row) != len(outcomes_y) for row in block)
            ):
                raise FileFormatError(
                    f"{where}['{a}|{b}'] must be a {len(outcomes_x)}x{len(outcomes_y)} array"
                )
            for ix, row in enumerate(block):
                for iy, cell in enumerate(row):
                    table.append(_parse_cell(cell, f"{where}['{a}|{b}'][{ix}][{iy}]"))
    return tuple(table)


def _serialize_table(spaces, table) -> dict[str, list[list[str]]]:
    settings_a, settings_b, outcomes_x, outcomes_y = spaces
    nx, ny = len(outcomes_x), len(outcomes_y)
    result: dict[str, list[list[str]]] = {}
    i = 0
    for a in settings_a:
        for b in settings_b:
            block = [[format_scalar(table[i + ix * ny + iy]) for iy in range(ny)] for ix in range(nx)]
            result[f"{a}|{b}"] = block
            i += nx * ny
    return result


def _check_labels_serializable(spaces) -> None:
    for space in spaces:
        for label in space:
            if "|" in label:
                raise FileFormatError(f"label {label!r} contains the reserved character '|'")


def _require_keys(data: dict[str, Any], required: set[str], optional: set[str], what: str) -> None:
    keys = set(data.keys())
    missing = required - keys
    unknown = keys - required - optional
    if missing or unknown:
        raise FileFormatError(f"{what}: missing keys {sorted(missing)}, unknown keys {sorted(unknown)}")


def behavior_to_dict(behavior: Behavior) -> dict[str, Any]:
    _check_labels_serializable(behavior.spaces)
    data: dict[str, Any] = {key: list(space.labels) for key, space in zip(_SPACE_KEYS, behavior.spaces)}
    data["p"] = _serialize_table(behavior.spaces, behavior.table)
    return data


def behavior_from_dict(data: Any, require_valid: bool = True) -> Behavior:
    if not isinstance(data, dict):
        raise FileFormatError("box file must contain a JSON object")
    _require_keys(data, set(_SPACE_KEYS) | {"p"}, set(), "box file")
    spaces = _parse_spaces(data)
    behavior = Behavior(*spaces, _parse_table(data["p"], spaces, "p"))
    if require_valid:
        report = validate_behavior(behavior)
        if not report.ok:
            raise InvalidBehavior(report.summary())
    return behavior


def expression_to_dict(expression: BellExpression) -> dict[str, Any]:
    _check_labels_serializable(expression.spaces)
    data: dict[str, Any] = {key: list(space.labels) for key, space in zip(_SPACE_KEYS, expression.spaces)}
    data["c"] = _serialize_table(expression.spaces, expression.coefficients)
    return data


def expression_from_dict(data: Any) -> BellExpression:
    if not isinstance(data, dict):
        raise FileFormatError("expression file must contain a JSON object")
    _require_keys(data, set(_SPACE_KEYS) | {"c"}, set(), "expression file")
    spaces = _parse_spaces(data)
    return BellExpression(*spaces, _parse_table(data["c"], spaces, "c"))


def model_to_dict(model: HiddenVariableModel | ExtendedModel) -> dict[str, Any]:
    _check_labels_serializable(model.spaces)
    data: dict[str, Any] = {key: list(space.labels) for key, space in zip(_SPACE_KEYS, model.spaces)}
    pairs = []
    if isinstance(model, HiddenVariableModel):
        for pair, weight, kernel in model.items():
            pairs.append(
                {
                    "u": pair[0],
                    "v": pair[1],
                    "weight": format_scalar(weight),
                    "p": _serialize_table(model.spaces, kernel.table),
                }
            )
    else:
        for pair, weight, extension in zip(model.pairs, model.weights, model.extensions):
            entry: dict[str, Any] = {"u": pair[0], "v": pair[1], "weight": format_scalar(weight)}
            entry["w_extension"] = [
                {
                    "w": w,
                    "weight": format_scalar(w_weight),
                    "p": _serialize_table(model.spaces, kernel.table),
                }
                for w, w_weight, kernel in zip(extension.values, extension.weights, extension.kernels)
            ]
            pairs.append(entry)
    data["pairs"] = pairs
    return data


def model_from_dict(data: Any, require_valid: bool = True) -> HiddenVariableModel | ExtendedModel:
    """Parse a model file; the result is extended iff any pair carries a
    w_extension (extensionless pairs then get a single trivial w)."""
    if not isinstance(data, dict):
        raise FileFormatError("model file must contain a JSON object")
    _require_keys(data, set(_SPACE_KEYS) | {"pairs"}, set(), "model file")
    spaces = _parse_spaces(data)
    raw_pairs = data["pairs"]
    if not isinstance(raw_pairs, list) or not raw_pairs:
        raise FileFormatError("pairs must be a non-empty array")
    pairs: list[tuple[str, str]] = []
    weights: list[Scalar] = []
    bodies: list[Any] = []
    extended = False
    for index, entry in enumerate(raw_pairs):
        where = f"pairs[{index}]"
        if not isinstance(entry, dict):
            raise FileFormatError(f"{where} must be an object")
        if "w_extension" in entry:
            _require_keys(entry, {"u", "v", "weight", "w_extension"}, set(), where)
            extended = True
        else:
            _require_keys(entry, {"u", "v", "weight", "p"}, set(), where)
        u, v = entry.get("u"), entry.get("v")
        if not isinstance(u, str) or not isinstance(v, str) or not u or not v:
            raise FileFormatError(f"{where}: u and v must be non-empty strings")
        pairs.append((u, v))
        weights.append(_parse_cell(entry["weight"], f"{where}.weight"))
        bodies.append(entry)

    def kernel_of(entry: Any, where: str) -> Behavior:
        return Behavior(*spaces, _parse_table(entry["p"], spaces, f"{where}.p"))

    try:
        if not extended:
            kernels = [kernel_of(entry, f"pairs[{i}]") for i, entry in enumerate(bodies)]
            model: HiddenVariableModel | ExtendedModel = HiddenVariableModel(
                tuple(pairs), tuple(weights), tuple(kernels)
            )
        else:
            extensions = []
            for i, entry in enumerate(bodies):
                where = f"pairs[{i}]"
                if "w_extension" not in entry:
                    extensions.append(
                        WExtension(LabelSet(("0",)), (parse_scalar("1"),), (kernel_of(entry, where),))
                    )
                    continue
                raw_ext = entry["w_extension"]
                if not isinstance(raw_ext, list) or not raw_ext:
                    raise FileFormatError(f"{where}.w_extension must be a non-empty array")
                w_values: list[str] = []
                w_weights: list[Scalar] = []
                w_kernels: list[Behavior] = []
                for k, sub in enumerate(raw_ext):
                    sub_where = f"{where}.w_extension[{k}]"
                    if not isinstance(sub, dict):
                        raise FileFormatError(f"{sub_where} must be an object")
                    _require_keys(sub, {"w", "weight", "p"}, set(), sub_where)
                    w = sub.get("w")
                    if not isinstance(w, str) or not w:
                        raise FileFormatError(f"{sub_where}: w must be a non-empty string")
                    w_values.append(w)
                    w_weights.append(_parse_cell(sub["weight"], f"{sub_where}.weight"))
                    w_kernels.append(kernel_of(sub, sub_where))
                try:
                    ext_values = LabelSet(tuple(w_values))
                except ValueError as exc:
                    raise FileFormatError(f"{where}.w_extension: {exc}") from exc
                extensions.append(WExtension(ext_values, tuple(w_weights), tuple(w_kernels)))
            model = ExtendedModel(tuple(pairs), tuple(weights), tuple(extensions))
    except InvalidModel as exc:
        raise FileFormatError(f"model file: {exc}") from exc
    if require_valid:
        if isinstance(model, HiddenVariableModel):
            report = validate_model(model)
            if not report.ok:
                raise InvalidModel(report.summary())
        else:
            problems = validate_extended_model(model)
            if problems:
                raise InvalidModel("; ".join(problems))
    return model


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise FileFormatError(f"{path} is not valid UTF-8 text") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from exc


def load_box(path: str | Path, require_valid: bool = True) -> Behavior:
    return behavior_from_dict(_load_json(path), require_valid=require_valid)


def load_model(path: str | Path, require_valid: bool = True) -> HiddenVariableModel | ExtendedModel:
    return model_from_dict(_load_json(path), require_valid=require_valid)


def load_expression(path: str | Path) -> BellExpression:
    return expression_from_dict(_load_json(path))


def sniff_kind(data: Any) -> str:
    """Classify a parsed JSON document as 'box', 'model' or 'expression'."""
    if isinstance(data, dict):
        if "p" in data:
            return "box"
        if "pairs" in data:
            return "model"
        if "c" in data:
            return "expression"
    raise FileFormatError("file is neither a box, a model nor an expression file")


def load_any(path: str | Path, require_valid: bool = True):
    data = _load_json(path)
    kind = sniff_kind(data)
    if kind == "box":
        return kind, behavior_from_dict(data, require_valid=require_valid)
    if kind == "model":
        return kind, model_from_dict(data, require_valid=require_valid)
    return kind, expression_from_dict(data)


def dump_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2) + "\n"


def save_box(behavior: Behavior, path: str | Path) -> None:
    Path(path).write_text(dump_json(behavior_to_dict(behavior)), encoding="utf-8")


def save_model(model: HiddenVariableModel | ExtendedModel, path: str | Path) -> None:
    Path(path).write_text(dump_json(model_to_dict(model)), encoding="utf-8")


def save_expression(expression: BellExpression, path: str | Path) -> None:
    Path(path).write_text(dump_json(expression_to_dict(expression)), encoding="utf-8")
