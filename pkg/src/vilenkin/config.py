"""Configuration file loading for the construction driver.

A run is described by one TOML file.  Minimal example:

    [group]
    matrix = [[2, 0], [1, 2]]

    [mask]
    order = 3
    xi = [1, 1, 2, 1]

Optional keys: explicit digit sets ([group] digits / dual_digits, lists of
integer vectors, zero first), a sign assignment for the mask ([mask] signs,
one entry per tail column), or a direct mask value table instead of xi
([mask] values as [re, im] pairs plus support_exponent).  A [checks] table
selects which verifications run and scales tolerances; [output] names the
artifact directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .errors import ConfigError

KNOWN_CHECKS = (
    "mask_orthogonality",
    "mask_admissible",
    "product_closed_form",
    "shift_orthonormality",
    "polyphase",
    "wavelet_mean",
    "refinement",
    "transform_roundtrip",
    "gram",
    "filter_bank",
)

BASE_TOLERANCES = {
    "mask_orthogonality": 1e-12,
    "mask_admissible": 1e-12,
    "product_closed_form": 1e-12,
    "shift_orthonormality": 1e-12,
    "polyphase": 1e-12,
    "wavelet_mean": 1e-12,
    "refinement": 1e-12,
    "transform_roundtrip": 1e-12,
    "gram": 1e-9,
    "filter_bank": 1e-10,
}


@dataclass
class ConstructionConfig:
    matrix: list
    digits: Optional[list]
    dual_digits: Optional[list]
    order: int
    xi: Optional[list]
    signs: Optional[list]
    mask_values: Optional[np.ndarray]
    support_exponent: Optional[int]
    checks: list = field(default_factory=lambda: list(KNOWN_CHECKS))
    tolerance_scale: float = 1.0
    output_dir: str = "artifacts"


def _want(table: dict, key: str, kinds, where: str, required: bool = False):
    if key not in table:
        if required:
            raise ConfigError(f"{where}.{key}: missing required key")
        return None
    val = table[key]
    if not isinstance(val, kinds):
        names = kinds.__name__ if isinstance(kinds, type) else "/".join(k.__name__ for k in kinds)
        raise ConfigError(f"{where}.{key}: expected {names}, got {type(val).__name__}")
    return val


def _int_matrix(rows, where: str) -> list:
    if not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{where}: expected a list of integer rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ConfigError(f"{where}[{i}]: row length {len(r)} != {width}")
        for j, v in enumerate(r):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{where}[{i}][{j}]: expected an integer, got {v!r}")
    return [list(r) for r in rows]


def _complex_entry(v, where: str) -> complex:
    if isinstance(v, bool):
        raise ConfigError(f"{where}: expected a number or [re, im] pair, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{where}: expected a number or [re, im] pair, got {v!r}")


def parse_config_text(text: str) -> ConstructionConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error: {exc}") from exc

    unknown = set(doc) - {"group", "mask", "checks", "output"}
    if unknown:
        raise ConfigError(f"unknown top-level tables: {sorted(unknown)}")
    group = _want(doc, "group", dict, "config", required=True)
    mask = _want(doc, "mask", dict, "config", required=True)

    matrix = _int_matrix(_want(group, "matrix", list, "group", required=True), "group.matrix")
    digits = _want(group, "digits", list, "group")
    if digits is not None:
        digits = _int_matrix(digits, "group.digits")
    dual_digits = _want(group, "dual_digits", list, "group")
    if dual_digits is not None:
        dual_digits = _int_matrix(dual_digits, "group.dual_digits")

    order = _want(mask, "order", int, "mask", required=True)
    if isinstance(order, bool) or order < 1:
        raise ConfigError(f"mask.order: expected a positive integer, got {order!r}")
    xi = _want(mask, "xi", list, "mask")
    values = _want(mask, "values", list, "mask")
    if (xi is None) == (values is None):
        raise ConfigError("mask: exactly one of `xi` and `values` must be given")
    signs = _want(mask, "signs", list, "mask")
    if signs is not None:
        if xi is None:
            raise ConfigError("mask.signs: only meaningful together with mask.xi")
        signs = [_complex_entry(v, f"mask.signs[{i}]") for i, v in enumerate(signs)]
    if xi is not None:
        for i, v in enumerate(xi):
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ConfigError(f"mask.xi[{i}]: expected a nonnegative digit index, got {v!r}")
    mask_values = None
    if values is not None:
        mask_values = np.array([_complex_entry(v, f"mask.values[{i}]") for i, v in enumerate(values)])
    support_exponent = _want(mask, "support_exponent", int, "mask")
    if support_exponent is None and values is not None:
        support_exponent = 0

    checks_table = _want(doc, "checks", dict, "config") or {}
    run = _want(checks_table, "run", list, "checks")
    if run is None:
        run = list(KNOWN_CHECKS)
    else:
        for name in run:
            if name not in KNOWN_CHECKS:
                raise ConfigError(f"checks.run: unknown check {name!r}; known: {', '.join(KNOWN_CHECKS)}")
    scale = _want(checks_table, "tolerance_scale", (int, float), "checks")
    if scale is None:
        scale = 1.0
    if isinstance(scale, bool) or scale <= 0:
        raise ConfigError(f"checks.tolerance_scale: expected a positive number, got {scale!r}")

    output_table = _want(doc, "output", dict, "config") or {}
    outdir = _want(output_table, "directory", str, "output") or "artifacts"

    return ConstructionConfig(
        matrix=matrix,
        digits=digits,
        dual_digits=dual_digits,
        order=order,
        xi=list(xi) if xi is not None else None,
        signs=signs,
        mask_values=mask_values,
        support_exponent=support_exponent,
        checks=list(run),
        tolerance_scale=float(scale),
        output_dir=outdir,
    )


def load_config(path: str) -> ConstructionConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def tolerances_for(config: ConstructionConfig) -> dict:
    return {name: BASE_TOLERANCES[name] * config.tolerance_scale for name in config.checks}
