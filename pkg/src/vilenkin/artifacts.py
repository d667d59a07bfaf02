"""Artifact serialization and table-level re-verification.

Every object a run produces is one JSON file: value tables carry their
shape metadata and complex entries as [re, im] pairs; the manifest pins
the group data, the mask recipe, the tolerances, and the file list.
Serialization is canonical (sorted keys, fixed indentation, no
timestamps), so identical runs produce byte-identical artifacts.  The
verification report is the one exception: it records wall times and is
never compared byte-wise.

`verify_artifacts` recomputes every defect from the serialized tables
alone, without re-running the construction, so a third party can audit a
result from the files.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import TestFunction, WalshPolynomial, fourier, inner_product, norm_sq, refine
from .config import BASE_TOLERANCES, KNOWN_CHECKS
from .construction import (
    mask_admissible,
    mask_orthogonality_defect,
    phi_hat_from_product,
    shift_orthonormality_defect,
)
from .errors import ConfigError, VilenkinError
from .group import DUAL, PRIMAL, build_group_context, resolve_digit_set, validate_dilation_pair
from .wavelets import MaskFamily, WaveletSystem, check_polyphase, desk_gram_report, mask_taps
from . import wavelets

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"
REPORT_NAME = "report.json"


def _pairs(values: np.ndarray) -> list:
    arr = np.asarray(values, dtype=np.complex128) + 0.0  # clears negative zero
    return [[float(v.real), float(v.imag)] for v in arr]


def _unpairs(entries, where: str) -> np.ndarray:
    try:
        out = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: values must be [re, im] pairs: {exc}") from exc
    return out


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def function_payload(f: TestFunction) -> dict:
    return {
        "kind": "function",
        "side": f.side,
        "smoothness": f.smoothness,
        "support_exponent": f.support_exp,
        "values": _pairs(f.values),
    }


def mask_payload(poly: WalshPolynomial) -> dict:
    return {"kind": "mask", "order": poly.order, "values": _pairs(poly.values)}


def payload_to_function(ctx, payload: dict, where: str) -> TestFunction:
    for key in ("side", "smoothness", "support_exponent", "values"):
        if key not in payload:
            raise ConfigError(f"{where}: missing field {key!r}")
    return TestFunction(
        ctx,
        payload["side"],
        int(payload["smoothness"]),
        int(payload["support_exponent"]),
        _unpairs(payload["values"], where),
    )


def payload_to_mask(ctx, payload: dict, where: str) -> WalshPolynomial:
    for key in ("order", "values"):
        if key not in payload:
            raise ConfigError(f"{where}: missing field {key!r}")
    return WalshPolynomial(ctx, int(payload["order"]), _unpairs(payload["values"], where))


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "error"
    defect: Optional[float]
    tolerance: Optional[float]
    wall_time: float
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "defect": self.defect,
            "tolerance": self.tolerance,
            "wall_time_s": self.wall_time,
            "message": self.message,
        }


@dataclass
class VerificationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.status == "pass" for c in self.checks)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.as_dict() for c in self.checks]}

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            if c.defect is None:
                body = c.message
            else:
                body = f"defect={c.defect:.3e} tol={c.tolerance:.1e}"
            lines.append(f"{c.status.upper():5s} {c.name:24s} {body} ({c.wall_time:.3f}s)")
        verdict = "all checks passed" if self.passed else "FAILURES PRESENT"
        lines.append(verdict)
        return "\n".join(lines)


class _Runner:
    def __init__(self, requested: Sequence[str], tolerances: dict):
        self.requested = list(requested)
        self.tolerances = tolerances
        self.results: list = []

    def run(self, name: str, fn) -> None:
        if name not in self.requested:
            return
        tol = self.tolerances.get(name, BASE_TOLERANCES[name])
        start = time.perf_counter()
        try:
            defect = float(fn())
        except VilenkinError as exc:
            self.results.append(
                CheckResult(name, "error", None, tol, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
            )
            return
        status = "pass" if defect <= tol else "fail"
        self.results.append(CheckResult(name, status, defect, tol, time.perf_counter() - start))

    def report(self) -> VerificationReport:
        return VerificationReport(self.results)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def write_artifacts(
    outdir: str,
    manifest_body: dict,
    mask_family: MaskFamily,
    system: WaveletSystem,
) -> dict:
    """Serialize every table plus the manifest; returns the manifest dict."""
    os.makedirs(outdir, exist_ok=True)
    files = {"refinement_mask": "mask_0.json", "phi_hat": "phi_hat.json", "phi": "phi.json"}
    payloads = {
        "mask_0.json": mask_payload(mask_family.masks[0]),
        "phi_hat.json": function_payload(system.phi_hat),
        "phi.json": function_payload(system.phi),
    }
    for nu in range(1, len(mask_family)):
        files[f"wavelet_mask_{nu}"] = f"mask_{nu}.json"
        payloads[f"mask_{nu}.json"] = mask_payload(mask_family.masks[nu])
    for nu, (hat, fun) in enumerate(zip(system.psi_hat, system.psi), start=1):
        files[f"psi_hat_{nu}"] = f"psi_hat_{nu}.json"
        files[f"psi_{nu}"] = f"psi_{nu}.json"
        payloads[f"psi_hat_{nu}.json"] = function_payload(hat)
        payloads[f"psi_{nu}.json"] = function_payload(fun)
    manifest = dict(manifest_body)
    manifest["format_version"] = FORMAT_VERSION
    manifest["files"] = files
    for name, payload in payloads.items():
        _write(os.path.join(outdir, name), canonical_dumps(payload))
    _write(os.path.join(outdir, MANIFEST_NAME), canonical_dumps(manifest))
    return manifest


def write_report(outdir: str, report: VerificationReport) -> None:
    _write(os.path.join(outdir, REPORT_NAME), json.dumps(report.as_dict(), indent=2) + "\n")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read artifact {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"corrupt artifact {path}: {exc}") from exc


@dataclass
class LoadedArtifacts:
    manifest: dict
    ctx: object
    family: MaskFamily
    system: WaveletSystem


def context_from_manifest(manifest: dict):
    group = manifest.get("group")
    if not isinstance(group, dict) or "matrix" not in group:
        raise ConfigError("manifest.group: missing matrix")
    pair = validate_dilation_pair(group["matrix"])
    digits = resolve_digit_set(pair, PRIMAL, group.get("digits"))
    dual = resolve_digit_set(pair, DUAL, group.get("dual_digits"))
    return build_group_context(pair, digits, dual)


def load_artifacts(outdir: str) -> LoadedArtifacts:
    manifest = _load_json(os.path.join(outdir, MANIFEST_NAME))
    ctx = context_from_manifest(manifest)
    files = manifest.get("files")
    if not isinstance(files, dict):
        raise ConfigError("manifest.files: missing file table")

    def fetch(key: str) -> dict:
        if key not in files:
            raise ConfigError(f"manifest.files: missing entry {key!r}")
        return _load_json(os.path.join(outdir, files[key]))

    masks = [payload_to_mask(ctx, fetch("refinement_mask"), "refinement_mask")]
    nu = 1
    while f"wavelet_mask_{nu}" in files:
        masks.append(payload_to_mask(ctx, fetch(f"wavelet_mask_{nu}"), f"wavelet_mask_{nu}"))
        nu += 1
    family = MaskFamily(ctx=ctx, order=masks[0].order, masks=tuple(masks))
    phi_hat = payload_to_function(ctx, fetch("phi_hat"), "phi_hat")
    phi = payload_to_function(ctx, fetch("phi"), "phi")
    psi_hat = []
    psi = []
    nu = 1
    while f"psi_hat_{nu}" in files:
        psi_hat.append(payload_to_function(ctx, fetch(f"psi_hat_{nu}"), f"psi_hat_{nu}"))
        psi.append(payload_to_function(ctx, fetch(f"psi_{nu}"), f"psi_{nu}"))
        nu += 1
    system = WaveletSystem(
        ctx=ctx, family=family, phi_hat=phi_hat, phi=phi, psi_hat=tuple(psi_hat), psi=tuple(psi)
    )
    return LoadedArtifacts(manifest=manifest, ctx=ctx, family=family, system=system)


def _refinement_defect(system: WaveletSystem, family: MaskFamily) -> float:
    """Max deviation of the stored transforms from the mask recursion."""
    ctx = system.ctx
    m = ctx.modulus
    n = family.order
    base = refine(system.phi_hat, n - 1, max(system.phi_hat.support_exp, 0))
    count = m ** (n + base.support_exp)
    l = np.arange(count)
    mask_idx = l % (m**n)
    carry = base.values[l // m]
    worst = 0.0
    lifted = refine(base, n - 1, base.support_exp + 1)
    worst = max(worst, float(np.max(np.abs(lifted.values - family.masks[0].values[mask_idx] * carry))))
    for nu, hat in enumerate(system.psi_hat, start=1):
        want = family.masks[nu].values[mask_idx] * carry
        got = refine(hat, n - 1, base.support_exp + 1).values
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst


def _roundtrip_defect(system: WaveletSystem) -> float:
    worst = 0.0
    for hat, fun in [(system.phi_hat, system.phi)] + list(zip(system.psi_hat, system.psi)):
        back = fourier(hat, "inverse")
        a = refine(back, max(back.smoothness, fun.smoothness), max(back.support_exp, fun.support_exp))
        b = refine(fun, max(back.smoothness, fun.smoothness), max(back.support_exp, fun.support_exp))
        worst = max(worst, float(np.max(np.abs(a.values - b.values))))
        worst = max(worst, abs(norm_sq(hat) - norm_sq(fun)))
    return worst


def _filter_bank_defect(loaded: LoadedArtifacts) -> float:
    ctx = loaded.ctx
    m = ctx.modulus
    n = loaded.family.order
    taps = mask_taps(loaded.family)
    rng = np.random.default_rng(20240817)
    coeffs = rng.normal(size=m ** (n + 1)) + 1j * rng.normal(size=m ** (n + 1))
    approx, details = wavelets.analyze(ctx, coeffs, taps)
    rec = wavelets.synthesize(ctx, approx, details, taps)
    worst = float(np.max(np.abs(rec - coeffs)))
    energy = np.sum(np.abs(coeffs) ** 2)
    split = np.sum(np.abs(approx) ** 2) + sum(np.sum(np.abs(d) ** 2) for d in details)
    worst = max(worst, float(abs(energy - split)) / max(float(energy), 1.0))
    # two-scale consistency: taps row 0 against direct inner products of the stored phi
    direct = np.array(
        [
            inner_product(loaded.system.phi, wavelets.system_element(loaded.system.phi, 1, t))
            for t in range(m**n)
        ]
    )
    worst = max(worst, float(np.max(np.abs(direct - np.sqrt(m) * taps[0]))))
    return worst


def verify_artifacts(
    outdir: str,
    checks: Optional[Sequence[str]] = None,
    tolerance_scale: float = 1.0,
) -> VerificationReport:
    """Recompute all requested defects from the serialized tables."""
    loaded = load_artifacts(outdir)
    manifest = loaded.manifest
    requested = list(checks) if checks is not None else list(manifest.get("checks", KNOWN_CHECKS))
    tolerances = {
        name: BASE_TOLERANCES[name] * tolerance_scale
        for name in requested
        if name in BASE_TOLERANCES
    }
    unknown = [name for name in requested if name not in KNOWN_CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks requested: {unknown}")
    runner = _Runner(requested, tolerances)
    system = loaded.system
    family = loaded.family

    runner.run("mask_orthogonality", lambda: mask_orthogonality_defect(family.masks[0]))
    runner.run("mask_admissible", lambda: 0.0 if mask_admissible(family.masks[0]) else 1.0)
    runner.run(
        "product_closed_form",
        lambda: _table_distance(
            phi_hat_from_product(loaded.ctx, family.masks[0], system.phi_hat.support_exp),
            system.phi_hat,
        ),
    )
    runner.run("shift_orthonormality", lambda: shift_orthonormality_defect(system.phi_hat))
    runner.run("polyphase", lambda: check_polyphase(family.masks))
    runner.run("wavelet_mean", lambda: max(abs(h.values[0]) for h in system.psi_hat))
    runner.run("refinement", lambda: _refinement_defect(system, family))
    runner.run("transform_roundtrip", lambda: _roundtrip_defect(system))
    runner.run(
        "gram",
        lambda: max(
            abs(v)
            for key, v in desk_gram_report(system).items()
            if key.endswith("_defect")
        ),
    )
    runner.run("filter_bank", lambda: _filter_bank_defect(loaded))
    return runner.report()


def _table_distance(a: TestFunction, b: TestFunction) -> float:
    n = max(a.smoothness, b.smoothness)
    k = max(a.support_exp, b.support_exp)
    return float(np.max(np.abs(refine(a, n, k).values - refine(b, n, k).values)))
