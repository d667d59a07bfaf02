"""Command line driver: construct, verify, example, transform.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for input problems (unreadable config, invalid digits, colliding
windows, corrupt artifacts).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional, Sequence

import numpy as np

from .analysis import WalshPolynomial, fourier
from .artifacts import (
    CheckResult,
    VerificationReport,
    canonical_dumps,
    context_from_manifest,
    function_payload,
    load_artifacts,
    payload_to_function,
    verify_artifacts,
    write_artifacts,
    write_report,
    _load_json,
    _pairs,
    _unpairs,
)
from .config import KNOWN_CHECKS, ConstructionConfig, load_config, parse_config_text, tolerances_for
from .construction import build_mask_from_xi, phi_hat_closed_form, phi_hat_from_product, validate_xi
from .errors import ConfigError, VilenkinError
from .group import DUAL, PRIMAL, build_group_context, resolve_digit_set, validate_dilation_pair
from .wavelets import MaskFamily, analyze, build_system, build_wavelet_masks, check_polyphase, mask_taps, synthesize

EXAMPLE_CONFIGS = {
    1: """\
[group]
matrix = [[2, 0], [1, 2]]
digits = [[0, 0], [0, 1], [1, 0], [1, 1]]
dual_digits = [[0, 0], [0, 1], [1, 0], [1, 1]]

[mask]
order = 3
xi = [1, 1, 2, 1]
""",
    2: """\
[group]
matrix = [[2, 1], [-1, 1]]
digits = [[0, 0], [1, 0], [2, 0]]
dual_digits = [[0, 0], [0, 1], [1, 1]]

[mask]
order = 3
xi = [1, 2, 2, 1, 1]
""",
}

# Reference tables for the two bundled examples: supports of the
# refinement mask and of the refinable transform, and hand-picked
# companion masks (one unimodular entry per row and tail) that the
# polyphase check must accept with zero defect.
REFERENCE_MASK_SUPPORT = {
    1: sorted(set(range(16)) - {6, 9} | {22, 25}),
    2: [0, 1, 2, 3, 5, 6, 17, 22, 25],
}
REFERENCE_PHI_HAT_SUPPORT = {
    1: sorted(set(range(16)) - {6, 9} | {22, 89}),
    2: [0, 1, 2, 3, 5, 6, 17, 52, 157],
}
REFERENCE_COMPANION_SUPPORT = {
    1: [
        sorted({6, 9} | {16 + t for t in range(16) if t not in (6, 9)}),
        list(range(32, 48)),
        list(range(48, 64)),
    ],
    2: [
        sorted({8, 13, 16} | {9 + t for t in range(9) if t not in (4, 7, 8)}),
        sorted({4, 7, 26} | {18 + t for t in range(9) if t not in (4, 7, 8)}),
    ],
}


def _context_from_config(config: ConstructionConfig):
    pair = validate_dilation_pair(config.matrix)
    digits = resolve_digit_set(pair, PRIMAL, config.digits)
    dual = resolve_digit_set(pair, DUAL, config.dual_digits)
    return build_group_context(pair, digits, dual)


def run_construct(
    config: ConstructionConfig,
    outdir: Optional[str] = None,
    checks: Optional[Sequence[str]] = None,
    tolerance_scale: Optional[float] = None,
) -> VerificationReport:
    """Build the system described by `config`, write artifacts, verify them."""
    outdir = outdir or config.output_dir
    requested = list(checks) if checks is not None else list(config.checks)
    scale = tolerance_scale if tolerance_scale is not None else config.tolerance_scale
    start = time.perf_counter()
    try:
        ctx = _context_from_config(config)
        mask_echo: dict = {"order": config.order}
        if config.xi is not None:
            xi = validate_xi(ctx, config.order, config.xi, config.signs, allow_unimodular=True)
            mask = build_mask_from_xi(xi).mask
            phi_hat = phi_hat_closed_form(xi, mask)
            mask_echo["xi"] = list(xi.entries)
            mask_echo["signs"] = _pairs(xi.signs)
            if np.any(xi.signs.imag != 0.0):
                mask_echo["unimodular_signs"] = True
            mask_echo["support_exponent"] = xi.support_exp
        else:
            mask = WalshPolynomial(ctx, config.order, config.mask_values)
            phi_hat = phi_hat_from_product(ctx, mask, config.support_exponent)
            mask_echo["values"] = _pairs(mask.values)
            mask_echo["support_exponent"] = config.support_exponent
        family = build_wavelet_masks(mask)
        system = build_system(family, phi_hat)
    except VilenkinError as exc:
        elapsed = time.perf_counter() - start
        report = VerificationReport(
            [CheckResult("construction", "error", None, None, elapsed, f"{type(exc).__name__}: {exc}")]
        )
        try:
            os.makedirs(outdir, exist_ok=True)
            write_report(outdir, report)
        except OSError:
            pass
        return report

    manifest_body = {
        "group": {
            "matrix": [list(r) for r in config.matrix],
            "digits": ctx.digits.digits.tolist(),
            "dual_digits": ctx.digits_dual.digits.tolist(),
        },
        "mask": mask_echo,
        "checks": requested,
        "tolerances": {name: v for name, v in tolerances_for(config).items() if name in requested},
    }
    write_artifacts(outdir, manifest_body, family, system)
    report = verify_artifacts(outdir, checks=requested, tolerance_scale=scale)
    write_report(outdir, report)
    return report


def run_verify(
    path: str,
    checks: Optional[Sequence[str]] = None,
    tolerance_scale: float = 1.0,
) -> VerificationReport:
    return verify_artifacts(path, checks=checks, tolerance_scale=tolerance_scale)


def _reference_table(size: int, support: Sequence[int]) -> np.ndarray:
    table = np.zeros(size, dtype=np.complex128)
    table[list(support)] = 1.0
    return table


def run_example(which: int, outdir: str, tolerance_scale: float = 1.0) -> VerificationReport:
    """Run a bundled configuration and check its output against stored tables."""
    if which not in EXAMPLE_CONFIGS:
        raise ConfigError(f"example id must be one of {sorted(EXAMPLE_CONFIGS)}, got {which}")
    config = parse_config_text(EXAMPLE_CONFIGS[which])
    report = run_construct(config, outdir=outdir, tolerance_scale=tolerance_scale)
    if not report.passed:
        return report
    loaded = load_artifacts(outdir)
    m = loaded.ctx.modulus
    n = loaded.family.order
    extras = []

    start = time.perf_counter()
    want = _reference_table(m**n, REFERENCE_MASK_SUPPORT[which])
    defect = float(np.max(np.abs(loaded.family.masks[0].values - want)))
    extras.append(_exact_check("reference_mask_table", defect, time.perf_counter() - start))

    start = time.perf_counter()
    want = _reference_table(loaded.system.phi_hat.values.shape[0], REFERENCE_PHI_HAT_SUPPORT[which])
    defect = float(np.max(np.abs(loaded.system.phi_hat.values - want)))
    extras.append(_exact_check("reference_phi_hat_table", defect, time.perf_counter() - start))

    start = time.perf_counter()
    companions = [loaded.family.masks[0]] + [
        WalshPolynomial(loaded.ctx, n, _reference_table(m**n, support))
        for support in REFERENCE_COMPANION_SUPPORT[which]
    ]
    defect = check_polyphase(companions)
    extras.append(_exact_check("reference_companions_polyphase", defect, time.perf_counter() - start))

    report = VerificationReport(report.checks + extras)
    write_report(outdir, report)
    return report


def _exact_check(name: str, defect: float, elapsed: float) -> CheckResult:
    status = "pass" if defect == 0.0 else "fail"
    return CheckResult(name, status, defect, 0.0, elapsed)


def _transform_context(config_path: Optional[str], family_dir: Optional[str]):
    if family_dir is not None:
        return context_from_manifest(_load_json(os.path.join(family_dir, "manifest.json")))
    if config_path is None:
        raise ConfigError("transform needs --config or --family to define the group")
    if os.path.isdir(config_path):
        return context_from_manifest(_load_json(os.path.join(config_path, "manifest.json")))
    return _context_from_config(load_config(config_path))


def run_transform(
    operation: str,
    input_path: str,
    config_path: Optional[str] = None,
    family_dir: Optional[str] = None,
    out_path: Optional[str] = None,
) -> dict:
    """Apply a transform to a serialized table; returns the output payload."""
    ctx = _transform_context(config_path, family_dir)
    payload = _load_json(input_path)
    if operation in ("fourier", "inverse-fourier"):
        f = payload_to_function(ctx, payload, input_path)
        direction = "forward" if operation == "fourier" else "inverse"
        out = function_payload(fourier(f, direction))
    elif operation in ("analyze", "synthesize"):
        if family_dir is None:
            raise ConfigError(f"{operation} needs --family pointing at constructed artifacts")
        taps = mask_taps(load_artifacts(family_dir).family)
        if operation == "analyze":
            if "values" not in payload:
                raise ConfigError(f"{input_path}: expected a 'values' field")
            coeffs = _unpairs(payload["values"], input_path)
            approx, details = analyze(ctx, coeffs, taps)
            out = {
                "kind": "bands",
                "approx": _pairs(approx),
                "details": [_pairs(d) for d in details],
            }
        else:
            for key in ("approx", "details"):
                if key not in payload:
                    raise ConfigError(f"{input_path}: expected an '{key}' field")
            approx = _unpairs(payload["approx"], input_path)
            details = [_unpairs(d, input_path) for d in payload["details"]]
            rec = synthesize(ctx, approx, details, taps)
            out = {"kind": "coefficients", "values": _pairs(rec)}
    else:
        raise ConfigError(f"unknown transform operation {operation!r}")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(canonical_dumps(out))
    return out


def _split_checks(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    names = [part.strip() for part in text.split(",") if part.strip()]
    for name in names:
        if name not in KNOWN_CHECKS:
            raise ConfigError(f"--checks: unknown check {name!r}; known: {', '.join(KNOWN_CHECKS)}")
    return names


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vilenkin",
        description="Construct and verify compactly supported orthogonal wavelet systems "
        "on groups of digit sequences driven by an integer dilation matrix.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a system from a config file and write artifacts")
    p.add_argument("--config", required=True, help="TOML configuration file")
    p.add_argument("--out", default=None, help="artifact directory (default: from config)")
    p.add_argument("--tolerance-scale", type=float, default=None)
    p.add_argument("--checks", default=None, help="comma-separated check names")

    p = sub.add_parser("verify", help="re-check defects from serialized artifacts")
    p.add_argument("path", help="artifact directory")
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    p.add_argument("--checks", default=None)

    p = sub.add_parser("example", help="run a bundled example and compare to stored tables")
    p.add_argument("id", type=int, choices=sorted(EXAMPLE_CONFIGS))
    p.add_argument("--out", default=None, help="artifact directory (default example<id>_artifacts)")
    p.add_argument("--tolerance-scale", type=float, default=1.0)

    p = sub.add_parser("transform", help="apply a transform to a serialized value table")
    p.add_argument(
        "operation",
        choices=["fourier", "inverse-fourier", "analyze", "synthesize"],
    )
    p.add_argument("--input", required=True, help="JSON payload to transform")
    p.add_argument("--config", default=None, help="config file or artifact dir defining the group")
    p.add_argument("--family", default=None, help="artifact dir with the mask family (filter bank)")
    p.add_argument("--out", default=None, help="write the result payload here")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "construct":
            config = load_config(args.config)
            report = run_construct(
                config,
                outdir=args.out,
                checks=_split_checks(args.checks),
                tolerance_scale=args.tolerance_scale,
            )
            print(report.to_text())
            if any(c.status == "error" for c in report.checks):
                return 2
            return 0 if report.passed else 1
        if args.command == "verify":
            report = run_verify(args.path, checks=_split_checks(args.checks), tolerance_scale=args.tolerance_scale)
            print(report.to_text())
            return 0 if report.passed else 1
        if args.command == "example":
            outdir = args.out or f"example{args.id}_artifacts"
            report = run_example(args.id, outdir, tolerance_scale=args.tolerance_scale)
            print(report.to_text())
            if any(c.status == "error" for c in report.checks):
                return 2
            return 0 if report.passed else 1
        if args.command == "transform":
            out = run_transform(
                args.operation,
                args.input,
                config_path=args.config,
                family_dir=args.family,
                out_path=args.out,
            )
            if args.out:
                print(f"wrote {args.out}")
            else:
                print(json.dumps(out))
            return 0
    except VilenkinError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
