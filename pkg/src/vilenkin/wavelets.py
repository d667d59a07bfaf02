"""Wavelet masks, generators, the system they span, and the filter bank.

Given an admissible order-n mask whose tail columns each hold one
unimodular entry, every tail column is completed to a unitary m x m
matrix (deterministically, by a phased Householder reflection).  Rows
1..m-1 of those matrices, read back as value tables, are the wavelet
masks; multiplying them against the dilated refinable transform gives
the generator transforms.  Dilated translates of the generators are
produced by exact index relabeling, so inner products between system
elements carry no quadrature error beyond the final complex sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .analysis import (
    TestFunction,
    WalshPolynomial,
    dilate_function,
    effective_shape,
    fourier,
    inner_product,
    norm_sq,
    refine,
    scale_function,
    shift_function,
    walsh_coefficients,
)
from .construction import mask_orthogonality_defect, shift_orthonormality_defect
from .errors import (
    BadLengthError,
    MaskNotOrthogonalError,
    NotUnitNormError,
    OrderMismatchError,
    ShapeIncompatibleError,
    SideMismatchError,
)
from .group import DUAL, PRIMAL, GroupContext, digit_matrix

_UNIT_TOL = 1e-12


def unitary_complete(row: Sequence) -> np.ndarray:
    """Extend a unit row vector to a unitary matrix with that first row.

    Uses the Householder reflection sending e_0 to the (phase-normalized)
    conjugate of the row, with the phase folded back into the first
    column.  The output is deterministic, and rows that already equal a
    signed standard basis vector come back as exact signed permutations.
    """
    v = np.asarray(row, dtype=np.complex128).reshape(-1)
    size = v.shape[0]
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > _UNIT_TOL:
        raise NotUnitNormError(f"row has norm {nrm!r}, expected 1")
    w = v.conj()
    e0 = np.zeros(size, dtype=np.complex128)
    e0[0] = 1.0
    a = w[0]
    phase = a / abs(a) if a != 0 else 1.0 + 0.0j
    u = e0 - np.conj(phase) * w
    uu = float(np.real(np.vdot(u, u)))
    if uu < 1e-28:
        out = np.eye(size, dtype=np.complex128)
        out[0, 0] = np.conj(phase)
        return out
    reflector = np.eye(size, dtype=np.complex128) - (2.0 / uu) * np.outer(u, u.conj())
    reflector[:, 0] *= phase
    return reflector.conj().T


@dataclass(frozen=True, eq=False)
class MaskFamily:
    """The refinement mask and its m-1 companions, all of one order."""

    ctx: GroupContext
    order: int
    masks: tuple[WalshPolynomial, ...]

    def __len__(self) -> int:
        return len(self.masks)


def check_polyphase(masks: Sequence[WalshPolynomial]) -> float:
    """Worst deviation of the per-tail column Gram matrices from identity."""
    if not masks:
        raise ShapeIncompatibleError("need at least one mask")
    order = masks[0].order
    for p in masks[1:]:
        if p.order != order:
            raise OrderMismatchError(f"mask orders differ: {p.order} vs {order}")
    m = masks[0].ctx.modulus
    stack = np.stack([p.values.reshape(m, -1) for p in masks])  # (count, m, tails)
    gram = np.einsum("vkt,vlt->tkl", stack.conj(), stack)
    gram -= np.eye(m, dtype=np.complex128)[None, :, :]
    return float(np.max(np.abs(gram)))


def build_wavelet_masks(mask: WalshPolynomial, tol: float = _UNIT_TOL) -> MaskFamily:
    """Complete each tail column of the mask to a unitary matrix.

    Column t of the reshaped (m, m^(n-1)) value table is the first row of
    the t-th unitary; row nu of that unitary becomes column t of wavelet
    mask nu.  Requires the mask columns to be unit vectors already.
    """
    defect = mask_orthogonality_defect(mask)
    if defect > tol:
        raise MaskNotOrthogonalError(f"mask column defect {defect:.3e} exceeds {tol:.1e}")
    ctx = mask.ctx
    m = ctx.modulus
    table = mask.values.reshape(m, -1)
    cols = table.shape[1]
    companions = np.zeros((m - 1, m, cols), dtype=np.complex128)
    for t in range(cols):
        unit = unitary_complete(table[:, t])
        companions[:, :, t] = unit[1:, :]
    masks = [mask]
    for nu in range(m - 1):
        masks.append(WalshPolynomial(ctx, mask.order, companions[nu].reshape(-1)))
    family = MaskFamily(ctx=ctx, order=mask.order, masks=tuple(masks))
    poly = check_polyphase(family.masks)
    if poly > tol:
        raise MaskNotOrthogonalError(f"polyphase defect {poly:.3e} after completion")
    return family


def build_wavelets(family: MaskFamily, phi_hat: TestFunction) -> list[TestFunction]:
    """Generator transforms: mask values against the dilated refinable transform.

    psi_hat_nu at coset index l (depth n-1, support exponent K+1) equals
    mask_nu[l mod m^n] * phi_hat[l // m].  Index nu = 0 reproduces the
    refinement of phi_hat itself and is returned for symmetry.
    """
    ctx = family.ctx
    n = family.order
    m = ctx.modulus
    if phi_hat.side != DUAL:
        raise SideMismatchError("phi_hat must live on the dual side")
    if phi_hat.smoothness > n - 1:
        raise ShapeIncompatibleError(
            f"phi_hat smoothness {phi_hat.smoothness} exceeds order-1 = {n - 1}"
        )
    base = refine(phi_hat, n - 1, max(phi_hat.support_exp, 0))
    kk = base.support_exp
    count = m ** (n + kk)
    l = np.arange(count)
    mask_idx = l % (m**n)
    carry_idx = l // m
    out = []
    for poly in family.masks:
        vals = poly.values[mask_idx] * base.values[carry_idx]
        out.append(TestFunction(ctx, DUAL, n - 1, kk + 1, vals))
    return out


@dataclass(frozen=True, eq=False)
class WaveletSystem:
    """Refinable function, generators, and their transforms, ready to translate."""

    ctx: GroupContext
    family: MaskFamily
    phi_hat: TestFunction
    phi: TestFunction
    psi_hat: tuple[TestFunction, ...]
    psi: tuple[TestFunction, ...]

    @property
    def order(self) -> int:
        return self.family.order


def build_system(family: MaskFamily, phi_hat: TestFunction, tol: float = _UNIT_TOL) -> WaveletSystem:
    """Assemble the wavelet system, enforcing the two orthogonality premises."""
    shift_defect = shift_orthonormality_defect(phi_hat)
    if shift_defect > tol:
        raise MaskNotOrthogonalError(f"refinable shifts not orthonormal: defect {shift_defect:.3e}")
    poly = check_polyphase(family.masks)
    if poly > tol:
        raise MaskNotOrthogonalError(f"polyphase defect {poly:.3e} exceeds {tol:.1e}")
    hats = build_wavelets(family, phi_hat)
    psi_hat = tuple(hats[1:])
    psi = tuple(fourier(h, "inverse") for h in psi_hat)
    return WaveletSystem(
        ctx=family.ctx,
        family=family,
        phi_hat=phi_hat,
        phi=fourier(phi_hat, "inverse"),
        psi_hat=psi_hat,
        psi=psi,
    )


@dataclass(frozen=True, eq=False)
class WaveletSystemElement:
    """One dilated translate m^(j/2) psi_nu(D^j x - gamma_k), as a value table."""

    generator: int
    scale: int
    shift: int
    func: TestFunction


def system_element(gen: TestFunction, scale: int, shift: int) -> TestFunction:
    """Translate by the lattice element with index `shift`, dilate, renormalize."""
    if gen.side != PRIMAL:
        raise SideMismatchError("system elements are built from primal-side generators")
    moved = shift_function(gen, shift)
    scaled = dilate_function(moved, scale)
    return scale_function(scaled, float(gen.ctx.modulus) ** (scale / 2.0))


def make_element(system: WaveletSystem, generator: int, scale: int, shift: int) -> WaveletSystemElement:
    func = system_element(system.psi[generator], scale, shift)
    return WaveletSystemElement(generator=generator, scale=scale, shift=shift, func=func)


def gram_matrix(funcs: Sequence[TestFunction]) -> np.ndarray:
    """Hermitian matrix of pairwise inner products."""
    size = len(funcs)
    out = np.zeros((size, size), dtype=np.complex128)
    for i in range(size):
        out[i, i] = inner_product(funcs[i], funcs[i])
        for j in range(i + 1, size):
            val = inner_product(funcs[i], funcs[j])
            out[i, j] = val
            out[j, i] = np.conj(val)
    return out


def _translate_budget(gen: TestFunction, f: TestFunction, scale: int) -> int:
    """Smallest digit width covering every translate that can meet f at this scale."""
    _, gk = effective_shape(gen)
    _, fk = effective_shape(f)
    return max(gk, fk + scale, 0)


def parseval_telescoping(
    system: WaveletSystem,
    f: TestFunction,
    coarse_scale: int,
    fine_scale: int,
) -> dict:
    """Energy balance across scales for a compactly supported test function.

    Sums |<f, phi_{j,k}>|^2 over all translates k at the fine scale and
    checks it equals the coarse-scale scaling energy plus the wavelet
    energies of every intermediate scale, and also equals ||f||^2 once the
    fine scale resolves f (its smoothness depth at that scale).
    """
    if f.side != PRIMAL:
        raise SideMismatchError("telescoping expects a primal-side function")
    if coarse_scale > fine_scale:
        raise ShapeIncompatibleError("coarse scale must not exceed fine scale")
    fn, _ = effective_shape(f)
    phi_n = system.phi.smoothness
    if fn > phi_n + fine_scale:
        raise ShapeIncompatibleError(
            f"fine scale {fine_scale} cannot resolve smoothness {fn} with generator depth {phi_n}"
        )
    m = system.ctx.modulus

    def scaling_energy(j: int) -> float:
        total = 0.0
        width = _translate_budget(system.phi, f, j)
        for k in range(m**width):
            val = inner_product(f, system_element(system.phi, j, k))
            total += abs(val) ** 2
        return total

    def wavelet_energy(j: int) -> float:
        total = 0.0
        for gen in system.psi:
            width = _translate_budget(gen, f, j)
            for k in range(m**width):
                val = inner_product(f, system_element(gen, j, k))
                total += abs(val) ** 2
        return total

    fine = scaling_energy(fine_scale)
    coarse = scaling_energy(coarse_scale)
    details = [wavelet_energy(j) for j in range(coarse_scale, fine_scale)]
    telescoped = coarse + sum(details)
    energy = norm_sq(f)
    return {
        "fine_scaling_energy": fine,
        "coarse_scaling_energy": coarse,
        "detail_energies": details,
        "telescoped_energy": telescoped,
        "function_energy": energy,
        "telescoping_deviation": abs(fine - telescoped),
        "parseval_deviation": abs(fine - energy),
    }


def mask_taps(family: MaskFamily) -> np.ndarray:
    """Filter coefficients: character coefficients of each mask, one row per band."""
    return np.stack([walsh_coefficients(p) for p in family.masks])


def two_scale_vector(family: MaskFamily, band: int, width: int) -> np.ndarray:
    """Expansion of generator `band` over the scale-1 scaling translates.

    Band 0 is the refinable function, bands 1..m-1 the wavelets; the
    coefficient against translate t is sqrt(m) times tap t, zero-padded
    to length m^width.
    """
    m = family.ctx.modulus
    n = family.order
    if width < n:
        raise ShapeIncompatibleError(f"width {width} cannot hold the m^{n} two-scale coefficients")
    taps = mask_taps(family)
    out = np.zeros(m**width, dtype=np.complex128)
    out[: m**n] = math.sqrt(m) * taps[band]
    return out


def generator_correlations(
    family: MaskFamily,
    band_a: int,
    band_b: int,
    delta: int,
    width: int,
    taps: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Inner products of generator a against dilated translates of generator b.

    Returns the array of <gen_a, (gen_b)_{delta, w}> for w < m^width,
    computed entirely in scaling-coefficient space: cascade gen_a's
    two-scale vector down `delta` levels with zero detail bands, then run
    one analysis step and read off band b.  Orthonormality of the scaling
    translates at each level makes this exact, and the direct table route
    must agree with it (tests compare both).
    """
    if delta < 0:
        raise ShapeIncompatibleError("delta must be >= 0: put the finer generator second")
    ctx = family.ctx
    m = ctx.modulus
    n = family.order
    span = max(width + 1, n + delta)
    if taps is None:
        taps = mask_taps(family)
    u = two_scale_vector(family, band_a, span - delta)
    for _ in range(delta):
        zeros = [np.zeros_like(u) for _ in range(len(family) - 1)]
        u = synthesize(ctx, u, zeros, taps)
    approx, details = analyze(ctx, u, taps)
    bands = [approx] + details
    return bands[band_b][: m**width]


def desk_gram_report(system: WaveletSystem, scale_span: int = 2, shift_width: Optional[int] = None) -> dict:
    """Defects of the wavelet-system Gram over a window of scales and shifts.

    Every inner product <psi^a_{j,k}, psi^b_{j',l}> with |j|,|j'| <=
    scale_span and shift indices below m^shift_width reduces, by the
    dilation and translation identities, to a generator correlation at
    delta = j'-j and a combined shift index; this walks all such
    correlations and reports the worst deviations from orthonormality.
    Combined shifts past the support ball are skipped: the supports are
    disjoint there, so those inner products vanish identically.
    """
    fam = system.family
    m = system.ctx.modulus
    n = system.order
    if shift_width is None:
        shift_width = n + 1
    count = len(fam)
    taps = mask_taps(fam)
    k_eff = [effective_shape(system.phi)[1]] + [effective_shape(g)[1] for g in system.psi]

    def corr_width(a: int, b: int, delta: int) -> int:
        reach = max(k_eff[a] + delta, k_eff[b], 0)
        return min(shift_width + delta, reach)

    same = 0.0
    for a in range(1, count):
        for b in range(1, count):
            corr = generator_correlations(fam, a, b, 0, corr_width(a, b, 0), taps)
            expect = np.zeros_like(corr)
            if a == b:
                expect[0] = 1.0
            same = max(same, float(np.max(np.abs(corr - expect))))
    cross = 0.0
    for delta in range(1, 2 * scale_span + 1):
        for a in range(1, count):
            for b in range(1, count):
                corr = generator_correlations(fam, a, b, delta, corr_width(a, b, delta), taps)
                cross = max(cross, float(np.max(np.abs(corr))))
    scaling = 0.0
    for delta in range(0, scale_span + 1):
        for b in range(1, count):
            corr = generator_correlations(fam, 0, b, delta, corr_width(0, b, delta), taps)
            scaling = max(scaling, float(np.max(np.abs(corr))))
    return {
        "same_scale_defect": same,
        "cross_scale_defect": cross,
        "scaling_cross_defect": scaling,
        "scale_span": scale_span,
        "shift_width": shift_width,
    }


@lru_cache(maxsize=32)
def _bank_index(ctx: GroupContext, length: int, taps_len: int) -> np.ndarray:
    """Index matrix idx[l, t]: digit-wise sum of gamma_(m*l) and gamma_t."""
    m = ctx.modulus
    depth = 0
    size = 1
    while size < length:
        size *= m
        depth += 1
    if size != length:
        raise BadLengthError(f"coefficient length {length} is not a power of {m}")
    order = 0
    size = 1
    while size < taps_len:
        size *= m
        order += 1
    if size != taps_len:
        raise BadLengthError(f"tap count {taps_len} is not a power of {m}")
    if depth < order:
        raise BadLengthError(
            f"coefficient length {length} is shorter than one filter span m^{order}"
        )
    half = length // m
    cay = ctx.cayley_table(PRIMAL)
    ml_digits = digit_matrix(m, depth)[np.arange(half) * m]  # (half, depth)
    t_digits = digit_matrix(m, depth)[np.arange(taps_len)]  # (taps, depth)
    idx = np.zeros((half, taps_len), dtype=np.int64)
    for w in range(depth):
        idx += cay[ml_digits[:, w][:, None], t_digits[:, w][None, :]] * m**w
    return idx


def analyze(ctx: GroupContext, coeffs: Sequence, taps: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """One filter-bank step: coefficients at depth q -> m bands at depth q-1.

    out_nu[l] = sqrt(m) * sum_t conj(taps[nu, t]) coeffs[(m l) (+) t], with
    (+) the digit-wise group sum of lattice indices.
    """
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    idx = _bank_index(ctx, c.shape[0], taps.shape[1])
    gathered = c[idx]  # (half, taps)
    bands = math.sqrt(ctx.modulus) * gathered @ taps.conj().T  # (half, count)
    return bands[:, 0].copy(), [bands[:, nu].copy() for nu in range(1, taps.shape[0])]


def synthesize(
    ctx: GroupContext,
    approx: Sequence,
    details: Sequence[Sequence],
    taps: np.ndarray,
) -> np.ndarray:
    """Adjoint of `analyze`; reconstructs the depth-q coefficients exactly."""
    a = np.asarray(approx, dtype=np.complex128).reshape(-1)
    stacked = [a] + [np.asarray(d, dtype=np.complex128).reshape(-1) for d in details]
    if len(stacked) != taps.shape[0]:
        raise ShapeIncompatibleError(f"expected {taps.shape[0]} bands, got {len(stacked)}")
    half = a.shape[0]
    for d in stacked[1:]:
        if d.shape[0] != half:
            raise ShapeIncompatibleError("band lengths differ")
    m = ctx.modulus
    idx = _bank_index(ctx, half * m, taps.shape[1])
    bands = np.stack(stacked, axis=1)  # (half, count)
    contrib = math.sqrt(m) * bands @ taps  # (half, taps)
    out = np.zeros(half * m, dtype=np.complex128)
    np.add.at(out, idx, contrib)
    return out
