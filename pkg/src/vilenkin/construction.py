"""Masks with one unimodular entry per tail column, and their refinable function.

The construction picks nonzero dual digits xi_0..xi_r (order n >= 2,
r >= n) whose sliding windows of length n-1 are pairwise distinct.  The
mask value table gets a +-1 on each full window of length n, a +-1 at
first-digit-zero for every tail that is not one of the windows 1..r-n+2,
and zeros elsewhere.  Each of the m^(n-1) tail columns then carries exactly
one unimodular entry, which makes the column-sum identity exact and the
shifts of the refinable function orthonormal.

Two independent routes compute the transform of the refinable function:
a closed form that walks the windows, and a truncated product of dilated
mask factors.  They must agree value for value; tests rely on that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import TestFunction, WalshPolynomial, refine
from .errors import (
    NonTerminatingProductError,
    ShapeIncompatibleError,
    SideMismatchError,
    WindowCollisionError,
    ZeroDigitUsedError,
)
from .group import DUAL, GroupContext, digit_matrix


@dataclass(frozen=True, eq=False)
class XiSequence:
    """A validated digit sequence driving the mask construction.

    signs[t] is the unimodular value assigned to the single nonzero entry
    of tail column t; signs[0] stays 1 so the mask is 1 at the origin.
    """

    ctx: GroupContext
    order: int
    entries: tuple[int, ...]
    signs: np.ndarray

    @property
    def r(self) -> int:
        return len(self.entries) - 1

    @property
    def support_exp(self) -> int:
        return self.r - self.order + 2

    def windows(self) -> list[tuple[int, ...]]:
        n = self.order
        return [self.entries[k : k + n - 1] for k in range(self.r - n + 3)]


def validate_xi(
    ctx: GroupContext,
    order: int,
    entries: Sequence[int],
    signs: Optional[Sequence] = None,
    allow_unimodular: bool = False,
) -> XiSequence:
    """Check the digit and window conditions; returns the frozen sequence."""
    m = ctx.modulus
    n = int(order)
    if n < 2:
        raise ShapeIncompatibleError(f"mask order must be >= 2, got {n}")
    ent = tuple(int(v) for v in entries)
    r = len(ent) - 1
    if r < n:
        raise ShapeIncompatibleError(f"need at least order+1 = {n + 1} entries, got {len(ent)}")
    for k, v in enumerate(ent):
        if v == 0:
            raise ZeroDigitUsedError(k)
        if not 0 < v < m:
            raise ShapeIncompatibleError(f"xi entry {k} is {v}, outside 1..{m - 1}")
    seen: dict[tuple[int, ...], int] = {}
    for k in range(r - n + 3):
        w = ent[k : k + n - 1]
        if w in seen:
            raise WindowCollisionError(seen[w], k)
        seen[w] = k

    cols = m ** (n - 1)
    if signs is None:
        sign_arr = np.ones(cols, dtype=np.complex128)
    else:
        sign_arr = np.asarray(signs, dtype=np.complex128)
        if sign_arr.shape != (cols,):
            raise ShapeIncompatibleError(f"signs must have length {cols}, got {sign_arr.shape}")
        if abs(sign_arr[0] - 1.0) > 0:
            raise ShapeIncompatibleError("signs[0] must be +1: the mask is pinned to 1 at the origin")
        mags_ok = np.allclose(np.abs(sign_arr), 1.0, rtol=0, atol=1e-12)
        if not mags_ok:
            raise ShapeIncompatibleError("sign entries must be unimodular")
        if not allow_unimodular and not np.array_equal(sign_arr, sign_arr.real.astype(np.complex128)):
            raise ShapeIncompatibleError("complex signs need allow_unimodular=True")
        if not allow_unimodular and not np.all(np.isin(sign_arr.real, (-1.0, 1.0))):
            raise ShapeIncompatibleError("signs must be +-1 unless allow_unimodular=True")
    sign_arr = sign_arr.copy()
    sign_arr.setflags(write=False)
    return XiSequence(ctx=ctx, order=n, entries=ent, signs=sign_arr)


def _tail_index(tail: Sequence[int], m: int) -> int:
    """Index of a tail (omega_2..omega_n), first listed digit most significant."""
    idx = 0
    for v in tail:
        idx = idx * m + v
    return idx


@dataclass(frozen=True, eq=False)
class MaskReport:
    mask: WalshPolynomial
    orthogonality_defect: float
    admissible: bool
    xi: Optional[XiSequence] = None


def build_mask_from_xi(xi: XiSequence) -> MaskReport:
    """Assemble the order-n value table from the validated sequence."""
    ctx = xi.ctx
    m = ctx.modulus
    n = xi.order
    cols = m ** (n - 1)
    table = np.zeros(m**n, dtype=np.complex128)
    windows = xi.windows()
    excluded = set(windows[1:])
    for k in range(xi.r - n + 2):
        tail = xi.entries[k + 1 : k + n]
        t = _tail_index(tail, m)
        table[xi.entries[k] * cols + t] = xi.signs[t]
    for tail in itertools.product(range(m), repeat=n - 1):
        if tail not in excluded:
            t = _tail_index(tail, m)
            table[t] = xi.signs[t]
    mask = WalshPolynomial(ctx, n, table)
    defect = mask_orthogonality_defect(mask)
    return MaskReport(mask=mask, orthogonality_defect=defect, admissible=mask_admissible(mask), xi=xi)


def mask_orthogonality_defect(mask: WalshPolynomial) -> float:
    """Worst deviation of the per-tail column sums of |values|^2 from 1."""
    m = mask.ctx.modulus
    sums = np.sum(np.abs(mask.values.reshape(m, -1)) ** 2, axis=0)
    return float(np.max(np.abs(sums - 1.0)))


def mask_admissible(mask: WalshPolynomial, tol: float = 1e-12) -> bool:
    """Column sums bounded by 1 and value 1 at the origin coset."""
    m = mask.ctx.modulus
    sums = np.sum(np.abs(mask.values.reshape(m, -1)) ** 2, axis=0)
    return bool(np.all(sums <= 1.0 + tol) and abs(mask.values[0] - 1.0) <= tol)


def phi_hat_closed_form(xi: XiSequence, mask: Optional[WalshPolynomial] = None) -> TestFunction:
    """Transform of the refinable function, assembled coset by coset.

    The result has shape (n-1, r-n+2) on the dual side: one term per
    window position k = 1..r-n+2 whose address spells xi_0..xi_{k-1} in the
    integer digits and the k-th window in the fractional digits, plus one
    term per non-window tail at the zero integer part.  Each coefficient is
    a product of mask values, so with +-1 signs every written value is +-1.
    """
    ctx = xi.ctx
    m = ctx.modulus
    n = xi.order
    if mask is None:
        mask = build_mask_from_xi(xi).mask
    kk = xi.support_exp
    values = np.zeros(m ** (n - 1 + kk), dtype=np.complex128)

    def b_at(start: int) -> complex:
        """Mask value on the length-n window of xi starting at `start` (zeros pad the left)."""
        idx = 0
        for s in range(n):
            pos = start + s
            idx = idx * m + (xi.entries[pos] if pos >= 0 else 0)
        return complex(mask.values[idx])

    for k in range(1, kk + 1):
        address = 0
        for p in range(k - 1, -1, -1):  # integer digits xi_0..xi_{k-1}, deepest first
            address += xi.entries[k - 1 - p] * m ** (n - 1 + p)
        address += _tail_index(xi.entries[k : k + n - 1], m)
        coeff = 1.0 + 0.0j
        for j in range(1, k + n):
            coeff *= b_at(k - j)
        values[address] = coeff

    excluded = set(xi.windows()[1:])
    for tail in itertools.product(range(m), repeat=n - 1):
        if tail in excluded:
            continue
        coeff = 1.0 + 0.0j
        for j in range(1, n):
            idx = 0
            for s in range(n):
                idx = idx * m + (0 if s < j else tail[s - j])
            coeff *= complex(mask.values[idx])
        values[_tail_index(tail, m)] = coeff
    return TestFunction(ctx, DUAL, n - 1, kk, values)


def phi_hat_from_product(ctx: GroupContext, mask: WalshPolynomial, support_exp: int) -> TestFunction:
    """Transform of the refinable function via the truncated dilated-mask product.

    Evaluates prod_{j>=1} mask(D*^{-j} omega) on every depth-(n-1) coset
    inside the support ball; factors beyond j = support_exp + n - 1 read the
    mask at the origin, so the product terminates exactly when that value
    is 1 and cannot terminate otherwise.
    """
    m = ctx.modulus
    n = mask.order
    kk = int(support_exp)
    width = n - 1 + kk
    if width < 0:
        raise ShapeIncompatibleError(f"support exponent {kk} too small for order {n}")
    if abs(mask.values[0] - 1.0) > 1e-12:
        raise NonTerminatingProductError(
            f"mask value at the origin is {mask.values[0]}, not 1: the product does not stabilize"
        )
    count = m**width
    digits = digit_matrix(m, width)
    out = np.ones(count, dtype=np.complex128)
    j_max = kk + n + 2
    for j in range(1, j_max + 1):
        idx = np.zeros(count, dtype=np.int64)
        for s in range(1, n + 1):
            t = n - 1 - s + j
            if 0 <= t < width:
                idx += digits[:, t] * m ** (n - s)
        if j > kk + n - 1 and np.any(idx):
            raise NonTerminatingProductError(f"factor {j} still reads nonzero digits; support exponent too small")
        out *= mask.values[idx]
    return TestFunction(ctx, DUAL, n - 1, kk, out)


def shift_orthonormality_defect(f: TestFunction) -> float:
    """Worst deviation of sum over lattice translates of |f|^2 from 1.

    For each depth-n coset inside the unit ball the translates with integer
    address below the support bound are summed; the function is a valid
    orthonormal-shift generator transform exactly when every sum is 1.
    """
    if f.side != DUAL:
        raise SideMismatchError("shift orthonormality is checked on the dual side")
    g = refine(f, max(f.smoothness, 0), max(f.support_exp, 0))
    cols = f.ctx.modulus**g.smoothness
    sums = np.sum(np.abs(g.values.reshape(-1, cols)) ** 2, axis=0)
    return float(np.max(np.abs(sums - 1.0)))
