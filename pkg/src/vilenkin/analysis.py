"""Piecewise-constant test functions and the Walsh-Chrestenson transform.

A test function of shape (n, K) on either side is constant on the scale-n
cosets and supported inside the K-fold dilated unit ball, so it is a flat
array of m^(n+K) complex values indexed by coset address.  The Fourier
transform swaps the two shape parameters and is an exact finite sum; the
fast path runs radix-m butterfly stages against the digit character table,
with summation order fixed so results are bit-identical run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BadLengthError,
    CoarseningRequestedError,
    ShapeIncompatibleError,
    SideMismatchError,
)
from .group import (
    DUAL,
    PRIMAL,
    GroupContext,
    GroupElement,
    coset_address,
    digit_matrix,
    digit_width,
    gamma_add_indices,
    index_digits,
)


def _exact_log(n: int, m: int) -> int:
    p = 0
    while n > 1:
        if n % m:
            raise BadLengthError(f"length {n} is not a power of {m}")
        n //= m
        p += 1
    if n != 1:
        raise BadLengthError(f"length must be a positive power of {m}")
    return p


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Values of a (smoothness, support-exponent) piecewise-constant function."""

    ctx: GroupContext
    side: str
    smoothness: int
    support_exp: int
    values: np.ndarray

    def __post_init__(self):
        if self.side not in (PRIMAL, DUAL):
            raise SideMismatchError(f"unknown side {self.side!r}")
        width = self.smoothness + self.support_exp
        if width < 0:
            raise ShapeIncompatibleError(
                f"shape ({self.smoothness}, {self.support_exp}) has negative width"
            )
        expected = self.ctx.modulus**width
        arr = np.asarray(self.values, dtype=np.complex128)
        if arr.ndim != 1 or arr.size != expected:
            raise ShapeIncompatibleError(
                f"value array must have length {expected} for shape "
                f"({self.smoothness}, {self.support_exp}), got {arr.shape}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def width(self) -> int:
        return self.smoothness + self.support_exp


def indicator(ctx: GroupContext, side: str, smoothness: int, support_exp: int, index: int) -> TestFunction:
    vals = np.zeros(ctx.modulus ** (smoothness + support_exp), dtype=np.complex128)
    vals[index] = 1.0
    return TestFunction(ctx, side, smoothness, support_exp, vals)


def evaluate(f: TestFunction, x: GroupElement) -> complex:
    if x.side != f.side:
        raise SideMismatchError(f"element on side {x.side!r}, function on side {f.side!r}")
    k = coset_address(f.ctx, x, f.smoothness).index
    return complex(f.values[k]) if k < f.values.size else 0.0


def norm_sq(f: TestFunction) -> float:
    return float(np.sum(np.abs(f.values) ** 2) / f.ctx.modulus**f.smoothness)


def refine(f: TestFunction, smoothness: int, support_exp: int) -> TestFunction:
    """Re-express f on a finer grid / wider support.  Exact."""
    dn = smoothness - f.smoothness
    dk = support_exp - f.support_exp
    if dn < 0 or dk < 0:
        raise CoarseningRequestedError(
            f"cannot refine shape ({f.smoothness}, {f.support_exp}) "
            f"to coarser ({smoothness}, {support_exp})"
        )
    m = f.ctx.modulus
    repeated = np.repeat(f.values, m**dn)
    out = np.zeros(m ** (smoothness + support_exp), dtype=np.complex128)
    out[: repeated.size] = repeated
    return TestFunction(f.ctx, f.side, smoothness, support_exp, out)


def _common_shape(f: TestFunction, g: TestFunction) -> tuple[int, int]:
    return max(f.smoothness, g.smoothness), max(f.support_exp, g.support_exp)


def inner_product(f: TestFunction, g: TestFunction) -> complex:
    """L2 pairing integral of f * conj(g), exact finite sum."""
    if f.ctx is not g.ctx or f.side != g.side:
        raise SideMismatchError("inner product needs both functions on one side of one context")
    n, kk = _common_shape(f, g)
    fv = refine(f, n, kk).values
    gv = refine(g, n, kk).values
    return complex(np.vdot(gv, fv) / f.ctx.modulus**n)


def scale_function(f: TestFunction, factor: complex) -> TestFunction:
    return TestFunction(f.ctx, f.side, f.smoothness, f.support_exp, f.values * factor)


def dilate_function(f: TestFunction, j: int) -> TestFunction:
    """f(D^j .): pure relabeling, smoothness up by j, support exponent down."""
    return TestFunction(f.ctx, f.side, f.smoothness + j, f.support_exp - j, f.values)


def shift_function(f: TestFunction, k: int) -> TestFunction:
    """Translate: returns x -> f(x + gamma_[k])."""
    if k == 0:
        return f
    m = f.ctx.modulus
    n = f.smoothness
    support = max(f.support_exp, digit_width(k, m))
    width = n + support
    # gamma_[k] digits below the coset scale do not move the coset address
    addend = k * m**n if n >= 0 else k // m**(-n)
    src = gamma_add_indices(f.ctx, np.arange(m**width), addend, f.side, width)
    vals = np.zeros(m**width, dtype=np.complex128)
    inside = src < f.values.size
    vals[inside] = f.values[src[inside]]
    return TestFunction(f.ctx, f.side, n, support, vals)


def modulate(f: TestFunction, k: int) -> TestFunction:
    """Multiply a dual-side function by the k-th Walsh character."""
    if f.side != DUAL:
        raise SideMismatchError("modulation by a Walsh character acts on dual-side functions")
    ctx = f.ctx
    m = ctx.modulus
    n = max(f.smoothness, digit_width(k, m))
    g = refine(f, n, f.support_exp)
    width = g.width
    digits = digit_matrix(m, width)
    expo = np.zeros(len(g.values), dtype=np.int64)
    for j, kd in enumerate(index_digits(k, m)):
        t = n - 1 - j
        if kd and 0 <= t < width:
            expo += ctx.pairing[kd, digits[:, t]]
    return TestFunction(ctx, DUAL, g.smoothness, g.support_exp, g.values * ctx.roots[expo % m])


def effective_shape(f: TestFunction) -> tuple[int, int]:
    """Tightest (smoothness, support exponent) representing the same function."""
    m = f.ctx.modulus
    vals = f.values
    nonzero = np.flatnonzero(vals)
    if nonzero.size == 0:
        return -f.support_exp, f.support_exp  # zero function: width collapses to 0
    width = digit_width(int(nonzero[-1]), m)
    support = width - f.smoothness
    vals = vals[: m ** (f.smoothness + support)]
    n = f.smoothness
    while n + support > 0:
        blocks = vals.reshape(-1, m)
        if not np.all(blocks == blocks[:, :1]):
            break
        vals = vals[::m]
        n -= 1
    return n, support


# ---------------------------------------------------------------------------
# transforms


def _butterfly(table: np.ndarray, vec: np.ndarray, m: int, p: int, table_axis: int) -> np.ndarray:
    """Radix-m stages with fixed summation order (no BLAS reductions).

    Computes out[l] = sum_k vec[k] prod_j table[k_j, l_{p-1-j}] when
    table_axis == 0, and the contraction over the second table index when
    table_axis == 1.
    """
    coef = table if table_axis == 0 else table.T
    a = np.array(vec, dtype=np.complex128)
    rest = a.size // m
    for _ in range(p):
        a = a.reshape(m, rest)
        out = np.empty((rest, m), dtype=np.complex128)
        for b in range(m):
            acc = coef[0, b] * a[0]
            for s in range(1, m):
                acc = acc + coef[s, b] * a[s]
            out[:, b] = acc
        a = out.reshape(-1)
    if p > 1:
        a = a.reshape((m,) * p).transpose(tuple(reversed(range(p)))).reshape(-1)
    return a


def _naive_sum(ctx: GroupContext, vec: np.ndarray, p: int, table_axis: int, conjugate: bool) -> np.ndarray:
    """Literal O(N^2) double sum; exponents accumulate as integers mod m."""
    m = ctx.modulus
    n_total = vec.size
    digits = digit_matrix(m, p)
    out = np.empty(n_total, dtype=np.complex128)
    roots = ctx.roots.conj() if conjugate else ctx.roots
    chunk = max(1, 2**22 // max(n_total, 1))
    for start in range(0, n_total, chunk):
        rows = np.arange(start, min(start + chunk, n_total))
        expo = np.zeros((rows.size, n_total), dtype=np.int64)
        for j in range(p):
            if table_axis == 0:
                # out indexed by l (rows), summed over k: factor E[k_j, l_{p-1-j}]
                expo += ctx.pairing[digits[:, j][None, :], digits[rows, p - 1 - j][:, None]]
            else:
                expo += ctx.pairing[digits[rows, j][:, None], digits[:, p - 1 - j][None, :]]
        out[rows] = roots[expo % m] @ vec
    return out


def walsh_transform(ctx: GroupContext, values, direction: str = "forward", method: str = "fast") -> np.ndarray:
    """Size-m^p Walsh-Chrestenson transform.

    forward: coefficients -> values of sum_k c_k W_k on the m^p cosets;
    inverse: values -> coefficients (exact inverse, includes the 1/m^p).
    """
    vec = np.asarray(values, dtype=np.complex128)
    if vec.ndim != 1:
        raise BadLengthError(f"expected a flat array, got shape {vec.shape}")
    m = ctx.modulus
    p = _exact_log(vec.size, m)
    if direction == "forward":
        table, axis, scale = ctx.digit_char, 0, 1.0
    elif direction == "inverse":
        table, axis, scale = ctx.digit_char.conj(), 1, 1.0 / m**p
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    if method == "fast":
        out = _butterfly(table, vec, m, p, axis)
    elif method == "naive":
        out = _naive_sum(ctx, vec, p, axis, conjugate=(direction == "inverse"))
    else:
        raise ValueError(f"method must be 'fast' or 'naive', got {method!r}")
    return out * scale if scale != 1.0 else out


def walsh_eval(ctx: GroupContext, k: int, omega: GroupElement) -> int:
    """Exponent of the k-th Walsh function at a dual point."""
    if omega.side != DUAL:
        raise SideMismatchError("Walsh functions are evaluated on the dual side")
    e = 0
    for j, kd in enumerate(index_digits(k, ctx.modulus)):
        if kd:
            w = omega.digit_at(j + 1)
            if w:
                e += int(ctx.pairing[kd, w])
    return e % ctx.modulus


def fourier(f: TestFunction, direction: str = "forward") -> TestFunction:
    """Fourier transform between the two sides; shape (n, K) -> (K, n).

    The forward direction integrates against the conjugated character and
    acts on primal-side functions; the inverse direction is its exact
    inverse and acts on dual-side functions.
    """
    ctx = f.ctx
    m = ctx.modulus
    p = f.width
    if direction == "forward":
        if f.side != PRIMAL:
            raise SideMismatchError("forward transform expects a primal-side function")
        out = _butterfly(ctx.digit_char.conj(), f.values, m, p, 0)
        out_side = DUAL
    elif direction == "inverse":
        if f.side != DUAL:
            raise SideMismatchError("inverse transform expects a dual-side function")
        out = _butterfly(ctx.digit_char, f.values, m, p, 1)
        out_side = PRIMAL
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    out = out / m**f.smoothness
    return TestFunction(ctx, out_side, f.support_exp, f.smoothness, out)


# ---------------------------------------------------------------------------
# Walsh polynomials


@dataclass(frozen=True, eq=False)
class WalshPolynomial:
    """A function of the first `order` fractional digits on the dual side.

    values[t] lists the function on the m^order depth-`order` cosets of the
    unit ball, with the first digit most significant in t.
    """

    ctx: GroupContext
    order: int
    values: np.ndarray
    coeffs: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.order < 1:
            raise ShapeIncompatibleError(f"polynomial order must be >= 1, got {self.order}")
        arr = np.asarray(self.values, dtype=np.complex128)
        expected = self.ctx.modulus**self.order
        if arr.ndim != 1 or arr.size != expected:
            raise BadLengthError(f"value table must have length {expected}, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if self.coeffs is not None:
            c = np.asarray(self.coeffs, dtype=np.complex128)
            if c.shape != arr.shape:
                raise BadLengthError("coefficient table must match the value table length")
            c = c.copy()
            c.setflags(write=False)
            object.__setattr__(self, "coeffs", c)


def walsh_coefficients(poly: WalshPolynomial) -> np.ndarray:
    """Coefficients against the Walsh system W_0..W_{m^order - 1}."""
    if poly.coeffs is not None:
        return poly.coeffs
    return walsh_transform(poly.ctx, poly.values, "inverse")


def polynomial_from_coefficients(ctx: GroupContext, order: int, coeffs) -> WalshPolynomial:
    values = walsh_transform(ctx, np.asarray(coeffs, dtype=np.complex128), "forward")
    return WalshPolynomial(ctx, order, values, coeffs=np.asarray(coeffs, dtype=np.complex128))


def as_test_function(poly: WalshPolynomial) -> TestFunction:
    """View the polynomial as a test function of shape (order, 0) on the dual side."""
    return TestFunction(poly.ctx, DUAL, poly.order, 0, poly.values)
