"""Digit groups attached to an expanding integer dilation matrix.

A dilation matrix M (all eigenvalues outside the closed unit disc,
|det M| = m >= 2) splits the lattice Z^d into m residue classes.  Choosing
one representative per class (a digit set) turns two-sided digit strings
into a locally compact abelian group: addition acts digit-wise through the
residue-class table, there are no carries.  The dual group uses the
transposed matrix and its own digit set.  This module builds the finite
tables (Cayley, inverse, character pairing) that every other module
consumes, plus the element arithmetic on finitely supported digit strings.

Position convention for a digit string x = {x_p}: positions p <= 0 form the
integer part, positions p >= 1 the fractional part.  The dilation map
shifts positions down: (Dx)_p = x_{p+1}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    CongruentDigitsError,
    InternalInconsistencyError,
    MissingZeroDigitError,
    NotExpandingError,
    SideMismatchError,
    SingularMatrixError,
    UnitDeterminantError,
    WrongDigitCountError,
)

PRIMAL = "primal"
DUAL = "dual"

_EXPANSION_MARGIN = 1e-9


def _as_int_matrix(matrix) -> np.ndarray:
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise SingularMatrixError(f"dilation matrix must be square and nonempty, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise SingularMatrixError("dilation matrix entries must be integers")
        arr = rounded
    return arr.astype(np.int64)


def _int_det(a: np.ndarray) -> int:
    """Exact determinant by cofactor expansion (dimensions here are tiny)."""
    d = a.shape[0]
    if d == 1:
        return int(a[0, 0])
    total = 0
    sign = 1
    for j in range(d):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += sign * int(a[0, j]) * _int_det(minor)
        sign = -sign
    return total


def _int_adjugate(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    if d == 1:
        return np.array([[1]], dtype=np.int64)
    cof = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
            cof[i, j] = (-1) ** (i + j) * _int_det(minor)
    return cof.T.copy()


def _lock(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DilationPair:
    """An expanding integer matrix together with its transpose (dual) data."""

    dim: int
    matrix: np.ndarray
    matrix_dual: np.ndarray
    adjugate: np.ndarray
    adjugate_dual: np.ndarray
    det: int
    modulus: int


def validate_dilation_pair(matrix) -> DilationPair:
    """Check expansion and determinant conditions, return the matrix pair.

    Raises SingularMatrixError, UnitDeterminantError or NotExpandingError
    when the candidate cannot generate a digit group.
    """
    m_arr = _as_int_matrix(matrix)
    det = _int_det(m_arr)
    if det == 0:
        raise SingularMatrixError("dilation matrix is singular")
    if abs(det) == 1:
        raise UnitDeterminantError("dilation matrix has |det| = 1; the digit group would be trivial")
    eigvals = np.linalg.eigvals(m_arr.astype(np.float64))
    small = np.abs(eigvals) <= 1.0 + _EXPANSION_MARGIN
    if np.any(small):
        bad = eigvals[small]
        raise NotExpandingError(f"dilation matrix has eigenvalue(s) with modulus <= 1: {bad}")
    adj = _int_adjugate(m_arr)
    if not np.array_equal(m_arr @ adj, det * np.eye(m_arr.shape[0], dtype=np.int64)):
        raise InternalInconsistencyError("adjugate identity M @ adj(M) = det(M) I failed")
    return DilationPair(
        dim=m_arr.shape[0],
        matrix=_lock(m_arr),
        matrix_dual=_lock(m_arr.T.copy()),
        adjugate=_lock(adj),
        adjugate_dual=_lock(adj.T.copy()),
        det=det,
        modulus=abs(det),
    )


@dataclass(frozen=True, eq=False)
class DigitSet:
    """An ordered full residue system; row 0 is always the zero vector."""

    side: str
    digits: np.ndarray  # shape (m, dim), int64


def _side_adjugate(pair: DilationPair, side: str) -> np.ndarray:
    if side == PRIMAL:
        return pair.adjugate
    if side == DUAL:
        return pair.adjugate_dual
    raise SideMismatchError(f"unknown side {side!r}")


def _residue_key(pair: DilationPair, side: str, vec: np.ndarray) -> tuple:
    adj = _side_adjugate(pair, side)
    return tuple(int(v) for v in (adj @ vec) % pair.modulus)


def resolve_digit_set(pair: DilationPair, side: str, digits: Optional[Sequence] = None) -> DigitSet:
    """Validate a user digit set, or generate the canonical one.

    Generation scans nonnegative integer vectors in shells of growing
    max-coordinate (lexicographic within a shell) and keeps the first
    point of each residue class.  Every class meets [0, m)^d because
    m Z^d sits inside M Z^d, so the scan always finishes with the zero
    vector in front.  User-supplied digits are kept in the given order;
    only validity is checked.
    """
    m = pair.modulus
    d = pair.dim
    if digits is not None:
        arr = np.asarray(digits)
        if arr.ndim != 2 or arr.shape[1] != d:
            raise WrongDigitCountError(f"digit set must be a list of {d}-vectors, got shape {arr.shape}")
        if arr.shape[0] != m:
            raise WrongDigitCountError(f"digit set must contain exactly {m} vectors, got {arr.shape[0]}")
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.array_equal(rounded, arr):
                raise WrongDigitCountError("digit entries must be integers")
            arr = rounded
        arr = arr.astype(np.int64)
        if np.any(arr[0] != 0):
            raise MissingZeroDigitError("the first digit must be the zero vector")
        seen: dict[tuple, int] = {}
        for i in range(m):
            key = _residue_key(pair, side, arr[i])
            if key in seen:
                raise CongruentDigitsError(seen[key], i)
            seen[key] = i
        return DigitSet(side=side, digits=_lock(arr.copy()))

    reps: dict[tuple, tuple] = {}
    ordered: list[tuple] = []
    for shell in range(m):
        for point in itertools.product(range(shell + 1), repeat=d):
            if max(point) != shell:
                continue
            key = _residue_key(pair, side, np.array(point, dtype=np.int64))
            if key not in reps:
                reps[key] = point
                ordered.append(point)
        if len(ordered) == m:
            break
    if len(ordered) != m:
        raise InternalInconsistencyError(f"found only {len(ordered)} of {m} residue classes in [0, {m})^{d}")
    return DigitSet(side=side, digits=_lock(np.array(ordered, dtype=np.int64)))


@dataclass(frozen=True, eq=False)
class GroupContext:
    """All finite tables for one primal/dual digit-group pair.

    pairing[i, j] is the exponent e in exp(2 pi i e / m) produced when
    primal digit i meets dual digit j in the character sum; it already
    folds in the sign of det(M).
    """

    pair: DilationPair
    digits: DigitSet
    digits_dual: DigitSet
    cayley: np.ndarray        # (m, m) primal digit addition
    cayley_dual: np.ndarray
    inverse: np.ndarray       # (m,) primal digit negation
    inverse_dual: np.ndarray
    pairing: np.ndarray       # (m, m) exponents in Z_m
    roots: np.ndarray         # (m,) exp(2 pi i k / m)
    digit_char: np.ndarray    # roots[pairing], shape (m, m)

    @property
    def modulus(self) -> int:
        return self.pair.modulus

    @property
    def dim(self) -> int:
        return self.pair.dim

    def cayley_table(self, side: str) -> np.ndarray:
        if side == PRIMAL:
            return self.cayley
        if side == DUAL:
            return self.cayley_dual
        raise SideMismatchError(f"unknown side {side!r}")

    def inverse_table(self, side: str) -> np.ndarray:
        if side == PRIMAL:
            return self.inverse
        if side == DUAL:
            return self.inverse_dual
        raise SideMismatchError(f"unknown side {side!r}")


def _digit_tables(pair: DilationPair, ds: DigitSet) -> tuple[np.ndarray, np.ndarray]:
    m = pair.modulus
    index_of = {_residue_key(pair, ds.side, ds.digits[i]): i for i in range(m)}
    cay = np.zeros((m, m), dtype=np.int64)
    inv = np.zeros(m, dtype=np.int64)
    for i in range(m):
        for j in range(m):
            key = _residue_key(pair, ds.side, ds.digits[i] + ds.digits[j])
            if key not in index_of:
                raise InternalInconsistencyError("digit sum fell outside the residue system")
            cay[i, j] = index_of[key]
        neg_key = _residue_key(pair, ds.side, -ds.digits[i])
        if neg_key not in index_of:
            raise InternalInconsistencyError("digit negation fell outside the residue system")
        inv[i] = index_of[neg_key]
    return cay, inv


def _check_group_axioms(cay: np.ndarray, inv: np.ndarray) -> None:
    m = cay.shape[0]
    idx = np.arange(m)
    if not np.array_equal(cay[0, :], idx) or not np.array_equal(cay[:, 0], idx):
        raise InternalInconsistencyError("digit 0 is not the additive identity")
    if not np.array_equal(cay, cay.T):
        raise InternalInconsistencyError("digit addition is not commutative")
    if not np.array_equal(cay[idx, inv], np.zeros(m, dtype=np.int64)):
        raise InternalInconsistencyError("digit negation table is wrong")
    left = cay[cay, :]          # left[i, j, l] = (i + j) + l
    right = cay[:, cay]         # right[i, j, l] = i + (j + l)
    if not np.array_equal(left, right):
        raise InternalInconsistencyError("digit addition is not associative")


def _check_pairing(e_table: np.ndarray, cay: np.ndarray, cay_dual: np.ndarray, m: int) -> None:
    left = e_table[cay, :]
    right = (e_table[:, None, :] + e_table[None, :, :]) % m
    if not np.array_equal(left, right):
        raise InternalInconsistencyError("pairing is not additive in the primal slot")
    left = e_table[:, cay_dual]
    right = (e_table[:, :, None] + e_table[:, None, :]) % m
    if not np.array_equal(left, right):
        raise InternalInconsistencyError("pairing is not additive in the dual slot")
    for i in range(1, m):
        if not np.any(e_table[i, :]):
            raise InternalInconsistencyError(f"pairing row {i} is trivial; digit pairing is degenerate")
        if not np.any(e_table[:, i]):
            raise InternalInconsistencyError(f"pairing column {i} is trivial; digit pairing is degenerate")


def build_group_context(
    pair: DilationPair,
    digits: Optional[DigitSet] = None,
    digits_dual: Optional[DigitSet] = None,
) -> GroupContext:
    """Assemble and self-check all finite tables for the group pair."""
    ds = digits if digits is not None else resolve_digit_set(pair, PRIMAL)
    ds_dual = digits_dual if digits_dual is not None else resolve_digit_set(pair, DUAL)
    if ds.side != PRIMAL or ds_dual.side != DUAL:
        raise SideMismatchError("digit sets passed on the wrong sides")
    m = pair.modulus
    cay, inv = _digit_tables(pair, ds)
    cay_dual, inv_dual = _digit_tables(pair, ds_dual)
    _check_group_axioms(cay, inv)
    _check_group_axioms(cay_dual, inv_dual)

    sign = 1 if pair.det > 0 else -1
    paired = ds.digits @ pair.adjugate.T @ ds_dual.digits.T  # (m, m), <adj(M) s_i, s*_j>
    e_table = (sign * paired) % m
    _check_pairing(e_table, cay, cay_dual, m)

    roots = np.exp(2j * np.pi * np.arange(m) / m)
    return GroupContext(
        pair=pair,
        digits=ds,
        digits_dual=ds_dual,
        cayley=_lock(cay),
        cayley_dual=_lock(cay_dual),
        inverse=_lock(inv),
        inverse_dual=_lock(inv_dual),
        pairing=_lock(e_table.astype(np.int64)),
        roots=_lock(roots),
        digit_char=_lock(roots[e_table]),
    )


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class GroupElement:
    """A finitely supported digit string on one side.

    int_digits lists digit indices at positions -(len-1)..0, most
    significant first; frac_digits lists positions 1..len.  Both tuples are
    kept canonical: no leading zero in int_digits, no trailing zero in
    frac_digits, so equal elements compare equal structurally.
    """

    side: str
    int_digits: tuple[int, ...] = ()
    frac_digits: tuple[int, ...] = ()

    def __post_init__(self):
        ints = tuple(int(v) for v in self.int_digits)
        fracs = tuple(int(v) for v in self.frac_digits)
        while ints and ints[0] == 0:
            ints = ints[1:]
        while fracs and fracs[-1] == 0:
            fracs = fracs[:-1]
        object.__setattr__(self, "int_digits", ints)
        object.__setattr__(self, "frac_digits", fracs)

    def digit_at(self, position: int) -> int:
        if position >= 1:
            return self.frac_digits[position - 1] if position <= len(self.frac_digits) else 0
        offset = len(self.int_digits) - 1 + position
        return self.int_digits[offset] if offset >= 0 else 0

    def positions(self) -> Iterable[int]:
        """Positions carrying a nonzero digit."""
        for i, v in enumerate(self.int_digits):
            if v:
                yield i - (len(self.int_digits) - 1)
        for i, v in enumerate(self.frac_digits):
            if v:
                yield i + 1

    def is_zero(self) -> bool:
        return not self.int_digits and not self.frac_digits


def zero_element(side: str = PRIMAL) -> GroupElement:
    return GroupElement(side=side)


def _digit_span(x: GroupElement, y: GroupElement) -> tuple[int, int]:
    lo = min(1 - len(x.int_digits), 1 - len(y.int_digits), 1)
    hi = max(len(x.frac_digits), len(y.frac_digits), 0)
    return lo, hi


def add(ctx: GroupContext, x: GroupElement, y: GroupElement) -> GroupElement:
    """Digit-wise sum x + y (no carries)."""
    if x.side != y.side:
        raise SideMismatchError(f"cannot add elements on sides {x.side!r} and {y.side!r}")
    cay = ctx.cayley_table(x.side)
    lo, hi = _digit_span(x, y)
    ints = [int(cay[x.digit_at(p), y.digit_at(p)]) for p in range(lo, 1)]
    fracs = [int(cay[x.digit_at(p), y.digit_at(p)]) for p in range(1, hi + 1)]
    return GroupElement(side=x.side, int_digits=tuple(ints), frac_digits=tuple(fracs))


def negate(ctx: GroupContext, x: GroupElement) -> GroupElement:
    inv = ctx.inverse_table(x.side)
    return GroupElement(
        side=x.side,
        int_digits=tuple(int(inv[v]) for v in x.int_digits),
        frac_digits=tuple(int(inv[v]) for v in x.frac_digits),
    )


def dilate(x: GroupElement, j: int) -> GroupElement:
    """Apply the dilation map j times: digit at position p moves to p - j."""
    if j == 0:
        return x
    span = [(p - j, v) for p, v in _enumerate_digits(x)]
    return _element_from_pairs(x.side, span)


def _enumerate_digits(x: GroupElement) -> list[tuple[int, int]]:
    out = []
    base = -(len(x.int_digits) - 1)
    for i, v in enumerate(x.int_digits):
        out.append((base + i, v))
    for i, v in enumerate(x.frac_digits):
        out.append((i + 1, v))
    return out


def _element_from_pairs(side: str, pairs: Sequence[tuple[int, int]]) -> GroupElement:
    nonzero = [(p, v) for p, v in pairs if v]
    if not nonzero:
        return GroupElement(side=side)
    lo = min(p for p, _ in nonzero)
    hi = max(p for p, _ in nonzero)
    table = {p: v for p, v in nonzero}
    ints = tuple(table.get(p, 0) for p in range(min(lo, 0), 1)) if lo <= 0 else ()
    fracs = tuple(table.get(p, 0) for p in range(1, hi + 1)) if hi >= 1 else ()
    return GroupElement(side=side, int_digits=ints, frac_digits=fracs)


@lru_cache(maxsize=None)
def _digit_matrix_cached(m: int, width: int) -> np.ndarray:
    """Little-endian base-m digits of 0..m^width-1, shape (m^width, width)."""
    count = m**width
    out = np.zeros((count, max(width, 1)), dtype=np.int64)
    idx = np.arange(count)
    for t in range(width):
        out[:, t] = (idx // m**t) % m
    return _lock(out)


def digit_matrix(m: int, width: int) -> np.ndarray:
    return _digit_matrix_cached(int(m), int(width))


def index_digits(k: int, m: int) -> list[int]:
    """Little-endian base-m digits of a nonnegative index (empty for 0)."""
    if k < 0:
        raise ValueError(f"index must be nonnegative, got {k}")
    out = []
    while k:
        out.append(k % m)
        k //= m
    return out


def digit_width(k: int, m: int) -> int:
    return len(index_digits(k, m))


def gamma_of(ctx: GroupContext, k: int, side: str = PRIMAL) -> GroupElement:
    """The k-th lattice point: base-m digit t of k sits at position -t."""
    ds = index_digits(int(k), ctx.modulus)
    return GroupElement(side=side, int_digits=tuple(reversed(ds)))


@dataclass(frozen=True)
class CosetAddress:
    side: str
    scale: int
    index: int


def coset_address(ctx: GroupContext, x: GroupElement, scale: int) -> CosetAddress:
    """Address of the scale-n coset containing x.

    Base-m digit t of the index is x's digit at position scale - t;
    digits at positions > scale do not matter.
    """
    m = ctx.modulus
    k = 0
    for p, v in _enumerate_digits(x):
        if v and p <= scale:
            k += v * m ** (scale - p)
    return CosetAddress(side=x.side, scale=scale, index=k)


def representative(ctx: GroupContext, address: CosetAddress) -> GroupElement:
    return dilate(gamma_of(ctx, address.index, address.side), -address.scale)


def char_exponent(ctx: GroupContext, x: GroupElement, omega: GroupElement) -> int:
    """Exponent e in Z_m with chi(x, omega) = exp(2 pi i e / m).

    x must live on the primal side and omega on the dual side; the digit of
    x at position p meets the digit of omega at position 1 - p.
    """
    if x.side != PRIMAL or omega.side != DUAL:
        raise SideMismatchError("char_exponent expects (primal, dual) arguments")
    e = 0
    for p, v in _enumerate_digits(x):
        if v:
            w = omega.digit_at(1 - p)
            if w:
                e += int(ctx.pairing[v, w])
    return e % ctx.modulus


def char_value(ctx: GroupContext, x: GroupElement, omega: GroupElement) -> complex:
    return complex(ctx.roots[char_exponent(ctx, x, omega)])


def gamma_add_index(ctx: GroupContext, a: int, b: int, side: str = PRIMAL) -> int:
    """Index of gamma_[a] + gamma_[b]: digit-wise sum of base-m expansions."""
    m = ctx.modulus
    cay = ctx.cayley_table(side)
    da = index_digits(int(a), m)
    db = index_digits(int(b), m)
    width = max(len(da), len(db))
    da += [0] * (width - len(da))
    db += [0] * (width - len(db))
    return sum(int(cay[da[t], db[t]]) * m**t for t in range(width))


def gamma_neg_index(ctx: GroupContext, a: int, side: str = PRIMAL) -> int:
    m = ctx.modulus
    inv = ctx.inverse_table(side)
    return sum(int(inv[v]) * m**t for t, v in enumerate(index_digits(int(a), m)))


def gamma_add_indices(ctx: GroupContext, indices: np.ndarray, shift: int, side: str, width: int) -> np.ndarray:
    """Vectorized gamma_add_index(i, shift) for every i in `indices`.

    All inputs must have base-m width at most `width`; the result is exact
    because digit-wise addition never carries.
    """
    m = ctx.modulus
    cay = ctx.cayley_table(side)
    digits = digit_matrix(m, width)[indices]
    sd = index_digits(int(shift), m)
    if len(sd) > width:
        raise ValueError(f"shift index {shift} is wider than {width} base-{m} digits")
    sd += [0] * (width - len(sd))
    out = np.zeros(len(indices), dtype=np.int64)
    for t in range(width):
        out += cay[digits[:, t], sd[t]] * m**t
    return out
