"""Shared literals and samplers for the test suite.

The frozen tables below were computed once by hand from the digit
conventions and are restated here as plain data, so the tests do not
depend on any library code to know what the right answers are.
"""

from functools import lru_cache

import numpy as np

from vilenkin import (
    PRIMAL,
    DUAL,
    VilenkinError,
    build_group_context,
    resolve_digit_set,
    validate_dilation_pair,
    validate_xi,
)

# First worked setup: determinant 4 on a rank-2 lattice, shared digit set.
EXAMPLE1_MATRIX = ((2, 0), (1, 2))
EXAMPLE1_DIGITS = ((0, 0), (0, 1), (1, 0), (1, 1))
EXAMPLE1_PAIRING = (
    (0, 0, 0, 0),
    (0, 2, 0, 2),
    (0, 3, 2, 1),
    (0, 1, 2, 3),
)
EXAMPLE1_CAYLEY = (
    (0, 1, 2, 3),
    (1, 0, 3, 2),
    (2, 3, 1, 0),
    (3, 2, 0, 1),
)
EXAMPLE1_CAYLEY_DUAL = (
    (0, 1, 2, 3),
    (1, 2, 3, 0),
    (2, 3, 0, 1),
    (3, 0, 1, 2),
)
EXAMPLE1_XI = (1, 1, 2, 1)
EXAMPLE1_MASK_ONES = tuple(sorted((set(range(16)) - {6, 9}) | {22, 25}))
EXAMPLE1_PHI_ONES = tuple(sorted((set(range(16)) - {6, 9}) | {22, 89}))
EXAMPLE1_COMPANIONS = (
    tuple(sorted({6, 9} | (set(range(16, 32)) - {22, 25}))),
    tuple(range(32, 48)),
    tuple(range(48, 64)),
)

# Second worked setup: determinant 3, complex eigenvalues, distinct digit sets.
EXAMPLE2_MATRIX = ((2, 1), (-1, 1))
EXAMPLE2_DIGITS = ((0, 0), (1, 0), (2, 0))
EXAMPLE2_DUAL_DIGITS = ((0, 0), (0, 1), (1, 1))
EXAMPLE2_PAIRING = (
    (0, 0, 0),
    (0, 1, 2),
    (0, 2, 1),
)
EXAMPLE2_CAYLEY = (
    (0, 1, 2),
    (1, 2, 0),
    (2, 0, 1),
)
EXAMPLE2_XI = (1, 2, 2, 1, 1)
EXAMPLE2_MASK_ONES = (0, 1, 2, 3, 5, 6, 17, 22, 25)
EXAMPLE2_PHI_ONES = (0, 1, 2, 3, 5, 6, 17, 52, 157)
EXAMPLE2_COMPANIONS = (
    tuple(range(8, 17)),
    tuple(sorted({4, 7, 26} | {18 + t for t in range(9) if t not in (4, 7, 8)})),
)

# (modulus, order) pairs that admit at least one valid digit sequence.
# order 2 needs all entries distinct, so at least order + 1 nonzero digits;
# order 3 needs distinct adjacent pairs, which any modulus >= 3 provides.
FEASIBLE_SHAPES = ((4, 2), (5, 2), (3, 3), (4, 3), (5, 3))


def ones_table(size, support):
    table = np.zeros(size, dtype=np.complex128)
    table[list(support)] = 1.0
    return table


@lru_cache(maxsize=None)
def cached_context(matrix, digits=None, dual_digits=None):
    pair = validate_dilation_pair([list(r) for r in matrix])
    primal = resolve_digit_set(pair, PRIMAL, digits)
    dual = resolve_digit_set(pair, DUAL, dual_digits)
    return build_group_context(pair, primal, dual)


def example1_context():
    return cached_context(EXAMPLE1_MATRIX, EXAMPLE1_DIGITS, EXAMPLE1_DIGITS)


def example2_context():
    return cached_context(EXAMPLE2_MATRIX, EXAMPLE2_DIGITS, EXAMPLE2_DUAL_DIGITS)


def random_expanding_matrix(rng, dim, modulus):
    """Sample an integer matrix with the given |det| whose spectrum lies outside
    the unit circle, by rejection over small entries."""
    if dim == 1:
        return ((int(rng.choice([-1, 1])) * modulus,),)
    while True:
        cand = rng.integers(-3, 4, size=(2, 2))
        try:
            pair = validate_dilation_pair(cand.tolist())
        except VilenkinError:
            continue
        if pair.modulus == modulus:
            return tuple(tuple(int(v) for v in row) for row in cand)


def random_xi_entries(rng, modulus, order, max_index=6):
    if order == 2:
        top = min(modulus - 2, max_index)
        r = int(rng.integers(order, top + 1))
        picks = rng.permutation(np.arange(1, modulus))[: r + 1]
        return tuple(int(v) for v in picks)
    top = min((modulus - 1) ** 2, max_index)
    while True:
        r = int(rng.integers(order, top + 1))
        entries = [int(rng.integers(1, modulus))]
        seen = set()
        for _ in range(r):
            options = [d for d in range(1, modulus) if (entries[-1], d) not in seen]
            if not options:
                entries = None
                break
            nxt = int(rng.choice(options))
            seen.add((entries[-1], nxt))
            entries.append(nxt)
        if entries is not None:
            return tuple(entries)


def random_signs(rng, modulus, order):
    signs = rng.choice([1.0, -1.0], size=modulus ** (order - 1)).astype(np.complex128)
    signs[0] = 1.0
    return signs


def random_construction(rng, modulus, order, max_index=6, dim=None, signed=True):
    """A random group context plus a validated digit sequence for it."""
    if dim is None:
        dim = int(rng.integers(1, 3))
    matrix = random_expanding_matrix(rng, dim, modulus)
    ctx = cached_context(matrix)
    entries = random_xi_entries(rng, modulus, order, max_index)
    signs = None
    if signed and int(rng.integers(2)):
        signs = random_signs(rng, modulus, order)
    xi = validate_xi(ctx, order, entries, signs)
    return ctx, xi
