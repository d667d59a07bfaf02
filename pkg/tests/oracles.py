"""Slow reference implementations used to cross-check the library.

Everything here works directly on coset indices and the digit pairing
table, one scalar at a time, and never touches the fast transform paths
or the group-element machinery. The only library input is the pairing
table itself, which test_group pins against frozen literals.
"""

import cmath

import numpy as np

from vilenkin import DUAL, PRIMAL, TestFunction


def pair_exponent(ctx, x_scale, x_index, w_scale, w_index):
    """Character exponent between two coset representatives.

    Digit t of `x_index` sits at lattice position x_scale - t, and the
    digit of the dual point at position q pairs with the primal digit at
    position 1 - q. Zero digits pair to exponent zero, so the sum is
    finite.
    """
    m = ctx.modulus
    table = np.asarray(ctx.pairing)
    total = 0
    rest = x_index
    t = 0
    while rest:
        d = rest % m
        rest //= m
        if d:
            pos = x_scale - t
            s = w_scale - (1 - pos)
            if s >= 0:
                wd = (w_index // m**s) % m
                total += int(table[d, wd])
        t += 1
    return total % m


def character(ctx, x_scale, x_index, w_scale, w_index, conjugate=False):
    e = pair_exponent(ctx, x_scale, x_index, w_scale, w_index)
    sign = -1.0 if conjugate else 1.0
    return cmath.exp(sign * 2j * cmath.pi * e / ctx.modulus)


def walsh_matrix(ctx, width):
    """Matrix sending Walsh coefficients to values on depth-`width` cosets.

    Row t is the list of the first m**width characters on the coset whose
    big-endian digit string is t; column k is the k-th character.
    """
    m = ctx.modulus
    size = m**width
    mat = np.zeros((size, size), dtype=np.complex128)
    for t in range(size):
        for k in range(size):
            mat[t, k] = character(ctx, 0, k, width, t)
    return mat


def slow_fourier(f):
    """Direct integral against conjugated characters, coset by coset."""
    ctx = f.ctx
    m = ctx.modulus
    out_scale, out_support = f.support_exp, f.smoothness
    out_side = DUAL if f.side == PRIMAL else PRIMAL
    out = np.zeros(m ** (out_scale + out_support), dtype=np.complex128)
    for l in range(out.size):
        acc = 0.0 + 0.0j
        for c in range(f.values.size):
            if f.side == PRIMAL:
                chi = character(ctx, f.smoothness, c, out_scale, l, conjugate=True)
            else:
                chi = character(ctx, out_scale, l, f.smoothness, c, conjugate=True)
            acc += complex(f.values[c]) * chi
        out[l] = acc / m**f.smoothness
    return TestFunction(ctx, out_side, out_scale, out_support, out)


def slow_inverse_fourier(f):
    """Direct integral against plain characters; inverse of slow_fourier."""
    ctx = f.ctx
    m = ctx.modulus
    out_scale, out_support = f.support_exp, f.smoothness
    out_side = DUAL if f.side == PRIMAL else PRIMAL
    out = np.zeros(m ** (out_scale + out_support), dtype=np.complex128)
    for c in range(out.size):
        acc = 0.0 + 0.0j
        for l in range(f.values.size):
            if out_side == PRIMAL:
                chi = character(ctx, out_scale, c, f.smoothness, l)
            else:
                chi = character(ctx, f.smoothness, l, out_scale, c)
            acc += complex(f.values[l]) * chi
        out[c] = acc / m**f.smoothness
    return TestFunction(ctx, out_side, out_scale, out_support, out)
