"""Mask construction from digit sequences and the refinable function."""

import itertools

import numpy as np
import pytest

import support
from vilenkin import (
    DUAL,
    NonTerminatingProductError,
    ShapeIncompatibleError,
    TestFunction,
    WalshPolynomial,
    WindowCollisionError,
    ZeroDigitUsedError,
    build_mask_from_xi,
    effective_shape,
    mask_admissible,
    mask_orthogonality_defect,
    phi_hat_closed_form,
    phi_hat_from_product,
    shift_orthonormality_defect,
    validate_xi,
)


def test_xi_validation_rejects_malformed_sequences(ctx_example1):
    ctx = ctx_example1
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 1, (1, 2))
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 3, (1, 2))
    with pytest.raises(ZeroDigitUsedError):
        validate_xi(ctx, 3, (1, 0, 2, 1))
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 3, (1, 4, 2, 1))
    with pytest.raises(WindowCollisionError):
        validate_xi(ctx, 3, (1, 2, 1, 2, 1))


def test_xi_validation_checks_sign_vectors(ctx_example1):
    ctx = ctx_example1
    good = np.ones(16)
    validate_xi(ctx, 3, support.EXAMPLE1_XI, good)
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 3, support.EXAMPLE1_XI, np.ones(4))
    flipped = np.ones(16)
    flipped[0] = -1.0
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 3, support.EXAMPLE1_XI, flipped)
    phased = np.ones(16, dtype=np.complex128)
    phased[3] = np.exp(0.3j)
    phased[5] = -1.0
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 3, support.EXAMPLE1_XI, phased)
    validate_xi(ctx, 3, support.EXAMPLE1_XI, phased, allow_unimodular=True)
    doubled = np.ones(16)
    doubled[2] = 2.0
    with pytest.raises(ShapeIncompatibleError):
        validate_xi(ctx, 3, support.EXAMPLE1_XI, doubled, allow_unimodular=True)


def test_reference_masks_match_frozen_tables(ctx_example1, ctx_example2):
    cases = (
        (ctx_example1, support.EXAMPLE1_XI, support.EXAMPLE1_MASK_ONES, 64),
        (ctx_example2, support.EXAMPLE2_XI, support.EXAMPLE2_MASK_ONES, 27),
    )
    for ctx, entries, ones, size in cases:
        xi = validate_xi(ctx, 3, entries)
        report = build_mask_from_xi(xi)
        assert np.array_equal(report.mask.values, support.ones_table(size, ones))
        assert report.orthogonality_defect == 0.0
        assert report.admissible
        assert mask_orthogonality_defect(report.mask) == 0.0
        assert mask_admissible(report.mask)


def test_reference_refinable_functions_match_frozen_tables(ctx_example1, ctx_example2):
    cases = (
        (ctx_example1, support.EXAMPLE1_XI, support.EXAMPLE1_PHI_ONES, 256, (2, 2)),
        (ctx_example2, support.EXAMPLE2_XI, support.EXAMPLE2_PHI_ONES, 243, (2, 3)),
    )
    for ctx, entries, ones, size, shape in cases:
        xi = validate_xi(ctx, 3, entries)
        mask = build_mask_from_xi(xi).mask
        closed = phi_hat_closed_form(xi, mask)
        assert (closed.side, closed.smoothness, closed.support_exp) == (DUAL, *shape)
        assert np.array_equal(closed.values, support.ones_table(size, ones))
        product = phi_hat_from_product(ctx, mask, xi.support_exp)
        assert np.array_equal(product.values, closed.values)
        assert shift_orthonormality_defect(closed) == 0.0


def test_random_sequences_give_flat_masks_and_matching_routes(rng):
    """Any valid digit sequence yields a mask whose squared column sums are
    exactly one, and the infinite product collapses to the closed form."""
    for trial in range(12):
        modulus, order = support.FEASIBLE_SHAPES[trial % len(support.FEASIBLE_SHAPES)]
        ctx, xi = support.random_construction(rng, modulus, order)
        report = build_mask_from_xi(xi)
        assert report.orthogonality_defect == 0.0
        cols = np.abs(report.mask.values.reshape(ctx.modulus, -1)) ** 2
        assert np.array_equal(cols.sum(axis=0), np.ones(cols.shape[1]))
        closed = phi_hat_closed_form(xi, report.mask)
        product = phi_hat_from_product(ctx, report.mask, xi.support_exp)
        assert np.array_equal(closed.values, product.values)
        assert shift_orthonormality_defect(closed) == 0.0
        assert (closed.smoothness, closed.support_exp) == (order - 1, xi.support_exp)
        assert xi.support_exp == xi.r - order + 2


def test_signs_flip_entries_but_not_support(ctx_example2, rng):
    signs = support.random_signs(rng, 3, 3)
    xi = validate_xi(ctx_example2, 3, support.EXAMPLE2_XI, signs)
    mask = build_mask_from_xi(xi).mask
    assert np.array_equal(
        np.abs(mask.values), support.ones_table(27, support.EXAMPLE2_MASK_ONES)
    )
    closed = phi_hat_closed_form(xi, mask)
    product = phi_hat_from_product(ctx_example2, mask, xi.support_exp)
    assert np.array_equal(closed.values, product.values)
    assert np.array_equal(
        np.abs(closed.values), support.ones_table(243, support.EXAMPLE2_PHI_ONES)
    )
    assert shift_orthonormality_defect(closed) == 0.0


def test_longest_sequence_for_three_digits_has_five_entries(ctx_example2):
    """With two nonzero digits the adjacent pairs run out after four, so a
    five-entry sequence is the longest valid one and six always collide."""
    ctx = ctx_example2
    found = validate_xi(ctx, 3, (1, 1, 2, 2, 1))
    assert found.r == 4
    for entries in itertools.product((1, 2), repeat=6):
        with pytest.raises(WindowCollisionError):
            validate_xi(ctx, 3, entries)


def test_binary_groups_admit_no_valid_sequence():
    ctx = support.cached_context(((2,),))
    for order in (2, 3):
        for extra in range(3):
            entries = (1,) * (order + 1 + extra)
            with pytest.raises(WindowCollisionError):
                validate_xi(ctx, order, entries)


def test_product_requires_unit_value_at_zero(ctx_example2):
    vals = support.ones_table(27, support.EXAMPLE2_MASK_ONES)
    vals[0] = 0.0
    vals[9] = 1.0
    broken = WalshPolynomial(ctx_example2, 3, vals)
    with pytest.raises(NonTerminatingProductError):
        phi_hat_from_product(ctx_example2, broken, 3)


def test_shift_orthonormality_defect_detects_perturbations(ctx_example1):
    xi = validate_xi(ctx_example1, 3, support.EXAMPLE1_XI)
    phi_hat = phi_hat_closed_form(xi)
    bumped = np.array(phi_hat.values)
    bumped[5] += 0.5
    worse = TestFunction(
        ctx_example1, DUAL, phi_hat.smoothness, phi_hat.support_exp, bumped
    )
    assert shift_orthonormality_defect(worse) > 0.4


def test_order_one_unit_column_gives_ball_indicator():
    ctx = support.cached_context(((2,),))
    mask = WalshPolynomial(ctx, 1, np.array([1.0, 0.0]))
    phi_hat = phi_hat_from_product(ctx, mask, 0)
    assert effective_shape(phi_hat) == (0, 0)
    assert phi_hat.values[0] == 1.0
