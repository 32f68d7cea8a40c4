"""Truncation, certification, and Hilbert-Schmidt dichotomy tests.

Oracles: dilation symbols give exactly diagonal matrices; the half-plane
pair w = (1-z)^alpha, phi = (1+z)/2 has column norms in closed Gamma form
    ||T e_k||^2 = (4^a/pi) G(a+1/2) G(k+1/2) / G(k+a+1)
with Hilbert-Schmidt sum (4^a/pi) G(a-1/2) G(1/2) / G(a) when a > 1/2, and
the norm of the unweighted composition operator for an affine self-map is
known in closed form (sqrt(2) for phi = (1+z)/2).
"""

import pytest
import warnings

from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from hardyapprox.numerics import PrecisionContext, jacobi_svd
from hardyapprox.disc_symbols import (
    DiscWeight,
    LensParams,
    constant_weight,
    dilation_map,
    halfplane_symbol_weight,
    lens_map,
    lens_weight,
    series_weight,
)
from hardyapprox.operator_core import (
    ApproxNumbers,
    AssemblyMismatch,
    CertificationFailed,
    DIVERGENT,
    Divergent,
    InsufficientCertification,
    NonIntegrableTail,
    WeightedCompositionSpec,
    approx_numbers,
    assemble,
    beta_estimate,
    closed_form_hs,
    hilbert_schmidt_norm,
    _quadrature_columns,
    _series_columns,
)

CTX = PrecisionContext(precision_bits=128, quad_nodes=64)
CTX256 = PrecisionContext(precision_bits=256, quad_nodes=64)


def gamma_column_norm_sq(k, alpha):
    return ((4**alpha / mp.pi) * mp.gamma(alpha + mpf(1) / 2)
            * mp.gamma(k + mpf(1) / 2) / mp.gamma(k + alpha + 1))


# ---------------------------------------------------------------------------
# assembly


def test_dilation_matrix_is_exactly_diagonal():
    spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2), constant_weight(1))
    t = assemble(spec, 8, CTX)
    for j in range(8):
        for k in range(8):
            expect = mpf(2) ** -k if j == k else mpf(0)
            assert abs(t.m.entry(j, k) - expect) < mpf(10) ** -35
    assert all(abs(x) < mpf(10) ** -35 for x in t.col_tail)
    assert not t.crude_tail
    # tail bound is the remaining geometric column mass
    with CTX.workprec():
        expect = mpf(2) ** -8 / mp.sqrt(mpf(3) / 4)
        assert abs(t.op_tail - expect) < mpf(10) ** -30


def test_multiplier_of_z_shifts_rows():
    spec = WeightedCompositionSpec(dilation_map(1), series_weight((0, 1)))
    t = assemble(spec, 4, CTX)
    for j in range(4):
        for k in range(4):
            expect = mpf(1) if j == k + 1 else mpf(0)
            assert abs(t.m.entry(j, k) - expect) < mpf(10) ** -30
    assert t.crude_tail
    assert mpf(2) <= t.op_tail < mpf("2.001")
    # the last column's single coefficient z^4 falls outside the window
    assert abs(t.col_tail[3] - 1) < mpf(10) ** -25
    assert abs(t.col_tail[0]) < mpf(10) ** -25


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 9), st.integers(3, 8))
def test_dilation_tail_formula(tenths, n):
    r = mpf(tenths) / 10
    spec = WeightedCompositionSpec(dilation_map(r), constant_weight(1))
    t = assemble(spec, n, CTX)
    with CTX.workprec():
        expect = r**n / mp.sqrt(1 - r**2)
        # op_tail may exceed the formula by sqrt(rounding noise) in col_tail
        assert abs(t.op_tail - expect) < mpf(10) ** -17 * (1 + expect)


def test_assembly_routes_agree_for_lens_symbols():
    ctx = PrecisionContext(precision_bits=512, quad_nodes=64)
    params = LensParams(mpf(1) / 2)
    _, w = lens_weight(params)
    spec = WeightedCompositionSpec(lens_map(params), w)
    with ctx.workprec():
        sc = _series_columns(spec, 16)
        qc = _quadrature_columns(spec, 16, ctx)
        worst = max(abs(sc[k][j] - qc[k][j]) for k in range(16) for j in range(16))
    assert worst < mpf(10) ** -100


def test_both_mode_assembles_halfplane_pair():
    phi, w = halfplane_symbol_weight(mpf("0.6"))
    spec = WeightedCompositionSpec(phi, w, assembly="both")
    t = assemble(spec, 10, CTX256)
    # leading coefficients of (1-z)^0.6
    assert abs(t.m.entry(0, 0) - 1) < mpf(10) ** -30
    assert abs(t.m.entry(1, 0) + mpf("0.6")) < mpf(10) ** -30


def test_inconsistent_weight_routes_raise():
    _, w_eval = halfplane_symbol_weight(mpf("0.6"))
    phi, w_taylor = halfplane_symbol_weight(mpf("0.3"))
    fake = DiscWeight(eval=w_eval.eval, taylor=w_taylor.taylor,
                      sup_norm=w_eval.sup_norm, name="mismatched")
    spec = WeightedCompositionSpec(phi, fake, assembly="both")
    with pytest.raises(AssemblyMismatch):
        assemble(spec, 6, CTX)


def test_column_norms_match_gamma_values():
    alpha = mpf("0.6")
    phi, w = halfplane_symbol_weight(alpha)
    t = assemble(WeightedCompositionSpec(phi, w), 6, CTX256)
    with CTX256.workprec():
        for k in range(6):
            expect = gamma_column_norm_sq(k, alpha)
            assert abs(t.col_norms[k] - expect) < mpf(10) ** -25 * expect


def test_column_norm_decay_tracks_power_law():
    # ||T e_k|| * k^(a/2 + 1/4) stays within a factor 4 of its limit
    alpha = mpf("0.6")
    phi, w = halfplane_symbol_weight(alpha)
    t = assemble(WeightedCompositionSpec(phi, w), 12, CTX)
    limit = mp.sqrt((4**alpha / mp.pi) * mp.gamma(alpha + mpf(1) / 2))
    for k in range(1, 12):
        scaled = mp.sqrt(t.col_norms[k]) * mpf(k) ** (alpha / 2 + mpf(1) / 4)
        assert limit / 4 < scaled < limit * 4


def test_validation_rejects_bad_inputs():
    phi = dilation_map(mpf(1) / 2)
    with pytest.raises(ValueError):
        WeightedCompositionSpec(phi, constant_weight(1), assembly="magic")
    unbounded = DiscWeight(eval=lambda z: 1 / (1 - z),
                           taylor=constant_weight(1).taylor, sup_norm=mp.inf)
    with pytest.raises(ValueError):
        WeightedCompositionSpec(phi, unbounded)
    with pytest.raises(ValueError):
        assemble(WeightedCompositionSpec(phi, constant_weight(1)), 0, CTX)


# ---------------------------------------------------------------------------
# spectral invariants


def test_frobenius_mass_matches_columns():
    phi, w = halfplane_symbol_weight(mpf("0.6"))
    t = assemble(WeightedCompositionSpec(phi, w), 10, CTX256)
    vals = jacobi_svd(t.m, CTX256)
    with CTX256.workprec():
        lhs = mp.fsum(v**2 for v in vals)
        rhs = mp.fsum(t.col_norms[k] - t.col_tail[k] for k in range(10))
        assert abs(lhs - rhs) < mpf(10) ** -25 * (1 + rhs)


def test_singular_values_of_adjoint_coincide():
    params = LensParams(mpf(1) / 2)
    _, w = lens_weight(params)
    t = assemble(WeightedCompositionSpec(lens_map(params), w), 8, CTX)
    a = jacobi_svd(t.m, CTX)
    b = jacobi_svd(t.m.conj_transpose(), CTX)
    assert all(abs(x - y) < mpf(10) ** -28 for x, y in zip(a, b))


def test_truncation_growth_is_monotone():
    # compressions increase toward the full operator
    phi, _ = halfplane_symbol_weight(mpf(1))
    spec = WeightedCompositionSpec(phi, constant_weight(1))
    small = jacobi_svd(assemble(spec, 8, CTX).m, CTX)
    large = jacobi_svd(assemble(spec, 16, CTX).m, CTX)
    assert all(large[i] >= small[i] - mpf(10) ** -30 for i in range(8))


def test_unweighted_halfplane_norm_approaches_affine_formula():
    # ||C_phi|| = sqrt(2) for phi = (1+z)/2; compressions approach from below
    phi, _ = halfplane_symbol_weight(mpf(1))
    spec = WeightedCompositionSpec(phi, constant_weight(1))
    a32 = jacobi_svd(assemble(spec, 32, CTX).m, CTX)[0]
    a64 = jacobi_svd(assemble(spec, 64, CTX).m, CTX)[0]
    assert a32 < a64 <= mp.sqrt(2) + mpf(10) ** -30
    assert a64 > mpf("1.39")


# ---------------------------------------------------------------------------
# approx_numbers


def test_diagonal_numbers_certify_to_tight_radius():
    spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2), constant_weight(1))
    a = approx_numbers(spec, 8, mpf(10) ** -25, CTX)
    assert a.certified and not a.stabilized
    assert a.radius < mpf(10) ** -25
    for n in range(1, 9):
        assert abs(a.value(n) - mpf(2) ** -(n - 1)) <= a.radius + mpf(10) ** -30


def test_identity_symbol_stabilizes_at_one():
    spec = WeightedCompositionSpec(dilation_map(1), constant_weight(1))
    a = approx_numbers(spec, 4, mpf(10) ** -6, CTX)
    assert not a.certified and a.stabilized
    assert not a.certification_failed
    assert all(abs(v - 1) < mpf(10) ** -20 for v in a.values)
    assert a.radius < mpf(10) ** -20


def test_unreachable_target_warns_and_flags():
    spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2), constant_weight(1))
    with pytest.warns(CertificationFailed):
        a = approx_numbers(spec, 4, mpf(10) ** -80, CTX, max_order=32)
    assert a.certification_failed and not a.certified and not a.stabilized
    assert a.n_used == 32
    assert abs(a.value(2) - mpf(1) / 2) < mpf(10) ** -25


def test_approx_numbers_validation():
    spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2), constant_weight(1))
    with pytest.raises(ValueError):
        approx_numbers(spec, 0, mpf(10) ** -6, CTX)
    with pytest.raises(ValueError):
        approx_numbers(spec, 4, mpf(0), CTX)


# ---------------------------------------------------------------------------
# Hilbert-Schmidt dichotomy


def test_hs_sum_matches_beta_closed_form():
    alpha = mpf("0.6")
    phi, w = halfplane_symbol_weight(alpha)
    value, partial = hilbert_schmidt_norm(WeightedCompositionSpec(phi, w), CTX256)
    assert value is not DIVERGENT
    expect = ((4**alpha / mp.pi) * mp.gamma(alpha - mpf(1) / 2)
              * mp.sqrt(mp.pi) / mp.gamma(alpha))
    assert abs(value - expect) < mpf(10) ** -10 * expect
    s32 = mp.fsum(gamma_column_norm_sq(k, alpha) for k in range(32))
    assert abs(partial[0] - s32) < mpf(10) ** -10 * s32
    assert len(partial) == 4


def test_hs_sum_below_cutoff_is_divergent():
    phi, w = halfplane_symbol_weight(mpf("0.4"))
    value, partial = hilbert_schmidt_norm(WeightedCompositionSpec(phi, w), CTX256)
    assert value is DIVERGENT
    # partial sums keep growing by a visible factor
    assert all(b > a * mpf("1.1") for a, b in zip(partial, partial[1:]))


def test_hs_smooth_weight_is_exactly_four():
    phi, w = halfplane_symbol_weight(mpf(1))
    value, _ = hilbert_schmidt_norm(WeightedCompositionSpec(phi, w), CTX256)
    assert abs(value - 4) < mpf(10) ** -40


def test_closed_form_rejects_other_symbols_and_divergence():
    spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2), constant_weight(1))
    with pytest.raises(ValueError):
        closed_form_hs(spec, CTX)
    phi, _ = halfplane_symbol_weight(mpf(1))
    with pytest.raises(NonIntegrableTail):
        closed_form_hs(WeightedCompositionSpec(phi, constant_weight(1)), CTX256)


def test_divergent_is_a_singleton():
    assert Divergent() is DIVERGENT
    assert repr(DIVERGENT) == "Divergent"


# ---------------------------------------------------------------------------
# rate estimates


def test_beta_window_brackets_dilation_ratio():
    spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2), constant_weight(1))
    a = approx_numbers(spec, 36, mpf(10) ** -13, CTX)
    lo, hi = beta_estimate(a)
    assert mpf("0.48") < lo <= hi < mpf("0.52")


def test_beta_window_is_tight_for_flat_sequences():
    spec = WeightedCompositionSpec(dilation_map(1), constant_weight(1))
    a = approx_numbers(spec, 6, mpf(10) ** -6, CTX)
    lo, hi = beta_estimate(a)
    assert abs(lo - 1) < mpf(10) ** -15 and abs(hi - 1) < mpf(10) ** -15


def test_beta_requires_certified_indices():
    a = ApproxNumbers(values=(mpf("0.1"),) * 4, radius=mpf(1), n_used=8,
                      certified=False, stabilized=True)
    with pytest.raises(InsufficientCertification):
        beta_estimate(a)
    with pytest.raises(ValueError):
        beta_estimate(ApproxNumbers(values=(), radius=mpf(0), n_used=8))
