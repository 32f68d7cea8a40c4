"""Strip Hardy spaces: geometry, kernels, norms, and restriction operators."""

import random
import warnings

import pytest
from mpmath import mp, mpf

from hardyapprox.disc_symbols import EvaluationAtSingularity
from hardyapprox.numerics import PrecisionContext, jacobi_svd, segment_quadrature
from hardyapprox.strip import (
    ModularWeightParams,
    OutOfDomain,
    RestrictionSpec,
    StripConfig,
    StripFunction,
    TailTooFat,
    carleson_diameter_box,
    crossing_involution,
    embedding_hankel,
    modular_weight,
    modular_weight_function,
    restriction_hs_norm,
    restriction_matrix,
    riemann_map,
    riemann_map_derivative,
    riemann_map_inverse,
    strip_kernel,
    strip_norm,
    transfer_weight,
)

CTX = PrecisionContext(precision_bits=128)


@pytest.fixture(scope="module")
def sym_cfg():
    with CTX.workprec():
        return StripConfig(mp.pi / 2)


@pytest.fixture(scope="module")
def massive(sym_cfg):
    with CTX.workprec():
        params = ModularWeightParams("massive", 1, 1, -1)
        w = modular_weight_function(params, sym_cfg)
        return (params, w,
                RestrictionSpec(sym_cfg, w, 0),
                RestrictionSpec(sym_cfg, w, mpf(1) / 2))


@pytest.fixture(scope="module")
def unit_weight_half(sym_cfg):
    with CTX.workprec():
        one = StripFunction(lambda z: mpf(1), sym_cfg, "one")
        return RestrictionSpec(sym_cfg, one, mpf(1) / 2)


# ---------------------------------------------------------------------------
# Geometry


def test_riemann_map_anchors_and_roundtrip(sym_cfg):
    with CTX.workprec():
        assert riemann_map(sym_cfg, 0) == 0
        assert abs(riemann_map_derivative(sym_cfg, 0)
                   - 4 * sym_cfg.b / mp.pi) < mpf(10) ** -35
        shifted = StripConfig(mp.pi / 2, shifted=True)
        assert abs(riemann_map(shifted, 0) - mp.mpc(0, mp.pi / 2)) < mpf(10) ** -35
        rng = random.Random(3)
        tol = mpf(10) ** -(CTX.precision_bits // 4)
        for _ in range(100):
            z = mp.mpc(rng.uniform(-0.98, 0.98), rng.uniform(-0.98, 0.98))
            if abs(z) >= 0.99:
                continue
            for cfg in (sym_cfg, shifted):
                back = riemann_map_inverse(cfg, riemann_map(cfg, z))
                assert abs(back - z) < tol


def test_riemann_map_domain_errors(sym_cfg):
    with CTX.workprec():
        with pytest.raises(OutOfDomain):
            riemann_map(sym_cfg, 1)
        with pytest.raises(OutOfDomain):
            riemann_map_derivative(sym_cfg, mp.mpc(0, 1.2))
        with pytest.raises(OutOfDomain):
            riemann_map_inverse(sym_cfg, mp.mpc(0, sym_cfg.b))
        with pytest.raises(OutOfDomain):
            riemann_map_inverse(sym_cfg, mp.mpc(1, 2 * sym_cfg.b))
        with pytest.raises(ValueError, match="b = pi/2"):
            StripConfig(mp.pi / 3, shifted=True)
        with pytest.raises(ValueError, match="positive"):
            StripConfig(-1)


def test_kernel_diagonal_and_geometric_sum(sym_cfg):
    with CTX.workprec():
        b = sym_cfg.b
        assert strip_kernel(sym_cfg, 0, 0) == mp.pi / (4 * b)
        mid = mp.mpc(0, b / 2)
        want = (mp.pi / (4 * b)) / mp.cos(mp.pi / 4)
        assert abs(strip_kernel(sym_cfg, mid, mid) - want) < mpf(10) ** -35
        pts = [mp.mpc("0.3", "0.2"), mp.mpc("-1.1", "0.7"), mp.mpc(2, -1)]
        for zeta in pts:
            u = riemann_map_inverse(sym_cfg, zeta)
            jac = (mp.pi / (4 * b)) / mp.cosh(mp.pi * zeta / (4 * b)) ** 2
            total = abs(jac) / (1 - abs(u) ** 2)
            diag = strip_kernel(sym_cfg, zeta, zeta)
            assert abs(total - diag) < mpf(10) ** -30 * (1 + abs(diag))
        za, zb = pts[0], pts[1]
        assert abs(strip_kernel(sym_cfg, za, zb)
                   - mp.conj(strip_kernel(sym_cfg, zb, za))) < mpf(10) ** -35


def test_kernel_reproduces_point_values():
    # f must extend past the closed strip, so test on b = pi/4 where sech
    # keeps its poles at +-i pi/2 strictly outside
    with CTX.workprec():
        cfg = StripConfig(mp.pi / 4)
        zeta0 = mp.mpc("0.3", "0.2")

        def pairing(y):
            def integrand(t):
                z = mp.mpc(t, y)
                return (1 / mp.cosh(z)) * mp.conj(strip_kernel(cfg, zeta0, z))

            return segment_quadrature(integrand, [-80, 0, 80], CTX).value

        got = (pairing(-cfg.b) + pairing(cfg.b)) / (2 * mp.pi)
        assert abs(got - 1 / mp.cosh(zeta0)) < mpf(10) ** -20


def test_kernel_domain(sym_cfg):
    with CTX.workprec():
        with pytest.raises(OutOfDomain):
            strip_kernel(sym_cfg, mp.mpc(0, 2), 0)


# ---------------------------------------------------------------------------
# Modular weights


def test_modular_weight_values(sym_cfg):
    with CTX.workprec():
        params = ModularWeightParams("massive", 1, 1, -1)
        assert abs(modular_weight(params, 0) - mp.e ** -2) < mpf(10) ** -35
        plus = ModularWeightParams("0+", 0, 1, -1)
        assert abs(modular_weight(plus, -20) - 1) < mpf(10) ** -8
        minus = ModularWeightParams("0-", 0, 1, -1)
        assert abs(modular_weight(minus, 20) - 1) < mpf(10) ** -8
        with pytest.raises(OutOfDomain):
            modular_weight(params, mp.mpc(0, 2))


def test_modular_weight_is_a_contraction(sym_cfg):
    with CTX.workprec():
        kinds = [ModularWeightParams("massive", 2, mpf(1) / 2, -3),
                 ModularWeightParams("0+", 0, 1, -1),
                 ModularWeightParams("0-", 0, 1, -1)]
        slack = mpf(2) ** -100
        for params in kinds:
            for t in range(-10, 11):
                for y in (-mp.pi / 2, mpf(0), mp.pi / 2):
                    assert abs(modular_weight(params, mp.mpc(t, y))) <= 1 + slack


def test_modular_weight_validation(sym_cfg):
    with pytest.raises(ValueError, match="kind"):
        ModularWeightParams("heavy", 1, 1, -1)
    with pytest.raises(ValueError, match="m > 0"):
        ModularWeightParams("massive", 0, 1, -1)
    with pytest.raises(ValueError, match="m = 0"):
        ModularWeightParams("0+", 1, 1, -1)
    with pytest.raises(ValueError, match="x_plus"):
        ModularWeightParams("massive", 1, -1, -1)
    with CTX.workprec():
        with pytest.raises(ValueError, match="pi/2"):
            modular_weight_function(ModularWeightParams("0+", 0, 1, -1),
                                    StripConfig(mp.pi))


# ---------------------------------------------------------------------------
# Norms


def test_strip_norm_matches_disc_route():
    with CTX.workprec():
        cfg = StripConfig(mp.pi / 4)
        f = StripFunction(lambda z: 1 / mp.cosh(z), cfg, "sech")
        hil, ban = strip_norm(f, CTX)

        def disc_side(t):
            z = mp.expjpi(t / mp.pi) * (1 - mpf(2) ** -100)
            tp = riemann_map_derivative(cfg, z)
            return abs(mp.sqrt(tp) * f.eval(riemann_map(cfg, z))) ** 2

        disc = mp.sqrt(segment_quadrature(disc_side, [-mp.pi, 0, mp.pi],
                                          CTX).value / (2 * mp.pi))
        assert abs(hil - disc) < mpf(10) ** -10 * (1 + disc)
        assert ban / mp.sqrt(2 * mp.pi) <= hil <= ban / mp.sqrt(mp.pi)


def test_strip_norm_equivalence_constants():
    with CTX.workprec():
        cfg = StripConfig(mpf(1))
        fns = [lambda z: 1 / mp.cosh(z),
               lambda z: mp.exp(mp.mpc(0, 1) * z) / mp.cosh(z / 2) ** 2,
               lambda z: z / mp.cosh(z) ** 2]
        for k, fe in enumerate(fns):
            hil, ban = strip_norm(StripFunction(fe, cfg, f"f{k}"), CTX)
            assert ban / mp.sqrt(2 * mp.pi) <= hil * (1 + mpf(10) ** -30)
            assert hil <= ban / mp.sqrt(mp.pi) * (1 + mpf(10) ** -30)


def test_strip_norm_zero_function(sym_cfg):
    with CTX.workprec():
        hil, ban = strip_norm(StripFunction(lambda z: mpf(0), sym_cfg), CTX)
        assert hil == 0 and ban == 0


def test_strip_norm_rejects_bad_traces(sym_cfg):
    with CTX.workprec():
        with pytest.raises(TailTooFat):
            strip_norm(StripFunction(lambda z: mpf(1), sym_cfg, "one"), CTX)
        cfg = StripConfig(mp.pi / 4)

        def bumped(z):
            # inflates the central line only; no holomorphic function can
            # beat the log-convex interpolation of its boundary masses
            z = mp.mpmathify(z)
            return (1 + 10 * mp.exp(-25 * z.imag ** 2)) / mp.cosh(z)

        with pytest.raises(ValueError, match="log-convex"):
            strip_norm(StripFunction(bumped, cfg, "bump"), CTX)


# ---------------------------------------------------------------------------
# Transfer


def test_restriction_spec_validation(sym_cfg, massive):
    _, w, _, _ = massive
    with CTX.workprec():
        with pytest.raises(ValueError, match="lambda"):
            RestrictionSpec(sym_cfg, w, 1)
        with pytest.raises(ValueError, match="lambda"):
            RestrictionSpec(sym_cfg, w, mpf(-1) / 10)
        shifted = StripConfig(mp.pi / 2, shifted=True)
        wsh = StripFunction(w.eval, shifted)
        with pytest.raises(ValueError, match="symmetric"):
            RestrictionSpec(shifted, wsh, mpf(1) / 2)
        other = StripConfig(mp.pi / 4)
        with pytest.raises(ValueError, match="different strips"):
            RestrictionSpec(sym_cfg, StripFunction(w.eval, other), mpf(1) / 2)
        blowup = StripFunction(lambda z: mp.exp(mp.exp(z)), sym_cfg, "big")
        with pytest.raises(ValueError, match="bounded"):
            RestrictionSpec(sym_cfg, blowup, mpf(1) / 2)


def test_transfer_weight_anchor_and_jacobian_bound(massive):
    params, w, _, spec = massive
    with CTX.workprec():
        lam = spec.lam
        assert abs(transfer_weight(spec, 0)
                   - mp.sqrt(lam) * w.eval(0)) < mpf(10) ** -35
        rng = random.Random(11)
        for _ in range(200):
            z = mp.mpc(rng.uniform(-0.97, 0.97), rng.uniform(-0.97, 0.97))
            if abs(z) >= 0.98:
                continue
            hat = transfer_weight(spec, z)
            wval = w.eval(lam * riemann_map(spec.config, z))
            m_factor = hat / (mp.sqrt(lam) * wval)
            bound = 2 * abs(1 - z * z) ** ((lam - 1) / 2)
            assert abs(m_factor) <= bound * (1 + mpf(10) ** -30)


def test_massive_transfer_modulus_identity(massive):
    # |w(lam tau(z))| equals exp(-m(x+ Re g^lam + |x-| Re g(-z)^lam)) with
    # g = (1+z)/(1-z); the exponent is exact, not just an envelope
    params, w, _, spec = massive
    with CTX.workprec():
        lam = spec.lam
        rng = random.Random(5)
        for _ in range(50):
            z = mp.mpc(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))
            if abs(z) >= 0.95:
                continue
            lhs = abs(w.eval(lam * riemann_map(spec.config, z)))
            g = (1 + z) / (1 - z)
            expo = (params.x_plus * (g ** lam).real
                    + abs(params.x_minus) * ((1 / g) ** lam).real)
            rhs = mp.exp(-params.m * expo)
            assert abs(lhs - rhs) < mpf(10) ** -28 * rhs


def test_transfer_weight_domain(massive):
    _, _, spec0, spec = massive
    with CTX.workprec():
        with pytest.raises(ValueError, match="0 < lambda"):
            transfer_weight(spec0, 0)
        with pytest.raises(OutOfDomain):
            transfer_weight(spec, mp.mpc(1.5, 0))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            with pytest.raises(EvaluationAtSingularity):
                transfer_weight(spec, 1)


# ---------------------------------------------------------------------------
# Matrices


def test_restriction_routes_agree(massive):
    _, _, _, spec = massive
    with CTX.workprec():
        op = restriction_matrix(spec, 5, route="both", ctx=CTX)
        assert op.n == 5
        assert not op.crude_tail and mp.isfinite(op.op_tail)
        assert abs(op.m.entries[0][0]
                   - transfer_weight(spec, 0)) < mpf(10) ** -25
        strip_op = restriction_matrix(spec, 5, route="strip", ctx=CTX)
        assert strip_op.op_tail == mp.inf and strip_op.crude_tail
        for k in range(5):
            partial = mp.fsum(abs(strip_op.m.entries[j][k]) ** 2
                              for j in range(5))
            assert partial <= strip_op.col_norms[k] * (1 + mpf(10) ** -20)


def test_restriction_matrix_validation(massive, unit_weight_half):
    _, _, spec0, spec = massive
    with CTX.workprec():
        with pytest.raises(ValueError, match="route"):
            restriction_matrix(spec, 4, route="fast", ctx=CTX)
        with pytest.raises(ValueError, match="positive"):
            restriction_matrix(spec, 0, ctx=CTX)
        with pytest.raises(ValueError, match="embedding_hankel"):
            restriction_matrix(spec0, 4, ctx=CTX)


def test_unit_weight_matrix_structure(unit_weight_half):
    with CTX.workprec():
        op = restriction_matrix(unit_weight_half, 8, route="disc", ctx=CTX)
        assert op.crude_tail and op.op_tail == mp.inf
        assert abs(op.m.entries[0][0]
                   - mp.sqrt(unit_weight_half.lam)) < mpf(10) ** -30
        for j in range(8):
            for k in range(8):
                if (j + k) % 2 == 1:
                    assert abs(op.m.entries[j][k]) < mpf(10) ** -30


def test_unit_weight_spectrum_has_a_floor(unit_weight_half):
    # the unweighted restriction is bounded but not compact: section
    # singular values only grow with the order and the top stays near its
    # operator norm
    with CTX.workprec():
        sv8 = jacobi_svd(restriction_matrix(unit_weight_half, 8,
                                            ctx=CTX).m, CTX)
        sv16 = jacobi_svd(restriction_matrix(unit_weight_half, 16,
                                             ctx=CTX).m, CTX)
        for k in range(8):
            assert sv16[k] >= sv8[k] * (1 - mpf(10) ** -25)
        assert sv16[0] > mpf("0.8")


# ---------------------------------------------------------------------------
# Hilbert-Schmidt norms


def test_hs_identity_massive(massive):
    _, _, spec0, spec = massive
    with CTX.workprec():
        direct, formula = restriction_hs_norm(spec, CTX)
        assert abs(direct - formula) < mpf(10) ** -10 * formula
        d0, f0 = restriction_hs_norm(spec0, CTX)
        assert abs(d0 - f0) < mpf(10) ** -10 * f0


def test_hs_norm_dilation_invariance(massive):
    # rescaling the strip and the weight together is unitary, so both
    # computed values must be left alone
    _, w, _, spec = massive
    with CTX.workprec():
        wide = StripConfig(mp.pi)
        w2 = StripFunction(lambda z: w.eval(mp.mpmathify(z) / 2), wide)
        spec2 = RestrictionSpec(wide, w2, spec.lam)
        d1, f1 = restriction_hs_norm(spec, CTX)
        d2, f2 = restriction_hs_norm(spec2, CTX)
        assert abs(f1 - f2) < mpf(10) ** -12 * f1
        assert abs(d1 - d2) < mpf(10) ** -10 * d1


def test_hs_norm_rejects_non_hs_weight(unit_weight_half, sym_cfg):
    with CTX.workprec():
        with pytest.raises(TailTooFat):
            restriction_hs_norm(unit_weight_half, CTX)
        one0 = RestrictionSpec(sym_cfg,
                               StripFunction(lambda z: mpf(1), sym_cfg), 0)
        with pytest.raises(TailTooFat):
            restriction_hs_norm(one0, CTX)


# ---------------------------------------------------------------------------
# The diameter case


def test_embedding_hankel_certificate_tracks_trace(massive):
    # trace identity: HS^2 - sum of section eigenvalues is exactly the
    # lost-mass integral whose sqrt is the reported radius
    _, _, spec0, _ = massive
    with CTX.workprec():
        an = embedding_hankel(spec0, 10, CTX)
        assert an.certified and mp.isfinite(an.radius)
        assert all(an.values[i] >= an.values[i + 1] for i in range(9))
        direct, _ = restriction_hs_norm(spec0, CTX)
        gap = direct ** 2 - mp.fsum(v ** 2 for v in an.values)
        assert abs(gap - an.radius ** 2) < mpf(10) ** -25 * (1 + direct ** 2)
        wider = embedding_hankel(spec0, 16, CTX)
        assert wider.radius < an.radius


def test_embedding_hankel_unit_weight_total_mass(sym_cfg):
    with CTX.workprec():
        one0 = RestrictionSpec(sym_cfg,
                               StripFunction(lambda z: mpf(1), sym_cfg), 0)
        total = carleson_diameter_box(one0, 1, 2, CTX)
        assert abs(total - 1 / mp.pi) < mpf(10) ** -30
        an = embedding_hankel(one0, 6, CTX)
        assert not an.certified and an.radius == mp.inf


def test_embedding_hankel_validation(massive):
    _, _, spec0, spec = massive
    with CTX.workprec():
        with pytest.raises(ValueError, match="lambda = 0"):
            embedding_hankel(spec, 4, CTX)
        with pytest.raises(ValueError, match="positive"):
            embedding_hankel(spec0, 0, CTX)


def test_scale_monotonicity_against_dilated_restriction(massive):
    # restriction to the central line factors through every dilated strip,
    # with the unweighted line-trace norm 1/sqrt(2) as the single constant
    _, _, spec0, spec = massive
    with CTX.workprec():
        a0 = embedding_hankel(spec0, 10, CTX)
        op = restriction_matrix(spec, 20, route="disc", ctx=CTX)
        sv = jacobi_svd(op.m, CTX)
        c = 1 / mp.sqrt(2)
        for k in range(8):
            upper = c * (sv[k] + op.op_tail)
            assert a0.values[k] <= upper


def test_massless_embedding_floor(sym_cfg):
    with CTX.workprec():
        params = ModularWeightParams("0+", 0, 1, -1)
        spec = RestrictionSpec(sym_cfg,
                               modular_weight_function(params, sym_cfg), 0)
        seq = {n: embedding_hankel(spec, n, CTX) for n in (8, 16, 32)}
        for an in seq.values():
            assert not an.certified
        for k in (0, 3, 7):
            vals = [seq[n].values[k] for n in (8, 16, 32)]
            assert vals[0] <= vals[1] <= vals[2]
            assert vals[0] > 0
        assert seq[32].values[0] > mpf("0.5")


def test_carleson_diameter_box_geometry(massive):
    _, _, spec0, _ = massive
    with CTX.workprec():
        assert carleson_diameter_box(spec0, mp.mpc(0, 1), mpf(9) / 10, CTX) == 0
        total = carleson_diameter_box(spec0, 1, 2, CTX)
        assert abs(carleson_diameter_box(spec0, mp.mpc(0, 1), 2, CTX)
                   - total) < mpf(10) ** -30 * total
        masses = [carleson_diameter_box(spec0, 1, h, CTX)
                  for h in (mpf(1) / 5, mpf(1) / 2, mpf(1))]
        assert masses[0] <= masses[1] <= masses[2]
        sup2 = max(abs(spec0.w.eval(riemann_map(spec0.config,
                                                mpf(j) / 64))) ** 2
                   for j in range(-63, 64))
        for h, mass in zip((mpf(1) / 5, mpf(1) / 2, mpf(1)), masses):
            assert mass <= sup2 * h


def test_carleson_diameter_box_validation(massive):
    _, _, spec0, spec = massive
    with CTX.workprec():
        with pytest.raises(ValueError, match="lambda = 0"):
            carleson_diameter_box(spec, 1, 1, CTX)
        with pytest.raises(ValueError, match="box size"):
            carleson_diameter_box(spec0, 1, 0, CTX)
        with pytest.raises(ValueError, match="box size"):
            carleson_diameter_box(spec0, 1, 3, CTX)
        with pytest.raises(ValueError, match="unit circle"):
            carleson_diameter_box(spec0, mpf(1) / 2, 1, CTX)


# ---------------------------------------------------------------------------
# Crossing symmetry


def test_crossing_involution_squares_to_identity():
    with CTX.workprec():
        cfg = StripConfig(mp.pi / 2, shifted=True)
        psi = StripFunction(
            lambda z: mp.exp(mp.mpc(0, 1) * z / 2)
            / mp.cosh((z - mp.mpc(0, mp.pi / 2)) / 2), cfg, "tilted")
        twice = crossing_involution(crossing_involution(psi))
        rng = random.Random(17)
        for _ in range(100):
            z = mp.mpc(rng.uniform(-3, 3), rng.uniform(0.05, 3.09))
            assert abs(twice.eval(z) - psi.eval(z)) < mpf(10) ** -30


def test_crossing_involution_fixed_point_and_isometry():
    with CTX.workprec():
        cfg = StripConfig(mp.pi / 2, shifted=True)
        centered = StripFunction(
            lambda z: 1 / mp.cosh((z - mp.mpc(0, mp.pi / 2)) / 2),
            cfg, "centered")
        fixed = crossing_involution(centered)
        for t in range(-5, 6):
            z = mp.mpc(t, mp.pi / 3)
            assert abs(fixed.eval(z) - centered.eval(z)) < mpf(10) ** -30
        tilted = StripFunction(
            lambda z: mp.exp(mp.mpc(0, 1) * z / 2)
            / mp.cosh((z - mp.mpc(0, mp.pi / 2)) / 2), cfg, "tilted")
        image = crossing_involution(tilted)
        z0 = mp.mpc("0.4", "1.0")
        assert abs(image.eval(z0) - tilted.eval(z0)) > mpf(10) ** -3
        h1, b1 = strip_norm(tilted, CTX)
        h2, b2 = strip_norm(image, CTX)
        assert abs(h1 - h2) < mpf(10) ** -10 * h1
        assert abs(b1 - b2) < mpf(10) ** -10 * b1


def test_crossing_involution_needs_shifted_strip(sym_cfg):
    with CTX.workprec():
        psi = StripFunction(lambda z: 1 / mp.cosh(z), sym_cfg)
        with pytest.raises(ValueError, match="shifted"):
            crossing_involution(psi)
