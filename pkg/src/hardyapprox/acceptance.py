"""Acceptance checks behind the ``verify`` subcommand.

Each suite packages one end-to-end claim about the library (certified
oracle agreement, decay-law selection, two-route identities, scale
comparisons) as a list of named pass/fail results.  The test suite runs
the same functions, so ``hardyapprox verify`` and ``pytest`` cannot
drift apart.

Suites pin their own working precision; the quoted tolerances assume it.
The ``seed`` argument only affects checks that sample random points.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

from mpmath import mp, mpf

from .bounds import (BernsteinConfig, bernstein_lower, fit_decay,
                     gelfand_upper_blaschke, tradeoff_upper)
from .disc_symbols import (LensParams, blaschke_spec, constant_weight,
                           dilation_map, halfplane_base_weight,
                           halfplane_symbol_weight, lens_map, lens_minorant,
                           lens_weight, power_minorant)
from .numerics import DenseMatrix, PrecisionContext, jacobi_svd, segment_quadrature
from .operator_core import (DIVERGENT, ApproxNumbers, EvaluationAtSingularity,
                            WeightedCompositionSpec, approx_numbers, assemble,
                            closed_form_hs, hilbert_schmidt_norm,
                            _series_columns)
from .strip import (ModularWeightParams, RestrictionSpec, StripConfig,
                    StripFunction, TailTooFat, embedding_hankel,
                    modular_weight_function, restriction_hs_norm,
                    restriction_matrix, riemann_map_inverse,
                    riemann_map_derivative, strip_kernel, strip_norm,
                    _disc_pair, _strip_route)
from .operator_core import _quadrature_columns


class UnknownSuite(Exception):
    """Requested suite name has no registered checks."""


@dataclass(frozen=True)
class CheckResult:
    """One pass/fail line of an acceptance suite."""

    criterion: str
    name: str
    passed: bool
    detail: str = ""


def _entry_matrix(cols, n: int) -> DenseMatrix:
    return DenseMatrix([[cols[k][j] for k in range(n)] for j in range(n)])


def _window_ratio(values):
    lo, hi = min(values), max(values)
    return lo, hi, hi / lo


# ---------------------------------------------------------------------------
# diagonal oracle


def suite_diagonal(seed: int = 0) -> list:
    """Geometric diagonal operator against its exact singular values."""
    out = []
    ctx = PrecisionContext(512)
    with ctx.workprec():
        spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2),
                                       constant_weight(1))
        res = approx_numbers(spec, 60, mpf(10) ** -40, ctx)
        out.append(CheckResult(
            "diagonal", "ladder certifies 60 indices below 1e-25",
            res.certified and res.radius < mpf(10) ** -25,
            f"radius {mp.nstr(res.radius, 4)} at order {res.n_used}"))
        worst = max(abs(res.values[n - 1] - mpf(2) ** (1 - n))
                    for n in range(1, 61))
        out.append(CheckResult(
            "diagonal", "values match 2^(1-n) within 1e-25",
            worst < mpf(10) ** -25, f"worst gap {mp.nstr(worst, 4)}"))
        fits, best = fit_decay(res, (10, 60))
        beta = best.params[0]
        out.append(CheckResult(
            "diagonal", "fit selects exponential with ratio near 1/2",
            best.model == "exponential"
            and mpf("0.48") <= beta <= mpf("0.52"),
            f"model {best.model}, ratio {mp.nstr(beta, 6)}"))
    return out


# ---------------------------------------------------------------------------
# halfplane power law


def suite_halfplane_ratio(seed: int = 0) -> list:
    """Square-root decay of the half-plane pair at alpha = 1."""
    out = []
    ctx = PrecisionContext(53)
    with ctx.workprec():
        phi, w = halfplane_symbol_weight(1)
        spec = WeightedCompositionSpec(phi, w)
        sections = {}
        for order in (512, 1024):
            cols = _series_columns(spec, order)
            sections[order] = jacobi_svd(_entry_matrix(cols, order), ctx)
        gap = max(abs(sections[1024][i] - sections[512][i])
                  / sections[1024][i] for i in range(256))
        out.append(CheckResult(
            "halfplane-ratio", "sections at order 512 and 1024 agree to 2%",
            gap < mpf("0.02"), f"max relative movement {mp.nstr(gap, 4)}"))
        vals = sections[1024]
        scaled = [vals[n - 1] * mp.sqrt(n) for n in range(16, 257)]
        lo, hi, ratio = _window_ratio(scaled)
        out.append(CheckResult(
            "halfplane-ratio", "a_n sqrt(n) stays in a band of ratio <= 10",
            ratio <= 10,
            f"band [{mp.nstr(lo, 5)}, {mp.nstr(hi, 5)}], ratio "
            f"{mp.nstr(ratio, 4)}"))
    ctx128 = PrecisionContext(128)
    with ctx128.workprec():
        w0 = halfplane_base_weight(1)
        omega = power_minorant(phi, 2)
        shape = []
        for n in (16, 32, 64, 128, 256):
            upper = tradeoff_upper(spec, w0, omega, n, ctx128)
            shape.append(upper / mp.sqrt(mp.log(n) / n))
        lo, hi, ratio = _window_ratio(shape)
        out.append(CheckResult(
            "halfplane-ratio",
            "tradeoff upper tracks sqrt(log n / n) within a factor 10",
            ratio <= 10,
            f"shape band [{mp.nstr(lo, 5)}, {mp.nstr(hi, 5)}]"))
    return out


# ---------------------------------------------------------------------------
# Hilbert-Schmidt dichotomy


def _column_norm(spec, k, ctx):
    def integrand(t):
        u = mp.expjpi(t / mp.pi)
        return abs(spec.w.eval(u)) ** 2 * abs(spec.phi.eval(u)) ** (2 * k)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EvaluationAtSingularity)
        q = segment_quadrature(integrand, [-mp.pi, 0, mp.pi], ctx)
    return mp.sqrt(q.value / (2 * mp.pi))


def suite_hs_dichotomy(seed: int = 0) -> list:
    """Summability threshold of the half-plane pair at alpha = 1/2."""
    out = []
    ctx = PrecisionContext(128)
    with ctx.workprec():
        phi, w6 = halfplane_symbol_weight(mpf(3) / 5)
        spec6 = WeightedCompositionSpec(phi, w6)
        value, partials = hilbert_schmidt_norm(spec6, ctx)
        other = closed_form_hs(spec6, ctx)
        gap = abs(value - other)
        out.append(CheckResult(
            "hs-dichotomy", "alpha 0.6: two summation routes agree to 1e-10",
            value is not DIVERGENT and gap < mpf(10) ** -10,
            f"column route {mp.nstr(value, 12)}, closed form "
            f"{mp.nstr(other, 12)}"))
        _, w4 = halfplane_symbol_weight(mpf(2) / 5)
        spec4 = WeightedCompositionSpec(phi, w4)
        verdict, partials4 = hilbert_schmidt_norm(spec4, ctx)
        out.append(CheckResult(
            "hs-dichotomy", "alpha 0.4: sum declared divergent",
            verdict is DIVERGENT,
            f"partial sums {', '.join(mp.nstr(p, 5) for p in partials4)}"))
        for alpha, spec in ((mpf(3) / 5, spec6), (mpf(2) / 5, spec4)):
            scaled = []
            for n in (16, 32, 64, 128, 256, 512):
                scaled.append(_column_norm(spec, n, ctx)
                              * mpf(n) ** (alpha / 2 + mpf(1) / 4))
            lo, hi, ratio = _window_ratio(scaled)
            out.append(CheckResult(
                "hs-dichotomy",
                f"alpha {mp.nstr(alpha, 2)}: column norms follow "
                "n^-(alpha/2+1/4) within factor 4",
                ratio <= 4,
                f"band [{mp.nstr(lo, 5)}, {mp.nstr(hi, 5)}]"))
    return out


# ---------------------------------------------------------------------------
# plain lens: stretched-exponential law


def suite_lens_plain(seed: int = 0) -> list:
    """Unweighted lens map decay law on indices 20..120."""
    out = []
    ctx = PrecisionContext(53)
    with ctx.workprec():
        spec = WeightedCompositionSpec(lens_map(LensParams(mpf(1) / 2)),
                                       constant_weight(1))
        secs = {}
        for order in (240, 480):
            cols = _series_columns(spec, order)
            secs[order] = jacobi_svd(_entry_matrix(cols, order), ctx)
        gap = max(abs(secs[480][i] - secs[240][i]) for i in range(120))
        res = ApproxNumbers(tuple(secs[480][:120]), gap, 480,
                            certified=False, stabilized=True)
        floor = min(res.values[19:120])
        out.append(CheckResult(
            "lens-plain", "sections at order 240 and 480 pin the window",
            gap < floor / 10,
            f"movement {mp.nstr(gap, 4)} vs smallest value "
            f"{mp.nstr(floor, 4)}"))
        fits, best = fit_decay(res, (20, 120))
        res_by_model = {f.model: f.residual for f in fits}
        stretched = res_by_model.get("stretched")
        margin_ok = (
            stretched is not None
            and "nlog" in res_by_model and "exponential" in res_by_model
            and stretched <= mpf("0.75") * res_by_model["nlog"]
            and stretched <= mpf("0.75") * res_by_model["exponential"])
        out.append(CheckResult(
            "lens-plain",
            "stretched model wins by 25% over nlog and exponential",
            best.model == "stretched" and margin_ok,
            "residuals " + ", ".join(
                f"{m} {mp.nstr(r, 4)}" for m, r in sorted(res_by_model.items()))))
        out.append(CheckResult(
            "lens-plain", "fitted exp(-c sqrt(n)) constant is positive",
            best.model == "stretched" and best.params[0] > 0,
            f"c = {mp.nstr(best.params[0], 6)}"))
    return out


# ---------------------------------------------------------------------------
# weighted lens battery


def suite_lens_weighted(seed: int = 0) -> list:
    """Weighted lens decay battery: fit, pencil lower bounds, Blaschke."""
    out = []
    ctx = PrecisionContext(128)
    with ctx.workprec():
        params = LensParams(mpf(1) / 2)
        _, w = lens_weight(params)
        spec = WeightedCompositionSpec(lens_map(params), w)
        res = approx_numbers(spec, 150, mpf(10) ** -8, ctx)
        # the weight's essential boundary singularity keeps the truncation
        # bound near 1e-3 at any feasible order, so the ladder settles via
        # the monotone squeeze; its radius is the inter-rung movement
        out.append(CheckResult(
            "lens-weighted", "ladder pins 150 indices to radius below 1e-8",
            (res.certified or res.stabilized) and res.radius <= mpf(10) ** -8,
            f"{'certified' if res.certified else 'stabilized'}, radius "
            f"{mp.nstr(res.radius, 4)} at order {res.n_used}"))

        fits, best = fit_decay(res, (20, 150))
        res_by_model = {f.model: f.residual for f in fits}
        nlog_res = res_by_model.get("nlog", mp.inf)
        tie = best.residual >= mpf("0.95") * nlog_res
        out.append(CheckResult(
            "lens-weighted", "fit selects n/log n (ties resolved by bounds)",
            best.model == "nlog" or tie,
            "residuals " + ", ".join(
                f"{m} {mp.nstr(r, 4)}" for m, r in sorted(res_by_model.items()))))

        ns = list(range(20, 151))
        lowers = []
        ok_lower = True
        for n in ns:
            lower = bernstein_lower(spec, BernsteinConfig.ladder(n))
            lowers.append(lower)
            if not lower <= res.values[n - 1] + res.radius:
                ok_lower = False
        out.append(CheckResult(
            "lens-weighted", "pencil lower bound sits below certified a_n",
            ok_lower,
            f"checked n = {ns[0]}..{ns[-1]}"))

        rates_lower = [-mp.log(v) * mp.log(n) / n for n, v in zip(ns, lowers)]
        rates_upper = [-mp.log(res.values[n - 1]) * mp.log(n) / n for n in ns]
        l1, h1, r1 = _window_ratio(rates_lower)
        l2, h2, r2 = _window_ratio(rates_upper)
        out.append(CheckResult(
            "lens-weighted",
            "both log-sequences squeeze between c n/log n and C n/log n",
            min(l1, l2) > 0 and r1 <= 4 and r2 <= 4,
            f"lower-rate band [{mp.nstr(l1, 4)}, {mp.nstr(h1, 4)}], "
            f"value-rate band [{mp.nstr(l2, 4)}, {mp.nstr(h2, 4)}]"))

        prev = None
        geo_ok = True
        bound_ok = True
        details = []
        for n_rep in (4, 8, 16):
            m_idx, val = gelfand_upper_blaschke(
                spec, blaschke_spec(params, n_rep), ctx)
            if m_idx <= 150 and not res.values[m_idx - 1] - res.radius <= val:
                bound_ok = False
            if prev is not None and not val <= prev / 2:
                geo_ok = False
            details.append(f"N={n_rep}: a_{m_idx} <= {mp.nstr(val, 5)}")
            prev = val
        out.append(CheckResult(
            "lens-weighted", "Blaschke bound dominates a_m at matching index",
            bound_ok, "; ".join(details)))
        out.append(CheckResult(
            "lens-weighted", "Blaschke bound halves at each doubling of N",
            geo_ok, "; ".join(details)))
    return out


# ---------------------------------------------------------------------------
# strip transfer


def suite_strip_transfer(seed: int = 0) -> list:
    """Massive strip restriction: route agreement and HS identities."""
    out = []
    ctx = PrecisionContext(128)
    with ctx.workprec():
        cfg = StripConfig(mp.pi / 2)
        params = ModularWeightParams("massive", 1, 1, -1)
        w = modular_weight_function(params, cfg)
        spec = RestrictionSpec(cfg, w, mpf(1) / 2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            op = restriction_matrix(spec, 16, ctx=ctx)
            entries, _ = _strip_route(spec, 16, ctx)
            diff = max(abs(op.m.entries[j][k] - entries[j][k])
                       for j in range(16) for k in range(16))
        out.append(CheckResult(
            "strip-transfer", "disc and strip routes agree to 1e-12 at n=16",
            diff < mpf(10) ** -12, f"max entry gap {mp.nstr(diff, 4)}"))
        direct, formula = restriction_hs_norm(spec, ctx)
        out.append(CheckResult(
            "strip-transfer", "HS norm: direct sum matches secant formula",
            abs(direct - formula) < mpf(10) ** -10,
            f"direct {mp.nstr(direct, 12)}, formula {mp.nstr(formula, 12)}"))
        spec0 = RestrictionSpec(cfg, w, 0)
        direct0, formula0 = restriction_hs_norm(spec0, ctx)
        out.append(CheckResult(
            "strip-transfer", "boundary case: line formula matches at lambda 0",
            abs(direct0 - formula0) < mpf(10) ** -10,
            f"direct {mp.nstr(direct0, 12)}, formula {mp.nstr(formula0, 12)}"))
    return out


# ---------------------------------------------------------------------------
# strip norms and kernels


def _test_functions():
    """20 Hardy-class strip functions across two widths."""
    fns = []
    for j in range(20):
        b = mpf(1) if j < 10 else mp.pi / 2
        s = (mpf(1) / 2, mpf(1), mpf(5) / 4)[j % 3] if j < 10 \
            else (mpf(1) / 2, mpf(2) / 5, mpf(3) / 5)[j % 3]
        p = j % 3
        t = (mpf(0), mpf(1) / 2, mpf(-1), mpf(1))[j % 4]
        shift = (mpf(0), mpf(1), mpf(-1))[j % 3]
        k = 1 + (j % 2)

        def fe(z, s=s, p=p, t=t, shift=shift, k=k):
            z = mp.mpmathify(z)
            return (z ** p * mp.exp(mp.mpc(0, 1) * t * z)
                    / mp.cosh(s * (z - shift)) ** k)

        fns.append((StripConfig(b), fe))
    return fns


def suite_strip_norms(seed: int = 0) -> list:
    """Norm comparisons and kernel identities on symmetric strips."""
    out = []
    ctx = PrecisionContext(128)
    rng = random.Random(seed)
    with ctx.workprec():
        slack = 1 + mpf(10) ** -8
        worst_repro = mpf(0)
        worst_interp = mpf(-mp.inf)
        all_ok = True
        for cfg, fe in _test_functions():
            hil, ban = strip_norm(StripFunction(fe, cfg), ctx)
            for _ in range(3):
                x = mpf(rng.uniform(-2, 2))
                y = mpf(rng.uniform(-0.6, 0.6)) * cfg.b
                zeta = mp.mpc(x, y)
                point = abs(fe(zeta))
                cap = mp.sqrt(strip_kernel(cfg, zeta, zeta).real) * hil
                if not point <= cap * slack:
                    all_ok = False
                worst_repro = max(worst_repro,
                                  point / cap if cap > 0 else mpf(0))
                if not point <= ban * slack:
                    all_ok = False

            def line_mass(y):
                return mp.quad(lambda x: abs(fe(mp.mpc(x, y))) ** 2,
                               [-60, 0, 60])

            top, bottom = line_mass(cfg.b), line_mass(-cfg.b)
            outer = max(top, bottom)
            for frac in (mpf(-1) / 2, mpf(0), mpf(1) / 2):
                inner = line_mass(frac * cfg.b)
                if not inner <= outer * slack:
                    all_ok = False
                worst_interp = max(worst_interp, inner / outer)
        out.append(CheckResult(
            "strip-norms",
            "20 functions: point bounds and interior-line domination hold",
            all_ok,
            f"sharpest kernel bound ratio {mp.nstr(worst_repro, 4)}, "
            f"sharpest line ratio {mp.nstr(worst_interp, 4)}"))

        cfg = StripConfig(mp.pi / 2)
        pts = [mp.mpc(mpf(rng.uniform(-2, 2)), mpf(rng.uniform(-0.7, 0.7)))
               for _ in range(5)]
        diag_ok = True
        worst = mpf(0)
        for zeta in pts:
            q = abs(riemann_map_inverse(cfg, zeta)) ** 2
            dv = abs(riemann_map_derivative(cfg, riemann_map_inverse(cfg, zeta)))
            target = strip_kernel(cfg, zeta, zeta).real
            n_terms = 1
            partial = None
            while n_terms <= 1 << 20:
                partial = (1 - q ** n_terms) / ((1 - q) * dv)
                if abs(partial - target) < mpf(10) ** -8:
                    break
                n_terms *= 2
            worst = max(worst, abs(partial - target))
            if not abs(partial - target) < mpf(10) ** -8:
                diag_ok = False
        out.append(CheckResult(
            "strip-norms",
            "kernel partial sums reach the closed form at 5 points",
            diag_ok, f"worst residual {mp.nstr(worst, 4)}"))
    return out


# ---------------------------------------------------------------------------
# scale monotonicity


def suite_scale_mono(seed: int = 0) -> list:
    """Line restriction numbers sit below the dilated-strip ones."""
    out = []
    ctx = PrecisionContext(128)
    with ctx.workprec():
        cfg = StripConfig(mp.pi / 2)
        params = ModularWeightParams("massive", 1, 1, -1)
        w = modular_weight_function(params, cfg)
        line = embedding_hankel(RestrictionSpec(cfg, w, 0), 40, ctx)
        out.append(CheckResult(
            "scale-mono", "line restriction certified at 40 indices",
            line.certified and mp.isfinite(line.radius),
            f"radius {mp.nstr(line.radius, 4)}"))
        spec_half = RestrictionSpec(cfg, w, mpf(1) / 2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            op = restriction_matrix(spec_half, 80, ctx=ctx)
        vals = jacobi_svd(op.m, ctx)
        c = 1 / mp.sqrt(2)
        ok = True
        worst = mpf(0)
        for n in range(1, 41):
            lhs = line.values[n - 1] + line.radius
            rhs = c * vals[n - 1]
            worst = max(worst, lhs / rhs)
            if not lhs <= rhs:
                ok = False
        out.append(CheckResult(
            "scale-mono",
            "a_n at lambda 0 <= a_n at lambda 1/2 / sqrt(2) for n <= 40",
            ok, f"largest ratio against the bound {mp.nstr(worst, 5)}"))
    return out


# ---------------------------------------------------------------------------
# massless floor


def suite_massless_floor(seed: int = 0) -> list:
    """Massless weights leave the restriction non-compact."""
    out = []
    ctx = PrecisionContext(128)
    with ctx.workprec():
        cfg = StripConfig(mp.pi / 2)
        wless = modular_weight_function(
            ModularWeightParams("0+", 0, 1, -1), cfg)
        spec = RestrictionSpec(cfg, wless, mpf(1) / 2)
        pair = _disc_pair(spec)
        sections = {}
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            for order in (16, 32, 64, 128):
                cols = _quadrature_columns(pair, order, ctx)
                sections[order] = jacobi_svd(_entry_matrix(cols, order), ctx)
        smallest = {n: v[-1] for n, v in sections.items()}
        floor = min(smallest.values())
        # the stated surrogate: full order-n sections stay uniformly
        # invertible; finite monomial sections cannot actually do that
        out.append(CheckResult(
            "massless-floor",
            "order-n sections keep their smallest value above 0.1",
            floor > mpf("0.1") and smallest[128] > smallest[16] / 2,
            ", ".join(f"n={n}: {mp.nstr(v, 4)}"
                      for n, v in smallest.items())))
        fixed_ok = sections[128][0] > mpf("0.5")
        for k in range(16):
            seq = [sections[n][k] for n in (16, 32, 64, 128)]
            if any(b < a * (1 - mpf(10) ** -20)
                   for a, b in zip(seq, seq[1:])):
                fixed_ok = False
        out.append(CheckResult(
            "massless-floor",
            "fixed indices never decay with the order; a_1 settles above 0.5",
            fixed_ok,
            "a_1 " + " -> ".join(mp.nstr(sections[n][0], 5)
                                 for n in (16, 32, 64, 128))))

        wmass = modular_weight_function(
            ModularWeightParams("massive", 1, 1, -1), cfg)
        mspec = RestrictionSpec(cfg, wmass, mpf(1) / 2)
        mpair = _disc_pair(mspec)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            mcols = _quadrature_columns(mpair, 128, ctx)
        mvals = jacobi_svd(_entry_matrix(mcols, 128), ctx)
        ratio = mvals[127] / mvals[0]
        out.append(CheckResult(
            "massless-floor", "massive contrast: a_128 / a_1 below 1e-10",
            ratio < mpf(10) ** -10, f"ratio {mp.nstr(ratio, 4)}"))
    return out


# ---------------------------------------------------------------------------
# numerics oracles


def suite_numerics(seed: int = 0) -> list:
    """Exact small cases and independently derived oracles."""
    out = []
    ctx = PrecisionContext(128)
    with ctx.workprec():
        spec = WeightedCompositionSpec(dilation_map(mpf(1) / 2),
                                       constant_weight(1))
        tr = assemble(spec, 8, ctx)
        vals = jacobi_svd(tr.m, ctx)
        worst = max(abs(vals[n - 1] - mpf(2) ** (1 - n))
                    for n in range(1, 9))
        out.append(CheckResult(
            "numerics", "dilation section is exactly geometric",
            worst < mpf(10) ** -30, f"worst gap {mp.nstr(worst, 4)}"))

        hs, _ = hilbert_schmidt_norm(spec, ctx)
        oracle = 1 / (1 - mpf(1) / 4)
        out.append(CheckResult(
            "numerics", "dilation HS sum matches the geometric series",
            abs(hs - oracle) < mpf(10) ** -30,
            f"sum {mp.nstr(hs, 12)} vs {mp.nstr(oracle, 12)}"))

        one_point = bernstein_lower(spec, BernsteinConfig((0,)))
        out.append(CheckResult(
            "numerics", "one-point pencil at the origin returns exactly 1",
            abs(one_point - 1) < mpf(10) ** -30,
            f"value {mp.nstr(one_point, 12)}"))

        idop = WeightedCompositionSpec(dilation_map(1), constant_weight(1))
        tr_id = assemble(idop, 6, ctx)
        vals_id = jacobi_svd(tr_id.m, ctx)
        out.append(CheckResult(
            "numerics", "identity sections have unit singular values",
            max(abs(v - 1) for v in vals_id) < mpf(10) ** -30,
            ""))

        cfg = StripConfig(mp.pi / 2)
        k_centre = strip_kernel(cfg, 0, 0).real
        out.append(CheckResult(
            "numerics", "kernel diagonal at the centre equals 1/2",
            abs(k_centre - mpf(1) / 2) < mpf(10) ** -35,
            f"value {mp.nstr(k_centre, 12)}"))

        wm = modular_weight_function(
            ModularWeightParams("massive", 1, 1, -1), cfg)
        out.append(CheckResult(
            "numerics", "massive weight at the centre equals e^-2",
            abs(wm.eval(0) - mp.exp(-2)) < mpf(10) ** -35,
            ""))

        rng = random.Random(seed)
        ok = True
        for _ in range(20):
            x = mpf(rng.uniform(-0.95, 0.95))
            y = mpf(rng.uniform(-0.9, 0.9)) * mp.pi / 2
            zeta = mp.mpc(x, y)
            z = riemann_map_inverse(cfg, zeta)
            back = (mp.mpf(4) * cfg.b / mp.pi) * mp.atanh(z)
            if abs(back - zeta) > mpf(10) ** -30:
                ok = False
        out.append(CheckResult(
            "numerics", "conformal map and inverse round-trip at 20 points",
            ok, ""))
    return out


# ---------------------------------------------------------------------------
# registry


SUITES = {
    "diagonal": suite_diagonal,
    "halfplane-ratio": suite_halfplane_ratio,
    "hs-dichotomy": suite_hs_dichotomy,
    "lens-plain": suite_lens_plain,
    "lens-weighted": suite_lens_weighted,
    "strip-transfer": suite_strip_transfer,
    "strip-norms": suite_strip_norms,
    "scale-mono": suite_scale_mono,
    "massless-floor": suite_massless_floor,
    "numerics": suite_numerics,
}

ALIASES = {
    "all": tuple(SUITES),
    "trivial": ("numerics",),
    "fast": ("diagonal", "strip-norms", "numerics"),
}


def resolve_suite(name: str) -> tuple:
    """Expand a suite or alias name to a tuple of suite names."""
    if name in ALIASES:
        return ALIASES[name]
    if name in SUITES:
        return (name,)
    known = ", ".join(sorted(list(SUITES) + list(ALIASES)))
    raise UnknownSuite(f"unknown suite {name!r}; known: {known}")


def run_suite(name: str, seed: int = 0) -> list:
    """Run one registered suite and return its check results."""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}")
    return SUITES[name](seed=seed)
