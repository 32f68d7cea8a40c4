"""Executable forms of the decay bounds for weighted composition operators.

Four quantities bracket the approximation numbers from both sides:

* ``tradeoff_upper`` minimizes e^(-n h) + delta_w0(h) over h, the upper
  envelope driven by the weight's decay rate at the contact points;
* ``bernstein_lower`` evaluates the exact infimum of ||T* f||/||f|| over a
  span of reproducing kernels, a rigorous lower bound for a_n;
* ``gelfand_upper_blaschke`` bounds a_M from above by the norm of T
  restricted to a Blaschke-product subspace of codimension M - 1;
* ``carleson_box`` measures pullback boxes, the geometric input behind the
  upper bounds.

``fit_decay`` classifies a certified sequence against the four decay shapes
(geometric, stretched-exponential, n/log n, power law).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from mpmath import mp, mpf

from .disc_symbols import (
    DiscWeight,
    EvaluationAtSingularity,
    LensParams,
    MinorantFailure,
    MinorantOmega,
    BlaschkeSpec,
    blaschke,
    boundary_curve,
    compose_weight,
    lens_map,
)
from .numerics import DenseMatrix, PrecisionContext, hermitian_geneig, segment_quadrature
from .operator_core import (
    ApproxNumbers,
    InsufficientCertification,
    WeightedCompositionSpec,
    assemble,
)
from .numerics import jacobi_svd

__all__ = [
    "CarlesonReport",
    "BernsteinConfig",
    "DecayFit",
    "carleson_box",
    "carleson_report",
    "tradeoff_upper",
    "bernstein_lower",
    "gelfand_upper_blaschke",
    "fit_decay",
]


@dataclass(frozen=True)
class CarlesonReport:
    """Box-measure maxima over a boundary sample, per box size.

    ``constant`` estimates sup_h (max measure at h) / h, the embedding
    constant of the pullback measure.
    """

    h_grid: tuple
    box_measure: tuple
    constant: mpf

    def __post_init__(self) -> None:
        if len(self.h_grid) != len(self.box_measure):
            raise ValueError("grid and measures must align")
        if any(b < 0 for b in self.box_measure) or self.constant < 0:
            raise ValueError("measures must be nonnegative")
        pairs = sorted(zip(self.h_grid, self.box_measure))
        for (_, lo), (_, hi) in zip(pairs, pairs[1:]):
            if hi < lo - mpf(10) ** -25:
                raise ValueError("box measure must be nondecreasing in h")


@dataclass(frozen=True)
class BernsteinConfig:
    """Interior points spanning the kernel subspace of the lower bound."""

    points: tuple
    epsilon: object = None

    def __post_init__(self) -> None:
        pts = tuple(mp.mpmathify(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("at least one point required")
        if any(abs(p) >= 1 for p in pts):
            raise ValueError("points must lie in the open disc")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")

    @classmethod
    def ladder(cls, n: int, eps=None) -> "BernsteinConfig":
        """u_j = 1 - e^(-j eps), j = 1..n, default eps = log(n)/(2n)."""
        if n < 1:
            raise ValueError("need at least one point")
        if eps is None:
            if n < 2:
                raise ValueError("default spacing needs n >= 2")
            eps = mp.log(n) / (2 * n)
        eps = mp.mpmathify(eps)
        if not eps > 0:
            raise ValueError("spacing must be positive")
        return cls(tuple(1 - mp.e ** (-j * eps) for j in range(1, n + 1)), eps)


@dataclass(frozen=True)
class DecayFit:
    """One decay model fitted to log a_n.

    ``params`` is (rho | c | p, log-prefactor); residual is the RMS of the
    log-scale misfit on the window.
    """

    model: str
    params: tuple
    residual: float
    window: tuple

    def __post_init__(self) -> None:
        if self.residual < 0:
            raise ValueError("residual must be nonnegative")
        lead = self.params[0]
        if self.model == "exponential":
            if not 0 < lead < 1:
                raise ValueError("geometric ratio must lie in (0, 1)")
        elif self.model in ("stretched", "nlog", "power"):
            if not lead > 0:
                raise ValueError("decay constant must be positive")
        else:
            raise ValueError(f"unknown model {self.model!r}")


# ---------------------------------------------------------------------------
# Carleson boxes


def _box_samples(phi, npts: int) -> list:
    ts = set()
    for i in range(npts):
        ts.add(mp.pi * (2 * mpf(i) / npts - 1))
    for zc in phi.contact_points:
        tc = mp.arg(zc)
        for k in range(2, 52):
            off = mp.pi * mpf(2) ** -k
            for s in (tc - off, tc + off):
                if -mp.pi <= s <= mp.pi:
                    ts.add(s)
    return sorted(ts)


def carleson_box(spec: WeightedCompositionSpec, weight_squared: bool, xi, h,
                 ctx: PrecisionContext = None):
    """Pullback measure of the box {z : |z - xi| <= h} on the boundary.

    ``weight_squared`` switches between arc measure of the preimage and its
    |w|^2-weighted version (the trace measure of the operator's weight).
    The preimage is located by sign scanning on a dense grid, refined
    dyadically near the contact points, with bisection at each crossing.
    """
    if ctx is None:
        ctx = PrecisionContext()
    with ctx.workprec():
        xi = mp.mpmathify(xi)
        h = mp.mpmathify(h)
        if abs(abs(xi) - 1) > mpf(10) ** -6:
            raise ValueError("box center must lie on the unit circle")
        xi = xi / abs(xi)
        if not 0 < h <= 2:
            raise ValueError("box size must lie in (0, 2]")

        def inside(t) -> bool:
            return abs(spec.phi.eval(mp.expjpi(t / mp.pi)) - xi) <= h

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            ts = _box_samples(spec.phi, 2048)
            flags = [inside(t) for t in ts]
            m = len(ts)
            if all(flags):
                lo, hi = [-mp.pi], [mp.pi]
            elif not any(flags):
                return mpf(0)
            else:
                # bisect every crossing, walking the circle
                cross = []
                for i in range(m):
                    j = (i + 1) % m
                    a, b = ts[i], ts[j] if j else ts[0] + 2 * mp.pi
                    if flags[i] == flags[j]:
                        continue
                    for _ in range(64):
                        mid = (a + b) / 2
                        if inside(mid) == flags[i]:
                            a = mid
                        else:
                            b = mid
                    cross.append(((a + b) / 2, flags[i]))
                lo = [c for c, was_in in cross if not was_in]
                hi = [c for c, was_in in cross if was_in]
            total = mpf(0)
            intervals = _pair_intervals(lo, hi)
            kinks = sorted(mp.arg(zc) + 2 * mp.pi * k
                           for zc in spec.phi.contact_points for k in (-1, 0, 1))
            for a, b in intervals:
                if weight_squared:
                    path = [a] + [t for t in kinks if a < t < b] + [b]
                    q = segment_quadrature(
                        lambda t: abs(spec.w.eval(mp.expjpi(t / mp.pi))) ** 2,
                        path, ctx)
                    total += q.value
                else:
                    total += b - a
        return total / (2 * mp.pi)


def _pair_intervals(starts, ends):
    """Match in-crossings to out-crossings around the circle."""
    starts = sorted(x if x <= mp.pi else x - 2 * mp.pi for x in starts)
    ends = sorted(x if x <= mp.pi else x - 2 * mp.pi for x in ends)
    out = []
    for a in starts:
        after = [b for b in ends if b > a]
        b = min(after) if after else min(ends) + 2 * mp.pi
        out.append((a, b))
    return out


def carleson_report(spec: WeightedCompositionSpec, weight_squared: bool = True,
                    h_grid=None, xi_values=None,
                    ctx: PrecisionContext = None) -> CarlesonReport:
    """Max box measure over a boundary sample for each h, plus sup ratio."""
    if ctx is None:
        ctx = PrecisionContext()
    with ctx.workprec():
        if h_grid is None:
            h_grid = tuple(mpf(10) ** (-3 + mpf(5) * i / (2 * 11)) for i in range(12))
        if xi_values is None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", EvaluationAtSingularity)
                xi_values = [spec.phi.eval(zc) for zc in spec.phi.contact_points]
            xi_values += [mp.expjpi(2 * mpf(k) / 8) for k in range(8)]
            xi_values = tuple(x / abs(x) for x in xi_values)
        measures = []
        for h in h_grid:
            measures.append(max(carleson_box(spec, weight_squared, xi, h, ctx)
                                for xi in xi_values))
        constant = max(mval / h for h, mval in zip(h_grid, measures))
        return CarlesonReport(tuple(h_grid), tuple(measures), constant)


# ---------------------------------------------------------------------------
# Upper bound from the h-tradeoff


def _recheck_minorant(phi, w0, omega) -> None:
    # standing assertion: omega really minorizes boundary flatness, and the
    # pair (w0, omega) is being used with the phi it was built for
    slack = 1 - mpf(2) ** -16
    for zc in phi.contact_points:
        tc = mp.arg(zc)
        for k in range(24):
            s = mpf(10) ** (-10 + 10 * mpf(k) / 23)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", EvaluationAtSingularity)
                for t in (tc + s, tc - s):
                    gap = 1 - abs(boundary_curve(phi, t))
                    if gap < omega(s) * slack:
                        raise MinorantFailure(
                            f"minorant exceeds boundary flatness at offset {mp.nstr(s, 6)}")


def tradeoff_upper(spec: WeightedCompositionSpec, w0: DiscWeight,
                   omega: MinorantOmega, n: int,
                   ctx: PrecisionContext = None):
    """min over h of e^(-n h) + delta_w0(h), without the unknown prefactor.

    The two terms trade off: small h keeps the exponential large, large h
    exposes more of the contact region to the weight supremum.  The search
    runs a 64-point log grid on [1e-6, 1] and refines the best bracket by
    golden section.  The minorant is re-validated on samples before use, and
    the factorization w = w0 o phi is spot-checked.
    """
    from .disc_symbols import delta_w0

    if ctx is None:
        ctx = PrecisionContext()
    if n < 1:
        raise ValueError("index must be positive")
    with ctx.workprec():
        _recheck_minorant(spec.phi, w0, omega)
        for k in range(5):
            z = mpf(3) / 10 * mp.expjpi(2 * mpf(k) / 5)
            lhs = spec.w.eval(z)
            rhs = w0.eval(spec.phi.eval(z))
            if abs(lhs - rhs) > mpf(2) ** (20 - ctx.precision_bits) * (1 + abs(lhs)):
                raise ValueError("weight does not factor through the map")

        def objective(h):
            return mp.e ** (-n * h) + delta_w0(w0, omega, spec.phi, h)

        grid = [mpf(10) ** (-6 + 6 * mpf(i) / 63) for i in range(64)]
        values = [objective(h) for h in grid]
        i = min(range(64), key=lambda k: values[k])
        best = values[i]
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, 63)]
        gr = (mp.sqrt(5) - 1) / 2
        a, b = lo, hi
        c = b - gr * (b - a)
        d = a + gr * (b - a)
        fc, fd = objective(c), objective(d)
        for _ in range(60):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - gr * (b - a)
                fc = objective(c)
            else:
                a, c, fc = c, d, fd
                d = a + gr * (b - a)
                fd = objective(d)
        return min(best, fc, fd)


# ---------------------------------------------------------------------------
# Exact kernel-span lower bound


def _gram_bits(points) -> int:
    """Working precision for the kernel Gram pencil.

    Szego Gram spectra of clustered point families decay geometrically;
    the determinant (exact, Cauchy product form) calibrates the decay ratio
    and hence the smallest eigenvalue, which sets the resolvable scale.
    """
    n = len(points)
    if n == 1:
        return 0
    with mp.workprec(128):
        logdet = mpf(0)
        for i in range(n):
            for j in range(n):
                if j > i:
                    logdet += 2 * mp.log(abs(points[j] - points[i]))
                logdet -= mp.log(abs(1 - mp.conj(points[i]) * points[j]))
        t = mp.log(mp.fsum(1 / (1 - abs(p) ** 2) for p in points))
        logq = 2 * (logdet - n * t) / (n * (n - 1))
        log_min = t + (n - 1) * logq
        if log_min >= 0:
            return 0
        return int(mpf("1.4") * (-log_min) / mp.log(2)) + 256


def bernstein_lower(spec: WeightedCompositionSpec, config: BernsteinConfig,
                    ctx: PrecisionContext = None):
    """inf ||T* f|| / ||f|| over f in span{K_u : u in config.points}.

    Since T* K_u = conj(w(u)) K_phi(u), the infimum is the square root of
    the smallest eigenvalue of the pencil (D G_v D^H, G_u) with Szego Grams
    G[i][j] = 1/(1 - conj(z_i) z_j) and D = diag(conj(w(u_j))).  This is a
    rigorous lower bound for a_n(T) at n = len(points).

    Working precision rises automatically with the Gram conditioning; pass
    an explicit ``ctx`` to pin it (NotPositiveDefinite signals it was too
    low for the point configuration).
    """
    u = config.points
    n = len(u)
    base = ctx if ctx is not None else PrecisionContext()
    if ctx is None:
        bits = max(base.precision_bits, _gram_bits(u))
        base = replace(base, precision_bits=bits)
    with base.workprec():
        v = [spec.phi.eval(x) for x in u]
        wu = [spec.w.eval(x) for x in u]
        sep = mpf(2) ** -(base.precision_bits // 2)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(v[i] - v[j]) < sep:
                    raise ValueError("map does not separate the points")
        gu = [[mpf(0)] * n for _ in range(n)]
        a = [[mpf(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                gu[i][j] = 1 / (1 - mp.conj(u[i]) * u[j])
                gu[j][i] = mp.conj(gu[i][j])
                a[i][j] = mp.conj(wu[i]) * (1 / (1 - mp.conj(v[i]) * v[j])) * wu[j]
                a[j][i] = mp.conj(a[i][j])
        lam = hermitian_geneig(DenseMatrix(a, hermitian=True),
                               DenseMatrix(gu, hermitian=True), base)
        return mp.sqrt(max(lam[0], mpf(0)))


# ---------------------------------------------------------------------------
# Constructive upper bound at Blaschke codimension


def gelfand_upper_blaschke(spec: WeightedCompositionSpec, bspec: BlaschkeSpec,
                           ctx: PrecisionContext = None, n_trunc: int = None):
    """(M, bound) with a_M(T) <= bound, M = 4 N floor(log N) + 1.

    Restricting T to the range of the Blaschke multiplier B gives
    ||T M_B|| >= a_M(T) for codimension M - 1; the product T M_B is itself
    a weighted composition operator with weight w * (B o phi), so its norm
    is bounded by a_1 of the truncation plus the truncation tail.
    """
    if ctx is None:
        ctx = PrecisionContext()
    with ctx.workprec():
        ref = lens_map(LensParams(bspec.lam)).taylor(4).coeffs
        got = spec.phi.taylor(4).coeffs
        if any(abs(a - b) > mpf(10) ** -20 for a, b in zip(got, ref)):
            raise ValueError("Blaschke parameters built for a different map")
        m_index = bspec.degree + 1
        if n_trunc is None:
            n_trunc = 2 * m_index + 32
        b = blaschke(bspec)
        w_eff = compose_weight(spec.w, b, spec.phi)
        trunc = assemble(WeightedCompositionSpec(spec.phi, w_eff), n_trunc, ctx)
        top = jacobi_svd(trunc.m, ctx)[0]
        return m_index, top + trunc.op_tail


# ---------------------------------------------------------------------------
# Decay-model fitting


_REGRESSORS = {
    "exponential": lambda n: float(n),
    "stretched": lambda n: float(n) ** 0.5,
    "nlog": lambda n: float(n) / np.log(float(n)),
    "power": lambda n: np.log(float(n)),
}


def fit_decay(a: ApproxNumbers, window):
    """Least-squares decay classification of log a_n on the window.

    Returns (fits, best) with one DecayFit per admissible model; residuals
    within 5% of the best are statistical ties the caller must not resolve
    silently.  Models whose fitted constant falls outside its valid range
    (non-decaying data) are dropped.
    """
    n_min, n_max = int(window[0]), int(window[1])
    if n_min < 2 or n_max <= n_min or n_max > len(a.values):
        raise ValueError("window must satisfy 2 <= n_min < n_max <= len(values)")
    for n in range(n_min, n_max + 1):
        v = a.values[n - 1]
        if not (v > 0 and a.radius < v / 10):
            raise InsufficientCertification(
                f"index {n} is not certified to a tenth of its value")
    ns = range(n_min, n_max + 1)
    ys = np.array([float(mp.log(a.values[n - 1])) for n in ns])
    fits = []
    for model, reg in _REGRESSORS.items():
        x = np.array([reg(n) for n in ns])
        design = np.column_stack([np.ones_like(x), -x])
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        prefactor, c = float(coef[0]), float(coef[1])
        residual = float(np.sqrt(np.mean((design @ coef - ys) ** 2)))
        if c <= 0:
            continue
        lead = float(np.exp(-c)) if model == "exponential" else c
        if model == "exponential" and not 0 < lead < 1:
            continue
        fits.append(DecayFit(model, (lead, prefactor), residual, (n_min, n_max)))
    if not fits:
        raise ValueError("no admissible decay model on this window")
    best = min(fits, key=lambda f: f.residual)
    return fits, best
