"""Truncated weighted composition operators and certified spectral data.

Assembles P_n T P_n for T = M_w C_phi in the monomial basis, where entry
(j, k) is the j-th Taylor coefficient of w * phi**k, certifies the truncation
error through column-norm boundary integrals, and derives approximation
numbers, Hilbert-Schmidt norms, and exponential-rate estimates from the
truncations.

Two independent assembly routes are available and cross-checkable: exact
series recurrences, and Taylor-coefficient extraction by quadrature on an
interior circle (radius 3/4), whose aliasing error is bounded by
``sup|w| * r**M / (1 - r**M)`` independently of the coefficient index.  The
interior radius is what makes the cross-check tolerance reachable: on the
unit circle itself the lens integrands are smooth but non-analytic at the
contact points and the trapezoid rule stalls.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Sequence

from mpmath import mp, mpf

from .disc_symbols import DiscMap, DiscWeight, EvaluationAtSingularity
from .numerics import (
    DenseMatrix,
    PrecisionContext,
    jacobi_svd,
    segment_quadrature,
    series_arith,
)

__all__ = [
    "WeightedCompositionSpec",
    "TruncatedOperator",
    "ApproxNumbers",
    "AssemblyMismatch",
    "NonIntegrableTail",
    "CertificationFailed",
    "InsufficientCertification",
    "Divergent",
    "DIVERGENT",
    "assemble",
    "approx_numbers",
    "hilbert_schmidt_norm",
    "closed_form_hs",
    "beta_estimate",
]

_EXTRACT_RADIUS_NUM = 3
_EXTRACT_RADIUS_DEN = 4


class AssemblyMismatch(Exception):
    """The two assembly routes disagree beyond the context tolerance."""


class NonIntegrableTail(Exception):
    """The Hilbert-Schmidt tail integral does not converge.

    Signals |phi| -> 1 with insufficient weight decay; callers fall back to
    a crude operator-norm bound.
    """


class CertificationFailed(UserWarning):
    """Truncation doubling hit its cap with the tail above target."""


class InsufficientCertification(Exception):
    """No index of the sequence passes the certification radius filter."""


class Divergent:
    """Sentinel for a divergent Hilbert-Schmidt sum."""

    _singleton = None

    def __new__(cls):
        if cls._singleton is None:
            cls._singleton = super().__new__(cls)
        return cls._singleton

    def __repr__(self) -> str:
        return "Divergent"


DIVERGENT = Divergent()


@dataclass(frozen=True)
class WeightedCompositionSpec:
    """Symbol pair and assembly policy for T = M_w C_phi."""

    phi: DiscMap
    w: DiscWeight
    assembly: str = "series"

    def __post_init__(self) -> None:
        if self.assembly not in ("series", "quadrature", "both"):
            raise ValueError("assembly must be series, quadrature, or both")
        if self.w.sup_norm == mp.inf:
            raise ValueError("weight must be a bounded multiplier")


@dataclass(frozen=True)
class TruncatedOperator:
    """P_n T P_n with certified truncation data.

    ``col_tail[k]`` is the mass of column k lost to the truncation rows,
    ``op_tail`` bounds ||T - P_n T P_n||; with ``crude_tail`` set the bound
    fell back to the operator-norm estimate (non-integrable tail integrand).
    """

    n: int
    m: DenseMatrix
    col_norms: tuple
    col_tail: tuple
    op_tail: mpf
    crude_tail: bool = False


@dataclass(frozen=True)
class ApproxNumbers:
    """Descending singular values with a common enclosure half-width.

    ``certified`` marks a rigorous radius (the producing truncation's
    op_tail); ``stabilized`` marks a radius estimated from agreement of two
    successive truncation orders, reported when the tail bound itself decays
    too slowly to be useful.
    """

    values: tuple
    radius: mpf
    n_used: int
    certified: bool = True
    stabilized: bool = False
    certification_failed: bool = False

    def value(self, n: int) -> mpf:
        """a_n with 1-based indexing."""
        return self.values[n - 1]


# ---------------------------------------------------------------------------
# Assembly


def _series_columns(spec: WeightedCompositionSpec, n: int) -> list:
    cols = []
    cur = spec.w.taylor(n)
    phi_s = spec.phi.taylor(n)
    for k in range(n):
        cols.append(list(cur.coeffs))
        if k < n - 1:
            cur = series_arith(cur, phi_s, "mul")
    return cols


def _quadrature_columns(spec: WeightedCompositionSpec, n: int,
                        ctx: PrecisionContext) -> list:
    """Coefficient extraction on the circle |u| = 3/4.

    The trapezoid sum with M nodes returns c_j plus an aliasing series
    bounded by sup|w| * r**M / (1 - r**M) for every j < M, so M is chosen
    from the context's digit target directly; a half-node comparison guards
    against evaluation bugs rather than truncation error.
    """
    bits = ctx.precision_bits
    r = mpf(_EXTRACT_RADIUS_NUM) / _EXTRACT_RADIUS_DEN
    need = int((bits / mpf(8) * mp.log(10) + 24) / (-mp.log(r))) + 1
    # the half-node comparison must itself sit below the digit target, so
    # size the grid for the halved rule
    m_nodes = ctx.quad_nodes
    while m_nodes < max(2 * n, 2 * need):
        m_nodes *= 2
    roots = [mp.expjpi(-2 * mpf(i) / m_nodes) for i in range(m_nodes)]
    nodes = [r * mp.conj(roots[s]) for s in range(m_nodes)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EvaluationAtSingularity)
        wv = [spec.w.eval(u) for u in nodes]
        pv = [spec.phi.eval(u) for u in nodes]
    rinv = [r ** (-j) for j in range(n)]
    cols = []
    check_tol = mpf(10) ** -(bits // 8) / 2
    fv = list(wv)
    for k in range(n):
        col = []
        for j in range(n):
            full = mp.fsum(fv[s] * roots[(s * j) % m_nodes]
                           for s in range(m_nodes)) / m_nodes
            half = mp.fsum(fv[s] * roots[(s * j) % m_nodes]
                           for s in range(0, m_nodes, 2)) / (m_nodes // 2)
            if abs(full - half) > check_tol * (1 + abs(full)):
                raise AssemblyMismatch(
                    f"interior-circle extraction unstable at entry ({j},{k})")
            col.append(full * rinv[j])
        cols.append(col)
        if k < n - 1:
            fv = [fv[s] * pv[s] for s in range(m_nodes)]
    return cols


def _boundary_abs2(f, t):
    v = f(mp.expjpi(t / mp.pi))
    return abs(v) ** 2


def _guarded_ratio(build, t):
    """num/den from ``build()``, robust to den rounding to 0 at contact points.

    Retries once at doubled precision.  A denominator still vanishing within
    2**(-prec/4) of an arc endpoint is node rounding below the tanh-sinh
    saturation floor and contributes 0; vanishing anywhere else means the
    symbol is unimodular on a set of positive measure and the ratio has no
    integrable meaning.
    """
    num, den = build()
    if den > 0:
        return num / den
    with mp.workprec(2 * mp.prec):
        num, den = build()
        if den > 0:
            return num / den
    if min(abs(t), mp.pi - abs(t)) > mpf(2) ** -(mp.prec // 4):
        raise ZeroDivisionError("vanishing denominator away from arc ends")
    return mpf(0)


def _dichotomy_tol(ctx: PrecisionContext) -> mpf:
    # singular endpoint factors t**(-a) saturate tanh-sinh at ~eps**(1-a);
    # the convergence verdict must sit above that floor but far below the
    # O(1) relative scatter of a genuinely divergent integral
    return mpf(10) ** -max(6, ctx.precision_bits // 32)


def _stable_singular_quad(integrand, ctx: PrecisionContext):
    """Quadrature with a precision-stability verdict on [-pi, pi].

    The guarded-ratio regularization turns a non-integrable contact-point
    blowup into a large finite number whose size tracks the precision cutoff,
    so the tanh-sinh estimate alone cannot expose it.  An integrable singular
    factor is precision-stable; re-running with 128 extra bits moves the
    cutoff and shifts a regularization artifact by orders of magnitude.
    """
    tol = _dichotomy_tol(ctx)
    q = segment_quadrature(integrand, [-mp.pi, 0, mp.pi], ctx, rel_tol=tol)
    if not q.converged:
        return q
    ctx_hi = replace(ctx, precision_bits=ctx.precision_bits + 128)
    with ctx_hi.workprec():
        q_hi = segment_quadrature(integrand, [-mp.pi, 0, mp.pi], ctx_hi, rel_tol=tol)
    drift = abs(q_hi.value - q.value)
    if drift > tol * (1 + abs(q.value)):
        return replace(q_hi, converged=False)
    return replace(q_hi, error=max(q_hi.error, drift))


def _dilation_factor(phi: DiscMap):
    # dispatch by construction contract, not coefficient sniffing: any odd
    # self-map shares the leading series (0, r, 0) with z -> r z
    if not phi.name.startswith("dilation("):
        return None
    s = phi.taylor(3).coeffs
    if s[0] != 0 or s[2] != 0:
        raise AssemblyMismatch("map named dilation(...) is not z -> r z")
    return s[1]


def _col_norms(spec: WeightedCompositionSpec, n: int, ctx: PrecisionContext) -> list:
    """||T e_k||^2 for k < n as boundary integrals of |w|^2 |phi|^(2k)."""
    rfac = _dilation_factor(spec.phi)
    if rfac is not None:
        base = segment_quadrature(lambda t: _boundary_abs2(spec.w.eval, t),
                                  [-mp.pi, 0, mp.pi], ctx).value / (2 * mp.pi)
        rr = abs(rfac) ** 2
        return [base * rr**k for k in range(n)]
    out = []
    for k in range(n):
        def integrand(t, kk=k):
            u = mp.expjpi(t / mp.pi)
            return abs(spec.w.eval(u)) ** 2 * abs(spec.phi.eval(u)) ** (2 * kk)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            q = segment_quadrature(integrand, [-mp.pi, 0, mp.pi], ctx)
        out.append(q.value / (2 * mp.pi))
    return out


def _tail_integral(spec: WeightedCompositionSpec, n: int, ctx: PrecisionContext) -> mpf:
    """Sum over k >= n of ||T e_k||^2 via the geometric-series identity."""
    rfac = _dilation_factor(spec.phi)
    if rfac is not None:
        rr = abs(rfac) ** 2
        if rr >= 1:
            raise NonIntegrableTail("inner symbol: geometric tail has no decay")
        base = segment_quadrature(lambda t: _boundary_abs2(spec.w.eval, t),
                                  [-mp.pi, 0, mp.pi], ctx).value / (2 * mp.pi)
        return base * rr**n / (1 - rr)

    def integrand(t):
        def build():
            u = mp.expjpi(t / mp.pi)
            p = abs(spec.phi.eval(u)) ** 2
            return abs(spec.w.eval(u)) ** 2 * p**n, 1 - p

        return _guarded_ratio(build, t)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            q = _stable_singular_quad(integrand, ctx)
    except ZeroDivisionError as exc:
        raise NonIntegrableTail("tail integrand blows up on the boundary") from exc
    if not q.converged or q.value < 0:
        raise NonIntegrableTail("tail integral failed to converge")
    return q.value / (2 * mp.pi)


def _crude_tail_bound(spec: WeightedCompositionSpec) -> mpf:
    # ||T - P T P|| <= 2 ||M_w|| ||C_phi|| with the subordination bound
    # sqrt((1+|phi(0)|)/(1-|phi(0)|)) for the composition factor
    phi0 = abs(spec.phi.eval(0))
    return 2 * spec.w.sup_norm * mp.sqrt((1 + phi0) / (1 - phi0))


def assemble(spec: WeightedCompositionSpec, n: int,
             ctx: PrecisionContext = None) -> TruncatedOperator:
    """Truncated matrix of T with certified tail bound.

    Entry (j, k) is the j-th Taylor coefficient of w * phi**k.  The tail
    bound splits as sqrt(sum of in-range column tails) plus sqrt(out-of-range
    column mass), both boundary integrals; a non-integrable out-of-range
    integrand (symbol with unimodular boundary values and no weight decay)
    downgrades to a crude operator-norm bound with ``crude_tail`` set.
    """
    if ctx is None:
        ctx = PrecisionContext()
    if n < 1:
        raise ValueError("truncation order must be positive")
    with ctx.workprec():
        if spec.assembly in ("series", "both"):
            cols = _series_columns(spec, n)
        if spec.assembly in ("quadrature", "both"):
            qcols = _quadrature_columns(spec, n, ctx)
            if spec.assembly == "both":
                tol = mpf(10) ** -(ctx.precision_bits // 8)
                for k in range(n):
                    for j in range(n):
                        if abs(cols[k][j] - qcols[k][j]) > tol * (1 + abs(cols[k][j])):
                            raise AssemblyMismatch(
                                f"series/quadrature disagree at ({j},{k}): "
                                f"{mp.nstr(cols[k][j], 8)} vs {mp.nstr(qcols[k][j], 8)}")
            else:
                cols = qcols
        matrix = DenseMatrix([[cols[k][j] for k in range(n)] for j in range(n)])
        col_norms = _col_norms(spec, n, ctx)
        bessel_tol = mpf(10) ** -(ctx.precision_bits // 4)
        col_tail = []
        for k in range(n):
            in_range = mp.fsum(abs(x) ** 2 for x in cols[k])
            tail = col_norms[k] - in_range
            if tail < -bessel_tol * (1 + col_norms[k]):
                raise AssemblyMismatch(
                    f"column {k} violates the Bessel inequality: "
                    f"norm {mp.nstr(col_norms[k], 8)} < partial {mp.nstr(in_range, 8)}")
            col_tail.append(tail)
        try:
            tail_mass = _tail_integral(spec, n, ctx)
            op_tail = mp.sqrt(mp.fsum(max(t, mpf(0)) for t in col_tail)) + mp.sqrt(tail_mass)
            crude = False
        except NonIntegrableTail:
            op_tail = _crude_tail_bound(spec)
            crude = True
        return TruncatedOperator(n, matrix, tuple(col_norms), tuple(col_tail),
                                 op_tail, crude)


# ---------------------------------------------------------------------------
# Approximation numbers


def approx_numbers(spec: WeightedCompositionSpec, n_max: int, target,
                   ctx: PrecisionContext = None, max_order: int = None) -> ApproxNumbers:
    """First ``n_max`` approximation numbers with a certification radius.

    Assembles at N = max(2 n_max, 32) and doubles N until the tail bound
    meets ``target`` (certified, by |a_n(T) - a_n(P_N T P_N)| <= op_tail) or
    two successive orders agree to ``target`` on the requested range
    (stabilized: compressions increase toward T monotonically, so agreement
    pins the limit empirically even when the tail bound decays too slowly).
    Hitting ``max_order`` first emits a CertificationFailed warning and
    returns the last values flagged.
    """
    if ctx is None:
        ctx = PrecisionContext()
    if n_max < 1 or not target > 0:
        raise ValueError("need n_max >= 1 and target > 0")
    n_order = max(2 * n_max, 32)
    cap = max_order if max_order is not None else 8 * n_order
    prev = None
    prev_tail = None
    with ctx.workprec():
        target = mp.mpmathify(target)
        while True:
            trunc = assemble(spec, n_order, ctx)
            vals = jacobi_svd(trunc.m, ctx)
            if not trunc.crude_tail and trunc.op_tail <= target:
                return ApproxNumbers(tuple(vals[:n_max]), trunc.op_tail, n_order)
            if prev is not None:
                stab = max(abs(vals[i] - prev[i]) for i in range(n_max))
                # extrapolate the tail trend one rung: when the rigorous exit
                # is within reach, prefer it over the empirical one
                imminent = (prev_tail is not None and not trunc.crude_tail
                            and trunc.op_tail ** 2 <= target * prev_tail
                            and 2 * n_order <= cap)
                if stab <= target and not imminent:
                    return ApproxNumbers(tuple(vals[:n_max]), max(stab, mpf(0)),
                                         n_order, certified=False, stabilized=True)
            if 2 * n_order > cap:
                warnings.warn(
                    f"truncation cap {cap} reached with tail "
                    f"{mp.nstr(trunc.op_tail, 6)} above target {mp.nstr(target, 6)}",
                    CertificationFailed,
                    stacklevel=2,
                )
                return ApproxNumbers(tuple(vals[:n_max]), trunc.op_tail, n_order,
                                     certified=False,
                                     certification_failed=True)
            prev = vals
            prev_tail = None if trunc.crude_tail else trunc.op_tail
            n_order *= 2


# ---------------------------------------------------------------------------
# Hilbert-Schmidt norm


def _partial_sum_integral(spec: WeightedCompositionSpec, kk: int,
                          ctx: PrecisionContext) -> mpf:
    """sum_{k<K} ||T e_k||^2 as one integral of |w|^2 (1-|phi|^2K)/(1-|phi|^2)."""

    def integrand(t):
        u = mp.expjpi(t / mp.pi)
        p = abs(spec.phi.eval(u)) ** 2
        if p >= 1:
            geom = mpf(kk)
        else:
            geom = (1 - p**kk) / (1 - p)
        return abs(spec.w.eval(u)) ** 2 * geom

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EvaluationAtSingularity)
        q = segment_quadrature(integrand, [-mp.pi, 0, mp.pi], ctx)
    return q.value / (2 * mp.pi)


def closed_form_hs(spec: WeightedCompositionSpec, ctx: PrecisionContext = None) -> mpf:
    """The boundary-integral identity 2|w|^2/(1-cos t) for phi(z) = (1+z)/2.

    Independent of column norms: uses the trigonometric form of 1 - |phi|^2
    for this symbol only.
    """
    if ctx is None:
        ctx = PrecisionContext()
    with ctx.workprec():
        s = spec.phi.taylor(3).coeffs
        if not (s[0] == mpf(1) / 2 and s[1] == mpf(1) / 2 and s[2] == 0):
            raise ValueError("closed form requires phi(z) = (1+z)/2")

        def integrand(t):
            def build():
                u = mp.expjpi(t / mp.pi)
                return 2 * abs(spec.w.eval(u)) ** 2, 1 - mp.cos(t)

            return _guarded_ratio(build, t)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            q = _stable_singular_quad(integrand, ctx)
        if not q.converged:
            raise NonIntegrableTail("closed-form integrand not integrable")
        return q.value / (2 * mp.pi)


def hilbert_schmidt_norm(spec: WeightedCompositionSpec,
                         ctx: PrecisionContext = None):
    """(sum_k ||T e_k||^2, partial sums at K = 32, 64, 128, 256).

    The value combines the K = 256 partial sum with the exact geometric tail
    integral.  Divergence is declared when that tail integrand is not
    integrable AND the partial sums keep growing across the doublings; the
    growth corroboration alone would misclassify slowly convergent sums,
    whose partial-sum ratios stay well above 1 for very long (for the
    half-plane pair just above the cutoff exponent they exceed 1.05 beyond
    K = 512).

    Integrability is decided by precision-stability of the regularized tail
    quadrature, which resolves the boundary down to scales ~2**-precision_bits.
    Within O(1/precision_bits) of a critical symbol exponent the verdict can
    report Divergent for a sum that converges beyond that resolution; raise
    ``precision_bits`` to sharpen the split.
    """
    if ctx is None:
        ctx = PrecisionContext()
    with ctx.workprec():
        ks = [32, 64, 128, 256]
        partial = [_partial_sum_integral(spec, k, ctx) for k in ks]
        growing = all(b > a * mpf("1.01") for a, b in zip(partial, partial[1:]))
        try:
            tail = _tail_integral(spec, ks[-1], ctx)
        except NonIntegrableTail:
            if growing:
                return DIVERGENT, tuple(partial)
            raise
        value = partial[-1] + tail
        # cross-check against the symbol-specific closed form when available
        try:
            cf = closed_form_hs(spec, ctx)
        except ValueError:
            cf = None
        if cf is not None and abs(cf - value) > mpf(10) ** -10 * abs(cf):
            raise AssemblyMismatch(
                f"HS routes disagree: {mp.nstr(value, 12)} vs {mp.nstr(cf, 12)}")
        return value, tuple(partial)


# ---------------------------------------------------------------------------
# Exponential-rate estimates


def beta_estimate(a: ApproxNumbers):
    """(min, max) of a_n**(1/n) over the certified top half of the indices.

    An index is certified when the enclosure radius is below a_n / 10; the
    top half (larger n) of those is used, as the early indices carry the
    prefactor, not the rate.
    """
    if not a.values or any(v <= 0 for v in a.values):
        raise ValueError("beta estimate needs positive values")
    good = [i for i, v in enumerate(a.values) if a.radius < v / 10]
    if not good:
        raise InsufficientCertification("no index passes the radius filter")
    top = good[len(good) // 2:]
    roots = [a.values[i] ** (mpf(1) / (i + 1)) for i in top]
    return min(roots), max(roots)
