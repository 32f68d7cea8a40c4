"""Concrete symbols and weights on the unit disc.

Lens maps, the half-plane-type symbol pair, double-exponential lens weights,
certified boundary minorants, the contact-window suprema they control, and
finite Blaschke products built from boundary-clustered zeros.

Evaluation callables honour the ambient mpmath precision; heavy grid scans
are cached per (symbol, precision) pair.  All containers are immutable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from mpmath import mp, mpf

from .numerics import (
    PowerSeries,
    principal_power,
    series_add,
    series_arith,
    series_binomial,
    series_eval,
    series_exp,
    series_negate_arg,
    series_scale,
)

__all__ = [
    "LensParams",
    "DiscMap",
    "DiscWeight",
    "MinorantOmega",
    "BlaschkeSpec",
    "MinorantFailure",
    "EvaluationAtSingularity",
    "lens_map",
    "lens_weight",
    "halfplane_symbol_weight",
    "halfplane_base_weight",
    "dilation_map",
    "constant_weight",
    "series_weight",
    "boundary_curve",
    "power_minorant",
    "lens_minorant",
    "delta_w0",
    "blaschke_spec",
    "blaschke",
    "compose_weight",
]


class EvaluationAtSingularity(UserWarning):
    """A weight was evaluated exactly at a boundary singularity.

    The continuous extension (value 0) is returned; the warning flags that
    the closed-form expression itself is undefined there.
    """


class MinorantFailure(Exception):
    """Independent re-validation of a boundary minorant found a violation."""


@dataclass(frozen=True)
class LensParams:
    """Lens-map parameter; the opening exponent must lie strictly in (0,1)."""

    lam: mpf

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", mp.mpmathify(self.lam))
        if not (0 < self.lam < 1):
            raise ValueError("lambda must lie in (0,1)")


@dataclass(frozen=True, eq=False)
class DiscMap:
    """Analytic self-map of the disc with boundary contact bookkeeping.

    ``contact_points`` lists the boundary points xi with |phi(xi)| = 1;
    ``sup_norm_lt_one`` marks maps whose closure stays inside the disc.
    """

    eval: Callable
    taylor: Callable[[int], PowerSeries]
    contact_points: tuple
    sup_norm_lt_one: bool
    name: str = ""


@dataclass(frozen=True, eq=False)
class DiscWeight:
    """Bounded analytic multiplier; ``sup_norm`` may be ``mp.inf``."""

    eval: Callable
    taylor: Callable[[int], PowerSeries]
    sup_norm: mpf
    name: str = ""


@dataclass(frozen=True)
class MinorantOmega:
    """Certified boundary minorant of the form omega(t) = c * t**lam.

    Guarantees 1 - |gamma(t)| >= omega(|t|) on the validated window around
    each contact point, so the window {1 - |gamma| <= h} is contained in
    {|t| <= omega_inverse(h)}.
    """

    c: mpf
    lam: mpf

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", mp.mpmathify(self.c))
        object.__setattr__(self, "lam", mp.mpmathify(self.lam))
        if not (self.c > 0 and self.lam > 0):
            raise ValueError("minorant requires positive c and exponent")

    def __call__(self, t) -> mpf:
        return self.c * mp.mpmathify(abs(t)) ** self.lam

    def inverse(self, h) -> mpf:
        return (mp.mpmathify(h) / self.c) ** (1 / self.lam)


@dataclass(frozen=True)
class BlaschkeSpec:
    """Zero configuration for the boundary-clustered Blaschke product.

    ``zeros`` holds p_k on the image curve at dyadic parameters
    t_k = (pi/2) * 2**(-(k-1)/lam) for k = 1..floor(log N); each conjugate
    quadruple is repeated N times, so the degree is exactly 4*N*floor(log N).
    """

    lam: mpf
    N: int
    zeros: tuple
    degree: int

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError("repetition exponent N must be at least 2")
        if any(abs(p) >= 1 for p in self.zeros):
            raise ValueError("Blaschke zeros must lie inside the disc")
        if self.degree != 4 * self.N * len(self.zeros):
            raise ValueError("degree must equal 4*N*floor(log N)")


# ---------------------------------------------------------------------------
# Maps


def lens_map(params: LensParams) -> DiscMap:
    """The lens map: ((1+z)^lam - (1-z)^lam) / ((1+z)^lam + (1-z)^lam).

    Contacts the boundary at +1 and -1 only; odd under z -> -z.
    """
    lam = params.lam

    def ev(z):
        zz = mp.mpmathify(z)
        a = principal_power(1 + zz, lam)
        b = principal_power(1 - zz, lam)
        return (a - b) / (a + b)

    def taylor(order: int) -> PowerSeries:
        plus = series_binomial(lam, order)
        minus = series_negate_arg(plus)
        num = series_add(plus, series_scale(minus, -1))
        den = series_add(plus, minus)
        return series_arith(num, den, "div")

    return DiscMap(ev, taylor, (mpf(1), mpf(-1)), False, f"lens({mp.nstr(lam, 6)})")


def dilation_map(r) -> DiscMap:
    """The map z -> r z for 0 < r <= 1; r = 1 is the identity.

    The identity touches the boundary everywhere (no isolated contacts), so
    ``contact_points`` is empty for every r; contact-window machinery does
    not apply to these maps.
    """
    rr = mp.mpmathify(r)
    if not (0 < rr <= 1):
        raise ValueError("dilation factor must lie in (0, 1]")

    def taylor(order: int) -> PowerSeries:
        return PowerSeries.make([0, rr], order)

    return DiscMap(lambda z: rr * mp.mpmathify(z), taylor, (), rr < 1,
                   f"dilation({mp.nstr(rr, 6)})")


def boundary_curve(phi: DiscMap, t) -> object:
    """gamma(t) = phi(e^{it}), the boundary image curve."""
    return phi.eval(mp.expjpi(mp.mpmathify(t) / mp.pi))


# ---------------------------------------------------------------------------
# Weights


def _lens_exponent_sum(z, lam):
    # g = (1+z)/(1-z); returns g^lam + g^(-lam); infinite at z = +-1
    g = (1 + z) / (1 - z)
    return principal_power(g, lam) + principal_power(g, -lam)


def _lens_weight_eval(lam):
    def ev(z):
        zz = mp.mpmathify(z)
        if zz == 1 or zz == -1:
            warnings.warn(
                f"weight evaluated at singular boundary point {zz}; "
                "returning continuous extension 0",
                EvaluationAtSingularity,
                stacklevel=2,
            )
            return mpf(0)
        return mp.exp(-_lens_exponent_sum(zz, lam))

    return ev


def _lens_weight_taylor(lam):
    def taylor(order: int) -> PowerSeries:
        # g^lam = (1+z)^lam * (1-z)^(-lam), assembled from binomials
        g_pos = series_arith(series_binomial(lam, order),
                             series_negate_arg(series_binomial(-lam, order)), "mul")
        g_neg = series_arith(series_binomial(-lam, order),
                             series_negate_arg(series_binomial(lam, order)), "mul")
        return series_exp(series_scale(series_add(g_pos, g_neg), -1))

    return taylor


def lens_weight(params: LensParams):
    """The double-exponential lens weights (w0, w).

    w0(z) = exp(-g(z)^lam - g(z)^(-lam)) with g = (1+z)/(1-z); the composed
    weight w = w0 o phi_lam collapses to the same closed form with exponent
    lam**2, because g o phi_lam = g^lam.  Both are bounded by 1.
    """
    lam = params.lam
    w0 = DiscWeight(_lens_weight_eval(lam), _lens_weight_taylor(lam), mpf(1),
                    f"lens_w0({mp.nstr(lam, 6)})")
    lam2 = lam * lam
    w = DiscWeight(_lens_weight_eval(lam2), _lens_weight_taylor(lam2), mpf(1),
                   f"lens_w({mp.nstr(lam, 6)})")
    return w0, w


def halfplane_symbol_weight(alpha):
    """The half-plane-type pair phi(z) = (1+z)/2, w(z) = (1-z)^alpha.

    The single boundary contact is at z = 1, where the weight vanishes to
    order alpha; the interplay of the two rates drives the power-law decay.
    """
    a = mp.mpmathify(alpha)
    if not a > 0:
        raise ValueError("alpha must be positive")

    def phi_ev(z):
        return (1 + mp.mpmathify(z)) / 2

    def phi_taylor(order: int) -> PowerSeries:
        return PowerSeries.make([mpf(1) / 2, mpf(1) / 2], order)

    phi = DiscMap(phi_ev, phi_taylor, (mpf(1),), False, "halfplane")

    def w_ev(z):
        return principal_power(1 - mp.mpmathify(z), a)

    def w_taylor(order: int) -> PowerSeries:
        return series_negate_arg(series_binomial(a, order))

    w = DiscWeight(w_ev, w_taylor, mpf(2) ** a, f"onemz^{mp.nstr(a, 6)}")
    return phi, w


def halfplane_base_weight(alpha) -> DiscWeight:
    """The outer factor w0(z) = 2^alpha (1-z)^alpha with w = w0 o phi.

    This is the weight the contact-window bound consumes for the half-plane
    pair; pulling the symbol out leaves the plain vanishing factor at +1.
    """
    a = mp.mpmathify(alpha)

    # the 2**a scale is recomputed per call so evaluations stay accurate at
    # whatever precision is active, not the construction-time one
    def ev(z):
        return mpf(2) ** a * principal_power(1 - mp.mpmathify(z), a)

    def taylor(order: int) -> PowerSeries:
        return series_scale(series_negate_arg(series_binomial(a, order)), mpf(2) ** a)

    return DiscWeight(ev, taylor, mpf(4) ** a, f"hp_w0({mp.nstr(a, 6)})")


def constant_weight(c) -> DiscWeight:
    cc = mp.mpmathify(c)

    def taylor(order: int) -> PowerSeries:
        return PowerSeries.make([cc], order)

    return DiscWeight(lambda z: cc, taylor, abs(cc), f"const({mp.nstr(cc, 6)})")


def series_weight(coeffs, sup_norm=None, name: str = "poly") -> DiscWeight:
    """Weight given by a polynomial; sup norm sampled on the boundary if absent."""
    cs = PowerSeries.make(coeffs)

    def ev(z):
        return series_eval(cs, z)

    def taylor(order: int) -> PowerSeries:
        return PowerSeries.make(cs.coeffs, order)

    if sup_norm is None:
        sup_norm = max(abs(ev(mp.expjpi(mpf(2 * k) / 256))) for k in range(256))
        sup_norm *= 1 + mpf(2) ** -20  # sampled, keep a sliver of headroom
    return DiscWeight(ev, taylor, mp.mpmathify(sup_norm), name)


def compose_weight(w: DiscWeight, b: DiscWeight, phi: DiscMap,
                   name: str = "") -> DiscWeight:
    """The product weight z -> w(z) * b(phi(z)).

    Used to restrict an operator to the range of a Blaschke product: the
    composed factor has modulus at most one, so sup norms multiply.
    """

    def ev(z):
        zz = mp.mpmathify(z)
        return w.eval(zz) * b.eval(phi.eval(zz))

    def taylor(order: int) -> PowerSeries:
        wt = w.taylor(order)
        bt = b.taylor(order)
        pt = phi.taylor(order)
        if pt.coeffs[0] != 0:
            raise ValueError("series composition requires phi(0) = 0")
        # Horner composition of the outer series along the inner map
        acc = PowerSeries.make([bt.coeffs[-1]], order)
        for c in reversed(bt.coeffs[:-1]):
            acc = series_arith(acc, pt, "mul")
            acc = series_add(acc, PowerSeries.make([c], order))
        return series_arith(wt, acc, "mul")

    return DiscWeight(ev, taylor, w.sup_norm * b.sup_norm,
                      name or f"{w.name}*({b.name}o{phi.name})")


# ---------------------------------------------------------------------------
# Boundary minorants and contact-window suprema


def _contact_parameters(phi: DiscMap) -> list:
    """arg of each contact point, i.e. the t with gamma(t) touching the circle."""
    return [mp.arg(xi) for xi in phi.contact_points]


def power_minorant(phi: DiscMap, exponent, grid_size: int = 1024,
                   safety: float = 0.9) -> MinorantOmega:
    """Certify 1 - |gamma(t)| >= c * t**exponent on (0, pi/2].

    The constant is a dyadically refined grid minimum times a safety margin,
    then re-validated on an independent grid twice as fine; a violation there
    raises MinorantFailure.  The scan runs in distance to the contact at
    t = 0; maps with a second contact are expected to be symmetric (checked
    by the callers' test batteries, not here).
    """
    if grid_size < 1024:
        raise ValueError("grid_size must be at least 1024")
    ex = mp.mpmathify(exponent)

    def ratio(t):
        return (1 - abs(boundary_curve(phi, t))) / t**ex

    # dyadic refinement: geometric sweep over ~30 octaves plus a linear tail
    def scan(npts, offset):
        best = mp.inf
        tmax = mp.pi / 2
        for k in range(npts):
            u = (mpf(k) + offset) / npts
            t = tmax * mpf(2) ** (-30 * (1 - u))
            r = ratio(t)
            if r < best:
                best = r
        return best

    # 1 - |gamma| cancels ~2 ex octaves of precision at the scan floor,
    # so certify well above the ambient context
    with mp.workprec(max(mp.prec, 192)):
        c = scan(grid_size, mpf(1)) * mp.mpmathify(safety)
        omega = MinorantOmega(c, ex)
        fine = scan(2 * grid_size, mpf("0.5"))
        if fine < c:
            raise MinorantFailure(
                f"minorant c={mp.nstr(c, 8)} violated on validation grid "
                f"(observed {mp.nstr(fine, 8)})"
            )
    return omega


def lens_minorant(params: LensParams, grid_size: int = 1024) -> MinorantOmega:
    """Certified minorant 1 - |gamma(t)| >= c |t|**lam for the lens map."""
    return power_minorant(lens_map(params), params.lam, grid_size)


@lru_cache(maxsize=64)
def _contact_profile(w0: DiscWeight, phi: DiscMap, prec: int, npts: int):
    """Distance-indexed running maxima of |w0(gamma(.))| near each contact.

    Returns (s values ascending, tuple per contact of prefix maxima), all
    computed at precision ``prec``.  The grid is logarithmic from 1e-30 to
    pi, so window lookups snap up conservatively for any h of interest.
    """
    with mp.workprec(prec):
        tcs = _contact_parameters(phi)
        lo = mpf(10) ** -30
        hi = mp.pi
        svals = [lo * (hi / lo) ** (mpf(k) / (npts - 1)) for k in range(npts)]
        profiles = []
        with warnings.catch_warnings():
            # the widest windows wrap onto the opposite singular point, where
            # the continuous extension 0 cannot affect a supremum
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            for tc in tcs:
                run = mpf(0)
                prefix = []
                for s in svals:
                    for t in (tc + s, tc - s):
                        v = abs(w0.eval(mp.expjpi(t / mp.pi)))
                        if v > run:
                            run = v
                    prefix.append(run)
                profiles.append(tuple(prefix))
        return tuple(svals), tuple(profiles)


def delta_w0(w0: DiscWeight, omega: MinorantOmega, phi: DiscMap, h) -> mpf:
    """sup of |w0(gamma(t))| over the contact windows |t - t_c| <= omega^{-1}(h).

    Grid supremum with cumulative maximization, hence monotone nondecreasing
    in h by construction.  Windows wider than the certified region fall back
    to the full half-circle, which only enlarges the bound.
    """
    hh = mp.mpmathify(h)
    if not (0 < hh <= 1):
        raise ValueError("h must lie in (0, 1]")
    if not phi.contact_points:
        return mpf(0)
    r = omega.inverse(hh)
    svals, profiles = _contact_profile(w0, phi, mp.prec, 4096)
    # first grid point >= r (snap up; beyond the last point use the full range)
    lo, hi = 0, len(svals)
    while lo < hi:
        mid = (lo + hi) // 2
        if svals[mid] >= r:
            hi = mid
        else:
            lo = mid + 1
    idx = min(lo, len(svals) - 1)
    return max(p[idx] for p in profiles)


# ---------------------------------------------------------------------------
# Blaschke products


def blaschke_spec(params: LensParams, n_rep: int) -> BlaschkeSpec:
    """Zero ladder for the lens at dyadic boundary parameters.

    Places floor(log N) zeros at gamma(t_k), t_k = (pi/2) 2^{-(k-1)/lam};
    natural logarithm throughout (the surrounding constants absorb the base).
    """
    if n_rep < 2:
        raise ValueError("repetition exponent N must be at least 2")
    lam = params.lam
    phi = lens_map(params)
    kmax = int(mp.floor(mp.log(n_rep)))
    zeros = []
    for k in range(1, kmax + 1):
        t_k = (mp.pi / 2) * mpf(2) ** (-mpf(k - 1) / lam)
        zeros.append(boundary_curve(phi, t_k))
    return BlaschkeSpec(lam, n_rep, tuple(zeros), 4 * n_rep * kmax)


def _quadruple_eval(z, p):
    pc = mp.conj(p)
    return ((z - p) * (z - pc)) / ((1 - pc * z) * (1 - p * z))


def _quadruple_series(p, order: int) -> PowerSeries:
    pc = mp.conj(p)
    num = PowerSeries.make([p * pc, -(p + pc), 1], order)
    den = PowerSeries.make([1, -(p + pc), p * pc], order)
    return series_arith(num, den, "div")


def blaschke(spec: BlaschkeSpec) -> DiscWeight:
    """The finite Blaschke product with the ladder zeros and their mirrors.

    B = B1 * B(-z) where B1 runs over the conjugate pairs at the +1 contact,
    each repeated N times; unimodular on the circle, degree 4*N*floor(log N).
    """

    def half_eval(z):
        acc = mp.mpf(1)
        for p in spec.zeros:
            acc *= _quadruple_eval(z, p)
        return acc**spec.N

    def ev(z):
        zz = mp.mpmathify(z)
        return half_eval(zz) * half_eval(-zz)

    def taylor(order: int) -> PowerSeries:
        acc = PowerSeries.make([1], order)
        for p in spec.zeros:
            acc = series_arith(acc, _quadruple_series(p, order), "mul")
        acc = series_arith(acc, spec.N, "int_pow")
        return series_arith(acc, series_negate_arg(acc), "mul")

    return DiscWeight(ev, taylor, mpf(1), f"blaschke(N={spec.N})")
