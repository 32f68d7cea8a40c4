"""Hardy spaces of a horizontal strip and certified restriction operators.

The strip S_{-b,b} = {|Im z| < b} carries the Hardy space whose squared
norm is the mean of the two boundary-line L2 masses, (1/2pi)(||f_{-b}||^2
+ ||f_b||^2).  The conformal map tau(z) = (4b/pi) atanh(z) identifies it
with H2 of the disc through the unitary V f = sqrt(tau') (f o tau), and
the dilated restriction R_{w,lam} f = w * f|_{lam S} transfers under V to
a weighted composition operator whose symbol is the lens map of exponent
lam and whose weight picks up the half-order Jacobian factor

    m_lam(z) = ((1 - phi_lam(z)^2) / (1 - z^2))^(1/2).

Everything downstream (truncation, tail certification, singular values)
is then delegated to the disc-side machinery; this module owns the strip
geometry, the boundary-line quadrature that verifies the transfer
independently, and the degenerate lam = 0 case, where the restriction to
the central line becomes a Carleson embedding over the disc diameter and
its Gram matrix is a Hankel matrix of weighted moments.

Two independent routes exist wherever feasible: matrix entries can be
assembled on the disc (Taylor coefficients of the transferred weight) or
on the strip (boundary-line inner products), and Hilbert-Schmidt norms
can be summed column by column or read off a closed form.  Route
disagreement raises instead of averaging.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from mpmath import mp, mpf
from mpmath.calculus.quadrature import GaussLegendre

from .disc_symbols import (
    DiscWeight,
    EvaluationAtSingularity,
    LensParams,
    lens_map,
    principal_power,
)
from .numerics import (
    DenseMatrix,
    NotPositiveDefinite,
    PrecisionContext,
    hermitian_geneig,
    segment_quadrature,
)
from .operator_core import (
    DIVERGENT,
    ApproxNumbers,
    AssemblyMismatch,
    NonIntegrableTail,
    TruncatedOperator,
    hilbert_schmidt_norm,
    _col_norms,
    _quadrature_columns,
    _tail_integral,
)

__all__ = [
    "OutOfDomain",
    "TailTooFat",
    "RouteMismatch",
    "StripConfig",
    "StripFunction",
    "ModularWeightParams",
    "RestrictionSpec",
    "riemann_map",
    "riemann_map_inverse",
    "riemann_map_derivative",
    "strip_kernel",
    "modular_weight",
    "modular_weight_function",
    "strip_norm",
    "transfer_weight",
    "restriction_matrix",
    "restriction_hs_norm",
    "embedding_hankel",
    "carleson_diameter_box",
    "crossing_involution",
]


class OutOfDomain(ValueError):
    """Evaluation point outside the strip (or disc) the object lives on."""


class TailTooFat(ArithmeticError):
    """A line integral or column sum refuses to stabilize under the cutoff.

    Raised instead of returning a silently truncated value when the
    integrand has not decayed below the context's digit target by the
    largest admissible cutoff.
    """


class RouteMismatch(AssemblyMismatch):
    """Disc-side and strip-side assemblies disagree beyond tolerance."""


_CUTOFF_START = 8
_CUTOFF_CAP = 4096


@lru_cache(maxsize=8)
def _lens_for(lam):
    return lens_map(LensParams(lam))


# ---------------------------------------------------------------------------
# Geometry


@dataclass(frozen=True)
class StripConfig:
    """Horizontal strip of half-height ``b``.

    ``shifted`` selects the strip {0 < Im z < pi} instead of the symmetric
    {|Im z| < b}; all internal formulas work on the symmetric strip and
    shift by i pi/2, so ``shifted`` requires b = pi/2.
    """

    b: mpf
    shifted: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", mp.mpmathify(self.b))
        if not (mp.isfinite(self.b) and self.b > 0):
            raise ValueError("strip half-height must be positive and finite")
        if self.shifted and abs(self.b - mp.pi / 2) > mpf(2) ** -40:
            raise ValueError("the shifted strip is {0 < Im z < pi}; use b = pi/2")

    @property
    def center(self):
        return mp.mpc(0, mp.pi / 2) if self.shifted else mpf(0)


@dataclass(frozen=True)
class StripFunction:
    """A holomorphic function on a strip, carried as a bare evaluator.

    Norm and trace computations sample the decay along horizontal lines
    rather than demanding growth metadata up front; a function whose
    boundary traces fail to decay surfaces as ``TailTooFat`` at norm time.
    """

    eval: Callable
    config: StripConfig
    name: str = ""


def _require_in_strip(config: StripConfig, zeta, closed: bool = False):
    zeta = mp.mpmathify(zeta)
    y = (zeta - config.center).imag
    slack = mpf(2) ** -30 if closed else 0
    if abs(y) > config.b + slack or not mp.isfinite(abs(zeta)):
        raise OutOfDomain(f"point {mp.nstr(zeta, 8)} lies outside the strip")
    return zeta


def riemann_map(config: StripConfig, z):
    """Conformal map of the disc onto the strip with tau(0) = center.

    tau(z) = (4b/pi) atanh z, shifted up by i pi/2 for the {0, pi} strip;
    tau'(0) = 4b/pi and the boundary contacts are the diameter ends +-1.
    """
    z = mp.mpmathify(z)
    if abs(z) >= 1:
        raise OutOfDomain("riemann_map takes points of the open disc")
    return (4 * config.b / mp.pi) * mp.atanh(z) + config.center


def riemann_map_inverse(config: StripConfig, zeta):
    """Inverse map, tanh(pi (zeta - center) / (4b))."""
    zeta = _require_in_strip(config, zeta)
    if abs((zeta - config.center).imag) >= config.b:
        raise OutOfDomain("inverse map takes points of the open strip")
    return mp.tanh(mp.pi * (zeta - config.center) / (4 * config.b))


def riemann_map_derivative(config: StripConfig, z):
    z = mp.mpmathify(z)
    if abs(z) >= 1:
        raise OutOfDomain("riemann_map takes points of the open disc")
    return (4 * config.b / mp.pi) / (1 - z * z)


def strip_kernel(config: StripConfig, zeta, zeta2):
    """Reproducing kernel (pi/4b) / cosh(pi (conj(zeta) - zeta2) / (4b)).

    Diagonal values grow like 1/cos(pi y / (2b)) toward the boundary
    lines, the strip analogue of 1/(1 - |z|^2).  Points may sit on the
    closed strip; the kernel itself is finite there.
    """
    zeta = _require_in_strip(config, zeta, closed=True)
    zeta2 = _require_in_strip(config, zeta2, closed=True)
    u = mp.conj(zeta - config.center) - (zeta2 - config.center)
    return (mp.pi / (4 * config.b)) / mp.cosh(mp.pi * u / (4 * config.b))


# ---------------------------------------------------------------------------
# Weights


@dataclass(frozen=True)
class ModularWeightParams:
    """Parameters of the one-parameter boundary weight family.

    ``kind`` is "massive" (needs m > 0; double-exponential decay at both
    ends of every horizontal line) or one of the massless limits "0+",
    "0-" (m = 0; decay at one end only, tending to 1 at the other).  The
    sign constraints x_plus > 0 > x_minus make |w| <= 1 on the closed
    strip of half-height pi/2.
    """

    kind: str
    m: mpf
    x_plus: mpf
    x_minus: mpf

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", mp.mpmathify(self.m))
        object.__setattr__(self, "x_plus", mp.mpmathify(self.x_plus))
        object.__setattr__(self, "x_minus", mp.mpmathify(self.x_minus))
        if self.kind not in ("massive", "0+", "0-"):
            raise ValueError("kind must be massive, 0+ or 0-")
        if self.kind == "massive" and not self.m > 0:
            raise ValueError("massive weights need m > 0")
        if self.kind != "massive" and self.m != 0:
            raise ValueError("massless weights have m = 0")
        if not (self.x_plus > 0 and self.x_minus < 0):
            raise ValueError("need x_plus > 0 and x_minus < 0")


def modular_weight(params: ModularWeightParams, zeta):
    """Evaluate the weight on the symmetric strip {|Im z| <= pi/2}.

    massive: exp(m (-x_+ e^zeta + x_- e^-zeta)); the massless limits keep
    a single exponential, exp(-x_+ e^zeta) resp. exp(x_- e^-zeta).
    """
    zeta = mp.mpmathify(zeta)
    if abs(zeta.imag) > mp.pi / 2 + mpf(2) ** -30:
        raise OutOfDomain("modular weights live on {|Im z| <= pi/2}")
    if params.kind == "massive":
        return mp.exp(params.m * (-params.x_plus * mp.exp(zeta)
                                  + params.x_minus * mp.exp(-zeta)))
    if params.kind == "0+":
        return mp.exp(-params.x_plus * mp.exp(zeta))
    return mp.exp(params.x_minus * mp.exp(-zeta))


def modular_weight_function(params: ModularWeightParams,
                            config: StripConfig) -> StripFunction:
    """Package the weight as a StripFunction on ``config``.

    The closed-form expressions live on the symmetric pi/2-strip, so the
    configuration must have b = pi/2; a shifted configuration evaluates
    through the i pi/2 translation.
    """
    if abs(config.b - mp.pi / 2) > mpf(2) ** -40:
        raise ValueError("modular weights live on a strip of half-height pi/2")
    center = config.center

    def ev(zeta):
        return modular_weight(params, mp.mpmathify(zeta) - center)

    return StripFunction(ev, config, f"modular[{params.kind}]")


# ---------------------------------------------------------------------------
# Line norms


def _line_mass(f_eval, y, theta, ctx) -> mpf:
    """Plain L2 mass of theta -> f(theta + iy) over [-theta, theta]."""
    def integrand(t):
        return abs(f_eval(mp.mpc(t, y))) ** 2

    return segment_quadrature(integrand, [-theta, 0, theta], ctx).value


def _decay_cutoff(f_eval, heights, ctx) -> mpf:
    """Smallest doubling cutoff with every |f|^2 end sample below target.

    The target is relative to the largest magnitude seen along the probe
    grid, so a uniformly tiny function does not force a huge cutoff.
    """
    target = mpf(10) ** -(ctx.precision_bits // 4)
    probes = [mp.mpc(t, y) for y in heights for t in (0, 1, -1, 3, -3)]
    peak = max([abs(f_eval(p)) for p in probes] + [mpf(0)])
    if peak == 0:
        return mpf(_CUTOFF_START)
    theta = mpf(_CUTOFF_START)
    while theta <= _CUTOFF_CAP:
        ends = max(abs(f_eval(mp.mpc(s * theta, y)))
                   for y in heights for s in (1, -1))
        if ends ** 2 <= target * peak ** 2:
            return theta
        theta *= 2
    raise TailTooFat("boundary trace has not decayed by theta = "
                     f"{_CUTOFF_CAP}; the line integrals would be truncated")


def strip_norm(f: StripFunction, ctx: PrecisionContext = None,
               interior_checks: bool = True):
    """Hardy norm and boundary sup-style norm of a strip function.

    Returns ``(hilbert, banach)`` where hilbert^2 = (1/2pi)(bottom + top)
    boundary-line masses and banach is the larger of the two plain line
    L2 norms.  The two are equivalent with explicit constants: 1/sqrt(2pi)
    banach <= hilbert <= 1/sqrt(pi) banach.

    With ``interior_checks`` the mass along three interior lines is tested
    against the log-convex interpolation of the boundary masses, which any
    genuine H2 function satisfies; a violation means the evaluator does
    not extend holomorphically and is reported as a ValueError.
    """
    if ctx is None:
        ctx = PrecisionContext()
    cfg = f.config
    with ctx.workprec():
        c0 = cfg.center
        heights = [(c0 - mp.mpc(0, cfg.b)).imag, (c0 + mp.mpc(0, cfg.b)).imag]
        theta = _decay_cutoff(f.eval, heights, ctx)
        bottom = _line_mass(f.eval, heights[0], theta, ctx)
        top = _line_mass(f.eval, heights[1], theta, ctx)
        hilbert = mp.sqrt((bottom + top) / (2 * mp.pi))
        banach = mp.sqrt(max(bottom, top))
        if interior_checks and bottom > 0 and top > 0:
            slack = 1 + mpf(10) ** -max(6, ctx.precision_bits // 16)
            for frac in (mpf(1) / 4, mpf(1) / 2, mpf(3) / 4):
                y = heights[0] * (1 - frac) + heights[1] * frac
                mass = _line_mass(f.eval, y, theta, ctx)
                bound = bottom ** (1 - frac) * top ** frac
                if mass > bound * slack:
                    raise ValueError(
                        "interior line mass exceeds the log-convex bound at "
                        f"height {mp.nstr(y, 6)}; not a Hardy-class evaluator")
        return hilbert, banach


# ---------------------------------------------------------------------------
# Restriction operators


@dataclass(frozen=True)
class RestrictionSpec:
    """Weighted restriction R_{w,lam} f = w * (f restricted to lam S).

    ``lam`` in [0, 1); boundedness of the weight on the closed dilated
    strip is sampled at construction, not assumed.  Only symmetric
    configurations are supported here; shifted ones exist for the weight
    bookkeeping and the crossing symmetry.
    """

    config: StripConfig
    w: StripFunction
    lam: mpf

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", mp.mpmathify(self.lam))
        if self.config.shifted:
            raise ValueError("restriction operators use the symmetric strip")
        if not (0 <= self.lam < 1):
            raise ValueError("lambda must lie in [0, 1)")
        if self.w.config != self.config:
            raise ValueError("weight and restriction live on different strips")
        yb = self.lam * self.config.b
        for t in range(-12, 13):
            for y in (-yb, mpf(0), yb):
                v = abs(self.w.eval(mp.mpc(2 * t, y)))
                if not (mp.isfinite(v) and v < mpf(10) ** 30):
                    raise ValueError("weight must stay bounded on the closed "
                                     "dilated strip (sampled)")


def transfer_weight(spec: RestrictionSpec, z):
    """Disc-side weight of the transferred operator, sqrt(lam) m_lam w(lam tau).

    Under the Hardy-space unitaries the restriction becomes M_w C_phi with
    phi the lens map of exponent lam and this weight; m_lam is the
    half-order Jacobian ((1 - phi^2)/(1 - z^2))^(1/2), which obeys
    |m_lam| <= 2 |1 - z^2|^((lam-1)/2) on the disc.
    """
    if not 0 < spec.lam < 1:
        raise ValueError("the transfer needs 0 < lambda < 1; lambda = 0 is "
                         "the diameter embedding")
    z = mp.mpmathify(z)
    if abs(z) > 1 + mpf(2) ** -30:
        raise OutOfDomain("transfer weight lives on the closed disc")
    if z == 1 or z == -1:
        warnings.warn("transfer weight evaluated at a boundary contact; "
                      "returning 0", EvaluationAtSingularity, stacklevel=2)
        return mpf(0)
    # the circle maps onto the dilated strip's boundary lines, so the
    # closed disc stays inside the weight's domain
    phi = _lens_for(spec.lam).eval(z)
    m = principal_power((1 - phi * phi) / (1 - z * z), mpf(1) / 2)
    zeta = spec.lam * (4 * spec.config.b / mp.pi) * mp.atanh(z)
    return mp.sqrt(spec.lam) * m * spec.w.eval(zeta)


@dataclass(frozen=True)
class _SymbolPair:
    # duck-typed stand-in for WeightedCompositionSpec in the column
    # extraction helpers; those touch only .phi and .w, and the transfer
    # weight may have sup_norm = inf, which the public spec type rejects
    phi: object
    w: object


def _disc_pair(spec: RestrictionSpec) -> _SymbolPair:
    def _no_series(order):
        raise NotImplementedError("transferred weights have no closed series")

    weight = DiscWeight(lambda z: transfer_weight(spec, z), _no_series,
                        mp.inf, "transfer")
    return _SymbolPair(_lens_for(spec.lam), weight)


def _strip_route(spec: RestrictionSpec, n: int, ctx: PrecisionContext):
    """Matrix entries as boundary-line inner products on the dilated strip.

    Entry (j, k) is the H2(lam S) pairing of w times the pulled-back disc
    monomial e_k against the lam S monomial frame e_j; all entries share
    one Gauss-Legendre grid per boundary line, and the whole assembly is
    repeated at the next quadrature degree as a convergence check.
    """
    b = spec.config.b
    lam = spec.lam
    yb = lam * b
    c_out = mp.pi / (4 * yb)      # frame on the dilated strip
    c_in = mp.pi / (4 * b)        # pulled-back monomials of the big strip

    def envelope(theta):
        z = mp.mpc(theta, yb)
        return (abs(spec.w.eval(z)) * mp.sqrt(c_out * c_in)
                / (abs(mp.cosh(c_out * z)) * abs(mp.cosh(c_in * z))))

    target = mpf(10) ** -(ctx.precision_bits // 3)
    peak = max(envelope(0), envelope(1), envelope(-1))
    theta = mpf(_CUTOFF_START)
    while theta <= _CUTOFF_CAP:
        if max(envelope(theta), envelope(-theta)) <= target * (1 + peak):
            break
        theta *= 2
    else:
        raise TailTooFat("strip-route integrand has not decayed by the cutoff cap")

    gl = GaussLegendre(mp)
    panels = max(8, int(theta / 4) + 1)
    edges = [-theta + 2 * theta * mpf(p) / panels for p in range(panels + 1)]

    def assemble_at(degree):
        base_nodes = gl.calc_nodes(degree, mp.prec)
        gram = [[mpf(0)] * n for _ in range(n)]
        norms = [mpf(0)] * n
        for sign in (1, -1):
            for p in range(panels):
                mid = (edges[p] + edges[p + 1]) / 2
                half = (edges[p + 1] - edges[p]) / 2
                for x, wq in base_nodes:
                    zeta = mp.mpc(mid + half * x, sign * yb)
                    frame = mp.sqrt(c_out) / mp.cosh(c_out * zeta)
                    u = mp.tanh(c_out * zeta)
                    pull = mp.sqrt(c_in) / mp.cosh(c_in * zeta)
                    v = mp.tanh(c_in * zeta)
                    wv = spec.w.eval(zeta)
                    core = wq * half * mp.conj(frame) * wv * pull
                    uj = [mp.mpc(1)]
                    vk = [mp.mpc(1)]
                    for i in range(1, n):
                        uj.append(uj[-1] * mp.conj(u))
                        vk.append(vk[-1] * v)
                    colbase = wq * half * abs(wv * pull) ** 2
                    vv = abs(v) ** 2
                    vpow = mpf(1)
                    for k in range(n):
                        ck = core * vk[k]
                        for j in range(n):
                            gram[j][k] += ck * uj[j]
                        norms[k] += colbase * vpow
                        vpow *= vv
        scale = 1 / (2 * mp.pi)
        return ([[x * scale for x in row] for row in gram],
                [x * scale for x in norms])

    # one-sided weights oscillate at frequency e^theta near the cutoff, so
    # the degree pair escalates until consecutive levels agree
    tol = mpf(10) ** -(ctx.precision_bits // 6)
    lo, _ = assemble_at(6)
    for degree in range(7, 11):
        hi, hi_norms = assemble_at(degree)
        ref = max(max(abs(x) for x in row) for row in hi)
        if all(abs(hi[j][k] - lo[j][k]) <= tol * (1 + ref)
               for j in range(n) for k in range(n)):
            return hi, hi_norms
        lo = hi
    raise AssemblyMismatch("line quadrature has not converged by degree 10")


_ENTRY_REL_BITS = 8  # route agreement threshold, 10^-(bits/8), as rel. error


def restriction_matrix(spec: RestrictionSpec, n: int, route: str = "disc",
                       ctx: PrecisionContext = None) -> TruncatedOperator:
    """Truncated matrix of the transferred restriction operator.

    ``route`` picks the assembly: "disc" extracts Taylor coefficients of
    the transferred weight times lens-map powers and certifies tails by
    boundary integrals; "strip" pairs boundary-line quadratures on the
    dilated strip (entries only; no useful operator tail, reported as
    infinite); "both" runs the two and demands entrywise agreement to
    10^-(bits/8) relative, raising RouteMismatch otherwise.

    A weight without decay (w = 1 included) leaves |transfer weight|
    non-integrable against the lens tail, in which case the disc route
    reports op_tail = inf with ``crude_tail`` set; the finite matrix and
    its column data are still exact.
    """
    if ctx is None:
        ctx = PrecisionContext()
    if route not in ("disc", "strip", "both"):
        raise ValueError("route must be disc, strip, or both")
    if n < 1:
        raise ValueError("truncation order must be positive")
    if not spec.lam > 0:
        raise ValueError("matrix assembly needs lambda > 0; lambda = 0 is "
                         "handled by embedding_hankel")
    with ctx.workprec():
        disc_op = None
        if route in ("disc", "both"):
            pair = _disc_pair(spec)
            cols = _quadrature_columns(pair, n, ctx)
            col_norms = _col_norms(pair, n, ctx)
            bessel_tol = mpf(10) ** -(ctx.precision_bits // 4)
            col_tail = []
            for k in range(n):
                tail = col_norms[k] - mp.fsum(abs(x) ** 2 for x in cols[k])
                if tail < -bessel_tol * (1 + col_norms[k]):
                    raise AssemblyMismatch(
                        f"column {k} violates the Bessel inequality")
                col_tail.append(tail)
            try:
                mass = _tail_integral(pair, n, ctx)
                op_tail = (mp.sqrt(mp.fsum(max(t, mpf(0)) for t in col_tail))
                           + mp.sqrt(mass))
                crude = False
            except NonIntegrableTail:
                op_tail = mp.inf
                crude = True
            matrix = DenseMatrix([[cols[k][j] for k in range(n)]
                                  for j in range(n)])
            disc_op = TruncatedOperator(n, matrix, tuple(col_norms),
                                        tuple(col_tail), op_tail, crude)
            if route == "disc":
                return disc_op
        entries, line_norms = _strip_route(spec, n, ctx)
        if route == "strip":
            tails = []
            for k in range(n):
                tail = line_norms[k] - mp.fsum(abs(entries[j][k]) ** 2
                                               for j in range(n))
                tails.append(max(tail, mpf(0)))
            return TruncatedOperator(n, DenseMatrix(entries),
                                     tuple(line_norms), tuple(tails),
                                     mp.inf, True)
        tol = mpf(10) ** -(ctx.precision_bits // _ENTRY_REL_BITS)
        ref = max(max(abs(x) for x in row) for row in entries)
        dm = disc_op.m
        for j in range(n):
            for k in range(n):
                if abs(dm.entries[j][k] - entries[j][k]) > tol * (1 + ref):
                    raise RouteMismatch(
                        f"disc and strip assemblies disagree at ({j},{k}): "
                        f"{mp.nstr(dm.entries[j][k], 8)} vs "
                        f"{mp.nstr(entries[j][k], 8)}")
        return disc_op


def _line_weight_mass(spec: RestrictionSpec, ctx: PrecisionContext) -> mpf:
    """(1/2pi) * plain L2 mass of the weight along the central line."""
    def on_line(t):
        return abs(spec.w.eval(mp.mpc(t, 0))) ** 2

    target = mpf(10) ** -(ctx.precision_bits // 4)
    peak = max(on_line(0), on_line(1), on_line(-1))
    theta = mpf(_CUTOFF_START)
    while theta <= _CUTOFF_CAP:
        if max(on_line(theta), on_line(-theta)) <= target * (1 + peak):
            break
        theta *= 2
    else:
        raise TailTooFat("central-line weight mass does not stabilize")
    return segment_quadrature(on_line, [-theta, 0, theta], ctx).value / (2 * mp.pi)


def restriction_hs_norm(spec: RestrictionSpec, ctx: PrecisionContext = None):
    """Hilbert-Schmidt norm two ways: disc-side integral against closed form.

    The closed form is sqrt(pi / (4 b cos(pi lam / 2))) times the Hardy
    norm of the weight on the dilated strip (for lam = 0, the central-line
    L2 norm over 2pi).  The direct route sums squared column norms of the
    transferred operator through the geometric-series boundary integral on
    the circle (on the diameter for lam = 0); the two computations share
    nothing past the weight evaluator.  A weight without H2 decay makes
    both sides infinite and raises TailTooFat.  Returns ``(direct,
    formula)``.
    """
    if ctx is None:
        ctx = PrecisionContext()
    with ctx.workprec():
        b = spec.config.b
        if spec.lam == 0:
            formula = mp.sqrt(mp.pi / (4 * b)) * mp.sqrt(_line_weight_mass(spec, ctx))
            edge = 1 - mpf(2) ** -20
            if max(_diameter_density(spec, edge),
                   _diameter_density(spec, -edge)) > mpf(2) ** -(ctx.precision_bits // 8):
                raise TailTooFat("weight does not decay along the diameter; "
                                 "the embedding is not Hilbert-Schmidt")

            def integrand(x):
                return _diameter_density(spec, x) / (1 - x * x)

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", EvaluationAtSingularity)
                q = segment_quadrature(integrand, [-1, 0, 1], ctx)
            return mp.sqrt(q.value / (2 * mp.pi)), formula
        wlam = StripFunction(spec.w.eval, StripConfig(spec.lam * b))
        hil, _ = strip_norm(wlam, ctx, interior_checks=False)
        formula = mp.sqrt(mp.pi / (4 * b * mp.cos(mp.pi * spec.lam / 2))) * hil
        value, _partials = hilbert_schmidt_norm(_disc_pair(spec), ctx)
        if value is DIVERGENT:
            raise TailTooFat("transferred operator is not Hilbert-Schmidt")
        return mp.sqrt(value), formula


# ---------------------------------------------------------------------------
# The central-line case lam = 0


def _diameter_density(spec: RestrictionSpec, x):
    # |w(tau(x))|^2 on the diameter; tolerant of the ends, where atanh
    # overflows to +-inf and a decaying weight underflows cleanly to 0
    zeta = (4 * spec.config.b / mp.pi) * mp.atanh(x)
    return abs(spec.w.eval(zeta)) ** 2


def _diameter_moment(spec: RestrictionSpec, s: int, ctx: PrecisionContext) -> mpf:
    def integrand(x):
        return x ** s * _diameter_density(spec, x)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EvaluationAtSingularity)
        q = segment_quadrature(integrand, [-1, 0, 1], ctx)
    return q.value / (2 * mp.pi)


def embedding_hankel(spec: RestrictionSpec, n: int,
                     ctx: PrecisionContext = None) -> ApproxNumbers:
    """Singular values of the central-line restriction via moment matrices.

    At lam = 0 the transferred operator is the Carleson embedding of H2
    into L2 of the diameter with density |w(tau(x))|^2 / 2pi, whose Gram
    on monomials is the Hankel matrix of weighted moments.  Eigenvalues of
    the order-n section give lower singular-value approximations; when the
    weight decays at both diameter ends the lost mass is a convergent
    integral and sqrt of it certifies a two-sided radius, otherwise the
    operator fails to be Hilbert-Schmidt and the values are reported
    uncertified (radius = inf), which is exactly the non-compact regime.
    """
    if ctx is None:
        ctx = PrecisionContext()
    if spec.lam != 0:
        raise ValueError("the Hankel route is the lambda = 0 case")
    if n < 1:
        raise ValueError("order must be positive")
    with ctx.workprec():
        moments = [_diameter_moment(spec, s, ctx) for s in range(2 * n - 1)]
        gram = [[moments[j + k] for k in range(n)] for j in range(n)]
        eye = [[mpf(1) if i == j else mpf(0) for j in range(n)] for i in range(n)]
        evs = hermitian_geneig(DenseMatrix(gram, hermitian=True),
                               DenseMatrix(eye, hermitian=True), ctx)
        trace = mp.fsum(moments[2 * j] for j in range(n))
        floor = -mpf(10) ** -(ctx.precision_bits // 4) * (1 + trace)
        vals = []
        for ev in evs:
            if ev < floor:
                raise NotPositiveDefinite(
                    "moment matrix lost positivity beyond roundoff: "
                    f"eigenvalue {mp.nstr(ev, 8)}")
            vals.append(mp.sqrt(max(ev, mpf(0))))
        vals.reverse()
        edge = 1 - mpf(2) ** -20
        decay = max(_diameter_density(spec, edge), _diameter_density(spec, -edge))
        if decay > mpf(2) ** -(ctx.precision_bits // 8):
            return ApproxNumbers(tuple(vals), mp.inf, n, certified=False)

        def tail(x):
            return x ** (2 * n) * _diameter_density(spec, x) / (1 - x * x)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            lost = segment_quadrature(tail, [-1, 0, 1], ctx).value / (2 * mp.pi)
        return ApproxNumbers(tuple(vals), mp.sqrt(max(lost, mpf(0))), n)


def carleson_diameter_box(spec: RestrictionSpec, xi, h,
                          ctx: PrecisionContext = None) -> mpf:
    """Mass the diameter measure gives the box {|z - xi| <= h}, |xi| = 1.

    The lam = 0 operator is the embedding against |w(tau(x))|^2 dx / 2pi
    on (-1, 1), so a box centered off the real axis only charges once h
    reaches the anchor's height, and every box obeys the Carleson bound
    sup|w_1|^2 h up to the measure normalization.
    """
    if ctx is None:
        ctx = PrecisionContext()
    if spec.lam != 0:
        raise ValueError("the diameter measure is the lambda = 0 case")
    with ctx.workprec():
        xi = mp.mpmathify(xi)
        h = mp.mpmathify(h)
        if not 0 < h <= 2:
            raise ValueError("box size must lie in (0, 2]")
        if abs(abs(xi) - 1) > mpf(10) ** -6:
            raise ValueError("boxes are anchored on the unit circle")
        xi /= abs(xi)
        reach = h * h - xi.imag ** 2
        if reach <= 0:
            return mpf(0)
        half = mp.sqrt(reach)
        lo = max(xi.real - half, mpf(-1))
        hi = min(xi.real + half, mpf(1))
        if lo >= hi:
            return mpf(0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EvaluationAtSingularity)
            q = segment_quadrature(lambda x: _diameter_density(spec, x),
                                   [lo, hi], ctx)
        return q.value / (2 * mp.pi)


# ---------------------------------------------------------------------------
# Crossing symmetry


def crossing_involution(psi: StripFunction) -> StripFunction:
    """The antiunitary (S psi)(zeta) = conj(psi(i pi + conj(zeta))).

    Defined on the shifted strip {0 < Im z < pi}, where zeta -> i pi +
    conj(zeta) swaps the two boundary lines; S is an isometric involution
    and functions symmetric about the central line Im z = pi/2 are its
    fixed points.
    """
    if not psi.config.shifted:
        raise ValueError("the crossing involution lives on the shifted strip")

    def ev(zeta):
        zeta = mp.mpmathify(zeta)
        return mp.conj(psi.eval(mp.mpc(0, mp.pi) + mp.conj(zeta)))

    return StripFunction(ev, psi.config, f"S[{psi.name}]" if psi.name else "S")
