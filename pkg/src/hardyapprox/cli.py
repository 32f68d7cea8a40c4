"""Command-line front end over the library.

Five subcommands share one flag set:

* ``spectrum``: approximation numbers of a chosen operator, one row per
  index, with the certification radius and truncation order used.
* ``bounds``: per-index lower bounds from interior-point pencils, the
  minorant-tradeoff upper bound, and the Blaschke-subspace upper bound
  at its matching indices.
* ``fit``: decay-law classification of a computed spectrum.
* ``strip``: internal consistency report for a restriction operator on
  a symmetric strip (route agreement, Hilbert-Schmidt identities).
* ``verify``: run the acceptance checks, one named suite or all.

Output is a table written as CSV or JSON (same field names, same decimal
strings) to ``--out`` or stdout.  Numeric fields carry
``precision_bits // 3`` significant digits, so a run is reproducible byte
for byte given the same configuration, precision and seed.  Every flag can
also be supplied through ``--config FILE`` as ``key=value`` lines; explicit
flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass

from mpmath import mp

from . import acceptance
from .bounds import (BernsteinConfig, InsufficientCertification,
                     bernstein_lower, fit_decay, gelfand_upper_blaschke,
                     tradeoff_upper)
from .disc_symbols import (DiscMap, LensParams, MinorantFailure,
                           blaschke_spec, constant_weight,
                           halfplane_base_weight, halfplane_symbol_weight,
                           lens_map, lens_minorant, lens_weight,
                           power_minorant, series_weight)
from .numerics import PowerSeries, PrecisionContext, jacobi_svd
from .operator_core import (ApproxNumbers, CertificationFailed,
                            WeightedCompositionSpec, approx_numbers)
from .strip import (ModularWeightParams, RestrictionSpec, StripConfig,
                    TailTooFat, embedding_hankel, modular_weight_function,
                    restriction_hs_norm, restriction_matrix, strip_kernel,
                    _strip_route)

SPEC_KINDS = ("lens", "halfplane", "strip-restriction", "custom-series")


class UsageError(Exception):
    """Bad arguments or configuration; maps to exit status 2."""


_DEFAULTS = {
    "spec": "lens",
    "lam": "0.5",
    "alpha": "1",
    "mass": "1",
    "x_plus": "1",
    "x_minus": "-1",
    "b": "",
    "nmax": "16",
    "tol": "1e-10",
    "precision_bits": "128",
    "out": "",
    "fmt": "csv",
    "seed": "0",
    "phi_coeffs": "0,0.5",
    "w_coeffs": "1",
}

# config-file keys that differ from the internal field name
_KEY_TO_FIELD = {"lambda": "lam", "format": "fmt"}


@dataclass(frozen=True)
class RunConfig:
    """Merged invocation settings.

    Real-valued parameters stay as strings and are parsed under the
    working precision they themselves select, so the file/flag/default
    merge never rounds twice.
    """

    spec: str
    lam: str
    alpha: str
    mass: str
    x_plus: str
    x_minus: str
    b: str
    nmax: int
    tol: str
    precision_bits: int
    out: str
    fmt: str
    seed: int
    phi_coeffs: str
    w_coeffs: str


def _as_int(name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {text!r}") from None


def _read_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    data = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        data[key.strip()] = value.strip()
    return data


def _merge(ns: argparse.Namespace) -> RunConfig:
    merged = dict(_DEFAULTS)
    if getattr(ns, "config", None):
        for key, value in _read_config_file(ns.config).items():
            field = _KEY_TO_FIELD.get(key, key.replace("-", "_"))
            if field not in merged:
                raise UsageError(f"unknown config key {key!r}")
            merged[field] = value
    for field in merged:
        flag_value = getattr(ns, field, None)
        if flag_value is not None:
            merged[field] = str(flag_value)
    if merged["spec"] not in SPEC_KINDS:
        raise UsageError(f"unknown spec kind {merged['spec']!r}")
    if merged["fmt"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {merged['fmt']!r}")
    nmax = _as_int("nmax", merged["nmax"])
    if nmax < 1:
        raise UsageError("nmax must be at least 1")
    bits = _as_int("precision-bits", merged["precision_bits"])
    return RunConfig(
        spec=merged["spec"], lam=merged["lam"], alpha=merged["alpha"],
        mass=merged["mass"], x_plus=merged["x_plus"],
        x_minus=merged["x_minus"], b=merged["b"], nmax=nmax,
        tol=merged["tol"], precision_bits=bits, out=merged["out"],
        fmt=merged["fmt"], seed=_as_int("seed", merged["seed"]),
        phi_coeffs=merged["phi_coeffs"], w_coeffs=merged["w_coeffs"])


# ---------------------------------------------------------------------------
# operator construction


def _parse_series(text: str, what: str) -> list:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError(f"{what} must contain at least one coefficient")
    try:
        return [mp.mpmathify(p) for p in parts]
    except Exception:
        raise UsageError(
            f"{what} must be a comma-separated list of numbers") from None


def _series_map(coeffs) -> DiscMap:
    total = sum(abs(c) for c in coeffs)
    if not total <= 1:
        raise UsageError("series map needs sum of |coefficients| at most 1")

    def ev(z):
        zz = mp.mpmathify(z)
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * zz + c
        return acc

    def taylor(order: int) -> PowerSeries:
        return PowerSeries.make(coeffs, order)

    return DiscMap(ev, taylor, (), total < 1, "series")


def _disc_spec(cfg: RunConfig):
    """(spec, extras) for the disc-side kinds; extras feeds cmd_bounds."""
    if cfg.spec == "lens":
        lam = mp.mpmathify(cfg.lam)
        if not 0 < lam < 1:
            raise UsageError("lambda must lie in (0,1)")
        params = LensParams(lam)
        w0, w = lens_weight(params)
        spec = WeightedCompositionSpec(lens_map(params), w)
        return spec, {"params": params, "w0": w0,
                      "omega_factory": lambda: lens_minorant(params)}
    if cfg.spec == "halfplane":
        alpha = mp.mpmathify(cfg.alpha)
        if not alpha > 0:
            raise UsageError("alpha must be positive")
        phi, w = halfplane_symbol_weight(alpha)
        spec = WeightedCompositionSpec(phi, w)
        return spec, {"w0": halfplane_base_weight(alpha),
                      "omega_factory": lambda: power_minorant(phi, 2)}
    if cfg.spec == "custom-series":
        phi = _series_map(_parse_series(cfg.phi_coeffs, "phi_coeffs"))
        wc = _parse_series(cfg.w_coeffs, "w_coeffs")
        if len(wc) == 1:
            w = constant_weight(wc[0])
        else:
            w = series_weight(wc)
        return WeightedCompositionSpec(phi, w), {}
    raise UsageError(
        "this command needs a disc symbol pair; use --spec lens, "
        "halfplane or custom-series")


def _restriction_spec(cfg: RunConfig) -> RestrictionSpec:
    lam = mp.mpmathify(cfg.lam)
    if not 0 <= lam < 1:
        raise UsageError("lambda must lie in [0,1) for restriction operators")
    b = mp.pi / 2 if not cfg.b else mp.mpmathify(cfg.b)
    mass = mp.mpmathify(cfg.mass)
    kind = "massive" if mass > 0 else "0+"
    try:
        strip_cfg = StripConfig(b)
        params = ModularWeightParams(kind, mass, mp.mpmathify(cfg.x_plus),
                                     mp.mpmathify(cfg.x_minus))
        w = modular_weight_function(params, strip_cfg)
        return RestrictionSpec(strip_cfg, w, lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _restriction_numbers(cfg: RunConfig, ctx: PrecisionContext) -> ApproxNumbers:
    spec = _restriction_spec(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        order = max(2 * cfg.nmax, 32)
        if spec.lam == 0:
            line = embedding_hankel(spec, order, ctx)
            return ApproxNumbers(line.values[:cfg.nmax], line.radius, order,
                                 certified=line.certified,
                                 stabilized=line.stabilized)
        op = restriction_matrix(spec, order, ctx=ctx)
        vals = jacobi_svd(op.m, ctx)
    return ApproxNumbers(tuple(vals[:cfg.nmax]), op.op_tail, order,
                         certified=bool(mp.isfinite(op.op_tail)))


# ---------------------------------------------------------------------------
# table output


def _fmt(value, sig: int):
    if value is None:
        return None
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    return mp.nstr(value, sig)


def _emit(rows, fieldnames, cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        text = json.dumps([{k: row[k] for k in fieldnames} for row in rows],
                          indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow(["" if row[k] is None else row[k]
                             for k in fieldnames])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flag(result: ApproxNumbers) -> str:
    if result.certified:
        return "certified"
    if result.stabilized:
        return "stabilized"
    return "uncertified"


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(cfg: RunConfig) -> int:
    ctx = PrecisionContext(cfg.precision_bits)
    sig = max(3, cfg.precision_bits // 3)
    with ctx.workprec():
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if cfg.spec == "strip-restriction":
                result = _restriction_numbers(cfg, ctx)
            else:
                spec, _ = _disc_spec(cfg)
                result = approx_numbers(spec, cfg.nmax, mp.mpmathify(cfg.tol),
                                        ctx)
        flag = _flag(result)
        rows = [{"n": str(i + 1), "a_n": _fmt(v, sig),
                 "radius": _fmt(result.radius, sig),
                 "n_used": str(result.n_used), "flag": flag}
                for i, v in enumerate(result.values)]
    _emit(rows, ("n", "a_n", "radius", "n_used", "flag"), cfg)
    if result.certification_failed:
        notes = [str(w.message) for w in caught
                 if issubclass(w.category, CertificationFailed)]
        print(f"error: {notes[0] if notes else 'certification failed'}",
              file=sys.stderr)
        return 1
    return 0


def cmd_bounds(cfg: RunConfig) -> int:
    ctx = PrecisionContext(cfg.precision_bits)
    sig = max(3, cfg.precision_bits // 3)
    with ctx.workprec():
        spec, extras = _disc_spec(cfg)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = approx_numbers(spec, cfg.nmax, mp.mpmathify(cfg.tol), ctx)
        lower = []
        for n in range(1, cfg.nmax + 1):
            pencil = (BernsteinConfig((0,)) if n == 1
                      else BernsteinConfig.ladder(n))
            lower.append(bernstein_lower(spec, pencil))
        upper = [None] * cfg.nmax
        if "omega_factory" in extras:
            try:
                omega = extras["omega_factory"]()
                upper = [tradeoff_upper(spec, extras["w0"], omega, n, ctx)
                         for n in range(1, cfg.nmax + 1)]
            except MinorantFailure:
                upper = [None] * cfg.nmax
        blaschke_col = [None] * cfg.nmax
        if "params" in extras:
            n_rep = 2
            while True:
                bs = blaschke_spec(extras["params"], n_rep)
                if bs.degree + 1 > cfg.nmax:
                    break
                m_idx, bound = gelfand_upper_blaschke(spec, bs, ctx)
                blaschke_col[m_idx - 1] = bound
                n_rep += 1
        rows = [{"n": str(n),
                 "bernstein_lower": _fmt(lower[n - 1], sig),
                 "a_n": _fmt(result.values[n - 1], sig),
                 "tradeoff_upper": _fmt(upper[n - 1], sig),
                 "blaschke_upper_at_matching_index":
                     _fmt(blaschke_col[n - 1], sig)}
                for n in range(1, cfg.nmax + 1)]
    _emit(rows, ("n", "bernstein_lower", "a_n", "tradeoff_upper",
                 "blaschke_upper_at_matching_index"), cfg)
    return 0


def cmd_fit(cfg: RunConfig) -> int:
    ctx = PrecisionContext(cfg.precision_bits)
    sig = max(3, cfg.precision_bits // 3)
    with ctx.workprec():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if cfg.spec == "strip-restriction":
                result = _restriction_numbers(cfg, ctx)
            else:
                spec, _ = _disc_spec(cfg)
                result = approx_numbers(spec, cfg.nmax, mp.mpmathify(cfg.tol),
                                        ctx)
        window = (max(2, cfg.nmax // 6), cfg.nmax)
        fits, best = fit_decay(result, window)
        rows = [{"model": f.model,
                 "constant": _fmt(f.params[0], sig),
                 "log_prefactor": _fmt(f.params[1], sig),
                 "residual": _fmt(f.residual, sig),
                 "selected": _fmt(f is best, sig)}
                for f in fits]
    _emit(rows, ("model", "constant", "log_prefactor", "residual",
                 "selected"), cfg)
    return 0


def cmd_strip(cfg: RunConfig) -> int:
    ctx = PrecisionContext(cfg.precision_bits)
    sig = max(3, cfg.precision_bits // 3)
    rows = []

    def check(name, status, value=None, reference=None):
        gap = None if (value is None or reference is None) \
            else abs(value - reference)
        rows.append({"check": name, "status": status,
                     "value": _fmt(value, sig),
                     "reference": _fmt(reference, sig),
                     "discrepancy": _fmt(gap, sig)})

    with ctx.workprec():
        spec = _restriction_spec(cfg)
        centre = spec.config.center
        check("kernel_diagonal_centre", "ok",
              strip_kernel(spec.config, centre, centre).real,
              mp.pi / (4 * spec.config.b))
        try:
            direct, formula = restriction_hs_norm(spec, ctx)
            check("hs_direct_vs_formula", "ok", direct, formula)
        except TailTooFat:
            check("hs_direct_vs_formula", "divergent")
        order = min(cfg.nmax, 8)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if spec.lam == 0:
                result = embedding_hankel(spec, order, ctx)
                if mp.isfinite(result.radius):
                    try:
                        direct, _ = restriction_hs_norm(spec, ctx)
                        check("hankel_trace_identity", "ok", direct ** 2,
                              sum(v ** 2 for v in result.values)
                              + result.radius ** 2)
                    except TailTooFat:
                        check("hankel_trace_identity", "divergent")
                else:
                    check("hankel_trace_identity", "divergent")
            else:
                disc_op = restriction_matrix(spec, order, ctx=ctx)
                entries, _ = _strip_route(spec, order, ctx)
                diff = max(abs(disc_op.m.entries[j][k] - entries[j][k])
                           for j in range(order) for k in range(order))
                check("matrix_route_agreement", "ok", diff, mp.mpf(0))
    _emit(rows, ("check", "status", "value", "reference", "discrepancy"), cfg)
    return 0


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    try:
        names = acceptance.resolve_suite(suite)
    except acceptance.UnknownSuite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    results = []
    for name in names:
        results.extend(acceptance.run_suite(name, seed=cfg.seed))
    rows = []
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'} {r.criterion}: {r.name}"
        if r.detail:
            line += f" ({r.detail})"
        print(line)
        rows.append({"criterion": r.criterion, "check": r.name,
                     "passed": "true" if r.passed else "false",
                     "detail": r.detail})
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    if cfg.out:
        _emit(rows, ("criterion", "check", "passed", "detail"), cfg)
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--spec", choices=SPEC_KINDS,
                        help="operator family (default lens)")
    shared.add_argument("--lambda", dest="lam", metavar="L",
                        help="lens parameter in (0,1) or restriction "
                             "parameter in [0,1)")
    shared.add_argument("--alpha", help="half-plane weight exponent")
    shared.add_argument("--mass",
                        help="strip weight mass; 0 selects the massless "
                             "right-end weight")
    shared.add_argument("--x-plus", dest="x_plus",
                        help="right-end coefficient of the strip weight")
    shared.add_argument("--x-minus", dest="x_minus",
                        help="left-end coefficient of the strip weight")
    shared.add_argument("--b", help="strip half-width (default pi/2)")
    shared.add_argument("--nmax", type=int,
                        help="number of indices to compute (default 16)")
    shared.add_argument("--tol",
                        help="certification target for the truncation ladder")
    shared.add_argument("--precision-bits", dest="precision_bits", type=int,
                        help="working mantissa bits (default 128)")
    shared.add_argument("--out", help="output path (default stdout)")
    shared.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        help="table format (default csv)")
    shared.add_argument("--seed", type=int,
                        help="seed for randomized verify checks (default 0)")
    shared.add_argument("--config",
                        help="key=value file supplying any flag; explicit "
                             "flags override it")
    shared.add_argument("--phi-coeffs", dest="phi_coeffs",
                        help="comma-separated Taylor coefficients of a "
                             "custom-series map")
    shared.add_argument("--w-coeffs", dest="w_coeffs",
                        help="comma-separated Taylor coefficients of a "
                             "custom-series weight")

    parser = argparse.ArgumentParser(
        prog="hardyapprox",
        description="Certified approximation numbers of weighted "
                    "composition and strip restriction operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[shared],
                   help="approximation numbers with certification radius")
    sub.add_parser("bounds", parents=[shared],
                   help="lower and upper bounds next to the computed values")
    sub.add_parser("fit", parents=[shared],
                   help="decay-law classification of the spectrum")
    sub.add_parser("strip", parents=[shared],
                   help="consistency report for a strip restriction")
    verify = sub.add_parser("verify", parents=[shared],
                            help="run acceptance suites")
    verify.add_argument("suite", nargs="?", default="all",
                        help="suite name, 'trivial' or 'all' (default all)")
    return parser


_HANDLERS = {"spectrum": cmd_spectrum, "bounds": cmd_bounds, "fit": cmd_fit,
             "strip": cmd_strip}


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        cfg = _merge(ns)
        if ns.command == "verify":
            return cmd_verify(cfg, ns.suite)
        return _HANDLERS[ns.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InsufficientCertification as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
