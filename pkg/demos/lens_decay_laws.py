# Composition along the lens map pinches the disc at +-1 and the
# approximation numbers feel it: the plain operator decays like
# exp(-c sqrt(n)), and multiplying by the double-exponential weight
# sharpens that to exp(-c n / log n).  This script fits both laws on
# moderate sections; run the verify command for the certified version.
from mpmath import mp, mpf

from hardyapprox import (ApproxNumbers, LensParams, PrecisionContext,
                         WeightedCompositionSpec, approx_numbers,
                         constant_weight, fit_decay, lens_map, lens_weight)
from hardyapprox.numerics import jacobi_svd, DenseMatrix
from hardyapprox.operator_core import _series_columns

ctx = PrecisionContext(53)
params = LensParams(mpf(1) / 2)

n_keep = 96


def section_values(spec, order):
    cols = _series_columns(spec, order)
    m = DenseMatrix([[cols[k][j] for k in range(order)] for j in range(order)])
    return jacobi_svd(m, ctx)


with ctx.workprec():
    plain = WeightedCompositionSpec(lens_map(params), constant_weight(1))
    vals = section_values(plain, 4 * n_keep)
    prev = section_values(plain, 2 * n_keep)
    moved = max(abs(vals[i] - prev[i]) for i in range(n_keep))
    res = ApproxNumbers(tuple(vals[:n_keep]), moved, 4 * n_keep,
                        certified=False, stabilized=True)
    print("plain lens, order", 4 * n_keep, "section, movement",
          mp.nstr(moved, 4))
    fits, best = fit_decay(res, (12, n_keep))
    for f in fits:
        mark = " <-" if f.model == best.model else ""
        print(f"  {f.model:12s} residual {mp.nstr(f.residual, 4)}{mark}")
    print("  stretched constant c =", mp.nstr(best.params[0], 6))
    print()

    _, w = lens_weight(params)
    weighted = WeightedCompositionSpec(lens_map(params), w)
    res_w = approx_numbers(weighted, n_keep, mpf(10) ** -6, ctx)
    print("weighted lens, ladder stopped at order", res_w.n_used,
          "radius", mp.nstr(res_w.radius, 4))
    fits, best = fit_decay(res_w, (12, n_keep))
    for f in fits:
        mark = " <-" if f.model == best.model else ""
        print(f"  {f.model:12s} residual {mp.nstr(f.residual, 4)}{mark}")
    print("  rate constant c =", mp.nstr(best.params[0], 6))
    print()
    print("same indices, two laws:")
    print("  n      plain a_n     weighted a_n")
    for n in (12, 24, 48, 96):
        print(f" {n:3d}   {mp.nstr(res.values[n-1], 6):<13} "
              f"{mp.nstr(res_w.values[n-1], 6)}")
