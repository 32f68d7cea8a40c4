# The one case with a closed-form answer: phi(z) = z/2, w = 1.
# T e_n = 2^-n e_n, so a_n = 2^-(n-1) exactly and the decay constant
# recovered by the fit should be log 2 alias rho = 0.5.
from mpmath import mp

from hardyapprox import (PrecisionContext, WeightedCompositionSpec,
                         approx_numbers, dilation_map, constant_weight,
                         fit_decay)

ctx = PrecisionContext(256)
spec = WeightedCompositionSpec(dilation_map(mp.mpf(1) / 2), constant_weight(1))

with ctx.workprec():
    res = approx_numbers(spec, 40, mp.mpf(10) ** -30, ctx)
    print("certified:", res.certified, " order used:", res.n_used,
          " radius:", mp.nstr(res.radius, 5))
    print()
    print(" n    a_n                  |a_n - 2^(1-n)|")
    for n in (1, 2, 5, 10, 20, 40):
        err = abs(res.values[n - 1] - mp.mpf(2) ** (1 - n))
        print(f"{n:3d}   {mp.nstr(res.values[n - 1], 12):<20} {mp.nstr(err, 3)}")

    fits, best = fit_decay(res, (5, 40))
    print()
    for f in fits:
        tag = " <- selected" if f.model == best.model else ""
        print(f"{f.model:12s} residual {mp.nstr(f.residual, 5)}{tag}")
    print()
    print("fitted ratio per step:", mp.nstr(best.params[0], 10), "(exact: 0.5)")
