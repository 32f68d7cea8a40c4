# Half-plane symbols with polynomial weight decay |w| ~ |1-z|^alpha sit at
# the other end of the scale: a_n drops like a power of n, not an
# exponential.  Two experiments here.
#
#   1. alpha = 1: a_n * sqrt(n) stays inside a narrow window.
#   2. the Hilbert-Schmidt dichotomy at the alpha = 1/2 threshold:
#      sum ||T e_k||^2 converges for alpha = 0.6 and diverges for 0.4.

from mpmath import mp, mpf

from hardyapprox import (PrecisionContext, WeightedCompositionSpec,
                         halfplane_base_weight, halfplane_symbol_weight,
                         hilbert_schmidt_norm, DIVERGENT)
from hardyapprox.numerics import jacobi_svd, DenseMatrix
from hardyapprox.operator_core import _series_columns

ctx = PrecisionContext(53)

with ctx.workprec():
    phi, w = halfplane_symbol_weight(mpf(1))
    spec = WeightedCompositionSpec(phi, w)
    order = 384
    cols = _series_columns(spec, order)
    m = DenseMatrix([[cols[k][j] for k in range(order)] for j in range(order)])
    vals = jacobi_svd(m, ctx)
    print("alpha = 1, section of order", order)
    print("  n     a_n          a_n * sqrt(n)")
    scaled = []
    for n in (16, 32, 64, 128, 192):
        s = vals[n - 1] * mp.sqrt(n)
        scaled.append(s)
        print(f" {n:4d}  {mp.nstr(vals[n-1], 6):<12} {mp.nstr(s, 6)}")
    print("  window ratio:", mp.nstr(max(scaled) / min(scaled), 4))
    print()

    for alpha in (mpf(3) / 5, mpf(2) / 5):
        phi, w = halfplane_symbol_weight(alpha)
        spec = WeightedCompositionSpec(phi, w)
        verdict, partials = hilbert_schmidt_norm(spec, ctx)
        if verdict is DIVERGENT:
            print(f"alpha = {mp.nstr(alpha, 2)}: HS sum diverges;",
                  "partial sums", [mp.nstr(p, 6) for p in partials])
        else:
            print(f"alpha = {mp.nstr(alpha, 2)}: HS norm squared =",
                  mp.nstr(verdict, 10))
