"""Extended-precision numerical kernels.

Scalar and power-series arithmetic, spectrally accurate quadrature on the
unit circle, and dense SVD / generalized eigenvalue solvers that keep high
relative accuracy for values far below unit scale.  Every public operation
is a pure function of immutable inputs with a fixed summation order, so
results are reproducible and safe for concurrent use.

Precision policy
----------------
A ``PrecisionContext`` carries the working mantissa size and the quadrature
controls.  Heavy kernels run under ``mp.workprec(ctx.precision_bits)``;
evaluation callables supplied by other modules are expected to honour the
ambient mpmath precision.  A context with ``precision_bits == 53`` selects
an IEEE double fast path for the real SVD kernel (same one-sided Jacobi
algorithm, hardware floats).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from mpmath import mp, mpc, mpf

__all__ = [
    "PrecisionContext",
    "PowerSeries",
    "DenseMatrix",
    "QuadratureResult",
    "NumericsError",
    "NoConvergence",
    "DivisionByZeroConstantTerm",
    "NotPositiveDefinite",
    "BranchCrossing",
    "principal_power",
    "series_binomial",
    "series_arith",
    "series_add",
    "series_scale",
    "series_negate_arg",
    "series_exp",
    "series_real_pow",
    "series_eval",
    "circle_nodes",
    "circle_quadrature",
    "segment_quadrature",
    "jacobi_svd",
    "hermitian_geneig",
]

ExtComplex = Union[mpf, mpc]
"""Extended-precision scalar at the ambient context precision.

Realized by mpmath's ``mpf``/``mpc`` (gmpy-backed); arithmetic is closed at
the working precision and modulus comparisons are exact at that precision.
"""

_JACOBI_SWEEP_BUDGET = 64


class NumericsError(Exception):
    """Base class for numerical failures in this package."""


class NoConvergence(NumericsError):
    """An iteration exhausted its budget without meeting its tolerance."""


class DivisionByZeroConstantTerm(NumericsError):
    """Series division by a series whose constant term vanishes."""


class NotPositiveDefinite(NumericsError):
    """A pivoted factorization met a nonpositive pivot."""


class BranchCrossing(NumericsError):
    """A principal-branch power was requested outside the right half plane."""


@dataclass(frozen=True)
class PrecisionContext:
    """Global numeric policy: working precision and quadrature resolution.

    Parameters
    ----------
    precision_bits:
        Working mantissa bits, at least 53.  The value 53 marks the IEEE
        double fast path; extended precision starts at 64.
    quad_nodes:
        Initial trapezoid node count on the circle, a power of two >= 16.
    agree_tol:
        Relative agreement threshold between successive quadrature
        refinements.  Defaults to ``10**-max(precision_bits // 16, 10)``.
    max_refinements:
        Node-doubling budget for adaptive quadrature.
    """

    precision_bits: int = 512
    quad_nodes: int = 256
    agree_tol: float = 0.0
    max_refinements: int = 14

    def __post_init__(self) -> None:
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")
        q = self.quad_nodes
        if q < 16 or (q & (q - 1)) != 0:
            raise ValueError("quad_nodes must be a power of two, at least 16")
        if self.agree_tol == 0.0:
            object.__setattr__(self, "agree_tol", 10.0 ** -max(self.precision_bits // 16, 10))
        if not (0.0 < self.agree_tol < 1.0):
            raise ValueError("agree_tol must lie in (0, 1)")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be positive")

    def workprec(self):
        """Context manager setting the ambient mpmath precision."""
        return mp.workprec(self.precision_bits)

    @property
    def eps(self) -> mpf:
        return mpf(2) ** (-self.precision_bits)


DEFAULT_CONTEXT = PrecisionContext()


def principal_power(base: ExtComplex, alpha) -> ExtComplex:
    """Principal-branch ``base**alpha`` with a right-half-plane guard.

    Every base this package raises to a real power lies in the closed right
    half plane (boundary values can be purely imaginary), so the principal
    branch is continuous on the domain of use.  Crossing into the open left
    half plane indicates a logic error upstream and raises ``BranchCrossing``
    rather than silently jumping branches.
    """
    b = mp.mpmathify(base)
    re = b.real if isinstance(b, mpc) else b
    if re < -mpf(2) ** (-mp.prec // 2) * abs(b):
        raise BranchCrossing(f"base {b} lies outside the closed right half plane")
    return mp.power(b, alpha)


# ---------------------------------------------------------------------------
# Power series


def _num(x) -> ExtComplex:
    return mp.mpmathify(x)


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor series; ``coeffs[j]`` multiplies ``z**j``."""

    coeffs: tuple
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("order must be positive")
        if len(self.coeffs) != self.order:
            raise ValueError("length of coeffs must equal order")

    @staticmethod
    def make(coeffs: Sequence, order: int | None = None) -> "PowerSeries":
        """Build a series, padding with zeros or truncating to ``order``."""
        cs = [_num(c) for c in coeffs]
        if order is None:
            order = len(cs)
        if len(cs) < order:
            cs.extend([mpf(0)] * (order - len(cs)))
        return PowerSeries(tuple(cs[:order]), order)

    def __iter__(self):
        return iter(self.coeffs)


def series_binomial(alpha, n: int) -> PowerSeries:
    """Taylor series of ``(1+z)**alpha`` to order ``n``.

    Uses the recurrence c_{j+1} = c_j (alpha - j) / (j + 1), c_0 = 1, which
    is exact for integer alpha and has no cancellation for real alpha.
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    a = _num(alpha)
    coeffs = [mpf(1)]
    for j in range(n - 1):
        coeffs.append(coeffs[-1] * (a - j) / (j + 1))
    return PowerSeries(tuple(coeffs), n)


def _series_mul_coeffs(a: Sequence, b: Sequence, n: int) -> list:
    out = []
    for j in range(n):
        kmax = j
        out.append(mp.fsum(a[k] * b[j - k] for k in range(kmax + 1)))
    return out


def series_arith(a: PowerSeries, b, op: str) -> PowerSeries:
    """Truncated product, quotient, or integer power at the common order.

    ``op`` is one of ``mul``, ``div``, ``int_pow``.  For ``int_pow`` the
    second argument is a nonnegative integer exponent and the power is formed
    by repeated squaring with truncation after each product.
    """
    n = a.order
    if op == "mul":
        if b.order != n:
            raise ValueError("series orders must agree")
        return PowerSeries(tuple(_series_mul_coeffs(a.coeffs, b.coeffs, n)), n)
    if op == "div":
        if b.order != n:
            raise ValueError("series orders must agree")
        if b.coeffs[0] == 0:
            raise DivisionByZeroConstantTerm("divisor has vanishing constant term")
        q: list = []
        for j in range(n):
            acc = a.coeffs[j]
            if j:
                acc -= mp.fsum(b.coeffs[k] * q[j - k] for k in range(1, j + 1))
            q.append(acc / b.coeffs[0])
        return PowerSeries(tuple(q), n)
    if op == "int_pow":
        k = int(b)
        if k < 0:
            raise ValueError("int_pow exponent must be nonnegative")
        result = PowerSeries.make([1], n)
        base = a
        while k:
            if k & 1:
                result = series_arith(result, base, "mul")
            k >>= 1
            if k:
                base = series_arith(base, base, "mul")
        return result
    raise ValueError(f"unknown op {op!r}")


def series_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    if a.order != b.order:
        raise ValueError("series orders must agree")
    return PowerSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.order)


def series_scale(a: PowerSeries, c) -> PowerSeries:
    cc = _num(c)
    return PowerSeries(tuple(cc * x for x in a.coeffs), a.order)


def series_negate_arg(a: PowerSeries) -> PowerSeries:
    """Series of ``z -> a(-z)``; flips the sign of odd coefficients."""
    return PowerSeries(
        tuple(x if j % 2 == 0 else -x for j, x in enumerate(a.coeffs)), a.order
    )


def series_exp(a: PowerSeries) -> PowerSeries:
    """Series of ``exp(a(z))`` via the derivative recurrence."""
    n = a.order
    e = [mp.exp(a.coeffs[0])]
    for j in range(1, n):
        e.append(mp.fsum(k * a.coeffs[k] * e[j - k] for k in range(1, j + 1)) / j)
    return PowerSeries(tuple(e), n)


def series_real_pow(a: PowerSeries, alpha) -> PowerSeries:
    """Series of ``a(z)**alpha`` for a real exponent, principal branch.

    Requires a nonvanishing constant term; uses the Miller recurrence, which
    is division-free apart from the leading coefficient.
    """
    if a.coeffs[0] == 0:
        raise DivisionByZeroConstantTerm("real power of a series with a(0) = 0")
    al = _num(alpha)
    n = a.order
    a0 = a.coeffs[0]
    p = [principal_power(a0, al)]
    for j in range(1, n):
        acc = mp.fsum(((al + 1) * k - j) * a.coeffs[k] * p[j - k] for k in range(1, j + 1))
        p.append(acc / (j * a0))
    return PowerSeries(tuple(p), n)


def series_eval(a: PowerSeries, z) -> ExtComplex:
    zz = _num(z)
    acc = _num(a.coeffs[-1])
    for c in reversed(a.coeffs[:-1]):
        acc = acc * zz + c
    return acc


# ---------------------------------------------------------------------------
# Quadrature on the unit circle


@dataclass(frozen=True)
class QuadratureResult:
    """Adaptive quadrature outcome; ``error`` is the last refinement gap."""

    value: ExtComplex
    error: mpf
    converged: bool
    nodes_used: int

    def __complex__(self) -> complex:
        return complex(self.value)


def circle_nodes(m: int) -> list:
    """The ``m`` trapezoid nodes ``exp(2 pi i k / m)`` on the unit circle."""
    return [mp.expjpi(mpf(2 * k) / m) for k in range(m)]


def circle_quadrature(f: Callable[[ExtComplex], ExtComplex],
                      ctx: PrecisionContext = DEFAULT_CONTEXT) -> QuadratureResult:
    """Integral of ``f`` over the circle against normalized arc measure.

    Trapezoid sums with node doubling; for a periodic analytic integrand the
    error decays geometrically in the node count, so two successive sums
    agreeing to ``ctx.agree_tol`` is a tight stopping rule.  The value is
    always returned; ``converged`` is False when the refinement budget runs
    out (the spectral rule is the wrong tool then, and callers fall back to
    segment quadrature with singularity-aware node placement).
    """
    with ctx.workprec():
        m = ctx.quad_nodes
        total = mp.fsum(f(u) for u in circle_nodes(m))
        value = total / m
        err = mp.inf
        for _ in range(ctx.max_refinements):
            new = mp.fsum(f(mp.expjpi(mpf(2 * k + 1) / m)) for k in range(m))
            m *= 2
            value_next = (total + new) / m
            total += new
            err = abs(value_next - value)
            value = value_next
            floor = ctx.eps * mpf(256) * (1 + abs(value))
            if err <= ctx.agree_tol * abs(value) + floor:
                return QuadratureResult(value, err, True, m)
        return QuadratureResult(value, err, False, m)


def segment_quadrature(f, points: Sequence, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       rel_tol: float | None = None):
    """Tanh-sinh quadrature over a chain of segments.

    Wraps ``mp.quad`` with the context precision.  Endpoint algebraic
    singularities (any exponent > -1) are handled natively, which the
    uniform circle rule cannot do.  Returns a ``QuadratureResult`` whose
    error field is mpmath's own estimate.
    """
    with ctx.workprec():
        # tanh-sinh levels must grow with the digit target or the estimator
        # stalls on singular integrands long before context precision
        degree = 6 + max(0, (ctx.precision_bits - 53) // 64)
        value, est = mp.quad(f, list(points), error=True, maxdegree=degree)
        tol = mpf(rel_tol) if rel_tol is not None else mpf(ctx.agree_tol)
        ok = est <= tol * (1 + abs(value))
        return QuadratureResult(value, est, bool(ok), 0)


# ---------------------------------------------------------------------------
# Dense matrices


class DenseMatrix:
    """Immutable dense matrix of extended-precision scalars.

    ``hermitian=True`` asserts (and checks) A[j][k] == conj(A[k][j]).
    """

    __slots__ = ("rows", "cols", "entries", "hermitian")

    def __init__(self, entries: Sequence[Sequence], hermitian: bool = False) -> None:
        rows = len(entries)
        if rows == 0:
            raise ValueError("matrix must have at least one row")
        cols = len(entries[0])
        grid = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged rows")
            grid.append(tuple(_num(x) for x in row))
        self_entries = tuple(grid)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", self_entries)
        object.__setattr__(self, "hermitian", bool(hermitian))
        if hermitian:
            if rows != cols:
                raise ValueError("hermitian matrix must be square")
            for j in range(rows):
                for k in range(j + 1):
                    if self_entries[j][k] != mp.conj(self_entries[k][j]):
                        raise ValueError("hermitian flag violated")

    def __setattr__(self, *a):  # immutability
        raise AttributeError("DenseMatrix is immutable")

    def entry(self, j: int, k: int) -> ExtComplex:
        return self.entries[j][k]

    def column(self, k: int) -> list:
        return [self.entries[j][k] for j in range(self.rows)]

    def columns(self) -> list:
        return [self.column(k) for k in range(self.cols)]

    def conj_transpose(self) -> "DenseMatrix":
        return DenseMatrix(
            [[mp.conj(self.entries[j][k]) for j in range(self.rows)] for k in range(self.cols)]
        )

    def is_real(self) -> bool:
        return all(not isinstance(x, mpc) or x.imag == 0 for row in self.entries for x in row)

    def frobenius_sq(self) -> mpf:
        return mp.fsum(abs(x) ** 2 for row in self.entries for x in row)


def _as_columns(a) -> list:
    if isinstance(a, DenseMatrix):
        return a.columns()
    rows = [list(r) for r in a]
    cols = len(rows[0])
    return [[_num(rows[j][k]) for j in range(len(rows))] for k in range(cols)]


# ---------------------------------------------------------------------------
# One-sided Jacobi SVD


def _support_groups(cols: list) -> list:
    """Partition column indices into groups with pairwise disjoint row support.

    Columns that never share a nonzero row are exactly orthogonal, so the SVD
    splits; this makes diagonal and checkerboard matrices (parity-symmetric
    symbols produce those) cost a fraction of a dense solve.
    """
    n = len(cols)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    row_owner: dict = {}
    for k, col in enumerate(cols):
        for i, x in enumerate(col):
            if x != 0:
                if i in row_owner:
                    union(k, row_owner[i])
                else:
                    row_owner[i] = k
    groups: dict = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(k)
    return list(groups.values())


def _jacobi_rotate_params(np2, nq2, g):
    # g is the real inner product; returns (c, s, t) annihilating it
    tau = (nq2 - np2) / (2 * g)
    t = 1 / (abs(tau) + mp.sqrt(1 + tau * tau))
    if tau < 0:
        t = -t
    c = 1 / mp.sqrt(1 + t * t)
    return c, t * c, t


def _jacobi_core_mpf(cols: list, prec: int, max_sweeps: int, complex_mode: bool) -> list:
    n = len(cols)
    if n == 1:
        return [mp.sqrt(mp.fsum(abs(x) ** 2 for x in cols[0]))]
    tol_sq = mpf(2) ** (-2 * (prec - 8))
    norms2 = [mp.fsum(abs(x) ** 2 for x in c) for c in cols]
    for _ in range(max_sweeps):
        order = sorted(range(n), key=norms2.__getitem__, reverse=True)
        rotated = False
        for ii in range(n - 1):
            for jj in range(ii + 1, n):
                p, q = order[ii], order[jj]
                np2, nq2 = norms2[p], norms2[q]
                if np2 == 0 or nq2 == 0:
                    continue
                if complex_mode:
                    g = mp.fsum(mp.conj(x) * y for x, y in zip(cols[p], cols[q]))
                else:
                    g = mp.fdot(cols[p], cols[q])
                if abs(g) ** 2 <= tol_sq * np2 * nq2:
                    continue
                rotated = True
                if complex_mode and isinstance(g, mpc):
                    if g.imag != 0:
                        # absorb the phase into column q; a right unitary
                        # factor leaves singular values unchanged
                        ph = mp.conj(g) / abs(g)
                        cols[q] = [ph * y for y in cols[q]]
                        g = abs(g)
                    else:
                        g = g.real
                c, s, t = _jacobi_rotate_params(np2, nq2, g)
                cp, cq = cols[p], cols[q]
                cols[p] = [c * x - s * y for x, y in zip(cp, cq)]
                cols[q] = [s * x + c * y for x, y in zip(cp, cq)]
                norms2[p] = np2 - t * g
                norms2[q] = nq2 + t * g
        # recompute cached norms to stop drift accumulating across sweeps
        norms2 = [mp.fsum(abs(x) ** 2 for x in c) for c in cols]
        if not rotated:
            return [mp.sqrt(x) for x in norms2]
    raise NoConvergence(f"jacobi_svd: no convergence in {max_sweeps} sweeps")


def _jacobi_core_numpy(a: np.ndarray, max_sweeps: int) -> list:
    m, n = a.shape
    if n == 1:
        return [float(np.sqrt((a * a).sum()))]
    tol_sq = (2.0 ** -47) ** 2
    norms2 = (a * a).sum(axis=0)
    for _ in range(max_sweeps):
        order = np.argsort(-norms2)
        rotated = False
        for ii in range(n - 1):
            for jj in range(ii + 1, n):
                p, q = int(order[ii]), int(order[jj])
                np2, nq2 = norms2[p], norms2[q]
                if np2 == 0.0 or nq2 == 0.0:
                    continue
                g = float(a[:, p] @ a[:, q])
                if g * g <= tol_sq * np2 * nq2:
                    continue
                rotated = True
                tau = (nq2 - np2) / (2.0 * g)
                t = 1.0 / (abs(tau) + np.hypot(1.0, tau))
                if tau < 0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                up = a[:, p].copy()
                a[:, p] = c * up - s * a[:, q]
                a[:, q] = s * up + c * a[:, q]
                norms2[p] = np2 - t * g
                norms2[q] = nq2 + t * g
        norms2 = (a * a).sum(axis=0)
        if not rotated:
            return [float(x) for x in np.sqrt(norms2)]
    raise NoConvergence(f"jacobi_svd: no convergence in {max_sweeps} sweeps")


def jacobi_svd(a, ctx: PrecisionContext = DEFAULT_CONTEXT,
               max_sweeps: int = _JACOBI_SWEEP_BUDGET) -> list:
    """All singular values of ``a``, descending, by one-sided Jacobi.

    One-sided Jacobi orthogonalizes columns by plane rotations until every
    pair meets a threshold tied to the working precision.  Unlike bidiagonal
    reduction it determines tiny singular values to high relative accuracy,
    which is what makes certified exponential-decay plots possible at all.

    Columns with pairwise disjoint row support are split into independent
    subproblems first; for parity-structured matrices this roughly quarters
    the work and for diagonal input the sweep loop vanishes entirely.

    Raises ``NoConvergence`` after ``max_sweeps`` sweeps (default budget 64).
    """
    cols = _as_columns(a)
    nrows = len(cols[0])
    if nrows < len(cols):
        # transpose: same nonzero singular values, and min(rows, cols) are kept
        cols = [[cols[k][i] for k in range(len(cols))] for i in range(nrows)]
    with ctx.workprec():
        values: list = []
        complex_mode = any(isinstance(x, mpc) and x.imag != 0 for c in cols for x in c)
        if not complex_mode:
            # mpc with exact-zero imaginary part would poison fdot's type
            cols = [[x.real if isinstance(x, mpc) else x for x in c] for c in cols]
        groups = _support_groups(cols)
        use_numpy = ctx.precision_bits == 53 and not complex_mode
        for group in groups:
            sub = [cols[k] for k in group]
            if all(all(x == 0 for x in c) for c in sub):
                values.extend([mpf(0)] * len(sub))
                continue
            if use_numpy:
                arr = np.array([[float(x) for x in c] for c in sub], dtype=np.float64).T
                vals = _jacobi_core_numpy(arr, max_sweeps)
                values.extend(mpf(v) for v in vals)
            else:
                values.extend(_jacobi_core_mpf([list(c) for c in sub], ctx.precision_bits,
                                               max_sweeps, complex_mode))
        values.sort(reverse=True)
        return values


# ---------------------------------------------------------------------------
# Generalized Hermitian eigenproblem


def _to_mp_matrix(a) -> mp.matrix:
    if isinstance(a, DenseMatrix):
        m = mp.matrix(a.rows, a.cols)
        for j in range(a.rows):
            for k in range(a.cols):
                m[j, k] = a.entries[j][k]
        return m
    return mp.matrix(a)


def _solve_lower(L: mp.matrix, B: mp.matrix) -> mp.matrix:
    """Forward substitution: returns L^{-1} B for lower-triangular L."""
    n = L.rows
    m = B.cols
    X = mp.matrix(n, m)
    for col in range(m):
        for i in range(n):
            acc = B[i, col]
            for k in range(i):
                acc -= L[i, k] * X[k, col]
            X[i, col] = acc / L[i, i]
    return X


def hermitian_geneig(a, b, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Ascending eigenvalues of the Hermitian pencil (a, b), b positive definite.

    Reduces to the standard problem ``L^{-1} a L^{-H}`` through a Cholesky
    factorization ``b = L L^H`` (pivot failure raises ``NotPositiveDefinite``)
    and solves it with mpmath's Hermitian eigensolver at context precision.
    """
    with ctx.workprec():
        A = _to_mp_matrix(a)
        B = _to_mp_matrix(b)
        if A.rows != A.cols or B.rows != B.cols or A.rows != B.rows:
            raise ValueError("pencil matrices must be square and of equal size")
        n = A.rows
        # symmetrize against representation noise before factorizing
        for i in range(n):
            for j in range(i):
                va = (A[i, j] + mp.conj(A[j, i])) / 2
                A[i, j] = va
                A[j, i] = mp.conj(va)
            A[i, i] = mp.re(A[i, i])
            for j in range(i):
                vb = (B[i, j] + mp.conj(B[j, i])) / 2
                B[i, j] = vb
                B[j, i] = mp.conj(vb)
            B[i, i] = mp.re(B[i, i])
        try:
            L = mp.cholesky(B)
        except ValueError as exc:
            raise NotPositiveDefinite(str(exc)) from exc
        C = _solve_lower(L, A)
        # M = L^{-1} A L^{-H} = (L^{-1} C^H)^H
        D = _solve_lower(L, C.H)
        M = D.H
        for i in range(n):
            M[i, i] = mp.re(M[i, i])
            for j in range(i):
                v = (M[i, j] + mp.conj(M[j, i])) / 2
                M[i, j] = v
                M[j, i] = mp.conj(v)
        real = all(mp.im(M[i, j]) == 0 for i in range(n) for j in range(n))
        if real:
            E = mp.eigsy(mp.matrix([[mp.re(M[i, j]) for j in range(n)] for i in range(n)]),
                         eigvals_only=True)
        else:
            E = mp.eighe(M, eigvals_only=True)
        vals = [mp.re(E[i]) for i in range(n)]
        vals.sort()
        return vals
