"""Statistical quantities extracted from assembled transfer operators.

The chain is: leading eigendata of the z = 0 operator give the invariant
density; the observable is centered against it; the CLT variance comes from a
single deflated linear solve; the twisted eigenvalue curve lambda(z) gives
the large-deviations rate function r(s) = sup_z (s z - ln|lambda(z)|) by a
warm-started golden-section search.

The eigenvalue 1 of the untwisted operator makes Id - L singular on the zero
mode; every resolvent solve here replaces the zero-mode row with the
coordinate row (and zeroes the corresponding right-hand side entry), which
pins the solution to the mean-zero subspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .grids import (
    GridSpec,
    SpectralVector,
    evaluate_on_fine,
    fine_points,
    forward_transform,
    freq_index,
    restrict_to_coarse,
    riemann_integral,
)
from .operators import OperatorMatrix, assemble
from .torus import MapModel, Observable


class NumericalError(RuntimeError):
    """A computation failed to meet its numerical contract."""


class SingularSolveError(NumericalError):
    """The deflated resolvent system is numerically singular."""


class NonConvergenceError(NumericalError):
    """Iteration budget exhausted before the tolerance was met."""


DENSE_EIG_MAX_ORDER = 64
POWER_TOL = 1e-12
POWER_MAX_ITER = 10_000
COND_LIMIT = 1e14


@dataclass
class EigenData:
    """Leading eigenvalue and mass-normalised right eigenvector."""

    lam: complex
    right_vector: SpectralVector
    residual: float
    method: str


def _pick_leading(eigvals: np.ndarray) -> int:
    mods = np.abs(eigvals)
    top = mods.max()
    cand = np.nonzero(mods >= top * (1.0 - 1e-12))[0]
    if len(cand) == 1:
        return int(cand[0])
    order = sorted(cand, key=lambda i: (eigvals[i].real, eigvals[i].imag))
    return int(order[-1])


def _normalise(n: int, vec: np.ndarray) -> np.ndarray:
    izero = freq_index(0, 0, n)
    norm = np.linalg.norm(vec)
    if abs(vec[izero]) > 1e-12 * norm:
        return vec / vec[izero]
    return vec / norm


def leading_eigenpair(M: OperatorMatrix) -> EigenData:
    """Max-modulus eigenpair: dense for n <= 64, power iteration beyond.

    Modulus ties are broken by largest real part, then largest imaginary
    part.  Power iteration converges when successive eigenvalue estimates
    agree to 1e-12 relative; it raises NonConvergenceError after 10000
    iterations, reporting the last residual.
    """
    A = M.entries
    if M.n <= DENSE_EIG_MAX_ORDER:
        vals, vecs = np.linalg.eig(A)
        i = _pick_leading(vals)
        lam = complex(vals[i])
        v = _normalise(M.n, vecs[:, i].copy())
        method = "dense"
    else:
        v = np.zeros(A.shape[0], dtype=complex)
        v[freq_index(0, 0, M.n)] = 1.0
        lam_prev = None
        for _ in range(POWER_MAX_ITER):
            w = A @ v
            lam = complex(np.vdot(v, w) / np.vdot(v, v))
            v = w / np.linalg.norm(w)
            if lam_prev is not None and abs(lam - lam_prev) <= POWER_TOL * abs(lam):
                break
            lam_prev = lam
        else:
            res = float(np.linalg.norm(A @ v - lam * v) / np.linalg.norm(v))
            raise NonConvergenceError(
                f"power iteration stalled, last residual {res:.3e}"
            )
        v = _normalise(M.n, v)
        method = "power"
    residual = float(np.linalg.norm(A @ v - lam * v) / np.linalg.norm(v))
    return EigenData(lam, SpectralVector(M.n, v), residual, method)


@dataclass
class SrbDensity:
    """Invariant density on the fine grid with the dropped-imaginary diagnostic."""

    density: np.ndarray
    imag_max: float
    eigen: EigenData


def srb_density(M0: OperatorMatrix, grid: GridSpec) -> SrbDensity:
    """Leading right eigenvector with unit mass, evaluated on the fine grid."""
    eig = leading_eigenpair(M0)
    spatial = evaluate_on_fine(eig.right_vector, grid.N)
    return SrbDensity(spatial.real.copy(), float(np.abs(spatial.imag).max()), eig)


@dataclass
class CenteredObservable:
    samples: np.ndarray
    shift: float


def centered_observable(
    g: Observable, M0: OperatorMatrix, grid: GridSpec
) -> CenteredObservable:
    """g minus its mean against the invariant density of M0."""
    srb = srb_density(M0, grid)
    gs = np.asarray(g.sample(*fine_points(grid.N)), dtype=float)
    shift = float(riemann_integral(gs * srb.density).real)
    return CenteredObservable(gs - shift, shift)


def _deflated_solve(M: OperatorMatrix, rhs: np.ndarray):
    """Solve (Id - M) w = rhs with the zero-mode row pinned to w_0 = 0.

    Returns (w, residual) where the residual is measured on the original
    equations off the zero mode.  Raises SingularSolveError when the
    one-norm condition estimate exceeds 1e14.
    """
    n2 = M.entries.shape[0]
    izero = freq_index(0, 0, M.n)
    A = np.eye(n2, dtype=complex) - M.entries
    A_orig_row = A[izero].copy()
    A[izero, :] = 0.0
    A[izero, izero] = 1.0
    b = rhs.astype(complex).copy()
    b[izero] = 0.0
    anorm = np.abs(A).sum(axis=0).max()
    lu, piv = sla.lu_factor(A)
    rcond, info = sla.lapack.zgecon(lu, anorm)
    if info != 0 or rcond == 0 or 1.0 / rcond > COND_LIMIT:
        raise SingularSolveError(
            f"deflated system condition estimate {1.0 / max(rcond, 1e-300):.2e}"
        )
    w = sla.lu_solve((lu, piv), b)
    A[izero] = A_orig_row
    res_vec = A @ w - rhs
    res_vec[izero] = 0.0
    residual = float(np.linalg.norm(res_vec))
    return w, residual


@dataclass
class VarianceResult:
    sigma2: float
    shift: float
    solve_residual: float
    n: int
    N: int
    kernel_label: str

    def to_dict(self) -> dict:
        return {
            "sigma2": self.sigma2,
            "mean_shift": self.shift,
            "solve_residual": self.solve_residual,
            "n": self.n,
            "N": self.N,
            "kernel": self.kernel_label,
        }


def variance(
    map_model: MapModel, kernel, g: Observable, grid: GridSpec
) -> VarianceResult:
    """CLT variance by one deflated linear solve.

    sigma^2 = int g_c^2 v + 2 g_c (Id - L)^{-1} L (g_c v) dLeb, with v the
    unit-mass invariant density of the z = 0 operator and g_c the centered
    observable.  All products are formed pointwise on the fine grid.
    """
    M0 = assemble(map_model, kernel, g, 0.0, grid)
    srb = srb_density(M0, grid)
    gs = np.asarray(g.sample(*fine_points(grid.N)), dtype=float)
    shift = float(riemann_integral(gs * srb.density).real)
    gc = gs - shift
    b = M0.entries @ restrict_to_coarse(forward_transform(gc * srb.density), grid.n).coeffs
    izero = freq_index(0, 0, grid.n)
    b[izero] = 0.0
    w, residual = _deflated_solve(M0, b)
    w_spatial = evaluate_on_fine(SpectralVector(grid.n, w), grid.N)
    sigma2 = complex(riemann_integral(gc * gc * srb.density + 2.0 * gc * w_spatial))
    if sigma2.real < -1e-8:
        raise NumericalError(f"variance came out negative: {sigma2.real:.3e}")
    return VarianceResult(
        sigma2=float(sigma2.real),
        shift=shift,
        solve_residual=residual,
        n=grid.n,
        N=grid.N,
        kernel_label=kernel.label,
    )


@dataclass
class LambdaPoint:
    z: float
    lam: complex


def lambda_curve(
    map_model: MapModel,
    kernel,
    g: Observable,
    grid: GridSpec,
    z_values,
) -> list:
    """Leading eigenvalue of the twisted operator along real twists.

    The observable is centered against the invariant density of the z = 0
    operator before twisting, so d/dz ln|lambda| vanishes at z = 0.
    """
    M0 = assemble(map_model, kernel, g, 0.0, grid)
    shift = centered_observable(g, M0, grid).shift
    gc = g.shifted(shift)
    out = []
    for z in z_values:
        z = float(z)
        if z == 0.0:
            lam = leading_eigenpair(M0).lam
        else:
            lam = leading_eigenpair(assemble(map_model, kernel, gc, z, grid)).lam
        out.append(LambdaPoint(z, complex(lam)))
    return out


@dataclass
class RateRow:
    s: float
    z_star: float
    r: float
    iterations: int
    at_bracket_boundary: bool


@dataclass
class RateTable:
    rows: list
    sigma2: float
    shift: float
    z_bracket: tuple
    bracket_expanded: bool = False

    def to_rows(self):
        return [
            (row.s, row.z_star, row.r, row.iterations, row.at_bracket_boundary)
            for row in self.rows
        ]


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, xtol: float = 1e-6):
    """Golden-section maximisation on [lo, hi]; returns (x, f(x), iterations)."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    iters = 0
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        iters += 1
    x = c if fc >= fd else d
    return x, max(fc, fd), iters


def _bracket_from_seed(f, seed, lo, hi, step=0.25):
    """Expand around a seed until the maximum is interior or a bound is hit."""
    seed = min(max(seed, lo), hi)
    a = max(lo, seed - step)
    b = min(hi, seed + step)
    fa, fs, fb = f(a), f(seed), f(b)
    evals = 3
    while not (fs >= fa and fs >= fb):
        if fb > fs:
            a, fa = seed, fs
            seed, fs = b, fb
            step *= 2.0
            b = min(hi, seed + step)
            if b == seed:
                break
            fb = f(b)
        else:
            b, fb = seed, fs
            seed, fs = a, fa
            step *= 2.0
            a = max(lo, seed - step)
            if a == seed:
                break
            fa = f(a)
        evals += 1
    return a, b, evals


def rate_function(
    map_model: MapModel,
    kernel,
    g: Observable,
    grid: GridSpec,
    s_values,
    z_bracket=(-4.0, 4.0),
) -> RateTable:
    """Legendre transform r(s) = sup_z (s z - ln|lambda(z)|) over the bracket.

    Each s is maximised by golden-section search refined to |dz| < 1e-6,
    warm-started at the previous optimiser.  A row is flagged when its
    optimiser sits within 1e-4 of the bracket boundary; the bracket is
    doubled once (for the whole table) if that happens, and flags surviving
    the expansion are reported as the domain edge of the rate function.
    """
    s_values = sorted(float(s) for s in s_values)
    z_lo, z_hi = float(z_bracket[0]), float(z_bracket[1])
    if not z_lo < 0.0 < z_hi:
        raise ValueError("z bracket must contain 0")

    M0 = assemble(map_model, kernel, g, 0.0, grid)
    shift = centered_observable(g, M0, grid).shift
    gc = g.shifted(shift)
    var = variance(map_model, kernel, g, grid)

    memo: dict = {}

    def log_lam(z: float) -> float:
        if z not in memo:
            if z == 0.0:
                lam = leading_eigenpair(M0).lam
            else:
                lam = leading_eigenpair(assemble(map_model, kernel, gc, z, grid)).lam
            memo[z] = math.log(abs(lam))
        return memo[z]

    expanded = False
    rows = []
    seed = 0.0
    i = 0
    while i < len(s_values):
        s = s_values[i]

        def phi(z):
            return s * z - log_lam(z)

        a, b, evals = _bracket_from_seed(phi, seed, z_lo, z_hi)
        z_star, r, iters = _golden_max(phi, a, b)
        on_edge = min(abs(z_star - z_lo), abs(z_star - z_hi)) < 1e-4
        if on_edge and not expanded:
            expanded = True
            z_lo *= 2.0
            z_hi *= 2.0
            continue
        rows.append(RateRow(s, z_star, r, iters + evals, on_edge))
        seed = z_star
        i += 1
    return RateTable(
        rows=rows,
        sigma2=var.sigma2,
        shift=shift,
        z_bracket=(z_lo, z_hi),
        bracket_expanded=expanded,
    )
