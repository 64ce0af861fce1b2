"""Ulam-method reference discretisation on a box partition.

The torus is split into m x m congruent squares.  Transition fractions are
estimated from a deterministic sqrt(k) x sqrt(k) sub-lattice of cell-centered
sample points per box, so the construction is fully reproducible: entry
(i, j) is the fraction of box i's samples whose image lands in box j.  Rows
are exact integer counts divided by k.

The invariant density is the leading left eigenvector (power iteration on
the transpose); the variance mirrors the spectral-method formula in the box
basis with the same zero-mode row-replacement deflation, the constant mode
playing the role of the zero frequency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grids import _is_pow2
from .stats import NonConvergenceError, SingularSolveError
from .torus import MapModel, Observable

SRB_MAX_ITER = 100_000
SRB_TOL = 1e-14


@dataclass
class UlamMatrix:
    """Sparse row-stochastic transition matrix on m^2 boxes."""

    m: int
    P: sp.csr_matrix
    samples_per_box: int


def _sample_offsets(m: int, ks: int):
    off = (np.arange(ks) + 0.5) / (m * ks)
    o1, o2 = np.meshgrid(off, off, indexing="ij")
    return o1.ravel(), o2.ravel()


def _build(map_model: MapModel, m: int, k: int, g: Observable | None):
    if not _is_pow2(m):
        raise ValueError("m must be a power of two")
    ks = int(round(np.sqrt(k)))
    if ks * ks != k:
        raise ValueError("samples per box must be a perfect square")
    o1, o2 = _sample_offsets(m, ks)
    nboxes = m * m
    indptr = np.zeros(nboxes + 1, dtype=np.int64)
    index_chunks = []
    data_chunks = []
    gbox = np.empty(nboxes) if g is not None else None
    row = 0
    for i1 in range(m):
        # one row of boxes at a time: (m, k) sample coordinates
        x1 = (i1 / m + o1)[None, :] + np.zeros((m, 1))
        x2 = (np.arange(m)[:, None] / m) + o2[None, :]
        y1, y2 = map_model.image_arrays(x1, x2)
        dest = (y1 * m).astype(np.int64) % m * m + (y2 * m).astype(np.int64) % m
        if g is not None:
            gbox[i1 * m : (i1 + 1) * m] = g.sample(x1, x2).mean(axis=1)
        combined = np.arange(m, dtype=np.int64)[:, None] * (nboxes + 1) + dest
        uniq, counts = np.unique(combined.ravel(), return_counts=True)
        local = uniq // (nboxes + 1)
        cols = uniq % (nboxes + 1)
        for i2 in range(m):
            sel = local == i2
            index_chunks.append(cols[sel])
            data_chunks.append(counts[sel] / k)
            row += 1
            indptr[row] = indptr[row - 1] + int(sel.sum())
    P = sp.csr_matrix(
        (np.concatenate(data_chunks), np.concatenate(index_chunks), indptr),
        shape=(nboxes, nboxes),
    )
    return UlamMatrix(m, P, k), gbox


def build_ulam(map_model: MapModel, m: int, k: int) -> UlamMatrix:
    """Transition matrix from k deterministic lattice samples per box."""
    U, _ = _build(map_model, m, k, None)
    return U


def box_averages(g: Observable, m: int, k: int) -> np.ndarray:
    """Mean of g over each box's sample lattice."""
    ks = int(round(np.sqrt(k)))
    if ks * ks != k:
        raise ValueError("samples per box must be a perfect square")
    o1, o2 = _sample_offsets(m, ks)
    out = np.empty(m * m)
    for i1 in range(m):
        x1 = (i1 / m + o1)[None, :] + np.zeros((m, 1))
        x2 = (np.arange(m)[:, None] / m) + o2[None, :]
        out[i1 * m : (i1 + 1) * m] = g.sample(x1, x2).mean(axis=1)
    return out


def ulam_srb(U: UlamMatrix) -> np.ndarray:
    """Invariant density per box (averages one), from the left eigenvector.

    Power iteration on P^T from the uniform vector; converges when the
    stationary update moves by less than 1e-14 in l1.  Raises
    NonConvergenceError after 1e5 iterations.
    """
    nboxes = U.m * U.m
    PT = U.P.T.tocsr()
    pi = np.full(nboxes, 1.0 / nboxes)
    for _ in range(SRB_MAX_ITER):
        new = PT @ pi
        new /= new.sum()
        if np.abs(new - pi).sum() < SRB_TOL:
            return new * nboxes
        pi = new
    raise NonConvergenceError("Ulam stationary-vector iteration did not converge")


@dataclass
class UlamVarianceResult:
    sigma2: float
    shift: float
    solve_residual: float
    m: int
    samples_per_box: int

    def to_dict(self) -> dict:
        return {
            "sigma2": self.sigma2,
            "mean_shift": self.shift,
            "solve_residual": self.solve_residual,
            "m": self.m,
            "samples_per_box": self.samples_per_box,
        }


def ulam_variance(
    map_model: MapModel, m: int, k: int, g: Observable
) -> UlamVarianceResult:
    """Variance in the Ulam basis, mirroring the spectral linear-solve form.

    g is box-averaged and centered by the stationary weights; w solves
    (Id - P) w = P g_c deflated on the constant mode (row replacement, first
    row), and sigma^2 = sum_i pi_i (g_c_i^2 + 2 g_c_i w_i).
    """
    U, gbox = _build(map_model, m, k, g)
    nboxes = m * m
    density = ulam_srb(U)
    pi = density / nboxes
    shift = float(pi @ gbox)
    gc = gbox - shift
    rhs = U.P @ gc
    rhs[0] = 0.0
    A = (sp.eye(nboxes, format="csr") - U.P).tolil()
    A[0, :] = 0.0
    A[0, 0] = 1.0
    A = A.tocsc()
    w = spla.spsolve(A, rhs)
    if not np.all(np.isfinite(w)):
        raise SingularSolveError("sparse deflated solve produced non-finite values")
    res_vec = (sp.eye(nboxes, format="csr") - U.P) @ w - rhs
    res_vec[0] = 0.0
    residual = float(np.linalg.norm(res_vec))
    scale = max(1.0, float(np.linalg.norm(rhs)))
    if residual > 1e-8 * scale:
        raise SingularSolveError(f"deflated solve residual {residual:.3e}")
    sigma2 = float(pi @ (gc * gc + 2.0 * gc * w))
    return UlamVarianceResult(
        sigma2=sigma2,
        shift=shift,
        solve_residual=residual,
        m=m,
        samples_per_box=k,
    )
