"""Grid conventions and discrete Fourier machinery.

Two grids are in play: a coarse frequency grid of order n (frequencies
{-n/2+1, ..., n/2} per axis, Nyquist included on the positive side only) and
a fine N x N collocation grid with sample (a, b) at the point (a/N, b/N).

The forward transform carries a 1/N^2 factor so that the coefficient at
frequency j approximates the L^2 inner product <f, e^{2 pi i j.x}>.  Fine
spectral arrays returned by :func:`forward_transform` are in centered order:
axis index i corresponds to frequency i - (N/2 - 1).

Coefficient vectors on the coarse grid are stored row-major over (j1, j2)
with each axis ascending from -n/2+1 to n/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Coarse order n and fine order N, both powers of two with N >= n."""

    n: int
    N: int

    def __post_init__(self):
        if not (_is_pow2(self.n) and _is_pow2(self.N)):
            raise ValueError("n and N must be powers of two")
        if self.N < self.n:
            raise ValueError("fine order N must be at least the coarse order n")


def coarse_freqs(n: int) -> np.ndarray:
    """The centered frequency range {-n/2+1, ..., n/2}."""
    return np.arange(-(n // 2) + 1, n // 2 + 1)


def freq_index(j1: int, j2: int, n: int) -> int:
    """Linear index of frequency (j1, j2) in the coarse storage order."""
    lo = -(n // 2) + 1
    if not (lo <= j1 <= n // 2 and lo <= j2 <= n // 2):
        raise IndexError(f"frequency {(j1, j2)} outside coarse range of order {n}")
    return (j1 - lo) * n + (j2 - lo)


def fft_index(j, N: int):
    """Index of frequency j in numpy's fft ordering."""
    return np.asarray(j) % N


def fine_points(N: int):
    """Meshgrid arrays (X1, X2) of the fine collocation points, ij-indexed."""
    a = np.arange(N) / N
    return np.meshgrid(a, a, indexing="ij")


@dataclass
class SpectralVector:
    """Complex coefficients on the coarse grid of order n, length n^2."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex).reshape(self.n * self.n)

    @classmethod
    def from_modes(cls, n: int, modes: dict) -> "SpectralVector":
        c = np.zeros(n * n, dtype=complex)
        for (j1, j2), amp in modes.items():
            c[freq_index(j1, j2, n)] = amp
        return cls(n, c)

    def get(self, j1: int, j2: int) -> complex:
        return complex(self.coeffs[freq_index(j1, j2, self.n)])

    def as_matrix(self) -> np.ndarray:
        return self.coeffs.reshape(self.n, self.n)

    def conjugate_symmetry_defect(self) -> float:
        """max |c(-j) - conj(c(j))| over pairs with both indices in range."""
        js = coarse_freqs(self.n)
        m = self.as_matrix()
        inner = js[(js >= -(self.n // 2) + 1) & (js <= self.n // 2 - 1)]
        sel = np.searchsorted(js, inner)
        neg = np.searchsorted(js, -inner)
        return float(np.abs(m[np.ix_(neg, neg)] - np.conj(m[np.ix_(sel, sel)])).max())


def _to_centered(fft_ordered: np.ndarray) -> np.ndarray:
    N = fft_ordered.shape[-1]
    return np.roll(fft_ordered, N // 2 - 1, axis=(-2, -1))


def _from_centered(centered: np.ndarray) -> np.ndarray:
    N = centered.shape[-1]
    return np.roll(centered, -(N // 2 - 1), axis=(-2, -1))


def forward_transform(samples: np.ndarray) -> np.ndarray:
    """DFT coefficients c(j) = (1/N^2) sum f(x) e^{-2 pi i j.x}, centered order."""
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.shape[0] != samples.shape[1]:
        raise ValueError("samples must be a square N x N array")
    N = samples.shape[0]
    return _to_centered(sfft.fft2(samples) / (N * N))


def restrict_to_coarse(fine_centered: np.ndarray, n: int) -> SpectralVector:
    """Extract the coarse block {-n/2+1..n/2}^2 from a centered fine array."""
    N = fine_centered.shape[0]
    if n > N:
        raise ValueError("coarse order exceeds fine order")
    lo = N // 2 - n // 2
    block = fine_centered[lo : lo + n, lo : lo + n]
    return SpectralVector(n, block.copy())


def evaluate_on_fine(v: SpectralVector, N: int) -> np.ndarray:
    """Samples of sum_j v(j) e^{2 pi i j.x} on the fine N x N grid."""
    if N < v.n:
        raise ValueError("fine order must be at least the coarse order")
    fine = np.zeros((N, N), dtype=complex)
    lo = N // 2 - v.n // 2
    fine[lo : lo + v.n, lo : lo + v.n] = v.as_matrix()
    return sfft.ifft2(_from_centered(fine)) * (N * N)


def riemann_integral(samples: np.ndarray):
    """(1/N^2) sum of the samples; equals the (0,0) forward coefficient."""
    return np.mean(samples)


# ---------------------------------------------------------------------------
# Grid dump formats: a one-line ASCII header followed by row-major
# little-endian float64 payload (re/im pairs for complex).


def write_grid(path, samples: np.ndarray) -> None:
    samples = np.asarray(samples)
    kind = "complex" if np.iscomplexobj(samples) else "real"
    rows, cols = samples.shape
    with open(path, "wb") as f:
        f.write(f"GRID {rows} {cols} {kind}\n".encode("ascii"))
        if kind == "complex":
            interleaved = np.empty((rows, cols, 2))
            interleaved[..., 0] = samples.real
            interleaved[..., 1] = samples.imag
            f.write(interleaved.astype("<f8").tobytes())
        else:
            f.write(samples.astype("<f8").tobytes())


def read_grid(path) -> np.ndarray:
    with open(path, "rb") as f:
        header = f.readline().decode("ascii").split()
        if len(header) != 4 or header[0] != "GRID":
            raise ValueError("not a GRID dump")
        rows, cols, kind = int(header[1]), int(header[2]), header[3]
        if kind == "complex":
            raw = np.frombuffer(f.read(rows * cols * 16), dtype="<f8")
            raw = raw.reshape(rows, cols, 2)
            return raw[..., 0] + 1j * raw[..., 1]
        raw = np.frombuffer(f.read(rows * cols * 8), dtype="<f8")
        return raw.reshape(rows, cols).copy()


def write_grid_csv(path, samples: np.ndarray) -> None:
    """CSV export, one line per grid row. Complex entries as re+imj strings."""
    samples = np.asarray(samples)
    if np.iscomplexobj(samples):
        conv = lambda v: str(complex(v))
    else:
        conv = lambda v: repr(float(v))
    with open(path, "w") as f:
        for row in samples:
            f.write(",".join(conv(v) for v in row) + "\n")
