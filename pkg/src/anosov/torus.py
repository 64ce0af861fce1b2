"""Torus geometry, the map family and observables.

Points live on T^2 = [0,1)^2 with floor-based reduction mod 1.  Two map
variants are supported: hyperbolic linear toral automorphisms and the
perturbed cat map

    section7 form:  T(x1,x2) = (2x1 + x2 + 2 d cos(2 pi x1), x1 + x2 + d sin(4 pi x2 + 1))
    appendix form:  T(x1,x2) = (2x1 + x2 +   d cos(2 pi x1), x1 + x2 + d sin(4 pi x2 + 1))

both reduced mod 1.  The two forms differ only in the cosine amplitude; the
certification formulas are stated for the appendix form while the variance
and rate-function runs default to the section7 form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend

TWO_PI = 2.0 * np.pi


def mod1(x):
    """Floor-based reduction into [0, 1). Works on scalars and arrays."""
    return x - np.floor(x)


@dataclass(frozen=True)
class TorusPoint:
    """A point of T^2; coordinates are reduced mod 1 on construction."""

    x1: float
    x2: float

    def __post_init__(self):
        object.__setattr__(self, "x1", float(mod1(self.x1)))
        object.__setattr__(self, "x2", float(mod1(self.x2)))


class MapModel:
    """Base class: a self-map of T^2 with an analytic Jacobian."""

    def __call__(self, p: TorusPoint) -> TorusPoint:
        y1, y2 = self.image_arrays(np.array([p.x1]), np.array([p.x2]))
        return TorusPoint(float(y1[0]), float(y2[0]))

    def image_arrays(self, x1, x2):
        raise NotImplementedError

    def jacobian(self, p: TorusPoint) -> np.ndarray:
        raise NotImplementedError

    @property
    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class LinearToral(MapModel):
    """x -> A x mod 1 for an integer matrix A with |det A| = 1."""

    a11: int = 2
    a12: int = 1
    a21: int = 1
    a22: int = 1

    def __post_init__(self):
        det = self.a11 * self.a22 - self.a12 * self.a21
        if abs(det) != 1:
            raise ValueError(f"matrix must be an automorphism, |det| = {abs(det)}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=float)

    def image_arrays(self, x1, x2):
        y1 = mod1(self.a11 * x1 + self.a12 * x2)
        y2 = mod1(self.a21 * x1 + self.a22 * x2)
        return y1, y2

    def jacobian(self, p: TorusPoint) -> np.ndarray:
        return self.matrix

    @property
    def label(self) -> str:
        return f"linear[{self.a11},{self.a12};{self.a21},{self.a22}]"


def cat_map() -> LinearToral:
    """Arnold's cat map, A = [[2,1],[1,1]]."""
    return LinearToral(2, 1, 1, 1)


@dataclass(frozen=True)
class PerturbedCat(MapModel):
    """Perturbed cat map with perturbation size delta.

    ``form`` selects the cosine amplitude: "section7" uses 2*delta,
    "appendix" uses delta.
    """

    delta: float = 0.01
    form: str = "section7"

    def __post_init__(self):
        if self.form not in ("section7", "appendix"):
            raise ValueError(f"unknown form {self.form!r}")

    @property
    def cos_amp(self) -> float:
        return 2.0 if self.form == "section7" else 1.0

    def image_arrays(self, x1, x2):
        return backend.perturbed_cat_images(x1, x2, self.delta, self.cos_amp)

    def jacobian(self, p: TorusPoint) -> np.ndarray:
        d = self.delta
        return np.array(
            [
                [2.0 - self.cos_amp * TWO_PI * d * np.sin(TWO_PI * p.x1), 1.0],
                [1.0, 1.0 + 2.0 * TWO_PI * d * np.cos(2.0 * TWO_PI * p.x2 + 1.0)],
            ]
        )

    @property
    def label(self) -> str:
        return f"perturbed-cat[{self.form},delta={self.delta!r}]"


def eval_map(m: MapModel, p: TorusPoint) -> TorusPoint:
    """T(p) reduced mod 1."""
    return m(p)


class Observable:
    """Base class: a real-valued function on T^2."""

    def __call__(self, p: TorusPoint) -> float:
        return float(np.real(self.sample(np.asarray(p.x1), np.asarray(p.x2))))

    def sample(self, x1, x2):
        raise NotImplementedError

    def shifted(self, a: float) -> "Observable":
        """The observable g - a."""
        raise NotImplementedError


@dataclass(frozen=True)
class TrigPolynomial(Observable):
    """Finite Fourier sum sum_j c_j e^{2 pi i j.x} with c_{-j} = conj(c_j).

    ``modes`` is a tuple of ((j1, j2), amplitude) pairs.  Conjugate symmetry
    is required so the function is real valued.
    """

    modes: tuple

    def __post_init__(self):
        m = dict(self.modes)
        for (j1, j2), c in m.items():
            c_neg = m.get((-j1, -j2), 0.0)
            if abs(np.conj(c) - c_neg) > 1e-12 * max(1.0, abs(c)):
                raise ValueError(f"modes violate conjugate symmetry at {(j1, j2)}")
        object.__setattr__(self, "modes", tuple(sorted(m.items())))

    def sample(self, x1, x2):
        out = np.zeros(np.broadcast(x1, x2).shape)
        for (j1, j2), c in self.modes:
            out = out + np.real(c * np.exp(2j * np.pi * (j1 * x1 + j2 * x2)))
        return out

    def shifted(self, a: float) -> "TrigPolynomial":
        m = dict(self.modes)
        m[(0, 0)] = m.get((0, 0), 0.0) - a
        return TrigPolynomial(tuple(m.items()))

    def max_abs_bound(self) -> float:
        """Upper bound on sup|g| via the l1 norm of the amplitudes."""
        return float(sum(abs(c) for _, c in self.modes))

    @property
    def label(self) -> str:
        return "trig[" + ",".join(f"({j1},{j2})" for (j1, j2), _ in self.modes) + "]"


@dataclass(frozen=True, eq=False)
class CallableObservable(Observable):
    """Wraps an arbitrary vectorised function of (x1, x2)."""

    fn: object
    name: str = "callable"

    def sample(self, x1, x2):
        return self.fn(x1, x2)

    def shifted(self, a: float) -> "CallableObservable":
        fn = self.fn
        return CallableObservable(lambda x1, x2: fn(x1, x2) - a, name=f"{self.name}-shifted")

    def max_abs_bound(self) -> float:
        g = np.linspace(0.0, 1.0, 257)[:-1]
        x1, x2 = np.meshgrid(g, g, indexing="ij")
        return float(np.abs(self.sample(x1, x2)).max()) * 1.5

    @property
    def label(self) -> str:
        return self.name


def standard_observable() -> TrigPolynomial:
    """g(x1, x2) = cos(4 pi x1) + sin(2 pi x2)."""
    return TrigPolynomial(
        (
            ((2, 0), 0.5),
            ((-2, 0), 0.5),
            ((0, 1), -0.5j),
            ((0, -1), 0.5j),
        )
    )


def eval_observable(g: Observable, p: TorusPoint) -> float:
    return g(p)
