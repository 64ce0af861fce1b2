"""Closed-form hyperbolicity certificate for the perturbed cat map.

All checks refer to the appendix-form map T(x) = Ax + delta(cos(2 pi x1),
sin(4 pi x2 + 1)) with A the cat matrix.  The worst-case derivative
perturbation is delta' = 4 pi delta; for the section7 form (cosine amplitude
2 delta) the same bound applies, since max(sup|d1|, sup|d2|) = 4 pi delta for
both forms.

Five checks are aggregated by :func:`certify`:

* diffeomorphism margin s(delta) < 1,
* invariant-cone preservation delta <= alpha(1/l - l) / (4 pi (alpha+1)^2),
* forward and inverse cone-vector contraction via a worst-case quadratic,
* the translate-bound product C * Theta < 1.

Everything is plain double precision; each check reports its numeric margin
so distance-to-failure is visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from itertools import product

LAMBDA_S = (3.0 - math.sqrt(5.0)) / 2.0
_LAM_INV = 1.0 / LAMBDA_S


@dataclass(frozen=True)
class ConeParams:
    """Cone aperture and the derived derivative-perturbation bound."""

    alpha: float
    delta_prime: float
    lambda_s: float = LAMBDA_S

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass
class CheckResult:
    passed: bool
    margin: float


def diffeo_margin(delta: float):
    """Contraction constant of the quantitative inverse-function argument.

    s = 8 pi d sqrt(6 + (1 + 4 pi d cos 1)^2) / (1 - 8 pi d); the map is a
    certified diffeomorphism when 8 pi d < 1 and s < 1.  Returns (s, passed),
    with s = inf when the denominator is nonpositive.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    den = 1.0 - 8.0 * math.pi * delta
    if den <= 0.0:
        return math.inf, False
    s = (
        8.0
        * math.pi
        * delta
        * math.sqrt(6.0 + (1.0 + 4.0 * math.pi * delta * math.cos(1.0)) ** 2)
        / den
    )
    return s, s < 1.0


def cone_preservation_max_delta(alpha: float) -> float:
    """Largest delta certified to preserve the stable and unstable cones."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return alpha * (_LAM_INV - LAMBDA_S) / (4.0 * math.pi * (alpha + 1.0) ** 2)


def _contraction_poly(beta, a, b, c, d, ones):
    """The worst-case contraction quadratic evaluated at beta."""
    return (
        beta * beta * (b * b + (_LAM_INV + d) ** 2 - ones)
        + 2.0 * beta * ((LAMBDA_S + a) + c * (_LAM_INV + d))
        + ((LAMBDA_S + a) ** 2 + c * c - ones)
    )


def contraction_check(delta: float, alpha: float, direction: str = "forward"):
    """Worst-case cone-vector contraction test.

    The contraction quadratic in beta is maximised over beta = +-alpha and
    over all sign corners of (a, b, c, d) at magnitude delta' = 4 pi delta,
    plus the per-variable interior critical points (each variable enters with
    positive curvature, so these only confirm the corner maximum).  For the
    inverse direction the two constant ones are replaced by the determinant
    lower bound 1 - (5/2) delta' - delta'^2 / 2.  Passing also requires the
    leading-coefficient condition 1/lambda >= 1 + delta'.

    Returns (worst, passed).
    """
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    dp = 4.0 * math.pi * delta
    ones = 1.0 if direction == "forward" else 1.0 - 2.5 * dp - 0.5 * dp * dp

    def clip(x):
        return min(dp, max(-dp, x))

    worst = -math.inf
    for beta in (-alpha, alpha):
        for sa, sb, sc, sd in product((-1.0, 1.0), repeat=4):
            corner = (sa * dp, sb * dp, sc * dp, sd * dp)
            candidates = [corner]
            a, b, c, d = corner
            # stationary points in each variable (minima; included for
            # completeness of the sweep)
            candidates.append((clip(-LAMBDA_S - beta), b, c, d))
            candidates.append((a, 0.0, c, d))
            candidates.append((a, b, clip(-beta * (_LAM_INV + d)), d))
            if beta != 0.0:
                candidates.append((a, b, c, clip(-_LAM_INV - c / beta)))
            for a_, b_, c_, d_ in candidates:
                worst = max(worst, _contraction_poly(beta, a_, b_, c_, d_, ones))
    passed = worst < 0.0 and _LAM_INV >= 1.0 + dp
    return worst, passed


def beta_alpha(alpha: float) -> float:
    """Norm-equivalence constant sqrt(2) a (3a + sqrt(2+3a^2)) sqrt(1 + a sqrt(2+3a^2))."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    s = math.sqrt(2.0 + 3.0 * alpha * alpha)
    return math.sqrt(2.0) * alpha * (3.0 * alpha + s) * math.sqrt(1.0 + alpha * s)


def translate_bound_product(alpha: float):
    """The product bounding C_tau * Theta_T in the adapted norm.

    Returns (product, passed) with passed iff product < 1.  Raises ValueError
    when (1 - alpha^2)^2 <= beta(alpha), where the norm equivalence
    degenerates.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    w = (1.0 - alpha * alpha) ** 2
    ba = beta_alpha(alpha)
    if w <= ba:
        raise ValueError("norm-equivalence bound degenerate: (1-a^2)^2 <= beta(a)")
    first = (w + ba) / (w - ba)
    second = (
        4.0 * alpha * (1.0 - alpha * alpha) * math.sqrt(1.0 + alpha * alpha)
        + alpha * alpha * (1.0 + alpha * alpha)
    ) / w
    prod = first * second
    return prod, prod < 1.0


@dataclass
class CertificateReport:
    """Outcome of the five hyperbolicity checks with numeric margins."""

    delta: float
    alpha: float
    diffeo: CheckResult
    cone_preservation: CheckResult
    forward_contraction: CheckResult
    inverse_contraction: CheckResult
    translate_bound: CheckResult
    overall: bool = field(init=False)

    def __post_init__(self):
        self.overall = bool(
            self.diffeo.passed
            and self.cone_preservation.passed
            and self.forward_contraction.passed
            and self.inverse_contraction.passed
            and self.translate_bound.passed
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["overall"] = self.overall
        return d


def certify(delta: float, alpha: float) -> CertificateReport:
    """Run all five checks for the appendix-form map at (delta, alpha)."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    s, ok = diffeo_margin(delta)
    diffeo = CheckResult(ok, s)
    max_d = cone_preservation_max_delta(alpha)
    cone = CheckResult(delta <= max_d, max_d)
    wf, okf = contraction_check(delta, alpha, "forward")
    wi, oki = contraction_check(delta, alpha, "inverse")
    try:
        prod, okt = translate_bound_product(alpha)
        translate = CheckResult(okt, prod)
    except ValueError:
        translate = CheckResult(False, math.inf)
    return CertificateReport(
        delta=delta,
        alpha=alpha,
        diffeo=diffeo,
        cone_preservation=cone,
        forward_contraction=CheckResult(okf, wf),
        inverse_contraction=CheckResult(oki, wi),
        translate_bound=translate,
    )


def certified_delta_threshold(alpha: float, hi: float = 0.05, iters: int = 60) -> float:
    """Largest certified delta at a given alpha, located by bisection."""
    lo = 0.0
    if not certify(lo, alpha).overall:
        return 0.0
    while certify(hi, alpha).overall:
        hi *= 2.0
        if hi > 1.0:
            return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if certify(mid, alpha).overall:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
