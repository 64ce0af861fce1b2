"""Spectral approximation of statistical data of Anosov maps on the 2-torus.

Public surface: torus maps and observables, the hyperbolicity certificate,
discrete Fourier grids, smoothing kernels, transfer-operator assembly,
spectral statistics (SRB density, CLT variance, rate function) and the Ulam
baseline.
"""

__version__ = "0.1.0"

from .backend import backend_name
from .certificate import (
    CertificateReport,
    beta_alpha,
    certified_delta_threshold,
    certify,
    cone_preservation_max_delta,
    contraction_check,
    diffeo_margin,
    translate_bound_product,
)
from .grids import (
    GridSpec,
    SpectralVector,
    coarse_freqs,
    evaluate_on_fine,
    forward_transform,
    restrict_to_coarse,
    riemann_integral,
)
from .kernels import (
    BumpKernel,
    FejerKernel,
    bump_coefficients,
    fejer_coefficients,
    match_epsilon,
    summability_check,
)
from .operators import OperatorMatrix, apply, assemble
from .stats import (
    EigenData,
    RateTable,
    VarianceResult,
    centered_observable,
    lambda_curve,
    leading_eigenpair,
    rate_function,
    srb_density,
    variance,
)
from .torus import (
    CallableObservable,
    LinearToral,
    Observable,
    PerturbedCat,
    TorusPoint,
    TrigPolynomial,
    cat_map,
    eval_map,
    eval_observable,
    standard_observable,
)
from .ulam import UlamMatrix, build_ulam, ulam_srb, ulam_variance

__all__ = [
    "backend_name",
    "CertificateReport",
    "beta_alpha",
    "certified_delta_threshold",
    "certify",
    "cone_preservation_max_delta",
    "contraction_check",
    "diffeo_margin",
    "translate_bound_product",
    "GridSpec",
    "SpectralVector",
    "coarse_freqs",
    "evaluate_on_fine",
    "forward_transform",
    "restrict_to_coarse",
    "riemann_integral",
    "BumpKernel",
    "FejerKernel",
    "bump_coefficients",
    "fejer_coefficients",
    "match_epsilon",
    "summability_check",
    "OperatorMatrix",
    "apply",
    "assemble",
    "EigenData",
    "RateTable",
    "VarianceResult",
    "centered_observable",
    "lambda_curve",
    "leading_eigenpair",
    "rate_function",
    "srb_density",
    "variance",
    "CallableObservable",
    "LinearToral",
    "Observable",
    "PerturbedCat",
    "TorusPoint",
    "TrigPolynomial",
    "cat_map",
    "eval_map",
    "eval_observable",
    "standard_observable",
    "UlamMatrix",
    "build_ulam",
    "ulam_srb",
    "ulam_variance",
]
