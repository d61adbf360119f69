"""Kernel ridge regression with spectrally defined kernels: interpolation-norm
errors, degrees of freedom and learning-curve experiments."""

__version__ = "0.1.0"

from .errors import (
    BracketError,
    ConditioningWarning,
    DivergenceError,
    DivergenceWarning,
    DomainError,
    TruncationWarning,
)
from .spectral import (
    EigenFamily,
    SpectralKernel,
    SpectrumSpec,
    brownian_kernel,
    eigenvalue,
    gram_matrix,
    kernel_eval,
    kernel_matrix,
    make_kernel,
)
from .dof import (
    DofQuery,
    critical_penalty,
    dof_asymptotic_check,
    f_gamma,
    n_gamma,
    optimal_density,
)
from .krr import (
    Dataset,
    KRRSolution,
    TargetFunction,
    hp_error,
    hp_errors,
    make_target,
    min_norm_limit_check,
    sample_dataset,
    solve_krr,
)
from .harness import (
    ExperimentPlan,
    dirichlet_psd_check,
    emit_results,
    lambda_sweep,
    noiseless_rate_experiment,
    noisy_rate_experiment,
    p_threshold_scan,
    saturation_scan,
    slope_fit,
)
