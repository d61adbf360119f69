"""Refined degrees of freedom, critical penalty and the equalising density.

For a spectral kernel with eigenpairs ``(mu_j, e_j)`` and a sampling density
``q`` (relative to the reference measure)

    N_gamma(lam) = sum_j (mu_j / (mu_j + lam))**gamma
    F_gamma(lam) = sup_x  sum_j (mu_j / (mu_j + lam))**gamma e_j(x)**2 / q(x)

The supremum is taken over a finite grid.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import BracketError, DivergenceWarning, DomainError


def dyadic_block_ratio(terms):
    """Ratio of the last two complete dyadic blocks ``(2^(k-1), 2^k]`` of a series.

    Returns ``(ratio, last_block_sum)``.  A convergent power-law tail has a ratio
    strictly below one; ``ratio >= 1`` means partial sums keep growing.
    """
    terms = np.asarray(terms, dtype=float)
    m = terms.size
    if m < 4:
        return 0.0, float(terms[-1]) if m else 0.0
    k = int(math.floor(math.log2(m)))
    last = float(np.sum(terms[2 ** (k - 1) : 2**k]))
    prev = float(np.sum(terms[2 ** (k - 2) : 2 ** (k - 1)]))
    if prev == 0.0:
        return (math.inf if last > 0 else 0.0), last
    return last / prev, last


def _check_summable(mu, gamma):
    ratio, _ = dyadic_block_ratio(mu**gamma)
    if ratio > 0.99:
        warnings.warn(
            f"sum_j mu_j^{gamma:g} looks divergent (dyadic block ratio {ratio:.3f}); "
            "gamma-DoFs are only finite because of truncation",
            DivergenceWarning,
            stacklevel=3,
        )


@dataclass(frozen=True)
class DofQuery:
    gamma: float
    lam: float
    kernel: object
    density: object = None  # callable x -> q(x) > 0, None for q == 1
    sup_grid: object = None  # defaults to kernel.family.default_grid()

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.lam >= 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam}")

    def grid(self):
        if self.sup_grid is None:
            return self.kernel.family.default_grid()
        grid = np.asarray(self.sup_grid, dtype=float)
        if grid.size == 0:
            raise DomainError("sup_grid must be non-empty")
        return grid


def dof_weights(mu, lam, gamma):
    mu = np.asarray(mu, dtype=float)
    return (mu / (mu + lam)) ** gamma


def n_gamma(query):
    """Trace-type degrees of freedom ``N_gamma(lambda)``."""
    mu = query.kernel.mu
    _check_summable(mu, query.gamma)
    return float(np.sum(dof_weights(mu, query.lam, query.gamma)))


def _ratio_max(vals, density, x):
    """``max vals / q`` over the grid.  Points where both vanish are skipped
    (a null set for the sup); a positive leverage where q = 0 gives inf."""
    if density is None:
        return float(np.max(vals))
    q = np.asarray(density(x), dtype=float)
    if np.any(q < 0) or not np.all(np.isfinite(q)):
        raise DomainError("density must be finite and non-negative on the sup grid")
    zero = q == 0
    if np.any(vals[zero] > 0):
        return math.inf
    if np.all(zero):
        raise DomainError("density vanishes on the whole sup grid")
    return float(np.max(vals[~zero] / q[~zero]))


def leverage_profile(kernel, lam, gamma, x):
    """``sum_j (mu_j/(mu_j+lam))**gamma e_j(x)**2`` at every point of ``x``."""
    w = dof_weights(kernel.mu, lam, gamma)
    return kernel.family.weighted_square_sum(np.asarray(x, dtype=float), w)


def f_gamma(query, check_refinement=False):
    """Maximal degrees of freedom ``F_gamma(lambda)`` over ``query.grid()``.

    With ``check_refinement`` the grid is doubled and ``(value, rel_change)``
    is returned instead of the value alone.
    """
    grid = query.grid()
    _check_summable(query.kernel.mu, query.gamma)
    vals = leverage_profile(query.kernel, query.lam, query.gamma, grid)
    value = _ratio_max(vals, query.density, grid)
    if not check_refinement:
        return value
    fine = _refine(query.kernel.family, grid)
    fvals = leverage_profile(query.kernel, query.lam, query.gamma, fine)
    fine_value = _ratio_max(fvals, query.density, fine)
    return fine_value, abs(fine_value - value) / max(abs(fine_value), 1e-300)


def _refine(family, grid):
    if family.name == "abstract-indicator":
        return grid
    if family.name == "torus-fourier":
        return np.arange(2 * grid.size) / (2 * grid.size)
    return np.linspace(grid.min(), grid.max(), 2 * grid.size - 1)


def critical_penalty(n, delta, gamma, kernel, density=None, sup_grid=None, rtol=1e-6,
                     max_iter=200):
    """Smallest ``lambda >= 0`` with ``n >= 5 F max(1, log(14 F / delta))``.

    ``F_gamma`` is non-increasing in ``lambda``, so the feasible set is an
    interval ``[Lambda, inf)`` and geometric bisection locates its left end.
    """
    if not n >= 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")

    def feasible(lam):
        F = f_gamma(DofQuery(gamma, lam, kernel, density, sup_grid))
        return n >= 5 * F * max(1.0, math.log(14 * F / delta))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DivergenceWarning)
        if feasible(0.0):
            return 0.0
        hi = float(kernel.mu[0]) * 1e6
        if not feasible(hi):
            raise BracketError(
                f"n={n} is too small: the critical-penalty inequality fails on [0, {hi:.3g}]"
            )
        lo = hi
        iters = 0
        while feasible(lo):
            lo /= 10.0
            iters += 1
            if lo < 1e-300 or iters > max_iter:
                return 0.0
        while hi / lo - 1.0 > rtol and iters < max_iter:
            mid = math.sqrt(lo * hi)
            if feasible(mid):
                hi = mid
            else:
                lo = mid
            iters += 1
    return hi


def optimal_density(gamma, lam, kernel):
    """Density ``nu_lambda`` that makes ``F_gamma(lambda) == N_gamma(lambda)``."""
    if not lam > 0:
        raise DomainError("optimal density needs lambda > 0")
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    w = dof_weights(kernel.mu, lam, gamma)
    total = float(np.sum(w))

    def nu(x):
        return kernel.family.weighted_square_sum(np.asarray(x, dtype=float), w) / total

    nu.tag = f"nu(gamma={gamma:g},lambda={lam:g})"
    return nu


@dataclass
class AsymptoticReport:
    law: str
    slope: float
    intercept: float
    max_ratio_deviation: float
    values: np.ndarray
    lambdas: np.ndarray


def dof_asymptotic_check(spec_or_kernel, gamma, lambda_grid):
    """Fit the small-lambda growth of ``N_gamma``.

    Power-law spectra: slope of ``log N`` against ``log lambda`` (theory
    ``-1/beta``).  Exponential spectra: ``N / log(1/lambda)`` should stay bounded,
    reported as the max/min spread of that ratio.
    """
    from .spectral import EigenFamily, SpectralKernel, SpectrumSpec

    kernel = spec_or_kernel
    if isinstance(spec_or_kernel, SpectrumSpec):
        kernel = SpectralKernel(spec_or_kernel, EigenFamily("brownian-sine"))
    lams = np.sort(np.asarray(lambda_grid, dtype=float))
    if lams.size < 3 or np.any(lams <= 0) or math.log10(lams[-1] / lams[0]) < 3 - 1e-9:
        raise DomainError("lambda grid must hold positive values spanning at least 3 decades")
    mu = kernel.mu
    N = np.array([np.sum(dof_weights(mu, lam, gamma)) for lam in lams])
    law = kernel.spectrum.law
    if law == "exponential":
        ratio = N / np.log(1.0 / lams)
        slope, intercept = np.polyfit(np.log(np.log(1.0 / lams)), np.log(N), 1)
        return AsymptoticReport(law, float(slope), float(intercept),
                                float(ratio.max() / ratio.min()), N, lams)
    slope, intercept = np.polyfit(np.log(lams), np.log(N), 1)
    fitted = np.exp(intercept) * lams**slope
    return AsymptoticReport(law, float(slope), float(intercept),
                            float(np.max(np.maximum(N / fitted, fitted / N))), N, lams)
