"""Weighted kernel ridge regression over spectral kernels.

With sample points ``x_i``, density values ``q_i`` and labels ``y_i`` the
estimator is ``f(x) = sum_i b_i k(x_i, x) / sqrt(n q_i)`` where

    b = (K_n + lam I)^{-1} y_hat,    y_hat_i = y_i / sqrt(n q_i)

and ``lam = 0`` selects the minimum-norm interpolant through the
pseudo-inverse.  Errors are measured in the interpolation norms
``||f||_{H^p}^2 = sum_j <f, e_j>^2 mu_j^{-p}``.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
import scipy.linalg

from .dof import dyadic_block_ratio
from .errors import ConditioningWarning, DomainError, TruncationWarning
from .spectral import gram_matrix, kernel_matrix

PINV_RTOL = 1e-12


@dataclass(frozen=True)
class TargetFunction:
    """``f* = sum_j c_j e_j`` with finitely many coefficients."""

    coeffs: np.ndarray
    label: str = "explicit"
    s: float = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def coefficient(self, j):
        return float(self.coeffs[j - 1]) if j <= self.coeffs.size else 0.0

    def padded(self, m):
        out = np.zeros(m)
        k = min(m, self.coeffs.size)
        out[:k] = self.coeffs[:k]
        return out

    def __call__(self, x, family):
        return family.synthesis(np.asarray(x, dtype=float), self.coeffs)


def make_target(kind, M=None, s=None, coeffs=None):
    """Target coefficients.

    ``"Fs"``:       c_j = j**-(0.5 + s), j <= M
    ``"Finf"``:     c = (1, 0, 0, ...)
    ``"explicit"``: the given coefficients
    """
    if kind in ("Fs", "paper-Fs"):
        if s is None or not s > 0:
            raise DomainError(f"Fs target needs s > 0, got {s}")
        if M is None:
            raise DomainError("Fs target needs a truncation M")
        j = np.arange(1, int(M) + 1, dtype=float)
        c = j ** -(0.5 + s)
        ratio, _ = dyadic_block_ratio(c**2)
        if ratio > 0.99:
            warnings.warn("target coefficients decay too slowly for a finite L2 norm",
                          TruncationWarning, stacklevel=2)
        return TargetFunction(c, f"F*_{s:g}", float(s))
    if kind in ("Finf", "paper-Finf"):
        return TargetFunction(np.array([1.0]), "F*_inf", math.inf)
    if kind == "explicit":
        if coeffs is None:
            raise DomainError("explicit target needs coefficients")
        c = np.asarray(coeffs, dtype=float)
        if dyadic_block_ratio(c**2)[0] > 0.99:
            warnings.warn("target coefficients decay too slowly for a finite L2 norm",
                          TruncationWarning, stacklevel=2)
        return TargetFunction(c, "explicit", s)
    raise DomainError(f"unknown target kind {kind!r}")


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    q: np.ndarray
    y: np.ndarray
    sigma: float
    seed: int
    clean: np.ndarray = None
    noise: np.ndarray = None

    @property
    def n(self):
        return self.x.size


def _inverse_cdf_sampler(family, density, table_size=2**16):
    if family.name == "abstract-indicator":
        support = np.arange(family.size, dtype=float)
        probs = np.asarray(density(support), dtype=float) / family.size
        total = probs.sum()
        if abs(total - 1.0) > 1e-3:
            raise DomainError(f"density integrates to {total:.6g}, not 1")
        probs = probs / total

        def draw(rng, n):
            return rng.choice(support, size=n, p=probs)

        return draw
    hi = 1.0 if family.name == "brownian-sine" else 1.0 - 1.0 / table_size
    grid = np.linspace(0.0, hi, table_size + 1)
    dens = np.asarray(density(grid), dtype=float)
    if np.any(dens < 0) or not np.all(np.isfinite(dens)):
        raise DomainError("density must be finite and non-negative")
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    if family.name == "torus-fourier":
        # close the periodic gap [hi, 1)
        cdf[-1] += 0.5 * (dens[-1] + dens[0]) * (1.0 - hi)
    total = cdf[-1]
    if abs(total - 1.0) > 1e-3:
        raise DomainError(f"density integrates to {total:.6g}, not 1")
    cdf /= total

    def draw(rng, n):
        return np.clip(np.interp(rng.uniform(size=n), cdf, grid), 0.0, hi)

    return draw


def sample_dataset(n, target, kernel, density=None, sigma=0.0, seed=0):
    """Draw ``n`` points from ``density`` (uniform when None) and label them.

    Points come from the first draws of the seeded stream and standard normals
    from the next ones, so changing ``sigma`` rescales the same noise.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    fam = kernel.family
    rng = np.random.default_rng(seed)
    if density is None:
        if fam.name == "abstract-indicator":
            x = rng.integers(0, fam.size, size=n).astype(float)
        else:
            x = rng.uniform(0.0, 1.0, size=n)
        q = np.ones(n)
    else:
        x = _inverse_cdf_sampler(fam, density)(rng, n)
        q = np.asarray(density(x), dtype=float)
        if np.any(~(q > 0)):
            raise DomainError("density vanishes at a sampled point")
    z = rng.standard_normal(n)
    clean = target(x, fam)
    noise = sigma * z
    return Dataset(x=x, q=q, y=clean + noise, sigma=float(sigma), seed=seed,
                   clean=clean, noise=noise)


@dataclass(frozen=True)
class KRRSolution:
    coeffs: np.ndarray
    lam: float
    x: np.ndarray
    q: np.ndarray
    kernel: object = field(repr=False)
    method: str = "cholesky"

    @property
    def n(self):
        return self.x.size

    @property
    def weights(self):
        """Coefficients of ``f = sum_i a_i k(x_i, .)``, i.e. ``b_i / sqrt(n q_i)``."""
        return self.coeffs / np.sqrt(self.n * self.q)

    def predict(self, x, truncated=False):
        Kx = kernel_matrix(self.kernel, np.atleast_1d(x), self.x, truncated=truncated)
        return Kx @ self.weights

    def eigen_coefficients(self, m):
        """``<f, e_j> = mu_j sum_i a_i e_j(x_i)`` for ``j = 1..m``."""
        return self.kernel.mu[:m] * self.kernel.family.analysis(self.x, self.weights, m)


def _pinv_solve(A, rhs):
    w, V = np.linalg.eigh(A)
    cutoff = PINV_RTOL * np.max(np.abs(w))
    inv = np.where(np.abs(w) > cutoff, 1.0 / np.where(w == 0, 1.0, w), 0.0)
    return V @ (inv[:, None] * (V.T @ rhs)) if rhs.ndim == 2 else V @ (inv * (V.T @ rhs))


def solve_system(K, rhs, lam):
    """Solve ``(K + lam I) b = rhs``; pseudo-inverse when ``lam == 0``."""
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if lam == 0:
        return _pinv_solve(K, rhs), "pinv"
    A = K + lam * np.eye(K.shape[0])
    try:
        cf = scipy.linalg.cho_factor(A, lower=True, check_finite=False)
        return scipy.linalg.cho_solve(cf, rhs, check_finite=False), "cholesky"
    except np.linalg.LinAlgError:
        w = np.linalg.eigvalsh(A)
        warnings.warn(
            f"K_n + lam I not positive definite (lam={lam:.3g}, eig range "
            f"[{w.min():.3g}, {w.max():.3g}]); using pseudo-inverse",
            ConditioningWarning,
            stacklevel=3,
        )
        return _pinv_solve(A, rhs), "pinv-fallback"


def scaled_labels(data, labels=None):
    y = data.y if labels is None else labels
    return np.asarray(y, dtype=float) / np.sqrt(data.n * data.q)


def solve_krr(data, kernel, lam, truncated=False, K=None):
    """Representer coefficients of weighted KRR at penalty ``lam``."""
    if K is None:
        K = gram_matrix(kernel, data.x, data.q, truncated=truncated)
    b, method = solve_system(K, scaled_labels(data), lam)
    return KRRSolution(b, float(lam), data.x, data.q, kernel, method)


@dataclass
class HpError:
    """Truncated squared ``H^p`` error with its truncation diagnostics."""

    value: float
    p: float
    m: int
    last_block: float
    block_ratio: float
    convergent: bool

    def __float__(self):
        return self.value


def coefficient_residuals(solution, target, m):
    """``r_j = <f_hat - f*, e_j>`` for ``j = 1..m``; shared across all ``p``."""
    if m > solution.kernel.size:
        raise DomainError(f"truncation m={m} exceeds kernel size {solution.kernel.size}")
    return solution.eigen_coefficients(m) - target.padded(m)


def hp_error_from_residuals(residuals, mu, p, warn=True, target=None):
    """``sum_j r_j^2 mu_j^{-p}`` plus dyadic-block convergence diagnostics.

    With ``target`` (its coefficient vector, or a TargetFunction) the
    divergence test runs on the two halves separately.  A non-zero kernel
    expansion ``sum_i a_i k(x_i, .)`` has H^p coefficients ``mu_j^{1-p/2} a.e_j``
    whose squares sum to infinity exactly when ``sum_j mu_j^{2-p}`` does, so
    the fitted half is judged from the spectrum, which unlike the sampled
    coefficients does not fluctuate from block to block.  The target half is
    judged from ``c_j^2 mu_j^{-p}``.
    """
    mu = np.asarray(mu, dtype=float)[: residuals.size]
    if np.any(mu <= 0):
        raise DomainError("H^p error needs strictly positive eigenvalues")
    weight = mu ** (-p)
    terms = residuals**2 * weight
    total = float(np.sum(terms))
    ratio, last = dyadic_block_ratio(terms)
    if target is not None:
        c = target.padded(residuals.size) if hasattr(target, "padded") else np.asarray(target)
        fitted = residuals + c
        ratio = dyadic_block_ratio(c**2 * weight)[0]
        if np.any(fitted != 0):
            ratio = max(ratio, dyadic_block_ratio(mu ** (2.0 - p))[0])
    convergent = ratio < 0.99
    res = HpError(total, float(p), residuals.size, last, ratio, convergent)
    if warn and convergent and total > 0 and last > 0.05 * total:
        warnings.warn(
            f"last dyadic block holds {last / total:.1%} of the H^{p:g} error; increase m",
            TruncationWarning,
            stacklevel=3,
        )
    return res


def hp_error(solution, target, p, m):
    """Squared ``H^p`` distance between the KRR solution and the target,
    truncated at ``m`` eigenfunctions.  Never raises on divergence; check
    ``.convergent``."""
    r = coefficient_residuals(solution, target, m)
    return hp_error_from_residuals(r, solution.kernel.mu, p, target=target)


def hp_errors(solution, target, p_list, m):
    r = coefficient_residuals(solution, target, m)
    return {float(p): hp_error_from_residuals(r, solution.kernel.mu, p, target=target)
            for p in p_list}


def bias_variance_split(data, kernel, lam, truncated=False):
    """Solutions for the clean labels and for the pure-noise labels."""
    if data.clean is None or data.noise is None:
        raise DomainError("dataset does not carry separate clean labels and noise")
    K = gram_matrix(kernel, data.x, data.q, truncated=truncated)
    rhs = np.column_stack([scaled_labels(data, data.clean), scaled_labels(data, data.noise)])
    b, method = solve_system(K, rhs, lam)
    bias = KRRSolution(b[:, 0], float(lam), data.x, data.q, kernel, method)
    var = KRRSolution(b[:, 1], float(lam), data.x, data.q, kernel, method)
    return bias, var


@dataclass
class MinNormReport:
    lambdas: np.ndarray
    distances: np.ndarray  # H^p norms of f_lam - f_0
    monotone: bool
    relative_final: float
    passed: bool


def min_norm_limit_check(data, kernel, lambdas, p=0.0, m=None, truncated=False, rtol=1e-6):
    """Track ``||f_lam - f_0||_{H^p}`` along a sequence ``lam -> 0``."""
    lams = np.asarray(lambdas, dtype=float)
    if lams.size == 0 or np.any(lams < 0) or np.any(np.diff(lams) >= 0):
        raise DomainError("lambda sequence must be strictly decreasing and non-negative")
    m = kernel.size if m is None else m
    K = gram_matrix(kernel, data.x, data.q, truncated=truncated)
    rhs = scaled_labels(data)
    b0, _ = solve_system(K, rhs, 0.0)
    zero = TargetFunction(np.zeros(1))
    dists = []
    for lam in lams:
        b, method = solve_system(K, rhs, lam)
        diff = KRRSolution(b - b0, float(lam), data.x, data.q, kernel, method)
        r = coefficient_residuals(diff, zero, m)
        dists.append(hp_error_from_residuals(r, kernel.mu, p, warn=False, target=zero).value)
    d = np.sqrt(np.array(dists))
    positive = d[lams > 0]
    monotone = bool(np.all(np.diff(positive) <= 1e-12 * max(positive[0], 1e-300))) if positive.size else True
    rel = float(d[-1] / d[0]) if d[0] > 0 else 0.0
    return MinNormReport(lams, d, monotone, rel, monotone and rel <= rtol)
