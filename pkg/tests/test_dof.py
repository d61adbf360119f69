import math
import warnings

import numpy as np
import pytest

from krrlab.dof import (
    DofQuery,
    critical_penalty,
    dof_asymptotic_check,
    dyadic_block_ratio,
    f_gamma,
    n_gamma,
    optimal_density,
)
from krrlab.errors import BracketError, DivergenceWarning, DomainError
from krrlab.spectral import EigenFamily, SpectralKernel, SpectrumSpec, brownian_kernel, make_kernel


def explicit(values, family="brownian-sine"):
    return make_kernel("explicit", family, values=values)


def test_two_term_sum():
    assert n_gamma(DofQuery(1.0, 1.0, explicit([1.0, 0.5]))) == pytest.approx(1 / 2 + 1 / 3, rel=1e-15)


def test_large_lambda_vanishes():
    k = brownian_kernel(1000)
    assert n_gamma(DofQuery(1.0, 1e12, k)) < 1e-11


def test_zero_lambda_counts_terms():
    k = make_kernel("power", M=500, beta=2)
    assert n_gamma(DofQuery(2.0, 0.0, k)) == 500


def test_query_validation():
    k = brownian_kernel(10)
    with pytest.raises(DomainError):
        DofQuery(0.0, 1.0, k)
    with pytest.raises(DomainError):
        DofQuery(1.0, -1.0, k)
    with pytest.raises(DomainError):
        f_gamma(DofQuery(1.0, 1.0, k, sup_grid=[]))


def test_divergence_warning():
    k = make_kernel("power", M=4096, beta=2)
    with pytest.warns(DivergenceWarning):
        n_gamma(DofQuery(0.5, 1e-3, k))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        n_gamma(DofQuery(1.0, 1e-3, k))


def test_dyadic_ratio():
    j = np.arange(1, 1025, dtype=float)
    assert dyadic_block_ratio(j**-2.0)[0] == pytest.approx(0.5, rel=0.01)
    assert dyadic_block_ratio(1.0 / j)[0] > 0.99
    assert dyadic_block_ratio(np.ones(3))[0] == 0.0


def test_single_constant_eigenfunction():
    # torus family with one spectrum value is the single constant function
    k = explicit([1.0], "torus-fourier")
    assert k.size == 1
    assert f_gamma(DofQuery(1.0, 1.0, k)) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("gamma", [0.75, 1.0, 2.0])
@pytest.mark.parametrize("lam", [1e-1, 1e-3, 1e-5])
def test_torus_equality(gamma, lam):
    k = make_kernel("power", "torus-fourier", M=3000, beta=2)
    q = DofQuery(gamma, lam, k)
    N = n_gamma(q)
    assert abs(f_gamma(q) - N) <= 1e-8 * N


def test_grid_refinement_oracle():
    q = DofQuery(1.0, 1e-3, brownian_kernel(10_000))
    coarse = f_gamma(q)
    dense = f_gamma(DofQuery(1.0, 1e-3, q.kernel, sup_grid=np.linspace(0, 1, 8192)))
    assert abs(coarse - dense) <= 0.01 * dense
    value, rel = f_gamma(q, check_refinement=True)
    assert rel < 0.01


def test_monotone_in_lambda():
    k = brownian_kernel(5000)
    lams = np.logspace(-6, 1, 15)
    N = [n_gamma(DofQuery(1.0, lam, k)) for lam in lams]
    F = [f_gamma(DofQuery(1.0, lam, k)) for lam in lams]
    assert np.all(np.diff(N) <= 0)
    assert np.all(np.diff(F) <= 1e-12 * np.array(F[:-1]))


def test_gamma_ordering():
    k = brownian_kernel(5000)
    for lam in (1e-4, 1e-2, 1.0):
        F = [f_gamma(DofQuery(g, lam, k)) for g in (0.6, 1.0, 1.5, 3.0)]
        N = [n_gamma(DofQuery(g, lam, k)) for g in (0.6, 1.0, 1.5, 3.0)]
        assert np.all(np.diff(F) <= 0)
        assert np.all(np.diff(N) <= 0)


def test_f_at_least_n_for_sampling_density():
    k = brownian_kernel(5000)
    for lam in (1e-4, 1e-2):
        q = DofQuery(1.0, lam, k)
        assert f_gamma(q) >= n_gamma(q) * (1 - 1e-6)


def _feasible(n, delta, F):
    return n >= 5 * F * max(1.0, math.log(14 * F / delta))


def test_critical_penalty_scan_oracle():
    k = brownian_kernel(1000)
    grid = k.family.default_grid(256)
    lam_star = critical_penalty(1000, 0.1, 1.0, k, sup_grid=grid)
    # independent dense evaluation of F over 10^4 log-spaced penalties
    scan = np.logspace(-8, 2, 10_000)
    E2 = k.family.basis(grid, k.size) ** 2
    W = k.mu[None, :] / (k.mu[None, :] + scan[:, None])
    F = (W @ E2.T).max(axis=1)
    ok = 1000 >= 5 * F * np.maximum(1.0, np.log(14 * F / 0.1))
    first = scan[int(np.argmax(ok))]
    step = scan[1] / scan[0]
    assert first / step <= lam_star * (1 + 1e-6)
    assert lam_star <= first * (1 + 1e-6)
    assert _feasible(1000, 0.1, f_gamma(DofQuery(1.0, lam_star, k, sup_grid=grid)))


def test_critical_penalty_boundary():
    k = brownian_kernel(2000)
    lam_tilde = 1e-3
    F = f_gamma(DofQuery(1.0, lam_tilde, k))
    delta = 0.99
    n = math.ceil(5 * F * max(1.0, math.log(14 * F / delta)))
    assert critical_penalty(n, delta, 1.0, k) <= lam_tilde * (1 + 1e-6)


def test_critical_penalty_monotone():
    k = brownian_kernel(2000)
    grid = k.family.default_grid(512)
    by_n = [critical_penalty(n, 0.1, 1.0, k, sup_grid=grid) for n in (200, 1000, 5000, 25_000)]
    assert np.all(np.diff(by_n) <= 0)
    by_delta = [critical_penalty(1000, d, 1.0, k, sup_grid=grid) for d in (0.01, 0.1, 0.5)]
    assert np.all(np.diff(by_delta) <= 0)


def test_critical_penalty_zero_and_bracket():
    k = explicit([1.0, 0.5], "torus-fourier")
    assert critical_penalty(10**6, 0.1, 1.0, k) == 0.0
    # a tiny q inflates F beyond reach of the bracket
    with pytest.raises(BracketError):
        critical_penalty(10, 0.1, 1.0, brownian_kernel(100), density=lambda x: np.full_like(x, 1e-9))
    with pytest.raises(DomainError):
        critical_penalty(10, 1.5, 1.0, brownian_kernel(100))


def test_optimal_density_torus_is_uniform():
    k = make_kernel("power", "torus-fourier", M=500, beta=2)
    nu = optimal_density(1.0, 1e-3, k)
    x = np.linspace(0, 1, 300, endpoint=False)
    assert np.allclose(nu(x), 1.0, atol=1e-12)


def test_optimal_density_single_term():
    k = explicit([1.0])
    nu = optimal_density(1.0, 0.3, k)
    x = np.linspace(0, 1, 50)
    assert np.allclose(nu(x), 2 * np.sin(np.pi * x / 2) ** 2, atol=1e-14)


def test_optimal_density_integrates_to_one():
    k = brownian_kernel(10_000)
    nu = optimal_density(1.0, 1e-2, k)
    x, w = k.family.quadrature(10_000)
    assert abs(np.sum(w * nu(x)) - 1.0) <= 1e-4


def test_optimal_density_equalises():
    k = brownian_kernel(10_000)
    nu = optimal_density(1.0, 1e-3, k)
    grid = np.linspace(0.001, 1, 4096)
    q = DofQuery(1.0, 1e-3, k, density=nu, sup_grid=grid)
    assert f_gamma(q) == pytest.approx(n_gamma(q), rel=1e-10)
    assert "gamma=1" in nu.tag


def test_vanishing_density_points():
    k = brownian_kernel(1000)
    nu = optimal_density(1.0, 1e-2, k)
    # nu(0) = 0 together with every e_j(0) = 0: the point is skipped
    q = DofQuery(1.0, 1e-2, k, density=nu, sup_grid=np.linspace(0, 1, 513))
    assert f_gamma(q) == pytest.approx(n_gamma(q), rel=1e-10)
    bad = DofQuery(1.0, 1e-2, k, density=lambda x: (x < 0.5).astype(float), sup_grid=np.linspace(0, 1, 65))
    assert f_gamma(bad) == math.inf
    with pytest.raises(DomainError):
        f_gamma(DofQuery(1.0, 1e-2, k, density=lambda x: -np.ones_like(x)))


def test_optimal_density_rejects_zero_lambda():
    with pytest.raises(DomainError):
        optimal_density(1.0, 0.0, brownian_kernel(10))


def test_power_asymptotics():
    r = dof_asymptotic_check(SpectrumSpec("power", M=100_000, beta=2), 1.0, np.logspace(-6, -2, 9))
    assert r.slope == pytest.approx(-0.5, abs=0.05)


def test_exponential_asymptotics():
    r = dof_asymptotic_check(SpectrumSpec("exponential", M=1000, c=0.5), 1.0, np.logspace(-12, -2, 11))
    assert r.max_ratio_deviation <= 3.0


def test_finite_spectrum_plateau():
    spec = SpectrumSpec("explicit", values=[1.0, 0.5, 0.1])
    kernel = SpectralKernel(spec, EigenFamily("brownian-sine"))
    r = dof_asymptotic_check(kernel, 1.0, np.logspace(-14, -10, 5))
    assert r.values[0] == pytest.approx(3.0, rel=1e-12)


def test_short_grid_rejected():
    with pytest.raises(DomainError):
        dof_asymptotic_check(SpectrumSpec("power", M=100), 1.0, [1e-3, 1e-2, 1e-1])
