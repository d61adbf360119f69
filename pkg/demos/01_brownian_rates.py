# Learning curves for the min kernel
#
# The kernel k(x, x') = min(x, x') on [0, 1] has eigenvalues
# mu_j = (2 / (pi (2j - 1)))^2 and sine eigenfunctions, so every quantity
# below can be computed from coefficients instead of integrals.

import numpy as np

from krrlab import (
    ExperimentPlan,
    brownian_kernel,
    hp_errors,
    make_target,
    noiseless_rate_experiment,
    sample_dataset,
    solve_krr,
)

kernel = brownian_kernel(10_000)
print(kernel.mu[:4])

# A target with c_j = j^-(0.5 + s).  For s = 0.5 it lies outside the RKHS.

target = make_target("Fs", M=10_000, s=0.5)
data = sample_dataset(64, target, kernel, seed=1)

# lambda = 0 gives the minimum-norm interpolant
sol = solve_krr(data, kernel, 0.0)
print("max train residual", np.max(np.abs(sol.predict(data.x) - data.y)))

# Squared H^p errors from one residual vector, for several p at once
for p, err in hp_errors(sol, target, [0.0, 0.25], 10_000).items():
    print(f"p={p:g}  error^2={err.value:.3e}  last block {err.last_block:.1e}")

# Now the whole curve: 20 repetitions at n = 32 ... 1024, then a log-log fit.
# Expect a slope near -1.

plan = ExperimentPlan(kernel=kernel, target_kind="Fs", s=0.5, p_list=(0.0,))
res = noiseless_rate_experiment(plan)
for n, m, s in zip(res.ns, res.mean[:, 0], res.std[:, 0]):
    print(f"n={n:5d}  mean {m:.3e}  std {s:.1e}")
fit = res.fits[0.0]
print(f"slope {fit.slope:+.3f}  95% CI [{fit.ci_low:+.3f}, {fit.ci_high:+.3f}]  theory {res.theory[0.0]:+.3f}")
