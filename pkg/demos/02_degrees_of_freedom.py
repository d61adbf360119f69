# Degrees of freedom and the equalising density

import numpy as np

from krrlab import DofQuery, brownian_kernel, critical_penalty, f_gamma, make_kernel, n_gamma, optimal_density

# On the torus every point looks the same, so the sup of the leverage
# equals its average: F_gamma == N_gamma.

torus = make_kernel("power", "torus-fourier", M=2000, beta=2)
for lam in (1e-2, 1e-4):
    q = DofQuery(1.0, lam, torus)
    print(f"torus lam={lam:g}: N={n_gamma(q):.6f}  F={f_gamma(q):.6f}")

# The sine basis is not symmetric.  Leverage vanishes at 0 and peaks
# near x = 1, so F is about twice N.

bk = brownian_kernel(10_000)
q = DofQuery(1.0, 1e-3, bk)
print(f"brownian: N={n_gamma(q):.3f}  F={f_gamma(q):.3f}")

# Sampling from nu_lambda, proportional to the leverage, closes the gap.
nu = optimal_density(1.0, 1e-3, bk)
qn = DofQuery(1.0, 1e-3, bk, density=nu)
print(f"under {nu.tag}: F={f_gamma(qn):.3f}")

x, w = bk.family.quadrature(10_000)
print("integral of nu:", np.sum(w * nu(x)))

# Smallest penalty that the sample size can support
for n in (100, 1000, 10_000):
    print(n, critical_penalty(n, 0.1, 1.0, bk))
