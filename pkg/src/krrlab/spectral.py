"""Kernels defined through their eigensystem ``k(x, x') = sum_j mu_j e_j(x) e_j(x')``.

A :class:`SpectrumSpec` generates the eigenvalues, an :class:`EigenFamily`
supplies orthonormal eigenfunctions on a one-dimensional domain, and
:class:`SpectralKernel` ties the two together.  The Brownian (min) kernel on
``[0, 1]`` carries its closed form; every other kernel is evaluated through
the truncated series.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from ._trig import trig_analysis, trig_synthesis
from .errors import DomainError

LAWS = ("power", "power-log", "exponential", "explicit", "brownian")
FAMILIES = ("brownian-sine", "torus-fourier", "abstract-indicator")

# columns of the dense basis matrix evaluated per chunk on the truncated path
_CHUNK = 4096


@dataclass(frozen=True)
class SpectrumSpec:
    """Declarative eigenvalue law truncated at ``M`` terms.

    ``power``:        scale * j**-beta
    ``power-log``:    scale * j**-beta * (log(j+1)/log 2)**-alpha
    ``exponential``:  scale * c**(j-1)
    ``explicit``:     the given non-increasing positive list
    ``brownian``:     (2 / (pi (2j-1)))**2
    """

    law: str = "brownian"
    M: int = 10_000
    beta: float = 2.0
    scale: float = 1.0
    alpha: float = 0.0
    c: float = 0.5
    values: tuple = None

    def __post_init__(self):
        if self.law not in LAWS:
            raise DomainError(f"unknown spectrum law {self.law!r}; expected one of {LAWS}")
        if self.law == "explicit":
            if self.values is None or len(self.values) == 0:
                raise DomainError("explicit law needs a non-empty list of values")
            vals = np.asarray(self.values, dtype=float)
            if np.any(vals <= 0) or np.any(np.diff(vals) > 0):
                raise DomainError("explicit eigenvalues must be positive and non-increasing")
            object.__setattr__(self, "values", tuple(float(v) for v in vals))
            object.__setattr__(self, "M", len(vals))
        if int(self.M) < 1:
            raise DomainError(f"truncation M must be a positive integer, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        if self.law in ("power", "power-log") and not self.beta > 1:
            raise DomainError(f"power law needs beta > 1, got {self.beta}")
        if self.law in ("power", "power-log", "exponential") and not self.scale > 0:
            raise DomainError(f"scale must be positive, got {self.scale}")
        if self.law == "power-log" and self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        if self.law == "exponential" and not 0 < self.c < 1:
            raise DomainError(f"exponential law needs c in (0, 1), got {self.c}")
        mu = self._generate(np.arange(1, self.M + 1))
        if not np.all(mu > 0):
            first = int(np.argmin(mu > 0)) + 1
            raise DomainError(
                f"eigenvalue {first} underflows to zero; reduce M below {first}"
            )
        object.__setattr__(self, "_mu", mu)

    def _generate(self, j):
        j = np.asarray(j, dtype=float)
        if self.law == "brownian":
            return (2.0 / (math.pi * (2.0 * j - 1.0))) ** 2
        if self.law == "power":
            return self.scale * j ** (-self.beta)
        if self.law == "power-log":
            return self.scale * j ** (-self.beta) * (np.log(j + 1.0) / math.log(2.0)) ** (-self.alpha)
        if self.law == "exponential":
            return self.scale * self.c ** (j - 1.0)
        return np.asarray(self.values, dtype=float)[j.astype(int) - 1]

    @property
    def eigenvalues(self):
        """All ``M`` eigenvalues as a read-only array."""
        mu = self._mu.view()
        mu.flags.writeable = False
        return mu

    @property
    def decay_exponent(self):
        """Polynomial decay rate beta, or None when the law has none."""
        if self.law == "brownian":
            return 2.0
        if self.law in ("power", "power-log"):
            return float(self.beta)
        return None


def eigenvalue(spec, j):
    """Return ``mu_j`` (1-based) of ``spec``."""
    if not 1 <= j <= spec.M:
        raise DomainError(f"eigenvalue index {j} outside 1..{spec.M}")
    return float(spec._mu[j - 1])


@dataclass(frozen=True)
class EigenFamily:
    """Orthonormal eigenfunctions ``e_1, e_2, ...`` on a 1-d domain.

    * ``brownian-sine``: ``sqrt(2) sin((2j-1) pi x / 2)`` on ``[0, 1]``
    * ``torus-fourier``: ``1, sqrt(2) cos(2 pi x), sqrt(2) sin(2 pi x), ...`` on ``[0, 1)``
    * ``abstract-indicator``: ``sqrt(size) * 1[x == j-1]`` on ``{0, ..., size-1}``
      with the uniform measure.
    """

    name: str = "brownian-sine"
    size: int = None  # only used by abstract-indicator

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise DomainError(f"unknown eigenfunction family {self.name!r}; expected one of {FAMILIES}")

    @property
    def domain(self):
        return {"brownian-sine": "unit-interval", "torus-fourier": "torus",
                "abstract-indicator": "abstract-index"}[self.name]

    def check_points(self, x):
        x = np.asarray(x, dtype=float)
        if self.name == "brownian-sine":
            if np.any((x < 0) | (x > 1)) or np.any(~np.isfinite(x)):
                raise DomainError("points must lie in [0, 1]")
        elif self.name == "torus-fourier":
            if np.any((x < 0) | (x >= 1)) or np.any(~np.isfinite(x)):
                raise DomainError("points must lie in [0, 1)")
        else:
            if np.any(x != np.round(x)) or np.any((x < 0) | (x >= self.size)):
                raise DomainError(f"points must be integers in 0..{self.size - 1}")
        return x

    def default_grid(self, size=4096):
        """Deterministic grid used for sup-norm and density computations."""
        if self.name == "brownian-sine":
            return np.linspace(0.0, 1.0, size)
        if self.name == "torus-fourier":
            return np.arange(size) / size
        return np.arange(self.size, dtype=float)

    def quadrature(self, nodes=10_000):
        """Nodes and weights integrating against the reference measure rho."""
        if self.name == "abstract-indicator":
            return np.arange(self.size, dtype=float), np.full(self.size, 1.0 / self.size)
        x = (np.arange(nodes) + 0.5) / nodes
        return x, np.full(nodes, 1.0 / nodes)

    def basis(self, x, m, start=0):
        """Dense matrix ``E[i, j-1-start] = e_j(x_i)`` for ``j = start+1..m``."""
        x = np.asarray(x, dtype=float)
        j = np.arange(start + 1, m + 1)
        if self.name == "brownian-sine":
            return math.sqrt(2.0) * np.sin(np.outer(x, (2 * j - 1) * (math.pi / 2)))
        if self.name == "torus-fourier":
            ang = 2 * math.pi * np.outer(x, j // 2)
            out = np.where(j % 2 == 0, np.cos(ang), np.sin(ang)) * math.sqrt(2.0)
            out[:, j == 1] = 1.0
            return out
        out = np.zeros((x.size, j.size))
        idx = x.astype(int) - start
        hit = (idx >= 0) & (idx < j.size)
        out[np.flatnonzero(hit), idx[hit]] = math.sqrt(self.size)
        return out

    def analysis(self, x, w, m):
        """``P[j-1] = sum_i w_i e_j(x_i)`` for ``j = 1..m`` (w may be (n,) or (n, q))."""
        x = np.asarray(x, dtype=float)
        w = np.asarray(w, dtype=float)
        if self.name == "brownian-sine":
            # sin((2j-1) pi x/2) = sin((j-1) * pi x + pi x / 2)
            _, S = trig_analysis(math.pi * x, 0.5 * math.pi * x, w, m)
            return math.sqrt(2.0) * S
        if self.name == "torus-fourier":
            F = m // 2 + 1
            C, S = trig_analysis(2 * math.pi * x, 0.0, w, F)
            out = np.empty((m,) + w.shape[1:])
            out[0] = w.sum(axis=0)
            out[1::2] = math.sqrt(2.0) * C[1 : 1 + len(out[1::2])]
            out[2::2] = math.sqrt(2.0) * S[1 : 1 + len(out[2::2])]
            return out
        out = np.zeros((m,) + w.shape[1:])
        idx = x.astype(int)
        hit = idx < m
        np.add.at(out, idx[hit], math.sqrt(self.size) * w[hit])
        return out

    def synthesis(self, x, coeffs):
        """``f(x_i) = sum_j c_j e_j(x_i)``."""
        x = np.asarray(x, dtype=float)
        c = np.asarray(coeffs, dtype=float)
        if self.name == "brownian-sine":
            return math.sqrt(2.0) * trig_synthesis(math.pi * x, 0.5 * math.pi * x, sin_coeffs=c)
        if self.name == "torus-fourier":
            m = c.size
            F = m // 2 + 1
            a = np.zeros(F)
            b = np.zeros(F)
            a[0] = c[0]
            a[1 : 1 + len(c[1::2])] = math.sqrt(2.0) * c[1::2]
            b[1 : 1 + len(c[2::2])] = math.sqrt(2.0) * c[2::2]
            return trig_synthesis(2 * math.pi * x, 0.0, cos_coeffs=a, sin_coeffs=b)
        idx = x.astype(int)
        out = np.zeros(x.shape)
        hit = idx < c.size
        out[hit] = math.sqrt(self.size) * c[idx[hit]]
        return out

    def weighted_square_sum(self, x, w):
        """``sum_j w_j e_j(x)**2`` evaluated at every point of ``x``."""
        x = np.asarray(x, dtype=float)
        w = np.asarray(w, dtype=float)
        if self.name == "brownian-sine":
            # 2 sin^2(u) = 1 - cos(2u), 2u = (2j-1) pi x = (j-1) 2 pi x + pi x
            C = trig_synthesis(2 * math.pi * x, math.pi * x, cos_coeffs=w)
            return np.maximum(w.sum() - C, 0.0)
        if self.name == "torus-fourier":
            # 2cos^2 = 1 + cos(2u), 2sin^2 = 1 - cos(2u)
            m = w.size
            wc = w[1::2]
            ws = np.zeros(wc.size)
            ws[: len(w[2::2])] = w[2::2]
            a = np.zeros(wc.size + 1)
            a[1:] = wc - ws
            const = w[0] + wc.sum() + ws.sum()
            return np.maximum(const + trig_synthesis(4 * math.pi * x, 0.0, cos_coeffs=a), 0.0)
        idx = x.astype(int)
        out = np.zeros(x.shape)
        hit = idx < w.size
        out[hit] = self.size * w[idx[hit]]
        return out


def _brownian_min(x, y):
    return np.minimum(x, y)


@dataclass(frozen=True)
class SpectralKernel:
    """Truncated eigensystem plus an optional exact evaluator.

    For ``torus-fourier`` each spectrum value is shared by a cos/sin pair, so
    the kernel is translation invariant: basis function ``j`` gets
    ``mu_{floor(j/2)+1}`` and the kernel has ``2M - 1`` basis functions.
    """

    spectrum: SpectrumSpec
    family: EigenFamily = field(default_factory=EigenFamily)
    closed_form: object = None

    def __post_init__(self):
        if self.family.name == "abstract-indicator" and self.family.size != self.spectrum.M:
            object.__setattr__(self, "family", EigenFamily("abstract-indicator", self.spectrum.M))

    @cached_property
    def mu(self):
        spec_mu = self.spectrum._mu
        if self.family.name == "torus-fourier":
            mu = spec_mu[np.arange(1, 2 * self.spectrum.M) // 2]
        else:
            mu = spec_mu.copy()
        mu.flags.writeable = False
        return mu

    @property
    def size(self):
        return self.mu.size

    @property
    def decay_exponent(self):
        return self.spectrum.decay_exponent

    def tail_bound(self, M):
        """``sum_{j>M} 2 mu_j`` over the kernel's own spectrum (sup|e_j|^2 <= 2)."""
        if self.spectrum.law == "brownian":
            # closed form: sum_{j>M} (2/(pi(2j-1)))^2 = 1/2 - sum_{j<=M}
            return 2.0 * (0.5 - float(np.sum(self.mu[:M])))
        return 2.0 * float(np.sum(self.mu[M:]))

    def with_truncation(self, M):
        """Same kernel (closed form kept) with the spectrum truncated at ``M``."""
        spec = self.spectrum
        if spec.law == "explicit":
            if M > spec.M:
                raise DomainError(f"explicit spectrum has only {spec.M} values")
            values = spec.values[:M]
        else:
            values = None
        new = SpectrumSpec(law=spec.law, M=M, beta=spec.beta, scale=spec.scale,
                           alpha=spec.alpha, c=spec.c, values=values)
        return SpectralKernel(new, self.family, self.closed_form)

    def truncated(self, M=None):
        """Drop the closed form (and optionally shorten the spectrum)."""
        spec = self.spectrum
        if M is not None:
            spec = SpectrumSpec(law=spec.law, M=M, beta=spec.beta, scale=spec.scale,
                                alpha=spec.alpha, c=spec.c,
                                values=None if spec.values is None else spec.values[:M])
        return SpectralKernel(spec, self.family)


def brownian_kernel(M=10_000):
    """The min kernel on [0, 1] with its sine eigensystem."""
    return SpectralKernel(SpectrumSpec("brownian", M=M), EigenFamily("brownian-sine"),
                          closed_form=_brownian_min)


def make_kernel(law="brownian", family=None, M=10_000, beta=2.0, scale=1.0, alpha=0.0,
                c=0.5, values=None):
    """Build a kernel from config-style keywords."""
    if family is None:
        family = "brownian-sine"
    spec = SpectrumSpec(law=law, M=M, beta=beta, scale=scale, alpha=alpha, c=c,
                        values=None if values is None else tuple(values))
    fam = EigenFamily(family, spec.M if family == "abstract-indicator" else None)
    closed = _brownian_min if (law == "brownian" and family == "brownian-sine") else None
    return SpectralKernel(spec, fam, closed)


def kernel_matrix(kernel, x, y, truncated=False):
    """Cross-kernel matrix ``k(x_a, y_b)``."""
    x = kernel.family.check_points(np.atleast_1d(x))
    y = kernel.family.check_points(np.atleast_1d(y))
    if kernel.closed_form is not None and not truncated:
        return kernel.closed_form(x[:, None], y[None, :])
    out = np.zeros((x.size, y.size))
    # sqrt(mu) on both factors keeps k(x, y) == k(y, x) bit for bit
    root = np.sqrt(kernel.mu)
    for start in range(0, root.size, _CHUNK):
        stop = min(start + _CHUNK, root.size)
        Ex = kernel.family.basis(x, stop, start) * root[start:stop]
        Ey = Ex if y is x else kernel.family.basis(y, stop, start) * root[start:stop]
        out += Ex @ Ey.T
    return out


def kernel_eval(kernel, x, x2, truncated=False):
    """``k(x, x')`` for scalar points; closed form when available."""
    return float(kernel_matrix(kernel, [x], [x2], truncated=truncated)[0, 0])


def gram_matrix(kernel, points, q_values=None, truncated=False):
    """Weighted Gram matrix ``K_n[i, j] = k(x_i, x_j) / (n sqrt(q_i q_j))``."""
    x = np.asarray(points, dtype=float)
    n = x.size
    if n < 1:
        raise DomainError("gram_matrix needs at least one point")
    q = np.ones(n) if q_values is None else np.asarray(q_values, dtype=float)
    if q.shape != (n,):
        raise DomainError("q_values must have one entry per point")
    if np.any(~(q > 0)):
        raise DomainError("sampling weights q must be strictly positive")
    K = kernel_matrix(kernel, x, x, truncated=truncated)
    s = 1.0 / np.sqrt(n * q)
    K = K * s[:, None] * s[None, :]
    return 0.5 * (K + K.T)
