"""Learning-curve experiments: lambda sweeps, rate fits, saturation scans.

Every experiment is a grid of independent cells ``(n, rep)``.  A cell draws
its dataset from ``SeedSequence([base_seed, n, rep])``, solves KRR once and
evaluates the squared ``H^p`` error for all requested ``p`` from one shared
residual vector.  Cells may run on a thread pool; results are always collected
in grid order, so output does not depend on the worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import csv
import json
import math
import os
from pathlib import Path

import numpy as np
from scipy import stats

from .errors import DivergenceError, DomainError
from .krr import (
    coefficient_residuals,
    hp_error_from_residuals,
    make_target,
    sample_dataset,
    solve_krr,
)
from .spectral import gram_matrix

DEFAULT_N_GRID = (32, 64, 128, 256, 512, 1024)
CSV_COLUMNS = ("experiment_id", "kernel", "s", "p", "n", "lambda", "sigma", "rep",
               "error_sq", "m_trunc")
PSEUDO_ZERO = 1e-20


def worker_count(workers=None):
    if workers is None:
        workers = int(os.environ.get("KRR_THREADS", "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def _map(fn, items, workers):
    workers = worker_count(workers)
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cell_seed(base_seed, n, rep):
    return np.random.SeedSequence([int(base_seed), int(n), int(rep)])


def saturation_index(beta):
    """Smallest ``p`` at which ``sum_j mu_j^(2-p)`` diverges for ``mu_j ~ j^-beta``."""
    return 2.0 - 1.0 / beta


def default_truncation(p, beta):
    """1e5 eigenfunctions within 0.5 of the p-threshold, 1e4 otherwise."""
    if beta is not None and saturation_index(beta) - p < 0.5:
        return 100_000
    return 10_000


def _kernel_label(kernel):
    spec = kernel.spectrum
    if spec.law == "brownian":
        return "brownian"
    if spec.law in ("power", "power-log"):
        return f"{spec.law}(beta={spec.beta:g})/{kernel.family.name}"
    return f"{spec.law}/{kernel.family.name}"


def _ensure_size(kernel, m):
    if kernel.size >= m:
        return kernel
    if kernel.spectrum.law == "explicit":
        raise DomainError(f"truncation m={m} exceeds explicit spectrum size {kernel.size}")
    M = (m + 2) // 2 if kernel.family.name == "torus-fourier" else m
    return kernel.with_truncation(M)


@dataclass
class ExperimentPlan:
    kernel: object
    target_kind: str = "Fs"
    s: float = 0.5
    p_list: tuple = (0.0,)
    n_grid: tuple = DEFAULT_N_GRID
    lambda_policy: str = "pseudo-zero"  # "fixed", "pseudo-zero" or "noisy-optimal"
    lam: float = PSEUDO_ZERO
    lambda_c: float = 0.05
    s_eff: float = None
    sigma: float = 0.0
    reps: int = 20
    base_seed: int = 0
    m_trunc: object = None  # int, {p: int}, or None for default_truncation
    beta: float = None
    experiment_id: str = "rates"
    slope_tol: float = None
    abort_on_divergence: bool = True
    workers: int = None

    def __post_init__(self):
        if self.lambda_policy not in ("fixed", "pseudo-zero", "noisy-optimal"):
            raise DomainError(f"unknown lambda policy {self.lambda_policy!r}")
        if self.beta is None:
            self.beta = self.kernel.decay_exponent
        self.p_list = tuple(float(p) for p in self.p_list)
        self.n_grid = tuple(int(n) for n in self.n_grid)
        if self.reps < 1:
            raise DomainError("reps must be >= 1")

    @property
    def target_s(self):
        return math.inf if self.target_kind == "Finf" else float(self.s)

    @property
    def effective_s(self):
        s = self.target_s if self.s_eff is None else self.s_eff
        return min(s, 2.0)

    def check_grid(self):
        ns = np.asarray(self.n_grid, dtype=float)
        if ns.size < 5:
            raise DomainError("rate fits need at least 5 sample sizes")
        if np.any(np.diff(ns) <= 0):
            raise DomainError("n_grid must be strictly increasing")
        decades = math.log10(ns[-1] / ns[0])
        if ns.size < 2 * decades:
            raise DomainError("n_grid needs at least 2 points per decade")

    def lambda_for(self, n):
        if self.lambda_policy == "pseudo-zero":
            return 0.0
        if self.lambda_policy == "fixed":
            return float(self.lam)
        if self.beta is None:
            raise DomainError("noisy-optimal policy needs a decay exponent beta")
        s = self.effective_s
        return self.lambda_c * n ** (-s / (s * self.beta + 1.0))

    def truncation(self, p):
        if self.m_trunc is None:
            return default_truncation(p, self.beta)
        if isinstance(self.m_trunc, dict):
            return int(self.m_trunc.get(p, self.m_trunc.get(float(p))))
        return int(self.m_trunc)

    def theoretical_slope(self, p):
        s, beta = self.effective_s, self.beta
        if beta is None:
            return None
        if self.lambda_policy == "noisy-optimal":
            if self.sigma > 0:
                return -beta * (s - p) / (s * beta + 1.0)
            # noiseless labels: squared error ~ lambda^(s-p) with lambda ~ n^(-s/(s beta + 1))
            return -s * (s - p) / (s * beta + 1.0)
        return -beta * (s - p)

    def tolerance(self, p):
        if self.slope_tol is not None:
            return self.slope_tol
        if self.target_kind == "Fs" and self.s == 0.5 and p == 0.0:
            return 0.15
        return 0.3


def _prepare(plan):
    m_by_p = {p: plan.truncation(p) for p in plan.p_list}
    m_max = max(m_by_p.values())
    kernel = _ensure_size(plan.kernel, m_max)
    target = make_target(plan.target_kind, M=m_max, s=plan.s)
    return kernel, target, m_by_p, m_max


def _cell_errors(plan, kernel, target, m_by_p, m_max, n, rep, lambdas):
    data = sample_dataset(n, target, kernel, sigma=plan.sigma, seed=cell_seed(plan.base_seed, n, rep))
    K = gram_matrix(kernel, data.x, data.q)
    out = np.empty((len(lambdas), len(plan.p_list)))
    flags = []
    for a, lam in enumerate(lambdas):
        sol = solve_krr(data, kernel, lam, K=K)
        r = coefficient_residuals(sol, target, m_max)
        for b, p in enumerate(plan.p_list):
            m = m_by_p[p]
            h = hp_error_from_residuals(r[:m], kernel.mu, p, warn=False, target=target)
            out[a, b] = h.value
            if not h.convergent:
                flags.append((p, m))
    return out, flags


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    ci_low: float
    ci_high: float
    stderr: float
    npoints: int

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "ci_low": self.ci_low,
                "ci_high": self.ci_high, "stderr": self.stderr, "npoints": self.npoints}


def slope_fit(ns, errors, level=0.95):
    """Least-squares line through ``(log n, log error)`` with a t-interval on the slope."""
    x = np.asarray(ns, dtype=float)
    y = np.asarray(errors, dtype=float)
    if x.shape != y.shape:
        raise DomainError("ns and errors must have the same length")
    if x.size < 5:
        raise DomainError(f"slope fit needs at least 5 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("slope fit needs positive sample sizes and errors (log undefined)")
    lx, ly = np.log(x), np.log(y)
    res = stats.linregress(lx, ly)
    half = stats.t.ppf(0.5 + level / 2, x.size - 2) * res.stderr
    return SlopeFit(float(res.slope), float(res.intercept), float(res.slope - half),
                    float(res.slope + half), float(res.stderr), int(x.size))


@dataclass
class RateResult:
    experiment_id: str
    kernel: str
    s: float
    sigma: float
    ns: tuple
    p_list: tuple
    lambdas: np.ndarray  # per n
    errors: np.ndarray  # (len(ns), reps, len(p_list))
    m_by_p: dict
    fits: dict
    theory: dict
    tolerance: dict
    divergent: list = field(default_factory=list)

    @property
    def mean(self):
        return self.errors.mean(axis=1)

    @property
    def std(self):
        return self.errors.std(axis=1, ddof=1) if self.errors.shape[1] > 1 else np.zeros_like(self.mean)

    @property
    def sem(self):
        return self.std / math.sqrt(self.errors.shape[1])

    def passed(self, p):
        th = self.theory.get(p)
        if th is None:
            return None
        return abs(self.fits[p].slope - th) <= self.tolerance[p]

    @property
    def all_passed(self):
        flags = [self.passed(p) for p in self.p_list]
        return all(f for f in flags if f is not None)

    def rows(self):
        for i, n in enumerate(self.ns):
            for r in range(self.errors.shape[1]):
                for b, p in enumerate(self.p_list):
                    yield {"experiment_id": self.experiment_id, "kernel": self.kernel,
                           "s": self.s, "p": p, "n": n, "lambda": float(self.lambdas[i]),
                           "sigma": self.sigma, "rep": r, "error_sq": float(self.errors[i, r, b]),
                           "m_trunc": self.m_by_p[p]}

    def summary(self):
        fits = []
        for b, p in enumerate(self.p_list):
            fits.append({"label": f"s={self.s:g},p={p:g}", "s": _num(self.s), "p": p,
                         **self.fits[p].as_dict(), "theory": self.theory[p],
                         "tolerance": self.tolerance[p], "passed": self.passed(p),
                         "mean": [float(v) for v in self.mean[:, b]],
                         "std": [float(v) for v in self.std[:, b]],
                         "sem": [float(v) for v in self.sem[:, b]]})
        return {"experiment_id": self.experiment_id, "kind": "rates", "kernel": self.kernel,
                "passed": bool(self.all_passed), "ns": list(self.ns), "fits": fits,
                "extra": {"sigma": self.sigma, "m_trunc": {str(p): m for p, m in self.m_by_p.items()}}}

    def plot_series(self):
        return {f"p{p:g}": (np.asarray(self.ns, float), self.mean[:, b], self.std[:, b])
                for b, p in enumerate(self.p_list)}


def _num(v):
    return None if v is None else (str(v) if isinstance(v, float) and math.isinf(v) else v)


def _run_rates(plan):
    plan.check_grid()
    kernel, target, m_by_p, m_max = _prepare(plan)
    cells = [(n, rep) for n in plan.n_grid for rep in range(plan.reps)]
    lam_by_n = {n: plan.lambda_for(n) for n in plan.n_grid}

    def run(cell):
        n, rep = cell
        return _cell_errors(plan, kernel, target, m_by_p, m_max, n, rep, [lam_by_n[n]])

    results = _map(run, cells, plan.workers)
    errors = np.empty((len(plan.n_grid), plan.reps, len(plan.p_list)))
    divergent = []
    for (n, rep), (err, flags) in zip(cells, results):
        errors[plan.n_grid.index(n), rep] = err[0]
        for p, m in flags:
            if plan.abort_on_divergence:
                raise DivergenceError(
                    f"H^{p:g} error series does not converge (n={n}, rep={rep}, m={m})", p=p, m=m)
            divergent.append({"n": n, "rep": rep, "p": p, "m": m})
    mean = errors.mean(axis=1)
    fits = {p: slope_fit(plan.n_grid, mean[:, b]) for b, p in enumerate(plan.p_list)}
    return RateResult(
        experiment_id=plan.experiment_id, kernel=_kernel_label(kernel), s=plan.target_s,
        sigma=plan.sigma, ns=plan.n_grid, p_list=plan.p_list,
        lambdas=np.array([lam_by_n[n] for n in plan.n_grid]), errors=errors, m_by_p=m_by_p,
        fits=fits, theory={p: plan.theoretical_slope(p) for p in plan.p_list},
        tolerance={p: plan.tolerance(p) for p in plan.p_list}, divergent=divergent)


def noiseless_rate_experiment(plan):
    """Mean squared ``H^p`` error over ``plan.n_grid`` with exact labels."""
    if plan.sigma != 0:
        raise DomainError("noiseless experiment needs sigma = 0")
    if plan.lambda_policy == "noisy-optimal" or (plan.lambda_policy == "fixed" and plan.lam > 1e-8):
        raise DomainError("noiseless experiment needs the pseudo-zero or a tiny fixed lambda")
    return _run_rates(plan)


def noisy_rate_experiment(plan, require_noise=True):
    """Rate experiment under ``lambda = c n^(-s/(s beta + 1))``, ``s`` capped at 2."""
    if require_noise and not plan.sigma > 0:
        raise DomainError("noisy experiment needs sigma > 0")
    if plan.lambda_policy != "noisy-optimal":
        raise DomainError("noisy experiment needs the noisy-optimal lambda policy")
    return _run_rates(plan)


@dataclass
class SweepResult:
    experiment_id: str
    kernel: str
    s: float
    n: int
    lambdas: np.ndarray  # decreasing
    p_list: tuple
    errors: np.ndarray  # (len(lambdas), reps, len(p_list))
    m_by_p: dict
    violations: dict

    @property
    def mean(self):
        return self.errors.mean(axis=1)

    @property
    def std(self):
        return self.errors.std(axis=1, ddof=1) if self.errors.shape[1] > 1 else np.zeros_like(self.mean)

    @property
    def total_violations(self):
        return int(sum(self.violations.values()))

    def rows(self):
        for a, lam in enumerate(self.lambdas):
            for r in range(self.errors.shape[1]):
                for b, p in enumerate(self.p_list):
                    yield {"experiment_id": self.experiment_id, "kernel": self.kernel, "s": self.s,
                           "p": p, "n": self.n, "lambda": float(lam), "sigma": 0.0, "rep": r,
                           "error_sq": float(self.errors[a, r, b]), "m_trunc": self.m_by_p[p]}

    def summary(self):
        fits = [{"label": f"s={self.s:g},p={p:g}", "s": self.s, "p": p,
                 "violations": self.violations[p], "passed": self.violations[p] == 0,
                 "mean": [float(v) for v in self.mean[:, b]],
                 "std": [float(v) for v in self.std[:, b]]}
                for b, p in enumerate(self.p_list)]
        return {"experiment_id": self.experiment_id, "kind": "lambda-sweep", "kernel": self.kernel,
                "passed": self.total_violations == 0, "fits": fits,
                "extra": {"n": self.n, "lambdas": [float(v) for v in self.lambdas]}}

    def plot_series(self):
        return {f"s{self.s:g}_p{p:g}": (self.lambdas, self.mean[:, b], self.std[:, b])
                for b, p in enumerate(self.p_list)}


def monotonicity_violations(mean, std, k=2.0):
    """Adjacent pairs (penalty decreasing) whose mean error rises by more than
    ``k`` times the larger of the two standard deviations."""
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    rise = mean[1:] - mean[:-1]
    return int(np.sum(rise > k * np.maximum(std[1:], std[:-1])))


def lambda_sweep(plan, lambda_grid, n=100):
    """Noiseless error at fixed ``n`` along a decreasing penalty grid."""
    if plan.sigma != 0:
        raise DomainError("lambda sweep is defined for noiseless labels")
    lams = np.sort(np.asarray(lambda_grid, dtype=float))[::-1]
    if lams.size > 1:
        pos = lams[lams > 0]
        if pos.size < 2 or math.log10(pos[0] / pos[-1]) < 3 - 1e-9:
            raise DomainError("lambda grid must span at least 3 decades")
    kernel, target, m_by_p, m_max = _prepare(plan)

    def run(rep):
        return _cell_errors(plan, kernel, target, m_by_p, m_max, n, rep, list(lams))

    results = _map(run, range(plan.reps), plan.workers)
    errors = np.stack([err for err, _ in results], axis=1)
    std = errors.std(axis=1, ddof=1) if plan.reps > 1 else np.zeros(errors.shape[::2])
    mean = errors.mean(axis=1)
    violations = {p: monotonicity_violations(mean[:, b], std[:, b]) for b, p in enumerate(plan.p_list)}
    return SweepResult(plan.experiment_id, _kernel_label(kernel), plan.target_s, n, lams,
                       plan.p_list, errors, m_by_p, violations)


@dataclass
class ScanTable:
    experiment_id: str
    kind: str
    entries: list  # dicts: label, slope fit / divergence data, theory, passed
    results: list  # underlying RateResult objects

    @property
    def passed(self):
        return all(e["passed"] is not False for e in self.entries)

    def rows(self):
        for res in self.results:
            yield from res.rows()

    def summary(self):
        return {"experiment_id": self.experiment_id, "kind": self.kind,
                "kernel": self.results[0].kernel if self.results else "",
                "passed": bool(self.passed), "fits": self.entries, "extra": {}}

    def plot_series(self):
        out = {}
        for res in self.results:
            for name, series in res.plot_series().items():
                out[f"s{res.s:g}_{name}"] = series
        return out


def _ci_overlap(a, b):
    return a.ci_low <= b.ci_high and b.ci_low <= a.ci_high


def saturation_scan(plan, s_list, p=0.0):
    """Noiseless rate slopes across target smoothness ``s`` at fixed ``p``.

    Slopes for ``s >= 2`` are compared with the ``s = 2`` slope (or the
    smallest ``s >= 2`` present) through confidence-interval overlap; slopes
    for ``s < 2`` against ``-beta (s - p)``.
    """
    results = []
    for s in s_list:
        sub = ExperimentPlan(**{**plan.__dict__, "target_kind": "Fs", "s": float(s), "p_list": (p,),
                                "experiment_id": plan.experiment_id})
        results.append(noiseless_rate_experiment(sub))
    entries = []
    sat = [r for r in results if r.s >= 2]
    ref = min(sat, key=lambda r: r.s) if sat else None
    for res in results:
        fit = res.fits[p]
        entry = {"label": f"s={res.s:g},p={p:g}", "s": res.s, "p": p, **fit.as_dict(),
                 "theory": res.theory[p], "tolerance": res.tolerance[p], "passed": None}
        if len(results) > 1:
            if res.s >= 2:
                entry["reference_s"] = ref.s
                entry["passed"] = bool(_ci_overlap(fit, ref.fits[p]))
            else:
                entry["passed"] = bool(res.passed(p))
        entries.append(entry)
    return ScanTable(plan.experiment_id, "saturation", entries, results)


def truncation_growth(plan, p, n=100, m=10_000, factor=2):
    """Mean truncated ``H^p`` error at ``m`` and ``factor * m`` eigenfunctions."""
    m2 = factor * m
    kernel = _ensure_size(plan.kernel, m2)
    target = make_target(plan.target_kind, M=m2, s=plan.s)
    lam = plan.lambda_for(n)
    small, large = [], []
    for rep in range(plan.reps):
        data = sample_dataset(n, target, kernel, sigma=plan.sigma, seed=cell_seed(plan.base_seed, n, rep))
        r = coefficient_residuals(solve_krr(data, kernel, lam), target, m2)
        small.append(hp_error_from_residuals(r[:m], kernel.mu, p, warn=False).value)
        large.append(hp_error_from_residuals(r, kernel.mu, p, warn=False).value)
    small, large = float(np.mean(small)), float(np.mean(large))
    return small, large, large / small


def p_threshold_scan(plan, p_list, n_div=100, m_div=10_000, growth_threshold=1.2):
    """Convergent rates below the p-threshold, truncation growth above it.

    Uses the ``F*_inf`` target.  Every ``p < 2 - 1/beta`` joins one rate
    experiment; every other ``p`` is checked for divergence by doubling the
    truncation at ``n = n_div``.
    """
    if plan.beta is None:
        raise DomainError("p-threshold scan needs a decay exponent beta")
    p0 = saturation_index(plan.beta)
    base = {**plan.__dict__, "target_kind": "Finf"}
    below = tuple(p for p in p_list if p < p0)
    entries, results = [], []
    if below:
        res = noiseless_rate_experiment(ExperimentPlan(**{**base, "p_list": below}))
        results.append(res)
        for p in below:
            entries.append({"label": f"p={p:g}", "p": p, "regime": "convergent", **res.fits[p].as_dict(),
                            "theory": res.theory[p], "tolerance": res.tolerance[p],
                            "passed": bool(res.passed(p))})
    for p in p_list:
        if p < p0:
            continue
        small, large, ratio = truncation_growth(ExperimentPlan(**base), p, n=n_div, m=m_div)
        entries.append({"label": f"p={p:g}", "p": p, "regime": "divergent", "n": n_div,
                        "m": m_div, "error_m": small, "error_2m": large, "growth_ratio": ratio,
                        "threshold": growth_threshold, "passed": bool(ratio > growth_threshold)})
    entries.sort(key=lambda e: e["p"])
    return ScanTable(plan.experiment_id, "p-threshold", entries, results)


@dataclass
class DirichletReport:
    m: int
    n: int
    seed: int
    min_eigenvalue: float
    bound: float
    passed: bool

    def rows(self):
        return iter(())

    def summary(self):
        return {"experiment_id": "dirichlet-check", "kind": "dirichlet", "kernel": "dirichlet",
                "passed": bool(self.passed),
                "fits": [{"label": f"m={self.m},n={self.n},seed={self.seed}",
                          "min_eigenvalue": self.min_eigenvalue, "bound": self.bound,
                          "passed": bool(self.passed)}],
                "extra": {}}

    def plot_series(self):
        return {}


def dirichlet_gram(points, m):
    """``H[a, b] = 1 + 2 sum_{j=1}^m cos(2 pi j (x_a - x_b))``."""
    x = np.asarray(points, dtype=float)
    d = x[:, None] - x[None, :]
    j = np.arange(1, m + 1)
    return 1.0 + 2.0 * np.cos(2 * math.pi * d[..., None] * j).sum(axis=-1)


def dirichlet_psd_check(m, n, seed=0, points=None):
    """Smallest eigenvalue of ``H_n - (m+1)/n 11^T`` for uniform torus points."""
    if m % 2:
        raise DomainError(f"Dirichlet check needs an even m, got {m}")
    if points is None:
        points = np.random.default_rng(seed).uniform(0.0, 1.0, size=n)
    x = np.asarray(points, dtype=float)
    H = dirichlet_gram(x, m)
    A = H - (m + 1) / x.size * np.ones((x.size, x.size))
    lo = float(np.linalg.eigvalsh(0.5 * (A + A.T))[0])
    bound = -1e-6 * (m + 1)
    return DirichletReport(m, x.size, seed, lo, bound, lo >= bound)


def emit_results(result, path, fmt="csv"):
    """Write ``result`` under the directory ``path``.

    ``csv``: long-format rows (``CSV_COLUMNS``) plus one ``x y yerr`` plot-data
    file per series.  ``json``: the summary document.  Returns written paths.
    """
    out = Path(path)
    name = result.summary()["experiment_id"]
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            target = out / f"{name}.csv"
            with open(target, "w", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
                writer.writeheader()
                for row in result.rows():
                    writer.writerow({k: _fmt(v) for k, v in row.items()})
            written.append(target)
            for series, (x, y, yerr) in result.plot_series().items():
                target = out / f"{name}_plot_{series}.dat"
                np.savetxt(target, np.column_stack([x, y, yerr]), header="x y yerr",
                           fmt="%.17g")
                written.append(target)
        elif fmt == "json":
            target = out / f"{name}_summary.json"
            with open(target, "w") as fh:
                json.dump(_jsonable(result.summary()), fh, indent=2)
            written.append(target)
        else:
            raise DomainError(f"unknown output format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return written


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def load_csv(path):
    """Parse a CSV written by :func:`emit_results` back into typed rows."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append({"experiment_id": row["experiment_id"], "kernel": row["kernel"],
                         "s": float(row["s"]), "p": float(row["p"]), "n": int(row["n"]),
                         "lambda": float(row["lambda"]), "sigma": float(row["sigma"]),
                         "rep": int(row["rep"]), "error_sq": float(row["error_sq"]),
                         "m_trunc": int(row["m_trunc"])})
    return rows
