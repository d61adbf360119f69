"""Command-line entry point: ``krrlab <subcommand> [--config FILE] ...``.

Exit codes: 0 when every check of the run passes, 2 when a check fails,
1 on usage or runtime errors.
"""

import argparse
import copy
import csv
from importlib import resources
import json
from pathlib import Path
import sys

import jsonschema
import numpy as np

from . import __version__
from .dof import DofQuery, f_gamma, n_gamma, optimal_density
from .errors import DivergenceError, DomainError
from .harness import (
    DEFAULT_N_GRID,
    ExperimentPlan,
    dirichlet_psd_check,
    emit_results,
    lambda_sweep,
    noiseless_rate_experiment,
    noisy_rate_experiment,
    p_threshold_scan,
    saturation_scan,
)
from .krr import hp_errors, make_target, sample_dataset, solve_krr
from .spectral import make_kernel

DOF_COLUMNS = ("gamma", "lambda", "n_gamma", "f_gamma", "density_tag")
SUBCOMMANDS = ("dof", "solve", "sweep-lambda", "rates", "noisy-rates", "saturate", "p-scan",
               "dirichlet-check")

DEFAULTS = {
    "kernel": {"law": "brownian", "family": "brownian-sine", "beta": 2.0, "alpha": 0.0,
               "c": 0.5, "scale": 1.0, "M": 10_000, "values": None},
    "target": {"kind": "Fs", "s": 0.5, "coeffs": None},
    "experiment": {
        "n": 100, "lambda": 1e-20, "lambda_policy": "pseudo-zero", "lambda_c": 0.05,
        "s_eff": None, "sigma": 0.0, "seed": 0, "reps": 20, "p_list": [0.0], "m_trunc": None,
        "n_grid": list(DEFAULT_N_GRID), "s_list": [1.0, 1.5, 2.0, 3.0, 200.0],
        "lambda_grid": [10.0**-k for k in range(13)], "n_div": 100, "m_div": 10_000,
        "gamma_list": [0.5, 1.0, 2.0], "lambda_list": [10.0**-k for k in range(1, 6)],
        "density": "uniform", "dirichlet_m": 20, "dirichlet_n": 10, "dirichlet_trials": 100,
    },
    "output": {"dir": "results", "format": "csv"},
}

# per-subcommand defaults layered between DEFAULTS and the user's file
PRESETS = {
    "sweep-lambda": {"experiment": {"p_list": [0.0, 0.25]}},
    "noisy-rates": {"target": {"kind": "Finf"},
                    "experiment": {"sigma": 1.0, "p_list": [1.2], "lambda_policy": "noisy-optimal"}},
    "p-scan": {"target": {"kind": "Finf"}, "experiment": {"p_list": [1.0, 1.2, 1.6]}},
    "saturate": {"experiment": {"p_list": [0.0]}},
}


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _schema():
    text = resources.files("krrlab").joinpath("schemas/config.schema.json").read_text()
    return json.loads(text)


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def validate_config(raw):
    """All schema violations as ``"<dotted.path>: message"`` strings."""
    validator = jsonschema.Draft7Validator(_schema())
    errors = []
    for err in sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path))):
        path = ".".join(str(p) for p in err.absolute_path)
        if err.validator == "additionalProperties":
            extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
            for key in extra:
                errors.append(f"{'.'.join(filter(None, [path, key]))}: unknown key")
            continue
        errors.append(f"{path or '<root>'}: {err.message}")
    return errors


def parse_config(file=None, subcommand=None):
    """Read a JSON config, validate it and merge it over the defaults."""
    raw = {}
    if file is not None:
        path = Path(file)
        if not path.exists():
            raise ConfigError([f"config file not found: {path}"])
        try:
            raw = json.loads(path.read_text(encoding="utf-8") or "{}")
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: invalid JSON ({exc})"]) from exc
    return config_from_dict(raw, subcommand)


def config_from_dict(raw, subcommand=None):
    if not isinstance(raw, dict):
        raise ConfigError(["<root>: config must be a JSON object"])
    errors = validate_config(raw)
    if errors:
        raise ConfigError(errors)
    base = _merge(DEFAULTS, PRESETS.get(subcommand, {}))
    return _merge(base, raw)


def emit_config(config, path):
    Path(path).write_text(json.dumps(config, indent=2))


def _kernel(cfg, M=None):
    k = cfg["kernel"]
    return make_kernel(law=k["law"], family=k["family"], M=M or k["M"], beta=k["beta"],
                       scale=k["scale"], alpha=k["alpha"], c=k["c"], values=k["values"])


def _plan(cfg, experiment_id, **overrides):
    e, t = cfg["experiment"], cfg["target"]
    fields = dict(
        kernel=_kernel(cfg), target_kind=t["kind"], s=t["s"], p_list=tuple(e["p_list"]),
        n_grid=tuple(e["n_grid"]), lambda_policy=e["lambda_policy"], lam=e["lambda"],
        lambda_c=e["lambda_c"], s_eff=e["s_eff"], sigma=e["sigma"], reps=e["reps"],
        base_seed=e["seed"], m_trunc=e["m_trunc"], experiment_id=experiment_id,
    )
    fields.update(overrides)
    return ExperimentPlan(**fields)


def _fmt_slope(label, fit, theory, passed):
    th = "n/a" if theory is None else f"{theory:+.3f}"
    mark = "PASS" if passed else ("FAIL" if passed is False else "----")
    return (f"  {label:<18} slope {fit['slope']:+.3f}  CI [{fit['ci_low']:+.3f}, {fit['ci_high']:+.3f}]"
            f"  theory {th}  {mark}")


def _print_summary(summary, out):
    print(f"{summary['experiment_id']} ({summary['kernel']})", file=out)
    for fit in summary["fits"]:
        if "slope" in fit:
            print(_fmt_slope(fit["label"], fit, fit.get("theory"), fit.get("passed")), file=out)
        elif "growth_ratio" in fit:
            print(f"  {fit['label']:<18} H^p error m={fit['m']}: {fit['error_m']:.4g}, "
                  f"2m: {fit['error_2m']:.4g}, growth {fit['growth_ratio']:.3f} "
                  f"(> {fit['threshold']:g}) {'PASS' if fit['passed'] else 'FAIL'}", file=out)
        elif "violations" in fit:
            print(f"  {fit['label']:<18} monotonicity violations {fit['violations']}  "
                  f"{'PASS' if fit['passed'] else 'FAIL'}", file=out)
    print(f"overall: {'PASS' if summary['passed'] else 'FAIL'}", file=out)


def _run_dof(cfg, out_dir, fmt, out):
    e = cfg["experiment"]
    kernel = _kernel(cfg)
    rows = []
    for gamma in e["gamma_list"]:
        for lam in e["lambda_list"]:
            density, tag = None, "uniform"
            if e["density"] == "optimal":
                density = optimal_density(gamma, lam, kernel)
                tag = density.tag
            q = DofQuery(gamma, lam, kernel, density)
            rows.append({"gamma": gamma, "lambda": lam, "n_gamma": n_gamma(q),
                         "f_gamma": f_gamma(q), "density_tag": tag})
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = out_dir / "dof.json"
        path.write_text(json.dumps(rows, indent=2))
    else:
        path = out_dir / "dof.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=DOF_COLUMNS)
            writer.writeheader()
            for r in rows:
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    for r in rows:
        print(f"  gamma={r['gamma']:<5g} lambda={r['lambda']:<8.2g} N={r['n_gamma']:.6g} "
              f"F={r['f_gamma']:.6g}", file=out)
    print(f"wrote {path}", file=out)
    return 0


def _run_solve(cfg, out_dir, out):
    e, t = cfg["experiment"], cfg["target"]
    m = e["m_trunc"] or cfg["kernel"]["M"]
    kernel = _kernel(cfg, M=max(m, cfg["kernel"]["M"]) if cfg["kernel"]["law"] != "explicit" else None)
    target = make_target(t["kind"], M=m, s=t["s"], coeffs=t["coeffs"])
    data = sample_dataset(e["n"], target, kernel, sigma=e["sigma"], seed=e["seed"])
    sol = solve_krr(data, kernel, e["lambda"])
    errs = hp_errors(sol, target, e["p_list"], m)
    doc = {
        "n": e["n"], "lambda": e["lambda"], "sigma": e["sigma"], "seed": e["seed"], "m_trunc": m,
        "method": sol.method, "b_hat_head": [float(v) for v in sol.coeffs[:8]],
        "b_hat_norm": float(np.linalg.norm(sol.coeffs)),
        "errors": {f"{p:g}": {"error_sq": h.value, "convergent": h.convergent,
                              "last_block": h.last_block} for p, h in errs.items()},
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "solve.json").write_text(json.dumps(doc, indent=2))
    print(json.dumps(doc, indent=2), file=out)
    return 0 if all(h.convergent for h in errs.values()) else 2


def run(subcommand, config, out=None, out_dir=None, fmt=None):
    """Dispatch one subcommand; return the process exit code."""
    out = out or sys.stdout
    out_dir = Path(out_dir or config["output"]["dir"])
    fmt = fmt or config["output"]["format"]
    e = config["experiment"]
    if subcommand == "dof":
        return _run_dof(config, out_dir, fmt, out)
    if subcommand == "solve":
        return _run_solve(config, out_dir, out)
    if subcommand == "dirichlet-check":
        reports = [dirichlet_psd_check(e["dirichlet_m"], e["dirichlet_n"], seed=e["seed"] + k)
                   for k in range(e["dirichlet_trials"])]
        worst = min(reports, key=lambda r: r.min_eigenvalue)
        ok = all(r.passed for r in reports)
        print(f"dirichlet-check m={worst.m} n={worst.n} trials={len(reports)}: worst min "
              f"eigenvalue {worst.min_eigenvalue:.3e} (bound {worst.bound:.1e}) "
              f"{'PASS' if ok else 'FAIL'}", file=out)
        emit_results(worst, out_dir, "json")
        return 0 if ok else 2
    if subcommand == "sweep-lambda":
        result = lambda_sweep(_plan(config, "sweep-lambda"), e["lambda_grid"], n=e["n"])
    elif subcommand == "rates":
        result = noiseless_rate_experiment(_plan(config, "rates"))
    elif subcommand == "noisy-rates":
        result = noisy_rate_experiment(_plan(config, "noisy-rates"))
    elif subcommand == "saturate":
        p = e["p_list"][0]
        result = saturation_scan(_plan(config, "saturate"), e["s_list"], p=p)
    elif subcommand == "p-scan":
        plan = _plan(config, "p-scan")
        result = p_threshold_scan(plan, e["p_list"], n_div=e["n_div"], m_div=e["m_div"])
    else:
        raise DomainError(f"unknown subcommand {subcommand!r}")
    summary = result.summary()
    for path in emit_results(result, out_dir, fmt):
        print(f"wrote {path}", file=out)
    _print_summary(summary, out)
    return 0 if summary["passed"] else 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="base seed (overrides experiment.seed)")
    common.add_argument("--reps", type=int, help="repetitions per cell")
    common.add_argument("--format", choices=("csv", "json"), help="result file format")
    parser = _Parser(prog="krrlab", description="Kernel ridge regression rate laboratory.")
    parser.add_argument("--version", action="version", version=f"krrlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}",
                                parser_class=_Parser)
    helps = {
        "dof": "tabulate N_gamma / F_gamma over gamma and lambda",
        "solve": "solve one KRR instance and report H^p errors",
        "sweep-lambda": "noiseless error along a decreasing lambda grid",
        "rates": "noiseless learning-curve slopes",
        "noisy-rates": "noisy learning-curve slopes under the optimal lambda",
        "saturate": "slopes across target smoothness s",
        "p-scan": "slopes below and truncation growth above the p-threshold",
        "dirichlet-check": "lower bound of the Dirichlet Gram matrix",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg = parse_config(args.config, args.command)
        if args.seed is not None:
            cfg["experiment"]["seed"] = args.seed
        if args.reps is not None:
            cfg["experiment"]["reps"] = args.reps
        return run(args.command, cfg, out_dir=args.out, fmt=args.format)
    except ConfigError as exc:
        for msg in exc.errors:
            print(f"config error: {msg}", file=sys.stderr)
        return 1
    except (DomainError, DivergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
