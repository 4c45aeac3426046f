"""Command-line surface for the package.

Subcommands cover the whole workflow: ``simulate`` a configured model to
a trajectory CSV, ``estimate`` coefficients from a trajectory,
``mc-study`` for replicated benchmarking, and the raw-data trio ``fit``,
``quantile-lines``, ``one-step``.  Options may come from flags or a
JSON/YAML config file; flags win.  Exit codes: 0 success, 2 data
problems (unreadable/malformed input, too-short series), 3 numerical
failure (degenerate systems, estimation breakdown).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np
import yaml

from .estimators import EstimationResult, yw_cv_estimate, yw_t_estimate
from .exceptions import DataError, NumericalError, StableParError
from .mc import McConfig, model1_preset, model2_preset, run_mc_study
from .par_model import MultiTrajectory, ParModel, simulate_par1
from .pipeline import fit_par1, one_step_quantiles, simulate_quantile_lines
from .rng import RandomStream

PRESETS = {"model1": model1_preset, "model2": model2_preset}

CONFIG_DEFAULTS = {
    "period": None,
    "method": "yw-cv",
    "alpha": None,
    "burn_in": None,
    "seed": 0,
    "n_paths": 5000,
    "quantiles": (0.1, 0.5, 0.9),
    "h_max": 10,
    "n_sims": 1000,
}


def load_config(path: str | None) -> dict:
    """Read a JSON or YAML key-value document (empty dict when no path)."""
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise DataError(f"config file not found: {path}")
    text = p.read_text()
    try:
        if p.suffix.lower() == ".json":
            cfg = json.loads(text)
        else:
            cfg = yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise DataError(f"cannot parse config {path}: {exc}") from None
    if cfg is None:
        return {}
    if not isinstance(cfg, dict):
        raise DataError(f"config {path} must be a key-value document")
    return cfg


def _setting(args, config: dict, key: str, flag_value=None):
    """Flag > config > default resolution for one setting."""
    if flag_value is not None:
        return flag_value
    if key in config and config[key] is not None:
        return config[key]
    return CONFIG_DEFAULTS.get(key)


def load_trajectory(path: str, columns: str | None = None) -> MultiTrajectory:
    """Read a trajectory CSV.

    Default layout is ``t,x1,...,xm``.  ``columns`` maps other layouts:
    a comma-separated list naming the time column first and the value
    columns in component order (e.g. ``timestamp,price,volume``); a
    non-numeric time column is replaced by row order.
    """
    p = Path(path)
    if not p.is_file():
        raise DataError(f"input file not found: {path}")
    with open(p, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        header = [h.strip() for h in header]
        rows = [row for row in reader if row and any(c.strip() for c in row)]
    if not rows:
        raise DataError(f"{path}: no data rows")

    if columns:
        names = [c.strip() for c in columns.split(",")]
        if len(names) < 2:
            raise DataError("--columns needs a time column and at least one value column")
        try:
            idx = [header.index(n) for n in names]
        except ValueError as exc:
            raise DataError(f"{path}: {exc}; header is {header}") from None
    else:
        if header[0] != "t":
            raise DataError(
                f"{path}: expected header 't,x1,...,xm' (got {header}); "
                "use --columns to map other layouts"
            )
        idx = list(range(len(header)))

    time_col, value_cols = idx[0], idx[1:]
    for r, row in enumerate(rows):
        if len(row) <= max(idx) or any(not row[c].strip() for c in idx):
            raise DataError(f"{path}: missing cell in data row {r + 2}")
    try:
        data = np.array(
            [[float(row[c]) for c in value_cols] for row in rows]
        )
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric value cell ({exc})") from None
    try:
        t0 = int(float(rows[0][time_col]))
    except ValueError:
        t0 = 1  # non-numeric timestamps: keep row order, index from 1
    if not np.all(np.isfinite(data)):
        raise DataError(f"{path}: non-finite values present")
    return MultiTrajectory(values=data.T, t0=t0)


def model_from_config(config: dict) -> ParModel:
    if "preset" in config:
        name = str(config["preset"]).lower()
        if name not in PRESETS:
            raise DataError(
                f"unknown preset {config['preset']!r}; choose from {sorted(PRESETS)}"
            )
        model = PRESETS[name]()
        if config.get("alpha") is not None:
            from dataclasses import replace

            model = replace(model, alpha=float(config["alpha"]))
        return model
    if "model" in config:
        try:
            return ParModel.from_dict(config["model"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"bad model description: {exc}") from None
    raise DataError("config must provide either 'preset' or 'model'")


def _require(value, what: str):
    if value is None:
        raise DataError(f"{what} is required (flag or config)")
    return value


def _method_key(method: str) -> str:
    key = method.strip().lower().replace("_", "-")
    if key not in ("yw-cv", "yw-t"):
        raise DataError(f"unknown method {method!r}; use yw-cv or yw-t")
    return key


def cmd_simulate(args, config: dict) -> int:
    model = model_from_config(config)
    L = int(_require(config.get("L"), "trajectory length L (config key 'L')"))
    seed = int(_setting(args, config, "seed", args.seed))
    burn_in = config.get("burn_in")
    traj = simulate_par1(
        model, L, RandomStream(seed),
        burn_in=None if burn_in is None else int(burn_in),
    )
    traj.to_csv(_require(args.out, "--out"))
    print(f"wrote {traj.dim}x{traj.length} trajectory to {args.out}")
    return 0


def cmd_estimate(args, config: dict) -> int:
    traj = load_trajectory(args.input, args.columns)
    T = int(_require(_setting(args, config, "period", args.period), "--period"))
    method = _method_key(_setting(args, config, "method", args.method))
    if method == "yw-cv":
        result = yw_cv_estimate(traj, T)
    else:
        alpha = config.get("alpha")
        result = yw_t_estimate(
            traj, T, alpha=None if alpha is None else float(alpha)
        )
    result.to_csv(_require(args.out, "--out"))
    extra = f" (alpha {result.alpha_used:.4f})" if result.alpha_used else ""
    print(f"wrote {T * traj.dim * traj.dim} coefficients to {args.out}{extra}")
    return 0


def cmd_mc_study(args, config: dict) -> int:
    model = model_from_config(config)
    cfg = McConfig(
        model=model,
        L=int(_require(config.get("L"), "config key 'L'")),
        M=int(_require(config.get("M"), "config key 'M'")),
        alphas=tuple(config.get("alphas", ())),
        methods=tuple(config.get("methods", ("YW-CV", "YW-T"))),
        seed=int(_setting(args, config, "seed", args.seed)),
        burn_in=None if config.get("burn_in") is None else int(config["burn_in"]),
    )
    report = run_mc_study(cfg)
    report.to_csv(_require(args.out, "--out"))
    n_fail = sum(report.failures.values())
    print(
        f"wrote {len(report.cells)} cells to {args.out}"
        + (f" ({n_fail} failed replicates excluded)" if n_fail else "")
    )
    return 0


def _run_fit(args, config: dict):
    traj = load_trajectory(args.input, args.columns)
    T = int(_require(_setting(args, config, "period", args.period), "--period"))
    method = _method_key(_setting(args, config, "method", args.method))
    alpha = config.get("alpha")
    seed = int(_setting(args, config, "seed", args.seed))
    return traj, fit_par1(
        traj,
        T,
        method=method,
        alpha=None if alpha is None else float(alpha),
        h_max=int(_setting(args, config, "h_max")),
        n_sims=int(_setting(args, config, "n_sims")),
        rng=RandomStream(seed, (101,)),
    ), seed


def cmd_fit(args, config: dict) -> int:
    _, fit, _ = _run_fit(args, config)
    out_dir = Path(_require(args.out, "--out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    fit.estimate.to_csv(out_dir / "coefficients.csv")
    fit.diagnostics.to_csv(out_dir / "diagnostics.csv")
    fit.diagnostics.ncv_to_csv(out_dir / "ncv.csv")
    fit.residuals.to_csv(out_dir / "residuals.csv")
    (out_dir / "model.json").write_text(json.dumps(fit.model.to_dict(), indent=2))
    (out_dir / "deterministic.json").write_text(
        json.dumps(fit.deterministic.to_dict(), indent=2)
    )
    for name, p_val, alpha_hat in fit.diagnostics.table_rows():
        print(f"{name}: alpha {alpha_hat}, A-D p-value {p_val}")
    print(f"wrote fit artifacts to {out_dir}/")
    return 0


def cmd_quantile_lines(args, config: dict) -> int:
    traj, fit, seed = _run_fit(args, config)
    lines = simulate_quantile_lines(
        fit.model,
        fit.deterministic,
        n_paths=int(_setting(args, config, "n_paths")),
        q_list=tuple(_setting(args, config, "quantiles")),
        L=traj.length,
        rng=RandomStream(seed, (202,)),
        t0=traj.t0,
    )
    lines.to_csv(_require(args.out, "--out"))
    print(f"wrote quantile lines ({lines.quantiles}) to {args.out}")
    return 0


def cmd_one_step(args, config: dict) -> int:
    traj, fit, seed = _run_fit(args, config)
    lines = one_step_quantiles(
        fit.model,
        fit.deterministic,
        traj,
        q_list=tuple(_setting(args, config, "quantiles")),
        n_paths=int(_setting(args, config, "n_paths")),
        rng=RandomStream(seed, (303,)),
    )
    lines.to_csv(_require(args.out, "--out"))
    print(f"wrote one-step quantiles ({lines.quantiles}) to {args.out}")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "mc-study": cmd_mc_study,
    "fit": cmd_fit,
    "quantile-lines": cmd_quantile_lines,
    "one-step": cmd_one_step,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablepar",
        description="Periodic autoregressions with symmetric alpha-stable noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input: bool):
        if needs_input:
            p.add_argument("input", help="trajectory CSV (header t,x1,...,xm)")
            p.add_argument(
                "--columns",
                help="map a different CSV layout: time column first, then "
                "value columns in order (e.g. timestamp,price,volume)",
            )
        p.add_argument("--period", type=int, help="period T of the model")
        p.add_argument(
            "--method", choices=["yw-cv", "yw-t"], help="estimation method"
        )
        p.add_argument("--seed", type=int, help="base random seed")
        p.add_argument("--out", help="output file (or directory for fit)")
        p.add_argument("--config", help="JSON or YAML config file")

    common(sub.add_parser("simulate", help="model config -> trajectory CSV"), False)
    common(sub.add_parser("estimate", help="trajectory CSV -> coefficient CSV"), True)
    common(sub.add_parser("mc-study", help="replicated study -> long-format CSV"), False)
    common(sub.add_parser("fit", help="raw CSV -> coefficients + diagnostics + residuals"), True)
    common(sub.add_parser("quantile-lines", help="raw CSV -> fitted quantile-band CSV"), True)
    common(sub.add_parser("one-step", help="raw CSV -> one-step-ahead quantile CSV"), True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return COMMANDS[args.command](args, config)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except StableParError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
