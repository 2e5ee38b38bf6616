"""Command-line entry points: generate, fit, evaluate, diagnose, report.

Settings come from an optional JSON config file with flat CLI-flag
overrides; precedence is flag > file > default.  Exit codes: 0 success,
1 validation/parse error, 2 runtime or check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dataio, diagnostics, evaluate, figures
from .experiment import fit_dataset
from .samplers import SweepConfig
from .synthgen import SuiteConfig, generate_suite
from .types import Hyperparams, StateError


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"error: cannot read config {path}: {exc}")


def _setting(args, config, name, default):
    """flag > config file > default."""
    val = getattr(args, name.replace("-", "_"), None)
    if val is not None:
        return val
    return config.get(name, default)


def _hyperparams(args, config) -> Hyperparams:
    hp_cfg = dict(config.get("hyperparams", {}))
    for name in ("a", "b", "c", "d", "gamma", "alpha0", "kappa"):
        val = getattr(args, f"hp_{name}", None)
        if val is not None:
            hp_cfg[name] = val
    return Hyperparams(**hp_cfg)


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, default=None)


def _add_hyperparam_flags(parser):
    for name in ("a", "b", "c", "d", "gamma", "alpha0", "kappa"):
        parser.add_argument(f"--hp-{name}", type=float, default=None, dest=f"hp_{name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvbiclust",
        description="Bayesian bi-clustering of time-varying relational count data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset suite")
    _add_common(p)
    p.add_argument("--out", required=True, help="suite output directory")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--movement-ratios", type=float, nargs="+", default=None)
    p.add_argument("--zero-ratios", type=float, nargs="+", default=None)
    p.add_argument("--objects", type=int, default=None)
    p.add_argument("--time-steps", type=int, default=None)
    p.add_argument("--clusters", type=int, default=None)

    p = sub.add_parser("fit", help="fit one model to one dataset")
    _add_common(p)
    _add_hyperparam_flags(p)
    p.add_argument("data", help="CountTensor CSV or JSON file")
    p.add_argument("--out", required=True, help="fit output directory")
    p.add_argument("--model", choices=("pirm", "dpirm", "dzipirm"), default=None)
    p.add_argument("--sweeps", type=int, default=None)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="truncation cap")
    p.add_argument("--init", choices=("single", "random", "warm"), default=None)
    p.add_argument("--exclude-diagonal", action="store_true", default=None)

    p = sub.add_parser("evaluate", help="score fits against a suite manifest")
    _add_common(p)
    p.add_argument("--manifest", required=True)
    p.add_argument("--fits", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--models", nargs="+", default=None)

    p = sub.add_parser("diagnose", help="run consistency checks over a trace")
    _add_common(p)
    _add_hyperparam_flags(p)
    p.add_argument("trace", help="trace JSON-lines file")

    p = sub.add_parser("report", help="render rate heatmap and membership timeline")
    _add_common(p)
    p.add_argument("--estimate", required=True, help="point-estimate JSON from fit")
    p.add_argument("--out", required=True)
    return parser


def cmd_generate(args) -> int:
    config = _load_config(args.config)
    cfg = SuiteConfig(
        movement_ratios=tuple(_setting(args, config, "movement-ratios", (0.1, 0.2, 0.3))),
        zero_ratios=tuple(_setting(args, config, "zero-ratios", (0.3, 0.5, 0.7))),
        replicates=_setting(args, config, "replicates", 50),
        k=_setting(args, config, "clusters", 4),
        t=_setting(args, config, "time-steps", 5),
        n=_setting(args, config, "objects", 16),
        seed=_setting(args, config, "seed", 0),
    )
    manifest_path = generate_suite(cfg, args.out)
    print(manifest_path)
    return 0


def cmd_fit(args) -> int:
    config = _load_config(args.config)
    try:
        hp = _hyperparams(args, config)
        exclude_diag = _setting(args, config, "exclude-diagonal", False)
        data_path = Path(args.data)
        if data_path.suffix == ".json":
            with open(data_path) as fh:
                x = dataio.tensor_from_json(json.load(fh), include_diagonal=not exclude_diag)
        else:
            x = dataio.read_tensor_csv(data_path, include_diagonal=not exclude_diag)
        cfg = SweepConfig(
            model=_setting(args, config, "model", "dpirm"),
            sweeps=_setting(args, config, "sweeps", 300),
            burn_in=_setting(args, config, "burn-in", 100),
            truncation_cap=_setting(args, config, "cap", 50),
            init=_setting(args, config, "init", "single"),
        )
        seed = _setting(args, config, "seed", 0)
        chains = _setting(args, config, "chains", 1)
    except (StateError, dataio.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    try:
        if chains == 1:
            fit_dataset(x, cfg.model, out, hp, cfg, seed=seed, stream=0)
        else:
            best = None
            for chain in range(chains):
                chain_dir = out / f"chain{chain:02d}"
                fit_dataset(x, cfg.model, chain_dir, hp, cfg, seed=seed, stream=chain)
                if cfg.model != "pirm":
                    est = dataio.read_estimate(chain_dir / "estimate.json")
                    if best is None or est["joint_log_likelihood"] > best[0]:
                        best = (est["joint_log_likelihood"], chain_dir)
            if best is not None:
                # global max-likelihood sweep across chains
                (out / "estimate.json").write_bytes((best[1] / "estimate.json").read_bytes())
    except Exception as exc:  # sampler failures are runtime errors, not usage errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def cmd_evaluate(args) -> int:
    config = _load_config(args.config)
    try:
        manifest = dataio.read_manifest(args.manifest)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    models = tuple(_setting(args, config, "models", ("pirm", "dpirm", "dzipirm")))
    report = evaluate.compare_models(manifest, args.fits, models=models)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_csv(out / "report.csv")
    report.write_json(out / "report.json")
    if report.aggregates:
        figures.render_report_summary(report.aggregates, out / "report.png")
    for item in report.missing:
        print(f"missing fit: {item['dataset']} / {item['model']}", file=sys.stderr)
    print(out / "report.csv")
    if not report.rows:
        print("error: no fits found", file=sys.stderr)
        return 2
    return 0


def cmd_diagnose(args) -> int:
    try:
        trace = dataio.read_trace_jsonl(args.trace)
    except dataio.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    hp = _hyperparams(args, _load_config(args.config))
    passed, rows = diagnostics.diagnose_trace(trace, hp)
    failures = [row for row in rows if not row["ok"]]
    for row in failures:
        print(f"sweep {row['sweep']}: " + "; ".join(row["problems"]))
    print(f"{len(rows) - len(failures)}/{len(rows)} sweeps pass")
    return 0 if passed else 2


def cmd_report(args) -> int:
    try:
        est = dataio.read_estimate(args.estimate)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    evaluate.write_lambda_heatmap_csv(est["lambda"], out / "lambda_heatmap.csv")
    figures.render_lambda_heatmap(est["lambda"], out / "lambda_heatmap.png")
    evaluate.write_membership_timeline_csv(est["z"], out / "membership_timeline.csv")
    figures.render_membership_timeline(est["z"], out / "membership_timeline.png")
    print(out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "fit": cmd_fit,
        "evaluate": cmd_evaluate,
        "diagnose": cmd_diagnose,
        "report": cmd_report,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
