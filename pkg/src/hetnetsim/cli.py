"""simctl command line: run, sweep and validate simulation scenarios."""

import argparse
import sys
from pathlib import Path

from . import report
from .config import ConfigError, from_mapping, load_config
from .runner import run_scenario


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the CLI contract is 1
    def error(self, message):
        raise _UsageError(message)


def build_parser():
    parser = _Parser(prog="simctl",
                     description="Two-tier downlink rate-distribution "
                                 "simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="scenario config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--drops", type=int, help="override n_drops")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--threads", type=int,
                       help="worker processes (default: SIMCTL_THREADS "
                            "or CPU count)")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering")

    run_p = sub.add_parser("run", help="run one scenario")
    add_common(run_p)

    sweep_p = sub.add_parser("sweep",
                             help="run a scenario once per value of one key")
    add_common(sweep_p)
    sweep_p.add_argument("--vary", required=True, metavar="KEY=V1,V2,...",
                         help="config key and comma-separated values")

    val_p = sub.add_parser("validate", help="check a scenario config")
    val_p.add_argument("config", help="scenario config file")
    return parser


def _load(args, overrides=None):
    mapping, _ = load_config(args.config)
    if overrides:
        mapping.update(overrides)
    if getattr(args, "drops", None) is not None:
        mapping["n_drops"] = str(args.drops)
    if getattr(args, "seed", None) is not None:
        mapping["base_seed"] = str(args.seed)
    return from_mapping(mapping)


def _write_run(out_dir, result, stem="curve", plot=True, label=None):
    out_dir.mkdir(parents=True, exist_ok=True)
    if result.curve is None:
        raise RuntimeError("no drop produced a positive-rate user; "
                           "nothing to report")
    csv_path = out_dir / f"{stem}.csv"
    report.write_curve_csv(csv_path, result.curve)
    if result.curve_all_users is not None:
        report.write_curve_csv(out_dir / f"{stem}_all_users.csv",
                               result.curve_all_users)
    for tier in ("macro", "femto"):
        tc = result.tier_curves.get(tier)
        if tc is not None:
            report.write_curve_csv(out_dir / f"{stem}_{tier}.csv", tc)
    if plot:
        figure_curves = {"served users": result.curve}
        if result.curve_all_users is not None:
            figure_curves["all users (denied count as zero)"] = \
                result.curve_all_users
        report.render_rate_figure(figure_curves, out_dir / f"{stem}.png",
                                  title=label)
    return csv_path


def _cmd_validate(args):
    load_config(args.config)
    print(f"{args.config}: OK")
    return 0


def _cmd_run(args):
    cfg = _load(args)
    result = run_scenario(cfg, threads=args.threads)
    out_dir = Path(args.out)
    csv_path = _write_run(out_dir, result, plot=not args.no_plot)
    report.write_manifest(out_dir / "manifest.json", result.manifest())
    served = sum(s.n_users - s.denied for s in result.drop_stats)
    total = sum(s.n_users for s in result.drop_stats)
    print(f"{cfg.n_drops} drops, {served}/{total} users served; "
          f"wrote {csv_path}")
    return 0


def _cmd_sweep(args):
    key, _, raw_values = args.vary.partition("=")
    key = key.strip()
    values = [v.strip() for v in raw_values.split(",") if v.strip()]
    if not key or not values:
        raise ConfigError("--vary expects KEY=V1,V2,...")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = {}
    manifests = {}
    for value in values:
        cfg = _load(args, overrides={key: value})
        result = run_scenario(cfg, threads=args.threads)
        if result.curve is None:
            raise RuntimeError(f"{key}={value}: no positive-rate user in "
                               "any drop")
        stem = f"curve_{key}={value}"
        report.write_curve_csv(out_dir / f"{stem}.csv", result.curve)
        curves[f"{key}={value}"] = result.curve
        manifests[value] = result.manifest()
        print(f"{key}={value}: wrote {out_dir / (stem + '.csv')}")
    if not args.no_plot:
        report.render_rate_figure(curves, out_dir / f"sweep_{key}.png",
                                  title=f"sweep over {key}")
    report.write_manifest(out_dir / "manifest.json",
                          {"vary": key, "values": manifests})
    return 0


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"simctl: error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"simctl: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report and fail with code 2
        print(f"simctl: runtime failure: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
