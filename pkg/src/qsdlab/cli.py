"""Command-line entry point.

    qsdlab <experiment> [flags]     run a sweep, write a CSV
    qsdlab validate [--only NAME]   run the acceptance checks

Grid flags take `a:b:n` (n uniform points from a to b inclusive).  A
`--config PATH` file holds plain `key = value` lines with `#` comments;
command-line flags override file values.  Exit codes: 0 ok, 1 usage,
2 numerical failure, 3 acceptance failure.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import EXPERIMENTS, ConfigError, make_config, run_experiment


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs n >= 1")
    if n == 1:
        return (a,)
    step = (b - a) / (n - 1)
    return tuple(a + k * step for k in range(n))


_FIELD_TYPES = {
    "eta": float,
    "s": float,
    "omega_c": float,
    "omega0": float,
    "tau_max": float,
    "dt": float,
    "n_modes": int,
    "n_traj": int,
    "seed": int,
    "jobs": int,
    "out_path": str,
    "eta_grid": _parse_grid,
    "tau_grid": _parse_grid,
    "omega_c_grid": _parse_grid,
}


def _read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _FIELD_TYPES[key](value.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsdlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} sweep")
        p.add_argument("--eta", type=float)
        p.add_argument("--s", type=float)
        p.add_argument("--omega-c", dest="omega_c", type=float)
        p.add_argument("--tau-max", dest="tau_max", type=float)
        p.add_argument("--dt", type=float)
        p.add_argument("--eta-grid", dest="eta_grid", type=_parse_grid)
        p.add_argument("--tau-grid", dest="tau_grid", type=_parse_grid)
        p.add_argument("--omega-c-grid", dest="omega_c_grid", type=_parse_grid)
        p.add_argument("--n-modes", dest="n_modes", type=int)
        p.add_argument("--n-traj", dest="n_traj", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--config", type=str)
        p.add_argument("--out", dest="out_path", type=str)

    v = sub.add_parser("validate", help="run the acceptance checks")
    v.add_argument("--only", type=str, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        from .acceptance import format_report, run_checks

        try:
            results = run_checks(args.only)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return 1
        print(format_report(results))
        return 0 if all(r.passed for r in results) else 3

    try:
        overrides = {}
        if args.config:
            overrides.update(_read_config_file(args.config))
        for key in _FIELD_TYPES:
            value = getattr(args, key, None)
            if value is not None:
                overrides[key] = value
        cfg = make_config(args.command, **overrides)
        result = run_experiment(cfg)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    if result.n_failed:
        print(f"{result.n_failed} row(s) tagged with errors", file=sys.stderr)
        return 2
    print(f"{args.command}: {len(result.rows)} rows" + (f" -> {cfg.out_path}" if cfg.out_path else ""))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
