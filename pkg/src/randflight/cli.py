"""
Command-line front end.

Every command writes CSV (header row, comma separated, ``\\n`` line ends) to
standard output or to ``--out``.  Defaults are ``lambda=1``, ``c=2``,
``x=5``, so ``randflight table`` with no arguments reproduces the
f/g comparison table.

Settings may also come from ``--config FILE`` holding ``key=value`` lines
(``#`` starts a comment); command-line flags take precedence.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import analysis, densities, montecarlo
from .errors import DomainError

COMMANDS = ("eval", "table", "grid", "simulate", "compare", "rate")

DEFAULTS = {
    "lambda": 1.0,
    "c": 2.0,
    "x": 5.0,
    "x2": 0.0,
    "precision": 6,
    "seed": 0,
    "process": "telegraph",
    "alpha": 1e-3,
    "quantity": "difference",
}
DEFAULT_T = {
    "table": list(analysis.TABLE1_TIMES),
    "rate": [50, 100, 200, 400, 800, 1600],
}
DEFAULT_N = {"grid": 401, "simulate": 10_000, "compare": 100_000}

# Flags each command accepts beyond --lambda/--c/--out/--precision/--config.
ALLOWED = {
    "eval": {"t", "x", "x2"},
    "table": {"t", "x"},
    "grid": {"t", "n"},
    "simulate": {"t", "n", "seed", "process"},
    "compare": {"t", "n", "seed", "process", "alpha"},
    "rate": {"t", "x", "quantity"},
}
REQUIRED = {
    "eval": {"t"},
    "grid": {"t"},
    "simulate": {"t"},
    "compare": {"t"},
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: densities.FlightParams
    t: List[float]
    x: Optional[float] = None
    x2: float = 0.0
    n: Optional[int] = None
    seed: Optional[int] = None
    output_path: Optional[str] = None
    precision: int = 6
    extra: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not 1 <= self.precision <= 17:
            raise UsageError("--precision must be between 1 and 17")
        if not self.t:
            raise UsageError(f"{self.command} needs --t")
        if self.command in ("eval", "grid", "simulate", "compare") and len(self.t) != 1:
            raise UsageError(f"{self.command} takes a single --t value")


def _num(value: float, precision: int) -> str:
    # str.format rounds the exact binary value, i.e. half-to-even on ties
    return f"{value:.{precision}f}"


def _time(value: float) -> str:
    return f"{value:.17g}"


def _rows(cfg: RunConfig):
    p, prec = cfg.params, cfg.precision
    cmd = cfg.command
    if cmd == "eval":
        t = cfg.t[0]
        f = densities.telegraph_density(cfg.x, t, p).ac
        g = densities.marginal_density(cfg.x, t, p)
        planar = densities.planar_density(densities.PlanarPoint(cfg.x, cfg.x2), t, p).ac
        yield ["x", "t", "f", "g", "planar_ac"]
        yield [_time(cfg.x), _time(t), _num(f, prec), _num(g, prec), _num(planar, prec)]
    elif cmd == "table":
        yield ["t", "f", "g", "abs_diff"]
        for r in analysis.difference_table(cfg.x, p, cfg.t):
            yield [_time(r.t), _num(r.f, prec), _num(r.g, prec), _num(r.abs_diff, prec)]
    elif cmd == "grid":
        yield ["x", "f", "g"]
        for r in analysis.figure_grid(cfg.t[0], p, cfg.n):
            yield [_num(r.x, prec), _num(r.f, prec), _num(r.g, prec)]
    elif cmd == "compare":
        process = cfg.extra["process"]
        alpha = cfg.extra["alpha"]
        t = cfg.t[0]
        if process == "telegraph":
            batch = montecarlo.simulate_telegraph(p, t, cfg.n, cfg.seed)
        else:
            batch = montecarlo.project_marginal(montecarlo.simulate_planar(p, t, cfg.n, cfg.seed), 1)
        which = "telegraph" if process == "telegraph" else "marginal"
        ks = analysis.ks_distance(batch, which, t, p)
        crit = analysis.ks_critical(cfg.n, alpha)
        yield ["which", "n", "ks", "critical", "pass"]
        yield [which, str(cfg.n), _num(ks, prec), _num(crit, prec), "true" if ks < crit else "false"]
    elif cmd == "rate":
        fit = analysis.fit_convergence_rate(cfg.x, p, cfg.t, quantity=cfg.extra["quantity"])
        yield ["slope", "intercept", "r_squared"]
        yield [_num(fit.slope, prec), _num(fit.intercept, prec), _num(fit.r_squared, prec)]


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    with contextlib.ExitStack() as stack:
        fh = stdout
        if cfg.output_path:
            fh = stack.enter_context(open(cfg.output_path, "w", newline="", encoding="ascii"))
        if cfg.command == "simulate":
            process = cfg.extra["process"]
            sim = montecarlo.simulate_telegraph if process == "telegraph" else montecarlo.simulate_planar
            montecarlo.write_samples_csv(sim(cfg.params, cfg.t[0], cfg.n, cfg.seed), fh)
        else:
            # build all rows first so a domain error leaves no partial output
            rows = list(_rows(cfg))
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerows(rows)
    return 0


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or comma-separated list, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--lambda", dest="lambda", type=float, help="switching rate (default 1)")
    shared.add_argument("--c", type=float, help="speed (default 2)")
    shared.add_argument("--t", "--ts", dest="t", type=_float_list, help="time or comma-separated times")
    shared.add_argument("--x", type=float, help="position (default 5)")
    shared.add_argument("--x2", type=float, help="second planar coordinate for eval (default 0)")
    shared.add_argument("--n", type=int, help="sample count, or grid points for grid")
    shared.add_argument("--seed", type=int, help="64-bit seed (default 0)")
    shared.add_argument("--process", choices=["telegraph", "planar", "marginal"],
                        help="simulate: telegraph|planar; compare: telegraph|marginal")
    shared.add_argument("--alpha", type=float, help="KS significance level for compare (default 1e-3)")
    shared.add_argument("--quantity", choices=["difference", "R", "Q"], help="what rate fits")
    shared.add_argument("--out", help="output CSV path (default stdout)")
    shared.add_argument("--precision", type=int, help="decimal digits (default 6)")
    shared.add_argument("--config", help="file of key=value defaults")

    parser = argparse.ArgumentParser(
        prog="randflight",
        description="Telegraph process vs. planar random flight marginals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "f, g and the planar AC density at one point",
        "table": "f, g and |f-g| at fixed x for a list of times",
        "grid": "f and g on a uniform grid at one time",
        "simulate": "raw Monte Carlo terminal positions",
        "compare": "KS distance of simulated samples to the exact CDF",
        "rate": "log-log convergence-rate fit",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[shared], help=helps[name])
    return parser


def read_config(path: str) -> Dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key == "ts":
                key = "t"
            out[key] = value
    return out


_CONVERT = {
    "lambda": float, "c": float, "t": _float_list, "x": float, "x2": float,
    "n": int, "seed": int, "process": str, "alpha": float, "quantity": str,
    "out": str, "precision": int,
}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cmd = ns.command
    given = {k: v for k, v in vars(ns).items() if v is not None and k not in ("command", "config")}
    file_values = {}
    if ns.config:
        for key, value in read_config(ns.config).items():
            if key not in _CONVERT:
                raise UsageError(f"unknown config key {key!r}")
            try:
                file_values[key] = _CONVERT[key](value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad value for {key!r} in config: {exc}")

    common = {"lambda", "c", "out", "precision"}
    extra_flags = set(given) - common - ALLOWED[cmd]
    if extra_flags:
        flags = ", ".join("--" + f for f in sorted(extra_flags))
        raise UsageError(f"{cmd} does not accept {flags}")
    # config files may hold keys for other commands; keep only relevant ones
    merged = {k: v for k, v in file_values.items() if k in common | ALLOWED[cmd]}
    merged.update(given)
    missing = REQUIRED.get(cmd, set()) - set(merged)
    if missing:
        raise UsageError(f"{cmd} requires " + ", ".join("--" + m for m in sorted(missing)))

    def pick(key, fallback=None):
        return merged.get(key, DEFAULTS.get(key, fallback))

    process = pick("process")
    if cmd == "simulate" and process not in ("telegraph", "planar"):
        raise UsageError("simulate --process must be telegraph or planar")
    if cmd == "compare" and process not in ("telegraph", "marginal"):
        raise UsageError("compare --process must be telegraph or marginal")
    n = pick("n", DEFAULT_N.get(cmd))
    if n is not None and n < (2 if cmd == "grid" else 1):
        raise UsageError("--n is too small")
    alpha = pick("alpha")
    if not 0.0 < alpha < 1.0:
        raise UsageError("--alpha must lie in (0, 1)")

    params = densities.FlightParams(c=pick("c"), lam=pick("lambda"))
    return RunConfig(
        command=cmd,
        params=params,
        t=list(merged.get("t", DEFAULT_T.get(cmd, []))),
        x=pick("x"),
        x2=pick("x2"),
        n=n,
        seed=pick("seed"),
        output_path=merged.get("out"),
        precision=pick("precision"),
        extra={"process": process, "alpha": alpha, "quantity": pick("quantity")},
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"randflight {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"randflight {ns.command}: domain error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"randflight {ns.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
