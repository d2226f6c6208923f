"""Command-line entry point: ``logdecay {classify,evolve,search}``.

Exit codes: 0 when every requested check passes, 2 when a check fails,
1 on any error (unreadable or invalid config, unknown preset or family).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import FAMILIES, SearchConfig, counterexample_search, criterion_gap
from .scenario import CHECKS, ConfigError, ScenarioConfig, dumps, run_scenario, versions
from .tolerances import DEFAULT, Tolerances

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def _parse_tol(items: list[str]) -> tuple[Tolerances, dict[str, float]]:
    tol = DEFAULT
    overrides: dict[str, float] = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            v = float(value)
        except ValueError:
            raise ConfigError(f"--tol {name}: {value!r} is not a number") from None
        if not v > 0:
            raise ConfigError(f"--tol {name}: tolerance must be positive")
        if name in Tolerances.names():
            tol = tol.replace(**{name: v})
        elif name in CHECKS:
            overrides[name] = v
        else:
            raise ConfigError(f"--tol: unknown name {name!r}; use a tolerance "
                              f"({', '.join(Tolerances.names())}) or a check ({', '.join(CHECKS)})")
    return tol, overrides


def _read_config(path: str) -> ScenarioConfig:
    if path == "-":
        return ScenarioConfig.loads(sys.stdin.read(), "<stdin>")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return ScenarioConfig.loads(text, path)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(args, command: str) -> int:
    if command == "evolve" and not (args.csv or args.out):
        # stdout carries the JSON, so the CSV needs a file of its own
        raise ConfigError("evolve writes JSON to stdout; pass --csv PATH for the trajectory")
    cfg = _read_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    tol, overrides = _parse_tol(args.tol)
    result = run_scenario(cfg, command, tol=tol, overrides=overrides)
    if command == "evolve" and args.csv:
        Path(args.csv).write_text(result.csv)
        result.report["trajectory"]["csv"] = Path(args.csv).name
    _emit(dumps(result.report), args.out)
    return EXIT_FAIL if result.failed else EXIT_OK


def _search(args) -> int:
    if args.family not in FAMILIES:
        raise ConfigError(f"unknown family {args.family!r}; available: {', '.join(sorted(FAMILIES))}")
    if args.budget < 0:
        raise ConfigError("--budget must be non-negative")
    tol, _ = _parse_tol(args.tol)
    seed = 0 if args.seed is None else args.seed
    found = counterexample_search(args.family, SearchConfig(budget=args.budget, seed=seed, tol=tol))
    witnesses = [{"matrix": A, "x": w.x, "gap": w.gap, "recomputed_gap": criterion_gap(A, w.x)}
                 for A, w in found]
    report = {
        "command": "search",
        "family": args.family,
        "budget": args.budget,
        "violation_threshold": tol.violation_threshold,
        "count": len(witnesses),
        "witnesses": witnesses,
        "seed": seed,
        "versions": versions(),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logdecay", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a tolerance or a check threshold (repeatable)")

    for name, help_ in (("classify", "classify the scenario operator"),
                        ("evolve", "classify and scan the height function along the grid")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, help="scenario JSON file, or - for stdin")
        common(sp)
        if name == "evolve":
            sp.add_argument("--csv", help="write the trajectory CSV here")

    sp = sub.add_parser("search", help="search a matrix family for criterion violations")
    sp.add_argument("--family", required=True, help=f"one of {', '.join(sorted(FAMILIES))}")
    sp.add_argument("--budget", type=int, default=100)
    common(sp)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "search":
            return _search(args)
        return _run(args, args.command)
    except (ConfigError, KeyError, ValueError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"logdecay: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
