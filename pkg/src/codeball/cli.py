"""Command-line front end.

One subcommand per experiment; flags can also be preloaded from a
``key = value`` config file, with explicit flags taking precedence.
Exit codes: 0 success, 1 verification failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CodeballError, VerificationFailure
from .experiments import COMMANDS, ExperimentConfig

_INT_KEYS = {"n", "k", "b", "steps", "trials", "seed", "burn_in", "workers",
             "max_delta", "instances"}
_FLOAT_KEYS = {"epsilon"}


def _read_config_file(path: str) -> dict:
    out: dict = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key in _INT_KEYS:
                out[key] = int(val)
            elif key in _FLOAT_KEYS:
                out[key] = float(val)
            elif key in {"out", "output_dir"}:
                out["output_dir"] = Path(val)
            else:
                out[key] = val
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", dest="output_dir", type=Path)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="codeball",
        description="Chain sampling, region maps and decoding benchmarks "
                    "for Hamming-ball superpositions over random codes.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="ideal vs sampled weight spectrum")
    _add_common(p)
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"),
                   help="central renormalization window (default n*0.45..n*0.55)")

    p = sub.add_parser("walk", help="one raw chain, histogram + sidecar")
    _add_common(p)

    p = sub.add_parser("region-map", help="classify the (k, b) grid at fixed n")
    _add_common(p)
    p.add_argument("--k-grid", type=int, nargs=3, metavar=("START", "STOP", "STEP"))
    p.add_argument("--b-grid", type=int, nargs=3, metavar=("START", "STOP", "STEP"))

    p = sub.add_parser("fidelity-sweep", help="fidelity along the k = 5b slice")
    _add_common(p)
    p.add_argument("--b-list", type=str,
                   help="comma-separated ball radii (default 10,20,...,70)")

    p = sub.add_parser("runtime-compare", help="decoding shot/trial-count curves")
    _add_common(p)
    p.add_argument("--hist", action="append", type=Path, default=None,
                   help="existing histogram CSV (repeatable); else chains are run")
    p.add_argument("--max-delta", dest="max_delta", type=int)
    p.add_argument("--grover", action="store_true", default=None,
                   help="append derived quadratic-speedup columns")

    p = sub.add_parser("oracle-verify", help="exact-state identity suite")
    _add_common(p)
    p.add_argument("--instances", type=int)
    p.add_argument("--inject-sign-flip", action="store_true", default=None,
                   help="corrupt one profile sign; verification must catch it")

    return ap


def _merge(args: argparse.Namespace) -> ExperimentConfig:
    base: dict = {}
    if getattr(args, "config", None):
        base.update(_read_config_file(args.config))
    for key, val in vars(args).items():
        if key in {"config", "hist"} or val is None:
            continue
        base[key] = val
    if getattr(args, "hist", None):
        base["hist_files"] = tuple(args.hist)
    if "b_list" in base and isinstance(base["b_list"], str):
        base["b_list"] = tuple(int(x) for x in base["b_list"].split(","))
    if "window" in base and base["window"] is not None:
        base["window"] = tuple(base["window"])
    for key in ("k_grid", "b_grid"):
        if key in base and base[key] is not None:
            base[key] = tuple(base[key])
    for flag in ("inject_sign_flip", "grover"):
        if flag in base and isinstance(base[flag], str):
            base[flag] = base[flag].lower() in {"1", "true", "yes"}
    known = set(ExperimentConfig.__dataclass_fields__)
    bad = set(base) - known
    if bad:
        raise ValueError(f"unknown config keys: {sorted(bad)}")
    return ExperimentConfig(**base)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge(args)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = COMMANDS[cfg.command](cfg)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except CodeballError as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return 2
    for key in sorted(report):
        if key in {"fidelities", "counts", "checks", "instances",
                   "acceptance_rate", "runtime_seconds", "code_checksum"}:
            print(f"{key}: {report[key]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
