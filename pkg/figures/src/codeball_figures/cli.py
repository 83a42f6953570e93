"""Command-line figure rendering.

One subcommand per figure id plus ``all``.  Inputs are the CSV files the
experiment CLI writes; nothing is recomputed here.
Exit codes: 0 success, 2 missing/inconsistent inputs or bad arguments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .inputs import MetadataMismatch, MissingInput
from .render import FigureSpec, render


def _spectrum_inputs(args) -> dict:
    d = Path(args.spectrum_dir)
    sampled = sorted(d.glob("sampled_spectrum_t*.csv"))
    return {"ideal": d / "ideal_spectrum.csv", "sampled": sampled}


def _window_inputs(args) -> dict:
    d = Path(args.spectrum_dir)
    return {"window": sorted(d.glob("central_window_t*.csv"))}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="codeball-figures",
        description="Render experiment figures from codeball CSV outputs.",
    )
    sub = ap.add_subparsers(dest="figure", required=True)

    for fid in ("good_full", "bad_full", "bad_middle"):
        p = sub.add_parser(fid, help=f"render {fid} from a spectrum run")
        p.add_argument("--spectrum-dir", required=True,
                       help="directory written by `codeball spectrum`")
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))

    p = sub.add_parser("region_diagram", help="render the (k, b) region map")
    p.add_argument("--region-map", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("mcexp", help="render the fidelity sweep")
    p.add_argument("--sweep", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("runtimes", help="render the decoding cost comparison")
    p.add_argument("--runtime", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("all", help="render every figure from one layout")
    p.add_argument("--spectrum-dir", required=True,
                   help="converged spectrum run directory")
    p.add_argument("--cutoff-dir", required=True,
                   help="cut-off spectrum run directory")
    p.add_argument("--region-map", required=True, type=Path)
    p.add_argument("--sweep", required=True, type=Path)
    p.add_argument("--runtime", required=True, type=Path)
    p.add_argument("--out-dir", required=True, type=Path)
    return ap


def specs_from_args(args) -> list[FigureSpec]:
    fid = args.figure
    if fid in ("good_full", "bad_full"):
        return [FigureSpec(fid, _spectrum_inputs(args), args.out,
                           window=tuple(args.window) if args.window else None)]
    if fid == "bad_middle":
        return [FigureSpec(fid, _window_inputs(args), args.out,
                           window=tuple(args.window) if args.window else None)]
    if fid == "region_diagram":
        return [FigureSpec(fid, {"region_map": args.region_map}, args.out)]
    if fid == "mcexp":
        return [FigureSpec(fid, {"sweep": args.sweep}, args.out)]
    if fid == "runtimes":
        return [FigureSpec(fid, {"runtime": args.runtime}, args.out)]
    # all
    out = Path(args.out_dir)
    good = Path(args.spectrum_dir)
    bad = Path(args.cutoff_dir)
    return [
        FigureSpec("good_full",
                   {"ideal": good / "ideal_spectrum.csv",
                    "sampled": sorted(good.glob("sampled_spectrum_t*.csv"))},
                   out / "good_full.png"),
        FigureSpec("bad_full",
                   {"ideal": bad / "ideal_spectrum.csv",
                    "sampled": sorted(bad.glob("sampled_spectrum_t*.csv"))},
                   out / "bad_full.png"),
        FigureSpec("bad_middle",
                   {"window": sorted(bad.glob("central_window_t*.csv"))},
                   out / "bad_middle.png"),
        FigureSpec("region_diagram", {"region_map": args.region_map},
                   out / "region_diagram.png"),
        FigureSpec("mcexp", {"sweep": args.sweep}, out / "mcexp.png"),
        FigureSpec("runtimes", {"runtime": args.runtime}, out / "runtimes.png"),
    ]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        for spec in specs_from_args(args):
            path = render(spec)
            print(f"wrote {path}")
    except (MissingInput, MetadataMismatch, ValueError, OSError) as exc:
        print(f"figure error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
