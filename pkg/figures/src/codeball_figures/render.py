"""One renderer per figure id.

Each figure reads the documented CSV schemas, overlays the ideal curve
with the sampled points where applicable, and writes a raster image.
Rendering never modifies its inputs and is deterministic, so re-running
a figure reproduces the same file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .inputs import check_consistent, read_table

FIGURE_IDS = ("good_full", "bad_full", "bad_middle",
              "region_diagram", "mcexp", "runtimes")

REGION_COLORS = {
    "convergent": "#4878cf",  # blue: full convergence expected
    "cut_off": "#d65f5f",     # red: tails cut off
    "overlapping_balls": "#ffffff",
}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: dict[str, Path]
    output: Path
    window: tuple[float, float] | None = None
    dpi: int = 150

    def input_list(self, key: str) -> list[Path]:
        val = self.inputs[key]
        return list(val) if isinstance(val, (list, tuple)) else [val]


def _spectrum_axes(spec: FigureSpec, renorm: bool):
    ideal_meta, ideal = read_table(spec.inputs["ideal"])
    sampled = [read_table(p) for p in spec.input_list("sampled")]
    check_consistent([ideal_meta] + [m for m, _ in sampled])
    fig, ax = plt.subplots(figsize=(8, 5))
    h = np.array(ideal["h"])
    ax.plot(h, np.array(ideal["value"]), color="#4878cf", lw=1.2,
            label="ideal")
    for i, (meta, cols) in enumerate(sampled):
        counts = np.array(cols["count"], dtype=float)
        total = counts.sum()
        ax.plot(np.array(cols["h"]), counts / total, ".", ms=3,
                color="#d65f5f", label="sampled" if i == 0 else None)
    ax.set_xlabel("Hamming weight h")
    ax.set_ylabel("probability")
    ax.legend(frameon=False)
    return fig, ax, ideal_meta


def render_good_full(spec: FigureSpec):
    fig, ax, meta = _spectrum_axes(spec, renorm=False)
    n = int(meta.get("n", 1000))
    lo, hi = spec.window if spec.window else (0.3 * n, 0.7 * n)
    ax.set_xlim(lo, hi)
    ax.set_title(f"ideal vs sampled weight spectrum "
                 f"(n={meta.get('n')}, k={meta.get('k')}, b={meta.get('b')})")
    return fig


def render_bad_full(spec: FigureSpec):
    fig, ax, meta = _spectrum_axes(spec, renorm=False)
    n = int(meta.get("n", 1000))
    lo, hi = spec.window if spec.window else (0.2 * n, 0.8 * n)
    ax.set_xlim(lo, hi)
    ax.set_title(f"cut-off sampling: tails unreachable "
                 f"(n={meta.get('n')}, k={meta.get('k')}, b={meta.get('b')})")
    return fig


def render_bad_middle(spec: FigureSpec):
    tables = [read_table(p) for p in spec.input_list("window")]
    meta = check_consistent([m for m, _ in tables])
    fig, ax = plt.subplots(figsize=(8, 5))
    first = True
    for m, cols in tables:
        h = np.array(cols["h"])
        ax.plot(h, np.array(cols["ideal_renorm"]), color="#4878cf", lw=1.2,
                label="ideal (renormalized)" if first else None)
        ax.plot(h, np.array(cols["sampled_renorm"]), ".", ms=4,
                color="#d65f5f",
                label="sampled (renormalized)" if first else None)
        first = False
    lo = float(meta.get("window_lo", min(h)))
    hi = float(meta.get("window_hi", max(h)))
    if spec.window:
        lo, hi = spec.window
    ax.set_xlim(lo, hi)
    ax.set_xlabel("Hamming weight h")
    ax.set_ylabel("probability (window renormalized)")
    ax.legend(frameon=False)
    ax.set_title("central window, both series renormalized")
    return fig


def render_region_diagram(spec: FigureSpec):
    meta, cols = read_table(spec.inputs["region_map"])
    fig, ax = plt.subplots(figsize=(7, 6))
    ks = np.array(cols["k"], dtype=float)
    bs = np.array(cols["b"], dtype=float)
    classes = cols["class"]
    for cls, color in REGION_COLORS.items():
        sel = [i for i, c in enumerate(classes) if c == cls]
        if not sel or cls == "overlapping_balls":
            continue
        ax.scatter(bs[sel], ks[sel], c=color, marker="s", s=24,
                   label=cls.replace("_", " "))
    marks_b = [10, 20, 30, 40, 50, 60, 70]
    n = int(meta.get("n", 1000))
    ax.scatter(marks_b, [5 * b for b in marks_b], marker="x", c="#777777",
               s=60, label="experiments (k = 5b)")
    ax.set_xlabel("ball radius b")
    ax.set_ylabel("code dimension k")
    ax.set_title(f"predicted walk behaviour at n={n} "
                 "(white: overlapping balls)")
    ax.legend(frameon=False, loc="upper right")
    return fig


def render_mcexp(spec: FigureSpec):
    meta, cols = read_table(spec.inputs["sweep"])
    fig, ax = plt.subplots(figsize=(8, 5))
    bs = np.array(cols["b"], dtype=float)
    fids = np.array(cols["fidelity"], dtype=float)
    ax.plot(bs, fids, "o", ms=5, color="#4878cf", alpha=0.75)
    ax.set_xlabel("ball radius b  (k = 5b)")
    ax.set_ylabel("weight-spectrum fidelity")
    ax.set_ylim(0.0, 1.05)
    ax.axhline(1.0, color="#aaaaaa", lw=0.6)
    ax.set_title(f"chain fidelity along the k = 5b slice, n={meta.get('n')}")
    return fig


def render_runtimes(spec: FigureSpec):
    meta, cols = read_table(spec.inputs["runtime"])
    fig, ax = plt.subplots(figsize=(8, 5))
    deltas = np.array(cols["delta"], dtype=float)
    ax.plot(deltas, np.array(cols["log10_bruteforce"], dtype=float),
            "o", ms=5, color="#d65f5f", label="brute force")
    ax.plot(deltas, np.array(cols["log10_hadamard_ideal"], dtype=float),
            "-", lw=1.5, color="#4878cf", label="overlap test (ideal)")
    trial_cols = sorted(
        name for name in cols if name.startswith("log10_hadamard_sampled_trial_"))
    for i, name in enumerate(trial_cols):
        vals = np.array([v if isinstance(v, float) else np.nan
                         for v in cols[name]], dtype=float)
        ax.plot(deltas, vals, ".", ms=3, alpha=0.8,
                label="overlap test (sampled)" if i == 0 else None)
    ax.plot(deltas, np.array(cols["log10_isd"], dtype=float),
            "-", lw=1.5, color="#55a868", label="information set decoding")
    ax.set_xlabel("distance to nearest codeword")
    ax.set_ylabel("log10 runtime (shots / trials)")
    ax.set_title(f"decoding cost comparison "
                 f"(n={meta.get('n')}, k={meta.get('k')}, b={meta.get('b')})")
    ax.legend(frameon=False)
    return fig


_RENDERERS = {
    "good_full": render_good_full,
    "bad_full": render_bad_full,
    "bad_middle": render_bad_middle,
    "region_diagram": render_region_diagram,
    "mcexp": render_mcexp,
    "runtimes": render_runtimes,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure to spec.output; returns the written path."""
    if spec.figure_id not in _RENDERERS:
        raise ValueError(f"unknown figure id {spec.figure_id!r}; "
                         f"known: {FIGURE_IDS}")
    fig = _RENDERERS[spec.figure_id](spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=spec.dpi, metadata={"Software": None})
    plt.close(fig)
    return out
