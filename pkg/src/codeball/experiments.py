"""Experiment commands behind the CLI.

Each command builds a seeded random code, runs chains or sweeps, and
writes CSV files with a JSON sidecar.  Every output embeds the full
run context (n, k, b, steps, seed, PRNG id, code checksum) so a run can
be reproduced byte for byte from any of its files.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import decode, gf2, oracle, spectrum, walk
from .errors import VerificationFailure
from .krawtchouk import kraw, log_abs_int
from .spectrum import WeightHistogram

__all__ = [
    "ExperimentConfig",
    "cmd_spectrum",
    "cmd_walk",
    "cmd_region_map",
    "cmd_fidelity_sweep",
    "cmd_runtime_compare",
    "cmd_oracle_verify",
    "oracle_verify",
    "read_histogram_csv",
    "trial_seeds",
]

_LOG10E = math.log10(math.e)

EXACT_IDEAL_LIMIT = 20  # enumerate the dual exactly up to 2^20 codewords


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    n: int = 1000
    k: int = 100
    b: int = 20
    steps: int = 100_000_000
    trials: int = 1
    seed: int = 0
    epsilon: float = 1e-6
    output_dir: Path = Path("out")
    burn_in: int = 10_000
    workers: int = 1
    window: tuple[int, int] | None = None
    k_grid: tuple[int, int, int] | None = None
    b_grid: tuple[int, int, int] | None = None
    b_list: tuple[int, ...] = (10, 20, 30, 40, 50, 60, 70)
    max_delta: int | None = None
    hist_files: tuple[Path, ...] = ()
    instances: int = 100
    inject_sign_flip: bool = False
    grover: bool = False

    def out(self) -> Path:
        p = Path(self.output_dir)
        p.mkdir(parents=True, exist_ok=True)
        return p


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Independent, reproducible per-trial seeds spawned from one root."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _metadata(cfg: ExperimentConfig, pair: gf2.CodePair | None) -> dict:
    meta = {
        "command": cfg.command,
        "n": cfg.n,
        "k": cfg.k,
        "b": cfg.b,
        "steps": cfg.steps,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "epsilon": cfg.epsilon,
        "burn_in": cfg.burn_in,
        "prng_id": walk.PRNG_ID,
    }
    if pair is not None:
        meta["code_checksum"] = gf2.code_checksum(pair)
    return meta


def _write_csv(path: Path, meta: dict, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        for key, val in meta.items():
            fh.write(f"# {key}={val}\n")
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_histogram_csv(path) -> WeightHistogram:
    """Read an (h, value) CSV written by these commands; '#' lines are
    metadata and are skipped."""
    hs, vals = [], []
    with open(path, newline="") as fh:
        rows = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(rows)
        for row in rows:
            hs.append(int(row[0]))
            vals.append(float(row[1]))
    n = max(hs)
    arr = np.zeros(n + 1)
    arr[np.array(hs)] = vals
    return WeightHistogram(n, arr)


def _walk_task(cfg: walk.WalkConfig) -> walk.WalkResult:
    return walk.run_walk(cfg)


def _run_trials(configs: list[walk.WalkConfig], workers: int) -> list[walk.WalkResult]:
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_walk_task, configs))
    return [walk.run_walk(c) for c in configs]


def _ideal_for(pair: gf2.CodePair, b: int) -> tuple[WeightHistogram, str]:
    """Exact dual enumeration when affordable, else the binomial model."""
    if pair.k_perp <= EXACT_IDEAL_LIMIT:
        return spectrum.ideal_distribution_exact(pair, b), "exact-enumeration"
    return spectrum.ideal_weight_distribution(pair.n, pair.k, b), "binomial"


def _cleanup(paths: list[Path]) -> None:
    for p in paths:
        try:
            Path(p).unlink(missing_ok=True)
        except OSError:
            pass


def cmd_spectrum(cfg: ExperimentConfig) -> dict:
    """Ideal vs sampled weight spectrum, fidelity, and the renormalized
    central window."""
    outdir = cfg.out()
    written: list[Path] = []
    try:
        pair = gf2.random_code(cfg.n, cfg.k, cfg.seed)
        meta = _metadata(cfg, pair)
        ideal, ideal_model = _ideal_for(pair, cfg.b)
        meta["ideal_model"] = ideal_model

        seeds = trial_seeds(cfg.seed, cfg.trials)
        configs = [
            walk.WalkConfig(pair=pair, b=cfg.b, steps=cfg.steps,
                            seed=s, burn_in=cfg.burn_in)
            for s in seeds
        ]
        results = _run_trials(configs, cfg.workers)

        path = outdir / "ideal_spectrum.csv"
        _write_csv(path, meta, ["h", "value"],
                   [(h, f"{v:.17g}") for h, v in enumerate(ideal.entries)])
        written.append(path)

        lo, hi = cfg.window if cfg.window else (round(cfg.n * 0.45), round(cfg.n * 0.55))
        f = max(1, (cfg.k + 1) // 2)
        barrier = spectrum.barrier_weight(spectrum.BarrierParams(cfg.n, f, cfg.epsilon))

        fidelities = []
        outside = []
        window_tv = []
        ideal_win = ideal.restrict(lo, hi)
        for i, res in enumerate(results):
            samp = res.histogram.normalize()
            fidelities.append(spectrum.fidelity(samp, ideal))
            outside.append(res.histogram.mass_outside(barrier, cfg.n - barrier))
            samp_win = samp.restrict(lo, hi)
            window_tv.append(spectrum.total_variation(samp_win, ideal_win))
            path = outdir / f"sampled_spectrum_t{i}.csv"
            tmeta = dict(meta, trial=i, trial_seed=res.config.seed,
                         acceptance_rate=res.acceptance_rate)
            _write_csv(path, tmeta, ["h", "count"],
                       [(h, int(v)) for h, v in enumerate(res.histogram.entries)])
            written.append(path)

            rows = [(h, f"{ideal_win.entries[h]:.17g}", f"{samp_win.entries[h]:.17g}")
                    for h in range(lo, hi + 1)]
            path = outdir / f"central_window_t{i}.csv"
            _write_csv(path, dict(tmeta, window_lo=lo, window_hi=hi),
                       ["h", "ideal_renorm", "sampled_renorm"], rows)
            written.append(path)

        summary = dict(meta)
        summary.update({
            "fidelities": fidelities,
            "trial_seeds": seeds,
            "barrier_weight": barrier,
            "mass_outside_barrier": outside,
            "window": [lo, hi],
            "window_tv": window_tv,
            "acceptance_rates": [r.acceptance_rate for r in results],
            "runtime_seconds": [r.runtime_seconds for r in results],
        })
        path = outdir / "spectrum_summary.json"
        _write_json(path, summary)
        written.append(path)
        return summary
    except Exception:
        _cleanup(written)
        raise


def cmd_walk(cfg: ExperimentConfig) -> dict:
    """One raw chain; histogram CSV plus JSON sidecar."""
    outdir = cfg.out()
    pair = gf2.random_code(cfg.n, cfg.k, cfg.seed)
    meta = _metadata(cfg, pair)
    wcfg = walk.WalkConfig(pair=pair, b=cfg.b, steps=cfg.steps,
                           seed=cfg.seed, burn_in=cfg.burn_in)
    res = walk.run_walk(wcfg)
    _write_csv(outdir / "walk_hist.csv", meta, ["h", "count"],
               [(h, int(v)) for h, v in enumerate(res.histogram.entries)])
    sidecar = dict(meta)
    sidecar.update(res.json_dict())
    _write_json(outdir / "walk.json", sidecar)
    return sidecar


def cmd_region_map(cfg: ExperimentConfig) -> dict:
    """Classify a (k, b) grid at fixed n into the three walk regimes."""
    outdir = cfg.out()
    n = cfg.n
    k_grid = cfg.k_grid or (25, n - 25, 25)
    b_grid = cfg.b_grid or (5, min(n // 4, 250), 5)
    meta = _metadata(cfg, None)
    meta.update(k_grid=list(k_grid), b_grid=list(b_grid))
    rows = []
    counts = {c: 0 for c in spectrum.RegionClass}
    for k in range(k_grid[0], k_grid[1] + 1, k_grid[2]):
        for b in range(b_grid[0], b_grid[1] + 1, b_grid[2]):
            cls = spectrum.classify_region(n, k, b, cfg.epsilon)
            counts[cls] += 1
            rows.append((k, b, cls.value))
    _write_csv(outdir / "region_map.csv", meta, ["k", "b", "class"], rows)
    summary = dict(meta, counts={c.value: v for c, v in counts.items()})
    _write_json(outdir / "region_map.json", summary)
    return summary


def cmd_fidelity_sweep(cfg: ExperimentConfig) -> dict:
    """Fidelity along the k = 5b slice, several trials per point."""
    outdir = cfg.out()
    written: list[Path] = []
    try:
        meta = _metadata(cfg, None)
        meta["b_list"] = list(cfg.b_list)
        rows = []
        by_b: dict[int, list[float]] = {}
        seeds = trial_seeds(cfg.seed, len(cfg.b_list) * cfg.trials)
        si = 0
        for b in cfg.b_list:
            k = 5 * b
            ideal = spectrum.ideal_weight_distribution(cfg.n, k, b)
            for t in range(cfg.trials):
                s = seeds[si]
                si += 1
                pair = gf2.random_code(cfg.n, k, s)
                wcfg = walk.WalkConfig(pair=pair, b=b, steps=cfg.steps,
                                       seed=s, burn_in=cfg.burn_in)
                res = walk.run_walk(wcfg)
                fid = spectrum.fidelity(res.histogram.normalize(), ideal)
                by_b.setdefault(b, []).append(fid)
                rows.append((b, k, t, s, f"{fid:.12g}"))
        _write_csv(outdir / "fidelity_sweep.csv", meta,
                   ["b", "k", "trial", "trial_seed", "fidelity"], rows)
        written.append(outdir / "fidelity_sweep.csv")
        summary = dict(meta, fidelities={str(b): v for b, v in by_b.items()})
        _write_json(outdir / "fidelity_sweep.json", summary)
        written.append(outdir / "fidelity_sweep.json")
        return summary
    except Exception:
        _cleanup(written)
        raise


def cmd_runtime_compare(cfg: ExperimentConfig) -> dict:
    """Shot/trial-count curves for the three decoding approaches.

    Histograms come from --hist files when given, otherwise fresh chains
    are run (cfg.trials of them).
    """
    outdir = cfg.out()
    pair = gf2.random_code(cfg.n, cfg.k, cfg.seed)
    meta = _metadata(cfg, pair)

    if cfg.hist_files:
        hists = [read_histogram_csv(p) for p in cfg.hist_files]
        meta["hist_files"] = [str(p) for p in cfg.hist_files]
    else:
        seeds = trial_seeds(cfg.seed, cfg.trials)
        configs = [
            walk.WalkConfig(pair=pair, b=cfg.b, steps=cfg.steps,
                            seed=s, burn_in=cfg.burn_in)
            for s in seeds
        ]
        hists = [r.histogram for r in _run_trials(configs, cfg.workers)]

    max_delta = cfg.max_delta if cfg.max_delta is not None else 2 * cfg.b
    deltas = range(1, max_delta + 1)
    norm = [h.normalize() for h in hists]

    header = (["delta", "log10_bruteforce", "log10_hadamard_ideal"]
              + [f"log10_hadamard_sampled_trial_{i + 1}" for i in range(len(norm))]
              + ["log10_isd"])
    if cfg.grover:
        # quadratic-speedup variants are pure derived quantities: half
        # the log10 count, never an implemented search
        header += ["log10_hadamard_ideal_grover", "log10_isd_grover"]
    rows = []
    for d in deltas:
        log_bf = log_abs_int(decode.brute_force_runtime(cfg.n, d)) * _LOG10E
        log_ideal = -2.0 * decode.log10_ball_overlap(cfg.n, cfg.b, d)
        sampled = []
        for h in norm:
            est = decode.sampled_overlap(h, d)
            sampled.append(f"{-2.0 * math.log10(abs(est)):.6f}" if est != 0 else "inf")
        p_isd = decode.isd_success_prob(cfg.n, cfg.k, d)
        log_isd = -math.log10(p_isd)
        row = [d, f"{log_bf:.6f}", f"{log_ideal:.6f}", *sampled, f"{log_isd:.6f}"]
        if cfg.grover:
            row += [f"{log_ideal / 2:.6f}", f"{log_isd / 2:.6f}"]
        rows.append(row)
    _write_csv(outdir / "runtime_compare.csv", meta, header, rows)
    summary = dict(meta, deltas=[int(d) for d in deltas], n_hists=len(norm))
    _write_json(outdir / "runtime_compare.json", summary)
    return summary


def _psi_tilde_amps(pair: gf2.CodePair, b: int, flip_h: int | None) -> oracle.StateVector:
    """Transform-side state built from the profile table, optionally with
    one sign deliberately corrupted (mutation hook for the verifier)."""
    n = pair.n
    kv = [float(kraw(b, n - 1, h - 1)) for h in range(n + 1)]
    if flip_h is not None:
        kv[flip_h] = -kv[flip_h]
    amps = np.zeros(1 << n)
    for d in gf2.all_codewords(pair.dual):
        amps[d] = kv[d.bit_count()]
    nrm = math.sqrt(float(np.dot(amps, amps)))
    return oracle.StateVector(n, amps / nrm)


def oracle_verify(seed: int = 0, instances: int = 100,
                  inject_sign_flip: bool = False) -> dict:
    """Randomized self-check of the exact-state identities.

    Each instance draws a small random code and checks: the transform
    identity between the ball superposition and the dual-profile state,
    the end-to-end pipeline, overlap formula against translation, the
    enumerated sign-statistic identity, plus the convolution property on
    random functions.  Raises VerificationFailure on the first failure.

    With ``inject_sign_flip`` one profile sign is corrupted on purpose;
    verification must then FAIL to prove the checks have teeth.
    """
    rng = np.random.default_rng(seed)
    checks = 0
    t0 = time.perf_counter()
    for i in range(instances):
        n = int(rng.integers(6, 13))
        k = int(rng.integers(1, n))
        pair = gf2.random_code(n, k, int(rng.integers(0, 2**63)))
        D = gf2.min_distance(pair.primal)
        b = int(rng.integers(0, (D - 1) // 2 + 1))

        lhs = oracle.walsh_hadamard(oracle.build_psi_b(pair, b))
        flip = None
        if inject_sign_flip:
            flip = _pick_flippable_weight(pair, b)
        if flip is None and inject_sign_flip:
            continue  # no nonzero negative-profile weight in this instance
        rhs = _psi_tilde_amps(pair, b, flip)
        fid = oracle.state_fidelity(lhs, rhs)
        if abs(fid - 1.0) > 1e-10:
            if inject_sign_flip:
                return {"instances": i + 1, "checks": checks,
                        "injected_fault_detected": True}
            raise VerificationFailure(
                f"transform identity failed at n={n} k={k} b={b}: fidelity={fid}")
        if inject_sign_flip:
            continue
        checks += 1

        out = oracle.simulate_pipeline(pair, b)
        ref = oracle.build_psi_b(pair, b)
        fid = oracle.state_fidelity(out, ref)
        if abs(fid - 1.0) > 1e-10:
            raise VerificationFailure(
                f"pipeline identity failed at n={n} k={k} b={b}: fidelity={fid}")
        checks += 1

        if 2 * b < D:
            delta = int(rng.integers(0, min(b, n - 1) + 1))
            e = _random_weight_vector(rng, n, delta)
            cws = gf2.all_codewords(pair.primal)
            v = gf2.BitVector(cws[int(rng.integers(0, len(cws)))] ^ e, n)
            got = oracle.exact_overlap(pair, b, v)
            if 2 * b + delta < D:
                want = decode.ball_overlap(n, b, delta)
                if abs(got - want) > 1e-10:
                    raise VerificationFailure(
                        f"overlap formula failed at n={n} b={b} delta={delta}: "
                        f"{got} vs {want}")
                checks += 1
            deq = decode.dequantized_overlap_exact(pair, b, v)
            if abs(deq - got) > 1e-10:
                raise VerificationFailure(
                    f"sign-statistic identity failed at n={n} b={b}: {deq} vs {got}")
            checks += 1

    if inject_sign_flip:
        raise VerificationFailure("injected sign corruption was NOT detected")

    for _ in range(10):
        n = int(rng.integers(2, 10))
        if not _convolution_holds(rng, n):
            raise VerificationFailure(f"convolution identity failed at n={n}")
        checks += 1

    return {"instances": instances, "checks": checks,
            "runtime_seconds": time.perf_counter() - t0}


def _pick_flippable_weight(pair: gf2.CodePair, b: int) -> int | None:
    W = gf2.weight_enumerator(pair.dual)
    for h in range(pair.n + 1):
        if W[h] and kraw(b, pair.n - 1, h - 1) != 0:
            return h
    return None


def _random_weight_vector(rng: np.random.Generator, n: int, w: int) -> int:
    idx = rng.choice(n, size=w, replace=False)
    v = 0
    for i in idx:
        v |= 1 << int(i)
    return v


def _convolution_holds(rng: np.random.Generator, n: int) -> bool:
    """Transform of an XOR-convolution equals the product of transforms."""
    size = 1 << n
    f = rng.standard_normal(size)
    g = rng.standard_normal(size)
    idx = np.arange(size)
    conv = np.zeros(size)
    for y in range(size):
        conv += f[y] * g[np.bitwise_xor(idx, y)]
    conv /= math.sqrt(size)
    # normalize to make unit states; the identity is linear so scaling is free
    sc = 1.0 / math.sqrt(float(np.dot(conv, conv)))
    lhs = oracle.walsh_hadamard(oracle.StateVector(n, conv * sc)).amps
    ft = oracle.walsh_hadamard(oracle.StateVector(
        n, f / math.sqrt(float(np.dot(f, f))))).amps
    gt = oracle.walsh_hadamard(oracle.StateVector(
        n, g / math.sqrt(float(np.dot(g, g))))).amps
    prod = ft * gt * math.sqrt(float(np.dot(f, f))) * math.sqrt(float(np.dot(g, g)))
    prod *= sc
    return bool(np.allclose(lhs, prod, atol=1e-10))


def cmd_oracle_verify(cfg: ExperimentConfig) -> dict:
    report = oracle_verify(cfg.seed, cfg.instances, cfg.inject_sign_flip)
    outdir = cfg.out()
    payload = dict(_metadata(cfg, None))
    payload.update(report)
    _write_json(outdir / "oracle_verify.json", payload)
    return payload


COMMANDS = {
    "spectrum": cmd_spectrum,
    "walk": cmd_walk,
    "region-map": cmd_region_map,
    "fidelity-sweep": cmd_fidelity_sweep,
    "runtime-compare": cmd_runtime_compare,
    "oracle-verify": cmd_oracle_verify,
}
