"""Acceptance suite.

Runs every acceptance criterion at its stated tolerance and prints one
PASS/FAIL line per criterion (bypassing capture so the lines show up in
a plain pytest run).  The two 1e8-step chains and the 21-chain sweep
dominate the runtime; everything else takes seconds to a couple of
minutes.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from codeball import decode as dc, experiments as ex, gf2, oracle as oc
from codeball import spectrum as sp, walk as wk
from codeball.gf2 import BitVector
from codeball.krawtchouk import kraw, vol
from conftest import random_weight_vector


def report(capfd, name, ok, detail=""):
    with capfd.disabled():
        print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
              + (f"  ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def _instance_set(count=100, n_hi=14, seed=424242):
    """Random codes with n <= 14, 1 <= k <= n-1, b < gv_distance/2."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(4, n_hi + 1))
        k = int(rng.integers(1, n))
        pair = gf2.random_code(n, k, int(rng.integers(0, 2**62)))
        gv = gf2.gv_distance(n, k)
        b = int(rng.integers(0, max((gv - 1) // 2, 0) + 1))
        out.append((pair, b))
    return out


INSTANCES = _instance_set()

# fixed-seed headline configurations (any seed must do; these are pinned
# for reproducibility of the recorded numbers)
CONVERGED = dict(n=1000, k=100, b=20, code_seed=0, walk_seed=1)
CUTOFF = dict(n=1000, k=300, b=60, code_seed=0, walk_seed=1)
HEADLINE_STEPS = 100_000_000


def _headline_run(params, steps=HEADLINE_STEPS):
    pair = gf2.random_code(params["n"], params["k"], params["code_seed"])
    cfg = wk.WalkConfig(pair=pair, b=params["b"], steps=steps,
                        seed=params["walk_seed"])
    return wk.run_walk(cfg)


@pytest.fixture(scope="module")
def converged_run():
    return _headline_run(CONVERGED)


class TestOracleIdentity:
    def test_transform_identity_hundred_codes(self, capfd):
        worst = 0.0
        for pair, b in INSTANCES:
            lhs = oc.walsh_hadamard(oc.build_psi_b(pair, b))
            rhs = oc.build_psi_tilde(pair, b)
            worst = max(worst, abs(1.0 - oc.state_fidelity(lhs, rhs)))
        report(capfd, "oracle-identity",
               worst <= 1e-10,
               f"{len(INSTANCES)} codes, worst |1-fidelity| = {worst:.2e}")


class TestPipelineEndToEnd:
    def test_exact_marginals_reach_target(self, capfd):
        worst = 0.0
        for pair, b in INSTANCES:
            out = oc.simulate_pipeline(pair, b)
            ref = oc.build_psi_b(pair, b)
            worst = max(worst, abs(1.0 - oc.state_fidelity(out, ref)))
        report(capfd, "pipeline-end-to-end",
               worst <= 1e-10,
               f"{len(INSTANCES)} codes, worst |1-fidelity| = {worst:.2e}")


class TestKrawtchoukIdentity:
    def test_prefix_sum_identity_exact(self, capfd):
        checked = 0
        for n in range(1, 65):
            for x in range(0, n + 1):
                row = [1]
                km1, k0 = 0, 1
                for t in range(n):
                    k0, km1 = ((n - 2 * x) * k0 - (n - t + 1) * km1) // (t + 1), k0
                    row.append(k0)
                shifted = [1]
                km1, k0 = 0, 1
                m = n - 1
                xs = x - 1
                for t in range(n):
                    k0, km1 = ((m - 2 * xs) * k0 - (m - t + 1) * km1) // (t + 1), k0
                    shifted.append(k0)
                acc = 0
                for b in range(n + 1):
                    acc += row[b]
                    assert acc == shifted[b], (n, x, b)
                    checked += 1
        report(capfd, "krawtchouk-identity", True,
               f"{checked} exact equalities, n <= 64")


class TestOverlapFormula:
    def test_exhaustive_ball_intersections(self, capfd):
        checked = 0
        for n in range(1, 15):
            idx = np.arange(1 << n, dtype=np.int64)
            pop = np.zeros(1 << n, dtype=np.int64)
            for bit in range(n):
                pop += (idx >> bit) & 1
            for b in range(n + 1):
                ball = idx[pop <= b]
                volume = int(vol(n, b))
                for delta in range(n + 1):
                    z2 = (1 << delta) - 1
                    count = int((pop[np.bitwise_xor(ball, z2)] <= b).sum())
                    assert dc.ball_overlap_fraction(n, b, delta) == \
                        Fraction(count, volume), (n, b, delta)
                    checked += 1
        report(capfd, "overlap-formula-brute-force", True,
               f"{checked} exact (n, b, delta) checks, n <= 14")

    def test_against_translated_state(self, capfd):
        rng = np.random.default_rng(7)
        worst = 0.0
        checked = 0
        for pair, b in INSTANCES:
            D = gf2.min_distance(pair.primal)
            if 2 * b >= D:
                continue
            cws = gf2.all_codewords(pair.primal)
            for delta in range(0, min(D - 2 * b, (D + 1) // 2)):
                e = random_weight_vector(rng, pair.n, delta)
                c = cws[int(rng.integers(0, len(cws)))]
                got = oc.exact_overlap(pair, b, BitVector(c ^ e, pair.n))
                want = dc.ball_overlap(pair.n, b, delta)
                worst = max(worst, abs(got - want))
                checked += 1
        report(capfd, "overlap-formula-vs-oracle",
               worst <= 1e-10, f"{checked} checks, worst diff = {worst:.2e}")


class TestDequantization:
    def test_exhaustive_dual_sum_every_v(self, capfd):
        rng = np.random.default_rng(11)
        worst = 0.0
        codes = 0
        while codes < 3:
            n = int(rng.integers(8, 13))
            k = int(rng.integers(2, n - 1))
            pair = gf2.random_code(n, k, int(rng.integers(0, 2**62)))
            D = gf2.min_distance(pair.primal)
            b = (D - 1) // 2
            if 2 * b >= D or pair.k_perp > 11:
                continue
            codes += 1
            kv2 = np.zeros(n + 1, dtype=np.int64)
            for h in range(n + 1):
                kv2[h] = kraw(b, n - 1, h - 1) ** 2
            idx = np.arange(1 << n, dtype=np.int64)
            pop = np.zeros(1 << n, dtype=np.int64)
            for bit in range(n):
                pop += (idx >> bit) & 1
            duals = np.array(gf2.all_codewords(pair.dual), dtype=np.int64)
            terms = kv2[pop[duals]]
            den = float((1 << (n - k)) * vol(n, b))
            amps = oc.build_psi_b(pair, b).amps
            for v in range(1 << n):
                signs = 1 - 2 * (pop[np.bitwise_and(duals, v)] & 1)
                got = float((terms * signs).sum()) / den
                want = float(np.dot(amps, amps[np.bitwise_xor(idx, v)]))
                worst = max(worst, abs(got - want))
        report(capfd, "dequantization-identity",
               worst <= 1e-10,
               f"{codes} codes, every v, worst diff = {worst:.2e}")


class TestHeadlineConvergent:
    def test_fidelity(self, capfd, converged_run):
        ideal = sp.ideal_weight_distribution(1000, 100, 20)
        fid = sp.fidelity(converged_run.histogram.normalize(), ideal)
        report(capfd, "headline-convergent",
               fid >= 0.999,
               f"fidelity = {fid:.6f} at 1e8 steps "
               f"({converged_run.runtime_seconds:.0f}s)")


class TestHeadlineCutoff:
    def test_fidelity_and_tails(self, capfd):
        run = _headline_run(CUTOFF)
        ideal = sp.ideal_weight_distribution(1000, 300, 60)
        samp = run.histogram.normalize()
        fid = sp.fidelity(samp, ideal)
        barrier = sp.barrier_weight(sp.BarrierParams(1000, 150, 1e-6))
        outside = run.histogram.mass_outside(barrier, 1000 - barrier)
        tv = sp.total_variation(samp.restrict(450, 550), ideal.restrict(450, 550))
        ok = 0.55 <= fid <= 0.80 and outside < 1e-4 and tv <= 0.05
        report(capfd, "headline-cutoff", ok,
               f"fidelity = {fid:.4f} in [0.55, 0.80], "
               f"mass outside barrier = {outside:.2e} < 1e-4, "
               f"central-window TV = {tv:.4f} <= 0.05 "
               f"({run.runtime_seconds:.0f}s)")


@pytest.fixture(scope="module")
def sweep_fidelities():
    trials = 3
    fids: dict[int, list[float]] = {}
    for b in range(10, 71, 10):
        k = 5 * b
        ideal = sp.ideal_weight_distribution(1000, k, b)
        seeds = ex.trial_seeds(90_000 + b, trials)
        for s in seeds:
            pair = gf2.random_code(1000, k, s)
            cfg = wk.WalkConfig(pair=pair, b=b, steps=HEADLINE_STEPS, seed=s)
            res = wk.run_walk(cfg)
            fids.setdefault(b, []).append(
                sp.fidelity(res.histogram.normalize(), ideal))
    return fids


class TestRegionSweep:
    def test_k_equals_5b_slice_as_specified(self, capfd, sweep_fidelities):
        # the criterion as stated: >= 0.99 per trial for b <= 40 at 1e8
        # steps.  KNOWN RED at b = 30, 40: the target there is
        # edge-dominated and the chain's lobe-exchange time exceeds 1e8
        # steps, so per-trial fidelities plateau near 0.86 (b = 40) and
        # 0.98 (b = 30) regardless of seed; 4e8-step runs confirm the
        # slow upward drift toward the 1e10-step behaviour.  See the
        # companion test below for the measured desk-scale law.
        fids = sweep_fidelities
        ok = all(f >= 0.99 for b in (10, 20, 30, 40) for f in fids[b])
        means = {b: float(np.mean(fids[b])) for b in (50, 60, 70)}
        ok = ok and means[50] > means[60] > means[70]
        ok = ok and all(f > 0.5 for b in (50, 60, 70) for f in fids[b])
        detail = "; ".join(
            f"b={b}: " + ",".join(f"{f:.4f}" for f in fids[b])
            for b in sorted(fids)
        )
        report(capfd, "region-sweep", ok, detail)

    def test_k_equals_5b_slice_measured_behaviour(self, capfd, sweep_fidelities):
        # what three trials per point actually deliver at 1e8 steps
        fids = sweep_fidelities
        ok = all(f >= 0.99 for b in (10, 20) for f in fids[b])
        ok = ok and all(f >= 0.95 for f in fids[30])
        ok = ok and all(f >= 0.80 for f in fids[40])
        means = {b: float(np.mean(fids[b])) for b in sorted(fids)}
        seq = [means[b] for b in (20, 30, 40, 50, 60, 70)]
        ok = ok and all(a > bb for a, bb in zip(seq, seq[1:]))
        ok = ok and all(f > 0.5 for b in (50, 60, 70) for f in fids[b])
        report(capfd, "region-sweep-measured", ok,
               "; ".join(f"b={b}: mean {means[b]:.4f}" for b in sorted(fids)))


class TestISDStatistics:
    def test_success_rate_factor_two(self, capfd):
        pair = gf2.random_code(60, 20, seed=77)
        cws = gf2.all_codewords(pair.primal)
        rng = np.random.default_rng(88)
        trials = 10_000
        hits = 0
        for _ in range(trials):
            c = cws[int(rng.integers(0, len(cws)))]
            e = random_weight_vector(rng, 60, 3)
            inst = dc.BDDInstance(pair, BitVector(c ^ e, 60), 3)
            if dc.isd_trial(inst, rng) is not None:
                hits += 1
        want = 0.29 * math.comb(57, 20) / math.comb(60, 20)
        got = hits / trials
        ok = want / 2 <= got <= want * 2
        report(capfd, "isd-success-rate", ok,
               f"empirical {got:.4f} vs 0.29*C(57,20)/C(60,20) = {want:.4f}")

    def test_invertible_fraction(self, capfd):
        frac = dc.gf2_invertible_fraction(50, 100_000, np.random.default_rng(5))
        ok = abs(frac - 0.289) <= 0.01
        report(capfd, "gf2-invertible-fraction", ok,
               f"measured {frac:.4f}, target 0.289 +- 0.01")


class TestRuntimeOrdering:
    def test_isd_below_hadamard_below_brute_force(self, capfd, converged_run):
        n, k, b = 1000, 100, 20
        hist = converged_run.histogram.normalize()
        ok = True
        worst_gap = math.inf
        for delta in range(5, 41):
            log_bf = math.log10(dc.brute_force_runtime(n, delta))
            log_had = -2.0 * dc.log10_ball_overlap(n, b, delta)
            log_isd = -math.log10(dc.isd_success_prob(n, k, delta))
            est = dc.sampled_overlap(hist, delta)
            ordered = log_isd < log_had < log_bf
            if est > 0:
                log_had_s = -2.0 * math.log10(est)
                ordered = ordered and log_isd < log_had_s < log_bf
            ok = ok and ordered
            worst_gap = min(worst_gap, log_bf - log_had, log_had - log_isd)
        report(capfd, "runtime-ordering", ok,
               f"ISD < Hadamard < brute force for 5 <= delta <= 40, "
               f"min log10 gap = {worst_gap:.2f}")
