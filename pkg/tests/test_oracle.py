import math

import numpy as np
import pytest

from codeball import decode, gf2, oracle as oc, spectrum as sp
from codeball.errors import LengthMismatch, TooLarge
from codeball.gf2 import BitVector, GeneratorMatrix
from codeball.krawtchouk import kraw, vol
from conftest import random_pair_with_distance, random_weight_vector


def rep_code(n):
    """C = {0...0, 1...1}; its dual is the even-weight code."""
    B = GeneratorMatrix(((1 << n) - 1,), n, systematic=True)
    return gf2.CodePair(B, gf2.dual_generator(B))


class TestBuildPsiB:
    def test_two_disjoint_balls(self):
        # 10 strings within distance 1 of 0000 or 1111, amplitude 1/sqrt(10)
        pair = rep_code(4)
        s = oc.build_psi_b(pair, 1)
        want_support = {0b0000, 0b0001, 0b0010, 0b0100, 0b1000,
                        0b1111, 0b1110, 0b1101, 0b1011, 0b0111}
        for y in range(16):
            if y in want_support:
                assert s.amps[y] == pytest.approx(1 / math.sqrt(10))
            else:
                assert s.amps[y] == 0.0

    def test_full_radius_uniform(self):
        pair = rep_code(5)
        s = oc.build_psi_b(pair, 5)
        assert np.allclose(s.amps, 2.0 ** (-2.5))

    def test_overlapping_balls_multiplicity(self):
        # distance-2 code at b = 1: strings covered twice get double weight
        B = GeneratorMatrix((0b011,), 3, systematic=True)
        pair = gf2.CodePair(B, gf2.dual_generator(B))
        s = oc.build_psi_b(pair, 1)
        # codewords are values 0 and 3; values 1 and 2 sit in both balls
        heavy = {0b001, 0b010}
        light = {0b000, 0b011, 0b100, 0b111}
        norm = math.sqrt(2 * 4 + 4 * 1)
        for y in range(8):
            if y in heavy:
                assert s.amps[y] == pytest.approx(2 / norm)
            elif y in light:
                assert s.amps[y] == pytest.approx(1 / norm)
            else:
                assert s.amps[y] == 0.0

    def test_size_cap(self):
        pair = gf2.random_code(17, 3, seed=0)
        with pytest.raises(TooLarge):
            oc.build_psi_b(pair, 1)


class TestWalshHadamard:
    def test_involution(self, rng):
        amps = rng.standard_normal(64)
        amps /= np.linalg.norm(amps)
        s = oc.StateVector(6, amps)
        back = oc.walsh_hadamard(oc.walsh_hadamard(s))
        assert np.allclose(back.amps, s.amps, atol=1e-12)

    def test_zero_state_to_uniform(self):
        amps = np.zeros(32)
        amps[0] = 1.0
        out = oc.walsh_hadamard(oc.StateVector(5, amps))
        assert np.allclose(out.amps, 2.0 ** (-2.5))

    def test_code_superposition_maps_to_dual(self, rng):
        for _ in range(10):
            pair = random_pair_with_distance(rng, 6, 12)
            n = pair.n
            amps = np.zeros(1 << n)
            for c in gf2.all_codewords(pair.primal):
                amps[c] = 1.0
            amps /= np.linalg.norm(amps)
            out = oc.walsh_hadamard(oc.StateVector(n, amps))
            want = np.zeros(1 << n)
            for d in gf2.all_codewords(pair.dual):
                want[d] = 1.0
            want /= np.linalg.norm(want)
            assert np.allclose(out.amps, want, atol=1e-12)

    def test_norm_preserved(self, rng):
        amps = rng.standard_normal(1 << 10)
        amps /= np.linalg.norm(amps)
        out = oc.walsh_hadamard(oc.StateVector(10, amps))
        assert abs(float(np.dot(out.amps, out.amps)) - 1.0) < 1e-12


class TestBuildPsiTilde:
    def test_transform_identity_random_codes(self, rng):
        # the central identity: transform of the ball superposition is
        # the profile-weighted dual superposition
        for _ in range(25):
            pair = random_pair_with_distance(rng, 6, 14)
            D = gf2.min_distance(pair.primal)
            b = int(rng.integers(0, (D - 1) // 2 + 1))
            lhs = oc.walsh_hadamard(oc.build_psi_b(pair, b))
            rhs = oc.build_psi_tilde(pair, b)
            assert oc.state_fidelity(lhs, rhs) == pytest.approx(1.0, abs=1e-10)

    def test_b_zero_uniform_over_dual(self):
        pair = gf2.random_code(10, 4, seed=3)
        s = oc.build_psi_tilde(pair, 0)
        dual = set(gf2.all_codewords(pair.dual))
        for y in range(1 << 10):
            if y in dual:
                assert s.amps[y] == pytest.approx(1 / math.sqrt(len(dual)))
            else:
                assert s.amps[y] == 0.0

    def test_rep_code_hand_amplitudes(self):
        # even-weight dual at b = 1: amplitudes proportional to 5, 1, -3
        # at weights 0, 2, 4 (profile 5 - 2h), norm sqrt(25 + 6 + 9)
        pair = rep_code(4)
        s = oc.build_psi_tilde(pair, 1)
        norm = math.sqrt(40.0)
        for d in gf2.all_codewords(pair.dual):
            want = {0: 5.0, 2: 1.0, 4: -3.0}[d.bit_count()] / norm
            assert s.amps[d] == pytest.approx(want, abs=1e-12)

    def test_normalizer_closed_form_when_disjoint(self, rng):
        # sum over the dual of K^2 equals 2^{n-k} Vol(b), exactly in
        # integers, whenever 2b < D
        for _ in range(10):
            pair = random_pair_with_distance(rng, 6, 14, d_min=3)
            D = gf2.min_distance(pair.primal)
            b = (D - 1) // 2
            W = gf2.weight_enumerator(pair.dual)
            total = sum(
                W[h] * kraw(b, pair.n - 1, h - 1) ** 2 for h in range(pair.n + 1)
            )
            assert total == (1 << (pair.n - pair.k)) * vol(pair.n, b)


class TestBallTransformProfile:
    def test_ball_indicator_transform_is_profile(self):
        # transform of the radius-b ball indicator has amplitudes
        # proportional to the degree-b profile of |x|, all n <= 14, all b
        for n in range(1, 15):
            pop = oc._popcount_table(n)
            for b in range(n + 1):
                g = (pop <= b).astype(np.float64)
                g /= np.linalg.norm(g)
                out = oc.walsh_hadamard(oc.StateVector(n, g))
                kvals = np.array([float(kraw(b, n - 1, h - 1)) for h in range(n + 1)])
                want = kvals[pop] / math.sqrt(vol(n, b) * (1 << n))
                assert np.allclose(out.amps, want, atol=1e-12), (n, b)


class TestSimulatePipeline:
    def test_exact_marginals_reproduce_target(self, rng):
        for _ in range(15):
            pair = random_pair_with_distance(rng, 6, 13)
            D = gf2.min_distance(pair.primal)
            b = int(rng.integers(0, (D - 1) // 2 + 1))
            out = oc.simulate_pipeline(pair, b)
            ref = oc.build_psi_b(pair, b)
            assert oc.state_fidelity(out, ref) == pytest.approx(1.0, abs=1e-10)

    def test_b_zero_gives_code_superposition(self):
        pair = gf2.random_code(9, 4, seed=6)
        out = oc.simulate_pipeline(pair, 0)
        want = np.zeros(1 << 9)
        for c in gf2.all_codewords(pair.primal):
            want[c] = 1.0
        want /= np.linalg.norm(want)
        assert np.allclose(np.abs(out.amps), want, atol=1e-10)

    def test_mcmc_marginals_high_fidelity(self):
        # frozen-prefix chains estimate every rotation; the fidelity
        # deficit is pure sampling error
        pair = gf2.random_code(10, 3, 0)  # enumerated distance 4 -> b = 1
        assert gf2.min_distance(pair.primal) == 4
        out = oc.simulate_pipeline(
            pair, 1, oc.McmcMarginals(steps=50_000, burn_in=2_000, seed=9))
        ref = oc.build_psi_b(pair, 1)
        assert oc.state_fidelity(out, ref) >= 0.99


class TestExactOverlap:
    def test_zero_translation(self, rng):
        pair = random_pair_with_distance(rng, 6, 12)
        b = 1
        assert oc.exact_overlap(pair, b, BitVector.zeros(pair.n)) == pytest.approx(1.0)

    def test_far_translation_is_zero(self):
        # rep code distance 8; |v| = 4 keeps every ball pair > 2b apart
        pair = rep_code(8)
        v = BitVector(0b00001111, 8)
        assert oc.exact_overlap(pair, 1, v) == 0.0

    def test_matches_ball_overlap_formula(self, rng):
        for _ in range(10):
            pair = random_pair_with_distance(rng, 8, 14, d_min=4)
            D = gf2.min_distance(pair.primal)
            b = (D - 1) // 2
            cws = gf2.all_codewords(pair.primal)
            for delta in range(0, D - 2 * b):
                e = random_weight_vector(rng, pair.n, delta)
                c = cws[int(rng.integers(0, len(cws)))]
                got = oc.exact_overlap(pair, b, BitVector(c ^ e, pair.n))
                want = decode.ball_overlap(pair.n, b, delta)
                assert got == pytest.approx(want, abs=1e-10)


class TestStateFidelity:
    def test_identical(self, rng):
        amps = rng.standard_normal(16)
        amps /= np.linalg.norm(amps)
        s = oc.StateVector(4, amps)
        assert oc.state_fidelity(s, s) == pytest.approx(1.0)

    def test_orthogonal_basis_states(self):
        a = np.zeros(8)
        a[1] = 1.0
        b = np.zeros(8)
        b[5] = 1.0
        assert oc.state_fidelity(oc.StateVector(3, a), oc.StateVector(3, b)) == 0.0

    def test_length_mismatch(self):
        a = np.zeros(4)
        a[0] = 1.0
        b = np.zeros(8)
        b[0] = 1.0
        with pytest.raises(LengthMismatch):
            oc.state_fidelity(oc.StateVector(2, a), oc.StateVector(3, b))


class TestSampledStateFidelity:
    def test_histogram_state_fidelity_is_bhattacharyya(self, rng):
        # a state sampled uniformly within each weight class has fidelity
        # sum_h sqrt(q_h p_h) to the target, exactly
        for _ in range(5):
            pair = random_pair_with_distance(rng, 8, 12, d_min=3)
            n = pair.n
            b = 1
            W = gf2.weight_enumerator(pair.dual)
            kv = [kraw(b, n - 1, h - 1) for h in range(n + 1)]
            support = [h for h in range(n + 1) if W[h] and kv[h] != 0]
            q = np.zeros(n + 1)
            q[support] = rng.random(len(support)) + 0.05
            q /= q.sum()
            amps = np.zeros(1 << n)
            for d in gf2.all_codewords(pair.dual):
                h = d.bit_count()
                if q[h]:
                    amps[d] = math.copysign(math.sqrt(q[h] / W[h]), kv[h])
            state = oc.walsh_hadamard(oc.StateVector(n, amps))
            got = oc.state_fidelity(state, oc.build_psi_b(pair, b))
            ideal = sp.ideal_distribution_exact(pair, b)
            want = sp.fidelity(
                sp.WeightHistogram(n, q, normalized=True), ideal)
            assert got == pytest.approx(want, abs=1e-10)
