"""Sampling, spectra and decoding benchmarks for Hamming-ball
superpositions over binary linear codes."""

from .gf2 import (
    BitVector,
    CodePair,
    GeneratorMatrix,
    dual_generator,
    encode,
    gv_distance,
    load_code,
    make_code_pair,
    random_code,
    right_inverse,
    save_code,
    systematic_form,
)
from .krawtchouk import (
    KrawtchoukTable,
    SignedLogValue,
    kraw,
    kraw_table,
    support_interval,
    vol,
)
from .spectrum import (
    BarrierParams,
    RegionClass,
    WeightHistogram,
    barrier_weight,
    classify_region,
    fidelity,
    ideal_distribution_exact,
    ideal_weight_distribution,
    p_down,
    total_variation,
)
from .walk import (
    WalkConfig,
    WalkResult,
    conditional_marginal,
    init_walker,
    metropolis_step,
    run_walk,
    sample_dual_codewords,
)
from .oracle import (
    McmcMarginals,
    StateVector,
    build_psi_b,
    build_psi_tilde,
    exact_overlap,
    simulate_pipeline,
    state_fidelity,
    walsh_hadamard,
)
from .decode import (
    BDDInstance,
    OverlapProfile,
    ball_overlap,
    brute_force_runtime,
    dequantized_overlap,
    descent_decode,
    gf2_invertible_fraction,
    hadamard_test_shots,
    isd_decode,
    isd_success_prob,
    sampled_overlap,
)

__version__ = "0.1.0"
