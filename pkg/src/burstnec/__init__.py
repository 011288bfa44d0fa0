"""Capacity, feedback capacity and capacity-cost bounds for burst noise-erasure channels."""
from .blahut import BAResult, blahut_cost, channel_capacity, mutual_information
from .bounds import (
    BoundCurve,
    CostSpec,
    beta_lb,
    beta_lb_n,
    capacity_cost_curve,
    curve_lower,
    curve_nonfeedback,
    curve_upper,
    effective_cost_vector,
    induced_feedback_channel,
    linear_cost,
    max_output_entropy,
    theorem6_verdict,
    zs_gap,
)
from .capacity import CapacityReport, nec_capacity
from .channel import ChannelFunction, make_mod_add_channel, validate_and_derive
from .config import PI1, PI2, PI3, load_model, reference_model
from .entropy import (
    Hn_sequence,
    block_entropy_Z,
    block_entropy_Ztilde,
    entropy,
    entropy_rate_Z,
    entropy_report,
    memory_gain,
    ztilde_rate_bounds,
)
from .nfold import (
    NFoldMatrix,
    build_nfold,
    capacity_oracle_uniformity,
    capacity_quasi_symmetric,
    check_quasi_symmetry,
    cn_closed_form,
    export_csv,
    single_letter_dmc_capacity,
)
from .processes import (
    NoiseModel,
    block_prob,
    block_probs,
    check_theorem6_conditions,
    erasure_prob,
    markov_model,
    memoryless_counterpart,
    memoryless_model,
    sample_path,
    stationary_distribution,
)

__version__ = "0.1.0"
