"""Level-1 fault-tolerant gadget analysis for the [[7,1,3]] code.

Builds the standard gadget set, classifies every pair of fault
locations as benign or malignant by exhaustive Pauli-frame propagation,
and turns the counts into rigorous accuracy-threshold lower bounds.
"""

from .circuit import (
    ClassicalCheck,
    Gadget,
    Location,
    LocationType,
    build_a_state_exrec,
    build_cat_prep,
    build_cnot_exrec,
    build_encoder,
    build_steane_ec,
)
from .malignancy import (
    MalignancyReport,
    classify_pair,
    count_matrix,
    fraction_stats,
    monte_carlo_failure,
)
from .pauli import (
    BlockError,
    PauliOp,
    StabilizerCode,
    commutes,
    decode_syndrome,
    reduce_block_error,
    steane,
    syndrome,
    weight,
)
from .propagate import (
    FaultScenario,
    PauliFrame,
    RunResult,
    is_correct_cnot,
    is_success_a_state,
    run,
)
from .threshold import (
    ThresholdInputs,
    ThresholdResult,
    a_prime,
    accuracy_and_level,
    bayes_adjust,
    decoherence_interpolation,
    eps0_t,
    eps_level_k,
    fault_path_tail,
    local_noise_pair_level1,
    local_noise_threshold,
    overhead,
    threshold_pipeline,
    verify_inclusion_exclusion,
)

__version__ = "0.1.0"
