"""Hard-decision decoders and trapping-set analysis for column-weight-3 LDPC codes."""

from .bounds import (
    GuaranteedFailureReport,
    ThresholdReport,
    check_corollary1,
    find_guaranteed_failure,
    girth_upper_bound,
    theorem2_threshold,
)
from .decoders import (
    BSCStats,
    DecodeOutcome,
    DecoderConfig,
    StateCycle,
    decode,
    decode_batch,
    decode_bit_flip,
    decode_gallager_a,
    detect_state_cycle,
    fixed_point_mask,
    is_fixed_point,
    simulate_bsc,
    trace_jsonl,
)
from .gadgets import CompletionSpec, Gadget, build_gadget, complete_to_regular, fixture_names, load_fixture
from .tanner import (
    AlistError,
    GirthConstructionError,
    TannerGraph,
    construct_girth_constrained,
    enumerate_codewords,
    enumerate_short_cycles,
    girth,
    parse_alist,
    read_alist,
    sample_regular_graph,
    save_alist,
    syndrome,
    word_from_support,
    write_alist,
)
from .trapping import (
    TrappingVerdict,
    check_trapping_conditions,
    critical_number,
    fails_under_both,
    is_failure_set,
    search_failure_sets,
)

__all__ = [name for name in dir() if not name.startswith("_")]
