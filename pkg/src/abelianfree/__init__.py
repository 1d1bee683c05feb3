"""Detection of fractional Abelian repetitions and search in the prefix
trees of Abelian-power-free languages."""

from .core import (
    ConfigError,
    ContractError,
    ExtendedExponent,
    IncrementalIndex,
    exponent_at_least,
    index_from_word,
    letters_from_text,
    reverse,
    text_from_letters,
)
from .detect import (
    DetectorKind,
    Patch,
    SuffixFactorization,
    alphafree_big,
    alphafree_dict,
    alphafree_small,
    dual_alphafree,
    extend_check,
    oracle_freeness,
    select_detector,
    validate_detector,
)
from .search import (
    BacktrackPolicy,
    DfsEngine,
    LemmaPart,
    SearchReport,
    WalkEngine,
    exhaustive_search,
    forced_backtrack,
    lemma_alpha,
    lemma_search,
    lexmin_children,
    load_checkpoint,
    random_walk,
    save_checkpoint,
)
from .experiments import (
    BatchSummary,
    classify_behaviour,
    dual_scaling_benchmark,
    gap_estimate,
    gap_expectation_small,
    length_histogram,
    run_batch,
    summary_json,
)

__version__ = "1.0.0"
