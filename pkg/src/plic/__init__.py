"""Pliable index coding with absent receivers.

Lower bounds from decoding chains and nested-family structure, an
exact-rate classification of instance families, matching verified code
constructions, and brute-force oracles for small instances.
"""

__version__ = "0.1.0"

from .instance import (  # noqa: E402
    PicInstance,
    Partition,
    partition,
    from_absent,
    from_absent_masks,
    from_present,
    generate_perfectly_nested,
    generate_slightly_imperfect,
    generate_truncated_nested,
    parse_instance,
    random_instance,
    serialize_instance,
)
from .chain import (
    ChainState,
    DecodingChoice,
    LStarResult,
    Mimic,
    Realisation,
    Skip,
    chain_lower_bound,
    decoding_choice,
    l_star,
    max_skips,
    mimic_witnesses,
    min_skips,
    optimal_policy,
    run_realisation,
    scripted_policy,
    skip_least_policy,
)
from .structure import (
    INAPPLICABLE,
    MINIMAL_COVER,
    NOT_COVER,
    BreakWitness,
    LookAheadVerdict,
    NestedChain,
    is_l_chain_breakable,
    longest_chain_above,
    longest_nested_chain,
    look_ahead_applicable,
    look_ahead_skip,
    smallest_breakable_bound,
    structural_lower_bound,
)
from .classify import (
    CriticalityReport,
    RateResult,
    classify,
    count_nested_pairs,
    criticality_probe,
    detect_perfectly_nested,
    detect_slightly_imperfect,
    detect_truncated_nested,
)
from .fields import PrimeField, prime_field
from .codes import (
    CodeMatrix,
    VerifyReport,
    construct_for,
    cyclic_code,
    parse_code,
    scheme_perfectly_nested,
    scheme_slightly_imperfect,
    scheme_truncated,
    scheme_uncoded_plus_cyclic,
    serialize_code,
    verify_code,
)
from .oracle import (
    CrosscheckReport,
    EncoderTable,
    OracleResult,
    crosscheck,
    exact_general_rate,
    exact_linear_rate,
    gaussian_binomial,
    subspace_count,
)
from . import errors

__all__ = [
    "__version__",
    "errors",
    # instances
    "PicInstance",
    "Partition",
    "partition",
    "from_absent",
    "from_absent_masks",
    "from_present",
    "generate_perfectly_nested",
    "generate_truncated_nested",
    "generate_slightly_imperfect",
    "random_instance",
    "parse_instance",
    "serialize_instance",
    # decoding chains
    "DecodingChoice",
    "decoding_choice",
    "ChainState",
    "Realisation",
    "Skip",
    "Mimic",
    "mimic_witnesses",
    "run_realisation",
    "scripted_policy",
    "skip_least_policy",
    "optimal_policy",
    "min_skips",
    "max_skips",
    "l_star",
    "LStarResult",
    "chain_lower_bound",
    # structural bounds
    "NestedChain",
    "BreakWitness",
    "longest_nested_chain",
    "longest_chain_above",
    "is_l_chain_breakable",
    "smallest_breakable_bound",
    "structural_lower_bound",
    "LookAheadVerdict",
    "look_ahead_applicable",
    "look_ahead_skip",
    "NOT_COVER",
    "MINIMAL_COVER",
    "INAPPLICABLE",
    # classification
    "RateResult",
    "classify",
    "detect_perfectly_nested",
    "detect_truncated_nested",
    "detect_slightly_imperfect",
    "count_nested_pairs",
    "criticality_probe",
    "CriticalityReport",
    # fields and codes
    "PrimeField",
    "prime_field",
    "CodeMatrix",
    "cyclic_code",
    "scheme_uncoded_plus_cyclic",
    "scheme_perfectly_nested",
    "scheme_slightly_imperfect",
    "scheme_truncated",
    "verify_code",
    "VerifyReport",
    "construct_for",
    "serialize_code",
    "parse_code",
    # oracles
    "gaussian_binomial",
    "subspace_count",
    "OracleResult",
    "EncoderTable",
    "exact_linear_rate",
    "exact_general_rate",
    "crosscheck",
    "CrosscheckReport",
]
