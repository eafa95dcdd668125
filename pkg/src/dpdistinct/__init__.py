"""Sublinear-space differentially private distinct counting on turnstile streams."""

from .countdistinct import CountDistinct, EstimateRecord, OccurrencyError, RunResult, run, select_output
from .counting import CountingDict, CountingKset, coupling_run
from .harness import (
    ApproxVerdict,
    BlocklistScore,
    GroundTruth,
    check_approx,
    gen_hard_instance,
    gen_random_stream,
    ground_truth,
    neighbor_stream,
    score_blocklist,
    sensitivity_G,
)
from .hashing import MERSENNE_P, GeometricLevelHash, PolyHash
from .kset import KSet
from .mechanism import BinaryMechanism, MechanismExhausted
from .params import (
    ConfigError,
    DerivedParams,
    RunConfig,
    approx_zcdp_to_dp,
    derive_params,
    kset_failure_budget,
    threshold_base,
    zcdp_to_dp,
)
from .singleton import COLLISION, EMPTY, SINGLETON, TestSingleton, Verdict
from .stream import BLANK, StreamValidityError, dele, element_of, ins, is_blank, sign_of

__version__ = "0.1.0"

__all__ = [
    "BLANK",
    "ApproxVerdict",
    "BinaryMechanism",
    "BlocklistScore",
    "COLLISION",
    "ConfigError",
    "CountDistinct",
    "CountingDict",
    "CountingKset",
    "DerivedParams",
    "EMPTY",
    "EstimateRecord",
    "GeometricLevelHash",
    "GroundTruth",
    "KSet",
    "MERSENNE_P",
    "MechanismExhausted",
    "OccurrencyError",
    "PolyHash",
    "RunConfig",
    "RunResult",
    "SINGLETON",
    "StreamValidityError",
    "TestSingleton",
    "Verdict",
    "approx_zcdp_to_dp",
    "check_approx",
    "coupling_run",
    "dele",
    "derive_params",
    "element_of",
    "gen_hard_instance",
    "gen_random_stream",
    "ground_truth",
    "ins",
    "is_blank",
    "kset_failure_budget",
    "neighbor_stream",
    "run",
    "score_blocklist",
    "select_output",
    "sensitivity_G",
    "sign_of",
    "threshold_base",
    "zcdp_to_dp",
]
