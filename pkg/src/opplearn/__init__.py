"""Learning true (type-II) opposites from sampled data with evolving fuzzy rules.

The package mines opposite input/output pairs from observations, fits a
clustering-derived Takagi-Sugeno model of the input-to-opposite mapping,
updates that model incrementally as data streams in, and ships the benchmark
harness used to validate everything against functions with analytic inverses.
"""

__version__ = "0.1.0"

from .benchmarks import (
    OPT_FUNCTION_IDS,
    TEST_FUNCTION_IDS,
    OptFunction,
    TestFunction,
    TrueOpposite,
    eval_inverse,
    eval_opt_function,
    eval_test_function,
    get_opt_function,
    get_test_function,
    true_opposite,
)
from .errors import (
    ConfigError,
    DegenerateRangeError,
    DomainError,
    InsufficientDataError,
    InversionError,
    OppLearnError,
    SchemeMismatchError,
)
from .experiments import (
    ErrorStats,
    EvolutionPoint,
    ExperimentConfig,
    Series1Result,
    Series3Result,
    obl_select,
    run_series1,
    run_series2,
    run_series3,
    type1_vs_random_ks,
)
from .fuzzy import (
    FcmResult,
    FisModel,
    FuzzyRule,
    TrainConfig,
    TrainingHistory,
    build_fis,
    evolve_update,
    fcm_cluster,
    fis_predict,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_batch,
    save_model,
)
from .mining import MinedPair, SampleSet, mine_opposites, mining_dataset
from .opposition import (
    Bounds,
    OppositionScheme,
    RunningRange,
    scheme_opposite,
    type1_opposite,
    update_range,
)

__all__ = [
    "__version__",
    "Bounds",
    "OppositionScheme",
    "RunningRange",
    "type1_opposite",
    "scheme_opposite",
    "update_range",
    "SampleSet",
    "MinedPair",
    "mine_opposites",
    "mining_dataset",
    "TrainConfig",
    "FcmResult",
    "fcm_cluster",
    "FuzzyRule",
    "FisModel",
    "build_fis",
    "fis_predict",
    "predict_batch",
    "TrainingHistory",
    "evolve_update",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
    "TestFunction",
    "OptFunction",
    "TEST_FUNCTION_IDS",
    "OPT_FUNCTION_IDS",
    "get_test_function",
    "get_opt_function",
    "eval_test_function",
    "eval_inverse",
    "TrueOpposite",
    "true_opposite",
    "eval_opt_function",
    "ErrorStats",
    "ExperimentConfig",
    "Series1Result",
    "Series3Result",
    "EvolutionPoint",
    "run_series1",
    "run_series2",
    "run_series3",
    "obl_select",
    "type1_vs_random_ks",
    "OppLearnError",
    "DomainError",
    "DegenerateRangeError",
    "InsufficientDataError",
    "ConfigError",
    "InversionError",
    "SchemeMismatchError",
]
