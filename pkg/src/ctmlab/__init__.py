"""ctmlab: a laboratory for estimating algorithmic complexity of short
strings by the coding theorem method.

Enumerate or sample spaces of small Turing machines, turn their halting
outputs into frequency datasets, and query the derived complexity estimates
(K and D), together with Bayesian evidence tooling, classical complexity
measures, and the statistical analyses exposed by the ``ctm`` command line.
"""

from .distribution import (
    CompletedCounts,
    DataError,
    FrequencyDataset,
    KTable,
    build_dataset,
    canonicalize,
    complete,
    d_of,
    import_published,
    k_of,
    load_dataset,
    save_dataset,
)
from .enumeration import (
    CalibrationError,
    CampaignConfig,
    Full,
    RawCounts,
    RuntimeHistogram,
    Sample,
    calibrate_cutoff,
    reduced_count,
    run_campaign,
)
from .machines import (
    Halt,
    Halted,
    SpaceSpec,
    Step,
    TimedOut,
    TransitionTable,
    decode,
    encode,
    full_count,
    mirror,
    run,
)
from .measures import change_complexity, entropy, entropy2
from .queries import (
    BayesResult,
    ComplexityResult,
    CoverageWarning,
    TableView,
    acss,
    bayes,
    likelihood_d,
    likelihood_ratio,
    local_complexity,
    prob_random,
)
from .stats import (
    PerfectSeparationError,
    RegressionFit,
    ResponseRecord,
    TTestResult,
    correlation_matrix,
    logistic_fit,
    one_sample_t,
    pearson_r,
    read_response_csv,
    span_scan,
)

__version__ = "0.1.0"

__all__ = [
    "BayesResult",
    "CalibrationError",
    "CampaignConfig",
    "CompletedCounts",
    "ComplexityResult",
    "CoverageWarning",
    "DataError",
    "FrequencyDataset",
    "Full",
    "Halt",
    "Halted",
    "KTable",
    "PerfectSeparationError",
    "RawCounts",
    "RegressionFit",
    "ResponseRecord",
    "RuntimeHistogram",
    "Sample",
    "SpaceSpec",
    "Step",
    "TTestResult",
    "TableView",
    "TimedOut",
    "TransitionTable",
    "acss",
    "bayes",
    "build_dataset",
    "calibrate_cutoff",
    "canonicalize",
    "change_complexity",
    "complete",
    "correlation_matrix",
    "d_of",
    "decode",
    "encode",
    "entropy",
    "entropy2",
    "full_count",
    "import_published",
    "k_of",
    "likelihood_d",
    "likelihood_ratio",
    "load_dataset",
    "local_complexity",
    "logistic_fit",
    "mirror",
    "one_sample_t",
    "pearson_r",
    "prob_random",
    "read_response_csv",
    "reduced_count",
    "run",
    "run_campaign",
    "save_dataset",
    "span_scan",
]
