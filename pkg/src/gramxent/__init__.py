"""Matrix-based Renyi cross-entropy estimators over kernel Gram matrices.

Build a Gram matrix from samples with a positive-definite kernel, normalize
it to unit trace, and compare two (or three) of them with the estimators in
``gramxent.estimators``. ``gramxent.verification`` contains the invariant
suite; ``gramxent.experiments`` and the ``gramxent`` CLI reproduce the
synthetic-data sweeps.
"""

from .errors import (
    ArgumentError,
    ContractError,
    DegenerateMatrixError,
    GramxentError,
    KernelOverflowError,
    NumericalDegeneracyError,
    ParseError,
)
from .estimators import (
    Alpha,
    CrossEntropyResult,
    conditional_entropy,
    joint_entropy,
    matrix_renyi_entropy,
    mirrored_cross_entropy,
    mirrored_cross_entropy_two_param,
    mirrored_limit_umegaki,
    mutual_information,
    nonmirrored_cross_entropy,
    trace_distance_bounds,
    tripartite_cross_entropy,
)
from .experiments import (
    ExperimentConfig,
    ResultRow,
    default_config,
    emit_results,
    load_csv,
    parse_results_csv,
    run_convergence,
    run_mean_shift,
    run_tripartite,
    run_variance_scale,
    sample_gaussian,
)
from .kernels import (
    EXP_INNER_PRODUCT,
    GAUSSIAN,
    RAW,
    UNIT_TRACE,
    CrossGram,
    GramMatrix,
    KernelSpec,
    SampleSet,
    eval_kernel,
    gram_cross,
    gram_univariate,
    hadamard_joint,
    normalize_trace,
)
from .psd_linalg import (
    EigenDecomposition,
    SupportReport,
    matrix_log,
    matrix_power,
    support_included,
    sym_eig,
    trace_product,
)
from .verification import (
    Partition,
    PropertyReport,
    pinch,
    random_gram,
    random_orthogonal,
    run_property_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Alpha",
    "ArgumentError",
    "ContractError",
    "CrossEntropyResult",
    "CrossGram",
    "DegenerateMatrixError",
    "EigenDecomposition",
    "EXP_INNER_PRODUCT",
    "ExperimentConfig",
    "GAUSSIAN",
    "GramMatrix",
    "GramxentError",
    "KernelOverflowError",
    "KernelSpec",
    "NumericalDegeneracyError",
    "ParseError",
    "Partition",
    "PropertyReport",
    "RAW",
    "ResultRow",
    "SampleSet",
    "SupportReport",
    "UNIT_TRACE",
    "conditional_entropy",
    "default_config",
    "emit_results",
    "eval_kernel",
    "gram_cross",
    "gram_univariate",
    "hadamard_joint",
    "joint_entropy",
    "load_csv",
    "parse_results_csv",
    "matrix_log",
    "matrix_power",
    "matrix_renyi_entropy",
    "mirrored_cross_entropy",
    "mirrored_cross_entropy_two_param",
    "mirrored_limit_umegaki",
    "mutual_information",
    "nonmirrored_cross_entropy",
    "normalize_trace",
    "pinch",
    "random_gram",
    "random_orthogonal",
    "run_convergence",
    "run_mean_shift",
    "run_property_suite",
    "run_tripartite",
    "run_variance_scale",
    "sample_gaussian",
    "support_included",
    "sym_eig",
    "trace_distance_bounds",
    "trace_product",
    "tripartite_cross_entropy",
]
