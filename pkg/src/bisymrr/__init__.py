"""Bitwise randomized response: randomize binary records with per-bit flips,
recover unbiased marginal estimates, and price the privacy/accuracy trade.

The flip channel factorizes over bits, so every matrix this package touches
is an iterated Kronecker power of one 2x2 kernel; entries, inverses, traces,
and privacy budgets all have closed forms, and the dense matrices exist only
for cross-checking and small widths.
"""

from .channel import (
    DEFAULT_DENSE_CAP,
    DENSE_CAP_ENV,
    BisymmetricChannel,
    dense_cap,
    distinct_entries,
    entry_at,
    inverse_entry_at,
    inverse_parameter,
    materialize,
)
from .corpus_io import (
    format_float,
    read_corpus,
    read_matrix,
    read_vector,
    write_corpus,
    write_matrix,
)
from .errors import (
    BisymrrError,
    CorpusFormatError,
    DegenerateDistributionError,
    InfiniteDisclosureError,
    SingularChannelError,
    WidthCapError,
)
from .estimator import (
    COVARIANCE_CAP,
    Histogram,
    LossReport,
    cov_trace_closed_form,
    covariance,
    direct_covariance,
    efficiency_loss,
    estimate,
    greenwood_moments,
    loss,
    loss_approx_quality,
    loss_ratio_empirical,
    marginal_histogram,
    project_to_simplex,
    trace_constant,
)
from .figures import (
    FIGURE_DEFAULTS,
    FIGURES,
    ExperimentConfig,
    build_figure,
    sample_flat_dirichlet,
)
from .privacy import (
    PrivacyBudget,
    PrivacyReport,
    a_for_epsilon,
    c_at_alpha,
    epsilon_of,
    likelihood_ratio,
    loss_at_alpha,
    report_for_a,
    report_for_epsilon,
)
from .randomizer import (
    Direct,
    RandomizerSpec,
    RandomSeed,
    RapporFull,
    RapporOneTime,
    ResponseCorpus,
    UnrelatedUniform,
    Warner,
    effective_a,
    parse_mechanism,
    randomize,
    randomize_corpus,
    unrelated_channel_entry,
)
from .surveys import MechanismComparison, compare, unrelated_c, warner_c

__version__ = "0.1.0"

__all__ = [
    "BisymmetricChannel",
    "BisymrrError",
    "COVARIANCE_CAP",
    "CorpusFormatError",
    "DEFAULT_DENSE_CAP",
    "DENSE_CAP_ENV",
    "DegenerateDistributionError",
    "Direct",
    "ExperimentConfig",
    "FIGURES",
    "FIGURE_DEFAULTS",
    "Histogram",
    "InfiniteDisclosureError",
    "LossReport",
    "MechanismComparison",
    "PrivacyBudget",
    "PrivacyReport",
    "RandomSeed",
    "RandomizerSpec",
    "RapporFull",
    "RapporOneTime",
    "ResponseCorpus",
    "SingularChannelError",
    "UnrelatedUniform",
    "Warner",
    "WidthCapError",
    "a_for_epsilon",
    "build_figure",
    "c_at_alpha",
    "compare",
    "cov_trace_closed_form",
    "covariance",
    "dense_cap",
    "direct_covariance",
    "distinct_entries",
    "effective_a",
    "efficiency_loss",
    "entry_at",
    "epsilon_of",
    "estimate",
    "format_float",
    "greenwood_moments",
    "inverse_entry_at",
    "inverse_parameter",
    "likelihood_ratio",
    "loss",
    "loss_approx_quality",
    "loss_at_alpha",
    "loss_ratio_empirical",
    "marginal_histogram",
    "materialize",
    "parse_mechanism",
    "project_to_simplex",
    "randomize",
    "randomize_corpus",
    "read_corpus",
    "read_matrix",
    "read_vector",
    "report_for_a",
    "report_for_epsilon",
    "sample_flat_dirichlet",
    "trace_constant",
    "unrelated_c",
    "unrelated_channel_entry",
    "warner_c",
    "write_corpus",
    "write_matrix",
]
