"""Marginal-likelihood scoring for discrete Bayesian networks.

Three metrics on complete discrete data: K2, BDeu(alpha0), and the
global-uniform (GU) prior, plus noise-free benchmark generation, forward
sampling, and arc-detection ROC studies against a known network.
"""

from .model import (
    BayesNet,
    CliqueDecomposition,
    CycleDetected,
    DagStructure,
    Dataset,
    DuplicateParent,
    IndexOutOfRange,
    ModelError,
    SchemaMismatch,
    SelfLoop,
    StateOutOfRange,
    SufficientStats,
    Variable,
    clique_decomposition,
    count_sufficient_stats,
    d_separated,
    joint_cell_counts,
    parent_config_index,
    validate_dag,
)
from .netio import (
    HeaderMismatch,
    MissingCptRow,
    MissingValue,
    NetworkDocument,
    NetworkSyntaxError,
    RowSumNotOne,
    UnknownStateLabel,
    UnknownVariable,
    alarm_path,
    load_alarm,
    parse_dataset,
    parse_network,
    parse_structure,
    serialize_network,
    write_dataset,
)
from .scoring import (
    DomainError,
    LengthMismatch,
    MetricSpec,
    NotCliqueDecomposable,
    RatioResult,
    arc_posterior,
    bdeu_log_score,
    bdeu_ratio_constant_pair,
    gu_log_score,
    gu_ratio_constant_pair,
    k2_log_score,
    log_dirichlet_multinomial,
    log_gamma,
    log_score,
    mc_marginal_saturated,
    pair_structures,
    structure_ratio,
)
from .genbench import (
    ALPHA0_GRID,
    EXAMPLES,
    ExampleSpec,
    JointTable,
    RatioRow,
    SweepResult,
    alpha0_sweep,
    forward_sample,
    independent_joint,
    noise_free_dataset,
    ratio_table_csv,
    run_example,
)
from .rocstats import (
    AucSummary,
    DegenerateInput,
    ExperimentResult,
    InsufficientNegatives,
    PairSets,
    RocCurve,
    ScoredPair,
    auc,
    auc_from_pairs,
    auc_summary_csv,
    enumerate_pair_sets,
    mann_whitney_auc,
    marginally_d_separated_pairs,
    mean_roc,
    mean_roc_csv,
    roc_points,
    run_alarm_experiment,
    student_t_quantile,
    t_confidence_interval,
)

__version__ = "0.1.0"
