"""Sequential community-structure testing for temporal networks.

Per-snapshot p-values from static tests (a corrected Tracy-Widom spectral
statistic, or a bootstrap test on the normalized within-minus-between
density gap) are calibrated into e-values and averaged; the average stays
small under the no-community null at every horizon, so crossing a fixed
threshold is a valid sequential rejection rule even when snapshots are
dependent.
"""

from .community import (
    Partition,
    default_k_max,
    e2d2,
    fast_greedy_k,
    greedy_e2d2_max,
    modularity,
)
from .e2d2_test import E2d2TestResult, ase_rank1, e2d2_pvalue_bootstrap
from .evalue import (
    DEFAULT_CALIBRATORS,
    Calibrator,
    SnapshotTestError,
    TestReport,
    calibrate,
    combine_mean,
    combine_product,
    evalue_to_pvalue,
    run_temporal_test,
    snapshot_pvalues,
)
from .generators import (
    MarkovLabelChain,
    chung_lu_scale_for_density,
    planted_block_matrix,
    sample_chung_lu,
    sample_correlated_sbm,
    sample_degree_weights,
    sample_dynamic_dcbm,
    sample_dynamic_sbm,
    sample_er,
    sample_label_chain,
    sample_sbm,
    split_labels,
)
from .graph_core import (
    EdgeEvent,
    Snapshot,
    TemporalNetwork,
    bin_events,
    edge_density,
    is_connected,
    largest_connected_component,
    read_event_file,
    snapshots_to_events,
    window_bounds,
    write_snapshots,
)
from .harness import (
    ExperimentConfig,
    SweepResult,
    emit_csv,
    list_presets,
    load_preset,
    read_config_file,
    run_experiment,
    run_real,
    run_sweep,
)
from .seeding import make_rng, seed_sequence
from .spectral import (
    DegenerateGraphError,
    TW1Reference,
    TwTestResult,
    load_tw1_reference,
    standardized_top_eigenvalue,
    tw1_survival,
    tw_pvalue_bootstrap,
)

__version__ = "0.1.0"

__all__ = [
    "Calibrator",
    "DEFAULT_CALIBRATORS",
    "DegenerateGraphError",
    "E2d2TestResult",
    "EdgeEvent",
    "ExperimentConfig",
    "MarkovLabelChain",
    "Partition",
    "Snapshot",
    "SnapshotTestError",
    "SweepResult",
    "TW1Reference",
    "TemporalNetwork",
    "TestReport",
    "TwTestResult",
    "ase_rank1",
    "bin_events",
    "calibrate",
    "chung_lu_scale_for_density",
    "combine_mean",
    "combine_product",
    "default_k_max",
    "e2d2",
    "e2d2_pvalue_bootstrap",
    "edge_density",
    "emit_csv",
    "evalue_to_pvalue",
    "fast_greedy_k",
    "greedy_e2d2_max",
    "is_connected",
    "largest_connected_component",
    "list_presets",
    "load_preset",
    "load_tw1_reference",
    "make_rng",
    "modularity",
    "planted_block_matrix",
    "read_config_file",
    "read_event_file",
    "run_experiment",
    "run_real",
    "run_sweep",
    "run_temporal_test",
    "sample_chung_lu",
    "sample_correlated_sbm",
    "sample_degree_weights",
    "sample_dynamic_dcbm",
    "sample_dynamic_sbm",
    "sample_er",
    "sample_label_chain",
    "sample_sbm",
    "seed_sequence",
    "snapshot_pvalues",
    "snapshots_to_events",
    "split_labels",
    "standardized_top_eigenvalue",
    "tw1_survival",
    "tw_pvalue_bootstrap",
    "window_bounds",
    "write_snapshots",
]
