"""Rainbow colorings of the giant component of sparse random graphs."""

from .distributions import (
    DomainError,
    InvalidMu,
    MuSolution,
    PgwTree,
    RngStream,
    borel_pmf,
    borel_tail,
    borel_tail_bound,
    sample_borel,
    sample_geometric,
    sample_pgw_forest,
    sample_pgw_tree,
    sample_poisson,
    solve_mu,
)
from .generators import (
    DlpGraph,
    KernelEmpty,
    dlp_generate,
    gnm,
    gnm_supercritical,
    gnp,
    gnp_supercritical,
)
from .graph import (
    ComponentPartition,
    CoreMantle,
    EmptyCore,
    Graph,
    connected_components,
    core_mantle_decompose,
    giant_decomposition,
    read_edge_list,
    two_core,
    two_core_of_graph,
    write_edge_list,
)
from .harness import ExperimentConfig, ExperimentReport, TheorySummary, run_experiment, theory_summary
from .oracle import ColoredGraphSmall, TooLarge, max_rainbow_tree, process_vs_oracle
from .process import (
    EdgeColoring,
    EdgeOrdering,
    NotConnected,
    ProcessTrace,
    leaf_loss_experiment,
    measure_desc_bound,
    measure_dj,
    order_edges,
    rainbow_giant,
    rainbow_spanning_tree,
    run_process,
)

__version__ = "0.1.0"
