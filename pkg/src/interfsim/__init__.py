"""Receiver-centric interference of geometric graphs.

Point-set generators (uniform, halving chain, Zeno), Euclidean MST and
nearest-neighbour graphs, low-interference topology constructions, exact
interference measurement with a grid-accelerated fast path, and a
Monte-Carlo harness for the interference scaling laws.
"""

from ._kernels import HAVE_NUMBA
from .geometry import (
    GridIndex,
    PointSet,
    ZenoConfig,
    build_grid_index,
    gen_halving_chain,
    gen_uniform,
    gen_zeno,
    load_points,
    save_points,
    zeno_scale,
)
from .graphs import (
    EdgeLengthClass,
    GeometricGraph,
    build_mst,
    build_nn_graph,
    diameter_ball_property,
    distance_ratio,
    dyadic_length_classes,
    filter_edges_by_length,
    is_connected,
    load_graph,
    mst_total_length_prim,
    save_graph,
)
from .interference import (
    BallSet,
    InterferenceReport,
    ball_set,
    interference_at,
    interference_report,
    interference_report_accelerated,
    log_d_bound_check,
)
from .topologies import (
    CellPartition,
    TopologyConfig,
    build_bucketed_graph,
    build_cell_partition,
    build_hub_graph,
    greedy_net,
)
from .experiments import (
    ExperimentResult,
    ExperimentSpec,
    PRESETS,
    embed_zeno,
    fit_power_of_log,
    run_adversarial,
    run_scaling,
    summarize,
)

__version__ = "0.1.0"
