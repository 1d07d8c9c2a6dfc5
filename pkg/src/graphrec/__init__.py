"""Row-wise graphic matrix recognition with SPQR forests."""

__version__ = "0.1.0"

from .binmatrix import (
    Block,
    ParseError,
    RowVector,
    SparseBinaryMatrix,
    connected_blocks,
    parse_matrix,
    partition_row,
    zero_cols,
    zero_rows,
)
from .spqr import (
    EdgeRecord,
    GraphTreePair,
    Skeleton,
    SpqrForest,
    StructureError,
    check_minimal,
    merge_adjacent,
    realize,
    representation_matrix,
    validate,
)
from .splittable import (
    AuxiliaryGraph,
    auxiliary_graph,
    bipartite_split,
    extend_series,
    find_splittable_vertices,
    find_tree_splittable_vertices,
    path_intersection,
)
from .reduce import (
    KindChange,
    LeafDrop,
    ParallelLocal,
    ReducedTree,
    SeriesLocal,
    full_propagation_test,
    reduce_parallel,
    reduce_series,
    reduce_tree,
    undo_journal,
)
from .augment import (
    CheckResult,
    MaximalResult,
    ProcessOutcome,
    add_row,
    assemble_certificate,
    is_graphic,
    maximal_graphic_rows,
    merge_tree,
    process_tree,
    split_skeleton,
)
from .oracle import (
    OracleScaleError,
    OracleVerdict,
    derive_k33_dual,
    derive_k5_dual,
    oracle_is_graphic,
    random_graphic_instance,
    verify_realization,
)
