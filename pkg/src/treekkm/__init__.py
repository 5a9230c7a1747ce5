"""Constructive Sperner, KKM and fixed-point algorithms on metric trees and cycles."""

from .closed_set import ClosedSet
from .cycle import (
    CircularSociety,
    CycleKKMCover,
    MetricCycle,
    NotSuperAgreeableError,
    ReductionNotApplicable,
    majority_point,
    super_agreeable_majority,
    tree_reduction_majority,
    validate_cycle_cover,
)
from .fixedpoint import (
    BadModulusError,
    BlackBoxMap,
    PLMap,
    epsilon_fixed_point,
    eval_pl,
    fixed_point_pl,
    fixed_point_set,
    lemma_intersect_check,
    move_away_cover,
)
from .kkm import (
    InvalidCoverError,
    KKMCover,
    cover_from_connected_sets,
    intersect_all,
    kkm_point_via_sperner,
    membership_labelling,
    validate_kkm_cover,
)
from .metric_tree import (
    MetricTree,
    Segmentation,
    TreeError,
    TreePath,
    TreePoint,
    build_tree,
    component_side,
    distance,
    path,
    segment,
    subtree_spanned,
)
from .sperner import (
    FixedVertex,
    FullyLabelledWitness,
    ImproperLabellingError,
    Labelling,
    SpanningEdge,
    discrete_fixed_point,
    find_fully_labelled_edge,
    is_proper,
    labelling_from_vertex_map,
    successor,
    vertex_map_from_labelling,
)

__version__ = "0.1.0"
