"""Unitary 1-cocycles on finite posets: homotopy, splitting into charge and topological parts, holonomy."""

from .algebra import HolonomyAlgebra, NotAFactorError, NotInAlgebraError, generated_algebra, trace_state
from .cocycle import (
    Cocycle,
    CocycleError,
    IntertwinerSpace,
    ValidationReport,
    direct_sum,
    equivalent,
    evaluate,
    frame_transport,
    gauge_transform,
    intertwiner_space,
    is_coboundary,
    trivial_cocycle,
    validate,
)
from .holonomy import (
    RelationError,
    character,
    character_table,
    conjugate_cocycle,
    connect_charge,
    from_rep,
    holonomy_algebra,
    holonomy_matrices,
    holonomy_report,
    topological_dimension,
)
from .homotopy import (
    GroupPresentation,
    PathFrame,
    build_path_frame,
    deform_into_complement,
    h1_invariants,
    homotopic_bfs,
    loop_class,
    loop_generator,
    presentation,
)
from .net_bundle import NetConnection, NetConnectionError, chi_twist, induced_cocycle, transform_connection, trivialize
from .poset import (
    Poset,
    PosetError,
    build_circle_poset,
    build_directed_interval_poset,
    build_graph_interval_poset,
    figure_eight_graph,
    is_pathwise_connected,
)
from .simplicial import (
    Path,
    Simplex1,
    Simplex2,
    SimplexError,
    compose_paths,
    enumerate_two_simplices,
    inclusion_simplex,
    reverse_path,
    reverse_simplex,
)
from .splitting import (
    JoinError,
    TopologicalComponent,
    charge_component,
    embed_rho,
    join,
    split_join_roundtrip,
    topological_component,
)

__version__ = "0.1.0"
