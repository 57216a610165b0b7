"""Uniform sampling, exact counting and structural analysis of
quadrangulations with a boundary."""

__version__ = "0.1.0"

from .planemap import (  # noqa: F401
    PlaneMap,
    PointedBoundaryQuad,
    boundary_walk,
    build_map,
    canonical_code,
    euler_characteristic,
    glue_boundary,
    graph_distances,
    one_edge_map,
)
from .encoder import (  # noqa: F401
    DiscreteBridge,
    LabeledTree,
    LabeledTreedBridge,
    count_plane_forests,
    parse_ltb,
    sample_bridge,
    sample_labels,
    sample_plane_forest,
    sample_treed_bridge,
    serialize_ltb,
    validate,
)
from .bijection import (  # noqa: F401
    build_quadrangulation,
    encode_quadrangulation,
    label_processes,
    time_change_tables,
    verify_label_distance,
)
from .coredec import CEMETERY, core, core_statistics, decompose  # noqa: F401
from .restriction import (  # noqa: F401
    ball,
    certificate_sets,
    check_bounds,
    complement_reglue,
    correspondence_distortion,
    is_good,
    restrict,
    restrict_reversed,
)
from .counting import (  # noqa: F401
    count_simple,
    gw_first_passage_simulation,
    gw_generating_function,
    log_count_asymptotic,
    pointed_count_simple,
    ratio_bound_check,
    restriction_probability,
)
from .oracle import (  # noqa: F401
    UniverseTable,
    chi_square_uniformity,
    empirical_tv,
    enumerate_boundary_quads,
)
from .scales import perimeter_sequence  # noqa: F401
