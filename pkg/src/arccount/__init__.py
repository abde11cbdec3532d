"""Exact verification toolkit for arcs in the affine plane AG(2, q).

Finite-field and plane arithmetic, collinear-triple supersaturation, the
arc-induced collinearity graph, Kleitman-Winston containers, exhaustive
arc census, and the bound-chain calculator, all in exact arithmetic with
deterministic seeded sampling.
"""

from .arc_tools import (
    PointSet,
    SupersatDecomposition,
    count_collinear_triples,
    is_arc,
    parabola_arc,
    supersat_bound,
    supersat_check,
    triples_through_point,
)
from .census import (
    BoundReport,
    CensusRecord,
    choose_f,
    enumerate_arcs,
    naive_census_counts,
    sample_arc_fraction,
    theorem_bound_chain,
    trivial_lower_bound,
    verify_theorem_instance,
)
from .collinearity_graph import (
    DensityWitness,
    Graph,
    build_collinearity_graph,
    density_check,
    density_required,
    density_sweep,
    edge_multiplicity_histogram,
)
from .container_engine import (
    Container,
    ContainerParams,
    Fingerprint,
    check_local_density,
    count_independent_sets_bruteforce,
    kw_container,
    kw_fingerprint,
    kw_verify_batch,
    max_degree_vertex,
    verify_container_bound,
)
from .finite_field import FieldElement, FieldSpec, field_for_order, make_field
from .plane_geometry import (
    Line,
    PlaneIndex,
    Point,
    build_plane_index,
    collinear,
    incidence_report,
    line_through,
    plane_for_order,
)
from .rng import CounterRng

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CensusRecord",
    "Container",
    "ContainerParams",
    "CounterRng",
    "DensityWitness",
    "FieldElement",
    "FieldSpec",
    "Fingerprint",
    "Graph",
    "Line",
    "PlaneIndex",
    "Point",
    "PointSet",
    "SupersatDecomposition",
    "build_collinearity_graph",
    "build_plane_index",
    "check_local_density",
    "choose_f",
    "collinear",
    "count_collinear_triples",
    "count_independent_sets_bruteforce",
    "density_check",
    "density_required",
    "density_sweep",
    "edge_multiplicity_histogram",
    "enumerate_arcs",
    "field_for_order",
    "incidence_report",
    "is_arc",
    "kw_container",
    "kw_fingerprint",
    "kw_verify_batch",
    "line_through",
    "make_field",
    "max_degree_vertex",
    "naive_census_counts",
    "parabola_arc",
    "plane_for_order",
    "sample_arc_fraction",
    "supersat_bound",
    "supersat_check",
    "theorem_bound_chain",
    "triples_through_point",
    "trivial_lower_bound",
    "verify_container_bound",
    "verify_theorem_instance",
]
