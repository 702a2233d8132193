"""Exact construction, verification and classification of
distance-regular Cayley graphs over finite abelian groups."""

__version__ = "0.1.0"

from .errors import InvariantViolation, NotConnectedError, PrecisionError, SpecError
from .groups import (
    AbelianGroup,
    GroupElement,
    Subgroup,
    generated_subgroup,
    make_group,
    parse_element,
    parse_element_set,
    parse_group,
)
from .graphs import (
    CayleyGraph,
    DRGCheck,
    IntersectionArray,
    check_distance_regular,
    check_distance_regular_bruteforce,
    clique_number,
    delsarte_bound,
    detect_family,
    distance_partition,
    export_graph6,
    imprimitivity,
    spectrum,
)
from .schur import (
    SchurRing,
    distance_module,
    dual_graph,
    dual_schur_ring,
    krein_parameters,
    p_polynomial_orderings,
    q_polynomial_orderings,
    verify_schur_ring,
)
from .constructions import (
    crown,
    expected_catalog,
    expected_circulant_catalog,
    hamming2,
    order_p_subgroups,
    paley,
    td_line_graph,
)
from .designs import (
    direction_bound_check,
    directions,
    is_polynomial_addition_set,
    is_relative_difference_set,
    level_set_certificate,
    monomial_pas_search,
)
from .classify import (
    ClassificationReport,
    SearchSpec,
    classify_group,
    enumerate_connection_sets,
    nonexistence_report,
    verify_circulant_theorem,
    verify_main_theorem,
)

__all__ = [
    "AbelianGroup",
    "CayleyGraph",
    "ClassificationReport",
    "DRGCheck",
    "GroupElement",
    "IntersectionArray",
    "InvariantViolation",
    "NotConnectedError",
    "PrecisionError",
    "SchurRing",
    "SearchSpec",
    "SpecError",
    "Subgroup",
    "__version__",
    "check_distance_regular",
    "check_distance_regular_bruteforce",
    "classify_group",
    "clique_number",
    "crown",
    "delsarte_bound",
    "detect_family",
    "direction_bound_check",
    "directions",
    "distance_module",
    "distance_partition",
    "dual_graph",
    "dual_schur_ring",
    "enumerate_connection_sets",
    "expected_catalog",
    "expected_circulant_catalog",
    "export_graph6",
    "generated_subgroup",
    "hamming2",
    "imprimitivity",
    "is_polynomial_addition_set",
    "is_relative_difference_set",
    "krein_parameters",
    "level_set_certificate",
    "make_group",
    "monomial_pas_search",
    "nonexistence_report",
    "order_p_subgroups",
    "p_polynomial_orderings",
    "paley",
    "parse_element",
    "parse_element_set",
    "parse_group",
    "q_polynomial_orderings",
    "spectrum",
    "td_line_graph",
    "verify_circulant_theorem",
    "verify_main_theorem",
    "verify_schur_ring",
]
