"""Colorings of simplicial complexes and splitting certificates in Stanley-Reisner rings."""

__version__ = "0.1.0"

from .coloring import (
    Coloring,
    brute_force_chromatic,
    chromatic_number,
    find_coloring,
    greedy_color,
    is_coloring,
    minimal_coloring,
    skeleton_proper,
)
from .complex_core import (
    SimplicialComplex,
    dual_of_simple_polytope,
    enumerate_faces,
    generate_family,
    minimal_non_faces,
    one_skeleton,
    parse_facets,
)
from .sr_algebra import (
    SRElement,
    elementary_symmetric_class,
    multiply,
    reduce,
    restrict_to_face,
    total_chern,
    total_pontrjagin,
)
from .splitting import (
    ExtractionError,
    SplittingCertificate,
    certificate_from_coloring,
    extract_coloring,
    equivalence_report,
    verify_chern_splitting,
    verify_pontrjagin_splitting,
)
