"""
Exact counting of pseudoline reroutings inside polygonal patches, and
lower bounds on the number of simple pseudoline arrangements built from
those counts.

Modules
-------
geometry        patch files, exact segment/boundary incidences
bipermutation   the memoized cut-and-split counter
lgv             determinant counts for square three-slope patches
construction    per-region contributions and the final constant
oracle          reference families and a brute-force counter
cli             the ``pseudobound`` command
"""

from .bipermutation import (
    Bipermutation,
    CapacityExceeded,
    MemoTable,
    ReroutingCounter,
    canonical_form,
    count_reroutings,
    crossing_pairs,
    crossing_poset,
    linear_extensions,
    log2_floor,
    split,
)
from .construction import (
    BoundReport,
    ConfigError,
    amplify,
    assemble_bound,
    contribution,
    load_config,
    parse_config,
)
from .geometry import (
    LineEq,
    PatchError,
    PatchSpec,
    PolygonBoundary,
    bipermutation_of_patch,
    load_patch,
    make_patch,
    multicrossing_census,
    parse_patch,
    segments_of_patch,
)
from .lgv import determinant, lgv_count, lgv_matrix

__version__ = "0.1.0"

__all__ = [
    "Bipermutation",
    "CapacityExceeded",
    "MemoTable",
    "ReroutingCounter",
    "canonical_form",
    "count_reroutings",
    "crossing_pairs",
    "crossing_poset",
    "linear_extensions",
    "log2_floor",
    "split",
    "BoundReport",
    "ConfigError",
    "amplify",
    "assemble_bound",
    "contribution",
    "load_config",
    "parse_config",
    "LineEq",
    "PatchError",
    "PatchSpec",
    "PolygonBoundary",
    "bipermutation_of_patch",
    "load_patch",
    "make_patch",
    "multicrossing_census",
    "parse_patch",
    "segments_of_patch",
    "determinant",
    "lgv_count",
    "lgv_matrix",
]
