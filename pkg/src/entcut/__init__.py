"""Bipartite entanglement entropy of binary-image classification targets.

The package treats a two-class labeling of binary images on a small
pixel lattice as a normalized state vector, computes the Schmidt
spectrum and von Neumann entropy across lattice cuts, classifies the
entropy scaling (area vs volume), and estimates the boundary-shell
width that bounds the entropy.
"""

from .analysis import (
    ChannelRequirement,
    RangeEstimate,
    ScanResult,
    check_assumption1,
    cnn_channel_requirement,
    coincidence_counts,
    estimate_range,
    scan_cuts,
)
from .entropy import (
    EntropyReport,
    SchmidtSpectrum,
    check_property1,
    entanglement_entropy,
    reduced_density_matrix,
    schmidt_spectrum_dense,
    schmidt_spectrum_sparse,
    schmidt_spectrum_statevector,
    von_neumann_entropy,
)
from .lattice import (
    Bipartition,
    LatticeGeometry,
    RegionR,
    make_bipartition,
    make_geometry,
    parse_cut,
    region_r,
    restrict,
)
from .states import TargetFunction, from_label1_set, inner_product, product_function
from .tasks import (
    TaskSpec,
    gen_closed_loops,
    gen_parity,
    gen_random_set,
    load_task,
    page_reference_entropy,
    save_task,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "ChannelRequirement",
    "EntropyReport",
    "LatticeGeometry",
    "RangeEstimate",
    "RegionR",
    "ScanResult",
    "SchmidtSpectrum",
    "TargetFunction",
    "TaskSpec",
    "check_assumption1",
    "check_property1",
    "cnn_channel_requirement",
    "coincidence_counts",
    "entanglement_entropy",
    "estimate_range",
    "from_label1_set",
    "gen_closed_loops",
    "gen_parity",
    "gen_random_set",
    "inner_product",
    "load_task",
    "make_bipartition",
    "make_geometry",
    "page_reference_entropy",
    "parse_cut",
    "product_function",
    "reduced_density_matrix",
    "region_r",
    "restrict",
    "save_task",
    "scan_cuts",
    "schmidt_spectrum_dense",
    "schmidt_spectrum_sparse",
    "schmidt_spectrum_statevector",
    "von_neumann_entropy",
]
