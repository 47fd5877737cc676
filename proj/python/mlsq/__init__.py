"""Squeezing analysis of multi-layer 1-D structures.

Transfer matrices of piecewise-constant potentials, their exact dyad-chain
expansion, strength/path classification for the zero-width limit, and the
resonance equations whose roots mark non-zero tunneling through the squeezed
structure.
"""

from ._core import (
    InadmissibleConfigurationError,
    MlsqError,
    TransferMatrix,
    bound_states,
    check_admissibility,
    classify_region,
    classify_strength,
    element_via_series,
    full_matrix,
    layer_matrix,
    point_bound_states,
    realize,
    resonance_roots,
    scattering,
    squeeze_limit,
    term_count,
    transmission,
    wavenumber,
    __version__,
)

__all__ = [
    "InadmissibleConfigurationError",
    "MlsqError",
    "TransferMatrix",
    "bound_states",
    "check_admissibility",
    "classify_region",
    "classify_strength",
    "element_via_series",
    "full_matrix",
    "layer_matrix",
    "point_bound_states",
    "realize",
    "resonance_roots",
    "scattering",
    "squeeze_limit",
    "term_count",
    "transmission",
    "wavenumber",
    "__version__",
]
