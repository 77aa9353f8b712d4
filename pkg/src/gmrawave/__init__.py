"""Generalized scaling vectors and Parseval frame wavelets from matrix filters."""

__version__ = "0.1.0"

from .cascade import ScalingVector, partial_product, scaling_vector  # noqa: E402
from .catalog import BUILTIN_SYSTEMS, ex35, journe_canonical, journe_smooth  # noqa: E402
from .config import build_loop, build_system  # noqa: E402
from .errors import ConfigError, GmraError  # noqa: E402
from .exact import ExactValue  # noqa: E402
from .filters import FilterSystem, complete_highpass, make_filter_system, validate_system  # noqa: E402
from .intervals import IntervalSet  # noqa: E402
from .lattice import make_scheme  # noqa: E402
from .msystems import journe_loop_element, loop_act, loop_quotient, msystem_from_filters  # noqa: E402
from .multiplicity import MultiplicityFn, conjugate_multiplicity, make_pair  # noqa: E402
from .wavelet import frame_sum_direct, frame_sum_FJ, synthesize_wavelets  # noqa: E402

__all__ = [
    "BUILTIN_SYSTEMS", "ConfigError", "ExactValue", "FilterSystem", "GmraError", "IntervalSet",
    "MultiplicityFn", "ScalingVector", "build_loop", "build_system", "complete_highpass",
    "conjugate_multiplicity", "ex35", "frame_sum_FJ", "frame_sum_direct", "journe_canonical",
    "journe_loop_element", "journe_smooth", "loop_act", "loop_quotient", "make_filter_system",
    "make_pair", "make_scheme", "msystem_from_filters", "partial_product", "scaling_vector",
    "synthesize_wavelets", "validate_system",
]
