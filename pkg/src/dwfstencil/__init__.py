"""Discrete Wigner functions on d x d phase space generated by stencils on the doubled space."""

from .doubled_space import (
    cross_correlate,
    doubled_frame,
    doubled_ppo,
    doubled_weyl,
    doubled_wigner,
    project,
    sdft,
)
from .dwf_engine import (
    FrameReport,
    MUBReport,
    PPOFrame,
    check_marginalisation,
    m_ppo_frame,
    marginals,
    negativity,
    stencil_from_frame,
    validate_frame,
    weyl,
    wig,
)
from .qudit_algebra import (
    DomainError,
    PhasePoint,
    clock_power,
    hs_inner,
    parity,
    periodic_delta,
    root_of_unity,
    shift_power,
    whdo,
)
from .stencil_kit import (
    ConstructionError,
    Stencil,
    ValidityReport,
    boxcar,
    builtin_stencil,
    dirichlet_kernel,
    sample_valid_stencil,
    stencils_equivalent,
    validate_stencil,
    validate_stencil_fourier,
)
from .transport import FunctionMap, apply_function_map, apply_operator_map, build_function_map

__version__ = "0.1.0"
