"""Volume-hologram quantum memory: eigenmodes, field dynamics, memory cycle and capacity."""
from .capacity import (
    HologramGeometry,
    VolumeCapacity,
    capacity_report,
    capacity_thin,
    capacity_volume,
    diffraction_phase,
    fresnel_number,
)
from .cycle import (
    CycleConfig,
    Efficiency,
    ModeCoefficients,
    NoiseBudget,
    compose_cycle,
    cycle_report,
    full_cycle_map,
    full_cycle_matrix,
    mode_efficiency,
    noise_budget,
    one_pass_map,
)
from .dynamics import BoundaryData, FieldState, excitation_balance, greens_solution, integrate_characteristics
from .eigenmodes import ConsistencyError, ModeSet, compute_modes, cross_overlap, mu_from_g1, overlap_matrix
from .kernels import Coupling, PhysicalCoupling, coupling_from_physical, g0, g1_regular, greens_j1_kernel
from .quadrature import Scheme, UnitGrid, inner_product, make_gauss_legendre, make_trapezoid
from .specfun import bessel_j0, bessel_j1

__version__ = "0.1.0"
