"""Telegraph process and planar random flight: exact densities, simulation, comparison."""
from .densities import (
    DensitySplit,
    FlightParams,
    PlanarPoint,
    leading_term,
    marginal_density,
    planar_density,
    tail_Q,
    tail_R,
    telegraph_density,
    telegraph_density_derivative_form,
)
from .errors import DomainError

__version__ = "0.1.0"
