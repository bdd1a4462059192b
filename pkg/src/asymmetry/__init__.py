"""Asymmetry measures of quantum states relative to symmetry groups."""

__version__ = "0.1.0"

from .errors import AsymmetryError, NumericalInconsistency, ValidationError  # noqa: E402
from .groups import (  # noqa: E402
    FiniteGroup,
    GroupDensity,
    Representation,
    cyclic_group,
    left_regular_representation,
    right_regular_representation,
    spin_j_representation,
    subgroup_density_z_axis,
    tensor_representation,
    u1_number_representation,
    uniform_density,
)
from .measures import (  # noqa: E402
    characteristic_function,
    commutator_asymmetry,
    holevo_asymmetry,
    noether_moments,
    renyi_divergence,
    skew_information,
    trace_distance_asymmetry,
)
from .quantum import DensityOperator, KrausChannel, validate_state  # noqa: E402
