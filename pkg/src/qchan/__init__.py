"""Product-state classical capacities of single-qubit noisy channels."""

from .channels import (
    AffineMap,
    ChannelKind,
    QuantumChannel,
    affine_representation,
    apply,
    is_unital,
    load_channel_file,
    make_channel,
    validate_cptp,
)
from .holevo import (
    CapacityResult,
    Ensemble,
    Method,
    RestrictedSearchParams,
    ScanGrid,
    capacity_amplitude_scan,
    capacity_closed_form,
    capacity_splaying_scan,
    eigenvalue_formulas,
    holevo_chi,
)
from .optimizer import EnsembleParams, OptimizerConfig, audit_channel, optimize_ensemble
from .qlinalg import (
    DensityMatrix,
    ValidationError,
    binary_entropy,
    bloch_to_density,
    density_to_bloch,
    eigenvalues_hermitian,
    von_neumann_entropy,
)

__version__ = "0.1.0"
