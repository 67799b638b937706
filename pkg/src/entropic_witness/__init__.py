"""Entropic uncertainty with quantum memory for two qubits in structured reservoirs."""

__version__ = "0.1.0"

from ._validation import ConvergenceError, DomainError
from .estimators import (
    AmplitudeDampingChannel,
    CorrelationRegionClassifier,
    UncertaintyWitness,
    VolumeFractionEstimator,
)
from .geometry import FractionReport, RegionLabel, classify, in_octahedron, in_tetrahedron, region_mesh, sample_fractions
from .reservoir import (
    CriticalPoint,
    Lorentzian,
    OhmicClass,
    PTrajectory,
    WitnessInterval,
    WitnessTrajectory,
    apply_channel,
    critical_p,
    critical_time,
    evolve,
    lorentzian_p,
    lorentzian_trajectory,
    ohmic_kernel,
    solve_volterra_p,
    witness_intervals,
    witnessed_region,
)
from .states import (
    BlochDecomposition,
    CanonicalBloch,
    EwlSpec,
    average_fidelity,
    bloch_decompose,
    chsh_parameter,
    concurrence,
    conditional_entropy,
    distillable_lower_bound,
    ewl_state,
    from_canonical,
    is_physical,
    octahedron_vertex_state,
    partial_trace,
    teleportation_N,
    von_neumann_entropy,
)
from .uncertainty import (
    SX,
    SZ,
    Observable,
    UncertaintyReport,
    berta_bound,
    complementarity,
    conditional_on_memory,
    fano_estimate,
    joint_outcome_distribution,
    measurement_estimate,
    postmeasure_cq,
    tomographic_estimate,
    witness_report,
)
