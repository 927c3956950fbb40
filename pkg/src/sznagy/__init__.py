"""Open-system dynamics via Sz.-Nagy unitary dilations of Kraus operators."""

__version__ = "0.1.0"

from .channels import (
    ChiMatrix,
    DephasingParams,
    KrausSet,
    Superoperator,
    chi_to_kraus,
    dephasing_generator,
    evolve_superop,
    kraus_apply,
    kraus_to_chi,
    normalized_overlap,
    process_fidelity,
    superop_to_chi,
)
from .decompose import decompose_unitary
from .dilation import dilate, embed_state, simulate_channel_via_dilation, simulate_kraus_via_dilation
from .gates import CNOT, Circuit, Rotation, RotationConvention, circuit_unitary, phase_distance
from .tomography import cptp_project_qpt, input_basis, linear_inversion_qpt

__all__ = [
    "ChiMatrix", "DephasingParams", "KrausSet", "Superoperator", "chi_to_kraus", "dephasing_generator",
    "evolve_superop", "kraus_apply", "kraus_to_chi", "normalized_overlap", "process_fidelity",
    "superop_to_chi", "decompose_unitary", "dilate", "embed_state", "simulate_channel_via_dilation",
    "simulate_kraus_via_dilation", "CNOT", "Circuit", "Rotation", "RotationConvention", "circuit_unitary",
    "phase_distance", "cptp_project_qpt", "input_basis", "linear_inversion_qpt",
]
