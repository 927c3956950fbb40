"""Numerical tolerances shared by all modules."""

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-8
    psd_clamp: float = 1e-9
    jacobi_max_sweeps: int = 1000
    density_matrix: float = 1e-8
    evolution_check: float = 1e-6
    completeness: float = 1e-8
    completeness_experimental: float = 0.05
    contraction: float = 1e-9
    chi_eig_clamp: float = 1e-6
    kraus_cutoff: float = 1e-10
    unitary: float = 1e-8
    normalization: float = 1e-10
    mixed_state_cutoff: float = 1e-12
    zero_norm: float = 1e-12
    gram_condition: float = 1e12
    cptp_max_iter: int = 10000

    def as_dict(self):
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
