"""Minimal unitary dilations of Kraus operators with a single ancilla qubit.

The ancilla is the most significant qubit: ``|0> (x) |phi>`` fills the
first half of the enlarged state vector and projecting back onto the system
space means taking the top-left block.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .channels import KrausSet, check_density_matrix
from .config import DEFAULT_TOLERANCES as TOL
from .errors import IncompleteSet, NotContraction, NotNormalized
from .linalg import dag, eig_hermitian, operator_norm, sqrtm_psd


@dataclass(frozen=True)
class DilationUnitary:
    matrix: np.ndarray
    kraus_index: int = 0

    @property
    def source_dim(self):
        return self.matrix.shape[0] // 2

    @property
    def block(self):
        """The dilated operator, i.e. the top-left block."""
        d = self.source_dim
        return self.matrix[:d, :d]

    def unitarity_defect(self):
        return unitarity_defect(self.matrix)


@dataclass(frozen=True)
class ProjectedOutcome:
    """Subnormalized system state left after projecting the ancilla onto |0>."""

    block: np.ndarray

    @property
    def weight(self):
        return float(np.trace(self.block).real)


def unitarity_defect(u):
    u = np.asarray(u)
    return float(np.linalg.norm(dag(u) @ u - np.eye(u.shape[0])))


def dilate(a, kraus_index=0, tol=TOL.contraction):
    """Sz.-Nagy dilation ``[[A, D_{A^dag}], [D_A, -A^dag]]`` with ``D_A = sqrt(I - A^dag A)``.

    Operators whose norm exceeds 1 by at most ``tol`` are rescaled to norm 1
    with a warning.

    Raises:
        NotContraction: if ``||A|| > 1 + tol``.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square operator, got {a.shape}")
    norm = operator_norm(a)
    if norm > 1 + tol:
        raise NotContraction(f"operator norm {norm:.12f} exceeds 1 by {norm - 1:.3e}")
    if norm > 1:
        warnings.warn(f"operator norm {norm:.15f} slightly above 1; rescaling", stacklevel=2)
        a = a / norm
    eye = np.eye(n)
    d_a = sqrtm_psd(eye - dag(a) @ a)
    d_a_dag = sqrtm_psd(eye - a @ dag(a))
    u = np.block([[a, d_a_dag], [d_a, -dag(a)]])
    return DilationUnitary(u, kraus_index)


def dilate_all(kraus):
    return [dilate(a, i) for i, a in enumerate(kraus.operators)]


def embed_state(phi, tol=TOL.normalization):
    """``|0> (x) |phi>`` with the ancilla as the most significant qubit."""
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(phi)
    if abs(norm - 1) > tol:
        raise NotNormalized(f"state norm is {norm:.15f}")
    return np.concatenate([phi, np.zeros_like(phi)])


def project_system(state):
    """Top-left block of ``|psi><psi|`` for an enlarged state vector ``psi``."""
    state = np.asarray(state, dtype=complex)
    d = state.shape[0] // 2
    top = state[:d]
    return ProjectedOutcome(np.outer(top, np.conj(top)))


def simulate_kraus_via_dilation(u, phi):
    """Apply one dilation unitary to ``|0>|phi>`` and project back."""
    m = u.matrix if isinstance(u, DilationUnitary) else np.asarray(u, dtype=complex)
    return project_system(m @ embed_state(phi))


def pure_decomposition(rho, cutoff=TOL.mixed_state_cutoff):
    """Spectral ensemble ``[(p_j, phi_j)]`` of a density matrix, dropping ``p_j <= cutoff``."""
    rho = check_density_matrix(rho)
    values, vectors = eig_hermitian(rho)
    return [(float(p), vectors[:, j]) for j, p in enumerate(values) if p > cutoff]


def simulate_channel_via_dilation(kraus, rho, unitaries=None, runner=None):
    """Channel output assembled from per-operator dilations.

    A mixed input is split into its eigen-ensemble and every pure member is
    run through every dilation; the projected blocks are summed with the
    ensemble weights.

    Args:
        kraus: complete KrausSet.
        rho: input density matrix.
        unitaries: precomputed dilations, one per Kraus operator.
        runner: optional callable ``(index, enlarged_state) -> enlarged_state``
            replacing the dense unitary, e.g. a gate-level circuit simulator.
    """
    if not isinstance(kraus, KrausSet):
        kraus = KrausSet(tuple(kraus))
    if not kraus.is_complete:
        raise IncompleteSet(
            f"completeness defect {kraus.completeness_defect:.3e} exceeds tolerance {kraus.tolerance:.1e}"
        )
    if unitaries is None:
        unitaries = dilate_all(kraus)
    d = kraus.dim
    out = np.zeros((d, d), dtype=complex)
    for p, phi in pure_decomposition(rho):
        enlarged = embed_state(phi)
        for i, u in enumerate(unitaries):
            final = runner(i, enlarged) if runner is not None else u.matrix @ enlarged
            out += p * project_system(final).block
    return 0.5 * (out + dag(out))
