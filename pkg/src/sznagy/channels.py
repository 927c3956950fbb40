"""Two-qubit channel representations and conversions between them.

Conventions used throughout:

* Density matrices are vectorized row-major: element ``rho[i, j]`` sits at
  index ``4 * i + j``. A Kraus map then has superoperator
  ``sum_k A_k (x) conj(A_k)``.
* The operator basis is ``E[4 * a + b] = sigma_a (x) sigma_b`` with
  ``(sigma_0, ..., sigma_3) = (I, X, Y, Z)``, unnormalized, so that
  ``E[0] = I (x) I``, ``E[3] = I (x) Z``, ``E[12] = Z (x) I`` and
  ``E[15] = Z (x) Z`` (1-based: E1, E4, E13, E16).
* chi is defined through ``L(rho) = sum_mn chi[m, n] E_m rho E_n^dag``; the
  identity channel has ``chi[0, 0] = 1`` and a trace-preserving channel has
  ``trace(chi) = 1``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES as TOL
from .errors import IncompleteSet, InvalidState, NotCP, ZeroMatrix
from .linalg import dag, eig_hermitian, hermiticity_defect, inv_sqrtm_pd, operator_norm, expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)
PAULI_LABELS = ("I", "X", "Y", "Z")

PAULI_BASIS = np.array([np.kron(a, b) for a in PAULIS for b in PAULIS])
PAULI_BASIS_LABELS = tuple(a + b for a in PAULI_LABELS for b in PAULI_LABELS)
# column m is vec(E_m), row-major
_VEC_BASIS = PAULI_BASIS.reshape(16, 16).T


def vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1)


def unvec(v, dim=4):
    return np.asarray(v, dtype=complex).reshape(dim, dim)


def _reshuffle(m, d=4):
    # S[(i,j),(k,l)] <-> J[(i,k),(j,l)]; an involution.
    return np.asarray(m).reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


@dataclass(frozen=True)
class Superoperator:
    """Linear map on row-major vectorized 4x4 matrices."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (16, 16):
            raise ValueError(f"superoperator must be 16x16, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def trace_defect(self):
        """Deviation of the trace-functional row sum from that of the identity."""
        rows = [0, 5, 10, 15]
        return float(np.max(np.abs(self.matrix[rows].sum(axis=0) - np.eye(16)[rows].sum(axis=0))))

    def apply(self, rho):
        return unvec(self.matrix @ vec(rho))


@dataclass(frozen=True)
class ChiMatrix:
    """Process matrix in the fixed two-qubit Pauli basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (16, 16):
            raise ValueError(f"chi matrix must be 16x16, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def hermiticity_defect(self):
        return hermiticity_defect(self.matrix)

    def tp_matrix(self):
        """``sum_mn chi[m, n] E_n^dag E_m``; equals I for trace-preserving maps."""
        return np.einsum("mn,nab,mbc->ac", self.matrix, np.conj(PAULI_BASIS).transpose(0, 2, 1), PAULI_BASIS)

    def tp_defect(self):
        return float(np.max(np.abs(self.tp_matrix() - np.eye(4))))

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        left = np.einsum("mab,bc->mac", PAULI_BASIS, rho)
        return np.einsum("mn,mac,ndc->ad", self.matrix, left, np.conj(PAULI_BASIS))

    def to_superoperator(self):
        return Superoperator(_reshuffle(_VEC_BASIS @ self.matrix @ dag(_VEC_BASIS)))


@dataclass(frozen=True)
class KrausSet:
    """Ordered Kraus operators plus their completeness defect.

    ``tolerance`` is the largest ``max|sum A^dag A - I|`` for which the set
    counts as complete: 1e-8 for synthetic channels, 0.05 for sets read from
    rounded experimental tables.
    """

    operators: tuple
    tolerance: float = TOL.completeness
    completeness_defect: float = field(init=False)

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.operators)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        for a in ops:
            if a.shape != (dim, dim):
                raise ValueError(f"Kraus operators must all be {dim}x{dim}, got {a.shape}")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "completeness_defect", float(np.max(np.abs(self.gram() - np.eye(dim)))))

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, i):
        return self.operators[i]

    def gram(self):
        return sum(dag(a) @ a for a in self.operators)

    @property
    def is_complete(self):
        return self.completeness_defect <= self.tolerance

    def norms(self):
        return [operator_norm(a) for a in self.operators]

    def renormalized(self, tolerance=TOL.completeness):
        """Return ``{A_i M^{-1/2}}`` with ``M = sum A_i^dag A_i``, which is complete."""
        m_inv_half = inv_sqrtm_pd(self.gram())
        return KrausSet(tuple(a @ m_inv_half for a in self.operators), tolerance=tolerance)

    def superoperator(self):
        return Superoperator(sum(np.kron(a, np.conj(a)) for a in self.operators))


@dataclass(frozen=True)
class DephasingParams:
    gamma1: float
    gamma2: float
    t: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "t"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


def check_density_matrix(rho, tol=TOL.density_matrix):
    """Raise InvalidState unless ``rho`` is Hermitian, unit-trace and PSD within ``tol``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidState(f"density matrix must be square, got {rho.shape}")
    herm = hermiticity_defect(rho)
    if herm > tol:
        raise InvalidState(f"density matrix is not Hermitian (defect {herm:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise InvalidState(f"density matrix trace is {tr:.12f}")
    lowest = np.linalg.eigvalsh(0.5 * (rho + dag(rho)))[0]
    if lowest < -tol:
        raise InvalidState(f"density matrix has eigenvalue {lowest:.3e}")
    return rho


def dephasing_generator(params):
    """Diagonal generator of independent phase damping on both qubits.

    The entry at vec index ``4 i + j`` is ``-gamma1`` if the qubit-1 bits of
    ``i`` and ``j`` differ, plus ``-gamma2`` if the qubit-2 bits differ.
    """
    diag = np.zeros(16)
    for i in range(4):
        for j in range(4):
            k = 4 * i + j
            if (i >> 1) != (j >> 1):
                diag[k] -= params.gamma1
            if (i & 1) != (j & 1):
                diag[k] -= params.gamma2
    return Superoperator(np.diag(diag).astype(complex))


def evolve_superop(z, t, rho, check_tol=TOL.evolution_check):
    """``unvec(exp(z t) vec(rho))``.

    Raises:
        InvalidState: if the output is not a density matrix within ``check_tol``,
            which signals a generator that is not CPTP.
    """
    rho = check_density_matrix(rho)
    if rho.shape != (4, 4):
        raise InvalidState(f"expected a two-qubit state, got shape {rho.shape}")
    m = z.matrix if isinstance(z, Superoperator) else np.asarray(z, dtype=complex)
    if np.count_nonzero(m - np.diag(np.diag(m))) == 0:
        out = unvec(np.exp(np.diag(m) * t) * vec(rho))
    else:
        out = unvec(expm(m * t) @ vec(rho))
    return check_density_matrix(out, tol=check_tol)


def channel_superoperator(z, t):
    """``exp(z t)`` as a Superoperator."""
    m = z.matrix if isinstance(z, Superoperator) else np.asarray(z, dtype=complex)
    if np.count_nonzero(m - np.diag(np.diag(m))) == 0:
        return Superoperator(np.diag(np.exp(np.diag(m) * t)))
    return Superoperator(expm(m * t))


def superop_to_chi(s):
    """chi of the channel with superoperator ``s``, via its Choi matrix."""
    m = s.matrix if isinstance(s, Superoperator) else np.asarray(s, dtype=complex)
    choi = _reshuffle(m)
    return ChiMatrix(dag(_VEC_BASIS) @ choi @ _VEC_BASIS / 16.0)


def chi_to_kraus(chi, clamp=TOL.chi_eig_clamp, cutoff=TOL.kraus_cutoff, tolerance=TOL.completeness):
    """Canonical Kraus operators ``A_i = sqrt(d_i) sum_j V[j, i] E_j`` from ``chi = V D V^dag``.

    One operator per eigenvalue above ``cutoff``, in descending eigenvalue order.

    Raises:
        NotCP: if chi has an eigenvalue below ``-clamp``.
    """
    m = chi.matrix if isinstance(chi, ChiMatrix) else np.asarray(chi, dtype=complex)
    values, vectors = eig_hermitian(m)
    if values[-1] < -clamp:
        raise NotCP(f"chi has eigenvalue {values[-1]:.3e} < -{clamp:.0e}; map is not completely positive")
    ops = []
    for d, v in zip(values, vectors.T):
        if d > cutoff:
            ops.append(np.sqrt(d) * np.einsum("j,jab->ab", v, PAULI_BASIS))
    return KrausSet(tuple(ops), tolerance=tolerance)


def pauli_coefficients(a):
    """Coefficients ``c_m = <E_m, a>_HS / 4`` so that ``a = sum_m c_m E_m``."""
    return np.einsum("mab,ab->m", np.conj(PAULI_BASIS), np.asarray(a, dtype=complex)) / 4.0


def kraus_to_chi(kraus):
    ops = kraus.operators if isinstance(kraus, KrausSet) else kraus
    coeffs = np.array([pauli_coefficients(a) for a in ops])
    return ChiMatrix(coeffs.T @ np.conj(coeffs))


def kraus_apply(kraus, rho):
    """Operator-sum evolution ``sum_i A_i rho A_i^dag``.

    Raises:
        IncompleteSet: if the set's completeness defect exceeds its tolerance.
    """
    if not kraus.is_complete:
        raise IncompleteSet(
            f"completeness defect {kraus.completeness_defect:.3e} exceeds tolerance {kraus.tolerance:.1e}"
        )
    rho = np.asarray(rho, dtype=complex)
    out = sum(a @ rho @ dag(a) for a in kraus.operators)
    return 0.5 * (out + dag(out))


def normalized_overlap(a, b, zero_tol=TOL.zero_norm):
    """``|Tr[a b^dag]| / sqrt(Tr[a a^dag] Tr[b b^dag])``, in [0, 1]."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na < zero_tol or nb < zero_tol:
        raise ZeroMatrix("normalized overlap is undefined for a zero matrix")
    value = abs(np.vdot(b, a)) / (na * nb)
    return float(min(value, 1.0))


def process_fidelity(a, b):
    """Normalized overlap of two chi matrices; symmetric and scale invariant."""
    ma = a.matrix if isinstance(a, ChiMatrix) else a
    mb = b.matrix if isinstance(b, ChiMatrix) else b
    return normalized_overlap(ma, mb)


def load_kraus_checked(kraus, renormalize=False):
    """Accept an experimental Kraus set, warning about (or fixing) incompleteness."""
    if renormalize:
        return kraus.renormalized()
    if kraus.completeness_defect > TOL.completeness:
        warnings.warn(
            f"Kraus set completeness defect {kraus.completeness_defect:.3e}; data kept verbatim",
            stacklevel=2,
        )
    return kraus
