"""Process tomography from input/output state pairs.

Two estimators share one linear model ``vec(out_k) = B_k vec(chi)``:

* :func:`linear_inversion_qpt` solves it by least squares;
* :func:`cptp_project_qpt` minimizes the same residual over completely
  positive, trace-preserving chi with accelerated projected gradient steps.
  Each step is projected onto the CPTP set by Dykstra alternation between
  the PSD cone and the trace-preservation subspace.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .channels import PAULI_BASIS, ChiMatrix, check_density_matrix
from .config import DEFAULT_TOLERANCES as TOL
from .errors import NoConvergence, SingularSystem
from .linalg import dag, inv_sqrtm_pd

log = logging.getLogger(__name__)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
# Note the +i superposition for the fourth single-qubit state.
KET_MINUS = np.array([1, 1j], dtype=complex) / np.sqrt(2)
SINGLE_QUBIT_KETS = {"0": KET_0, "1": KET_1, "+": KET_PLUS, "-": KET_MINUS}


class InputBasis(NamedTuple):
    labels: tuple
    kets: tuple
    states: tuple


def input_basis():
    """The 16 product states ``{|0>, |1>, |+>, |->}^(x)2``, first qubit slowest."""
    labels, kets, states = [], [], []
    for a, ka in SINGLE_QUBIT_KETS.items():
        for b, kb in SINGLE_QUBIT_KETS.items():
            ket = np.kron(ka, kb)
            labels.append(a + b)
            kets.append(ket)
            states.append(np.outer(ket, np.conj(ket)))
    return InputBasis(tuple(labels), tuple(kets), tuple(states))


def gram_condition_number(states):
    r = np.array([np.asarray(s).reshape(-1) for s in states]).T
    return float(np.linalg.cond(dag(r) @ r))


@dataclass
class TomographyRecord:
    inputs: list
    outputs: list
    noise_sigma: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.inputs = [check_density_matrix(r) for r in self.inputs]
        self.outputs = [np.asarray(o, dtype=complex) for o in self.outputs]
        if len(self.inputs) != len(self.outputs):
            raise ValueError(f"{len(self.inputs)} inputs but {len(self.outputs)} outputs")


def add_measurement_noise(h, sigma, seed):
    """``h + (G + G^dag) / 2`` with ``G`` complex Gaussian, std ``sigma`` per real and imaginary part."""
    h = np.asarray(h, dtype=complex)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return h.copy()
    rng = np.random.default_rng(seed)
    g = rng.normal(scale=sigma, size=h.shape) + 1j * rng.normal(scale=sigma, size=h.shape)
    return h + (g + dag(g)) / 2


def design_matrix(inputs):
    """Rows: entries of each output; columns: ``chi[m, n]`` flattened row-major."""
    blocks = []
    for rho in inputs:
        left = np.einsum("mab,bc->mac", PAULI_BASIS, rho)
        # (E_m rho E_n^dag)_{ad} = sum_c left[m,a,c] conj(E_n[d,c])
        term = np.einsum("mac,ndc->admn", left, np.conj(PAULI_BASIS))
        blocks.append(term.reshape(16, 256))
    return np.vstack(blocks)


def _targets(outputs):
    return np.concatenate([np.asarray(o, dtype=complex).reshape(-1) for o in outputs])


def _hermitize(m):
    return 0.5 * (m + dag(m))


def residual_objective(chi, record):
    """``sum_k ||L_chi(rho_k) - out_k||_F^2``."""
    m = chi.matrix if isinstance(chi, ChiMatrix) else np.asarray(chi)
    r = design_matrix(record.inputs) @ m.reshape(-1) - _targets(record.outputs)
    return float(np.vdot(r, r).real)


def linear_inversion_qpt(record, max_condition=TOL.gram_condition):
    """Least-squares chi from the record.

    Raises:
        SingularSystem: if the inputs' Gram matrix has condition number above ``max_condition``.
    """
    cond = gram_condition_number(record.inputs)
    log.debug("input Gram condition number %.6g", cond)
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularSystem(f"input states do not span the operator space (condition {cond:.3e})")
    b = design_matrix(record.inputs)
    x, *_ = np.linalg.lstsq(b, _targets(record.outputs), rcond=None)
    return ChiMatrix(_hermitize(x.reshape(16, 16)))


# --- CPTP-constrained estimate --------------------------------------------------

# tp(chi) = sum_mn chi[m, n] E_n^dag E_m as a 16 x 256 linear map
_TP_MAP = np.einsum("nba,mbc->acmn", np.conj(PAULI_BASIS), PAULI_BASIS).reshape(16, 256)
_TP_PINV = np.linalg.pinv(_TP_MAP)
_TP_TARGET = np.eye(4, dtype=complex).reshape(-1)


def project_trace_preserving(chi):
    x = chi.reshape(-1)
    x = x - _TP_PINV @ (_TP_MAP @ x - _TP_TARGET)
    return _hermitize(x.reshape(16, 16))


def project_psd(chi):
    vals, vecs = np.linalg.eigh(_hermitize(chi))
    return (vecs * np.clip(vals, 0.0, None)) @ dag(vecs)


def tp_defect(chi):
    return float(np.max(np.abs(_TP_MAP @ chi.reshape(-1) - _TP_TARGET)))


def project_cptp(chi, tol=1e-12, max_iter=5000):
    """Nearest CPTP chi (Frobenius) by Dykstra's alternating projections."""
    x = _hermitize(np.asarray(chi, dtype=complex))
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for _ in range(max_iter):
        y = project_trace_preserving(x + p)
        p = x + p - y
        x_new = project_psd(y + q)
        q = y + q - x_new
        change = np.linalg.norm(x_new - x)
        x = x_new
        if change < tol and tp_defect(x) < tol:
            break
    return x


def make_trace_preserving(chi):
    """Congruence ``chi -> T chi T^dag`` equivalent to ``A_i -> A_i M^{-1/2}``.

    Keeps chi PSD and makes it exactly trace preserving.
    """
    m = (_TP_MAP @ chi.reshape(-1)).reshape(4, 4)
    m_inv_half = inv_sqrtm_pd(_hermitize(m))
    # E_m M^{-1/2} = sum_p T[p, m] E_p
    t = np.einsum("pba,mbc,ca->pm", np.conj(PAULI_BASIS), PAULI_BASIS, m_inv_half) / 4.0
    return _hermitize(t @ chi @ dag(t))


def clamped_estimate(chi):
    """Eigenvalue-clamped, unit-trace version of a chi estimate."""
    vals, vecs = np.linalg.eigh(_hermitize(chi.matrix if isinstance(chi, ChiMatrix) else chi))
    m = (vecs * np.clip(vals, 0.0, None)) @ dag(vecs)
    tr = np.trace(m).real
    return ChiMatrix(m / tr if tr > 0 else m)


def cptp_project_qpt(record, max_iter=TOL.cptp_max_iter, rel_tol=1e-12, step_tol=1e-10):
    """CPTP-constrained least-squares chi.

    Minimizes ``sum_k ||L_chi(rho_k) - out_k||_F^2`` over chi >= 0 with
    ``sum chi_mn E_n^dag E_m = I`` by FISTA with fixed step ``1/L``, ``L``
    the largest eigenvalue of ``B^dag B``. The result is finally made exactly
    trace preserving by a PSD-preserving congruence.

    Raises:
        NoConvergence: after ``max_iter`` iterations, reporting the final residual.
    """
    b = design_matrix(record.inputs)
    y = _targets(record.outputs)
    bhb = dag(b) @ b
    bhy = dag(b) @ y
    lipschitz = float(np.linalg.eigvalsh(bhb)[-1])
    step = 1.0 / lipschitz

    def objective(x):
        r = b @ x - y
        return float(np.vdot(r, r).real)

    try:
        start = linear_inversion_qpt(record).matrix
    except SingularSystem:
        start = np.eye(16, dtype=complex) / 16
    x = project_cptp(start).reshape(-1)
    z = x.copy()
    t = 1.0
    f_old = objective(x)
    converged = False
    for it in range(1, max_iter + 1):
        grad = bhb @ z - bhy
        x_new = project_cptp((z - step * grad).reshape(16, 16)).reshape(-1)
        f_new = objective(x_new)
        if f_new > f_old:
            # restart momentum when the objective goes up
            z = x.copy()
            t = 1.0
            grad = bhb @ z - bhy
            x_new = project_cptp((z - step * grad).reshape(16, 16)).reshape(-1)
            f_new = objective(x_new)
        t_new = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        z = x_new + ((t - 1) / t_new) * (x_new - x)
        change = np.linalg.norm(x_new - x)
        rel = abs(f_old - f_new) / max(f_old, 1e-300)
        x, t, f_old = x_new, t_new, f_new
        # near a zero residual the objective is rounding noise, so a stalled iterate also counts
        stalled = change < 64 * np.finfo(float).eps * max(1.0, np.linalg.norm(x_new))
        if (rel < rel_tol or f_new < 1e-28 or stalled) and change < step_tol:
            converged = True
            break
    if not converged:
        raise NoConvergence(f"CPTP estimate did not converge in {max_iter} iterations (objective {f_old:.6e})")
    log.debug("CPTP estimate converged after %d iterations, objective %.3e", it, f_old)
    chi = project_psd(x.reshape(16, 16))
    chi = make_trace_preserving(chi)
    return ChiMatrix(chi)
