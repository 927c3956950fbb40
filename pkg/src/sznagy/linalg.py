"""Dense complex linear algebra used by the rest of the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The Hermitian
eigensolver is a cyclic Jacobi method so that results are reproducible
bit-for-bit on identical input, including the ordering of degenerate
eigenvectors.
"""

from typing import NamedTuple

import numpy as np

from .config import DEFAULT_TOLERANCES as TOL
from .errors import NoConvergence, NotHermitian, NotPSD


class HermitianEig(NamedTuple):
    """Eigenvalues sorted descending and the matching column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def as_cmatrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    return a


def dag(a):
    return np.conj(a).T


def kron(a, b):
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def kron_all(*mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def hermiticity_defect(h):
    h = np.asarray(h)
    return float(np.max(np.abs(h - dag(h)))) if h.size else 0.0


def _check_hermitian(h, tol):
    if h.shape[0] != h.shape[1]:
        raise NotHermitian(f"matrix is not square: {h.shape}")
    defect = hermiticity_defect(h)
    if defect > tol:
        raise NotHermitian(f"max |h - h^dag| = {defect:.3e} exceeds {tol:.1e}")


def _off_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def _jacobi_sweeps(a, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= 1e-15 * scale:
            return a, v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag <= 1e-18 * scale:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] makes (G^dag A G)_pq real-zero.
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = dag(g) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    off = _off_norm(a)
    if off <= 1e-15 * scale:
        return a, v
    raise NoConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def _phase_normalize(vec, eps=1e-12):
    nz = np.flatnonzero(np.abs(vec) > eps)
    if nz.size == 0:
        return vec, len(vec)
    first = nz[0]
    return vec * (abs(vec[first]) / vec[first]), first


def eig_hermitian(h, tol=TOL.hermitian, max_sweeps=TOL.jacobi_max_sweeps):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come out sorted in descending order. Each eigenvector is
    rescaled by a phase so that its first non-negligible component is real
    and positive. Eigenvectors sharing an eigenvalue (within ``1e-10``
    relative) are ordered by the index of that first component, then
    lexicographically by ``(-re, -im)`` of their components.

    Raises:
        NotHermitian: if ``max|h - h^dag|`` exceeds ``tol``.
        NoConvergence: if ``max_sweeps`` sweeps do not diagonalize ``h``.
    """
    h = as_cmatrix(h)
    _check_hermitian(h, tol)
    a = 0.5 * (h + dag(h))
    a, v = _jacobi_sweeps(a.copy(), max_sweeps)
    values = np.real(np.diag(a)).copy()
    n = len(values)

    cols = []
    keys = []
    for k in range(n):
        vec, first = _phase_normalize(v[:, k])
        cols.append(vec)
        keys.append((first, tuple(x for z in np.round(vec, 12) for x in (-z.real, -z.imag))))

    order = sorted(range(n), key=lambda k: -values[k])
    tie_tol = 1e-10 * max(1.0, float(np.max(np.abs(values))) if n else 1.0)
    grouped = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and values[order[i]] - values[order[j]] <= tie_tol:
            j += 1
        grouped.extend(sorted(order[i:j], key=lambda k: keys[k]))
        i = j

    vals = values[grouped]
    vecs = np.column_stack([cols[k] for k in grouped])
    return HermitianEig(vals, vecs)


def sqrtm_psd(m, clamp=TOL.psd_clamp):
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-clamp, 0)`` are treated as zero.
    """
    vals, vecs = eig_hermitian(m)
    if vals.size and vals.min() < -clamp:
        raise NotPSD(f"smallest eigenvalue {vals.min():.3e} is below -{clamp:.0e}")
    roots = np.sqrt(np.clip(vals, 0.0, None))
    s = (vecs * roots) @ dag(vecs)
    return 0.5 * (s + dag(s))


def inv_sqrtm_pd(m):
    """``m^{-1/2}`` for a positive definite Hermitian matrix."""
    vals, vecs = eig_hermitian(m)
    if vals.min() <= 0:
        raise NotPSD(f"matrix is not positive definite (min eigenvalue {vals.min():.3e})")
    s = (vecs / np.sqrt(vals)) @ dag(vecs)
    return 0.5 * (s + dag(s))


def operator_norm(a):
    """Largest singular value, computed as sqrt of the top eigenvalue of a^dag a."""
    a = as_cmatrix(a)
    vals, _ = eig_hermitian(dag(a) @ a)
    return float(np.sqrt(max(vals[0], 0.0)))


def expm(a, tol=1e-12):
    """Matrix exponential by scaling and squaring of a truncated Taylor series."""
    a = as_cmatrix(a)
    n = a.shape[0]
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    x = a / (2.0**squarings)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 60):
        term = term @ x / k
        result = result + term
        if np.linalg.norm(term, 1) <= tol * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def frobenius(a):
    return float(np.linalg.norm(a))
