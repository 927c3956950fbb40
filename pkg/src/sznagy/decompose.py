"""Compile a multi-qubit unitary into CNOTs and single-qubit rotations.

The unitary is split recursively by the cosine-sine decomposition, one
qubit at a time from the most significant. Each split produces a
uniformly controlled ``Ry`` sandwiched between two multiplexed unitaries
on the remaining qubits; at the last qubit every multiplexed 2x2 block is
written as ``e^{i phi} Rz Ry Rz`` and the phases become a diagonal on the
controls. Uniformly controlled rotations are expanded with a Gray-code
CNOT ladder. A peephole pass then removes trivial gates.
"""

import math

import numpy as np
from scipy.linalg import cossin, polar

from .config import DEFAULT_TOLERANCES as TOL
from .errors import NotUnitary
from .gates import CNOT, Circuit, Rotation, circuit_unitary, phase_distance

_ZERO_ANGLE = 1e-12


def _gray(i):
    return i ^ (i >> 1)


def uniformly_controlled_rotation(axis, angles, controls, target):
    """Gates realizing ``R_axis(angles[c])`` on ``target`` for control value ``c``.

    ``controls[0]`` is the most significant bit of ``c``. Axis must be ``y``
    or ``z`` (both flip sign under conjugation by X).
    """
    angles = np.asarray(angles, dtype=float)
    k = len(controls)
    if k == 0 or np.allclose(angles, angles[0], atol=1e-14, rtol=0):
        return [Rotation(target, axis, float(angles[0]))] if abs(angles[0]) > _ZERO_ANGLE else []
    size = 2**k
    gray = [_gray(i) for i in range(size)]
    signs = np.array([[(-1) ** bin(c & g).count("1") for g in gray] for c in range(size)])
    thetas = signs.T @ angles / size
    gates = []
    for i in range(size):
        if abs(thetas[i]) > _ZERO_ANGLE:
            gates.append(Rotation(target, axis, float(thetas[i])))
        bit = (_gray(i) ^ _gray((i + 1) % size)).bit_length() - 1
        gates.append(CNOT(controls[k - 1 - bit], target))
    return gates


def _diagonal(phases, qubits):
    if not qubits:
        return []
    phases = np.asarray(phases, dtype=float)
    even, odd = phases[0::2], phases[1::2]
    gates = uniformly_controlled_rotation("z", odd - even, qubits[:-1], qubits[-1])
    return gates + _diagonal((even + odd) / 2.0, qubits[:-1])


def _zyz(u):
    """``(phi, alpha, beta, gamma)`` with ``u = e^{i phi} Rz(alpha) Ry(beta) Rz(gamma)``."""
    phi = np.angle(np.linalg.det(u)) / 2.0
    v = u * np.exp(-1j * phi)
    a, b = v[0, 0], v[1, 0]
    beta = 2.0 * math.atan2(abs(b), abs(a))
    s = -2.0 * np.angle(a) if abs(a) > 1e-14 else 0.0
    d = 2.0 * np.angle(b) if abs(b) > 1e-14 else 0.0
    return phi, (s + d) / 2.0, beta, (s - d) / 2.0


def _mux_single(blocks, n):
    controls = list(range(1, n))
    params = np.array([_zyz(b) for b in blocks])
    gates = uniformly_controlled_rotation("z", params[:, 3], controls, n)
    gates += uniformly_controlled_rotation("y", params[:, 2], controls, n)
    gates += uniformly_controlled_rotation("z", params[:, 1], controls, n)
    gates += _diagonal(params[:, 0], controls)
    return gates


def _shift(gate, k):
    if isinstance(gate, Rotation):
        return Rotation(gate.qubit + k, gate.axis, gate.theta)
    return CNOT(gate.control + k, gate.target + k)


def _mux(blocks, n):
    """Gates for ``block_diag(*blocks)`` where block index runs over the leading qubits."""
    m = blocks[0].shape[0]
    k = n - int(round(math.log2(m)))
    if len(blocks) > 1 and all(np.allclose(b, blocks[0], atol=1e-13, rtol=0) for b in blocks[1:]):
        return [_shift(g, k) for g in _mux([blocks[0]], n - k)]
    scalars = [b[0, 0] for b in blocks]
    if all(np.allclose(b, s * np.eye(m), atol=1e-13, rtol=0) for b, s in zip(blocks, scalars)):
        return _diagonal(np.angle(scalars), list(range(1, k + 1)))
    if m == 2:
        return _mux_single(blocks, n)
    half = m // 2
    lefts, rights, angles = [], [], []
    for b in blocks:
        u, cs, vdh = cossin(b, p=half, q=half)
        lefts.extend([u[:half, :half], u[half:, half:]])
        rights.extend([vdh[:half, :half], vdh[half:, half:]])
        angles.extend(2.0 * np.arctan2(np.diag(cs[half:, :half]), np.diag(cs[:half, :half])))
    target = k + 1
    controls = list(range(1, k + 1)) + list(range(k + 2, n + 1))
    gates = _mux(rights, n)
    gates += uniformly_controlled_rotation("y", angles, controls, target)
    gates += _mux(lefts, n)
    return gates


def _split_leading(u, tol=1e-10):
    """``(w, v)`` with ``u = w (x) v`` up to phase, ``w`` on the leading qubit; None if not a product."""
    dim = u.shape[0]
    rest = dim // 2
    r = u.reshape(2, rest, 2, rest).transpose(0, 2, 1, 3).reshape(4, rest * rest)
    left, sv, right = np.linalg.svd(r, full_matrices=False)
    if len(sv) > 1 and sv[1] > tol * sv[0]:
        return None
    w = polar(left[:, 0].reshape(2, 2))[0]
    v = polar(right[0].reshape(rest, rest))[0]
    if phase_distance(np.kron(w, v), u) > 1e-14:
        return None
    return w, v


def _compile(u, n):
    if n > 1:
        parts = _split_leading(u)
        if parts is not None:
            w, v = parts
            return _mux([w], 1) + [_shift(g, 1) for g in _compile(v, n - 1)]
    return _mux([u], n)


def _wrap(theta):
    # global phase is irrelevant, so R(theta + 2 pi) ~ R(theta)
    w = math.remainder(theta, 2 * math.pi)
    return 0.0 if abs(w) < _ZERO_ANGLE else w


def _commutes(a, b):
    qa, qb = set(a.qubits), set(b.qubits)
    if not qa & qb:
        return True
    if isinstance(a, CNOT) and isinstance(b, CNOT):
        return a.control != b.target and a.target != b.control
    rot, cx = (a, b) if isinstance(a, Rotation) else (b, a)
    if isinstance(rot, Rotation) and isinstance(cx, CNOT):
        base = rot.axis.rstrip("-")
        return (base == "z" and rot.qubit == cx.control) or (base == "x" and rot.qubit == cx.target)
    return False


def simplify(gates):
    """Drop zero rotations, fuse same-axis rotations and cancel CNOT pairs.

    Gates may be moved past commuting neighbours to find a partner.
    """
    out = []
    for g in gates:
        if isinstance(g, Rotation):
            g = Rotation(g.qubit, g.axis, _wrap(g.theta))
            if g.theta == 0.0:
                continue
        merged = False
        for j in range(len(out) - 1, -1, -1):
            h = out[j]
            if isinstance(g, CNOT) and h == g:
                del out[j]
                merged = True
                break
            if isinstance(g, Rotation) and isinstance(h, Rotation) and h.qubit == g.qubit and h.axis == g.axis:
                theta = _wrap(h.theta + g.theta)
                if theta == 0.0:
                    del out[j]
                else:
                    out[j] = Rotation(g.qubit, g.axis, theta)
                merged = True
                break
            if not _commutes(g, h):
                break
        if not merged:
            out.append(g)
    return out


def decompose_unitary(u, tol=TOL.unitary, optimize=True):
    """Circuit whose unitary equals ``u`` up to a global phase.

    Raises:
        NotUnitary: if ``u^dag u`` deviates from the identity by more than ``tol``.
    """
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    n = int(round(math.log2(dim)))
    if u.shape != (dim, dim) or 2**n != dim or n < 1:
        raise NotUnitary(f"expected a 2^n x 2^n matrix, got {u.shape}")
    defect = float(np.max(np.abs(np.conj(u).T @ u - np.eye(dim))))
    if defect > tol:
        raise NotUnitary(f"unitarity defect {defect:.3e} exceeds {tol:.0e}")
    gates = _compile(u, n)
    if optimize:
        previous = None
        while previous != len(gates):
            previous = len(gates)
            gates = simplify(gates)
    return Circuit(gates, n)


def roundtrip_distance(u, circuit=None):
    circuit = circuit if circuit is not None else decompose_unitary(u)
    return phase_distance(circuit_unitary(circuit), u)
