"""Gate-level circuits over three qubits: CNOTs and single-qubit rotations.

Qubit 1 is the most significant bit of a basis-state index (the ancilla in
a dilation circuit). A :class:`Circuit` lists gates in application order.

Rotations follow ``R_n(theta) = exp(-i theta n.sigma / 2)``. A trailing
``-`` on the axis name (``x-``, ``y-``, ``z-``) marks a barred axis as
written in published gate lists; how the bar is read is controlled by a
:class:`RotationConvention`.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError

AXES = ("x", "y", "z", "x-", "y-", "z-")
_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class Rotation:
    qubit: int
    axis: str
    theta: float

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown rotation axis {self.axis!r}")
        if not math.isfinite(self.theta):
            raise ValueError("rotation angle must be finite")

    @property
    def qubits(self):
        return (self.qubit,)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")

    @property
    def qubits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class RotationConvention:
    """How to read a rotation symbol.

    ``sign=+1`` means ``exp(-i theta n.sigma/2)``; ``sign=-1`` flips the sense
    of rotation. ``bar="negate"`` reads ``x-`` as a rotation about ``-x``;
    ``bar="ignore"`` reads it as plain ``x``.
    """

    sign: int = 1
    bar: str = "negate"

    def __post_init__(self):
        if self.sign not in (1, -1) or self.bar not in ("negate", "ignore"):
            raise ValueError(f"invalid convention sign={self.sign} bar={self.bar}")

    @property
    def id(self):
        return f"{'plus' if self.sign == 1 else 'minus'}-{self.bar}"

    @classmethod
    def from_id(cls, ident):
        for conv in ALL_CONVENTIONS:
            if conv.id == ident:
                return conv
        if ident == "native":
            return NATIVE
        raise ValueError(f"unknown rotation convention {ident!r}; choose from {[c.id for c in ALL_CONVENTIONS]}")


NATIVE = RotationConvention(1, "negate")
ALL_CONVENTIONS = (
    RotationConvention(1, "negate"),
    RotationConvention(1, "ignore"),
    RotationConvention(-1, "negate"),
    RotationConvention(-1, "ignore"),
)


@dataclass
class Circuit:
    gates: list = field(default_factory=list)
    num_qubits: int = 3

    def __post_init__(self):
        self.gates = list(self.gates)
        for g in self.gates:
            for q in g.qubits:
                if not 1 <= q <= self.num_qubits:
                    raise ValueError(f"qubit {q} out of range for {self.num_qubits} qubits")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def cnot_count(self):
        return sum(isinstance(g, CNOT) for g in self.gates)

    @property
    def rotation_count(self):
        return sum(isinstance(g, Rotation) for g in self.gates)

    def counts(self):
        return {"cnot": self.cnot_count, "rotation": self.rotation_count, "total": len(self.gates)}


def rotation_2x2(axis, theta, convention=NATIVE):
    base = axis.rstrip("-")
    sign = convention.sign
    if axis.endswith("-") and convention.bar == "negate":
        sign = -sign
    angle = sign * theta / 2.0
    return math.cos(angle) * np.eye(2) - 1j * math.sin(angle) * _PAULI[base]


def _embed_1q(u, qubit, n):
    return np.kron(np.kron(np.eye(2 ** (qubit - 1)), u), np.eye(2 ** (n - qubit)))


def _cnot_perm(control, target, n):
    dim = 2**n
    cbit = n - control
    tbit = n - target
    idx = np.arange(dim)
    return np.where((idx >> cbit) & 1, idx ^ (1 << tbit), idx)


def gate_matrix(gate, convention=NATIVE, num_qubits=3):
    """Full ``2^n x 2^n`` matrix of one gate."""
    if isinstance(gate, Rotation):
        return _embed_1q(rotation_2x2(gate.axis, gate.theta, convention), gate.qubit, num_qubits)
    perm = _cnot_perm(gate.control, gate.target, num_qubits)
    m = np.zeros((2**num_qubits, 2**num_qubits), dtype=complex)
    m[perm, np.arange(2**num_qubits)] = 1.0
    return m


def circuit_unitary(circuit, convention=NATIVE):
    """Ordered product ``G_last ... G_first``."""
    n = circuit.num_qubits
    u = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        u = gate_matrix(g, convention, n) @ u
    return u


def run_circuit(circuit, state, convention=NATIVE):
    """Apply the circuit gate by gate to a state vector."""
    n = circuit.num_qubits
    psi = np.asarray(state, dtype=complex).reshape((2,) * n).copy()
    for g in circuit.gates:
        if isinstance(g, Rotation):
            u = rotation_2x2(g.axis, g.theta, convention)
            ax = g.qubit - 1
            psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [ax])), 0, ax)
        else:
            c, t = g.control - 1, g.target - 1
            sel = [slice(None)] * n
            sel[c] = 1
            sub = psi[tuple(sel)]
            # after fixing the control axis, the target axis shifts down if it came later
            tax = t - 1 if t > c else t
            psi[tuple(sel)] = np.flip(sub, axis=tax)
    return psi.reshape(-1)


def phase_distance(u, v):
    """``1 - |Tr(u^dag v)| / dim``; zero iff the unitaries agree up to global phase."""
    u = np.asarray(u)
    v = np.asarray(v)
    value = 1.0 - abs(np.trace(np.conj(u).T @ v)) / u.shape[0]
    return float(max(value, 0.0))


# --- native text format -------------------------------------------------------


def format_gate(gate, precision=6):
    if isinstance(gate, Rotation):
        return f"R {gate.qubit} {gate.axis} {gate.theta:.{precision}f}"
    return f"CNOT {gate.control} {gate.target}"


def serialize_gate_list(circuit, precision=6, header=None):
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(format_gate(g, precision) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def _column_of(raw, token, start=0):
    return raw.index(token, start) + 1


def parse_gate_list(text, num_qubits=3):
    """Parse the native one-gate-per-line format.

    ``R <qubit> <axis> <theta>`` or ``CNOT <control> <target>``; ``#`` starts
    a comment.

    Raises:
        ParseError: with 1-based line and column of the offending token.
    """
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        kind = tokens[0]
        pos = 0
        cols = []
        for tok in tokens:
            c = line.index(tok, pos)
            cols.append(c + 1)
            pos = c + len(tok)

        def qubit(i):
            try:
                q = int(tokens[i])
            except ValueError:
                raise ParseError(f"expected qubit index, got {tokens[i]!r}", lineno, cols[i]) from None
            if not 1 <= q <= num_qubits:
                raise ParseError(f"qubit {q} out of range 1..{num_qubits}", lineno, cols[i])
            return q

        if kind == "R":
            if len(tokens) != 4:
                raise ParseError("rotation needs: R <qubit> <axis> <theta>", lineno, cols[0])
            q = qubit(1)
            if tokens[2] not in AXES:
                raise ParseError(f"unknown axis {tokens[2]!r}", lineno, cols[2])
            try:
                theta = float(tokens[3])
            except ValueError:
                raise ParseError(f"bad angle {tokens[3]!r}", lineno, cols[3]) from None
            if not math.isfinite(theta):
                raise ParseError("angle must be finite", lineno, cols[3])
            gates.append(Rotation(q, tokens[2], theta))
        elif kind == "CNOT":
            if len(tokens) != 3:
                raise ParseError("CNOT needs: CNOT <control> <target>", lineno, cols[0])
            c, t = qubit(1), qubit(2)
            if c == t:
                raise ParseError("CNOT control equals target", lineno, cols[2])
            gates.append(CNOT(c, t))
        else:
            raise ParseError(f"unknown gate {kind!r}", lineno, cols[0])
    return Circuit(gates, num_qubits)


# --- published product notation -------------------------------------------------

_ROT_TOKEN = re.compile(r"^(\d)R_([xyz]-?)\^(.+)$")
_CNOT_TOKEN = re.compile(r"^CNOT_(\d)(\d)$")
_PI_EXPR = re.compile(r"^(\d+(?:\.\d+)?)?\s*\*?\s*pi(?:\s*/\s*(\d+(?:\.\d+)?))?$")


def _eval_angle(expr, angles):
    expr = expr.strip()
    if expr in angles:
        return float(angles[expr])
    m = _PI_EXPR.match(expr)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(expr)
    except ValueError:
        raise ParseError(f"cannot evaluate angle {expr!r}") from None


def parse_product(text, angles=None, macros=None, num_qubits=3):
    """Parse a gate product written as in the published tables.

    Factors are separated by `` . `` and read right-to-left: the rightmost
    factor acts first. Factors look like ``1R_y-^pi/2``, ``2R_z^theta1`` or
    ``CNOT_31``; names in ``macros`` expand to sub-products.
    """
    angles = angles or {}
    macros = macros or {}

    def expand(s):
        out = []
        for tok in re.split(r"\s+\.\s+", s.strip()):
            tok = tok.strip()
            if tok in macros:
                out.extend(expand(macros[tok]))
            else:
                out.append(tok)
        return out

    gates = []
    for tok in reversed(expand(text)):
        m = _ROT_TOKEN.match(tok)
        if m:
            gates.append(Rotation(int(m.group(1)), m.group(2), _eval_angle(m.group(3), angles)))
            continue
        m = _CNOT_TOKEN.match(tok)
        if m:
            gates.append(CNOT(int(m.group(1)), int(m.group(2))))
            continue
        raise ParseError(f"unrecognised factor {tok!r}")
    return Circuit(gates, num_qubits)


@dataclass
class VerificationReport:
    distances: dict
    best_convention: str
    best_distance: float

    def as_dict(self):
        return {"distances": dict(self.distances), "best_convention": self.best_convention,
                "best_distance": self.best_distance}


def verify_gate_list(circuit, target, conventions=ALL_CONVENTIONS):
    """Phase distance between the circuit and ``target`` under each convention.

    Purely diagnostic: nothing is asserted.
    """
    distances = {c.id: phase_distance(circuit_unitary(circuit, c), target) for c in conventions}
    best = min(distances, key=distances.get)
    return VerificationReport(distances, best, distances[best])
