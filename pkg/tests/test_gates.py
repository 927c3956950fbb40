import math

import numpy as np
import pytest

import oracles
from sznagy import reference_data
from sznagy.dilation import dilate
from sznagy.errors import ParseError
from sznagy.gates import (
    ALL_CONVENTIONS,
    CNOT,
    NATIVE,
    Circuit,
    Rotation,
    RotationConvention,
    circuit_unitary,
    gate_matrix,
    parse_gate_list,
    parse_product,
    phase_distance,
    rotation_2x2,
    run_circuit,
    serialize_gate_list,
    verify_gate_list,
)


def basis(bits):
    return np.eye(8)[int(bits, 2)]


def test_zero_rotation_is_identity():
    assert np.allclose(gate_matrix(Rotation(1, "z", 0.0)), np.eye(8))


def test_cnot_permutation():
    assert np.allclose(gate_matrix(CNOT(3, 1)) @ basis("001"), basis("101"))
    assert np.allclose(gate_matrix(CNOT(3, 1)) @ basis("000"), basis("000"))


def test_pi_rotation_flips_qubit_one():
    u = gate_matrix(Rotation(1, "y", math.pi))
    for rest in ("00", "01", "10", "11"):
        out = u @ basis("0" + rest)
        assert abs(abs(out @ basis("1" + rest)) - 1) < 1e-12


def test_rotation_definition():
    theta = 0.37
    for axis, pauli in (("x", oracles.SX), ("y", oracles.SY), ("z", oracles.SZ)):
        expected = math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * pauli
        assert np.allclose(rotation_2x2(axis, theta), expected)
        assert np.allclose(rotation_2x2(axis + "-", theta), expected.conj().T)


def test_conventions():
    assert [c.id for c in ALL_CONVENTIONS] == ["plus-negate", "plus-ignore", "minus-negate", "minus-ignore"]
    assert RotationConvention.from_id("native") == NATIVE
    with pytest.raises(ValueError):
        RotationConvention.from_id("sideways")
    r = rotation_2x2("y-", 0.4, RotationConvention(1, "ignore"))
    assert np.allclose(r, rotation_2x2("y", 0.4))
    assert np.allclose(rotation_2x2("y", 0.4, RotationConvention(-1, "negate")), rotation_2x2("y", -0.4))


@pytest.mark.parametrize("gate", [Rotation(2, "x-", 1.1), Rotation(3, "y", -0.3), CNOT(1, 2), CNOT(2, 3)])
def test_gate_matrices_unitary(gate):
    u = gate_matrix(gate)
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) < 1e-12


def test_gate_validation():
    with pytest.raises(ValueError):
        CNOT(2, 2)
    with pytest.raises(ValueError):
        Rotation(1, "w", 0.1)
    with pytest.raises(ValueError):
        Rotation(1, "x", float("inf"))
    with pytest.raises(ValueError):
        Circuit([CNOT(1, 4)])


def test_circuit_unitary_examples():
    assert np.allclose(circuit_unitary(Circuit([])), np.eye(8))
    assert np.allclose(circuit_unitary(Circuit([CNOT(3, 1), CNOT(3, 1)])), np.eye(8))
    cnn = parse_product("UCNN", macros=reference_data.GATE_MACROS)
    assert np.allclose(circuit_unitary(cnn) @ basis("111"), basis("111"))


def test_circuit_unitary_order():
    c = Circuit([Rotation(1, "x", 0.3), Rotation(1, "z", 0.8)])
    expected = gate_matrix(c.gates[1]) @ gate_matrix(c.gates[0])
    assert np.allclose(circuit_unitary(c), expected)


def test_run_circuit_matches_unitary(rng):
    gates = []
    for _ in range(30):
        if rng.random() < 0.4:
            c, t = rng.choice([1, 2, 3], size=2, replace=False)
            gates.append(CNOT(int(c), int(t)))
        else:
            gates.append(Rotation(int(rng.integers(1, 4)), str(rng.choice(["x", "y", "z", "y-"])), float(rng.normal())))
    circ = Circuit(gates)
    psi = oracles.random_pure_state(rng, 8)
    for conv in ALL_CONVENTIONS:
        assert np.allclose(run_circuit(circ, psi, conv), circuit_unitary(circ, conv) @ psi, atol=1e-12)


def test_phase_distance_examples(rng):
    u = oracles.haar_unitary(8, rng)
    assert phase_distance(u, u) < 1e-15
    assert phase_distance(u, np.exp(1j * np.pi / 3) * u) < 1e-12
    d = np.eye(8)
    d[7, 7] = -1
    assert abs(phase_distance(np.eye(8), d) - 0.25) < 1e-15


def test_parse_examples():
    c = parse_gate_list("R 1 y- 1.5708\nCNOT 3 1\n")
    assert c.gates == [Rotation(1, "y-", 1.5708), CNOT(3, 1)]


def test_parse_comments_and_blank_lines():
    c = parse_gate_list("# header\n\nR 2 z 0.5  # trailing\n")
    assert c.gates == [Rotation(2, "z", 0.5)]


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("R 1 y 0.1\nR 4 x 0.2\n", 2, 3),
        ("CNOT 1 1", 1, 8),
        ("R 1 w 0.1", 1, 5),
        ("R 1 x abc", 1, 7),
        ("SWAP 1 2", 1, 1),
        ("  CNOT 1", 1, 3),
        ("R 1 x nan", 1, 7),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_gate_list(text)
    assert info.value.line == line
    assert info.value.column == column


def test_serialize_roundtrip(rng):
    gates = [Rotation(int(rng.integers(1, 4)), "z-", round(float(rng.normal()), 6)) for _ in range(5)]
    gates += [CNOT(1, 3), CNOT(2, 1)]
    c = Circuit(gates)
    text = serialize_gate_list(c, header="demo\ncounts")
    assert text.startswith("# demo\n# counts\n")
    again = parse_gate_list(text)
    assert again.gates == c.gates
    assert serialize_gate_list(again, header="demo\ncounts") == text


def test_serialize_uses_six_decimals():
    assert serialize_gate_list(Circuit([Rotation(1, "x", math.pi)])) == "R 1 x 3.141593\n"


def test_parse_product_reverses_order():
    c = parse_product("1R_z-^theta3 . 1R_y-^theta2 . 1R_z-^theta1", {"theta1": 1.0, "theta2": 2.0, "theta3": 3.0})
    assert c.gates == [Rotation(1, "z-", 1.0), Rotation(1, "y-", 2.0), Rotation(1, "z-", 3.0)]


def test_parse_product_pi_expressions():
    c = parse_product("1R_x-^pi . 2R_z-^3pi/2 . 3R_y^pi/2 . 1R_x^0.25")
    assert [g.theta for g in c.gates] == pytest.approx([0.25, math.pi / 2, 1.5 * math.pi, math.pi])


def test_parse_product_rejects_junk():
    with pytest.raises(ParseError):
        parse_product("1R_q^pi")
    with pytest.raises(ParseError):
        parse_product("1R_x^theta9")


def test_mfgp_template_has_published_counts():
    c = parse_product(reference_data.MFGP_TEMPLATE, reference_data.mfgp_angle_map("A1"))
    assert len(c) == 27
    assert c.cnot_count == 9 and c.rotation_count == 18
    assert c.gates[0] == Rotation(3, "z-", 1.5708)
    assert c.gates[-1] == Rotation(1, "x-", 2.9373)


def test_published_a4_has_three_rotations():
    text, angles = reference_data.PHASE_DAMPING_GATE_STRINGS["A4"]
    c = parse_product(text, angles)
    assert c.counts() == {"cnot": 0, "rotation": 3, "total": 3}


def test_verify_reports_every_convention(rng):
    u = oracles.haar_unitary(8, rng)
    c = Circuit([Rotation(1, "x", 0.2)])
    report = verify_gate_list(c, u)
    assert set(report.distances) == {conv.id for conv in ALL_CONVENTIONS}
    assert report.best_distance == min(report.distances.values())
    assert set(report.as_dict()) == {"distances", "best_convention", "best_distance"}


def test_verify_published_a4():
    text, angles = reference_data.PHASE_DAMPING_GATE_STRINGS["A4"]
    report = verify_gate_list(parse_product(text, angles), dilate(reference_data.PHASE_DAMPING_KRAUS[3]).matrix)
    assert len(report.distances) == 4
    assert report.best_distance < 1e-6


def test_theta1_values_consistent():
    assert abs(reference_data.A1_THETA1_HALF_PI_FRACTION * math.pi / 2 - reference_data.A1_THETA1) < 1e-4
