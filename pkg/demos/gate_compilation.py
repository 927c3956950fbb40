"""
Compiling dilations to CNOTs and rotations
------------------------------------------

Each dilation unitary is compiled into CNOT gates and single-qubit
rotations, written out in the one-gate-per-line text format, and
checked against the published gate lists under every rotation
convention.
"""

from sznagy import reference_data
from sznagy.decompose import decompose_unitary, roundtrip_distance
from sznagy.dilation import dilate
from sznagy.gates import parse_product, serialize_gate_list, verify_gate_list

pd = reference_data.phase_damping_kraus()
for i, a in enumerate(pd):
    u = dilate(a).matrix
    circuit = decompose_unitary(u)
    print(f"U{i + 1}: {circuit.counts()}, round-trip distance {roundtrip_distance(u, circuit):.1e}")

print(serialize_gate_list(decompose_unitary(dilate(pd[3]).matrix), header="scalar Kraus operator"))

# published lists are written right to left; the parser reverses them
text, angles = reference_data.PHASE_DAMPING_GATE_STRINGS["A1"]
published = parse_product(text, angles, reference_data.GATE_MACROS)
report = verify_gate_list(published, dilate(pd[0]).matrix)
for conv, dist in report.distances.items():
    print(f"{conv:>13}: {dist:.3e}")
print("closest convention:", report.best_convention)
