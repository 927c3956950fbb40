"""
Two-qubit dephasing: from generator to Kraus operators
------------------------------------------------------

Independent phase damping on two qubits is a diagonal generator on the
vectorized density matrix. Exponentiating it gives the channel; process
tomography on 16 input states gives its chi matrix, and diagonalizing chi
gives a canonical Kraus set.
"""

import numpy as np

from sznagy.channels import DephasingParams, dephasing_generator, evolve_superop, kraus_apply
from sznagy.experiments import dephasing_channel
from sznagy.linalg import eig_hermitian

params = DephasingParams(gamma1=1.4, gamma2=1.5, t=2.0)
z = dephasing_generator(params)
print("generator diagonal:", np.diag(z.matrix).real)

# |++><++| loses its coherences at the combined rate
plus = np.full(4, 0.5)
rho = np.outer(plus, plus)
out = evolve_superop(z, params.t, rho)
print("corner coherence:", out[0, 3].real, "expected", np.exp(-5.8) / 4)

ch = dephasing_channel(params)
values = eig_hermitian(ch["chi"].matrix).values
print("chi eigenvalues:", np.round(values[:6], 4))

# four diagonal Kraus operators, one per nonzero eigenvalue
for i, a in enumerate(ch["kraus"]):
    print(f"A{i + 1} diagonal:", np.round(np.diag(a), 4))

print("operator-sum matches evolution:", np.allclose(kraus_apply(ch["kraus"], rho), out))
