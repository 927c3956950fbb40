"""
Simulating a channel with one ancilla qubit
-------------------------------------------

Every Kraus operator is a contraction, so it sits in the top-left block of
an 8x8 unitary. Running ``|0>|phi>`` through that unitary and keeping the
top half of the output reproduces ``A |phi><phi| A^dag``; summing over
the Kraus set reproduces the channel.
"""

import numpy as np

from sznagy import reference_data
from sznagy.channels import kraus_apply
from sznagy.dilation import dilate, simulate_channel_via_dilation, simulate_kraus_via_dilation

kraus = reference_data.mfgp_kraus().renormalized()
u = dilate(kraus[0])
print("unitarity defect:", u.unitarity_defect())
print("top-left block is the Kraus operator:", np.array_equal(u.block, kraus[0]))

phi = np.array([1, 1j, 0, 1]) / np.sqrt(3)
outcome = simulate_kraus_via_dilation(u, phi)
print("weight of the first branch:", round(outcome.weight, 6))

# a mixed input is handled through its eigen-ensemble
rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
rho[0, 1] = rho[1, 0] = 0.1
via_dilation = simulate_channel_via_dilation(kraus, rho)
print("max deviation from operator sum:", np.max(np.abs(via_dilation - kraus_apply(kraus, rho))))
