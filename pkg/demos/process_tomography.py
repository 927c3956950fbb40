"""
Tomography with noisy outputs
-----------------------------

Linear inversion recovers chi exactly from clean data but returns an
unphysical estimate once the output states carry measurement noise. The
constrained estimator keeps chi positive and trace preserving.
"""

import numpy as np

from sznagy.channels import DephasingParams, dephasing_generator, evolve_superop, process_fidelity
from sznagy.experiments import dephasing_channel
from sznagy.tomography import TomographyRecord, add_measurement_noise, cptp_project_qpt, input_basis, linear_inversion_qpt

params = DephasingParams(1.4, 1.5, 2.0)
truth = dephasing_channel(params)["chi"]
z = dephasing_generator(params)
states = list(input_basis().states)
clean = [evolve_superop(z, params.t, rho) for rho in states]

noisy = [add_measurement_noise(o, 0.01, [42, k]) for k, o in enumerate(clean)]
record = TomographyRecord(states, noisy, 0.01, 42)

for name, estimate in (("linear", linear_inversion_qpt(record)), ("cptp", cptp_project_qpt(record))):
    low = np.linalg.eigvalsh(estimate.matrix)[0]
    print(f"{name:>6}: min eigenvalue {low:+.2e}, TP defect {estimate.tp_defect():.1e}, "
          f"fidelity {process_fidelity(estimate, truth):.4f}")
