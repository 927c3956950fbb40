import numpy as np

import oracles


def test_frozen_chi_diagonal_matches_closed_form():
    p1 = oracles.dephasing_weight(1.4, 2.0)
    p2 = oracles.dephasing_weight(1.5, 2.0)
    expected = {0: p1 * p2, 3: p1 * (1 - p2), 12: (1 - p1) * p2, 15: (1 - p1) * (1 - p2)}
    for k, v in expected.items():
        assert abs(oracles.DEPHASING_CHI_DIAGONAL[k] - v) < 1e-15


def test_frozen_kraus_norms_are_square_roots():
    values = [oracles.DEPHASING_CHI_DIAGONAL[k] for k in (0, 3, 12, 15)]
    assert np.allclose(oracles.DEPHASING_KRAUS_NORMS, np.sqrt(values), atol=1e-15)


def test_oracle_chi_is_diagonal_with_unit_trace():
    chi = oracles.chi_from_kraus(oracles.tensor_dephasing_kraus(1.4, 1.5, 2.0))
    off = chi - np.diag(np.diag(chi))
    assert np.max(np.abs(off)) < 1e-15
    assert abs(np.trace(chi) - 1) < 1e-14


def test_oracle_channel_matches_elementwise_decay(rng):
    kraus = oracles.tensor_dephasing_kraus(1.4, 1.5, 2.0)
    psi = oracles.random_pure_state(rng)
    rho = np.outer(psi, psi.conj())
    assert np.allclose(oracles.apply_kraus(kraus, rho), oracles.dephase_elementwise(rho, 1.4, 1.5, 2.0), atol=1e-14)


def test_frozen_values_agree_with_published_magnitudes():
    # rounded table entries: 0.5276, 0.5019, 0.4964, 0.4723
    assert np.allclose(oracles.DEPHASING_KRAUS_NORMS, [0.5276, 0.5019, 0.4964, 0.4723], atol=1e-3)
