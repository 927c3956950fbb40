import numpy as np
import pytest

import oracles
from sznagy import reference_data
from sznagy.channels import KrausSet, dephasing_generator, evolve_superop, kraus_apply
from sznagy.dilation import (
    dilate,
    dilate_all,
    embed_state,
    project_system,
    pure_decomposition,
    simulate_channel_via_dilation,
    simulate_kraus_via_dilation,
    unitarity_defect,
)
from sznagy.errors import IncompleteSet, NotContraction, NotNormalized
from sznagy.tomography import input_basis

PLUS = np.array([1, 1]) / np.sqrt(2)


def test_dilate_identity():
    u = dilate(np.eye(4)).matrix
    assert np.allclose(u, np.block([[np.eye(4), np.zeros((4, 4))], [np.zeros((4, 4)), -np.eye(4)]]))


def test_dilate_zero():
    u = dilate(np.zeros((4, 4))).matrix
    assert np.allclose(u, np.block([[np.zeros((4, 4)), np.eye(4)], [np.eye(4), np.zeros((4, 4))]]))


def test_dilate_scalar_kraus():
    a4 = reference_data.PHASE_DAMPING_KRAUS[3]
    u = dilate(a4)
    assert np.allclose(u.matrix[4:, :4], 0.8495 * np.eye(4), atol=1e-3)
    assert np.allclose(u.matrix[:4, 4:], 0.8495 * np.eye(4), atol=1e-3)
    assert u.unitarity_defect() <= 1e-10


def test_dilation_block_structure(rng):
    a = oracles.random_contraction(rng)
    u = dilate(a, kraus_index=2)
    assert u.kraus_index == 2 and u.source_dim == 4
    assert np.array_equal(u.block, a)
    assert np.allclose(u.matrix[4:, 4:], -a.conj().T)
    assert u.unitarity_defect() <= 1e-10


def test_dilate_rejects_expanding_operator():
    with pytest.raises(NotContraction, match="exceeds 1"):
        dilate(1.01 * np.eye(4))


def test_dilate_rescales_marginal_norm():
    with pytest.warns(UserWarning):
        u = dilate((1 + 5e-10) * np.eye(4))
    assert u.unitarity_defect() <= 1e-10


def test_embed_state_examples():
    e = np.eye(4)
    assert np.array_equal(embed_state(e[0]), np.eye(8)[0])
    assert np.array_equal(embed_state(e[3]), np.eye(8)[3])
    bell = (e[0] + e[3]) / np.sqrt(2)
    assert np.allclose(embed_state(bell), (np.eye(8)[0] + np.eye(8)[3]) / np.sqrt(2))


def test_embed_state_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        embed_state(np.array([1.0, 1.0, 0, 0]))


def test_project_identity_dilation(rng):
    phi = oracles.random_pure_state(rng)
    out = simulate_kraus_via_dilation(dilate(np.eye(4)), phi)
    assert np.allclose(out.block, np.outer(phi, phi.conj()))
    assert abs(out.weight - 1) < 1e-12


def test_project_published_a1_on_00():
    u = dilate(reference_data.PHASE_DAMPING_KRAUS[0])
    out = simulate_kraus_via_dilation(u, np.eye(4)[0])
    expected = np.zeros((4, 4))
    expected[0, 0] = 0.4723**2
    assert np.allclose(out.block, expected, atol=1e-12)
    assert abs(out.weight - 0.2231) < 1e-3


def test_project_published_a1_on_0plus():
    u = dilate(reference_data.PHASE_DAMPING_KRAUS[0])
    out = simulate_kraus_via_dilation(u, np.kron([1, 0], PLUS))
    assert abs(out.weight - 0.2231) < 1e-3
    # diag(-, +, +, -) flips the sign of the |00><01| coherence
    assert out.block[0, 1].real < 0
    assert abs(out.block[0, 1] + 0.4723**2 / 2) < 1e-12


def test_dilation_exact_on_random_contractions(rng):
    for _ in range(200):
        a = oracles.random_contraction(rng)
        u = dilate(a)
        assert u.unitarity_defect() <= 1e-10
        for _ in range(20):
            phi = oracles.random_pure_state(rng)
            direct = a @ np.outer(phi, phi.conj()) @ a.conj().T
            assert np.max(np.abs(simulate_kraus_via_dilation(u, phi).block - direct)) <= 1e-10


def test_weights_sum_to_one(dephasing_params, mfgp_renormalized):
    for kraus in (reference_data.phase_damping_kraus().renormalized(), mfgp_renormalized):
        unitaries = dilate_all(kraus)
        for ket in input_basis().kets:
            total = sum(simulate_kraus_via_dilation(u, ket).weight for u in unitaries)
            assert abs(total - 1) < 1e-8


def test_pure_decomposition_of_mixed_state():
    rho = np.diag([0.5, 0.5, 0, 0]).astype(complex)
    parts = pure_decomposition(rho)
    assert len(parts) == 2
    assert np.allclose(sum(p * np.outer(v, v.conj()) for p, v in parts), rho)


def test_channel_identity(rng):
    psi = oracles.random_pure_state(rng)
    rho = np.outer(psi, psi.conj())
    assert np.allclose(simulate_channel_via_dilation(KrausSet((np.eye(4),)), rho), rho)


def test_channel_published_set_matches_evolution(dephasing_params):
    rho = np.outer(np.kron(PLUS, PLUS), np.kron(PLUS, PLUS))
    expected = evolve_superop(dephasing_generator(dephasing_params), 2.0, rho)
    out = simulate_channel_via_dilation(reference_data.phase_damping_kraus(), rho)
    assert np.allclose(out, expected, atol=1e-3)
    assert abs(out[0, 3] - np.exp(-5.8) / 4) < 1e-3


def test_channel_fixes_maximally_mixed():
    out = simulate_channel_via_dilation(reference_data.phase_damping_kraus(), np.eye(4) / 4)
    assert np.allclose(out, np.eye(4) / 4, atol=1e-3)


def test_channel_matches_kraus_apply_on_mixed_states(rng):
    kraus = KrausSet(tuple(oracles.random_kraus(rng)))
    for _ in range(10):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho)
        assert np.max(np.abs(simulate_channel_via_dilation(kraus, rho) - kraus_apply(kraus, rho))) <= 1e-10


def test_channel_equivalence_on_basis(mfgp_renormalized):
    cases = ((KrausSet(tuple(oracles.tensor_dephasing_kraus(1.4, 1.5, 2.0))), 1e-8), (mfgp_renormalized, 1e-3))
    for kraus, tol in cases:
        for rho in input_basis().states:
            assert np.max(np.abs(simulate_channel_via_dilation(kraus, rho) - kraus_apply(kraus, rho))) <= tol


def test_channel_with_custom_runner(rng):
    kraus = KrausSet(tuple(oracles.random_kraus(rng)))
    unitaries = dilate_all(kraus)
    calls = []

    def runner(i, state):
        calls.append(i)
        return unitaries[i].matrix @ state

    rho = np.diag([1.0, 0, 0, 0]).astype(complex)
    out = simulate_channel_via_dilation(kraus, rho, unitaries, runner)
    assert calls == [0, 1, 2]
    assert np.allclose(out, kraus_apply(kraus, rho))


def test_channel_rejects_incomplete_set():
    with pytest.raises(IncompleteSet):
        simulate_channel_via_dilation(KrausSet((0.5 * np.eye(4),)), np.eye(4) / 4)


def test_unitarity_defect_helper(rng):
    assert unitarity_defect(oracles.haar_unitary(8, rng)) < 1e-12
    assert unitarity_defect(2 * np.eye(2)) > 1
    assert project_system(np.eye(8)[5]).weight == 0
