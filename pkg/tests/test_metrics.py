"""Distinguishability measures and the fidelity formula."""

import math

import numpy as np
import pytest

from gatebounds import channels, metrics
from gatebounds.channels import Channel


def random_channel(rng, dim=2, kraus_count=2):
    big = rng.standard_normal((kraus_count * dim, dim)) + 1j * rng.standard_normal(
        (kraus_count * dim, dim)
    )
    q, _ = np.linalg.qr(big)
    return Channel([q[k * dim : (k + 1) * dim] for k in range(kraus_count)])


def random_density(rng, dim=2):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def haar_states(rng, count, dim):
    raw = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def test_total_variation_distance_values():
    assert metrics.total_variation_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
    assert metrics.total_variation_distance([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert metrics.total_variation_distance([0.7, 0.3], [0.4, 0.6]) == pytest.approx(0.3)


def test_total_variation_distance_validation():
    with pytest.raises(ValueError):
        metrics.total_variation_distance([0.5, 0.5], [1.0])
    with pytest.raises(ValueError):
        metrics.total_variation_distance([[0.5, 0.5]], [[0.5, 0.5]])


def test_trace_distance_known_values():
    pure = np.diag([1.0, 0.0])
    mixed = np.eye(2) / 2
    assert metrics.trace_distance(pure, mixed) == pytest.approx(0.5, abs=1e-12)
    assert metrics.trace_distance(pure, pure) == pytest.approx(0.0, abs=1e-12)


def test_trace_distance_validation():
    good = np.eye(2) / 2
    with pytest.raises(ValueError, match="unit trace"):
        metrics.trace_distance(np.eye(2), good)
    with pytest.raises(ValueError, match="not Hermitian"):
        metrics.trace_distance(np.array([[0.5, 0.5], [0.0, 0.5]]), good)
    with pytest.raises(ValueError, match="positive semidefinite"):
        metrics.trace_distance(np.diag([1.5, -0.5]), good)
    with pytest.raises(ValueError, match="dimension"):
        metrics.trace_distance(good, np.eye(3) / 3)


def test_trace_distance_dominates_projective_measurements():
    # any two-outcome projective measurement distinguishes no better than the
    # trace distance; for qubits the top eigenvector of rho - sigma attains it
    rng = np.random.default_rng(90)
    rho = random_density(rng)
    sigma = random_density(rng)
    td = metrics.trace_distance(rho, sigma)
    delta = rho - sigma
    w, v = np.linalg.eigh(delta)
    psis = np.vstack([haar_states(rng, 300, 2), v[:, np.argmax(w)].reshape(1, 2)])
    sampled = np.abs(np.einsum("ni,ij,nj->n", psis.conj(), delta, psis).real)
    assert sampled.max() <= td + 1e-12
    assert sampled.max() == pytest.approx(td, abs=1e-9)


def test_fidelity_of_identity():
    assert metrics.average_gate_fidelity(channels.identity_channel(2)) == pytest.approx(1.0)
    assert metrics.average_gate_fidelity(channels.identity_channel(5)) == pytest.approx(1.0)


@pytest.mark.parametrize("r", [0.0, 0.2, 1.0, 4.0 / 3.0])
def test_fidelity_of_depolarizing(r):
    got = metrics.average_gate_fidelity(channels.depolarizing(r))
    assert got == pytest.approx(1.0 - r / 2.0, abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, np.pi / 2])
def test_fidelity_of_unitary_error(theta):
    got = metrics.average_gate_fidelity(channels.unitary_error(theta))
    want = 1.0 / 3.0 + (2.0 / 3.0) * math.cos(theta) ** 2
    assert got == pytest.approx(want, abs=1e-12)


def test_fidelity_of_amplitude_damping():
    got = metrics.average_gate_fidelity(channels.amplitude_damping(0.5))
    want = (2.0 + (1.0 + math.sqrt(0.5)) ** 2) / 6.0
    assert got == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("dim,lam", [(2, 0.1), (4, 0.25)])
def test_fidelity_of_lambda_mixture_discrepancy(dim, lam):
    actual, ideal = channels.lambda_mixture(dim, lam)
    disc = channels.discrepancy(actual, ideal)
    want = 1.0 - 4.0 * (dim - 1) * lam / (dim * (dim + 1))
    assert metrics.average_gate_fidelity(disc) == pytest.approx(want, abs=1e-12)


def test_fidelity_matches_haar_average():
    """Nielsen's closed form against a direct 1e5-sample Haar estimate."""
    rng = np.random.default_rng(91)
    for _ in range(5):
        ch = random_channel(rng, kraus_count=2)
        closed = metrics.average_gate_fidelity(ch)
        psis = haar_states(rng, 100_000, 2)
        overlaps = np.zeros(len(psis))
        for a in ch.kraus:
            amp = np.einsum("ni,ij,nj->n", psis.conj(), a, psis)
            overlaps += np.abs(amp) ** 2
        err = overlaps.std(ddof=1) / math.sqrt(len(psis))
        assert abs(overlaps.mean() - closed) <= 3.0 * err


def test_inverse_infidelity():
    assert metrics.inverse_infidelity(0.75) == pytest.approx(4.0)
    assert metrics.inverse_infidelity(0.0) == pytest.approx(1.0)
    assert metrics.inverse_infidelity(1.0) is metrics.EXACT
    with pytest.raises(ValueError):
        metrics.inverse_infidelity(1.0 + 1e-12)
    with pytest.raises(ValueError):
        metrics.inverse_infidelity(-0.1)
