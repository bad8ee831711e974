"""Distinguishability measures and the average gate fidelity."""

import numpy as np

from . import linalg

DENSITY_TOL = 1e-9

# Sentinel for quantities of the form 1/(1 - x) at x = 1.  Reports carry it
# through instead of an infinity.
EXACT = "exact"


def total_variation_distance(mu, nu):
    """Half the l1 distance between two probability vectors."""
    p = np.asarray(mu, dtype=float)
    q = np.asarray(nu, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError(f"distributions must be equal-length vectors, got {p.shape} and {q.shape}")
    return float(0.5 * np.abs(p - q).sum())


def _check_density(rho, name, tol):
    a = linalg.as_complex_matrix(rho, name)
    if not linalg.is_hermitian(a, tol):
        raise ValueError(f"{name} is not Hermitian")
    if abs(a.trace().real - 1.0) > tol or abs(a.trace().imag) > tol:
        raise ValueError(f"{name} does not have unit trace")
    if linalg.min_hermitian_eigenvalue(a, tol) < -tol:
        raise ValueError(f"{name} is not positive semidefinite")
    return a


def trace_distance(rho, sigma, tol=DENSITY_TOL):
    """Half the trace norm of the difference of two density matrices."""
    a = _check_density(rho, "rho", tol)
    b = _check_density(sigma, "sigma", tol)
    if a.shape != b.shape:
        raise ValueError("density matrices differ in dimension")
    return 0.5 * linalg.trace_norm(a - b, tol)


def average_gate_fidelity(channel):
    """Average fidelity of a channel to the identity.

    Evaluated in closed form from the Kraus traces,
    (d + sum_k |tr A_k|^2) / (d + d^2), which equals the Haar average of
    <psi| E(|psi><psi|) |psi>.
    """
    d = channel.dim
    total = sum(abs(np.trace(a)) ** 2 for a in channel.kraus)
    return float((d + total) / (d + d * d))


def inverse_infidelity(fidelity):
    """1/(1 - fidelity); the sentinel ``EXACT`` when fidelity is exactly 1."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {fidelity!r}")
    if fidelity == 1.0:
        return EXACT
    return 1.0 / (1.0 - fidelity)
