"""Shared helpers for the test suite."""

import numpy as np

from combmemory import SqueezingSpectrum, apply_mode_unitary, squeezed_vacuum


def random_unitary(M, rng):
    if M == 1:  # QR phase convention degenerates for 1x1
        return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)) * np.eye(1)
    Z = rng.normal(size=(M, M)) + 1j * rng.normal(size=(M, M))
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph[None, :]


def random_pure_state(M, rng, r_max=1.5):
    """Random pure M-mode Gaussian state: squeezed vacua under a random mixer."""
    zetas = np.exp(-2.0 * rng.uniform(0.0, r_max, size=M))
    angles = rng.uniform(0.0, np.pi, size=M)
    C = squeezed_vacuum(SqueezingSpectrum(zetas), angles=angles)
    return apply_mode_unitary(C, random_unitary(M, rng))
