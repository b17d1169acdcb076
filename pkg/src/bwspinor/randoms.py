"""Random inputs for the property suites.

Every generator takes a ``numpy.random.Generator`` and a batch size so the
suites can draw 1e5 instances in one vectorized call.
"""
from __future__ import annotations

import numpy as np

from .spinors import SL2C, TwoSpinor


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator seeded through ``SeedSequence`` (an int or a ready ``SeedSequence``)."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit complex Gaussian: E|z|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_spinors(rng, size, index: str = "upper") -> TwoSpinor:
    return TwoSpinor(complex_gaussian(rng, (size, 2)), index)


def expm_traceless(x: np.ndarray) -> np.ndarray:
    """Exponential of traceless 2x2 matrices via ``X^2 = -det(X) I``."""
    lam = np.sqrt(-(x[..., 0, 0] * x[..., 1, 1] - x[..., 0, 1] * x[..., 1, 0]) + 0j)
    small = np.abs(lam) < 1e-8
    safe = np.where(small, 1.0, lam)
    sinhc = np.where(small, 1.0 + lam**2 / 6.0, np.sinh(safe) / safe)
    out = sinhc[..., None, None] * x
    out[..., 0, 0] += np.cosh(lam)
    out[..., 1, 1] += np.cosh(lam)
    return out


def random_sl2c(rng, size, max_norm: float = 2.0) -> SL2C:
    """``exp(X)`` with X traceless and Frobenius norm uniform in [0, max_norm]."""
    x = complex_gaussian(rng, (size, 2, 2))
    tr = 0.5 * (x[:, 0, 0] + x[:, 1, 1])
    x[:, 0, 0] -= tr
    x[:, 1, 1] -= tr
    x *= (max_norm * rng.random(size) / np.linalg.norm(x, axis=(1, 2)))[:, None, None]
    return SL2C(expm_traceless(x))


def random_directions(rng, size) -> np.ndarray:
    v = rng.standard_normal((size, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_massive_momenta(rng, size, mass, max_rapidity: float = 5.0) -> np.ndarray:
    """On-shell momenta ``m (cosh chi, sinh chi n)`` with ``chi`` uniform in [0, max]."""
    chi = max_rapidity * rng.random(size)
    mass = np.broadcast_to(np.asarray(mass, dtype=float), (size,))
    p = np.empty((size, 4))
    p[:, 0] = mass * np.cosh(chi)
    p[:, 1:] = (mass * np.sinh(chi))[:, None] * random_directions(rng, size)
    return p


def random_null_momenta(rng, size, max_rapidity: float = 5.0) -> np.ndarray:
    """Null future momenta with energy ``exp(u)``, ``u`` uniform in [-max, max]."""
    energy = np.exp(max_rapidity * (2.0 * rng.random(size) - 1.0))
    p = np.empty((size, 4))
    p[:, 0] = energy
    p[:, 1:] = energy[:, None] * random_directions(rng, size)
    return p


def random_timelike_directions(rng, size, max_rapidity: float = 2.0) -> np.ndarray:
    """Unit timelike future vectors used as the auxiliary ``n``."""
    return random_massive_momenta(rng, size, 1.0, max_rapidity)
