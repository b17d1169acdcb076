"""Monte Carlo integration over mass hyperboloids and the forward light cone.

The invariant measure is ``d mu_m(p) = C d^3p / (2 p^0)`` with the global
constant ``C = MEASURE_NORMALIZATION`` (default 1).  Samples come from an
isotropic Gaussian proposal in 3-momentum; each carries the importance
weight ``C / (q(p) 2 p^0)``.

Random streams use numpy's PCG64 seeded through ``SeedSequence(seed)``;
substreams for parallel workers use ``SeedSequence(seed, spawn_key=(i,))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, IntegrationError, InvalidMomentum
from .fields import AmplitudeField, MasslessField
from .frames import DEGENERACY_THRESHOLD, reference_radicand
from .spinors import TwoSpinor, apply_lorentz, minkowski_dot, vector_to_matrix

MEASURE_NORMALIZATION = 1.0
RNG_ALGORITHM = "PCG64"
DEFAULT_CHUNK = 1 << 16


@dataclass
class HyperboloidSampler:
    """Importance sampler for ``d mu_m`` on the shell ``p.p = m^2``, ``p^0 > 0``.

    Momenta with rapidity above ``max_rapidity`` (m > 0) or with
    ``|p| < min_momentum`` (m = 0) get weight zero and are counted in
    ``excluded``.  When ``nu`` is given on the cone, draws where
    ``p^{AA'} conj(nu)_A'`` degenerates are redrawn and counted in ``rejected``.
    """

    mass: float
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    width: float | None = None
    max_rapidity: float = 8.0
    seed: int = 0
    stream: int | None = None
    nu: TwoSpinor | None = None
    min_momentum: float | None = None
    normalization: float = MEASURE_NORMALIZATION
    drawn: int = 0
    rejected: int = 0
    excluded: int = 0

    def __post_init__(self):
        if self.mass < 0:
            raise ContractViolation("sampler mass must be nonnegative")
        self.center = np.asarray(self.center, dtype=float).reshape(3)
        if self.width is None:
            self.width = max(self.mass, float(np.linalg.norm(self.center))) or 1.0
        if self.width <= 0:
            raise ContractViolation("proposal width must be positive")
        if self.min_momentum is None:
            self.min_momentum = 1e-8 * self.width
        if self.nu is not None and not isinstance(self.nu, TwoSpinor):
            self.nu = TwoSpinor(self.nu)
        key = () if self.stream is None else (self.stream,)
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=key)))

    def spawn(self, count: int) -> list["HyperboloidSampler"]:
        """Independent, deterministically derived substreams with the same proposal."""
        return [
            HyperboloidSampler(
                self.mass, self.center, self.width, self.max_rapidity, self.seed, i, self.nu,
                self.min_momentum, self.normalization,
            )
            for i in range(count)
        ]

    def proposal_density(self, k: np.ndarray) -> np.ndarray:
        r2 = np.sum((k - self.center) ** 2, axis=-1)
        return np.exp(-0.5 * r2 / self.width**2) / (2 * np.pi * self.width**2) ** 1.5

    def _draw(self, count):
        return self.center + self.width * self._rng.standard_normal((count, 3))

    def sample(self, count: int):
        """Return ``(p, w)`` with ``p`` of shape ``(count, 4)`` and weights ``(count,)``."""
        if count < 1:
            raise ContractViolation("sample count must be >= 1")
        k = self._draw(count)
        if self.mass == 0 and self.nu is not None:
            while True:
                bad = self._degenerate(k)
                nbad = int(np.count_nonzero(bad))
                if nbad == 0:
                    break
                self.rejected += nbad
                k[bad] = self._draw(nbad)
        self.drawn += count
        kn = np.linalg.norm(k, axis=-1)
        p = np.empty((count, 4))
        p[:, 0] = np.hypot(self.mass, kn)
        p[:, 1:] = k
        if self.mass > 0:
            keep = np.arcsinh(kn / self.mass) <= self.max_rapidity
        else:
            keep = kn >= self.min_momentum
        self.excluded += int(count - np.count_nonzero(keep))
        with np.errstate(divide="ignore", over="ignore"):
            w = self.normalization / (self.proposal_density(k) * 2.0 * p[:, 0])
        w = np.where(keep, w, 0.0)
        return p, w

    def _degenerate(self, k):
        p = np.empty((len(k), 4))
        p[:, 0] = np.linalg.norm(k, axis=-1)
        p[:, 1:] = k
        nu = self.nu.components
        rad = reference_radicand(nu, vector_to_matrix(p))
        return rad < DEGENERACY_THRESHOLD * np.linalg.norm(p, axis=-1) * np.sum(np.abs(nu) ** 2)

    def describe(self) -> dict:
        return {
            "rng": RNG_ALGORITHM,
            "seed": self.seed,
            "stream": self.stream,
            "mass": self.mass,
            "width": self.width,
            "drawn": self.drawn,
            "rejected": self.rejected,
            "excluded": self.excluded,
        }


def transport(samples, lam: np.ndarray):
    """Push ``(p, w)`` forward by a Lorentz matrix; weights are unchanged because d mu_m is invariant."""
    p, w = samples
    return apply_lorentz(lam, p), w


class _Moments:
    """Count, mean and sum of squared deviations; merges associatively."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, x: np.ndarray):
        nb = x.size
        if nb == 0:
            return
        mb = x.mean()
        m2b = float(np.sum(np.abs(x - mb) ** 2))
        n = self.n + nb
        delta = mb - self.mean
        self.mean = self.mean + delta * nb / n
        self.m2 = self.m2 + m2b + abs(delta) ** 2 * self.n * nb / n
        self.n = n

    def result(self):
        if self.n < 2:
            return self.mean, float("nan")
        return self.mean, float(np.sqrt(self.m2 / (self.n - 1) / self.n))


def _evaluate(pairing, p):
    try:
        vals = np.asarray(pairing(p))
    except Exception as exc:  # locate the first momentum that fails
        for row in p:
            try:
                pairing(row[None, :])
            except Exception:
                raise IntegrationError(f"integrand failed at p={row.tolist()}: {exc}", row) from exc
        raise IntegrationError(f"integrand failed on a batch: {exc}") from exc
    if vals.shape != p.shape[:-1]:
        raise IntegrationError(f"integrand returned shape {vals.shape}, expected {p.shape[:-1]}")
    bad = ~np.isfinite(vals)
    if np.any(bad):
        row = p[np.argmax(bad)]
        raise IntegrationError(f"integrand not finite at p={row.tolist()}", row)
    return vals


def integrate_samples(pairing, samples):
    """Weighted mean and standard error over a fixed sample set."""
    p, w = samples
    acc = _Moments()
    acc.add(w * _evaluate(pairing, p))
    value, err = acc.result()
    return _real(value), err


def integrate(pairing, sampler: HyperboloidSampler, count: int, chunk: int = DEFAULT_CHUNK):
    """Estimate ``int d mu_m pairing(p)`` from ``count`` fresh samples; returns ``(value, stderr)``."""
    acc = _Moments()
    left = int(count)
    while left > 0:
        c = min(chunk, left)
        p, w = sampler.sample(c)
        acc.add(w * _evaluate(pairing, p))
        left -= c
    value, err = acc.result()
    return _real(value), err


def _real(value):
    value = complex(value)
    return value.real if value.imag == 0 else value


@dataclass(frozen=True, eq=False)
class Wavepacket:
    """Gaussian packet ``exp(-|k - k0|^2 / 2 width^2) * profile`` centred on an on-shell momentum."""

    center: np.ndarray
    width: float
    profile: np.ndarray

    def __post_init__(self):
        if not self.width > 0:
            raise ContractViolation("wavepacket width must be positive")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(4))
        object.__setattr__(self, "profile", np.asarray(self.profile, dtype=complex))

    @property
    def n(self) -> int:
        return self.profile.ndim

    def envelope(self, p: np.ndarray) -> np.ndarray:
        r2 = np.sum((np.asarray(p, dtype=float)[..., 1:] - self.center[1:]) ** 2, axis=-1)
        return np.exp(-0.5 * r2 / self.width**2)

    def sampler(self, mass: float, seed: int = 0, **kwargs) -> HyperboloidSampler:
        """Proposal centred on the packet, wide enough for finite variance of ``|f|^2``."""
        k0 = self.center[1:]
        width = max(mass, float(np.linalg.norm(k0)), self.width)
        return HyperboloidSampler(mass, k0, width, seed=seed, **kwargs)


def _require_on_shell(p0, mass):
    sq = minkowski_dot(p0, p0)
    if p0[0] <= 0 or abs(sq - mass**2) > 1e-10 * max(1.0, float(np.sum(p0 * p0))):
        raise InvalidMomentum("wavepacket centre must be on the mass shell")


def make_gaussian_field(wp: Wavepacket, mass: float, n: int | None = None, energy_sign=1, nu=(1.0, 0.0)) -> AmplitudeField:
    """Massive (or embedded massless) rank-n field with a Gaussian envelope."""
    n = wp.n if n is None else n
    if wp.profile.shape != (2,) * n:
        raise ContractViolation(f"profile shape {wp.profile.shape} does not match rank {n}")
    _require_on_shell(wp.center, mass)
    profile = wp.profile

    def evaluator(p):
        env = wp.envelope(p)
        return env.reshape(env.shape + (1,) * n) * profile

    return AmplitudeField(evaluator, mass, n, energy_sign, TwoSpinor(nu))


def make_massless_gaussian(wp: Wavepacket, n: int = 1, kind: str = "0", energy_sign=1, nu=(0.0, 1.0), n_vec=(1.0, 0.0, 0.0, 0.0)) -> MasslessField:
    """Scalar cone amplitude with a Gaussian envelope; ``wp.profile`` must be a scalar."""
    if wp.profile.ndim != 0:
        raise ContractViolation("massless profile must be a scalar")
    _require_on_shell(wp.center, 0.0)
    value = complex(wp.profile)

    def evaluator(p):
        return wp.envelope(p) * value

    return MasslessField(evaluator, n, kind, energy_sign, TwoSpinor(nu), np.asarray(n_vec, dtype=float))
