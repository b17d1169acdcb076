"""Amplitude field containers shared by the massive, massless and quadrature code."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractViolation
from .spinors import TwoSpinor

MAX_RANK = 8
SYMMETRY_TOL = 1e-12


def energy_sign(value) -> int:
    """Normalize ``+``/``-``/``+1``/``-1`` to ``+1`` or ``-1``."""
    if value in ("+", "+1", 1, 1.0):
        return 1
    if value in ("-", "-1", -1, -1.0):
        return -1
    raise ContractViolation(f"energy sign must be + or -, got {value!r}")


def symmetry_residual(arr: np.ndarray, n: int) -> float:
    """Max deviation from total symmetry over the trailing ``n`` axes."""
    arr = np.asarray(arr)
    b = arr.ndim - n
    worst = 0.0
    for i, j in itertools.combinations(range(n), 2):
        worst = max(worst, float(np.max(np.abs(arr - np.swapaxes(arr, b + i, b + j)), initial=0.0)))
    return worst


def _probe_momentum(mass: float) -> np.ndarray:
    return np.array([mass, 0.0, 0.0, 0.0]) if mass > 0 else np.array([1.0, 0.0, 0.0, 1.0])


@dataclass(frozen=True, eq=False)
class AmplitudeField:
    """Map from on-shell momenta ``(..., 4)`` to rank-n BW component arrays ``(..., 2, ..., 2)``.

    The evaluator must be pure and vectorized over leading dimensions.  A
    symmetry check runs once at construction on a probe momentum; fields
    derived from an already checked one pass ``probe=False``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    mass: float
    n: int
    sign: int = 1
    nu: TwoSpinor = field(default_factory=lambda: TwoSpinor((1.0, 0.0)))
    probe: bool = field(default=True, repr=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_RANK:
            raise ContractViolation(f"spin count n must be in 1..{MAX_RANK}, got {self.n}")
        if self.mass < 0:
            raise ContractViolation("mass must be nonnegative")
        object.__setattr__(self, "sign", energy_sign(self.sign))
        if not isinstance(self.nu, TwoSpinor):
            object.__setattr__(self, "nu", TwoSpinor(self.nu))
        if not self.probe:
            return
        probe = self(_probe_momentum(self.mass))
        scale = max(1.0, float(np.max(np.abs(probe))))
        if symmetry_residual(probe, self.n) > SYMMETRY_TOL * scale:
            raise ContractViolation("amplitude array is not totally symmetric")

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        out = np.asarray(self.evaluator(p), dtype=complex)
        want = p.shape[:-1] + (2,) * self.n
        if out.shape != want:
            out = np.broadcast_to(out, want)
        return out


@dataclass(frozen=True, eq=False)
class MasslessField:
    """Scalar massless amplitude ``f(nu, n, p)^{0...0}`` (or ``^{1...1}``) on the forward cone.

    ``kind`` is ``"0"`` for n unprimed indices and ``"1"`` for n primed ones.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    n: int
    kind: str = "0"
    sign: int = 1
    nu: TwoSpinor = field(default_factory=lambda: TwoSpinor((0.0, 1.0)))
    n_vec: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))

    mass = 0.0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_RANK:
            raise ContractViolation(f"spin count n must be in 1..{MAX_RANK}, got {self.n}")
        if self.kind not in ("0", "1"):
            raise ContractViolation("kind must be '0' (unprimed) or '1' (primed)")
        object.__setattr__(self, "sign", energy_sign(self.sign))
        if not isinstance(self.nu, TwoSpinor):
            object.__setattr__(self, "nu", TwoSpinor(self.nu))
        object.__setattr__(self, "n_vec", np.asarray(self.n_vec, dtype=float))

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return np.broadcast_to(np.asarray(self.evaluator(p), dtype=complex), p.shape[:-1])
