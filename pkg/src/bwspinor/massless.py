"""Massless fields: one scalar amplitude per momentum and a unitary phase law.

For a field with n unprimed indices the spinor-valued field is
``psi_{A1..An}(p) = pi_A1(nu, p) ... pi_An(nu, p) f(p)`` and an active
SL(2,C) transformation acts on the amplitude as::

    (U(S) f)(p) = Z(S, nu, p) f(L^-1 p),
    Z = [p^{AA'} nu_A conj(S nu)_A' / |p^{CC'} nu_C conj(S nu)_C'|]^n

Primed fields (kind ``"1"``) pick up the complex-conjugate phase.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DegenerateConfiguration, SamplerMismatch, SpinorError
from .fields import MasslessField, energy_sign
from .frames import DEGENERACY_THRESHOLD, _require_null, as_upper, massless_pi, massless_spin_frame, reference_radicand
from .quadrature import HyperboloidSampler, integrate
from .spinors import (
    SL2C,
    TwoSpinor,
    apply_lorentz,
    inverse_lorentz,
    lower_array,
    matvec,
    pair_array,
    sl2c_to_lorentz,
    vector_to_matrix,
)

# the two expressions for the phase must agree at least this well
FORM_CHECK_TOL = 1e-9


def _kind(kind) -> str:
    kind = str(kind)
    if kind not in ("0", "1"):
        raise ContractViolation("kind must be '0' (unprimed) or '1' (primed)")
    return kind


@dataclass(frozen=True, eq=False)
class MasslessAmplitude:
    """The single amplitude ``f^{0..0}`` (kind ``"0"``) or ``f^{1..1}`` (kind ``"1"``) at null p."""

    value: np.ndarray
    n: int
    at: np.ndarray
    kind: str = "0"
    sign: int = 1
    nu: TwoSpinor = field(default_factory=lambda: TwoSpinor((0.0, 1.0)))
    n_vec: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))

    def __post_init__(self):
        value = np.asarray(self.value, dtype=complex)
        if not np.all(np.isfinite(value)):
            raise ContractViolation("amplitude must be finite")
        if self.n < 1:
            raise ContractViolation("index count n must be positive")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "at", _require_null(self.at))
        object.__setattr__(self, "kind", _kind(self.kind))
        object.__setattr__(self, "sign", energy_sign(self.sign))
        object.__setattr__(self, "nu", as_upper(self.nu))
        object.__setattr__(self, "n_vec", np.asarray(self.n_vec, dtype=float))


def _outer_power(v: np.ndarray, n: int) -> np.ndarray:
    out = v
    for _ in range(n - 1):
        out = out[..., None] * v.reshape(v.shape[:-1] + (1,) * (out.ndim - v.ndim + 1) + (2,))
    return out


def build_massless_field(f: MasslessAmplitude) -> np.ndarray:
    """``pi_A1 ... pi_An f`` (lower indices; conj(pi) for primed fields), shape ``batch + (2,)*n``."""
    pi_low = lower_array(massless_pi(f.nu, f.at).components)
    if f.kind == "1":
        pi_low = np.conj(pi_low)
    arr = _outer_power(pi_low, f.n)
    return arr * f.value.reshape(f.value.shape + (1,) * f.n)


def embed_amplitude(f: MasslessAmplitude) -> np.ndarray:
    """BW component array with ``f`` in the 0..0 (or 1..1) slot and zeros elsewhere."""
    out = np.zeros(f.value.shape + (2,) * f.n, dtype=complex)
    slot = (1 if f.kind == "1" else 0,) * f.n
    out[(...,) + slot] = f.value
    return out


def _moved_reference(s: SL2C, nu: TwoSpinor) -> TwoSpinor:
    return TwoSpinor(matvec(s.upper_action, nu.components))


def _require_admissible(nu: TwoSpinor, s_nu: TwoSpinor, p: np.ndarray):
    pmat = vector_to_matrix(p)
    pn = np.linalg.norm(p, axis=-1)
    for ref in (nu, s_nu):
        scale = pn * np.sum(np.abs(ref.components) ** 2, axis=-1)
        rad = reference_radicand(ref.components, pmat)
        bad = ~(rad >= DEGENERACY_THRESHOLD * scale) | (scale == 0)
        if np.any(bad):
            raise DegenerateConfiguration(
                f"phase denominator vanishes at {int(np.count_nonzero(bad))} momentum(s): "
                "nu or S nu is aligned with the flagpole of p"
            )


def phase_ratio_form(s: SL2C, nu, p) -> np.ndarray:
    """Single-index phase from the explicit ratio ``b / |b|``, ``b = p^{AA'} nu_A conj(S nu)_A'``."""
    nu = as_upper(nu)
    p = _require_null(p)
    s_nu = _moved_reference(s, nu)
    _require_admissible(nu, s_nu, p)
    b = np.einsum(
        "...a,...ab,...b->...",
        lower_array(nu.components),
        vector_to_matrix(p),
        np.conj(lower_array(s_nu.components)),
    )
    return b / np.abs(b)


def phase_frame_form(s: SL2C, nu, p, n_vec=(1.0, 0.0, 0.0, 0.0)) -> np.ndarray:
    """Single-index phase as the contraction ``omega^A(nu, n, p) pi_A(S nu, p)``."""
    nu = as_upper(nu)
    p = _require_null(p)
    s_nu = _moved_reference(s, nu)
    _require_admissible(nu, s_nu, p)
    ref = massless_spin_frame(nu, p, np.broadcast_to(np.asarray(n_vec, dtype=float), p.shape))
    moved = massless_pi(s_nu, p)
    return pair_array(ref.omega.components, lower_array(moved.components))


def massless_phase_factor(s: SL2C, nu, p, n: int, kind="0", n_vec=(1.0, 0.0, 0.0, 0.0)) -> np.ndarray:
    """``Z(S, nu, p)`` for an n-index field; both expressions are evaluated and cross-checked."""
    kind = _kind(kind)
    if n < 1:
        raise ContractViolation("index count n must be positive")
    ratio = phase_ratio_form(s, nu, p)
    frame = phase_frame_form(s, nu, p, n_vec)
    gap = float(np.max(np.abs(ratio - frame), initial=0.0))
    if gap > FORM_CHECK_TOL:
        raise SpinorError(f"phase expressions disagree by {gap:.3e}")
    z = ratio**n
    return np.conj(z) if kind == "1" else z


def apply_passive_massless(s: SL2C, f: MasslessField) -> MasslessField:
    """Lazy ``(U(S) f)(p) = Z(S, nu, p) f(L^-1 p)``."""
    lam_inv = inverse_lorentz(sl2c_to_lorentz(s))

    def evaluator(p):
        z = massless_phase_factor(s, f.nu, p, f.n, f.kind, f.n_vec)
        return z * f(apply_lorentz(lam_inv, p))

    return MasslessField(evaluator, f.n, f.kind, f.sign, f.nu, f.n_vec)


def massless_density(f: MasslessField, p) -> np.ndarray:
    return np.abs(f(p)) ** 2


def massless_norm(f: MasslessField, sampler: HyperboloidSampler, count: int = 10**6):
    """Monte Carlo ``int d mu_0 |f|^2`` on the forward cone; returns ``(value, stderr)``."""
    if sampler.mass != 0:
        raise SamplerMismatch(f"massless norm needs a cone sampler, got mass {sampler.mass}")
    return integrate(lambda p: massless_density(f, p), sampler, count)
