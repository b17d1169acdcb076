"""Massive Bargmann-Wigner amplitudes and their passive SU(2) transformation law.

A Dirac bispinor at an on-shell momentum is expanded on a spin-frame
``(omega, pi)`` built from a fixed reference spinor nu::

    psi0_A  = -N (-s omega_A f1 + pi_A f0)
    psi1_A' = -N (conj(pi)_A' f1 + s conj(omega)_A' f0),    N = (m/sqrt2)^(1/2)

where ``s = +1/-1`` is the energy sign.  An active SL(2,C) transformation of
the field induces ``f'(p) = U(S, nu, p) f(L^-1 p)`` on the amplitude pair
(``f0``, ``f1``); ``U`` is an SU(2) matrix depending on p.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, SamplerMismatch, SpinorError
from .fields import AmplitudeField, MasslessField, energy_sign
from .frames import MassiveSpinFrame, as_upper, massive_spin_frame, shell_mass
from .quadrature import HyperboloidSampler, integrate
from .spinors import (
    LOWER,
    SQRT2,
    SL2C,
    Bispinor,
    TwoSpinor,
    apply_lorentz,
    det2,
    inverse_lorentz,
    lower_array,
    matvec,
    minkowski_dot,
    pair_array,
    sl2c_to_lorentz,
)

VARSIGMA = np.array([[0.0, 1.0], [1.0, 0.0]])
VARSIGMA_UPPER = -VARSIGMA
BW_EPSILON = np.array([[0.0, 1.0], [-1.0, 0.0]])
BW_EPSILON_UPPER = BW_EPSILON.copy()

# level at which a freshly built BWTransform is certified
CERTIFY_TOL = 1e-10
MOMENTUM_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class BWAmplitude:
    """BW-spinor ``(f0, f1)`` at an on-shell momentum (batchable)."""

    f0: np.ndarray
    f1: np.ndarray
    sign: int
    at: np.ndarray
    nu: TwoSpinor

    def __post_init__(self):
        f0 = np.asarray(self.f0, dtype=complex)
        f1 = np.asarray(self.f1, dtype=complex)
        if not (np.all(np.isfinite(f0)) and np.all(np.isfinite(f1))):
            raise ContractViolation("amplitudes must be finite")
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "f1", f1)
        object.__setattr__(self, "sign", energy_sign(self.sign))
        object.__setattr__(self, "at", np.asarray(self.at, dtype=float))
        object.__setattr__(self, "nu", as_upper(self.nu))

    @property
    def array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.f0, self.f1), axis=-1)


@dataclass(frozen=True, eq=False)
class BWTransform:
    """The passive matrix ``U^A_B``; certified unimodular and varsigma-unitary when built."""

    matrix: np.ndarray
    sign: int

    def __post_init__(self):
        object.__setattr__(self, "sign", energy_sign(self.sign))
        worst = max(
            float(np.max(np.abs(self.det() - 1.0), initial=0.0)),
            float(np.max(self.varsigma_residual(), initial=0.0)),
            float(np.max(self.pattern_residual(), initial=0.0)),
        )
        if worst > CERTIFY_TOL:
            raise SpinorError(f"BW transform failed certification (residual {worst:.3e})")

    def det(self) -> np.ndarray:
        return det2(self.matrix)

    def det_by_epsilon(self) -> np.ndarray:
        """``(1/2) U_AB U^AB`` with BW indices moved by epsilon."""
        u = self.matrix
        lowered = np.einsum("ac,...ab->...cb", BW_EPSILON, u)
        raised = np.einsum("db,...ab->...ad", BW_EPSILON_UPPER, u)
        return 0.5 * np.einsum("...ab,...ab->...", lowered, raised)

    def conj(self) -> np.ndarray:
        """Matrix acting on conjugate amplitudes: ``X conj(U) X`` with X the index swap."""
        return conjugate_transform(self.matrix)

    def varsigma_residual(self) -> np.ndarray:
        """``max |conj(U)^C_A U^D_B s_CD - s_AB|`` per instance."""
        lhs = np.einsum("...ca,...db,cd->...ab", self.conj(), self.matrix, VARSIGMA)
        return np.max(np.abs(lhs - VARSIGMA), axis=(-1, -2))

    def epsilon_residual(self) -> np.ndarray:
        lhs = np.einsum("...ca,...db,cd->...ab", self.matrix, self.matrix, BW_EPSILON)
        return np.max(np.abs(lhs - BW_EPSILON), axis=(-1, -2))

    def pattern_residual(self) -> np.ndarray:
        u = self.matrix
        return np.maximum(
            np.abs(u[..., 0, 0] - np.conj(u[..., 1, 1])),
            np.abs(u[..., 1, 0] + np.conj(u[..., 0, 1])),
        )


def conjugate_transform(u: np.ndarray) -> np.ndarray:
    return np.conj(u)[..., ::-1, ::-1]


def bw_lower(f: np.ndarray) -> np.ndarray:
    """``f_B = f^A eps_AB`` on the last axis."""
    return np.einsum("...a,ab->...b", f, BW_EPSILON)


def bw_raise(f: np.ndarray) -> np.ndarray:
    """``f^A = eps^AB f_B`` on the last axis."""
    return np.einsum("ab,...b->...a", BW_EPSILON_UPPER, f)


def _check_frame(frame: MassiveSpinFrame, at):
    at = np.asarray(at, dtype=float)
    scale = np.linalg.norm(frame.p, axis=-1)
    if np.any(np.linalg.norm(frame.p - at, axis=-1) > MOMENTUM_RTOL * scale):
        raise ContractViolation("spin-frame is attached to a different momentum")


def _norm_factor(frame):
    return np.sqrt(shell_mass(frame.p) / SQRT2)


def expand_bispinor(f: BWAmplitude, frame: MassiveSpinFrame) -> Bispinor:
    _check_frame(frame, f.at)
    s = f.sign
    nf = _norm_factor(frame)[..., None]
    om = lower_array(frame.omega.components)
    pi = lower_array(frame.pi.components)
    f0 = f.f0[..., None]
    f1 = f.f1[..., None]
    psi0 = -nf * (-s * om * f1 + pi * f0)
    psi1 = -nf * (np.conj(pi) * f1 + s * np.conj(om) * f0)
    return Bispinor(TwoSpinor(psi0, LOWER), TwoSpinor(psi1, LOWER, primed=True))


def extract_amplitudes(psi: Bispinor, frame: MassiveSpinFrame, sign=1) -> BWAmplitude:
    # f0 = N^-1 omega^A psi0_A and f1 = N^-1 conj(omega)^A' psi1_A'; both rely on
    # omega^A pi_A = -1 and conj(omega)^A' conj(pi)_A' = -1
    nf = _norm_factor(frame)
    om = frame.omega.components
    f0 = pair_array(om, psi.upper_part.components) / nf
    f1 = pair_array(np.conj(om), psi.lower_part.components) / nf
    return BWAmplitude(f0, f1, sign, frame.p, frame.nu)


def conjugate_amplitudes(f, n: int | None = None):
    """Conjugate BW-spinor: ``conj(f)^0 = conj(f^1)``, ``conj(f)^1 = conj(f^0)``.

    Accepts a ``BWAmplitude`` or a component array whose trailing ``n`` axes
    (default: all) are BW indices.
    """
    if isinstance(f, BWAmplitude):
        return BWAmplitude(np.conj(f.f1), np.conj(f.f0), f.sign, f.at, f.nu)
    f = np.asarray(f)
    n = f.ndim if n is None else n
    out = np.conj(f)
    for ax in range(f.ndim - n, f.ndim):
        out = np.flip(out, axis=ax)
    return out


def varsigma_pair(f, g, n: int | None = None):
    """``f^{A1..An} g^{B1..Bn} s_{A1B1} ... s_{AnBn}`` over the trailing ``n`` axes."""
    f = np.asarray(f)
    g = np.asarray(g)
    n = f.ndim if n is None else n
    if g.ndim - n != f.ndim - n or g.shape[g.ndim - n:] != f.shape[f.ndim - n:] or f.shape[f.ndim - n:] != (2,) * n:
        raise ContractViolation(f"rank mismatch in varsigma_pair: {f.shape} vs {g.shape} (n={n})")
    flipped = g
    for ax in range(g.ndim - n, g.ndim):
        flipped = np.flip(flipped, axis=ax)
    return np.sum(f * flipped, axis=tuple(range(f.ndim - n, f.ndim)))


def density(values: np.ndarray, n: int) -> np.ndarray:
    """Norm density ``f s..s conj(f)``, i.e. the sum of squared moduli."""
    return varsigma_pair(values, conjugate_amplitudes(values, n), n).real


def apply_bw_matrix(u: np.ndarray, f: np.ndarray, n: int) -> np.ndarray:
    """Contract one copy of ``u`` (shape ``(..., 2, 2)``) into each of the trailing ``n`` axes of ``f``."""
    f = np.asarray(f, dtype=complex)
    batch = f.ndim - n
    ub = u.reshape(u.shape[:-2] + (1,) * (n - 1) + (2, 2))
    for j in range(n):
        moved = np.moveaxis(f, batch + j, -1)
        moved = np.einsum("...ij,...j->...i", ub, moved)
        f = np.moveaxis(moved, -1, batch + j)
    return f


def bw_transform_matrix(s: SL2C, nu, p, m, sign=1) -> BWTransform:
    """``U(S, nu, p)`` from frames at p for ``nu`` and ``S nu``."""
    sign = energy_sign(sign)
    nu = as_upper(nu)
    s_nu = TwoSpinor(matvec(s.upper_action, nu.components))
    ref = massive_spin_frame(nu, p, m)
    moved = massive_spin_frame(s_nu, p, m)
    om_low = lower_array(ref.omega.components)
    u00 = pair_array(om_low, moved.pi.components)
    c = pair_array(om_low, moved.omega.components)
    u = np.empty(np.shape(u00) + (2, 2), dtype=complex)
    u[..., 0, 0] = u00
    u[..., 0, 1] = -sign * c
    u[..., 1, 0] = sign * np.conj(c)
    u[..., 1, 1] = np.conj(u00)
    return BWTransform(u, sign)


def bw_transform_matrix_direct(s: SL2C, nu, p, m, sign=1) -> np.ndarray:
    """The same matrix from the active action on the frame at ``L^-1 p`` (no certification)."""
    sign = energy_sign(sign)
    nu = as_upper(nu)
    p = np.asarray(p, dtype=float)
    q = apply_lorentz(inverse_lorentz(sl2c_to_lorentz(s)), p)
    ref = massive_spin_frame(nu, p, m)
    back = massive_spin_frame(nu, q, m)
    om = ref.omega.components
    s_pi = matvec(s.matrix, lower_array(back.pi.components))
    s_om = matvec(s.matrix, lower_array(back.omega.components))
    a = pair_array(om, s_pi)
    b = pair_array(om, s_om)
    u = np.empty(np.shape(a) + (2, 2), dtype=complex)
    u[..., 0, 0] = -a
    u[..., 0, 1] = sign * b
    u[..., 1, 0] = -sign * np.conj(b)
    u[..., 1, 1] = -np.conj(a)
    return u


def apply_passive(s: SL2C, field: AmplitudeField) -> AmplitudeField:
    """Lazy ``(U(S) f)(p) = U(S, nu, p)^{(x)n} f(L^-1 p)``."""
    if field.mass <= 0:
        raise ContractViolation("apply_passive needs a massive field")
    lam_inv = inverse_lorentz(sl2c_to_lorentz(s))

    def evaluator(p):
        u = bw_transform_matrix(s, field.nu, p, field.mass, field.sign).matrix
        return apply_bw_matrix(u, field(apply_lorentz(lam_inv, p)), field.n)

    return AmplitudeField(evaluator, field.mass, field.n, field.sign, field.nu, probe=False)


def translation_phase(a, field):
    """Multiply the field by ``exp(i s p.a)`` (s the energy sign)."""
    a = np.asarray(a, dtype=float)

    def evaluator(p):
        phase = np.exp(1j * field.sign * minkowski_dot(p, a))
        vals = field(p)
        return vals * phase.reshape(phase.shape + (1,) * (vals.ndim - phase.ndim))

    if isinstance(field, AmplitudeField):
        return AmplitudeField(evaluator, field.mass, field.n, field.sign, field.nu, probe=False)
    return MasslessField(evaluator, field.n, field.kind, field.sign, field.nu, field.n_vec)


def field_density(field: AmplitudeField, p) -> np.ndarray:
    return density(field(p), field.n)


def bw_norm(field: AmplitudeField, sampler: HyperboloidSampler, count: int = 10**6):
    """Monte Carlo ``int d mu_m sum |f|^2``; returns ``(value, stderr)``."""
    if field.mass <= 0:
        raise ContractViolation("bw_norm needs a massive field; use massless_norm on the cone")
    if not np.isclose(sampler.mass, field.mass, rtol=1e-12, atol=0.0):
        raise SamplerMismatch(f"sampler mass {sampler.mass} != field mass {field.mass}")
    return integrate(lambda p: field_density(field, p), sampler, count)
