"""Explicit spin-frames attached to future-pointing momenta.

Massive case (m > 0), for a reference spinor nu and ``q = p^{BB'} nu_B conj(nu)_B'``::

    omega^A = (m/sqrt2)^(1/2) nu^A / sqrt(q)
    pi^A    = (sqrt2/m)^(1/2) p^{AA'} conj(nu)_A' / sqrt(q)

Massless case, with an auxiliary timelike future vector n::

    pi^A    = p^{AA'} conj(nu)_A' / sqrt(q)
    omega^A = n^{AA'} conj(pi)_A' / (n.p)

The massive pair satisfies ``omega_A pi^A = 1``; the massless one
``pi_A omega^A = 1`` (the two names swap roles between the cases).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DegenerateReference, InvalidDirection, InvalidMomentum, NotProportional
from .spinors import (
    SIGMA,
    SQRT2,
    SL2C,
    UPPER,
    TwoSpinor,
    apply_lorentz,
    flagpole_matrix,
    inverse_lorentz,
    lower_array,
    matvec,
    minkowski_dot,
    minkowski_square,
    pair_array,
    sl2c_to_lorentz,
    vector_to_matrix,
)

DEGENERACY_THRESHOLD = 1e-10
MASS_RTOL = 1e-8
NULL_RTOL = 1e-10
# sanity level for the identities asserted while building a frame
FRAME_CHECK_TOL = 1e-9


def as_upper(nu) -> TwoSpinor:
    if isinstance(nu, TwoSpinor):
        if nu.index != UPPER or nu.primed:
            raise ContractViolation("reference spinor must be upper unprimed")
        return nu
    return TwoSpinor(nu, UPPER)


def reference_radicand(nu_up: np.ndarray, pmat: np.ndarray) -> np.ndarray:
    """``p^{BB'} nu_B conj(nu)_B'``: a positive semidefinite hermitian form in nu."""
    nl = lower_array(nu_up)
    return np.einsum("...a,...ab,...b->...", nl, pmat, np.conj(nl)).real


def _require_nondegenerate(radicand, p, nu_up):
    scale = np.linalg.norm(p, axis=-1) * np.sum(np.abs(nu_up) ** 2, axis=-1)
    bad = ~(radicand >= DEGENERACY_THRESHOLD * scale) | (scale == 0)
    if np.any(bad):
        raise DegenerateReference(
            f"{int(np.count_nonzero(bad))} reference spinor(s) zero or aligned with the principal spinor of p"
        )


def _require_massive(p, m):
    p = np.asarray(p, dtype=float)
    m = np.asarray(m, dtype=float)
    if p.shape[-1:] != (4,):
        raise ContractViolation(f"momentum needs trailing dimension 4, got {p.shape}")
    if np.any(m <= 0):
        raise InvalidMomentum("massive spin-frame needs m > 0")
    sq = minkowski_dot(p, p)
    if np.any(p[..., 0] <= 0) or np.any(sq <= 0):
        raise InvalidMomentum("momentum must be timelike and future-pointing")
    if np.any(np.abs(np.sqrt(sq) - m) > MASS_RTOL * m):
        raise InvalidMomentum("momentum is off the mass shell p.p = m^2")
    return p, m


def _require_null(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1:] != (4,):
        raise ContractViolation(f"momentum needs trailing dimension 4, got {p.shape}")
    sq = minkowski_dot(p, p)
    if np.any(p[..., 0] <= 0) or np.any(np.abs(sq) > NULL_RTOL * np.sum(p * p, axis=-1)):
        raise InvalidMomentum("momentum must be null and future-pointing")
    return p


def _require_timelike_direction(n):
    n = np.asarray(n, dtype=float)
    if n.shape[-1:] != (4,):
        raise ContractViolation(f"direction needs trailing dimension 4, got {n.shape}")
    if np.any(n[..., 0] <= 0) or np.any(minkowski_dot(n, n) <= NULL_RTOL * np.sum(n * n, axis=-1)):
        raise InvalidDirection("n must be timelike and future-pointing")
    return n


# -- raw constructors (arrays in, arrays out) ---------------------------------

def shell_mass(p) -> np.ndarray:
    """Invariant mass ``sqrt(p.p)`` of the given (floating-point) momentum."""
    return np.sqrt(minkowski_square(p))


def sqrt_momentum_matrix(p) -> np.ndarray:
    """Hermitian positive ``R`` with ``R R = p^{AA'}`` for timelike future p.

    ``R = (P + s I) / sqrt(tr P + 2 s)`` with ``s = sqrt(det P)``; every
    entry is a sum of nonnegative terms, so R is accurate entrywise.
    """
    pmat = vector_to_matrix(p)
    s = np.sqrt(0.5 * minkowski_square(p))
    norm = np.sqrt(SQRT2 * np.asarray(p, dtype=float)[..., 0] + 2 * s)
    return (pmat + s[..., None, None] * np.eye(2)) / norm[..., None, None]


def massive_frame_arrays(nu_up, p):
    """Return ``(omega^A, pi^A)`` component arrays; no validation.

    With ``w = R conj(nu)_A`` (R the square root of p^{AA'}) the radicand is
    ``|w|^2`` and ``p^{AA'} conj(nu)_A' = R w``, which avoids the cancellation
    in ``nu P conj(nu)`` at large rapidity.  The mass factors use
    ``shell_mass(p)``: a float momentum at rapidity y sits off its nominal
    shell by ~1e-16 e^{2y} relative, and the nominal mass would leak that
    into every derived identity.
    """
    r = sqrt_momentum_matrix(p)
    w = matvec(r, np.conj(lower_array(nu_up)))
    wn = np.sqrt(np.sum(np.abs(w) ** 2, axis=-1))[..., None]
    half = np.sqrt(0.5 * minkowski_square(p))[..., None] ** 0.5  # (m/sqrt2)^(1/2)
    omega = half * nu_up / wn
    pi = matvec(r, w) / (half * wn)
    return omega, pi


def principal_spinor(p) -> np.ndarray:
    """Upper components of kappa with ``kappa^A conj(kappa)^{A'} = p^{AA'}`` for null p.

    The larger diagonal entry of ``p^{AA'}`` is used as pivot.
    """
    pmat = vector_to_matrix(p)
    a = pmat[..., 0, 0].real
    d = pmat[..., 1, 1].real
    b = pmat[..., 0, 1]
    top = a >= d
    ra = np.sqrt(np.where(top, a, 1.0))
    rd = np.sqrt(np.where(top, 1.0, d))
    k0 = np.where(top, ra, b / rd)
    k1 = np.where(top, np.conj(b) / ra, rd)
    return np.stack([k0 + 0j, k1 + 0j], axis=-1)


def massless_pi_array(nu_up, p):
    # p^{AA'} conj(nu)_A' / sqrt(q) evaluated on the factorized p^{AA'} = kappa conj(kappa):
    # pi = kappa conj(c) / |c| with c = kappa^A nu_A, exactly rank one
    kappa = principal_spinor(p)
    c = pair_array(kappa, lower_array(nu_up))
    return kappa * (np.conj(c) / np.abs(c))[..., None]


def massless_omega_array(pi_up, n, p):
    return matvec(vector_to_matrix(n), np.conj(lower_array(pi_up))) / minkowski_dot(n, p)[..., None]


# -- validated frames ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MassiveSpinFrame:
    omega: TwoSpinor
    pi: TwoSpinor
    p: np.ndarray
    m: np.ndarray
    nu: TwoSpinor

    def __post_init__(self):
        # conj(omega)^{A'} conj(pi)_{A'} = -1 fixes the sign used when extracting amplitudes
        err = np.max(np.abs(self.conj_pairing() + 1.0), initial=0.0)
        if err > FRAME_CHECK_TOL:
            raise ContractViolation(f"frame fails conj(omega)^A' conj(pi)_A' = -1 by {err:.3e}")

    def normalization(self):
        """``omega_A pi^A`` (equal to 1)."""
        return pair_array(lower_array(self.omega.components), self.pi.components)

    def conj_pairing(self):
        """``conj(omega)^{A'} conj(pi)_{A'}`` (equal to -1)."""
        return pair_array(np.conj(self.omega.components), np.conj(lower_array(self.pi.components)))

    def omega_vector(self) -> np.ndarray:
        return _world_vector(self.omega.components)

    def pi_vector(self) -> np.ndarray:
        return _world_vector(self.pi.components)

    def residuals(self) -> dict:
        """Max residuals of the defining identities, relative where meaningful."""
        m = shell_mass(self.p)
        recon = (m / SQRT2)[..., None] * (self.pi_vector() + self.omega_vector())
        pnorm = np.linalg.norm(self.p, axis=-1)
        return {
            "normalization": float(np.max(np.abs(self.normalization() - 1.0))),
            "momentum_reconstruction": float(np.max(np.linalg.norm(recon - self.p, axis=-1) / pnorm)),
            "omega_dot_p": float(np.max(np.abs(minkowski_dot(self.omega_vector(), self.p) * SQRT2 / m - 1.0))),
        }


@dataclass(frozen=True, eq=False)
class MasslessSpinFrame:
    pi: TwoSpinor
    omega: TwoSpinor
    p: np.ndarray
    n: np.ndarray
    nu: TwoSpinor

    def normalization(self):
        """``pi_A omega^A`` (equal to 1)."""
        return pair_array(lower_array(self.pi.components), self.omega.components)

    def residuals(self) -> dict:
        flag = flagpole_matrix(self.pi.components)
        pmat = vector_to_matrix(self.p)
        scale = np.max(np.abs(pmat), axis=(-1, -2))
        return {
            "normalization": float(np.max(np.abs(self.normalization() - 1.0))),
            "flagpole": float(np.max(np.max(np.abs(flag - pmat), axis=(-1, -2)) / scale)),
        }


def _world_vector(kappa: np.ndarray) -> np.ndarray:
    return np.einsum("mab,...ba->...m", SIGMA, flagpole_matrix(kappa)).real / SQRT2


def massive_spin_frame(nu, p, m) -> MassiveSpinFrame:
    """Spin-frame ``(omega, pi)`` at a massive momentum ``p`` with mass ``m``."""
    nu = as_upper(nu)
    p, m = _require_massive(p, m)
    _require_nondegenerate(reference_radicand(nu.components, vector_to_matrix(p)), p, nu.components)
    omega, pi = massive_frame_arrays(nu.components, p)
    return MassiveSpinFrame(TwoSpinor(omega, UPPER), TwoSpinor(pi, UPPER), p, m, nu)


def massless_pi(nu, p) -> TwoSpinor:
    nu = as_upper(nu)
    p = _require_null(p)
    _require_nondegenerate(reference_radicand(nu.components, vector_to_matrix(p)), p, nu.components)
    return TwoSpinor(massless_pi_array(nu.components, p), UPPER)


def massless_omega(nu, n, p) -> TwoSpinor:
    n = _require_timelike_direction(n)
    pi = massless_pi(nu, p)
    if np.any(minkowski_dot(n, p) <= 0):
        raise InvalidDirection("n.p must be positive")
    return TwoSpinor(massless_omega_array(pi.components, n, np.asarray(p, dtype=float)), UPPER)


def massless_spin_frame(nu, p, n=(1.0, 0.0, 0.0, 0.0)) -> MasslessSpinFrame:
    nu = as_upper(nu)
    pi = massless_pi(nu, p)
    omega = massless_omega(nu, n, p)
    return MasslessSpinFrame(pi, omega, np.asarray(p, dtype=float), np.asarray(n, dtype=float), nu)


def explicit_phase(nu, mu, p) -> np.ndarray:
    """``p^{BB'} mu_B conj(nu)_B' / |...|``, so that ``pi(nu) = z * pi(mu)``."""
    nu, mu = as_upper(nu), as_upper(mu)
    pmat = vector_to_matrix(p)
    val = np.einsum("...a,...ab,...b->...", lower_array(mu.components), pmat, np.conj(lower_array(nu.components)))
    return val / np.abs(val)


def phase_between(pi1: TwoSpinor, pi2: TwoSpinor, tol: float = 1e-10) -> np.ndarray:
    """Unit complex ``z`` with ``pi1 = z * pi2``; both must share a flagpole."""
    a, b = pi1.components, pi2.components
    n1 = np.sum(np.abs(a) ** 2, axis=-1)
    n2 = np.sum(np.abs(b) ** 2, axis=-1)
    if np.any(n1 == 0) or np.any(n2 == 0):
        raise NotProportional("phase_between needs nonzero spinors")
    flag_err = np.max(np.abs(flagpole_matrix(a) - flagpole_matrix(b)), axis=(-1, -2)) / n1
    if np.any(flag_err > tol):
        raise NotProportional(f"flagpoles differ by {np.max(flag_err):.3e} (relative)")
    z = np.sum(np.conj(b) * a, axis=-1) / n2
    return z / np.abs(z)


def frame_equivariance_residual(s: SL2C, nu, p, m, n=None) -> float:
    """Max relative residual of ``S omega(nu, L^-1 p) = omega(S nu, p)`` and the pi analogue.

    For ``m == 0`` the omega law uses ``(S nu, L n, p)``; ``n`` defaults to
    ``(1, 0, 0, 0)``.
    """
    nu = as_upper(nu)
    p = np.asarray(p, dtype=float)
    lam = sl2c_to_lorentz(s)
    q = apply_lorentz(inverse_lorentz(lam), p)
    s_nu = TwoSpinor(matvec(s.upper_action, nu.components), UPPER)
    sm = s.matrix
    if np.all(np.asarray(m) > 0):
        f_q = massive_spin_frame(nu, q, m)
        f_p = massive_spin_frame(s_nu, p, m)
    elif np.all(np.asarray(m) == 0):
        n = np.broadcast_to(np.asarray((1.0, 0.0, 0.0, 0.0) if n is None else n, dtype=float), p.shape)
        f_q = massless_spin_frame(nu, q, n)
        f_p = massless_spin_frame(s_nu, p, apply_lorentz(lam, n))
    else:
        raise InvalidMomentum("mixed massive/massless batch")
    om_q, pi_q = f_q.omega.components, f_q.pi.components
    om_p, pi_p = f_p.omega.components, f_p.pi.components
    r_om = _relative_gap(matvec(sm, lower_array(om_q)), lower_array(om_p))
    r_pi = _relative_gap(matvec(sm, lower_array(pi_q)), lower_array(pi_p))
    return float(max(np.max(r_om), np.max(r_pi)))


def _relative_gap(a, b):
    return np.linalg.norm(a - b, axis=-1) / np.linalg.norm(b, axis=-1)
