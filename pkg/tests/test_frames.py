import numpy as np
import pytest

from bwspinor.errors import ContractViolation, DegenerateReference, InvalidDirection, InvalidMomentum, NotProportional
from bwspinor.frames import (
    explicit_phase,
    frame_equivariance_residual,
    massive_spin_frame,
    massless_omega,
    massless_pi,
    massless_spin_frame,
    phase_between,
    shell_mass,
    sqrt_momentum_matrix,
)
from bwspinor.randoms import (
    make_rng,
    random_massive_momenta,
    random_null_momenta,
    random_sl2c,
    random_spinors,
    random_timelike_directions,
)
from bwspinor.spinors import SL2C, TwoSpinor, lower_array, pair_array, vector_to_matrix

from . import oracle

# frozen 40-digit oracle values
P_MASSIVE = (2.5, 1.2, -0.7, 1.5)
NU_MASSIVE = (0.3 + 0.8j, -1.1 + 0.2j)
M_MASSIVE = 1.438749456993816
OMEGA_MASSIVE = [0.13180113399607524 + 0.3514696906562007j, -0.48327082465227594 + 0.08786742266405018j]
PI_MASSIVE = [1.624517341432978 + 0.015268020126249794j, 0.5374343084439928 - 0.4061293353582445j]

P_NULL = (3.0, 1.2, -1.6, 2.23606797749979)
NU_NULL = (0.5 - 0.2j, 1 + 0.4j)
N_AUX = (1.3, 0.2, 0.5, -0.4)
PI_NULL = [-1.6262365249885515 + 1.0285008208246567j, -0.05841836240118279 + 0.732645076697999j]
OMEGA_NULL = [-0.1039209777868732 + 0.16729369849164405j, -0.4119276171148613 - 0.20769283587345555j]


def test_rest_frame_golden():
    f = massive_spin_frame((1, 0), (1, 0, 0, 0), 1.0)
    assert np.allclose(f.omega.components, [1, 0], rtol=0, atol=1e-15)
    assert np.allclose(f.pi.components, [0, 1], rtol=0, atol=1e-15)


def test_massive_frame_matches_frozen_oracle():
    f = massive_spin_frame(NU_MASSIVE, P_MASSIVE, M_MASSIVE)
    assert np.allclose(f.omega.components, OMEGA_MASSIVE, rtol=0, atol=1e-14)
    assert np.allclose(f.pi.components, PI_MASSIVE, rtol=0, atol=1e-14)


def test_massive_frame_matches_live_oracle_at_high_rapidity():
    rng = make_rng(11)
    p = random_massive_momenta(rng, 20, 1.0, 5.0)
    nu = random_spinors(rng, 20)
    f = massive_spin_frame(nu, p, 1.0)
    for i in range(20):
        om, pi = oracle.massive_frame(nu.components[i], p[i])
        assert np.allclose(f.omega.components[i], oracle.to_complex(om), rtol=1e-13, atol=0)
        assert np.allclose(f.pi.components[i], oracle.to_complex(pi), rtol=1e-13, atol=0)


def test_sqrt_momentum_matrix():
    rng = make_rng(3)
    p = random_massive_momenta(rng, 1000, 2.0, 5.0)
    r = sqrt_momentum_matrix(p)
    pm = vector_to_matrix(p)
    assert np.max(np.abs(r @ r - pm) / np.abs(pm).max(axis=(-1, -2), keepdims=True)) < 1e-14
    assert np.allclose(r, np.conj(np.swapaxes(r, -1, -2)))
    assert np.allclose(shell_mass(p), 2.0, rtol=1e-12)


def test_massive_identities_over_random_instances():
    rng = make_rng(4)
    p = random_massive_momenta(rng, 20000, 1.7, 5.0)
    f = massive_spin_frame(random_spinors(rng, 20000), p, 1.7)
    res = f.residuals()
    assert res["normalization"] <= 1e-12
    assert res["momentum_reconstruction"] <= 1e-10
    assert res["omega_dot_p"] <= 1e-10
    assert np.max(np.abs(f.conj_pairing() + 1)) <= 1e-12


def test_reference_rescaling_changes_only_phases():
    lam = 2.0 * np.exp(0.7j)
    nu = np.array(NU_MASSIVE)
    a = massive_spin_frame(nu, P_MASSIVE, M_MASSIVE)
    b = massive_spin_frame(lam * nu, P_MASSIVE, M_MASSIVE)
    ph = lam / abs(lam)
    assert np.allclose(b.omega.components, ph * a.omega.components, atol=1e-14)
    assert np.allclose(b.pi.components, np.conj(ph) * a.pi.components, atol=1e-14)
    assert abs(b.normalization() - 1) < 1e-14


def test_massive_errors():
    with pytest.raises(DegenerateReference):
        massive_spin_frame((0, 0), (1, 0, 0, 0), 1.0)
    with pytest.raises(InvalidMomentum):
        massive_spin_frame((1, 0), (1, 0, 0, 0), 2.0)
    with pytest.raises(InvalidMomentum):
        massive_spin_frame((1, 0), (-1, 0, 0, 0), 1.0)
    with pytest.raises(InvalidMomentum):
        massive_spin_frame((1, 0), (1, 0, 0, 1), 0.0)
    with pytest.raises(ContractViolation):
        massive_spin_frame(TwoSpinor((1, 0), "lower"), (1, 0, 0, 0), 1.0)


def test_mass_is_cross_checked_not_recomputed():
    p = np.array([1.0 + 1e-10, 0, 0, 0])
    f = massive_spin_frame((1, 0), p, 1.0)
    assert f.m == 1.0
    with pytest.raises(InvalidMomentum):
        massive_spin_frame((1, 0), (1.0 + 1e-6, 0, 0, 0), 1.0)


def test_massless_goldens():
    e = 2.7
    pi = massless_pi((0, 1), (e, 0, 0, e))
    om = massless_omega((0, 1), (1, 0, 0, 0), (e, 0, 0, e))
    assert np.allclose(pi.components, [-np.sqrt(np.sqrt(2) * e), 0], atol=1e-14)
    assert np.allclose(om.components, [0, -1 / np.sqrt(np.sqrt(2) * e)], atol=1e-14)
    assert abs(pair_array(lower_array(pi.components), om.components) - 1) < 1e-14


def test_massless_frame_matches_frozen_oracle():
    f = massless_spin_frame(NU_NULL, P_NULL, N_AUX)
    assert np.allclose(f.pi.components, PI_NULL, rtol=0, atol=1e-13)
    assert np.allclose(f.omega.components, OMEGA_NULL, rtol=0, atol=1e-13)


def test_massless_errors():
    with pytest.raises(DegenerateReference):
        massless_pi((1, 0), (1, 0, 0, 1))
    with pytest.raises(InvalidMomentum):
        massless_pi((0, 1), (1, 0, 0, 0))
    with pytest.raises(InvalidDirection):
        massless_omega((0, 1), (1, 0, 0, 1), (1, 0, 0, 1))
    with pytest.raises(InvalidDirection):
        massless_omega((0, 1), (-1, 0, 0, 0), (1, 0, 0, 1))


def test_massless_identities_over_random_instances():
    rng = make_rng(5)
    p = random_null_momenta(rng, 20000)
    f = massless_spin_frame(random_spinors(rng, 20000), p, random_timelike_directions(rng, 20000))
    res = f.residuals()
    assert res["normalization"] <= 1e-12
    assert res["flagpole"] <= 1e-11


def test_phase_between():
    pi = massless_pi(NU_NULL, P_NULL)
    assert abs(phase_between(pi, pi) - 1) < 1e-15
    alpha = 1.234
    assert abs(phase_between(pi.scaled(np.exp(1j * alpha)), pi) - np.exp(1j * alpha)) < 1e-14
    other = massless_pi(NU_NULL, (1.0, 0, 0, 1.0))
    with pytest.raises(NotProportional):
        phase_between(pi, other)


def test_explicit_phase_relates_references():
    rng = make_rng(6)
    p = random_null_momenta(rng, 5000)
    nu, mu = random_spinors(rng, 5000), random_spinors(rng, 5000)
    z = explicit_phase(nu, mu, p)
    assert np.max(np.abs(np.abs(z) - 1)) <= 1e-12
    z2 = phase_between(massless_pi(nu, p), massless_pi(mu, p))
    assert np.max(np.abs(z - z2)) < 1e-11


def test_equivariance():
    rng = make_rng(7)
    s = random_sl2c(rng, 2000)
    p = random_massive_momenta(rng, 2000, 1.0)
    assert frame_equivariance_residual(s, random_spinors(rng, 2000), p, 1.0) <= 1e-10
    q = random_null_momenta(rng, 2000)
    n = random_timelike_directions(rng, 2000)
    assert frame_equivariance_residual(s, random_spinors(rng, 2000), q, 0.0, n) <= 1e-10


def test_equivariance_identity_is_exact():
    assert frame_equivariance_residual(SL2C.identity(), NU_MASSIVE, P_MASSIVE, M_MASSIVE) == 0.0
    assert frame_equivariance_residual(SL2C.identity(), NU_NULL, P_NULL, 0.0) == 0.0
