import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwspinor.errors import ContractViolation, NotUnimodular
from bwspinor.randoms import expm_traceless, make_rng, random_sl2c, random_spinors
from bwspinor.spinors import (
    EPSILON,
    LOWER,
    SL2C,
    UPPER,
    Bispinor,
    TwoSpinor,
    apply_lorentz,
    classify,
    conjugate,
    contract,
    epsilon_lower,
    epsilon_raise,
    inverse_lorentz,
    is_hermitian,
    matrix_to_vector,
    minkowski_dot,
    minkowski_square,
    sl2c_to_lorentz,
    transform,
    transform_lower,
    transform_upper,
    vector_to_matrix,
)

from . import oracle

# fixed SL(2,C) element used for frozen oracle values
S_FIXED = np.array([[1.2 + 0.3j, 0.4 - 0.1j], [-0.7 + 0.5j, 0.6568627450980393 + 0.06078431372549021j]])
LORENTZ_FIXED = [
    [1.4375816993464052, -0.020588235294117616, 0.6109803921568628, -0.8324183006535946],
    [0.4333333333333332, 0.4764705882352942, -0.25411764705882356, -0.9466666666666667],
    [0.9, -0.00588235294117647, 1.1364705882352941, -0.72],
    [-0.26241830065359467, 0.8794117647058824, 0.1309803921568628, 0.5275816993464053],
]

finite = st.floats(-10, 10, allow_nan=False)
cplx = st.builds(complex, finite, finite)
spinor = st.tuples(cplx, cplx)
four = st.tuples(finite, finite, finite, finite)


@st.composite
def sl2c(draw):
    x = np.array(draw(st.lists(cplx, min_size=3, max_size=3)), dtype=complex) / 10
    gen = np.array([[x[0], x[1]], [x[2], -x[0]]])
    return SL2C(expm_traceless(gen), tol=1e-10)


def test_epsilon_lowering_goldens():
    assert np.array_equal(epsilon_lower(TwoSpinor((1, 0))).components, [0, 1])
    assert np.array_equal(epsilon_lower(TwoSpinor((0, 1))).components, [-1, 0])
    assert EPSILON[0, 1] == 1


def test_contract_goldens():
    assert contract(TwoSpinor((0, 1), LOWER), TwoSpinor((0, 1))) == 1
    assert contract(TwoSpinor((0, 1), LOWER), TwoSpinor((1, 0))) == 0


@given(spinor)
def test_raise_undoes_lower(k):
    kappa = TwoSpinor(k)
    back = epsilon_raise(epsilon_lower(kappa))
    assert np.array_equal(back.components, kappa.components)


@given(spinor, spinor)
def test_contraction_is_antisymmetric(k, l):
    kappa, lam = TwoSpinor(k), TwoSpinor(l)
    a = contract(epsilon_lower(kappa), lam)
    b = contract(epsilon_lower(lam), kappa)
    assert abs(a + b) <= 1e-12 * (1 + abs(a))


def test_index_errors():
    with pytest.raises(ContractViolation):
        epsilon_lower(TwoSpinor((1, 0), LOWER))
    with pytest.raises(ContractViolation):
        contract(TwoSpinor((1, 0), UPPER), TwoSpinor((1, 0)))
    with pytest.raises(ContractViolation):
        contract(TwoSpinor((1, 0), LOWER), TwoSpinor((1, 0), primed=True))
    with pytest.raises(ContractViolation):
        TwoSpinor((1, 2, 3))
    with pytest.raises(ContractViolation):
        TwoSpinor((np.nan, 0))


def test_spinor_is_immutable():
    k = TwoSpinor((1, 2))
    with pytest.raises(ValueError):
        k.components[0] = 5


def test_vector_matrix_goldens():
    m, e = 1.7, 2.3
    assert np.allclose(vector_to_matrix((m, 0, 0, 0)), m / np.sqrt(2) * np.eye(2), rtol=0, atol=1e-15)
    assert np.allclose(vector_to_matrix((e, 0, 0, e)), [[np.sqrt(2) * e, 0], [0, 0]], rtol=0, atol=1e-15)
    assert np.allclose(matrix_to_vector(m / np.sqrt(2) * np.eye(2)), (m, 0, 0, 0), atol=1e-15)
    assert np.allclose(matrix_to_vector([[np.sqrt(2) * e, 0], [0, 0]]), (e, 0, 0, e), atol=1e-15)


@given(four)
def test_vector_matrix_against_oracle(v):
    want = np.array(oracle.to_complex(oracle.pmat(v)))
    assert np.allclose(vector_to_matrix(v), want, rtol=0, atol=1e-14)
    det = np.linalg.det(vector_to_matrix(v))
    assert abs(det - 0.5 * minkowski_dot(v, v)) <= 1e-12 * (1 + np.dot(v, v))
    assert np.allclose(matrix_to_vector(vector_to_matrix(v)), v, atol=1e-13)


def test_matrix_to_vector_rejects_non_hermitian():
    with pytest.raises(ContractViolation):
        matrix_to_vector([[1, 1j], [1j, 1]])
    assert not is_hermitian([[1, 2], [0, 1]])


def test_minkowski_square_is_accurate_for_boosted_vectors():
    chi = 17.0
    p = np.array([np.cosh(chi), 0.3 * np.sinh(chi), -0.4 * np.sinh(chi), np.sqrt(0.75) * np.sinh(chi)])
    exact = float(oracle.mass(p)) ** 2
    assert abs(minkowski_square(p) - exact) <= 1e-14 * exact
    # the naive product sum is useless here
    assert abs(minkowski_dot(p, p) - exact) > 1e-3 * exact


def test_classify():
    assert classify((1, 0, 0, 0)) == "timelike-future"
    assert classify((1, 0, 0, 1)) == "null-future"
    assert classify((-1, 0, 0, 0)) == "other"
    assert classify((0, 1, 0, 0)) == "other"


def test_sl2c_validation():
    with pytest.raises(NotUnimodular):
        SL2C(2 * np.eye(2))
    with pytest.raises(ContractViolation):
        SL2C(np.eye(3))
    s = SL2C.renormalized([[2, 1], [0, 3]])
    assert abs(np.linalg.det(s.matrix) - 1) < 1e-15


def test_identity_lorentz():
    assert np.allclose(sl2c_to_lorentz(SL2C.identity()), np.eye(4), atol=1e-15)


def test_rotation_and_boost_goldens():
    # S = diag(e^{-it/2}, e^{it/2}) acting through inv(S)^T on upper indices rotates by -t
    t, chi = 0.83, 0.41
    rot = sl2c_to_lorentz(SL2C.rotation_z(t))
    want = np.eye(4)
    want[1:3, 1:3] = [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]]
    assert np.allclose(rot, want, atol=1e-15)
    boost = sl2c_to_lorentz(SL2C.boost_z(chi))
    want = np.eye(4)
    want[np.ix_([0, 3], [0, 3])] = [[np.cosh(chi), -np.sinh(chi)], [-np.sinh(chi), np.cosh(chi)]]
    assert np.allclose(boost, want, atol=1e-15)


def test_lorentz_matches_frozen_oracle():
    assert np.allclose(sl2c_to_lorentz(SL2C(S_FIXED)), LORENTZ_FIXED, rtol=0, atol=1e-14)


@settings(max_examples=50)
@given(sl2c())
def test_lorentz_preserves_metric_and_matches_matrix_action(s):
    lam = sl2c_to_lorentz(s)
    eta = np.diag([1.0, -1, -1, -1])
    assert np.allclose(lam.T @ eta @ lam, eta, atol=1e-11 * np.abs(lam).max() ** 2)
    assert np.allclose(inverse_lorentz(lam) @ lam, np.eye(4), atol=1e-11 * np.abs(lam).max() ** 2)
    v = np.array([1.3, 0.2, -0.5, 0.7])
    a = s.upper_action
    assert np.allclose(vector_to_matrix(apply_lorentz(lam, v)), a @ vector_to_matrix(v) @ a.conj().T, atol=1e-10)


@settings(max_examples=50)
@given(sl2c(), spinor, spinor)
def test_transformations_preserve_epsilon(s, k, l):
    phi, psi = TwoSpinor(k, LOWER), TwoSpinor(l)
    lhs = contract(transform_lower(s, phi), transform_upper(s, psi))
    assert abs(lhs - contract(phi, psi)) <= 1e-10 * (1 + np.abs(k).sum() * np.abs(l).sum())


@settings(max_examples=50)
@given(sl2c(), spinor)
def test_raising_commutes_with_the_action(s, k):
    phi = TwoSpinor(k, LOWER)
    a = epsilon_raise(transform_lower(s, phi)).components
    b = transform_upper(s, epsilon_raise(phi)).components
    assert np.allclose(a, b, atol=1e-10 * (1 + np.abs(k).sum()))


def test_composition_and_identity():
    rng = make_rng(1)
    s1, s2 = random_sl2c(rng, 200), random_sl2c(rng, 200)
    phi = random_spinors(rng, 200)
    a = transform(s2, transform(s1, phi)).components
    b = transform(s2 @ s1, phi).components
    assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(a))
    assert np.array_equal(transform(SL2C.identity(), phi).components, phi.components)
    lam = sl2c_to_lorentz(s2 @ s1)
    assert np.allclose(lam, sl2c_to_lorentz(s2) @ sl2c_to_lorentz(s1), atol=1e-9)


def test_conjugate():
    k = conjugate(TwoSpinor((1, 1j)))
    assert k.primed and np.array_equal(k.components, [1, -1j])
    rng = make_rng(2)
    kappa, lam = random_spinors(rng, 100, LOWER), random_spinors(rng, 100)
    lhs = np.conj(contract(kappa, lam))
    rhs = contract(conjugate(kappa), conjugate(lam))
    assert np.allclose(lhs, rhs, atol=1e-15)


def test_bispinor_blocks_and_action():
    with pytest.raises(ContractViolation):
        Bispinor(TwoSpinor((1, 0)), TwoSpinor((0, 1), LOWER, True))
    b = Bispinor(TwoSpinor((1, 2j), LOWER), TwoSpinor((3, 4), LOWER, True))
    s = SL2C(S_FIXED)
    moved = b.transformed(s)
    assert np.allclose(moved.upper_part.components, S_FIXED @ [1, 2j])
    assert np.allclose(moved.lower_part.components, S_FIXED.conj() @ [3, 4])
    assert b.array.shape == (4,)
