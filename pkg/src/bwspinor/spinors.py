"""Two-component spinor algebra in a single fixed convention.

Conventions
-----------
* ``EPSILON[A, B] = eps_{AB}`` with ``eps_{01} = +1``; ``eps^{AB}`` has the
  same entries.  Lowering is ``k_A = k^B eps_{BA}`` and raising is
  ``k^A = eps^{AB} k_B``, so ``(c0, c1)^A -> (-c1, c0)_A``.
* A world-vector ``v`` maps to the hermitian matrix
  ``v^{AA'} = (v^0 I + v^i sigma_i) / sqrt(2)`` so that ``det = v.v / 2``.
* ``T(S)`` acts on lower unprimed spinors as ``S @ phi`` and on upper ones
  as ``inv(S).T @ phi``; primed spinors use the complex-conjugate matrix.
  ``sl2c_to_lorentz(S)`` is the world-vector transformation induced by this
  action.

All objects carry arbitrary leading batch dimensions; every operation
broadcasts over them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, NotUnimodular

SQRT2 = np.sqrt(2.0)
DEFAULT_TOL = 1e-12

EPSILON = np.array([[0.0, 1.0], [-1.0, 0.0]])
ETA = np.diag([1.0, -1.0, -1.0, -1.0])
SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

UPPER = "upper"
LOWER = "lower"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


# -- raw array kernels (shape (..., 2)) ------------------------------------

def lower_array(k: np.ndarray) -> np.ndarray:
    k = np.asarray(k)
    return np.stack([-k[..., 1], k[..., 0]], axis=-1)


def raise_array(k: np.ndarray) -> np.ndarray:
    k = np.asarray(k)
    return np.stack([k[..., 1], -k[..., 0]], axis=-1)


def pair_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Literal component sum ``a_0 b_0 + a_1 b_1``."""
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]


def matvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", m, v)


def inverse_transpose(m: np.ndarray) -> np.ndarray:
    """``inv(m).T`` for unimodular 2x2 matrices, computed without division."""
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=complex)
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 0, 1] = -m[..., 1, 0]
    out[..., 1, 0] = -m[..., 0, 1]
    out[..., 1, 1] = m[..., 0, 0]
    return out


def det2(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


# -- typed values -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwoSpinor:
    """Complex two-component spinor (possibly a batch of them).

    ``components`` has shape ``(..., 2)``; ``index`` is ``"upper"`` or
    ``"lower"``; ``primed`` selects the conjugate representation.
    """

    components: np.ndarray
    index: str = UPPER
    primed: bool = False

    def __post_init__(self):
        arr = np.asarray(self.components, dtype=complex)
        if arr.ndim == 0 or arr.shape[-1] != 2:
            raise ContractViolation(f"spinor components need trailing dimension 2, got shape {arr.shape}")
        if self.index not in (UPPER, LOWER):
            raise ContractViolation(f"index must be 'upper' or 'lower', got {self.index!r}")
        if not np.all(np.isfinite(arr)):
            raise ContractViolation("spinor components must be finite")
        object.__setattr__(self, "components", _frozen(arr))

    @classmethod
    def of(cls, c0, c1, index: str = UPPER, primed: bool = False) -> "TwoSpinor":
        return cls(np.stack(np.broadcast_arrays(np.asarray(c0, complex), np.asarray(c1, complex)), axis=-1), index, primed)

    @property
    def c0(self):
        return self.components[..., 0]

    @property
    def c1(self):
        return self.components[..., 1]

    @property
    def shape(self) -> tuple:
        return self.components.shape[:-1]

    def norm(self) -> np.ndarray:
        return np.linalg.norm(self.components, axis=-1)

    def scaled(self, z) -> "TwoSpinor":
        return TwoSpinor(self.components * np.asarray(z)[..., None], self.index, self.primed)

    def __repr__(self):
        tag = "'" if self.primed else ""
        if self.shape:
            return f"TwoSpinor(batch={self.shape}, {self.index}{tag})"
        return f"TwoSpinor(({self.c0:.6g}, {self.c1:.6g}), {self.index}{tag})"


@dataclass(frozen=True, eq=False)
class SL2C:
    """Unimodular 2x2 complex matrix ``S_A^B`` (or a batch)."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape[-2:] != (2, 2):
            raise ContractViolation(f"SL(2,C) element needs shape (..., 2, 2), got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ContractViolation("SL(2,C) entries must be finite")
        err = np.max(np.abs(det2(m) - 1.0), initial=0.0)
        if err > self.tol:
            raise NotUnimodular(f"|det S - 1| = {err:.3e} exceeds {self.tol:.1e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def renormalized(cls, m, tol: float = DEFAULT_TOL) -> "SL2C":
        """Divide a nonsingular matrix by a square root of its determinant."""
        m = np.asarray(m, dtype=complex)
        d = det2(m)
        if np.any(np.abs(d) == 0):
            raise NotUnimodular("singular matrix cannot be renormalized")
        return cls(m / np.sqrt(d)[..., None, None], tol)

    @classmethod
    def identity(cls, shape=()) -> "SL2C":
        return cls(np.broadcast_to(np.eye(2, dtype=complex), tuple(shape) + (2, 2)))

    @classmethod
    def rotation_z(cls, theta) -> "SL2C":
        """``diag(exp(-i theta/2), exp(i theta/2))``."""
        h = np.exp(-0.5j * np.asarray(theta, dtype=float))
        m = np.zeros(h.shape + (2, 2), dtype=complex)
        m[..., 0, 0] = h
        m[..., 1, 1] = 1 / h
        return cls(m)

    @classmethod
    def boost_z(cls, rapidity) -> "SL2C":
        """``diag(exp(chi/2), exp(-chi/2))``."""
        h = np.exp(0.5 * np.asarray(rapidity, dtype=float))
        m = np.zeros(h.shape + (2, 2), dtype=complex)
        m[..., 0, 0] = h
        m[..., 1, 1] = 1 / h
        return cls(m)

    @property
    def shape(self) -> tuple:
        return self.matrix.shape[:-2]

    @property
    def upper_action(self) -> np.ndarray:
        """Matrix acting on upper-index components, ``inv(S).T``."""
        return inverse_transpose(self.matrix)

    def inverse(self) -> "SL2C":
        return SL2C(np.swapaxes(inverse_transpose(self.matrix), -1, -2), self.tol)

    def __matmul__(self, other: "SL2C") -> "SL2C":
        if not isinstance(other, SL2C):
            return NotImplemented
        # products of well-conditioned factors stay unimodular to a few ulps
        return SL2C(self.matrix @ other.matrix, max(self.tol, other.tol) * 10)

    def __repr__(self):
        if self.shape:
            return f"SL2C(batch={self.shape})"
        return f"SL2C({np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True, eq=False)
class Bispinor:
    """Dirac-field value ``(psi0_A, psi1_A')``."""

    upper_part: TwoSpinor
    lower_part: TwoSpinor

    def __post_init__(self):
        if self.upper_part.index != LOWER or self.upper_part.primed:
            raise ContractViolation("upper block of a bispinor must be lower unprimed")
        if self.lower_part.index != LOWER or not self.lower_part.primed:
            raise ContractViolation("lower block of a bispinor must be lower primed")

    @property
    def array(self) -> np.ndarray:
        """Components stacked as ``(..., 4)``: psi0_0, psi0_1, psi1_0', psi1_1'."""
        return np.concatenate([self.upper_part.components, self.lower_part.components], axis=-1)

    def transformed(self, s: SL2C) -> "Bispinor":
        """Active action ``diag(S, conj(S))``."""
        return Bispinor(transform_lower(s, self.upper_part), transform_lower(s, self.lower_part))


# -- index gymnastics --------------------------------------------------------

def epsilon_lower(kappa: TwoSpinor) -> TwoSpinor:
    if kappa.index != UPPER:
        raise ContractViolation("epsilon_lower needs an upper-index spinor")
    return TwoSpinor(lower_array(kappa.components), LOWER, kappa.primed)


def epsilon_raise(kappa: TwoSpinor) -> TwoSpinor:
    if kappa.index != LOWER:
        raise ContractViolation("epsilon_raise needs a lower-index spinor")
    return TwoSpinor(raise_array(kappa.components), UPPER, kappa.primed)


def contract(kappa: TwoSpinor, lam: TwoSpinor):
    """``kappa_A lam^A`` as a literal component sum."""
    if kappa.index != LOWER or lam.index != UPPER:
        raise ContractViolation("contract needs (lower, upper) index positions")
    if kappa.primed != lam.primed:
        raise ContractViolation("cannot contract primed with unprimed indices")
    return pair_array(kappa.components, lam.components)


def conjugate(phi: TwoSpinor) -> TwoSpinor:
    return TwoSpinor(np.conj(phi.components), phi.index, not phi.primed)


def transform_lower(s: SL2C, phi: TwoSpinor) -> TwoSpinor:
    if phi.index != LOWER:
        raise ContractViolation("transform_lower needs a lower-index spinor")
    m = np.conj(s.matrix) if phi.primed else s.matrix
    return TwoSpinor(matvec(m, phi.components), LOWER, phi.primed)


def transform_upper(s: SL2C, phi: TwoSpinor) -> TwoSpinor:
    if phi.index != UPPER:
        raise ContractViolation("transform_upper needs an upper-index spinor")
    m = s.upper_action
    if phi.primed:
        m = np.conj(m)
    return TwoSpinor(matvec(m, phi.components), UPPER, phi.primed)


def transform(s: SL2C, phi: TwoSpinor) -> TwoSpinor:
    return transform_lower(s, phi) if phi.index == LOWER else transform_upper(s, phi)


# -- world-vectors -----------------------------------------------------------

def minkowski_dot(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]


def _split(a):
    c = 134217729.0 * a  # 2^27 + 1
    hi = c - (c - a)
    return hi, a - hi


def _two_square(a):
    x = a * a
    hi, lo = _split(a)
    return x, lo * lo - (((x - hi * hi) - 2 * hi * lo))


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def minkowski_square(v) -> np.ndarray:
    """``v.v`` with error-free products and compensated summation.

    Accurate to a few ulps of the result even when ``v.v`` is far smaller
    than ``|v|^2`` (highly boosted momenta).
    """
    v = np.asarray(v, dtype=float)
    s, err = _two_square(v[..., 0])
    for k in (1, 2, 3):
        sq, sq_err = _two_square(v[..., k])
        s, e = _two_sum(s, -sq)
        err = err + e - sq_err
    return s + err


def classify(v, tol: float = DEFAULT_TOL):
    """Return ``"timelike-future"``, ``"null-future"`` or ``"other"`` per vector."""
    v = np.asarray(v, dtype=float)
    sq = minkowski_dot(v, v)
    scale = np.sum(v * v, axis=-1)
    future = v[..., 0] > 0
    out = np.where(
        future & (sq > tol * scale),
        "timelike-future",
        np.where(future & (np.abs(sq) <= tol * scale), "null-future", "other"),
    )
    return str(out) if out.ndim == 0 else out


def vector_to_matrix(v) -> np.ndarray:
    """``v^{AA'}`` as a hermitian ``(..., 2, 2)`` matrix."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (4,):
        raise ContractViolation(f"four-vector needs trailing dimension 4, got {v.shape}")
    return np.einsum("...m,mab->...ab", v, SIGMA) / SQRT2


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    return bool(np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))), initial=0.0) <= tol * scale)


def matrix_to_vector(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise ContractViolation(f"spinor matrix needs shape (..., 2, 2), got {m.shape}")
    if not is_hermitian(m, tol):
        raise ContractViolation("matrix_to_vector needs a hermitian matrix")
    return np.einsum("mab,...ba->...m", SIGMA, m).real / SQRT2


def flagpole_matrix(kappa: np.ndarray) -> np.ndarray:
    """``kappa^A conj(kappa)^{A'}`` from upper components ``(..., 2)``."""
    return kappa[..., :, None] * np.conj(kappa)[..., None, :]


def sl2c_to_lorentz(s: SL2C) -> np.ndarray:
    """Real ``(..., 4, 4)`` Lorentz matrix of the world-vector action of ``T(S)``.

    ``vector_to_matrix(L @ v) == A @ vector_to_matrix(v) @ A^dagger`` with
    ``A = s.upper_action``.  With the conventions above,
    ``S = diag(exp(-i t/2), exp(i t/2))`` rotates by ``-t`` about z.
    """
    a = s.upper_action
    tr = np.einsum("mab,...bc,ncd,...ad->...mn", SIGMA, a, SIGMA, np.conj(a))
    return 0.5 * tr.real


def apply_lorentz(lam: np.ndarray, v) -> np.ndarray:
    return np.einsum("...ij,...j->...i", lam, np.asarray(v, dtype=float))


def inverse_lorentz(lam: np.ndarray) -> np.ndarray:
    """``eta @ lam.T @ eta``; exact inverse of a Lorentz matrix."""
    return ETA @ np.swapaxes(lam, -1, -2) @ ETA
