"""Registry of numerical identity checks driven by ``bwspinor verify``.

Each check draws its own random stream from ``(seed, crc32(name))`` so its
result does not depend on which other checks run or in which order.  Three
kinds exist:

* ``algebraic``: max residual of an identity; threshold overridable by ``--tol``.
* ``mc``: Monte Carlo comparison; the residual is measured in combined
  standard errors and passes at 3.
* ``exact``: bit-level properties (threshold 0).
"""
from __future__ import annotations

import itertools
import time
import zlib
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .fields import AmplitudeField, MasslessField, symmetry_residual
from .frames import (
    explicit_phase,
    frame_equivariance_residual,
    massive_spin_frame,
    massless_pi,
    massless_spin_frame,
)
from .massive import (
    BWAmplitude,
    apply_bw_matrix,
    apply_passive,
    bw_norm,
    bw_transform_matrix,
    bw_transform_matrix_direct,
    conjugate_amplitudes,
    density,
    expand_bispinor,
    extract_amplitudes,
    field_density,
    translation_phase,
    varsigma_pair,
)
from .massless import (
    MasslessAmplitude,
    apply_passive_massless,
    embed_amplitude,
    massless_norm,
    massless_phase_factor,
    phase_frame_form,
    phase_ratio_form,
)
from .quadrature import HyperboloidSampler, Wavepacket, integrate, integrate_samples, make_gaussian_field, make_massless_gaussian, transport
from .randoms import (
    complex_gaussian,
    expm_traceless,
    make_rng,
    random_massive_momenta,
    random_null_momenta,
    random_sl2c,
    random_spinors,
    random_timelike_directions,
)
from .spinors import SL2C, TwoSpinor, apply_lorentz, inverse_lorentz, matvec, sl2c_to_lorentz

SUITES = ("frames", "massive", "massless", "norms")
MC_THRESHOLD = 3.0

# Gaussian fixtures and their norms from an independent 1-d quadrature
MASSIVE_FIXTURE = {"mass": 1.0, "center": (1.0, 0.0, 0.0, 0.0), "width": 0.7, "profile": (1.0, 0.5j)}
MASSIVE_FIXTURE_NORM = 0.9398646202530309
MASSLESS_FIXTURE = {"center": (1.5, 0.0, 0.0, 1.5), "width": 1.0, "value": 1.0}
MASSLESS_FIXTURE_NORM = 1.7931967783338902


@dataclass
class SuiteConfig:
    seed: int = 0
    trials: int = 100_000
    mc_samples: int = 1_000_000
    tol: float | None = None
    masses: tuple = (1.0,)
    spins: tuple = (1, 2, 3)
    rapidity_max: float = 5.0
    report: str = "text"
    seed_source: str = "default"

    def validate(self):
        if self.trials < 10 or self.mc_samples < 100:
            raise ValueError("trials must be >= 10 and mc-samples >= 100")
        if self.tol is not None and not 0 < self.tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        if not self.masses or any(m <= 0 for m in self.masses):
            raise ValueError("masses must be positive")
        if not self.spins or any(not 1 <= n <= 8 for n in self.spins):
            raise ValueError("spins must lie in 1..8")
        if not self.rapidity_max > 0:
            raise ValueError("rapidity bound must be positive")
        if self.report not in ("text", "structured"):
            raise ValueError("report must be text or structured")
        return self

    @property
    def small_trials(self) -> int:
        """Trial count for the costlier chained checks (a tenth of ``trials``)."""
        return max(1, self.trials // 10)


@dataclass(frozen=True)
class CheckResult:
    name: str
    anchor: str
    kind: str
    trials: int
    max_residual: float
    threshold: float
    runtime: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.threshold)


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    suite: str
    kind: str
    threshold: float
    run: Callable[[SuiteConfig, np.random.Generator], tuple[int, float]] = field(repr=False)


REGISTRY: dict[str, Check] = {}


def check(name, anchor, kind="algebraic", threshold=None):
    suite = name.split(".")[0]
    if kind == "mc":
        threshold = MC_THRESHOLD
    elif kind == "exact":
        threshold = 0.0

    def register(fn):
        REGISTRY[name] = Check(name, anchor, suite, kind, threshold, fn)
        return fn

    return register


def selected(suite: str) -> list[Check]:
    if suite == "all":
        return sorted(REGISTRY.values(), key=lambda c: c.name)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    return sorted((c for c in REGISTRY.values() if c.suite == suite), key=lambda c: c.name)


def run_check(c: Check, cfg: SuiteConfig) -> CheckResult:
    rng = make_rng(np.random.SeedSequence(cfg.seed, spawn_key=(zlib.crc32(c.name.encode()),)))
    threshold = cfg.tol if (cfg.tol is not None and c.kind == "algebraic") else c.threshold
    start = time.perf_counter()
    trials, residual = c.run(cfg, rng)
    return CheckResult(c.name, c.anchor, c.kind, int(trials), float(residual), threshold, time.perf_counter() - start)


def run_suite(cfg: SuiteConfig, suite: str = "all") -> list[CheckResult]:
    cfg.validate()
    return [run_check(c, cfg) for c in selected(suite)]


# -- random instances ---------------------------------------------------------

def _masses(cfg, rng, size):
    return rng.choice(np.asarray(cfg.masses, dtype=float), size=size)


def _massive_momenta(cfg, rng, size):
    m = _masses(cfg, rng, size)
    return random_massive_momenta(rng, size, m, cfg.rapidity_max), m


def random_symmetric(rng, batch: tuple, n: int) -> np.ndarray:
    """Totally symmetric complex arrays ``batch + (2,)*n`` with entries of order one."""
    raw = complex_gaussian(rng, tuple(batch) + (2,) * n)
    b = len(batch)
    perms = list(itertools.permutations(range(n)))
    out = sum(np.transpose(raw, tuple(range(b)) + tuple(b + i for i in perm)) for perm in perms)
    return out / len(perms)


def _unit_modulus_field(rng, mass, n, sign, nu):
    """Non-decaying test field ``profile * exp(i p.a)``; pointwise checks need no envelope."""
    profile = random_symmetric(rng, (), n)
    profile = profile / np.max(np.abs(profile))
    a = rng.normal(size=4)

    def evaluator(p):
        ph = np.exp(1j * (p @ a))
        return ph.reshape(ph.shape + (1,) * n) * profile

    return AmplitudeField(evaluator, mass, n, sign, nu)


def _unit_massless_field(rng, n, kind, nu):
    a = rng.normal(size=4)
    return MasslessField(lambda p: np.exp(1j * (p @ a)), n, kind, 1, nu)


def _back(s: SL2C, p):
    return apply_lorentz(inverse_lorentz(sl2c_to_lorentz(s)), p)


# -- frames -------------------------------------------------------------------

@check("frames.massive_normalization", "spin-frame condition omega_A pi^A = 1 (massive)", threshold=1e-12)
def _(cfg, rng):
    p, m = _massive_momenta(cfg, rng, cfg.trials)
    f = massive_spin_frame(random_spinors(rng, cfg.trials), p, m)
    return cfg.trials, f.residuals()["normalization"]


@check("frames.massless_normalization", "spin-frame condition pi_A omega^A = 1 (massless)", threshold=1e-12)
def _(cfg, rng):
    p = random_null_momenta(rng, cfg.trials, cfg.rapidity_max)
    n = random_timelike_directions(rng, cfg.trials)
    f = massless_spin_frame(random_spinors(rng, cfg.trials), p, n)
    return cfg.trials, f.residuals()["normalization"]


@check("frames.momentum_reconstruction", "p = (m/sqrt2)(pi^a + omega^a)", threshold=1e-10)
def _(cfg, rng):
    p, m = _massive_momenta(cfg, rng, cfg.trials)
    f = massive_spin_frame(random_spinors(rng, cfg.trials), p, m)
    return cfg.trials, f.residuals()["momentum_reconstruction"]


@check("frames.omega_dot_p", "omega^a p_a = m/sqrt2", threshold=1e-10)
def _(cfg, rng):
    p, m = _massive_momenta(cfg, rng, cfg.trials)
    f = massive_spin_frame(random_spinors(rng, cfg.trials), p, m)
    return cfg.trials, f.residuals()["omega_dot_p"]


@check("frames.equivariance_massive", "S omega(nu, L^-1 p) = omega(S nu, p) and likewise pi", threshold=1e-10)
def _(cfg, rng):
    k = cfg.small_trials
    s = random_sl2c(rng, k)
    p, m = _massive_momenta(cfg, rng, k)
    return k, frame_equivariance_residual(s, random_spinors(rng, k), p, m)


@check("frames.equivariance_massless", "S pi(nu, L^-1 p) = pi(S nu, p); S omega(nu, n, L^-1 p) = omega(S nu, L n, p)", threshold=1e-10)
def _(cfg, rng):
    k = cfg.small_trials
    s = random_sl2c(rng, k)
    p = random_null_momenta(rng, k, cfg.rapidity_max)
    n = random_timelike_directions(rng, k)
    return k, frame_equivariance_residual(s, random_spinors(rng, k), p, 0.0, n)


@check("frames.flagpole", "pi^A conj(pi)^A' = p^{AA'} (massless)", threshold=1e-11)
def _(cfg, rng):
    p = random_null_momenta(rng, cfg.trials, cfg.rapidity_max)
    f = massless_spin_frame(random_spinors(rng, cfg.trials), p)
    return cfg.trials, f.residuals()["flagpole"]


@check("frames.phase_modulus", "pi(nu, p) = z pi(mu, p) with |z| = 1", threshold=1e-12)
def _(cfg, rng):
    p = random_null_momenta(rng, cfg.trials, cfg.rapidity_max)
    z = explicit_phase(random_spinors(rng, cfg.trials), random_spinors(rng, cfg.trials), p)
    return cfg.trials, float(np.max(np.abs(np.abs(z) - 1.0)))


@check("frames.phase_relation", "pi(nu, p) = z pi(mu, p) componentwise", threshold=1e-11)
def _(cfg, rng):
    p = random_null_momenta(rng, cfg.trials, cfg.rapidity_max)
    nu, mu = random_spinors(rng, cfg.trials), random_spinors(rng, cfg.trials)
    z = explicit_phase(nu, mu, p)
    a, b = massless_pi(nu, p).components, massless_pi(mu, p).components
    scale = np.sqrt(np.linalg.norm(p, axis=-1))
    return cfg.trials, float(np.max(np.max(np.abs(a - z[..., None] * b), axis=-1) / scale))


# -- massive ------------------------------------------------------------------

def _massive_transforms(cfg, rng, k, sign):
    s = random_sl2c(rng, k)
    p, m = _massive_momenta(cfg, rng, k)
    nu = random_spinors(rng, k)
    return s, nu, p, m, bw_transform_matrix(s, nu, p, m, sign)


@check("massive.unimodularity", "det U = 1, both energy signs", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    for sign in (1, -1):
        u = _massive_transforms(cfg, rng, cfg.trials, sign)[-1]
        worst = max(worst, float(np.max(np.abs(u.det() - 1.0))))
    return 2 * cfg.trials, worst


@check("massive.varsigma_unitarity", "conj(U)^C_A U^D_B s_CD = s_AB, both energy signs", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    for sign in (1, -1):
        u = _massive_transforms(cfg, rng, cfg.trials, sign)[-1]
        worst = max(worst, float(np.max(u.varsigma_residual())))
    return 2 * cfg.trials, worst


@check("massive.su2_pattern", "U^0_0 = conj(U^1_1), U^1_0 = -conj(U^0_1)", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    for sign in (1, -1):
        u = _massive_transforms(cfg, rng, cfg.trials, sign)[-1]
        worst = max(worst, float(np.max(u.pattern_residual())))
    return 2 * cfg.trials, worst


@check("massive.epsilon_determinant", "det U = (1/2) U_AB U^AB via BW epsilon", threshold=1e-12)
def _(cfg, rng):
    u = _massive_transforms(cfg, rng, cfg.trials, 1)[-1]
    return cfg.trials, float(np.max(np.abs(u.det_by_epsilon() - u.det())))


@check("massive.direct_form", "U from frames at L^-1 p equals U from frames at p", threshold=1e-10)
def _(cfg, rng):
    worst = 0.0
    k = cfg.small_trials
    for sign in (1, -1):
        s, nu, p, m, u = _massive_transforms(cfg, rng, k, sign)
        direct = bw_transform_matrix_direct(s, nu, p, m, sign)
        worst = max(worst, float(np.max(np.abs(direct - u.matrix))))
    return 2 * k, worst


@check("massive.composition", "U(S') U(S) = U(S'S) pointwise, spins n, both signs", threshold=1e-10)
def _(cfg, rng):
    k = cfg.small_trials
    worst = 0.0
    runs = 0
    for n in cfg.spins:
        for sign in (1, -1):
            s1, s2 = random_sl2c(rng, k), random_sl2c(rng, k)
            m0 = float(cfg.masses[0])
            p = random_massive_momenta(rng, k, m0, cfg.rapidity_max)
            fld = _unit_modulus_field(rng, m0, n, sign, TwoSpinor(complex_gaussian(rng, 2)))
            lhs = apply_passive(s2, apply_passive(s1, fld))(p)
            rhs = apply_passive(s2 @ s1, fld)(p)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            runs += k
    return runs, worst


@check("massive.roundtrip", "extract(expand(f)) = f", threshold=1e-13)
def _(cfg, rng):
    worst = 0.0
    for sign in (1, -1):
        p, m = _massive_momenta(cfg, rng, cfg.trials // 2)
        frame = massive_spin_frame(random_spinors(rng, len(p)), p, m)
        f = BWAmplitude(complex_gaussian(rng, len(p)), complex_gaussian(rng, len(p)), sign, p, frame.nu)
        g = extract_amplitudes(expand_bispinor(f, frame), frame, sign)
        worst = max(worst, float(np.max(np.abs(g.array - f.array))))
    return 2 * (cfg.trials // 2), worst


@check("massive.rest_frame_golden", "rest frame: omega=(1,0), pi=(0,1), psi=((N,0),(0,-N)), N=2^(-1/4)", threshold=1e-14)
def _(cfg, rng):
    p = np.array([1.0, 0.0, 0.0, 0.0])
    frame = massive_spin_frame((1.0, 0.0), p, 1.0)
    psi = expand_bispinor(BWAmplitude(1.0, 0.0, 1, p, frame.nu), frame)
    big_n = 2.0**-0.25
    res = [
        np.abs(frame.omega.components - [1, 0]),
        np.abs(frame.pi.components - [0, 1]),
        np.abs(psi.upper_part.components - [big_n, 0]),
        np.abs(psi.lower_part.components - [0, -big_n]),
    ]
    return 1, float(max(np.max(r) for r in res))


@check("massive.rotation_golden", "rest frame z-rotation: U = diag(e^{-it/2}, e^{it/2}) for nu=(1,0)", threshold=1e-12)
def _(cfg, rng):
    theta = rng.uniform(-np.pi, np.pi, size=16)
    worst = 0.0
    for t in theta:
        u = bw_transform_matrix(SL2C.rotation_z(t), (1.0, 0.0), (1.0, 0.0, 0.0, 0.0), 1.0).matrix
        want = np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
        worst = max(worst, float(np.max(np.abs(u - want))))
    return len(theta), worst


@check("massive.active_scalar", "amplitudes of S psi(L^-1 p) in frame(S nu, p) equal those of psi in frame(nu, L^-1 p)", threshold=1e-10)
def _(cfg, rng):
    k = cfg.small_trials
    s = random_sl2c(rng, k)
    p, m = _massive_momenta(cfg, rng, k)
    q = _back(s, p)
    nu = random_spinors(rng, k)
    frame_q = massive_spin_frame(nu, q, m)
    f = BWAmplitude(complex_gaussian(rng, k), complex_gaussian(rng, k), 1, q, nu)
    psi = expand_bispinor(f, frame_q).transformed(s)
    frame_p = massive_spin_frame(TwoSpinor(matvec(s.upper_action, nu.components)), p, m)
    g = extract_amplitudes(psi, frame_p, 1)
    scale = np.sqrt(np.linalg.norm(p, axis=-1) / m)
    return k, float(np.max(np.abs(g.array - f.array) / scale[:, None]))


@check("massive.conjugate_equivariance", "conj(U f) = conj(U) conj(f)", threshold=1e-12)
def _(cfg, rng):
    u = _massive_transforms(cfg, rng, cfg.trials, 1)[-1]
    f = complex_gaussian(rng, (cfg.trials, 2))
    lhs = conjugate_amplitudes(apply_bw_matrix(u.matrix, f, 1), 1)
    rhs = apply_bw_matrix(u.conj(), conjugate_amplitudes(f, 1), 1)
    return cfg.trials, float(np.max(np.abs(lhs - rhs)))


@check("massive.density_invariance", "varsigma density of U(S)f at p equals density of f at L^-1 p", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    runs = 0
    for n in cfg.spins:
        k = cfg.small_trials
        u = _massive_transforms(cfg, rng, k, 1 if n % 2 else -1)[-1]
        f = random_symmetric(rng, (k,), n)
        before = density(f, n)
        after = density(apply_bw_matrix(u.matrix, f, n), n)
        worst = max(worst, float(np.max(np.abs(after - before) / before)))
        runs += k
    return runs, worst


@check("massive.varsigma_pair_invariance", "f s s g invariant under U on both arguments (n=2)", threshold=1e-11)
def _(cfg, rng):
    k = cfg.small_trials
    u = _massive_transforms(cfg, rng, k, 1)[-1]
    f, g = random_symmetric(rng, (k,), 2), random_symmetric(rng, (k,), 2)
    before = varsigma_pair(f, conjugate_amplitudes(g, 2), 2)
    after = varsigma_pair(apply_bw_matrix(u.matrix, f, 2), conjugate_amplitudes(apply_bw_matrix(u.matrix, g, 2), 2), 2)
    return k, float(np.max(np.abs(after - before)))


@check("massive.field_symmetry", "U(S) preserves total symmetry of rank-n arrays", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    k = cfg.small_trials
    for n in cfg.spins:
        u = _massive_transforms(cfg, rng, k, 1)[-1]
        worst = max(worst, symmetry_residual(apply_bw_matrix(u.matrix, random_symmetric(rng, (k,), n), n), n))
    return k * len(cfg.spins), worst


# -- massless -----------------------------------------------------------------

def _massless_inputs(cfg, rng, k):
    return random_sl2c(rng, k), random_spinors(rng, k), random_null_momenta(rng, k, cfg.rapidity_max)


@check("massless.phase_modulus", "|Z(S, nu, p)| = 1", threshold=1e-13)
def _(cfg, rng):
    s, nu, p = _massless_inputs(cfg, rng, cfg.trials)
    worst = 0.0
    for z in (phase_ratio_form(s, nu, p), phase_frame_form(s, nu, p)):
        worst = max(worst, float(np.max(np.abs(np.abs(z) - 1.0))))
    return cfg.trials, worst


@check("massless.phase_forms", "[omega^A(nu, n, p) pi_A(S nu, p)]^n equals the explicit ratio", threshold=1e-11)
def _(cfg, rng):
    s, nu, p = _massless_inputs(cfg, rng, cfg.trials)
    n_vec = random_timelike_directions(rng, cfg.trials)
    ratio = phase_ratio_form(s, nu, p)
    frame = phase_frame_form(s, nu, p, n_vec)
    worst = max(float(np.max(np.abs(ratio**n - frame**n))) for n in cfg.spins)
    return cfg.trials, worst


@check("massless.rotation_golden", "nu=(0,1), p along z, z-rotation by t: Z = e^{int/2}", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    trials = 0
    for t in rng.uniform(-np.pi, np.pi, size=8):
        for energy in (0.5, 1.0, 7.0):
            for n in cfg.spins:
                z = massless_phase_factor(SL2C.rotation_z(t), (0.0, 1.0), (energy, 0.0, 0.0, energy), n)
                worst = max(worst, abs(complex(z) - np.exp(0.5j * n * t)))
                trials += 1
    return trials, worst


@check("massless.composition", "U(S') U(S) = U(S'S) pointwise on the cone, both kinds", threshold=1e-10)
def _(cfg, rng):
    k = cfg.small_trials
    worst = 0.0
    runs = 0
    for n in cfg.spins:
        for kind in ("0", "1"):
            s1, s2 = random_sl2c(rng, k), random_sl2c(rng, k)
            p = random_null_momenta(rng, k, cfg.rapidity_max)
            fld = _unit_massless_field(rng, n, kind, TwoSpinor(complex_gaussian(rng, 2)))
            lhs = apply_passive_massless(s2, apply_passive_massless(s1, fld))(p)
            rhs = apply_passive_massless(s2 @ s1, fld)(p)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            runs += k
    return runs, worst


@check("massless.embedding", "embedded amplitude: varsigma pairing with its conjugate = |f|^2", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    k = cfg.small_trials
    p = random_null_momenta(rng, k, cfg.rapidity_max)
    for n in cfg.spins:
        for kind in ("0", "1"):
            f = MasslessAmplitude(complex_gaussian(rng, k), n, p, kind)
            arr = embed_amplitude(f)
            val = varsigma_pair(arr, conjugate_amplitudes(arr, n), n)
            worst = max(worst, float(np.max(np.abs(val - np.abs(f.value) ** 2))))
    return k * 2 * len(cfg.spins), worst


@check("massless.reference_robustness", "|U(S)f|^2 at p is the same for two references nu, mu", threshold=1e-12)
def _(cfg, rng):
    k = cfg.small_trials
    s, nu, p = _massless_inputs(cfg, rng, k)
    mu = random_spinors(rng, k)
    vals = complex_gaussian(rng, k)
    fields = [MasslessField(lambda q: vals, 1, "0", 1, TwoSpinor(ref)) for ref in (nu.components[0], mu.components[0])]
    a = np.abs(apply_passive_massless(s, fields[0])(p)) ** 2
    b = np.abs(apply_passive_massless(s, fields[1])(p)) ** 2
    return k, float(np.max(np.abs(a - b) / np.abs(vals) ** 2))


# -- norms --------------------------------------------------------------------

def _massive_fixture():
    fx = MASSIVE_FIXTURE
    wp = Wavepacket(np.asarray(fx["center"]) * fx["mass"], fx["width"], np.asarray(fx["profile"]))
    return wp, make_gaussian_field(wp, fx["mass"])


def _massless_fixture():
    fx = MASSLESS_FIXTURE
    wp = Wavepacket(fx["center"], fx["width"], np.asarray(fx["value"]))
    return wp, make_massless_gaussian(wp)


def _zscore(a, b):
    (va, ea), (vb, eb) = a, b
    return abs(va - vb) / np.hypot(ea, eb)


def _seeds(rng, k=2):
    return [int(x) for x in rng.integers(0, 2**63, size=k)]


def _fixture_boost():
    # a fixed moderate transformation: rotation plus boost of rapidity 0.6
    s = SL2C.boost_z(0.6) @ SL2C.rotation_z(0.9)
    x = np.array([[0.0, 0.3], [0.3, 0.0]], dtype=complex)
    return SL2C(expm_traceless(x)) @ s


def moved_sampler(wp, mass, s, seed, **kw):
    """Sampler centred on the transformed packet, twice as wide to cover its distortion."""
    center = apply_lorentz(sl2c_to_lorentz(s), wp.center)
    width = 2.0 * max(mass, float(np.linalg.norm(center[1:])), wp.width)
    return HyperboloidSampler(mass, center[1:], width, seed=seed, **kw)


@check("norms.massive_oracle", "massive Gaussian norm vs independent quadrature value", kind="mc")
def _(cfg, rng):
    wp, f = _massive_fixture()
    value, err = bw_norm(f, wp.sampler(f.mass, seed=_seeds(rng, 1)[0]), cfg.mc_samples)
    return cfg.mc_samples, abs(value - MASSIVE_FIXTURE_NORM) / err


@check("norms.massless_oracle", "cone Gaussian norm vs independent quadrature value", kind="mc")
def _(cfg, rng):
    wp, f = _massless_fixture()
    value, err = massless_norm(f, wp.sampler(0.0, seed=_seeds(rng, 1)[0]), cfg.mc_samples)
    return cfg.mc_samples, abs(value - MASSLESS_FIXTURE_NORM) / err


@check("norms.massive_unitarity", "norm of U(S)f equals norm of f, independent samples", kind="mc")
def _(cfg, rng):
    wp, f = _massive_fixture()
    s = _fixture_boost()
    s1, s2 = _seeds(rng)
    a = bw_norm(f, wp.sampler(f.mass, seed=s1), cfg.mc_samples)
    b = bw_norm(apply_passive(s, f), moved_sampler(wp, f.mass, s, s2), cfg.mc_samples)
    return 2 * cfg.mc_samples, _zscore(a, b)


@check("norms.massless_unitarity", "cone norm of U(S)f equals norm of f, independent samples", kind="mc")
def _(cfg, rng):
    wp, f = _massless_fixture()
    s = _fixture_boost()
    s1, s2 = _seeds(rng)
    a = massless_norm(f, wp.sampler(0.0, seed=s1), cfg.mc_samples)
    b = massless_norm(apply_passive_massless(s, f), moved_sampler(wp, 0.0, s, s2), cfg.mc_samples)
    return 2 * cfg.mc_samples, _zscore(a, b)


def _measure_invariance(cfg, rng, mass):
    # int d mu_m g(L^-1 p) = int d mu_m g(p) for a Gaussian g in the 3-momentum
    width = 1.0
    k0 = np.array([0.3, -0.2, 0.5])
    center = np.concatenate([[np.hypot(mass, np.linalg.norm(k0))], k0])
    s = _fixture_boost()
    lam_inv = inverse_lorentz(sl2c_to_lorentz(s))

    def g(p):
        return np.exp(-0.5 * np.sum((p[..., 1:] - k0) ** 2, axis=-1) / width**2)

    s1, s2 = _seeds(rng)
    wp = Wavepacket(center, width, np.asarray(1.0))
    a = integrate(g, wp.sampler(mass, seed=s1), cfg.mc_samples)
    b = integrate(lambda p: g(apply_lorentz(lam_inv, p)), moved_sampler(wp, mass, s, s2), cfg.mc_samples)
    return 2 * cfg.mc_samples, _zscore(a, b)


@check("norms.measure_invariance_massive", "d^3p/2p^0 is Lorentz invariant (m = 1)", kind="mc")
def _(cfg, rng):
    return _measure_invariance(cfg, rng, 1.0)


@check("norms.measure_invariance_massless", "d^3p/2|p| is Lorentz invariant (m = 0)", kind="mc")
def _(cfg, rng):
    return _measure_invariance(cfg, rng, 0.0)


@check("norms.transported_samples", "norm of U(S)f on transported samples equals norm of f", threshold=1e-12)
def _(cfg, rng):
    k = cfg.small_trials
    wp, f = _massive_fixture()
    s = _fixture_boost()
    samples = wp.sampler(f.mass, seed=_seeds(rng, 1)[0]).sample(k)
    a, _ = integrate_samples(lambda p: field_density(f, p), samples)
    b, _ = integrate_samples(lambda p: field_density(apply_passive(s, f), p), transport(samples, sl2c_to_lorentz(s)))
    wq, g = _massless_fixture()
    cone = wq.sampler(0.0, seed=_seeds(rng, 1)[0]).sample(k)
    c, _ = integrate_samples(lambda p: np.abs(g(p)) ** 2, cone)
    d, _ = integrate_samples(lambda p: np.abs(apply_passive_massless(s, g)(p)) ** 2, transport(cone, sl2c_to_lorentz(s)))
    return 2 * k, max(abs(a - b) / a, abs(c - d) / c)


@check("norms.translation_phase", "translation phase leaves the norm unchanged", threshold=1e-14)
def _(cfg, rng):
    wp, f = _massive_fixture()
    samples = wp.sampler(f.mass, seed=_seeds(rng, 1)[0]).sample(cfg.small_trials)
    a, _ = integrate_samples(lambda p: field_density(f, p), samples)
    moved = translation_phase(rng.normal(size=4), f)
    b, _ = integrate_samples(lambda p: field_density(moved, p), samples)
    return cfg.small_trials, abs(a - b) / a


@check("norms.on_shell", "sampled momenta satisfy p.p = m^2", threshold=1e-12)
def _(cfg, rng):
    worst = 0.0
    for mass in (0.0,) + tuple(cfg.masses):
        p, _ = HyperboloidSampler(mass, seed=_seeds(rng, 1)[0]).sample(cfg.small_trials)
        sq = p[:, 0] ** 2 - np.sum(p[:, 1:] ** 2, axis=-1)
        scale = np.maximum(mass**2, np.sum(p[:, 1:] ** 2, axis=-1))
        worst = max(worst, float(np.max(np.abs(sq - mass**2) / scale)))
    return cfg.small_trials * (1 + len(cfg.masses)), worst


@check("norms.determinism", "identical seed gives a bit-identical sample stream", kind="exact")
def _(cfg, rng):
    seed = _seeds(rng, 1)[0]
    worst = 0.0
    for mass in (0.0, 1.0):
        a = HyperboloidSampler(mass, seed=seed, nu=TwoSpinor((0.0, 1.0)) if mass == 0 else None)
        b = replace(a, drawn=0)
        for _ in range(3):
            (pa, wa), (pb, wb) = a.sample(1000), b.sample(1000)
            same = np.array_equal(pa, pb) and np.array_equal(wa, wb)
            worst = max(worst, 0.0 if same else 1.0)
    return 6000, worst

