"""Acceptance criteria at full trial counts and stated tolerances.

Each criterion is a bundle of registered checks run with the default
configuration: 10^5 instances per algebraic check, 10^4 for chained checks
(equivariance, composition) and 10^6 samples per Monte Carlo integral.
"""
import numpy as np
import pytest

from bwspinor.checks import REGISTRY, SuiteConfig, run_check

CONFIG = SuiteConfig()

CRITERIA = {
    1: ("spin-frame normalization, massive and massless", ["frames.massive_normalization", "frames.massless_normalization"]),
    2: ("momentum reconstruction and omega.p", ["frames.momentum_reconstruction", "frames.omega_dot_p"]),
    3: ("spin-frame equivariance", ["frames.equivariance_massive", "frames.equivariance_massless"]),
    4: ("flagpole factorization and phase relation", ["frames.flagpole", "frames.phase_modulus", "frames.phase_relation"]),
    5: ("unimodularity and varsigma-unitarity, both signs", ["massive.unimodularity", "massive.varsigma_unitarity"]),
    6: ("composition law, massive and massless", ["massive.composition", "massless.composition"]),
    7: ("expand/extract round trip and rest-frame golden", ["massive.roundtrip", "massive.rest_frame_golden"]),
    8: ("pointwise density and Monte Carlo norm invariance",
        ["massive.density_invariance", "norms.massive_unitarity", "norms.massless_unitarity",
         "norms.massive_oracle", "norms.massless_oracle"]),
    9: ("massless phase: modulus, two forms, rotation golden",
        ["massless.phase_modulus", "massless.phase_forms", "massless.rotation_golden"]),
    10: ("measure invariance m in {0,1} and sampler determinism",
         ["norms.measure_invariance_massive", "norms.measure_invariance_massless", "norms.determinism"]),
}

# tolerances the criteria state; registered thresholds must not be looser
STATED = {
    "frames.massive_normalization": 1e-12,
    "frames.massless_normalization": 1e-12,
    "frames.momentum_reconstruction": 1e-10,
    "frames.omega_dot_p": 1e-10,
    "frames.equivariance_massive": 1e-10,
    "frames.equivariance_massless": 1e-10,
    "frames.flagpole": 1e-11,
    "frames.phase_modulus": 1e-12,
    "frames.phase_relation": 1e-11,
    "massive.unimodularity": 1e-12,
    "massive.varsigma_unitarity": 1e-12,
    "massive.composition": 1e-10,
    "massless.composition": 1e-10,
    "massive.roundtrip": 1e-13,
    "massive.rest_frame_golden": 1e-14,
    "massive.density_invariance": 1e-12,
    "norms.massive_unitarity": 3.0,
    "norms.massless_unitarity": 3.0,
    "norms.massive_oracle": 3.0,
    "norms.massless_oracle": 3.0,
    "massless.phase_modulus": 1e-13,
    "massless.phase_forms": 1e-11,
    "massless.rotation_golden": 1e-12,
    "norms.measure_invariance_massive": 3.0,
    "norms.measure_invariance_massless": 3.0,
    "norms.determinism": 0.0,
}

# minimum instance counts the criteria ask for
COUNTS = {
    "frames.massive_normalization": 10**5,
    "frames.massless_normalization": 10**5,
    "frames.momentum_reconstruction": 10**5,
    "frames.equivariance_massive": 10**4,
    "frames.equivariance_massless": 10**4,
    "massive.unimodularity": 2 * 10**5,
    "massive.varsigma_unitarity": 2 * 10**5,
    "massive.composition": 6 * 10**4,
    "massive.roundtrip": 10**5,
    "norms.massive_unitarity": 2 * 10**6,
    "norms.massless_unitarity": 2 * 10**6,
    "norms.measure_invariance_massive": 2 * 10**6,
    "norms.measure_invariance_massless": 2 * 10**6,
}


def test_stated_tolerances_are_respected():
    for name, tol in STATED.items():
        assert REGISTRY[name].threshold <= tol, name
    assert CONFIG.trials == 10**5 and CONFIG.mc_samples == 10**6 and CONFIG.small_trials == 10**4
    assert CONFIG.spins == (1, 2, 3) and CONFIG.rapidity_max == 5.0


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, record_criterion):
    title, names = CRITERIA[number]
    results = [run_check(REGISTRY[name], CONFIG) for name in names]
    short = [f"{r.name} {r.max_residual:.1e}{' stderr' if r.kind == 'mc' else ''}/{r.threshold:.0e}" for r in results]
    undercounted = [r.name for r in results if r.trials < COUNTS.get(r.name, 0)]
    passed = all(r.passed for r in results) and not undercounted
    record_criterion(number, title, passed, "; ".join(short))
    assert not undercounted, f"too few instances: {undercounted}"
    for r in results:
        assert np.isfinite(r.max_residual) and r.passed, f"{r.name}: residual {r.max_residual:.3e} > {r.threshold:.1e}"
