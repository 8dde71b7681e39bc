"""Stationary fixed-point scheme: convergence against the spectral-radius
criterion and against the closed-form predicate on the scaled spectrum."""

import numpy as np
import pytest

from saddlekit.precond import build, make_config
from saddlekit.stationary import (Diverged, convergence_predicate,
                                  pess_iterate, scaled_spectrum,
                                  spectral_radius_iteration_matrix,
                                  sufficient_s_lower_bound)
from saddlekit.system import rhs_for_ones

from conftest import random_system


def pess_cfg(s, lam3=0.001):
    return make_config("pess", lambda1=1.0, lambda2=1.0, lambda3=lam3, s=s)


def test_iteration_recovers_ones(small_system):
    cfg = pess_cfg(2.0)
    rep = pess_iterate(small_system, cfg, rhs_for_ones(small_system),
                       tol=1e-10, maxit=50000)
    assert rep.converged
    assert np.allclose(rep.solution, np.ones(small_system.size), atol=1e-6)
    assert rep.final_res < 1e-10
    assert np.all(np.isfinite(rep.error_history))


def test_iteration_accepts_flat_rhs(small_system):
    cfg = pess_cfg(2.0)
    d = rhs_for_ones(small_system).to_array()
    rep = pess_iterate(small_system, cfg, d, tol=1e-8, maxit=50000)
    assert rep.converged


def test_warm_start_zero_iterations(small_system):
    cfg = pess_cfg(2.0)
    rep = pess_iterate(small_system, cfg, rhs_for_ones(small_system),
                       u0=np.ones(small_system.size), tol=1e-8)
    assert rep.converged and rep.iterations == 0


def test_maxit_reached(small_system):
    cfg = pess_cfg(2.0)
    rep = pess_iterate(small_system, cfg, rhs_for_ones(small_system),
                       tol=1e-14, maxit=3)
    assert not rep.converged
    assert rep.iterations == 3


def test_divergence_raises(small_system):
    # a tiny s with tiny shifts puts the spectral radius far above one
    cfg = pess_cfg(0.01, lam3=1e-6)
    pred = convergence_predicate(small_system, cfg)
    assert not pred.holds
    with pytest.raises(Diverged):
        pess_iterate(small_system, cfg, rhs_for_ones(small_system),
                     maxit=100000)


def test_predicate_requires_symmetric_scheme(small_system):
    cfg = make_config("lpess", lambda2=1.0, lambda3=0.001, s=2.0)
    with pytest.raises(ValueError):
        convergence_predicate(small_system, cfg)


def test_predicate_reports_witness(small_system):
    cfg = pess_cfg(2.0)
    pred = convergence_predicate(small_system, cfg)
    assert pred.holds
    assert pred.min_lhs > 0
    lhs = (2 * cfg.s - 1) * abs(pred.witness) ** 2 + 2 * pred.witness.real
    assert lhs == pytest.approx(pred.min_lhs, rel=1e-12)
    assert pred.lhs_values.min() == pytest.approx(pred.min_lhs)


def test_predicate_accepts_precomputed_spectrum(small_system):
    cfg = pess_cfg(2.0)
    mu = scaled_spectrum(small_system, cfg)
    a = convergence_predicate(small_system, cfg)
    b = convergence_predicate(small_system, cfg, mu=mu)
    assert a.holds == b.holds
    assert a.min_lhs == pytest.approx(b.min_lhs)


def test_predicate_matches_spectral_radius_on_random_systems():
    """Equivalence: predicate > 0 for every scaled eigenvalue iff the
    iteration matrix has spectral radius < 1.  Covers s >= 1/2 (always
    convergent) and engineered s < 1/2 violations."""
    s_values = [2.0, 1.0, 0.5, 0.3, 0.05, 0.01]
    checked = 0
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        sysv = random_system(rng, n=10, m=6, p=4)
        s = s_values[seed % len(s_values)]
        lam3 = 1e-4 if s < 0.5 else 0.001
        cfg = pess_cfg(s, lam3=lam3)
        pred = convergence_predicate(sysv, cfg)
        rho = spectral_radius_iteration_matrix(sysv, build(sysv, cfg))
        if abs(rho - 1.0) < 1e-8:
            continue  # borderline: both sides are numerically ambiguous
        assert pred.holds == (rho < 1.0), (seed, s, rho, pred.min_lhs)
        if s >= 0.5:
            assert pred.holds and rho < 1.0
        checked += 1
    assert checked >= 18


def test_some_engineered_violations_occur():
    violations = 0
    for seed in range(20):
        sysv = random_system(np.random.default_rng(100 + seed), n=10, m=6, p=4)
        if not convergence_predicate(sysv, pess_cfg(0.01, lam3=1e-4)).holds:
            violations += 1
    assert violations > 0


def test_sufficient_bound_guarantees_convergence(small_system):
    cfg0 = pess_cfg(1.0)
    bound = sufficient_s_lower_bound(small_system, cfg0)
    assert 0.0 <= bound <= 0.5
    s = bound + 0.05
    pred = convergence_predicate(small_system, pess_cfg(s))
    rho = spectral_radius_iteration_matrix(small_system,
                                           build(small_system, pess_cfg(s)))
    assert pred.holds and rho < 1.0
