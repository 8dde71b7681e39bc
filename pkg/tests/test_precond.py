"""Shift-splitting preconditioner family: config validation, the block
back-substitution solve against an explicit-matrix oracle, and the splitting
identity P - Q = coefficient matrix."""

import numpy as np
import pytest

from saddlekit.dense import NotPositiveDefinite, lu_solve
from saddlekit.precond import (KINDS, GssConfig, apply_bd, build, build_bd,
                               gss_dense_matrix, make_config,
                               splitting_residual)
from saddlekit.system import BlockVector, rhs_for_ones

from conftest import random_system


def all_kind_configs(sys):
    """One representative config per variant for the given system."""
    return {
        "pess": make_config("pess", lambda1=1.0, lambda2=1.0, lambda3=0.001,
                            s=2.0),
        "lpess": make_config("lpess", lambda2=1.0, lambda3=0.001, s=2.0),
        "ss": make_config("ss", alpha=0.1),
        "rss": make_config("rss", alpha=0.1),
        "egss": make_config("egss", alpha=0.1, beta=1.0, gamma=0.001),
        "rpgss": make_config("rpgss", beta=1.0, gamma=0.001),
    }


# -- configuration -------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        GssConfig(1.0, 1.0, 1.0, s=-1.0, t=1.0)
    with pytest.raises(ValueError):
        GssConfig(1.0, 1.0, 1.0, s=1.0, t=-0.5)
    with pytest.raises(ValueError):
        GssConfig(None, 1.0, 1.0, s=1.0, t=0.0)  # zero (1,1) shift, t = 0
    with pytest.raises(ValueError):
        GssConfig(1.0, None, 1.0, s=1.0, t=1.0)
    with pytest.raises(ValueError):
        GssConfig(1.0, 1.0, None, s=1.0, t=1.0)


def test_is_pess_property():
    assert GssConfig(1.0, 1.0, 1.0, s=2.0, t=2.0).is_pess
    assert not GssConfig(None, 1.0, 1.0, s=2.0, t=2.0).is_pess
    assert not GssConfig(1.0, 1.0, 1.0, s=2.0, t=1.0).is_pess


def test_make_config_unknown_kind():
    with pytest.raises(ValueError):
        make_config("nope", alpha=1.0)


def test_make_config_positivity_checks():
    with pytest.raises(ValueError):
        make_config("ss", alpha=0.0)
    with pytest.raises(ValueError):
        make_config("egss", alpha=1.0, beta=-1.0, gamma=1.0)
    with pytest.raises(ValueError):
        make_config("rpgss", beta=1.0, gamma=0.0)


def test_make_config_half_shift_folding():
    cfg = make_config("ss", alpha=0.2)
    assert cfg.lambda1 == cfg.lambda2 == cfg.lambda3 == pytest.approx(0.1)
    assert cfg.s == cfg.t == 0.5
    cfg = make_config("rpgss", beta=2.0, gamma=4.0)
    assert cfg.lambda1 is None
    assert cfg.lambda2 == pytest.approx(2.0)
    assert cfg.s == cfg.t == 1.0


# -- block solve vs explicit matrix ---------------------------------------


@pytest.mark.parametrize("kind", KINDS)
def test_apply_matches_dense_oracle(kind, small_system, rng):
    cfg = all_kind_configs(small_system)[kind]
    P = build(small_system, cfg)
    M = P.dense_matrix()
    for _ in range(50):
        r = rng.standard_normal(small_system.size)
        w = P.apply(r)
        ref = lu_solve(M, r)
        assert np.linalg.norm(w - ref) / np.linalg.norm(ref) < 1e-10


def test_dense_matrix_matches_gss_dense(small_system):
    cfg = all_kind_configs(small_system)["pess"]
    P = build(small_system, cfg)
    assert np.allclose(P.dense_matrix(),
                       gss_dense_matrix(small_system, cfg), atol=0.0)


def test_apply_block_vector_and_multicolumn(small_system, rng):
    cfg = all_kind_configs(small_system)["lpess"]
    P = build(small_system, cfg)
    d = rhs_for_ones(small_system)
    w = P.apply(d)
    assert isinstance(w, BlockVector)
    assert np.allclose(w.to_array(), P.apply(d.to_array()))
    R = rng.standard_normal((small_system.size, 3))
    W = P.apply(R)
    assert np.allclose(W[:, 1], P.apply(R[:, 1]))


def test_callable_alias(small_system, rng):
    cfg = all_kind_configs(small_system)["ss"]
    P = build(small_system, cfg)
    r = rng.standard_normal(small_system.size)
    assert np.array_equal(P(r), P.apply(r))


def test_inner_cg_matches_dense_strategy(small_system, rng):
    cfg = all_kind_configs(small_system)["pess"]
    Pd = build(small_system, cfg, strategy="dense")
    Pc = build(small_system, cfg, strategy="inner-cg")
    assert Pc.ablock_factor is None
    r = rng.standard_normal(small_system.size)
    assert np.allclose(Pc.apply(r), Pd.apply(r), atol=1e-8)


def test_build_bad_strategy(small_system):
    with pytest.raises(ValueError):
        build(small_system, all_kind_configs(small_system)["pess"],
              strategy="magic")


def test_build_rejects_indefinite_lambda3(small_system):
    cfg = GssConfig(1.0, 1.0, np.diag(-np.ones(small_system.p)), s=1.0, t=1.0)
    with pytest.raises(NotPositiveDefinite, match="lambda3"):
        build(small_system, cfg)


# -- splitting identity ----------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
def test_splitting_identity(kind, small_system):
    cfg = all_kind_configs(small_system)[kind]
    assert splitting_residual(small_system, cfg) < 1e-12


def test_splitting_identity_random_systems():
    for seed in range(5):
        sysv = random_system(np.random.default_rng(seed))
        cfg = make_config("pess", lambda1=0.5, lambda2=2.0, lambda3=0.01,
                          s=3.0)
        assert splitting_residual(sysv, cfg) < 1e-12


# -- block diagonal baseline ------------------------------------------------


def test_bd_matches_explicit_blocks(small_system, rng):
    P = build_bd(small_system)
    A = small_system.A.to_dense()
    B = small_system.B.to_dense()
    C = small_system.C.to_dense()
    S = B @ np.linalg.solve(A, B.T)
    CSC = C @ np.linalg.solve(S, C.T)
    import scipy.linalg as sla
    M = sla.block_diag(A, S, CSC)
    r = rng.standard_normal(small_system.size)
    assert np.allclose(apply_bd(P, r), np.linalg.solve(M, r), atol=1e-8)
    d = rhs_for_ones(small_system)
    assert isinstance(P.apply(d), BlockVector)
