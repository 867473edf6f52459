"""ADMM solvers: trivial cases, small exact recovery, schedule invariants."""

import numpy as np
import pytest

import tubal as tb
from tubal.errors import DimMismatch
from tubal.solve import AdmmConfig, _penalty

RNG = np.random.default_rng(31337)


def test_config_validation():
    with pytest.raises(ValueError):
        AdmmConfig(rho=1.0)
    with pytest.raises(ValueError):
        AdmmConfig(mu0=0.0)
    with pytest.raises(ValueError):
        AdmmConfig(mu0=1.0, mu_max=0.5)
    with pytest.raises(ValueError):
        AdmmConfig(eps=0.0)
    with pytest.raises(ValueError):
        AdmmConfig(max_iter=0)


def test_penalty_trajectory_exact():
    cfg = AdmmConfig()
    for k in (0, 1, 5, 100, 400):
        assert _penalty(cfg, k) == min(cfg.mu0 * cfg.rho ** k, cfg.mu_max)


def test_gaussian_zero_measurements_give_zero():
    gmap = tb.make_gaussian_map(25, (3, 3, 2), seed=1)
    xhat, report = tb.solve_gaussian(gmap, np.zeros(25))
    assert np.abs(xhat).max() == 0.0
    assert report.converged and report.iterations <= 2
    assert all(v <= AdmmConfig.eps for v in report.residuals.values())


def test_gaussian_small_exact_recovery():
    # 4x4x2, tubal rank 1, m = 3*1*(4+4-1)*2 + 1 = 43 measurements
    m = tb.gaussian_bound(4, 4, 2, 1)
    assert m == 43
    x0 = tb.rand_low_tubal(4, 4, 2, 1, seed=3)
    gmap = tb.make_gaussian_map(m, (4, 4, 2), seed=5)
    xhat, report = tb.solve_gaussian(gmap, tb.apply_map(gmap, x0))
    assert report.converged
    assert tb.rel_error(xhat, x0) <= 1e-5
    assert tb.tnn(xhat) <= tb.tnn(x0) * (1 + 1e-6)


def test_gaussian_woodbury_and_direct_paths_agree():
    # m < d exercises the Woodbury branch; m >= d the direct factorization
    x0 = tb.rand_low_tubal(4, 4, 3, 1, seed=11)
    d = 48
    for m in (d - 5, d + 5):
        gmap = tb.make_gaussian_map(m, (4, 4, 3), seed=13)
        xhat, report = tb.solve_gaussian(gmap, tb.apply_map(gmap, x0))
        assert report.converged
        assert tb.rel_error(xhat, x0) <= 1e-4


def test_gaussian_dim_mismatch():
    gmap = tb.make_gaussian_map(10, (2, 2, 2), seed=0)
    with pytest.raises(DimMismatch):
        tb.solve_gaussian(gmap, np.zeros(11))


def test_gaussian_not_converged_report():
    x0 = tb.rand_low_tubal(4, 4, 2, 1, seed=3)
    gmap = tb.make_gaussian_map(43, (4, 4, 2), seed=5)
    cfg = AdmmConfig(max_iter=3)
    xhat, report = tb.solve_gaussian(gmap, tb.apply_map(gmap, x0), cfg)
    assert not report.converged and report.iterations == 3
    assert np.isfinite(xhat).all()


def test_gaussian_deterministic_and_history():
    x0 = tb.rand_low_tubal(3, 3, 2, 1, seed=21)
    gmap = tb.make_gaussian_map(25, (3, 3, 2), seed=22)
    y = tb.apply_map(gmap, x0)
    cfg = AdmmConfig(record_history=True)
    x1, r1 = tb.solve_gaussian(gmap, y, cfg)
    x2, r2 = tb.solve_gaussian(gmap, y, cfg)
    assert np.array_equal(x1, x2)
    assert r1.iterations == r2.iterations
    assert len(r1.history) == r1.iterations
    for row1, row2 in zip(r1.history, r2.history):
        assert row1 == row2
    mus = [row["mu"] for row in r1.history]
    cfg0 = AdmmConfig()
    assert mus == [min(cfg0.mu0 * cfg0.rho ** k, cfg0.mu_max)
                   for k in range(r1.iterations)]


def test_completion_fully_observed():
    m_full = tb.rand_low_tubal(8, 8, 4, 2, seed=31, scale="inv_n")
    mask = tb.make_bernoulli_mask((8, 8, 4), 1.0, seed=32)
    xhat, report = tb.solve_completion(mask, tb.proj_omega(mask, m_full))
    assert report.converged
    assert tb.rel_error(xhat, m_full) <= 1e-6


def test_completion_small_exact_recovery():
    m_full = tb.rand_low_tubal(20, 20, 10, 2, seed=41, scale="inv_n")
    mask = tb.make_bernoulli_mask((20, 20, 10), 0.7, seed=42)
    xhat, report = tb.solve_completion(mask, tb.proj_omega(mask, m_full))
    assert report.converged
    assert tb.rel_error(xhat, m_full) <= 1e-5
    assert tb.tubal_rank(xhat, 1e-3) == 2
    assert tb.tnn(xhat) <= tb.tnn(m_full) * (1 + 1e-6)


def test_completion_unobserved_entries_ignored():
    # contract: unobserved entries of the input are zeros; garbage there
    # must not change the solve because the solver re-projects
    m_full = tb.rand_low_tubal(10, 10, 4, 1, seed=51, scale="inv_n")
    mask = tb.make_bernoulli_mask((10, 10, 4), 0.8, seed=52)
    clean = tb.proj_omega(mask, m_full)
    dirty = clean + tb.proj_omega_c(mask, np.full((10, 10, 4), 9.0))
    x1, _ = tb.solve_completion(mask, clean)
    x2, _ = tb.solve_completion(mask, dirty)
    assert np.array_equal(x1, x2)


def test_completion_dim_mismatch():
    mask = tb.make_bernoulli_mask((3, 3, 3), 0.5, seed=0)
    with pytest.raises(DimMismatch):
        tb.solve_completion(mask, np.zeros((3, 3, 4)))


def test_completion_residual_names_and_history():
    m_full = tb.rand_low_tubal(6, 6, 3, 1, seed=61, scale="inv_n")
    mask = tb.make_bernoulli_mask((6, 6, 3), 0.9, seed=62)
    cfg = AdmmConfig(record_history=True)
    _, report = tb.solve_completion(mask, tb.proj_omega(mask, m_full), cfg)
    assert set(report.residuals) == {"res_x", "res_e", "res_feas"}
    assert report.converged
    assert all(v <= cfg.eps for v in report.residuals.values())
    assert len(report.history) == report.iterations
