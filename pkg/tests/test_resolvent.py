import numpy as np
import pytest

import stringchain as sc
from stringchain.chain_core import l2_norm, sample_function, uniform_grids
from stringchain.errors import (
    QuadratureTooCoarse,
    SignConventionMismatch,
    ZeroBeta,
)
from stringchain.resolvent import (
    random_probe,
    schrodinger_norm_scan,
    wave_resolvent_norm_scan,
)


def _const_vector_load(cfg, points, vec):
    grids = uniform_grids(cfg, points)
    return sc.ChainFunction(
        grids, [np.tile(np.asarray(vec, complex), (points, 1)) for _ in grids]
    )


def _vector_rel_diff(a, b):
    num = den = 0.0
    for j in range(a.n_edges):
        xa = a.grids[j]
        vb = np.stack([np.interp(xa, b.grids[j], b.values[j][:, c]) for c in range(2)], axis=1)
        num += np.trapezoid(np.sum(np.abs(a.values[j] - vb) ** 2, axis=1), xa).real
        den += np.trapezoid(np.sum(np.abs(a.values[j]) ** 2, axis=1), xa).real
    return np.sqrt(num / den)


def test_wave_resolvent_zero_load():
    cfg = sc.ChainConfig(densities=(1.0, 2.0))
    g = _const_vector_load(cfg, 201, [0.0, 0.0])
    sol = sc.wave_resolvent(cfg, 3.0, g)
    assert max(np.max(np.abs(v)) for v in sol.W.values) <= 1e-14
    assert all(np.max(np.abs(f)) <= 1e-14 for f in sol.F)


def test_wave_resolvent_matches_box_oracle_single_edge():
    cfg = sc.ChainConfig(densities=(1.0,))
    sol = sc.wave_resolvent(cfg, 1.0, _const_vector_load(cfg, 1001, [1.0, 0.0]))
    ref = sc.fd_bvp_solve(cfg, 1.0j, _const_vector_load(cfg, 2001, [1.0, 0.0]), "wave", 2000)
    assert _vector_rel_diff(sol.W, ref) <= 0.01


def test_wave_resolvent_residual_three_edges():
    cfg = sc.ChainConfig(densities=(1.0, 4.0, 9.0))
    grids = uniform_grids(cfg, 2000)
    g = random_probe(cfg, grids, seed=17, arity=2)
    sol = sc.wave_resolvent(cfg, 10.0, g)
    assert sol.residual <= 1e-3


def test_wave_resolvent_boundary_rows_and_joints():
    cfg = sc.ChainConfig(densities=(1.0, 4.0, 9.0))
    g = random_probe(cfg, uniform_grids(cfg, 1001), seed=3, arity=2)
    sol = sc.wave_resolvent(cfg, 7.0, g)
    scale = max(np.max(np.abs(v)) for v in sol.W.values)
    # exact transmission by construction
    for j in range(1, 3):
        assert np.max(np.abs(sol.W.values[j - 1][-1] - sol.W.values[j][0])) <= 1e-12 * scale
    w0 = sol.W.values[0][0]
    assert abs(w0[0] - w0[1]) <= 1e-9 * scale  # damped row (1,-1) W(0) = 0
    assert abs(sol.W.values[-1][-1][0]) <= 1e-9 * scale  # clamped row


def test_wave_resolvent_affine_bookkeeping():
    # F_j equals the propagated product minus the accumulated load part
    cfg = sc.ChainConfig(densities=(1.0, 2.0, 3.0, 4.0))
    g = random_probe(cfg, uniform_grids(cfg, 801), seed=11, arity=2)
    beta = 4.0
    sol = sc.wave_resolvent(cfg, beta, g)
    prod = np.eye(2, dtype=complex)
    for j in range(1, cfg.n_edges):
        if j >= 2:
            prod = sc.exp_osc(cfg.densities[j - 1], beta, 1.0) @ prod
        expect = prod @ sol.F[0] - sol.Gamma[j - 1]
        assert np.max(np.abs(expect - sol.F[j])) <= 1e-10 * max(1.0, np.max(np.abs(sol.F[j])))


def test_wave_resolvent_residual_second_order():
    cfg = sc.ChainConfig(densities=(1.0, 4.0))
    res = []
    for p in (501, 1001):
        g = sample_function(cfg, p, lambda x: np.sin(np.pi * x) + 0.3 * np.cos(2 * np.pi * x))
        gv = sc.ChainFunction(g.grids, [np.stack([v, 0.5 * v], axis=1) for v in g.values])
        res.append(sc.wave_resolvent(cfg, 6.0, gv).residual)
    assert res[0] / res[1] >= 3.0


def test_wave_resolvent_quadrature_guard():
    cfg = sc.ChainConfig(densities=(1.0,))
    g = _const_vector_load(cfg, 100, [1.0, 0.0])
    with pytest.raises(QuadratureTooCoarse):
        sc.wave_resolvent(cfg, 200.0, g)


def test_wave_norm_scan_monotone_in_probes():
    cfg = sc.ChainConfig(densities=(1.0, 2.0))
    est = [
        wave_resolvent_norm_scan(cfg, [50.0], probes=k, seed=0)[0].norm_estimate
        for k in (1, 4, 16)
    ]
    assert est[0] <= est[1] <= est[2]


def test_wave_norm_scan_bounded():
    cfg = sc.ChainConfig(densities=(1.0,))
    betas = np.logspace(0, 3, 16)
    pts = wave_resolvent_norm_scan(cfg, betas, probes=4, seed=0)
    ests = np.array([p.norm_estimate for p in pts])
    assert np.all(np.isfinite(ests))
    assert ests.max() <= 10.0


def test_wave_norm_scan_within_factor_three_of_fd():
    cfg = sc.ChainConfig(densities=(1.0, 2.0))
    op = sc.fd_wave_matrix(cfg, 600)
    for beta in (10.0, 100.0):
        fd = sc.fd_resolvent_norm(op, beta)
        est = wave_resolvent_norm_scan(cfg, [beta], probes=64, seed=0)[0].norm_estimate
        assert est <= fd * 1.05  # probe max is a lower bound (plus fd discretization slack)
        assert fd <= 3.0 * est


def test_schrodinger_resolvent_zero_load():
    cfg = sc.ChainConfig(densities=(1.0,))
    g = sample_function(cfg, 301, lambda x: np.zeros_like(x, dtype=complex))
    sol = sc.schrodinger_resolvent(cfg, 9.0, g)
    assert max(np.max(np.abs(v)) for v in sol.u.values) <= 1e-14


def test_schrodinger_resolvent_vs_oracle():
    cfg = sc.ChainConfig(densities=(1.0,))
    g = sample_function(cfg, 1601, lambda x: np.ones_like(x, dtype=complex))
    sol = sc.schrodinger_resolvent(cfg, 25.0, g)
    ref = sc.fd_bvp_solve(cfg, 25.0j, g, "schrodinger", 1600)
    num = den = 0.0
    for j in range(1):
        xa = sol.u.grids[j]
        vb = np.interp(xa, ref.grids[j], ref.values[j])
        num += np.trapezoid(np.abs(sol.u.values[j] - vb) ** 2, xa).real
        den += np.trapezoid(np.abs(sol.u.values[j]) ** 2, xa).real
    assert np.sqrt(num / den) <= 0.01
    assert sol.residual <= 1e-3


def test_schrodinger_coefficients_match_traces():
    cfg = sc.ChainConfig(densities=(1.0, 4.0))
    g = random_probe(cfg, uniform_grids(cfg, 1201), seed=29, arity=1)
    for beta in (30.0, -30.0):
        sol = sc.schrodinger_resolvent(cfg, beta, g)
        for j in range(cfg.n_edges):
            c1, c2 = sol.coeffs[j]
            assert abs(c1 - sol.u.values[j][0]) <= 1e-9 * max(1.0, abs(c1))
        # continuity across the joint
        assert abs(sol.u.values[0][-1] - sol.u.values[1][0]) <= 1e-9 * max(
            1.0, np.max(np.abs(sol.u.values[0]))
        )


def test_schrodinger_negative_beta_a_priori_bound():
    cfg = sc.ChainConfig(densities=(1.0, 4.0))
    g = random_probe(cfg, uniform_grids(cfg, 801), seed=31, arity=1)
    sol = sc.schrodinger_resolvent(cfg, -100.0, g)
    assert l2_norm(sol.u) <= 1.1 * l2_norm(g) / 100.0
    assert sol.residual <= 1e-3


def test_schrodinger_rejects_zero_beta():
    cfg = sc.ChainConfig(densities=(1.0,))
    g = sample_function(cfg, 101, lambda x: np.ones_like(x, dtype=complex))
    with pytest.raises(ZeroBeta):
        sc.schrodinger_resolvent(cfg, 0.0, g)


def test_schrodinger_residual_tolerance_enforced():
    cfg = sc.ChainConfig(densities=(1.0,))
    g = sample_function(cfg, 301, lambda x: np.ones_like(x, dtype=complex))
    with pytest.raises(SignConventionMismatch):
        sc.schrodinger_resolvent(cfg, 9.0, g, residual_tol=1e-30)


def test_schrodinger_scan_bounded_both_signs():
    cfg = sc.ChainConfig(densities=(1.0,))
    pos = schrodinger_norm_scan(cfg, [1e2, 1e3, 1e4], probes=4, seed=0)
    assert all(np.isfinite(p.norm_estimate) for p in pos)
    assert max(p.norm_estimate for p in pos) <= 1.0
    neg = schrodinger_norm_scan(cfg, [-1e2, -1e3, -1e4], probes=4, seed=0)
    for p in neg:
        assert p.norm_estimate <= 1.2 / abs(p.beta)


def test_schrodinger_scan_monotone_in_probes():
    cfg = sc.ChainConfig(densities=(1.0,))
    est = [
        schrodinger_norm_scan(cfg, [300.0], probes=k, seed=0)[0].norm_estimate
        for k in (1, 4, 16)
    ]
    assert est[0] <= est[1] <= est[2]
