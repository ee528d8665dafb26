"""2x2 transfer-matrix machinery for the damped chain.

An edge of density rho propagates boundary data (value, flux) by the
matrix exponential of lam * x * B^{-1}, where B = [[0, 1], [rho, 0]].
Products of these exponentials, closed with the damped row at x = 0 and
the clamped row at x = N, give the characteristic 2x2 matrix whose
determinant controls invertibility of the whole boundary-value problem.

All determinants here use the damped/clamped boundary rows.  The chain
with one edge is closed directly at its two ends (no extra propagation
factor), so the N = 1 determinant is cos(beta/c0) + i sin(beta/c0)/c0 on
the imaginary axis; longer chains follow by the two-term recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .chain_core import ChainConfig, validate_config
from .errors import EmptyScan, NonPositiveBeta, NonPositiveDensity

__all__ = [
    "Mat2C",
    "DetPair",
    "exp_osc",
    "exp_hyp",
    "boundary_matrices",
    "det_pair",
    "det_lower_bound",
    "analytic_gap_bound",
    "schrodinger_step",
]

Mat2C = np.ndarray  # 2x2 complex array


def _check_rho(rho: float) -> float:
    if not np.isfinite(rho) or rho <= 0.0:
        raise NonPositiveDensity(f"density {rho} must be positive and finite")
    return float(rho)


def exp_osc(rho: float, beta: float, x: float) -> Mat2C:
    """exp(i*beta*x*B^{-1}) for real beta, written with cos and sin.

    Unimodular for every argument: the determinant is cos^2 + sin^2 = 1.
    """
    rho = _check_rho(rho)
    c = np.sqrt(rho)
    th = beta * x / c
    ct, st = np.cos(th), np.sin(th)
    return np.array([[ct, 1j * st / c], [1j * c * st, ct]], dtype=complex)


def exp_hyp(rho: float, lam: complex, x: float) -> Mat2C:
    """exp(lam*x*B^{-1}) for general complex lam, written with cosh and sinh.

    Restricting lam to i*beta reproduces exp_osc entrywise.
    """
    rho = _check_rho(rho)
    c = np.sqrt(rho)
    z = lam * x / c
    ch, sh = np.cosh(z), np.sinh(z)
    return np.array([[ch, sh / c], [c * sh, ch]], dtype=complex)


def _edge_exp(rho: float, lam: complex, x: float) -> Mat2C:
    # exact trig path on the imaginary axis, hyperbolic otherwise
    lam = complex(lam)
    if lam.real == 0.0:
        return exp_osc(rho, lam.imag, x)
    return exp_hyp(rho, lam, x)


def _interior_product(cfg: ChainConfig, lam: complex) -> Mat2C:
    """Descending product of edge exponentials, edges N-1 down to 1.

    Propagates data anchored at the right end of edge 0 to the clamped
    end x = N.  Empty (identity) for a single edge.
    """
    q = np.eye(2, dtype=complex)
    for k in range(cfg.n_edges - 1, 0, -1):
        q = q @ _edge_exp(cfg.densities[k], lam, 1.0)
    return q


def boundary_matrices(cfg: ChainConfig, lam: complex) -> tuple[Mat2C, Mat2C]:
    """Characteristic matrices (H, H_tilde) of the damped chain at lam.

    Row 1 applies (1, -1) to the backward exponential on edge 0 (the
    damped condition v(0) = rho_0 u_x(0) transported to the anchor at
    x = 1).  Row 2 applies (1, 0), respectively (0, 1) for H_tilde, to
    the product of forward exponentials over edges 1..N-1, closing the
    clamped condition at x = N.  For a single edge row 2 is (1, 0)
    itself: the anchor already sits at the clamped end.
    """
    validate_config(cfg)
    row1 = np.array([1.0, -1.0], dtype=complex) @ _edge_exp(cfg.densities[0], lam, -1.0)
    q = _interior_product(cfg, lam)
    h = np.array([row1, q[0, :]])
    h_tilde = np.array([row1, q[1, :]])
    return h, h_tilde


@dataclass
class DetPair:
    """Determinants (D, D_tilde) of the two boundary-row closures.

    On the imaginary axis Re(D * conj(D_tilde)) = 1 identically.
    Entries are scalars or arrays, matching the lam argument.
    """

    d: Union[complex, np.ndarray]
    d_tilde: Union[complex, np.ndarray]

    @property
    def identity_value(self) -> Union[float, np.ndarray]:
        """Re(D * conj(D_tilde)); equals 1 on the imaginary axis."""
        return (self.d * np.conj(self.d_tilde)).real


def det_pair(cfg: ChainConfig, lam) -> DetPair:
    """(D_{N-1}, D~_{N-1}) by the two-term recursion over the edges.

    lam may be a scalar or an ndarray of complex frequencies; the
    recursion broadcasts.  Agrees with the determinants of
    boundary_matrices for every lam.
    """
    validate_config(cfg)
    lam = np.asarray(lam, dtype=complex)
    c = cfg.wave_speeds
    z0 = lam / c[0]
    ch, sh = np.cosh(z0), np.sinh(z0)
    d = ch + sh / c[0]
    dt = ch + c[0] * sh
    for n in range(1, cfg.n_edges):
        zn = lam / c[n]
        ch, sh = np.cosh(zn), np.sinh(zn)
        d, dt = ch * d + (sh / c[n]) * dt, c[n] * sh * d + ch * dt
    if d.ndim == 0:
        return DetPair(complex(d), complex(dt))
    return DetPair(d, dt)


def analytic_gap_bound(cfg: ChainConfig) -> float:
    """Lower bound for |D_{N-1}| on the imaginary axis.

    For one edge |D_0|^2 = cos^2 + sin^2/rho_0 >= min(1, 1/rho_0).  For
    longer chains the recursion step is a quadratic form in
    (cos, sin) whose Gram matrix has determinant 1/rho_{N-1} (by the
    Re(D conj(D~)) = 1 identity), so its smallest eigenvalue is at
    least det/trace; the trace is bounded through the recursion using
    |cos|, |sin| <= 1.
    """
    validate_config(cfg)
    rho = cfg.densities
    c = cfg.wave_speeds
    if cfg.n_edges == 1:
        return float(np.sqrt(min(1.0, 1.0 / rho[0])))
    # running envelopes for |D_n|, |D~_n| along the recursion
    a = max(1.0, 1.0 / c[0])
    b = max(1.0, c[0])
    for n in range(1, cfg.n_edges - 1):
        a, b = a + b / c[n], c[n] * a + b
    trace_bound = a * a + (b * b) / rho[-1]
    return float(np.sqrt(1.0 / (rho[-1] * trace_bound)))


def det_lower_bound(cfg: ChainConfig, beta_scan: np.ndarray) -> tuple[float, float]:
    """(gamma_analytic, gamma_numeric) for |D_{N-1}| on the imaginary axis.

    gamma_numeric is the minimum of |D| over the supplied beta grid and
    always sits above gamma_analytic (up to roundoff).
    """
    betas = np.asarray(beta_scan, dtype=float)
    if betas.size == 0:
        raise EmptyScan("empty beta scan")
    gamma_analytic = analytic_gap_bound(cfg)
    pair = det_pair(cfg, 1j * betas)
    gamma_numeric = float(np.min(np.abs(pair.d)))
    return gamma_analytic, gamma_numeric


def schrodinger_step(rho: float, beta: float) -> Mat2C:
    """One-edge propagation of (u, rho*u') for the Schrodinger chain at i*beta.

    Unimodular: det = cos^2 + sin^2 = 1.
    """
    rho = _check_rho(rho)
    if not np.isfinite(beta) or beta <= 0.0:
        raise NonPositiveBeta(f"beta = {beta} must be positive")
    sb = np.sqrt(beta)
    sr = np.sqrt(rho)
    q = sb / sr
    cq, sq = np.cos(q), np.sin(q)
    return np.array([[cq, sq / (sb * sr)], [-sb * sr * sq, cq]], dtype=complex)
