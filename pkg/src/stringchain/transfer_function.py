"""Boundary transfer function of the chain and the input/output ratios.

The transfer value at lam (Re lam > 0) maps a Neumann input gain z at
the damped end to the first component of the homogeneous propagated
state at x = 0: solve (lam - B d/dx) W = 0 with (0,1) W(0) = z and the
clamped condition at x = N, then read off (1,0) W(0).  The companion
determinant pair of this closure stays away from zero on every vertical
line Re lam = gamma > 0, with the certified bound
(c_0/2) sinh(2 gamma / c_0) * prod_n cosh(2 gamma / c_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .chain_core import ChainConfig, WaveState, validate_config
from .errors import DegenerateData, EmptyScan, SingularBoundaryMatrix
from .timesim import SimOptions, simulate_wave
from .transfer_matrix import DetPair

__all__ = [
    "TransferSample",
    "transfer_value",
    "transfer_values",
    "transfer_det_pair",
    "transfer_gap_bound",
    "transfer_sup_scan",
    "round_trip_time",
    "admissibility_ratio",
    "observability_ratio",
]


@dataclass
class TransferSample:
    """One evaluated transfer value; scales linearly with the input gain."""

    lam: complex
    value: complex
    input_gain: complex


def _require_right_half_plane(lam: complex) -> complex:
    lam = complex(lam)
    if lam.real <= 0.0:
        raise ValueError(f"transfer function is evaluated on Re lam > 0, got {lam}")
    return lam


def _closure_entries(cfg: ChainConfig, lam):
    """Rows of the transfer closure, vectorized over lam.

    Row 1 is (0, 1) applied to the backward edge-0 exponential (Neumann
    input row); row 2 is (1, 0) applied to the forward product over
    edges N-1 .. 1 (identity for a single edge).
    """
    lam = np.asarray(lam, dtype=complex)
    c = cfg.wave_speeds
    z0 = lam / c[0]
    r1a = -c[0] * np.sinh(z0)
    r1b = np.cosh(z0)
    q00 = np.ones_like(lam)
    q01 = np.zeros_like(lam)
    q10 = np.zeros_like(lam)
    q11 = np.ones_like(lam)
    for k in range(cfg.n_edges - 1, 0, -1):
        zk = lam / c[k]
        ch, sh = np.cosh(zk), np.sinh(zk)
        e00, e01, e10, e11 = ch, sh / c[k], c[k] * sh, ch
        q00, q01, q10, q11 = (
            q00 * e00 + q01 * e10,
            q00 * e01 + q01 * e11,
            q10 * e00 + q11 * e10,
            q10 * e01 + q11 * e11,
        )
    return r1a, r1b, q00, q01, q10, q11


def transfer_values(cfg: ChainConfig, lam, z: complex = 1.0):
    """Vectorized transfer values over an array of lam with Re lam > 0."""
    validate_config(cfg)
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam.real <= 0.0):
        raise ValueError("transfer function is evaluated on Re lam > 0")
    r1a, r1b, q00, q01, _, _ = _closure_entries(cfg, lam)
    det = r1a * q01 - r1b * q00
    if np.any(np.abs(det) < 1e-14):
        raise SingularBoundaryMatrix("transfer closure numerically singular")
    f0_1 = q01 * z / det
    f0_2 = -q00 * z / det
    c0 = cfg.wave_speeds[0]
    z0 = lam / c0
    w00 = np.cosh(z0) * f0_1 - np.sinh(z0) / c0 * f0_2
    return w00


def transfer_value(cfg: ChainConfig, lam: complex, z: complex = 1.0) -> complex:
    """Boundary output (1,0) W(0) for input gain z at one lam, Re lam > 0."""
    lam = _require_right_half_plane(lam)
    if z == 0.0:
        return 0.0 + 0.0j
    return complex(transfer_values(cfg, np.asarray(lam), z))


def transfer_det_pair(cfg: ChainConfig, lam) -> DetPair:
    """Determinants of the transfer closure and its companion row swap."""
    validate_config(cfg)
    lam = np.asarray(lam, dtype=complex)
    r1a, r1b, q00, q01, q10, q11 = _closure_entries(cfg, lam)
    d = r1a * q01 - r1b * q00
    dt = r1a * q11 - r1b * q10
    if d.ndim == 0:
        return DetPair(complex(d), complex(dt))
    return DetPair(d, dt)


def transfer_gap_bound(cfg: ChainConfig, gamma: float) -> float:
    """Certified lower bound for Re(D conj(D~)) on the line Re lam = gamma."""
    validate_config(cfg)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    c = cfg.wave_speeds
    bound = 0.5 * c[0] * np.sinh(2.0 * gamma / c[0])
    for n in range(1, cfg.n_edges):
        bound *= np.cosh(2.0 * gamma / c[n])
    return float(bound)


def transfer_sup_scan(cfg: ChainConfig, gamma: float, beta_range: tuple[float, float],
                      step: float) -> tuple[float, float]:
    """(sup |H|, argmax beta) over the grid on the line Re lam = gamma."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if step <= 0:
        raise EmptyScan("step must be positive")
    lo, hi = beta_range
    betas = np.arange(lo, hi + 0.5 * step, step)
    if betas.size == 0:
        raise EmptyScan("empty beta range")
    vals = np.abs(transfer_values(cfg, gamma + 1j * betas))
    k = int(np.argmax(vals))
    return float(vals[k]), float(betas[k])


def round_trip_time(cfg: ChainConfig) -> float:
    """Time 2 * sum_j 1/c_j for a signal to traverse the chain and return."""
    return float(2.0 * np.sum(1.0 / cfg.wave_speeds))


def admissibility_ratio(cfg: ChainConfig, v: Callable[[float], float], T: float,
                        opts: Optional[SimOptions] = None) -> float:
    """Boundary output energy over input energy for the forced chain.

    Runs the forced simulation from rest with Neumann input v(t) at the
    damped end and returns int |d/dt psi(t, 0)|^2 dt / |v|^2_{L2(0,T)}.
    """
    validate_config(cfg)
    opts = opts or SimOptions(points_per_edge=800, cfl=0.5, T=T)
    if opts.T != T:
        opts = SimOptions(points_per_edge=opts.points_per_edge, cfl=opts.cfl, T=T,
                          record_stride=opts.record_stride)
    from .chain_core import sample_state

    init = sample_state(cfg, opts.points_per_edge, lambda x: np.zeros_like(x))
    trace, _ = simulate_wave(cfg, init, opts, mode="forced", forcing=v)
    times = trace.times
    vin = np.array([v(t) for t in times], dtype=float)
    denom = float(np.trapezoid(vin**2, times))
    if denom == 0.0:
        return 0.0
    return float(trace.boundary_flux[-1] / denom)


def observability_ratio(cfg: ChainConfig, state: WaveState, T: float,
                        opts: Optional[SimOptions] = None) -> float:
    """Boundary output energy over initial energy for the conservative chain.

    Strictly positive for observation horizons beyond the round-trip
    time on nondegenerate data; data supported away from the observed
    end produce (numerically) zero output until the first arrival.
    """
    validate_config(cfg)
    opts = opts or SimOptions(points_per_edge=800, cfl=0.5, T=T)
    if opts.T != T:
        opts = SimOptions(points_per_edge=opts.points_per_edge, cfl=opts.cfl, T=T,
                          record_stride=opts.record_stride)
    trace, _ = simulate_wave(cfg, state, opts, mode="conservative")
    denom = 2.0 * trace.energies[0]
    if denom <= 0.0:
        raise DegenerateData("initial data has zero energy")
    return float(trace.boundary_flux[-1] / denom)
