"""Ground-state structure versus field: scans, crossings, cascade, gap."""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import pi, sqrt

import numpy as np

from .concurrency import parallel_map
from .entanglement import w_state
from .hamiltonian import ModelParams, build_full
from .hilbert import Full, StateVector
from .spectra import eigensolve, xx_sector_min_exact

CROSSING_F_TOL = 1e-10
CROSSING_RESIDUAL_REL = 1e-8
GAP_B_TOL = 1e-6


@dataclass(frozen=True)
class ScanRow:
    b_field: float
    energy: float
    sector: int | None          # None when b_perp mixes sectors
    w_fidelity: float
    gap: float


@dataclass(frozen=True)
class PhaseScan:
    rows: tuple


@dataclass(frozen=True)
class CrossingReport:
    m_low: int
    m_high: int
    b_cross: float
    method: str
    residual: float


def _sector_of(psi: np.ndarray, n: int) -> int:
    weights = np.array([s.bit_count() for s in range(1 << n)])
    populations = np.bincount(weights, weights=np.abs(psi) ** 2, minlength=n + 1)
    return int(np.argmax(populations))


def ground_state(params: ModelParams):
    """Lowest eigenpair of the full Hamiltonian.

    Returns (energy, state, sector); sector is None when b_perp != 0 because
    the transverse term mixes excitation numbers.
    """
    spec = eigensolve(build_full(params), want_vectors=True)
    psi = spec.eigenvectors[:, 0]
    sector = _sector_of(psi, params.n_sites) if params.b_perp == 0.0 else None
    return spec.ground_energy, StateVector(Full(params.n_sites), psi), sector


def scan_ground(params: ModelParams, b_from: float, b_to: float, steps: int,
                threads: int = 1) -> PhaseScan:
    """Tabulate ground energy, sector, W fidelity and gap on a uniform B grid."""
    if steps < 2:
        raise ValueError("need at least 2 scan steps")
    if b_from == b_to:
        raise ValueError("scan endpoints must differ")
    n = params.n_sites
    base = build_full(replace(params, b_field=0.0)).entries
    dz = np.array([2 * s.bit_count() - n for s in range(1 << n)], dtype=float)
    w_amps = w_state(n).amplitudes
    mixed = params.b_perp != 0.0

    def one(b: float) -> ScanRow:
        w, v = np.linalg.eigh(base + np.diag(b * dz))
        psi = v[:, 0]
        fid = min(1.0, float(np.abs(np.vdot(w_amps, psi)) ** 2))
        sector = None if mixed else _sector_of(psi, n)
        return ScanRow(float(b), float(w[0]), sector, fid, float(w[1] - w[0]))

    rows = parallel_map(one, np.linspace(b_from, b_to, steps), threads)
    return PhaseScan(tuple(rows))


def bisect_crossing(f, b_lo: float, b_hi: float, f_tol: float = CROSSING_F_TOL,
                    max_iter: int = 200) -> float:
    """Bisection root of f on [b_lo, b_hi]; requires a sign change."""
    f_lo, f_hi = f(b_lo), f(b_hi)
    if f_lo == 0.0:
        return b_lo
    if f_hi == 0.0:
        return b_hi
    if f_lo * f_hi > 0:
        raise ValueError(
            f"no sign change in bracket [{b_lo}, {b_hi}]: f = ({f_lo}, {f_hi})"
        )
    mid = 0.5 * (b_lo + b_hi)
    for _ in range(max_iter):
        mid = 0.5 * (b_lo + b_hi)
        f_mid = f(mid)
        if abs(f_mid) <= f_tol:
            return mid
        if (f_mid > 0) == (f_hi > 0):
            b_hi, f_hi = mid, f_mid
        else:
            b_lo, f_lo = mid, f_mid
    return mid


def find_crossing(params: ModelParams, m: int, bracket) -> CrossingReport:
    """Locate the field where sector minima m and m+1 cross, by bisection.

    Uses the exact free-mode sector minima, so the search stays cheap for
    rings of many sites.  The bracket must produce a sign change in
    E_min(m+1) - E_min(m).
    """
    if not params.is_xx:
        raise ValueError("crossing search requires the xy-only model")
    if params.b_perp != 0.0:
        raise ValueError("crossing search requires b_perp = 0")
    if not 0 <= m <= params.n_sites - 1:
        raise ValueError(f"m={m} has no m+1 sector in an N={params.n_sites} ring")
    b_lo, b_hi = bracket

    def diff(b: float) -> float:
        at_b = replace(params, b_field=b)
        return xx_sector_min_exact(at_b, m + 1) - xx_sector_min_exact(at_b, m)

    b_cross = bisect_crossing(diff, float(b_lo), float(b_hi))
    residual = abs(diff(b_cross))
    scale = max(1.0, abs(xx_sector_min_exact(replace(params, b_field=b_cross), m)))
    if residual > CROSSING_RESIDUAL_REL * scale:
        raise RuntimeError(f"crossing residual {residual} above contract")
    return CrossingReport(m, m + 1, float(b_cross), "bisection", float(residual))


def cascade_field_reference(j_xy: float, n_sites: int, m: int) -> float:
    """Transcribed cascade formula B_c(m) = -2J [1 - 2 m^2 pi^2 / N^2].

    A large-N construction on the integer momentum grid; compare with the
    numeric crossing from find_crossing before trusting it at finite N.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    return -2 * j_xy * (1 - (2 * m * m * pi * pi) / (n_sites * n_sites))


def min_gap(params: ModelParams, b_window) -> tuple:
    """Minimum of E1 - E0 over a field window, by golden-section search.

    Requires b_perp > 0 (otherwise the crossing is exact and the gap closes).
    Raises if the minimum sits on the window boundary, which signals a window
    that does not contain the avoided crossing.
    """
    if params.b_perp <= 0:
        raise ValueError("min_gap requires b_perp > 0")
    b_lo, b_hi = float(b_window[0]), float(b_window[1])
    if not b_lo < b_hi:
        raise ValueError("window must satisfy b_lo < b_hi")
    n = params.n_sites
    base = build_full(replace(params, b_field=0.0)).entries
    dz = np.array([2 * s.bit_count() - n for s in range(1 << n)], dtype=float)

    def gap(b: float) -> float:
        w = np.linalg.eigvalsh(base + np.diag(b * dz))
        return float(w[1] - w[0])

    invphi = (sqrt(5.0) - 1) / 2
    lo, hi = b_lo, b_hi
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    g1, g2 = gap(x1), gap(x2)
    while hi - lo > GAP_B_TOL:
        if g1 <= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - invphi * (hi - lo)
            g1 = gap(x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + invphi * (hi - lo)
            g2 = gap(x2)
    b_at_min = 0.5 * (lo + hi)
    if min(b_at_min - b_lo, b_hi - b_at_min) <= 2 * GAP_B_TOL:
        raise ValueError(
            "gap is monotone across the window; no interior avoided crossing"
        )
    return b_at_min, gap(b_at_min)


def sector_min_lower_bound(params: ModelParams, m: int) -> tuple:
    """Lower bound 4Jm - (N-2m)B on the m-sector minimum for J < 0.

    Returns (bound, rewritten) where rewritten = E1_min + 2(m-1)(2J + B) is
    the algebraically identical form used in the crossover argument.
    """
    if params.j_xy >= 0:
        raise ValueError("the bound argument assumes j_xy < 0")
    n, j, b = params.n_sites, params.j_xy, params.b_field
    bound = 4 * j * m - (n - 2 * m) * b
    rewritten = (4 * j - (n - 2) * b) + 2 * (m - 1) * (2 * j + b)
    return bound, rewritten
