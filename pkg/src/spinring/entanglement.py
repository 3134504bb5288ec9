"""W states, concurrence, thermal states, witnesses, biseparability checks."""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, pi, sqrt

import numpy as np

from .errors import BudgetError
from .hamiltonian import ModelParams, build_full
from .hilbert import DensityMatrix, Full, StateVector, partial_trace, schmidt_values
from .spectra import eigensolve

POSITIVITY_TOL = 1e-10
BISEP_MAX_SITES = 12
DEFAULT_ALPHA_PHASES = (1.0, 1.0j, np.exp(1j * pi / 4))

_SY_SY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


def w_state(n_sites: int) -> StateVector:
    """Uniform superposition of all single-excitation configurations."""
    if n_sites < 2:
        raise ValueError("W state needs at least 2 sites")
    amps = np.zeros(1 << n_sites, dtype=np.complex128)
    for site in range(n_sites):
        amps[1 << site] = 1.0
    return StateVector(Full(n_sites), amps / sqrt(n_sites))


def concurrence(rho2: DensityMatrix) -> float:
    """Two-qubit concurrence via the spin-flip construction.

    C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) with l_i the
    descending eigenvalues of rho (sy x sy) rho* (sy x sy).  Invariant under
    local unitaries, so the module's sz sign convention is immaterial.
    """
    if not (isinstance(rho2.tag, Full) and rho2.tag.n_sites == 2):
        raise ValueError("concurrence is defined for 2-qubit density matrices")
    if rho2.min_eigenvalue() < -POSITIVITY_TOL:
        raise ValueError("density matrix is not positive semidefinite")
    mat = rho2.entries
    flipped = _SY_SY @ mat.conj() @ _SY_SY
    lams = np.linalg.eigvals(mat @ flipped)
    lams = np.sort(np.abs(lams.real))[::-1]
    roots = np.sqrt(np.clip(lams, 0.0, None))
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def pair_concurrence(psi: StateVector, i: int, j: int) -> float:
    """Concurrence of the (i, j) pair reduction of a pure state."""
    if i == j:
        raise ValueError("pair sites must differ")
    rho = DensityMatrix(psi.tag, np.outer(psi.amplitudes, psi.amplitudes.conj()))
    return concurrence(partial_trace(rho, (i, j)))


@dataclass(frozen=True)
class GibbsState:
    """Thermal state exp(-beta H)/Z with its inverse temperature and model."""

    rho: DensityMatrix
    beta: float
    params: ModelParams


def gibbs_state(params: ModelParams, beta: float) -> GibbsState:
    """Thermal state from the spectral decomposition of the full Hamiltonian.

    Energies are shifted by the ground energy before exponentiating, so any
    beta > 0 is safe from overflow.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    spec = eigensolve(build_full(params), want_vectors=True)
    weights = np.exp(-beta * (spec.eigenvalues - spec.eigenvalues[0]))
    weights /= weights.sum()
    v = spec.eigenvectors
    rho = (v * weights) @ v.conj().T
    return GibbsState(DensityMatrix(Full(params.n_sites), rho), beta, params)


@dataclass(frozen=True)
class TwoLevelModel:
    """Mixture p |W><W| + (1-p) |0...0><0...0|."""

    p: float
    rho: DensityMatrix


def two_level_weight(delta: float, b_field: float, beta: float) -> float:
    """Boltzmann weight of the W component: p = 1/(1 + exp[-2 beta (2 delta - b)]).

    This is the exact two-level ratio exp(-beta E_W) / (exp(-beta E_W) +
    exp(-beta E_000)); the energy difference E_000 - E_W equals 2 (2 delta - b)
    for the 3-site anisotropic ring and, with delta = -j, for the xy ring of
    any size.  At b = 2 delta the levels are degenerate and p = 1/2.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    x = -2.0 * beta * (2.0 * delta - b_field)
    if x > 0:
        e = exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + exp(x))


def two_level_model(delta: float, b_field: float, beta: float,
                    n_sites: int = 3) -> TwoLevelModel:
    """Low-temperature two-level approximation of the thermal state."""
    p = two_level_weight(delta, b_field, beta)
    w = w_state(n_sites).amplitudes.real
    dim = w.shape[0]
    rho = p * np.outer(w, w)
    rho[0, 0] += 1.0 - p
    return TwoLevelModel(p, DensityMatrix(Full(n_sites), rho.reshape(dim, dim)))


def w_overlap(rho: DensityMatrix) -> float:
    """<W_N| rho |W_N> for the W state of the tagged system size."""
    if not isinstance(rho.tag, Full):
        raise ValueError("W overlap requires a full-basis density matrix")
    w = w_state(rho.tag.n_sites).amplitudes
    return float(np.real(np.vdot(w, rho.entries @ w)))


def gme_witness_w(rho: DensityMatrix) -> float:
    """W-class fidelity witness value (N-1)/N - <W|rho|W>.

    Negative values certify genuine multipartite entanglement: every
    biseparable state has W overlap at most (N-1)/N.  The witness is strictly
    weaker than the range argument probed by biseparability_scan, which
    certifies entanglement of the W/all-up mixtures for every p > 0.
    """
    n = rho.tag.n_sites
    return (n - 1) / n - w_overlap(rho)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) || rho - sigma ||_1."""
    if rho.dimension != sigma.dimension:
        raise ValueError("dimension mismatch")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho.entries - sigma.entries))))


@dataclass(frozen=True)
class BisepPoint:
    """Minimum second Schmidt value of alpha|W> + beta|0..0> over all
    bipartitions and tested phases, with its margin over the determinant
    bound |alpha|^2 sqrt(m_A (N - m_A)) / N."""

    alpha: float
    min_second_schmidt: float
    min_bound_margin: float


def bipartitions(n_sites: int) -> list:
    """All 2^(N-1) - 1 unordered cuts, each as the sorted side containing site 0."""
    cuts = []
    full = (1 << n_sites) - 1
    for mask in range(1, full, 2):  # odd masks contain site 0
        if mask == full:
            continue
        cuts.append([s for s in range(n_sites) if (mask >> s) & 1])
    return cuts


def biseparability_scan(n_sites: int, alpha_grid,
                        phases=DEFAULT_ALPHA_PHASES) -> list:
    """Probe the span of |W> and |0..0> for product vectors.

    For each alpha the state alpha|W> + sqrt(1-|alpha|^2)|0..0> is cut across
    every bipartition; the second Schmidt value is bounded below by the
    2x2 coefficient determinant |alpha|^2 sqrt(m_A (N - m_A)) / N, so a
    strictly positive minimum for all alpha != 0 witnesses that the only
    product vector in the span is |0..0> itself.
    """
    if n_sites < 3:
        raise ValueError("need at least 3 sites for a multipartite scan")
    if n_sites > BISEP_MAX_SITES:
        raise BudgetError(
            f"bipartition enumeration for N={n_sites} exceeds N<={BISEP_MAX_SITES}"
        )
    w = w_state(n_sites).amplitudes
    zero = np.zeros_like(w)
    zero[0] = 1.0
    cuts = bipartitions(n_sites)

    points = []
    for alpha in alpha_grid:
        alpha = float(alpha)
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha grid must lie in [0, 1]")
        beta = sqrt(max(0.0, 1.0 - alpha * alpha))
        min_second = np.inf
        min_margin = np.inf
        for phase in phases:
            amps = phase * alpha * w + beta * zero
            psi = StateVector(Full(n_sites), amps)
            for cut in cuts:
                second = float(schmidt_values(psi, cut)[1])
                m_a = len(cut)
                bound = alpha * alpha * sqrt(m_a * (n_sites - m_a)) / n_sites
                min_second = min(min_second, second)
                min_margin = min(min_margin, second - bound)
        points.append(BisepPoint(alpha, min_second, min_margin))
    return points
