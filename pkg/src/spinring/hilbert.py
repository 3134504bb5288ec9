"""Bit-mask bases for qubit rings: sector indexing, partial trace, Schmidt values.

Site ``i`` of an ``N``-site ring is bit ``i`` of an ``N``-bit mask, and bit
value 1 means an excitation (spin-down) at that site.  The full-basis index of
a configuration is its mask read as an integer, so site 0 is the least
significant bit.  One-based site labels, common in hand calculations, map to
internal labels shifted down by one.

All values are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import BudgetError

FULL_BASIS_MAX_SITES = 14   # 2^14 x 2^14 dense operators, about 2 GiB each
SECTOR_DIM_MAX = 20_000     # largest sector block we will enumerate

NORM_TOL = 1e-9
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
RANK_ONE_TOL = 1e-9         # second Schmidt value below this means product state


@dataclass(frozen=True)
class Full:
    """Basis tag for the full 2^N space of an N-site ring."""

    n_sites: int


@dataclass(frozen=True)
class Sector:
    """Basis tag for the fixed-excitation-number subspace (m down-spins)."""

    n_sites: int
    m: int


def basis_dimension(tag) -> int:
    if isinstance(tag, Full):
        return 1 << tag.n_sites
    if isinstance(tag, Sector):
        return comb(tag.n_sites, tag.m)
    raise TypeError(f"unknown basis tag {tag!r}")


@dataclass(frozen=True)
class SpinConfiguration:
    """A single basis configuration: ``mask`` bit i set = site i excited."""

    n_sites: int
    mask: int

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.n_sites}")
        if not 0 <= self.mask < (1 << self.n_sites):
            raise ValueError(
                f"mask {self.mask:#b} does not fit in {self.n_sites} bits"
            )

    @property
    def weight(self) -> int:
        """Number of excitations (down-spins)."""
        return self.mask.bit_count()


def sector_dimension(n_sites: int, m: int) -> int:
    """Dimension C(N, m) of the m-excitation subspace."""
    if not 0 <= m <= n_sites:
        raise ValueError(f"excitation count m={m} outside [0, {n_sites}]")
    return comb(n_sites, m)


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """All weight-m masks of an N-site ring, in increasing mask order."""

    n_sites: int
    m: int
    members: tuple

    @property
    def dimension(self) -> int:
        return len(self.members)

    @property
    def tag(self) -> Sector:
        return Sector(self.n_sites, self.m)


def sector_basis(n_sites: int, m: int) -> SectorBasis:
    """Enumerate the m-excitation basis.

    Masks are generated from site combinations and sorted, so the cost is
    O(C(N, m) log C(N, m)) rather than O(2^N).
    """
    dim = sector_dimension(n_sites, m)
    if dim > SECTOR_DIM_MAX:
        raise BudgetError(
            f"sector dimension C({n_sites},{m}) = {dim} exceeds budget {SECTOR_DIM_MAX}"
        )
    masks = sorted(
        sum(1 << site for site in sites)
        for sites in combinations(range(n_sites), m)
    )
    return SectorBasis(n_sites, m, tuple(masks))


def rank_state(basis: SectorBasis, config: SpinConfiguration) -> int:
    """Index of ``config`` within the sector basis (increasing mask order)."""
    if config.n_sites != basis.n_sites:
        raise ValueError("configuration and basis have different site counts")
    if config.weight != basis.m:
        raise ValueError(
            f"configuration weight {config.weight} does not match sector m={basis.m}"
        )
    idx = bisect_left(basis.members, config.mask)
    if idx >= len(basis.members) or basis.members[idx] != config.mask:
        raise ValueError(f"mask {config.mask:#b} not in sector basis")
    return idx


def unrank_state(basis: SectorBasis, index: int) -> SpinConfiguration:
    """Configuration at position ``index`` of the sector basis."""
    if not 0 <= index < basis.dimension:
        raise ValueError(f"index {index} outside [0, {basis.dimension})")
    return SpinConfiguration(basis.n_sites, basis.members[index])


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a tagged basis; normalized to 1e-9."""

    tag: object
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        dim = basis_dimension(self.tag)
        if amps.shape != (dim,):
            raise ValueError(f"expected {dim} amplitudes for {self.tag}, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace operator over a tagged basis.

    Hermiticity and trace are validated on construction.  Positivity
    (eigenvalues >= -1e-10) is part of the contract but is checked by the
    consumers that rely on it, to avoid a dense eigensolve per construction.
    """

    tag: object
    entries: np.ndarray

    def __post_init__(self):
        mat = np.array(self.entries, dtype=np.complex128)
        dim = basis_dimension(self.tag)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix for {self.tag}, got {mat.shape}")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix deviates from Hermitian by {herm}")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} deviates from 1 beyond {TRACE_TOL}")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


def _validate_sites(n_sites: int, sites) -> list:
    sites = sorted(set(int(s) for s in sites))
    if not sites:
        raise ValueError("site subset must be non-empty")
    if sites[0] < 0 or sites[-1] >= n_sites:
        raise ValueError(f"site subset {sites} outside [0, {n_sites})")
    return sites


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduce ``rho`` to the sites in ``keep`` (ascending site order).

    Kept site ``keep_sorted[j]`` becomes site ``j`` (bit ``j``) of the reduced
    system.  Trace, Hermiticity and positivity are preserved.
    """
    if not isinstance(rho.tag, Full):
        raise ValueError("partial trace requires a full-basis density matrix")
    n = rho.tag.n_sites
    kept = _validate_sites(n, keep)

    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = {s: letters[s] for s in range(n)}
    col = {s: (letters[n + s] if s in kept else letters[s]) for s in range(n)}
    # Reshaped axis order is site N-1 first (C order), rows then columns.
    subs_in = "".join(row[s] for s in reversed(range(n))) + "".join(
        col[s] for s in reversed(range(n))
    )
    subs_out = "".join(row[s] for s in reversed(kept)) + "".join(
        col[s] for s in reversed(kept)
    )
    tensor = rho.entries.reshape([2] * (2 * n))
    reduced = np.einsum(f"{subs_in}->{subs_out}", tensor)
    dim = 1 << len(kept)
    return DensityMatrix(Full(len(kept)), reduced.reshape(dim, dim))


def schmidt_values(psi: StateVector, part_a) -> np.ndarray:
    """Schmidt coefficients of ``psi`` across the bipartition A | complement.

    Returns min(2^|A|, 2^(N-|A|)) non-negative values in descending order;
    their squares sum to 1.  A second value below RANK_ONE_TOL certifies the
    state is a product across the cut.
    """
    if not isinstance(psi.tag, Full):
        raise ValueError("Schmidt decomposition requires a full-basis state")
    n = psi.tag.n_sites
    sites_a = _validate_sites(n, part_a)
    if len(sites_a) == n:
        raise ValueError("bipartition must leave both sides non-empty")
    sites_b = [s for s in range(n) if s not in sites_a]

    tensor = psi.amplitudes.reshape([2] * n)
    # Axis of site s is n-1-s; put A axes (most significant first) in front.
    axes = [n - 1 - s for s in reversed(sites_a)] + [n - 1 - s for s in reversed(sites_b)]
    matrix = tensor.transpose(axes).reshape(1 << len(sites_a), 1 << len(sites_b))
    return np.linalg.svd(matrix, compute_uv=False)
