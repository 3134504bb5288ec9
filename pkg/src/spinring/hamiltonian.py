"""Dense ring Hamiltonians and symmetry operators.

Model: H = sum_i [ J (sx sx + sy sy)_{i,i+1} + (J + Delta)(sz sz)_{i,i+1}
                   + B sz_i + B' sx_i ],  site indices mod N.

Sign convention: sz|0> = -|0>, sz|1> = +|1>, where |0> is spin-up.  With this
choice the all-up configuration has field energy -N B and the fully aligned
z-bonds contribute +(J + Delta) each.  Relabeling 0 <-> 1 on every site (a
conjugation by the product of sx's) is equivalent to B -> -B; that relabeling
maps this convention onto the usual sz = diag(+1, -1).

Matrices are assembled entrywise from integer bond/weight counts, so entries
related by ring translation or global spin flip are equal to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

import numpy as np

from .errors import BudgetError
from .hilbert import (
    FULL_BASIS_MAX_SITES,
    Full,
    HERMITICITY_TOL,
    Sector,
    basis_dimension,
    sector_basis,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]])  # |0> = spin-up has eigenvalue -1


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the ring: N sites, xy coupling J, z coupling J + Delta,
    transverse field B, symmetry-breaking x field B' >= 0."""

    n_sites: int
    j_xy: float
    delta: float
    b_field: float = 0.0
    b_perp: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_sites < 3:
            raise ValueError(
                "ring models need at least 3 sites (a 2-site ring would "
                "double-count its single bond)"
            )
        for name in ("j_xy", "delta", "b_field", "b_perp"):
            if not isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.b_perp < 0:
            raise ValueError("b_perp must be non-negative")
        if self.boundary != "periodic":
            raise ValueError("only periodic rings are supported")

    @classmethod
    def xx(cls, n_sites: int, j_xy: float, b_field: float = 0.0,
           b_perp: float = 0.0) -> "ModelParams":
        """The delta = -j_xy case: pure xy coupling, no zz term."""
        return cls(n_sites, j_xy, -j_xy, b_field, b_perp)

    @property
    def is_xx(self) -> bool:
        return abs(self.delta + self.j_xy) <= 1e-12 * max(1.0, abs(self.j_xy))


@dataclass(frozen=True, eq=False)
class Operator:
    """Square matrix over a tagged basis; Hermitian unless flagged otherwise."""

    tag: object
    entries: np.ndarray
    hermitian: bool = True

    def __post_init__(self):
        mat = np.array(self.entries)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator entries must be square, got {mat.shape}")
        dim = basis_dimension(self.tag)
        if mat.shape[0] != dim:
            raise ValueError(f"expected dimension {dim} for {self.tag}, got {mat.shape[0]}")
        if self.hermitian:
            dev = np.max(np.abs(mat - mat.conj().T))
            if dev > HERMITICITY_TOL:
                raise ValueError(f"operator deviates from Hermitian by {dev}")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


def _ring_walls(mask: int, n: int) -> int:
    """Number of anti-aligned bonds (domain walls) on the periodic ring."""
    rotated = ((mask << 1) | (mask >> (n - 1))) & ((1 << n) - 1)
    return (mask ^ rotated).bit_count()


def build_full(params: ModelParams) -> Operator:
    """Assemble the full 2^N Hamiltonian.

    Every entry is a single product or an exact integer-weighted sum, so all
    symmetry identities (translation, spin flip, sector structure) hold
    exactly in floating point.
    """
    n = params.n_sites
    if n > FULL_BASIS_MAX_SITES:
        raise BudgetError(
            f"full basis for N={n} exceeds the N<={FULL_BASIS_MAX_SITES} budget"
        )
    j, zz, b, bp = params.j_xy, params.j_xy + params.delta, params.b_field, params.b_perp
    dim = 1 << n
    h = np.zeros((dim, dim))
    hop = 2.0 * j
    for s in range(dim):
        h[s, s] = zz * (n - 2 * _ring_walls(s, n)) + b * (2 * s.bit_count() - n)
        for i in range(n):
            i2 = (i + 1) % n
            if ((s >> i) ^ (s >> i2)) & 1:
                h[s, s ^ ((1 << i) | (1 << i2))] = hop
        if bp != 0.0:
            for i in range(n):
                h[s, s ^ (1 << i)] = bp
    return Operator(Full(n), h)


def build_sector(params: ModelParams, m: int) -> Operator:
    """Restriction of the Hamiltonian to the m-excitation subspace.

    Requires b_perp = 0; the transverse x field connects neighboring sectors
    and has no block-diagonal form.
    """
    if params.b_perp != 0.0:
        raise ValueError("sector restriction requires b_perp = 0")
    n = params.n_sites
    basis = sector_basis(n, m)
    j, zz, b = params.j_xy, params.j_xy + params.delta, params.b_field
    index = {mask: k for k, mask in enumerate(basis.members)}
    dim = basis.dimension
    h = np.zeros((dim, dim))
    hop = 2.0 * j
    field = b * (2 * m - n)
    for k, s in enumerate(basis.members):
        h[k, k] = zz * (n - 2 * _ring_walls(s, n)) + field
        for i in range(n):
            i2 = (i + 1) % n
            if ((s >> i) ^ (s >> i2)) & 1:
                h[k, index[s ^ ((1 << i) | (1 << i2))]] = hop
    return Operator(Sector(n, m), h)


def total_sz_operator(n_sites: int) -> Operator:
    """Conserved total sz: diagonal entries 2*weight - N."""
    if n_sites < 2:
        raise ValueError("need at least 2 sites")
    diag = np.array([2 * s.bit_count() - n_sites for s in range(1 << n_sites)], dtype=float)
    return Operator(Full(n_sites), np.diag(diag))


def translation_operator(n_sites: int) -> Operator:
    """Cyclic one-site shift permutation (site i -> i+1 mod N).

    A permutation matrix, orthogonal but not Hermitian.
    """
    if n_sites < 2:
        raise ValueError("need at least 2 sites")
    dim = 1 << n_sites
    t = np.zeros((dim, dim))
    top = dim - 1
    for s in range(dim):
        shifted = ((s << 1) | (s >> (n_sites - 1))) & top
        t[shifted, s] = 1.0
    return Operator(Full(n_sites), t, hermitian=False)
