"""spinring: exact-diagonalization laboratory for XX/XXZ qubit rings.

Builds ring Hamiltonians with conserved excitation number, certifies
closed-form spectra and critical fields against a dense eigensolver oracle,
simulates adiabatic W-state generation through the avoided crossing, and
checks multipartite entanglement of ground and thermal states.
"""

__version__ = "0.1.0"

from .dynamics import (
    RampSchedule,
    Trajectory,
    evolve,
    landau_zener_estimate,
    linear_ramp,
)
from .entanglement import (
    BisepPoint,
    GibbsState,
    TwoLevelModel,
    biseparability_scan,
    bipartitions,
    concurrence,
    gibbs_state,
    gme_witness_w,
    pair_concurrence,
    trace_distance,
    two_level_model,
    two_level_weight,
    w_overlap,
    w_state,
)
from .errors import BudgetError, ContractError
from .hamiltonian import (
    ModelParams,
    Operator,
    build_full,
    build_sector,
    total_sz_operator,
    translation_operator,
)
from .hilbert import (
    DensityMatrix,
    Full,
    Sector,
    SectorBasis,
    SpinConfiguration,
    StateVector,
    partial_trace,
    rank_state,
    schmidt_values,
    sector_basis,
    sector_dimension,
    unrank_state,
)
from .phases import (
    CrossingReport,
    PhaseScan,
    ScanRow,
    cascade_field_reference,
    find_crossing,
    ground_state,
    min_gap,
    scan_ground,
    sector_min_lower_bound,
)
from .spectra import (
    LabeledLevel,
    Spectrum,
    eigensolve,
    sector_ed_spectrum,
    three_site_xxz_levels,
    xx_sector_min_exact,
    xx_sector_min_reference,
    xx_sector_spectrum_exact,
    xx_sector_spectrum_reference,
    xx_single_excitation,
)
from .verify import ClaimResult, VerifyConfig, claim_ids, run_all, run_claim
