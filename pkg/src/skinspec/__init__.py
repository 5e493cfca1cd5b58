"""skinspec: spectra, pseudospectra and edge modes of tridiagonal
k-periodic operators, with a resonator-chain front end."""

from .linalg import (
    EigenPair,
    eig_dense,
    eigvals_dense,
    poly_roots,
    smallest_singular_value,
    solve_least_squares,
)
from .modes import (
    DecayProfile,
    OperatorEigenvector,
    decay_profile,
    jordan_chain_vector,
    materialize,
    operator_eigenvector,
    pseudo_eigenvector,
    residual,
)
from .resonator import (
    KToeplitzSpec,
    ModeRecord,
    ResonatorChain,
    SkinReport,
    capacitance_matrix,
    capacitance_to_ktoeplitz,
    ktoeplitz_matrix,
    skin_effect_report,
)
from .spectra import (
    ClassifiedGrid,
    GridSpec,
    RecurrenceResult,
    SigmaDetSample,
    SpectrumClassification,
    block_circulant_eigs,
    block_circulant_matrix,
    classify_grid,
    classify_spectrum_point,
    default_grid,
    kernel_forward_recurrence,
    laurent_spectrum_sample,
    principal_minor_eigs,
    pseudospectrum_grid,
    sample_region_interior,
    sigma_det_sample,
)
from .symbol import (
    DegenerateSymbolError,
    RootPair,
    SymbolBlocks,
    SymbolCoeffs,
    build_blocks,
    det_closed_form,
    det_offset,
    det_offset_poly,
    double_root_lambdas,
    eval_symbol,
    inner_minor,
    quadratic_roots,
    reversed_coeffs,
    truncation,
)
from .winding import (
    BoundaryError,
    RegionLabel,
    UnwrapError,
    WindingResult,
    classify_region,
    eigencurve_winding_sum,
    winding_at_radius,
    winding_via_argument,
)

__version__ = "0.1.0"
