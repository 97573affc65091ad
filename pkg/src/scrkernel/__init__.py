"""Kernel analysis of linear simple cycle reservoirs.

At unit spectral radius the motifs of a linear simple cycle reservoir are a
real Fourier basis; this package builds the reservoirs, their metric tensors
and motifs, checks that structure numerically, measures the relative-area
diagnostic and compares motif-space forecasters.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AmbiguityError,
    ColumnError,
    ConvergenceError,
    DataError,
    PreconditionError,
    ResourceError,
    ScrKernelError,
    SingularityError,
    StructuralError,
    StructureViolation,
)
from .numerics import dft, idft, principal_angles, ridge_solve, sym_eig  # noqa: E402
from .reservoir import (  # noqa: E402
    CycleReservoir,
    cycle_matrix,
    drive,
    feature_map,
    feature_matrix,
    pi_sign_pattern,
)
from .kernel import (  # noqa: E402
    MetricTensor,
    MotifBasis,
    kernel_eval,
    metric_tensor,
    motif_decomposition,
    replicate_motif,
    rmm_features,
)
from .spectral import (  # noqa: E402
    RealFourierBasis,
    align_motifs_to_fourier,
    motif_fft,
    periodic_extension_basis,
    real_fourier_basis,
    relative_area,
    rho_sweep,
)
from .structure import (  # noqa: E402
    build_gram_block,
    canonicalize_symmetry,
    theorem_suite,
    toeplitz_circulant_centro_check,
    verify_harmonic,
    verify_idempotent_scaled,
    verify_rank,
)
from .data import TimeSeriesDataset, load_csv, split_standardize, synth  # noqa: E402
from .forecast import (  # noqa: E402
    ForecastReport,
    compare,
    default_models,
    fit,
    make_windows,
    predict,
)
