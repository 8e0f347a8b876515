"""bottlab: Bott indices of almost-commuting unitaries, loop pairings, and
their quantitative certificates."""

from .approx import (
    CommutingPair,
    EpsilonRecord,
    NearestOptions,
    ObstructionBound,
    epsilon_sweep,
    nearest_commuting,
    obstruction_lower_bound,
)
from .asymptotics import (
    SweepRecord,
    riemann_sum_half,
    run_step_checks,
    step1_check,
    step2_check,
    step3_check,
    step4_check,
    sweep,
    to_csv,
)
from .errors import (
    BottlabError,
    DimensionError,
    GapClosedError,
    InvalidMatrix,
    ModelInconsistencyError,
    NonIntegerIndexError,
    NotAProjection,
    NumericalError,
    SampleError,
    StabilityError,
    WindowError,
)
from .loring import (
    IndexResult,
    LoringElement,
    bott_index,
    defect_identity_rhs,
    loring_element,
    spectral_gap_at_half,
    spectral_projection,
)
from .matrixcore import (
    HermitianMatrix,
    SpectralDecomposition,
    SquareMatrix,
    UnitaryMatrix,
    apply_function_hermitian,
    apply_function_unitary,
    commutator,
    eig_hermitian,
    eig_unitary,
    operator_norm,
)
from .model import (
    DiracRamp,
    ShiftOrientation,
    TruncatedFourierSpace,
    bilateral_shift,
    canonical_pair,
    commutator_norm_voiculescu,
    dirac_F_t,
    u_t_operator,
    ut_from_dirac,
    voiculescu_pair,
)
from .pairing import (
    LoopUnitary,
    ProjectionMatrix,
    bott_loop,
    constant_loop,
    direct_sum,
    locality_window,
    loop_from_json,
    loop_to_json,
    multiplication_operator,
    pairing_index,
    power_loop,
    product_compatibility_check,
    random_projection,
    roundtrip_check,
    tensor_with_projection,
    winding_number,
)
from .symbols import SymbolTriple, default_triple, lipschitz_bound, on_circle, validate_triple

__version__ = "0.1.0"
