"""orbitscope: a desk-scale laboratory for coarse dynamics of weighted shifts.

Exact orbits and coarse orbits of weighted shift operators on finitely
supported sequence vectors, ball-generated open cones with exact
membership tests, finite certificates for coarse extended limit sets,
and runnable certificate suites with independent re-verification.
"""

from .errors import (
    ConfigError,
    IndecisiveSpectrum,
    IndexSetMismatch,
    InputNotAWitnessFamily,
    ModeMismatch,
    NormMismatch,
    NumericOverflow,
    OrbitscopeError,
    SearchFailed,
    SynthesisFailed,
    VerificationFailed,
)
from .numeric import Mode, QC, numeric_mode, set_default_mode, default_mode
from .spaces import (
    IndexSet,
    NormTag,
    OpenCone,
    SeqVector,
    cone_contains,
    cone_sample,
    norm,
    norm_gt,
    norm_lt,
)
from .operators import (
    Band,
    Block,
    Constant,
    Periodic,
    PiecewiseTwoSided,
    PRESETS,
    Shape,
    ShiftOperator,
    SpectralTrace,
    Table,
    WeightProduct,
    apply,
    apply_power,
    prop32_operator,
    riesz_blocks,
    shift_from_jsonable,
    spectral_radius_estimate,
    weight_product,
)
from .orbits import (
    CoarseDensityReport,
    CoarseWitness,
    OrbitTrace,
    coarse_density_report,
    coarse_orbit_contains,
    make_coarse_witness,
    orbit,
    orbit_points_in_ball,
    rescale_coarse_witness,
)
from .limit_sets import (
    ContradictionReport,
    DWitness,
    EpsSchedule,
    JWitness,
    JWitnessTriple,
    Prop22Amplification,
    d_witness,
    derive_remark32_bounds,
    jmix_witness,
    prop22_amplify,
    prop31_rescale,
    remark32_contradiction_check,
    rescale_j_witness_family,
    scale_j_witness,
    search_j_witness,
    synthesize_shift_j_witness,
    with_bound,
)

__version__ = "0.1.0"
