"""Cohomogeneity-one metrics on S^4 and CP^2: profiles, curvature,
Finsler-Thorpe positivity certificates, and Ricci flow."""

from .curvature import (
    BlockField,
    CurvatureBlocks,
    RicciDiagonal,
    block_field,
    curvature_blocks,
    gz_blocks_closed_form,
    gz_inequality_check,
    hodge_star,
    ricci_diagonal,
    s3_torus_curvature,
)
from .errors import (
    BlowUp,
    CurvlabError,
    GridMismatch,
    InvalidParams,
    NonPositiveMetric,
    PoleEvaluationFailed,
    ReproductionFailed,
    ShootingFailed,
    StepRejected,
)
from .flow import (
    DtPolicy,
    FlowEvent,
    FlowState,
    detect_mixed_sign,
    flow_rhs,
    homothety_error,
    integrate,
    monitor_offdiagonal,
)
from .positivity import (
    PositivityCertificate,
    TauInterval,
    Verdict,
    certify,
    expansion_check,
    max_min_eig,
    min_sec_bruteforce,
    paper_tau_witness,
    tau_interval,
)
from .profiles import (
    BumpFn,
    ClosedFormTriple,
    GZParams,
    ProfileTriple,
    SampledTriple,
    SmoothnessReport,
    build_bump,
    check_smoothness,
    default_gz_params,
    gz_profiles,
    interpolate,
    interpolated_profiles,
    make_gz_params,
    rescale,
    standard_profiles,
    validate_gz_params,
)
from .spaces import CP2, S4, SpaceKind, space_by_name

__version__ = "0.1.0"
