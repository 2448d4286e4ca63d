"""Orthogonal planes split of quaternions, 4D rotation geometry and
steerable quaternion Fourier transforms with FFT-based fast paths."""

from .errors import (
    AxisUndefinedError,
    BranchError,
    DegenerateError,
    FormatError,
    OpsQftError,
    QuaternionDomainError,
    QuaternionParseError,
    ValidationError,
)
from .quaternion import (
    I,
    J,
    K,
    ONE,
    AxisAngle,
    PureUnit,
    Quaternion,
    axis_angle,
    commutator,
    conj,
    exp_pure,
    format_quaternion,
    inner,
    inverse,
    is_orthogonal,
    mu,
    mul,
    norm,
    parse_quaternion,
    scalar_part,
    vector_part,
)
from .ops import (
    Branch,
    OpsContext,
    coefficients,
    detfg_from_plane,
    exp_sandwich,
    factor_forms,
    make_context,
    reconstruct,
    rotation_to_axis,
    split,
    split_field,
)
from .geometry import (
    RotaryReflection,
    apply_rotary_reflection,
    double_rotation,
    half_turn,
    integrand_geometry,
    make_rotary_reflection,
    reflect_hyperplane,
    reflect_line,
)
from .qft import QField2D, QSpectrum2D, Variant, iqft, parseval_check, qft_fast, qft_naive, split_transform
from .fields import QCloud, ScatterProjection, load_image, random_cloud, read_grid, save_image, scatter_projections, write_grid

__version__ = "0.1.0"
