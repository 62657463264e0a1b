"""Exact arithmetic for probability-weighted digit expansions of [0, 1],
digit-flip maps between them, and the analysis/fractal toolkit on top."""

from .core import (
    DEFAULT_BUDGET,
    Cylinder,
    DigitSeq,
    Enclosure,
    PointClass,
    PointKind,
    ProbVector,
    as_fraction,
    bernoulli_cdf,
    classify,
    cylinder_bounds,
    encode,
    eval_digits,
    horner_sum,
    make_prob_vector,
    sample_digits,
    shift_digits,
    shift_value,
)
from .errors import (
    BaseTooSmall,
    BudgetExceeded,
    DigitOutOfRange,
    EmptyAlphabet,
    EndpointOneSided,
    FlipSpecError,
    NonPositiveWeight,
    NotPRational,
    NotShiftInvariant,
    OutOfUnitInterval,
    PrefixTooShort,
    ProbDigitsError,
    RankTooLarge,
    ShiftPastPrefix,
    SumNotOne,
)
from .flips import (
    EVEN_POSITIONS,
    FlipKind,
    FlipSet,
    FlipSystem,
    eval_flip,
    eval_nega,
    flip_digits,
    flip_image,
    nega_to_digits,
)
from .analysis import (
    ContinuityClass,
    DerivativeTrace,
    JumpReport,
    MonotoneWitness,
    continuity_class,
    cylinder_image,
    derivative_estimate,
    integral_closed_form,
    integral_riemann,
    integral_series,
    jump_at,
    monotone_witness,
    p_rationals,
)
from .fractal import (
    AffineMap2D,
    MoranSpec,
    covering_measure,
    entropy_sum,
    graph_dimension_estimate,
    ifs_graph_points,
    ifs_maps,
    moran_dimension,
    moran_set_cylinders,
    rectangle_diagonals_sq,
)

__version__ = "0.1.0"
