"""dynlyap: exact multiplier spectra, Lyapunov approximants and heights for
degree-d rational self-maps of P^1 over Q and Q(t)."""

__version__ = "0.1.0"

from .algebra import (
    BigRational,
    Poly,
    RatFunc,
    mobius,
    period_count,
    poly_exact_div,
    poly_nth_root,
    poly_resultant,
    sigma2,
)
from .analysis import (
    CritHeightReport,
    DegenerationReport,
    FFGrowthReport,
    crit_height_multiplier_estimate,
    crit_height_series,
    crit_height_truncated_estimate,
    degeneration_slope,
    ff_degree_sequence,
    global_consistency,
    isotriviality_report,
)
from .budget import Budget
from .errors import (
    ArchimedeanPlace,
    DegenerateMap,
    DynlyapError,
    FFPlaceOnRationalBase,
    IrrationalCriticalPoint,
    NonExactDivision,
    NotAPerfectPower,
    ParseError,
    PoleOutsideCenter,
    ResourceLimit,
    RootFindingFailure,
)
from .heights import (
    HeightValue,
    canonical_height,
    critical_height_direct,
    local_green,
    map_height,
    naive_height,
    point_of,
)
from .lyapunov import (
    LipschitzData,
    LyapunovEstimate,
    TruncationRadius,
    L_n_local,
    epsilon_radius,
    lipschitz_data,
    lyapunov_arch,
    lyapunov_nonarch_sequence,
    approximation_bound,
)
from .mapio import format_map, parse_map, parse_place
from .maps import (
    CriticalDivisor,
    FixedDivisor,
    HomLift,
    Mobius2,
    RationalMap,
    abs_resultant,
    conjugate,
    critical_divisor,
    cycle_multiplier,
    fixed_point_divisor,
    iterate_lift,
    map_from_affine,
    minimal_lift,
    multiplier_rational_function,
    new_map,
    resultant_of_lift,
)
from .multipliers import (
    DynatomicDivisor,
    MultiplierSpectrum,
    ProjPoint,
    charpoly_multipliers_full,
    dynatomic_divisor,
    lambda_point,
    lambda_tilde_point,
    multiplier_polynomial,
)
from .places import LocalLogValue, Place, local_abs
