"""Growth exponents for height counting in semigroup orbits of unicritical polynomials."""

__version__ = "0.1.0"

from .approximation import ExponentSet, approximate, verify_approximation
from .census import Census, collision_report, enumerate_orbit, function_count_bounded, growth_fit
from .compositions import (
    PartSet,
    count_asymptotic,
    count_cumulative,
    count_exact,
    cumulative_bounds,
    dominant_root,
)
from .exponents import (
    CutoffGF,
    ExponentBracket,
    c_T_bound,
    cutoff_root,
    direct_exponent_oracle,
    explicit_constants,
    exponent_bounds,
    gap_bound,
)
from .heights import (
    INFINITY,
    as_point,
    height_exceeds_threshold,
    multiplicative_height_leq,
    weil_height,
)
from .semigroup import (
    Generator,
    GeneratorSet,
    Word,
    compose_symbolic,
    delta_spaced_primes,
    evaluate,
    is_uniformly_log_discrete,
    mersenne_degrees,
    power_plus_b_degrees,
    telescoping_interval,
)
