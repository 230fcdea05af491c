"""Expected edit distance between random strings.

Exact values by coalesced dynamic programming, Monte Carlo estimates with
concentration-based confidence intervals, and a certified analytic lower
bound on the limit constant alpha_k.
"""
from .distance import (
    edit_distance,
    edit_distance_bitparallel,
    edit_distance_lowmem,
    hamming_distance,
)
from .exponent import d2g_ddelta2, dg_ddelta, entropy, entropy_d1, entropy_d2, g
from .exact import (
    ColumnMultiset,
    DPColumn,
    canonicalize,
    column_multisets,
    eccentricity_cdp,
    eccentricity_naive,
    eccentricity_weighted,
    enumerate_classes,
    expected_distance_bruteforce,
    expected_distance_exact,
    orbit_size,
)
from .lower_bound import (
    BallBound,
    BetaBracket,
    FloatArithmetic,
    IntervalArithmetic,
    Sign,
    G_bracket,
    ball_upper_bound,
    beta_hat_analytic,
    beta_star,
    css_count,
    ecc_lower_bound,
    exponential_bound_rhs,
    max_entropy_constant,
    sign_G,
    tangent_upper,
)
from .montecarlo import (
    ConfidenceInterval,
    SampleStats,
    ci_alpha_limit,
    ci_alpha_n,
    delta_radius,
    estimate_alpha_n,
    estimate_c_alpha,
    q_rate_bound,
    sample_pair,
)
from .strings import AlphabetMismatchError, ResourceGuardError, SymbolString

__version__ = "0.1.0"
