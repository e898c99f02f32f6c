"""gapforge: provably long prime gaps in arithmetic progressions, at desk scale.

Builds residue-class coverings of [1, U] over the primes up to x (zeros on
the mid-range, ones below the smooth limit, greedy max-coverage above),
places the covered block inside the progression a (mod M) by the Chinese
Remainder Theorem, and emits certificates whose every composite carries an
explicit witness.
"""

from .analytic import (
    AdmissibleTuple,
    AnalyticConstants,
    WeightContext,
    admissible_tuple,
    count_R0_exact,
    count_Rm_exact,
    estimate_report,
    is_admissible,
    mertens_ratio,
    omega_mq,
    omega_prime,
    predicted_Rm,
    singular_series_m,
    singular_series_mq,
    sum_Rm_measured,
)
from .assembly import (
    GapCertificate,
    VerifyResult,
    build_certificate,
    certificate_from_json,
    certificate_to_json,
    modular_inverse_r,
    solve_U0,
    verify_certificate,
)
from .construction import (
    CoverResult,
    ResidueAssignment,
    SurvivorClassification,
    classify_survivors,
    cover_survivors,
    greedy_cover,
    max_covered_U,
    run_phases,
    survivor_list,
)
from .params import (
    DomainError,
    ModulusCheck,
    SieveParams,
    check_modulus,
    derive_params,
    iterated_log,
)
from .primes import (
    ExhaustionError,
    PrimorialValue,
    is_prime,
    next_prime_in_ap,
    primes_in_range,
    primorial_excluding,
    smooth_numbers_up_to,
    totient_and_omega,
)

__version__ = "0.1.0"
