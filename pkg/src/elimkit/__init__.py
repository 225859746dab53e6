"""elimkit: exact-arithmetic toolkit for polynomials given as straight-line
programs — correct-test and identification sequences, value encodings,
explicit hard families, hypercube elimination with rank certificates, and
VC-dimension bounds."""

from .bounds import BoundsReport, bezout, vc_shatter_oracle, vc_upper, wlt_vc_sandwich
from .families import (
    FirstOrderData,
    HypercubeFamily,
    ell_matrix,
    fd_slp,
    fn_slp,
    gtilde_system,
    omega_d,
    phi_formula,
    pn_first_order,
    pn_specialized,
    rn_slp,
    sample_gamma_n,
)
from .harness import (
    RankCertificate,
    blowup_report,
    distinctness_probe_gamma_n,
    eliminate_hypercube,
    independence_rank,
    lk_at_points_rank,
    robustness_probe_paradigm1,
    robustness_probe_paradigm2,
    separability_check,
    tangent_rank_paradigm1,
)
from .poly import MultiPoly, PolyRing, count_terms, expand, interpolate, parse_poly
from .rings import QQ, PrimeField, least_prime_above
from .sequences import (
    ClassSpec,
    TestSequence,
    is_correct_test_sequence,
    is_identification_sequence,
    pit,
    required_length,
    required_set_size,
    sample_sequence,
    universality_probe,
)
from .slp import Slp, SlpBuilder, evaluate, parse_slp, profile, rearranged_size, serialize_slp, validate
from .value_encoding import ValueCode, code_eq, decode, encode, injectivity_check

__version__ = "1.0.0"
