"""k-Diophantine m-tuples over prime fields: enumeration, counts and checks."""

from ._backend import backend, set_backend, use_backend
from .charsums import (
    DefectReport,
    PatternSpec,
    Polynomial,
    WeilReport,
    cubic_sum,
    linear_sum,
    pattern_bound_check,
    pattern_count,
    quadratic_sum,
    weil_check,
)
from .curves import (
    CurveCount,
    QuadRep,
    ResidueClass,
    brute_point_count,
    classify,
    gauss_candidates,
    represent,
    verify_gauss,
)
from .errors import *  # noqa: F401,F403
from .field import (
    PrimeField,
    addmod,
    inverse,
    is_square,
    legendre,
    make_field,
    mulmod,
    powmod,
)
from .tuples import (
    BoundSpec,
    CountReport,
    WitnessReport,
    asymptotic_ratio,
    closed_form_N3,
    count_tuples,
    cube_count,
    enumerate_tuples,
    existence_bound,
    find_witness,
    is_tuple,
    pair_count,
)

__version__ = "0.1.0"
