"""Exact classification of plane sheaves with Hilbert polynomial 6m+2.

A sheaf is given by an injective square matrix of homogeneous polynomials
``phi: ⊕O(a_j) -> ⊕O(b_i)``; the package computes its cohomology and decides
which of the seven strata X0..X6 it belongs to.
"""

__version__ = "0.1.0"

from .field import DEFAULT_FIELD, GF, QQ, Field  # noqa: E402
from .poly import HomPoly, euler_chi, exact_divide, multiplication_matrix, poly_mul  # noqa: E402
from .parsing import parse_poly  # noqa: E402
from .morphism import (  # noqa: E402
    EquivalenceElement,
    SheafMorphism,
    StratumShape,
    TEMPLATES,
    TwistedSum,
    apply_equivalence,
    determinant,
    dual_resolution,
    hilbert_polynomial,
    is_injective,
    make_morphism,
    random_morphism,
    validate_morphism,
)
from .cohomology import (  # noqa: E402
    CohomologyProfile,
    cohomology_profile,
    h0_omega,
    h0_twist,
    h1_twist,
    section_space,
)
from .kronecker import KroneckerModule, kronecker_semistable  # noqa: E402
from .patterns import minors_independent, x0_pattern_free, x2_form_free, x4_condition  # noqa: E402
from .classify import STRATUM_TABLE, StratumReport, classify, stratum_predicates  # noqa: E402
