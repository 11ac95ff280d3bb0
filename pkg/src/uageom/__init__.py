"""Universal algebraic geometry over finite one-sorted algebras.

Builds free algebras of varieties generated by finite algebras, computes
solution sets and closed-congruence lattices, constructs star algebras
from word systems, and decides (at bounded scale) geometric and
automorphism-mediated equivalence of finite algebras, with
machine-readable certificates.
"""

from .algebras import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    eval_term,
    generate_subalgebra,
    hom_set,
    is_homomorphism,
    kernel,
    product_algebra,
    quotient_algebra,
    satisfies_identity,
)
from .equivalence import (
    EquivalenceCertificate,
    auto_equivalent_search,
    compose_word_systems,
    geom_equivalent,
    transport_closed,
    verify_coordinate_correspondence,
    verify_equivalence_facts,
    verify_H_Hstar,
)
from .errors import (
    AlgebraError,
    CapExceeded,
    EngineError,
    ParseError,
    TermError,
    VarietyError,
    WordSystemError,
)
from .free import (
    FreeAlgebra,
    VarietySpec,
    build_free,
    extend_hom,
    free_rank_sizes,
    term_image,
    variety_membership,
)
from .geometry import (
    ClosedCongruence,
    ClosedLattice,
    closed_lattice,
    closure,
    id_congruence,
    is_closed,
    point_congruence,
    solutions,
)
from .terms import (
    App,
    Signature,
    Term,
    Var,
    enumerate_terms,
    format_term,
    parse_signature,
    parse_term,
    replace_symbols,
    substitute,
    term_vars,
)
from .verbal import (
    BijectionSystem,
    WordSystem,
    bijections_from_words,
    check_b1_b2,
    check_op1,
    check_op2,
    derived_operation,
    identity_system,
    inverse_word_system,
    star_algebra,
    strongly_stable_action,
    verify_zhito,
    words_from_bijections,
)

__version__ = "0.1.0"
