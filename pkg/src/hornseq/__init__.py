"""Sequential composition algebra of propositional Horn programs.

Programs compose by resolving body atoms against rule heads; the package
provides the resulting algebra (units, duals, reducts, powers, star/plus,
omega), the classical fixpoint semantics, and decision procedures with
witnesses for the induced Green-style relations, cross-checked against
brute-force oracles on tiny alphabets.
"""

from .algebra import (
    PowerTrace,
    build_ominus,
    build_oplus,
    compose,
    dual,
    heads_bodies,
    left_reduct,
    omega,
    partial_unit,
    plus,
    power,
    power_trace,
    right_reduct,
    split,
    star,
    unit,
)
from .errors import (
    AlphabetError,
    BoundExceededError,
    HornError,
    InternalError,
    ProgramSyntaxError,
)
from .green import (
    ClassReport,
    Discrepancy,
    GreenWitness,
    TheoremDiscrepancyWarning,
    canonical_prefix,
    check_le_j_against_oracle,
    check_le_l_against_oracle,
    check_le_r_against_oracle,
    equiv,
    find_nonassociative_triple,
    green_partition,
    le,
    le_j,
    le_l,
    le_r,
    oracle_le,
    oracle_prefix,
    oracle_suffix,
    suffix_search,
)
from .semantics import (
    FixpointTrace,
    enumerate_models,
    entails,
    is_model,
    least_model,
    subsumption_equivalent,
    tp,
)
from .syntax import (
    Alphabet,
    Atom,
    Interpretation,
    Program,
    Rule,
    all_programs,
    all_rules,
    as_interpretation,
    facts_program,
    infer_alphabet,
    parse_interpretation,
    parse_program,
    render_interpretation,
    render_program,
    render_rule,
)

__version__ = "0.1.0"
