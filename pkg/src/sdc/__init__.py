"""String diagrams for symmetric monoidal categories, as terms and as open hypergraphs."""

from .errors import *  # noqa: F401,F403
from .hypergraph import (
    OpenHypergraph,
    Hyperedge,
    canonical_form,
    collapse_frobenius,
    components,
    degrees,
    from_term,
    from_term_frob,
    is_acyclic,
    is_monogamous,
    iso_check,
    par_compose,
    seq_compose,
    to_term,
    to_term_frob,
)
from .rewrite import (
    EQUAL,
    NOT_EQUAL,
    UNKNOWN,
    MatchSite,
    RewriteRule,
    Spider,
    Theory,
    apply_rewrite,
    decide_eq,
    find_matches,
    normalize,
    replay_derivation,
    rule_from_terms,
    spider_normal_form,
)
from .syntax import (
    Empty,
    Gen,
    Id,
    OperationDecl,
    Par,
    Permutation,
    Seq,
    Signature,
    Sym,
    Term,
    declare_signature,
    format_term,
    id_word,
    par_all,
    perm_to_term,
    permutation_term,
    seq_all,
    structural_op,
    sym_words,
    term_to_perm,
    type_of,
)
from .theories import THEORY_NAMES, builtin_theory

__version__ = "0.1.0"
