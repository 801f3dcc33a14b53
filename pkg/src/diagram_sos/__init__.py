"""Operational semantics of string diagrams.

Sorted diagram terms, structural congruence by canonical hypergraph keys,
labelled transitions derived from generator rules, bisimilarity, semantic
checks, and a name-passing-free process calculus encoded into diagrams.
"""
from .algebra import LabelAlgebra, enumerate_words, parse_algebra, plain_labels
from .bisim import BisimResult, bisimilar, bisimilar_lts
from .checks import (
    ProbeConfig,
    check_frobenius_axioms,
    congruence_probe,
    frobenius_axioms,
    lawvere_counterexample,
)
from .diagram import canonical_form, canonical_key, congruent, simplified_key, to_dot, to_hypergraph
from .errors import (
    AlgebraError,
    DeclarationError,
    DiagramError,
    ParseError,
    SignatureError,
    SortMismatch,
    TypingError,
)
from .proccalc import (
    ProcessSystem,
    encode,
    parse_declarations,
    parse_judgement,
    parse_process,
    process_lts,
    theorem_check,
    type_check,
)
from .sos import SCHEMA_VERSION, build_lts, load_signature, load_toy_coalgebra, step
from .syntax import (
    Generator,
    Signature,
    Sort,
    circ_signature,
    frobenius_signature,
    infer_sort,
    parse_term,
    place_term,
    pretty_print,
)

__version__ = "0.1.0"
