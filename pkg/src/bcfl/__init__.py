"""Context-free grammars with Buchi and Muller acceptance over countable scattered words."""

from .errors import (
    AnalysisError,
    BcflError,
    NormalFormViolation,
    NotLinear,
    NotWellOrdered,
    OpenOmegaOperand,
    ParseError,
    ReproductiveInput,
)
from .grammar import Buchi, Grammar, Muller, Rule, format_grammar, parse_grammar
from .words import WordTerm, canonical, format_term, order_type_cnf, parse_term

# submodules such as bcfl.rank stay reachable as attributes, so no names here shadow them

__all__ = [
    "AnalysisError", "BcflError", "NormalFormViolation", "NotLinear", "NotWellOrdered",
    "OpenOmegaOperand", "ParseError", "ReproductiveInput",
    "Buchi", "Grammar", "Muller", "Rule", "format_grammar", "parse_grammar",
    "WordTerm", "canonical", "format_term", "order_type_cnf", "parse_term",
]
