"""Finite computations with co-operations, representable functors and their towers."""

from .sig_core import (
    BETA,
    NAMED_IDENTITIES,
    App,
    CapabilityError,
    Catalog,
    Identity,
    ParseError,
    Proj,
    Signature,
    VarietyDescriptor,
    parse_identity,
    parse_term,
)
from .words import GenId, Word, format_word, normal_form, parse_word

__all__ = [
    "BETA",
    "NAMED_IDENTITIES",
    "App",
    "CapabilityError",
    "Catalog",
    "GenId",
    "Identity",
    "ParseError",
    "Proj",
    "Signature",
    "VarietyDescriptor",
    "Word",
    "format_word",
    "normal_form",
    "parse_identity",
    "parse_term",
    "parse_word",
]
