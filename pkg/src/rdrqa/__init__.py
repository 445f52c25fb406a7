"""Ontology-based question answering with a ripple-down-rules analysis core."""

from .annotations import Annotation, Document, Span, create_document
from .ir import IntermediateRepresentation, QueryTuple, validate_ir
from .ontology import Ontology, load_ontology
from .scrdr import KnowledgeBase, load_kb, new_kb, persist_kb, validate_kb

__all__ = [
    "Annotation",
    "Document",
    "Span",
    "create_document",
    "IntermediateRepresentation",
    "QueryTuple",
    "validate_ir",
    "Ontology",
    "load_ontology",
    "KnowledgeBase",
    "load_kb",
    "new_kb",
    "persist_kb",
    "validate_kb",
]
