"""Question structures, query tuples, and conclusion templates.

A question's analysis result is an intermediate representation: an overall
question structure plus one query tuple per sub-question, each tuple being

    (sub-structure, question category, Term1, Relation, Term2, Term3)

Conclusion templates describe how a fired rule fills those slots from the
annotations it (and its ancestor rules) posted. Slot references use a compact
dotted syntax, stored as-is in the knowledge-base file:

    ?                          missing attribute
    RDR1_NP                    text covered by the posted annotation
    RDR1_.category1            feature of the posted annotation
    RDR1_QP.QuestionPhrase.category
                               feature of the annotation of another type
                               sharing the posted annotation's exact span
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .annotations import Document
from .lang import LanguageProfile, comparable_relation, normalize_relation, normalize_term

STRUCTURES = (
    "Normal", "UnknTerm", "UnknRel", "Definition", "Compare", "ThreeTerm",
    "Clause", "Combine", "And", "Or", "Affirm_MoreTuples", "Affirm", "Affirm_3Term",
)

# structures whose intermediate representation carries exactly one tuple
SINGLE_TUPLE = frozenset({
    "Normal", "UnknTerm", "UnknRel", "Definition", "Compare", "ThreeTerm",
    "Affirm", "Affirm_3Term",
})
MULTI_TUPLE = frozenset({"And", "Or", "Combine", "Clause", "Affirm_MoreTuples"})

# overall structures in whose context a tuple legitimately carries Term3
TERM3_CONTEXTS = frozenset({"Compare", "ThreeTerm", "Affirm_3Term", "Clause"})

CATEGORIES = {
    "vi": frozenset({
        "What", "When", "Where", "Who", "HowWhy", "YesNo", "Many", "ManyClass",
        "List", "Entity",
    }),
    # the yes/no label is shared across languages in printed tuples
    "en": frozenset({
        "QU-who-what", "QU-whichClass", "QU-listClass", "QU-howmany", "QU-yesno",
        "YesNo",
    }),
}


class InstantiationError(Exception):
    """A conclusion slot referenced an annotation or feature that is absent."""


@dataclass(frozen=True)
class QueryTuple:
    sub_structure: str
    category: str
    term1: Optional[str] = None
    relation: Optional[str] = None
    term2: Optional[str] = None
    term3: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "sub": self.sub_structure,
            "cat": self.category,
            "t1": self.term1,
            "rel": self.relation,
            "t2": self.term2,
            "t3": self.term3,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QueryTuple":
        def slot(key: str) -> Optional[str]:
            value = data.get(key)
            if value in (None, "?", ""):
                return None
            return value

        return cls(data["sub"], data["cat"], slot("t1"), slot("rel"), slot("t2"), slot("t3"))


@dataclass(frozen=True)
class IntermediateRepresentation:
    structure: str
    tuples: tuple[QueryTuple, ...]

    def to_dict(self) -> dict:
        return {"structure": self.structure, "tuples": [t.to_dict() for t in self.tuples]}

    @classmethod
    def from_dict(cls, data: dict) -> "IntermediateRepresentation":
        return cls(data["structure"], tuple(QueryTuple.from_dict(t) for t in data["tuples"]))


def validate_ir(ir: IntermediateRepresentation) -> list[str]:
    """Violations of the structural invariants; empty list when well-formed."""
    violations: list[str] = []
    if ir.structure not in STRUCTURES:
        violations.append(f"unknown structure {ir.structure!r}")
        return violations
    count = len(ir.tuples)
    if ir.structure in SINGLE_TUPLE and count != 1:
        violations.append(f"{ir.structure} requires exactly 1 tuple, got {count}")
    if ir.structure in MULTI_TUPLE and count < 2:
        violations.append(f"{ir.structure} requires at least 2 tuples, got {count}")
    known = CATEGORIES["vi"] | CATEGORIES["en"]
    for i, t in enumerate(ir.tuples):
        where = f"tuple {i}"
        if t.sub_structure not in STRUCTURES:
            violations.append(f"{where}: unknown sub-structure {t.sub_structure!r}")
            continue
        if t.category not in known:
            violations.append(f"{where}: unknown category {t.category!r}")
        term3_ok = ir.structure in TERM3_CONTEXTS or t.sub_structure in ("Compare", "ThreeTerm")
        if t.sub_structure == "Normal" and t.term3 is not None and not term3_ok:
            violations.append(f"{where}: Normal tuple must not carry term3")
        if t.sub_structure == "UnknTerm":
            if t.term1 is not None:
                violations.append(f"{where}: UnknTerm tuple must not carry term1")
            if t.term3 is not None and not term3_ok:
                violations.append(f"{where}: UnknTerm tuple must not carry term3")
        if t.sub_structure == "UnknRel":
            if t.relation is not None:
                violations.append(f"{where}: UnknRel tuple must not carry relation")
            if t.term3 is not None and not term3_ok:
                violations.append(f"{where}: UnknRel tuple must not carry term3")
        if t.sub_structure == "Definition" and any(
            (t.term1, t.relation, t.term3)
        ):
            violations.append(f"{where}: Definition tuple carries only term2")
        if t.sub_structure == "ThreeTerm" and t.term3 is None:
            violations.append(f"{where}: ThreeTerm tuple requires term3")
    return violations


# ---------------------------------------------------------------------------
# Conclusion templates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Slot:
    """One query-tuple attribute reference; see module docstring for syntax."""

    kind: str  # "missing" | "text" | "attr" | "colocated"
    type_name: Optional[str] = None
    co_type: Optional[str] = None
    feature: Optional[str] = None

    @classmethod
    def parse(cls, source: str) -> "Slot":
        source = source.strip()
        if source == "?":
            return cls("missing")
        parts = source.split(".")
        if len(parts) == 1:
            return cls("text", type_name=parts[0])
        if len(parts) == 2:
            return cls("attr", type_name=parts[0], feature=parts[1])
        if len(parts) == 3:
            return cls("colocated", type_name=parts[0], co_type=parts[1], feature=parts[2])
        raise ValueError(f"unparseable slot reference {source!r}")

    def to_text(self) -> str:
        if self.kind == "missing":
            return "?"
        if self.kind == "text":
            return self.type_name or ""
        if self.kind == "attr":
            return f"{self.type_name}.{self.feature}"
        return f"{self.type_name}.{self.co_type}.{self.feature}"


# slot order inside a tuple template
_SLOT_KEYS = ("sub", "cat", "t1", "rel", "t2", "t3")


@dataclass(frozen=True)
class TupleTemplate:
    sub: Slot
    cat: Slot
    t1: Slot
    rel: Slot
    t2: Slot
    t3: Slot

    @classmethod
    def parse(cls, slots: list[str]) -> "TupleTemplate":
        if len(slots) != 6:
            raise ValueError(f"tuple template needs 6 slots, got {len(slots)}")
        return cls(*(Slot.parse(s) for s in slots))

    def to_list(self) -> list[str]:
        return [getattr(self, key).to_text() for key in _SLOT_KEYS]


@dataclass(frozen=True)
class ConclusionTemplate:
    structure: str
    tuple_templates: tuple[TupleTemplate, ...]

    @classmethod
    def from_dict(cls, data: dict) -> "ConclusionTemplate":
        return cls(
            data["structure"],
            tuple(TupleTemplate.parse(t) for t in data["tuples"]),
        )

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "tuples": [t.to_list() for t in self.tuple_templates],
        }


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def _resolve(slot: Slot, doc: Document, where: str) -> Optional[str]:
    if slot.kind == "missing":
        return None
    anns = doc.annotations(slot.type_name)
    if not anns:
        raise InstantiationError(f"{where}: no {slot.type_name} annotation on the case")
    ann = anns[0]
    if slot.kind == "text":
        return _normalize_ws(doc.text[ann.span.start : ann.span.end])
    if slot.kind == "attr":
        value = ann.feature(slot.feature or "")
        if value is None:
            raise InstantiationError(
                f"{where}: {slot.type_name} lacks feature {slot.feature!r}"
            )
        return value
    # co-located: annotation of co_type sharing the exact span
    for other_id in doc.find_within(ann.span, slot.co_type or ""):
        other = doc.get(other_id)
        if other.span == ann.span:
            value = other.feature(slot.feature or "")
            if value is None:
                raise InstantiationError(
                    f"{where}: co-located {slot.co_type} lacks feature {slot.feature!r}"
                )
            return value
    raise InstantiationError(
        f"{where}: no {slot.co_type} annotation co-located with {slot.type_name}"
    )


def instantiate(
    template: ConclusionTemplate, doc: Document, prof: LanguageProfile
) -> IntermediateRepresentation:
    """Build the intermediate representation from a fired rule's postings.

    Covered-text term slots are trimmed of leading question triggers and
    determiners (vi also of trailing "nào"/"gì"); relation slots lose leading
    copulas/passive markers. Trailing prepositions stay.
    """
    tuples = []
    for index, tt in enumerate(template.tuple_templates):
        where = f"tuple {index}"
        sub = _resolve(tt.sub, doc, where + " sub-structure")
        cat = _resolve(tt.cat, doc, where + " category")
        if sub is None or cat is None:
            raise InstantiationError(f"{where}: sub-structure and category are mandatory")

        def term(slot: Slot, name: str) -> Optional[str]:
            value = _resolve(slot, doc, f"{where} {name}")
            if value is None:
                return None
            if slot.kind == "text":
                return normalize_term(value, prof)
            return value

        rel_value = _resolve(tt.rel, doc, where + " relation")
        if rel_value is not None and tt.rel.kind == "text":
            rel_value = normalize_relation(rel_value, prof)
        tuples.append(
            QueryTuple(
                sub_structure=sub,
                category=cat,
                term1=term(tt.t1, "term1"),
                relation=rel_value,
                term2=term(tt.t2, "term2"),
                term3=term(tt.t3, "term3"),
            )
        )
    return IntermediateRepresentation(template.structure, tuple(tuples))


# ---------------------------------------------------------------------------
# Expected-IR comparison (corpus evaluation)
# ---------------------------------------------------------------------------


def ir_matches(
    expected: IntermediateRepresentation,
    actual: Optional[IntermediateRepresentation],
    prof: LanguageProfile,
) -> tuple[bool, list[str]]:
    """Exact comparison up to whitespace, with the trailing-preposition
    allowance on relation slots."""
    if actual is None:
        return False, ["no analysis produced"]
    diffs: list[str] = []
    if expected.structure != actual.structure:
        diffs.append(f"structure: expected {expected.structure}, got {actual.structure}")
    if len(expected.tuples) != len(actual.tuples):
        diffs.append(f"tuple count: expected {len(expected.tuples)}, got {len(actual.tuples)}")
    for i, (exp, got) in enumerate(zip(expected.tuples, actual.tuples)):
        def norm(value: Optional[str]) -> str:
            return _normalize_ws(value or "")

        if exp.sub_structure != got.sub_structure:
            diffs.append(f"tuple {i} sub: expected {exp.sub_structure}, got {got.sub_structure}")
        if exp.category != got.category:
            diffs.append(f"tuple {i} cat: expected {exp.category}, got {got.category}")
        for name in ("term1", "term2", "term3"):
            if norm(getattr(exp, name)) != norm(getattr(got, name)):
                diffs.append(
                    f"tuple {i} {name}: expected {getattr(exp, name)!r}, "
                    f"got {getattr(got, name)!r}"
                )
        if comparable_relation(exp.relation, prof) != comparable_relation(got.relation, prof):
            diffs.append(
                f"tuple {i} relation: expected {exp.relation!r}, got {got.relation!r}"
            )
    return (not diffs), diffs
