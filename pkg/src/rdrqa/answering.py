"""Answer extraction: evaluate ontology tuples and compose final answers.

Sub-question answers are sets of instances (or datatype values, booleans,
counts). The overall question structure dictates composition: And
intersects, Or unites, Combine keeps the sub-answers separate, Clause feeds
the second tuple's answer into the first tuple's missing Term2, and the
Affirm family reduces to yes/no. The question category controls rendering
(lists, counts, yes/no).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ir import IntermediateRepresentation, QueryTuple
from .lang import LanguageProfile
from .mapping import OntologyTuple, PendingChoice, map_query_tuple
from .ontology import Ontology


class AnswerError(Exception):
    """Extraction failed for a structural reason."""


class UnsupportedComparisonError(AnswerError):
    """Superlative comparisons need a ranking service the engine lacks."""


@dataclass(frozen=True)
class TupleAnswer:
    kind: str  # "instances" | "values" | "bool" | "count" | "parts"
    instances: frozenset[str] = frozenset()
    values: frozenset[str] = frozenset()
    boolean: Optional[bool] = None
    count: Optional[int] = None
    parts: tuple["TupleAnswer", ...] = ()

    @classmethod
    def of_instances(cls, names) -> "TupleAnswer":
        return cls("instances", instances=frozenset(names))

    @classmethod
    def of_values(cls, values) -> "TupleAnswer":
        return cls("values", values=frozenset(values))

    @classmethod
    def of_bool(cls, value: bool) -> "TupleAnswer":
        return cls("bool", boolean=value)

    @classmethod
    def of_count(cls, value: int) -> "TupleAnswer":
        return cls("count", count=value)

    def item_set(self) -> frozenset[str]:
        return self.instances if self.kind == "instances" else self.values

    def magnitude(self) -> Optional[float]:
        """Numeric view for comparisons: a count, or a single datatype value."""
        if self.kind == "count":
            return float(self.count or 0)
        if self.kind in ("instances", "values"):
            items = self.item_set()
            if len(items) == 1:
                return _numeric(next(iter(items)))
            return float(len(items))
        return None


@dataclass(frozen=True)
class Answer:
    kind: str  # "list" | "count" | "bool" | "values"
    items: tuple[str, ...]
    text: str
    provenance: tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "items": list(self.items),
            "text": self.text,
            "provenance": [dict(p) for p in self.provenance],
        }


# ---------------------------------------------------------------------------
# Comparison payloads
# ---------------------------------------------------------------------------

_EN_NUMBER_WORDS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
}

_OPS = {
    "en": (
        (("more than", "greater than", "higher than", "over"), ">"),
        (("less than", "fewer than", "under"), "<"),
        (("at least",), ">="),
        (("at most",), "<="),
    ),
    "vi": (
        (("lớn hơn hoặc bằng",), ">="),
        (("nhỏ hơn hoặc bằng",), "<="),
        (("lớn hơn", "cao hơn", "nhiều hơn"), ">"),
        (("nhỏ hơn", "thấp hơn", "ít hơn"), "<"),
        (("bằng",), "=="),
    ),
}

_SUPERLATIVE = {
    "en": ("highest", "most", "largest", "biggest", "lowest", "least", "smallest"),
    "vi": ("nhất",),
}


def _numeric(text: str) -> Optional[float]:
    token = text.strip()
    try:
        return float(token.replace(",", "."))
    except ValueError:
        pass
    return float(_EN_NUMBER_WORDS[token.casefold()]) if token.casefold() in _EN_NUMBER_WORDS else None


@dataclass(frozen=True)
class Comparison:
    op: str  # ">" | "<" | ">=" | "<=" | "==" | "superlative"
    value: Optional[float] = None

    def test(self, magnitude: float, against: Optional[float] = None) -> bool:
        threshold = self.value if against is None else against
        if threshold is None:
            raise AnswerError("comparison lacks a numeric threshold")
        return {
            ">": magnitude > threshold,
            "<": magnitude < threshold,
            ">=": magnitude >= threshold,
            "<=": magnitude <= threshold,
            "==": magnitude == threshold,
        }[self.op]


def parse_comparison(text: str, lang_code: str) -> Comparison:
    folded = " ".join(text.split()).casefold()
    for marker in _SUPERLATIVE.get(lang_code, ()):
        if marker in folded:
            return Comparison("superlative")
    op = "=="
    rest = folded
    for phrases, symbol in _OPS.get(lang_code, ()):
        for phrase in phrases:
            if folded.startswith(phrase):
                op = symbol
                rest = folded[len(phrase):].strip()
                break
        else:
            continue
        break
    value = None
    for word in rest.split():
        value = _numeric(word)
        if value is not None:
            break
    return Comparison(op, value)


# ---------------------------------------------------------------------------
# Single-tuple answering
# ---------------------------------------------------------------------------


def _linked_members(ontology: Ontology, concept: Optional[str], entity: str,
                    relation: Optional[str]) -> set[str]:
    """Instances (optionally restricted to a concept) linked to the entity.

    Both assertion directions count: the answer may be the subject or the
    object of the stored fact.
    """
    members = None
    if concept is not None:
        members = ontology.instances_of(concept, transitive=True)
    found = set()
    for assertion in ontology.assertions:
        if relation is not None and assertion.relation != relation:
            continue
        if assertion.obj == entity and (members is None or assertion.subject in members):
            found.add(assertion.subject)
        if assertion.subject == entity and (members is None or assertion.obj in members):
            found.add(assertion.obj)
    return found


def _datatype_values(ontology: Ontology, subject: str, relation: str) -> set[str]:
    return {a.obj for a in ontology.assertions
            if a.subject == subject and a.relation == relation}


def answer_tuple(
    ot: OntologyTuple,
    sub_structure: str,
    ontology: Ontology,
    overall: Optional[str] = None,
    category: Optional[str] = None,
    lang_code: str = "vi",
) -> TupleAnswer:
    """Evaluate one mapped tuple under its sub-structure semantics."""
    overall = overall or sub_structure

    if sub_structure == "Definition":
        if ot.entity is None:
            raise AnswerError("Definition requires a mapped entity")
        return TupleAnswer.of_values(ontology.concepts_of(ot.entity))

    if sub_structure == "Compare" or (
        ot.term3 is not None and overall in ("Compare", "Clause")
        and sub_structure in ("Normal", "UnknRel", "UnknTerm")
    ):
        return _answer_compare(ot, ontology, category, lang_code)

    if sub_structure == "ThreeTerm":
        return _answer_three_term(ot, ontology, category, lang_code)

    if sub_structure == "UnknTerm":
        if ot.entity is None or ot.relation is None:
            raise AnswerError("UnknTerm requires a relation and an entity")
        subjects = ontology.subjects_with(ot.relation, ot.entity)
        if not subjects:
            subjects = ontology.objects_of(ot.entity, ot.relation)
        return TupleAnswer.of_instances(subjects)

    if sub_structure == "UnknRel":
        if ot.entity is None:
            raise AnswerError("UnknRel requires a mapped entity")
        if overall in ("Affirm", "Affirm_MoreTuples") and ot.concept is not None:
            linked = _linked_members(ontology, ot.concept, ot.entity, None)
            is_member = ot.entity in ontology.instances_of(ot.concept, transitive=True)
            return TupleAnswer.of_bool(bool(linked) or is_member)
        return TupleAnswer.of_instances(
            _linked_members(ontology, ot.concept, ot.entity, None)
        )

    # Normal
    if ot.entity is None or ot.relation is None:
        raise AnswerError("Normal requires a relation and an entity")
    found = _linked_members(ontology, ot.concept, ot.entity, ot.relation)
    if not found and ontology.relations[ot.relation].kind == "datatype":
        found = _datatype_values(ontology, ot.entity, ot.relation)
        return TupleAnswer.of_values(found)
    return TupleAnswer.of_instances(found)


def _answer_compare(ot: OntologyTuple, ontology: Ontology,
                    category: Optional[str], lang_code: str) -> TupleAnswer:
    comparison = parse_comparison(ot.term3 or "", lang_code)
    if comparison.op == "superlative":
        raise UnsupportedComparisonError(
            f"superlative comparison {ot.term3!r} requires a ranking mechanism"
        )
    if ot.concept is not None and ot.relation is not None \
            and ontology.relations[ot.relation].kind == "datatype":
        members = ontology.instances_of(ot.concept, transitive=True)
        kept = set()
        for member in sorted(members):
            for value in _datatype_values(ontology, member, ot.relation):
                magnitude = _numeric(value)
                if magnitude is not None and comparison.test(magnitude):
                    kept.add(member)
        return TupleAnswer.of_instances(kept)
    raise AnswerError("comparison tuple needs resolution against a sub-answer")


def _answer_three_term(ot: OntologyTuple, ontology: Ontology,
                       category: Optional[str], lang_code: str) -> TupleAnswer:
    if ot.term3 is None:
        raise AnswerError("ThreeTerm requires term3")
    base = answer_tuple(
        OntologyTuple(ot.concept, ot.relation, ot.entity),
        "Normal" if ot.relation is not None else "UnknRel",
        ontology,
    )
    expected = _numeric(ot.term3)
    if category in ("Many", "ManyClass", "QU-howmany") and expected is not None:
        return TupleAnswer.of_bool(float(len(base.item_set())) == expected)
    if ot.relation is not None and ontology.relations[ot.relation].kind == "datatype":
        values = set()
        for member in base.item_set():
            values |= _datatype_values(ontology, member, ot.relation)
        folded = " ".join((ot.term3 or "").split()).casefold()
        return TupleAnswer.of_bool(any(
            " ".join(v.split()).casefold() == folded
            or (_numeric(v) is not None and _numeric(v) == expected)
            for v in values
        ))
    if expected is not None:
        return TupleAnswer.of_bool(float(len(base.item_set())) == expected)
    return base


# ---------------------------------------------------------------------------
# Composition and rendering
# ---------------------------------------------------------------------------

_COUNT_CATEGORIES = frozenset({"Many", "ManyClass", "QU-howmany"})
_YESNO_CATEGORIES = frozenset({"YesNo", "QU-yesno"})


def compose(structure: str, parts: list[TupleAnswer],
            ir: IntermediateRepresentation) -> TupleAnswer:
    """Combine sub-question answers per the overall structure."""
    if structure in ("And", "Or", "Combine", "Affirm_MoreTuples") and len(parts) < 2:
        raise AnswerError(f"{structure} requires at least two sub-answers")
    if structure == "And":
        result = parts[0].item_set()
        for part in parts[1:]:
            result &= part.item_set()
        return TupleAnswer.of_instances(result)
    if structure == "Or":
        result = parts[0].item_set()
        for part in parts[1:]:
            result |= part.item_set()
        return TupleAnswer.of_instances(result)
    if structure == "Combine":
        return TupleAnswer("parts", parts=tuple(parts))
    if structure == "Affirm_MoreTuples":
        overlap = parts[0].item_set()
        for part in parts[1:]:
            overlap &= part.item_set()
        return TupleAnswer.of_bool(bool(overlap))
    if structure in ("Affirm", "Affirm_3Term"):
        part = parts[0]
        if part.kind == "bool":
            return part
        return TupleAnswer.of_bool(bool(part.item_set()))
    if len(parts) != 1:
        raise AnswerError(f"{structure} takes exactly one sub-answer")
    return parts[0]


def render(category: str, result: TupleAnswer,
           provenance: tuple[dict, ...] = ()) -> Answer:
    """Final answer text per question category; sets list lexicographically."""
    if result.kind == "parts":
        rendered = [render(category, part) for part in result.parts]
        text = "\n---\n".join(r.text for r in rendered)
        items = tuple(item for r in rendered for item in r.items)
        return Answer("values", items, text, provenance)
    if category in _YESNO_CATEGORIES or result.kind == "bool":
        truth = result.boolean if result.kind == "bool" else bool(result.item_set())
        return Answer("bool", (), "yes" if truth else "no", provenance)
    if category in _COUNT_CATEGORIES:
        count = result.count if result.kind == "count" else len(result.item_set())
        return Answer("count", (str(count),), str(count), provenance)
    items = tuple(sorted(result.item_set()))
    kind = "values" if result.kind == "values" else "list"
    return Answer(kind, items, "\n".join(items), provenance)


# ---------------------------------------------------------------------------
# Whole-question orchestration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PendingAnswer:
    """A disambiguation stop, keyed so a session can replay it."""

    key: str
    slot: str
    candidates: tuple[str, ...]
    context: str

    def to_dict(self) -> dict:
        return {
            "choice_id": self.key,
            "slot": self.slot,
            "candidates": list(self.candidates),
            "context": self.context,
        }


def answer_ir(
    ir: IntermediateRepresentation,
    ontology: Ontology,
    threshold: float,
    prof: LanguageProfile,
    choices: Optional[dict[str, str]] = None,
    context: str = "",
) -> Answer | PendingAnswer:
    """Map every tuple, evaluate, compose, and render.

    ``choices`` records disambiguation selections keyed by "t<i>.<slot>";
    replaying the same choices yields the identical answer.
    """
    choices = dict(choices or {})
    structure = ir.structure

    def run_tuple(
        index: int, query: QueryTuple
    ) -> tuple[TupleAnswer, OntologyTuple] | PendingAnswer:
        mapping = map_query_tuple(query, ontology, threshold, prof, context=context)
        for key, value in choices.items():
            prefix = f"t{index}."
            if key.startswith(prefix):
                mapping.choices[key[len(prefix):]] = value
        outcome = mapping.step()
        if isinstance(outcome, PendingChoice):
            return PendingAnswer(
                key=f"t{index}.{outcome.slot}", slot=outcome.slot,
                candidates=outcome.candidates, context=outcome.context,
            )
        return answer_tuple(outcome, query.sub_structure, ontology,
                            overall=structure, category=query.category,
                            lang_code=prof.code), outcome

    provenance: list[dict] = []

    if structure == "Clause":
        first, second = ir.tuples[0], ir.tuples[1]
        outcome = run_tuple(1, second)
        if isinstance(outcome, PendingAnswer):
            return outcome
        second_answer, second_ot = outcome
        provenance.append(second_ot.to_dict())

        if first.sub_structure == "Compare" or (
            first.term3 is not None and first.term2 is None
        ):
            comparison = parse_comparison(first.term3 or "", prof.code)
            if comparison.op == "superlative":
                raise UnsupportedComparisonError(
                    f"superlative comparison {first.term3!r} requires a ranking mechanism"
                )
            magnitude = second_answer.magnitude()
            if magnitude is None:
                raise AnswerError("Clause comparison needs a numeric sub-answer")
            threshold_value = comparison.value
            if threshold_value is None and first.term1 is not None:
                threshold_value = _numeric(first.term1)
            result = TupleAnswer.of_bool(
                comparison.test(magnitude, against=threshold_value)
            )
            return render(first.category, result, tuple(provenance))

        # substitute each element of the second answer as the missing term2
        union: set[str] = set()
        for element in sorted(second_answer.item_set()):
            substituted = QueryTuple(
                sub_structure=first.sub_structure, category=first.category,
                term1=first.term1, relation=first.relation,
                term2=element, term3=first.term3,
            )
            outcome = run_tuple(0, substituted)
            if isinstance(outcome, PendingAnswer):
                return outcome
            part, first_ot = outcome
            provenance.append(first_ot.to_dict())
            union |= part.item_set()
        return render(first.category, TupleAnswer.of_instances(union),
                      tuple(provenance))

    parts: list[TupleAnswer] = []
    for index, query in enumerate(ir.tuples):
        outcome = run_tuple(index, query)
        if isinstance(outcome, PendingAnswer):
            return outcome
        part, ot = outcome
        provenance.append(ot.to_dict())
        parts.append(part)

    composed = compose(structure, parts, ir)
    return render(ir.tuples[0].category, composed, tuple(provenance))
