"""In-memory ontology: concepts, instances, relations, assertions.

The file format is a purpose-built JSON schema — the engine only needs class
membership, a one-level hierarchy, labeled relations, and subject/relation/
object assertions, each entity carrying a synonym list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional


class OntologyError(Exception):
    """Load-time validation failure, naming the offending entity."""


class UnknownEntityError(OntologyError):
    """Lookup of an undeclared concept, instance, or relation."""


@dataclass(frozen=True)
class Concept:
    name: str
    synonyms: tuple[str, ...] = ()
    parent: Optional[str] = None


@dataclass(frozen=True)
class Instance:
    name: str
    synonyms: tuple[str, ...] = ()
    concepts: tuple[str, ...] = ()


@dataclass(frozen=True)
class RelationDef:
    name: str
    synonyms: tuple[str, ...] = ()
    kind: str = "object"  # "object" | "datatype"


@dataclass(frozen=True)
class Assertion:
    subject: str
    relation: str
    obj: str


def _fold(name: str) -> str:
    return " ".join(name.split()).casefold()


@dataclass
class Ontology:
    concepts: dict[str, Concept] = field(default_factory=dict)
    instances: dict[str, Instance] = field(default_factory=dict)
    relations: dict[str, RelationDef] = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)

    def __post_init__(self):
        self._synonym_index: dict[str, dict[str, str]] = {}
        self._rebuild_index()

    def _rebuild_index(self) -> None:
        for kind, table in (
            ("concept", self.concepts),
            ("instance", self.instances),
            ("relation", self.relations),
        ):
            index: dict[str, str] = {}
            for entity in table.values():
                index[_fold(entity.name)] = entity.name
                for synonym in entity.synonyms:
                    index.setdefault(_fold(synonym), entity.name)
            self._synonym_index[kind] = index

    # -- lookups -------------------------------------------------------------

    def resolve(self, kind: str, name: str) -> Optional[str]:
        """Canonical entity name for an exact (case-folded) name or synonym."""
        return self._synonym_index[kind].get(_fold(name))

    def names(self, kind: str) -> list[str]:
        table = {"concept": self.concepts, "instance": self.instances,
                 "relation": self.relations}[kind]
        return sorted(table)

    def search_texts(self, kind: str) -> list[tuple[str, str]]:
        """(candidate text, canonical name) pairs: names plus synonyms."""
        table = {"concept": self.concepts, "instance": self.instances,
                 "relation": self.relations}[kind]
        pairs = []
        for entity in table.values():
            pairs.append((entity.name, entity.name))
            for synonym in entity.synonyms:
                pairs.append((synonym, entity.name))
        return pairs

    def descendants(self, concept: str) -> set[str]:
        if concept not in self.concepts:
            raise UnknownEntityError(f"unknown concept {concept!r}")
        children: dict[str, list[str]] = {}
        for c in self.concepts.values():
            if c.parent is not None:
                children.setdefault(c.parent, []).append(c.name)
        out = {concept}
        queue = [concept]
        while queue:
            for child in children.get(queue.pop(), ()):
                if child not in out:
                    out.add(child)
                    queue.append(child)
        return out

    def instances_of(self, concept: str, transitive: bool = False) -> set[str]:
        wanted = self.descendants(concept) if transitive else {concept}
        if not transitive and concept not in self.concepts:
            raise UnknownEntityError(f"unknown concept {concept!r}")
        return {
            inst.name
            for inst in self.instances.values()
            if any(c in wanted for c in inst.concepts)
        }

    def concepts_of(self, instance: str) -> tuple[str, ...]:
        if instance not in self.instances:
            raise UnknownEntityError(f"unknown instance {instance!r}")
        return self.instances[instance].concepts

    def _compatible(self, operand: str) -> set[str]:
        """Instance names compatible with a concept-or-instance operand."""
        if operand in self.instances:
            return {operand}
        if operand in self.concepts:
            return self.instances_of(operand, transitive=True)
        raise UnknownEntityError(f"unknown concept or instance {operand!r}")

    def relations_between(self, a: str, b: str) -> set[str]:
        """Relation names holding between the two operands in either role."""
        left = self._compatible(a)
        right = self._compatible(b)
        found = set()
        for assertion in self.assertions:
            if assertion.subject in left and assertion.obj in right:
                found.add(assertion.relation)
            if assertion.subject in right and assertion.obj in left:
                found.add(assertion.relation)
        return found

    def query_assertions(self, subject_concept: str, relation: str, obj: str) -> set[str]:
        """Subjects in the concept bearing (subject, relation, obj)."""
        if relation not in self.relations:
            raise UnknownEntityError(f"unknown relation {relation!r}")
        if obj not in self.instances:
            raise UnknownEntityError(f"unknown instance {obj!r}")
        members = self.instances_of(subject_concept, transitive=True)
        return {
            a.subject
            for a in self.assertions
            if a.relation == relation and a.obj == obj and a.subject in members
        }

    def objects_of(self, subject: str, relation: Optional[str] = None) -> set[str]:
        return {
            a.obj for a in self.assertions
            if a.subject == subject and (relation is None or a.relation == relation)
        }

    def subjects_with(self, relation: str, obj: str) -> set[str]:
        return {a.subject for a in self.assertions
                if a.relation == relation and a.obj == obj}

    def summary(self) -> dict:
        return {
            "concepts": len(self.concepts),
            "relations": len(self.relations),
            "instances": len(self.instances),
            "assertions": len(self.assertions),
        }

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "concepts": [
                {"name": c.name, "synonyms": list(c.synonyms), "parent": c.parent}
                for c in self.concepts.values()
            ],
            "relations": [
                {"name": r.name, "synonyms": list(r.synonyms), "kind": r.kind}
                for r in self.relations.values()
            ],
            "instances": [
                {"name": i.name, "synonyms": list(i.synonyms), "concepts": list(i.concepts)}
                for i in self.instances.values()
            ],
            "assertions": [
                {"s": a.subject, "r": a.relation, "o": a.obj} for a in self.assertions
            ],
        }


def build_ontology(
    concepts: Iterable[Concept],
    relations: Iterable[RelationDef],
    instances: Iterable[Instance],
    assertions: Iterable[Assertion],
) -> Ontology:
    ontology = Ontology()
    for concept in concepts:
        if concept.name in ontology.concepts:
            raise OntologyError(f"duplicate concept {concept.name!r}")
        ontology.concepts[concept.name] = concept
    for concept in ontology.concepts.values():
        if concept.parent is not None and concept.parent not in ontology.concepts:
            raise OntologyError(
                f"concept {concept.name!r} references missing parent {concept.parent!r}"
            )
    # hierarchy must be acyclic
    for concept in ontology.concepts.values():
        seen = {concept.name}
        parent = concept.parent
        while parent is not None:
            if parent in seen:
                raise OntologyError(f"concept hierarchy cycle at {parent!r}")
            seen.add(parent)
            parent = ontology.concepts[parent].parent
    for relation in relations:
        if relation.name in ontology.relations:
            raise OntologyError(f"duplicate relation {relation.name!r}")
        if relation.kind not in ("object", "datatype"):
            raise OntologyError(f"relation {relation.name!r} has unknown kind")
        ontology.relations[relation.name] = relation
    for instance in instances:
        if instance.name in ontology.instances:
            raise OntologyError(f"duplicate instance {instance.name!r}")
        if not instance.concepts:
            raise OntologyError(f"instance {instance.name!r} belongs to no concept")
        for concept_name in instance.concepts:
            if concept_name not in ontology.concepts:
                raise OntologyError(
                    f"instance {instance.name!r} references missing concept "
                    f"{concept_name!r}"
                )
        ontology.instances[instance.name] = instance
    for assertion in assertions:
        if assertion.subject not in ontology.instances:
            raise OntologyError(
                f"assertion subject {assertion.subject!r} is not a declared instance"
            )
        if assertion.relation not in ontology.relations:
            raise OntologyError(
                f"assertion relation {assertion.relation!r} is not declared"
            )
        if (ontology.relations[assertion.relation].kind == "object"
                and assertion.obj not in ontology.instances):
            raise OntologyError(
                f"assertion object {assertion.obj!r} is not a declared instance"
            )
        ontology.assertions.append(assertion)
    ontology._rebuild_index()
    return ontology


def ontology_from_dict(data: dict) -> Ontology:
    return build_ontology(
        concepts=(
            Concept(c["name"], tuple(c.get("synonyms", ())), c.get("parent"))
            for c in data.get("concepts", ())
        ),
        relations=(
            RelationDef(r["name"], tuple(r.get("synonyms", ())), r.get("kind", "object"))
            for r in data.get("relations", ())
        ),
        instances=(
            Instance(i["name"], tuple(i.get("synonyms", ())), tuple(i.get("concepts", ())))
            for i in data.get("instances", ())
        ),
        assertions=(
            Assertion(a["s"], a["r"], a["o"]) for a in data.get("assertions", ())
        ),
    )


def load_ontology(path: str | Path) -> Ontology:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise OntologyError(f"not valid JSON: {exc}") from exc
    return ontology_from_dict(data)


def save_ontology(ontology: Ontology, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(ontology.to_dict(), ensure_ascii=False, indent=1), encoding="utf-8"
    )
