"""Mapping query-tuple slots onto ontology elements.

Exact (case-folded) name or synonym matches win outright; otherwise
normalized Levenshtein similarity proposes candidates above a configurable
threshold, also trying the term's suffix noun phrases with leading
quantifiers/determiners dropped. Several surviving candidates become a
pending choice for the user; mapping then resumes deterministically from the
recorded state, so replaying a choice log always rebuilds the same ontology
tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ir import QueryTuple
from .lang import LanguageProfile
from .ontology import Ontology

DEFAULT_THRESHOLD = 0.8


class MappingError(Exception):
    """A required slot could not be mapped onto the ontology."""

    def __init__(self, slot: str, term: str):
        self.slot = slot
        self.term = term
        super().__init__(f"cannot map {slot} {term!r} onto the ontology")


class ChoiceError(Exception):
    """A selection was not among the offered candidates."""


def _fold(text: str) -> str:
    return " ".join(text.split()).casefold()


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, iterative two-row dynamic programming."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous = current
    return previous[-1]


def similarity(a: str, b: str) -> float:
    """1 − distance/max-length over case-folded, whitespace-normalized text."""
    fa, fb = _fold(a), _fold(b)
    if not fa and not fb:
        return 1.0
    longest = max(len(fa), len(fb))
    return 1.0 - edit_distance(fa, fb) / longest


@dataclass(frozen=True)
class Exact:
    element: str


@dataclass(frozen=True)
class Candidates:
    ranked: tuple[tuple[str, float], ...]  # (element, score), best first


@dataclass(frozen=True)
class NoMatch:
    pass


MappingResult = Exact | Candidates | NoMatch


def _suffix_phrases(term: str, prof: LanguageProfile) -> list[str]:
    """The term plus its suffixes with leading quantifiers/determiners gone."""
    variants = [term]
    words = term.split()
    entries = sorted((e.split() for e in prof.term_leading), key=len, reverse=True)
    changed = True
    while changed and words:
        changed = False
        for entry in entries:
            if len(words) >= len(entry) and [w.casefold() for w in words[:len(entry)]] == entry:
                words = words[len(entry):]
                variants.append(" ".join(words))
                changed = True
                break
    return [v for v in variants if v]


def _relation_variants(term: str, prof: LanguageProfile) -> list[str]:
    """The relation text plus its form without trailing prepositions.

    The stored representation keeps trailing prepositions, so mapping must
    tolerate them ("hướng dẫn bởi" still finds "hướng dẫn").
    """
    words = term.split()
    while words and words[-1].casefold() in prof.trailing_preps:
        words.pop()
    stripped = " ".join(words)
    return [term, stripped] if stripped and stripped != term else [term]


def map_term(
    term: str,
    kind: str,
    ontology: Ontology,
    threshold: float = DEFAULT_THRESHOLD,
    prof: Optional[LanguageProfile] = None,
    pool: Optional[list[tuple[str, str]]] = None,
) -> MappingResult:
    """Map one term onto ontology elements of ``kind``.

    ``pool`` restricts matching to given (text, canonical) pairs — used when
    relations are matched only against those holding between the mapped
    terms.
    """
    if not term:
        raise ValueError("cannot map an empty term")
    if prof is None:
        variants = [term]
    elif kind == "relation":
        variants = _relation_variants(term, prof)
    else:
        variants = _suffix_phrases(term, prof)
    texts = pool if pool is not None else ontology.search_texts(kind)

    for variant in variants:
        folded = _fold(variant)
        exact = sorted({canon for text, canon in texts if _fold(text) == folded})
        if exact:
            return Exact(exact[0])

    best: dict[str, float] = {}
    for variant in variants:
        for text, canon in texts:
            score = similarity(variant, text)
            if score >= threshold and score > best.get(canon, -1.0):
                best[canon] = score
    if not best:
        return NoMatch()
    # ties broken by shorter element name, then lexicographically
    ranked = sorted(best.items(), key=lambda kv: (-kv[1], len(kv[0]), kv[0]))
    return Candidates(tuple(ranked))


@dataclass(frozen=True)
class OntologyTuple:
    concept: Optional[str] = None
    relation: Optional[str] = None
    entity: Optional[str] = None
    term3: Optional[str] = None  # comparison payload or literal, unmapped

    def to_dict(self) -> dict:
        return {
            "concept": self.concept,
            "relation": self.relation,
            "entity": self.entity,
            "term3": self.term3,
        }


@dataclass(frozen=True)
class PendingChoice:
    choice_id: str
    slot: str  # "term1" | "term2" | "relation"
    candidates: tuple[str, ...]
    context: str

    def to_dict(self) -> dict:
        return {
            "choice_id": self.choice_id,
            "slot": self.slot,
            "candidates": list(self.candidates),
            "context": self.context,
        }


@dataclass
class TupleMapping:
    """Resumable mapping of one query tuple (the two-terms-one-relation flow).

    Slots are resolved in order term1 (concept first, then instance), term2
    (instance first, then concept), then the relation against the relations
    holding between the mapped pair. Ambiguities surface as pending choices;
    ``resolve`` records the pick and mapping continues where it stopped.
    """

    query: QueryTuple
    ontology: Ontology
    threshold: float
    prof: LanguageProfile
    context: str = ""
    choices: dict[str, str] = field(default_factory=dict)
    resolved: dict[str, Optional[str]] = field(default_factory=dict)
    pending: Optional[PendingChoice] = None
    branch_log: list[str] = field(default_factory=list)
    _counter: int = 0

    def _decide(self, slot: str, result: MappingResult, term: str) -> Optional[str]:
        """Mapping result → chosen element, recorded choice, or pending stop."""
        if isinstance(result, Exact):
            return result.element
        if isinstance(result, NoMatch):
            raise MappingError(slot, term)
        assert isinstance(result, Candidates)
        names = tuple(name for name, _ in result.ranked)
        if len(names) == 1:
            return names[0]
        if slot in self.choices:
            if self.choices[slot] not in names:
                raise ChoiceError(f"recorded choice for {slot} not among candidates")
            return self.choices[slot]
        self._counter += 1
        self.pending = PendingChoice(
            choice_id=f"{slot}-{self._counter}", slot=slot, candidates=names,
            context=self.context or term,
        )
        return None

    def _map_two_kinds(self, slot: str, term: str, first: str, second: str) -> Optional[str]:
        result = map_term(term, first, self.ontology, self.threshold, self.prof)
        if isinstance(result, NoMatch):
            self.branch_log.append(f"{slot}:{second}")
            result = map_term(term, second, self.ontology, self.threshold, self.prof)
        else:
            self.branch_log.append(f"{slot}:{first}")
        return self._decide(slot, result, term)

    def step(self) -> PendingChoice | OntologyTuple:
        """Advance mapping as far as possible; a pending choice pauses it."""
        self.pending = None
        q = self.query

        if "term1" not in self.resolved:
            if q.term1 is None:
                self.resolved["term1"] = None
            else:
                element = self._map_two_kinds("term1", q.term1, "concept", "instance")
                if self.pending:
                    return self.pending
                self.resolved["term1"] = element

        if "term2" not in self.resolved:
            if q.term2 is None:
                self.resolved["term2"] = None
            else:
                element = self._map_two_kinds("term2", q.term2, "instance", "concept")
                if self.pending:
                    return self.pending
                self.resolved["term2"] = element

        if "relation" not in self.resolved:
            self._map_relation()
            if self.pending:
                return self.pending

        return OntologyTuple(
            concept=self.resolved.get("term1"),
            relation=self.resolved.get("relation"),
            entity=self.resolved.get("term2"),
            term3=q.term3,
        )

    def _map_relation(self) -> None:
        q = self.query
        term1 = self.resolved.get("term1")
        term2 = self.resolved.get("term2")
        potential: Optional[set[str]] = None
        if term1 is not None and term2 is not None:
            potential = self.ontology.relations_between(term1, term2)
        elif term2 is not None:
            potential = {
                a.relation for a in self.ontology.assertions
                if a.subject == term2 or a.obj == term2
            } or None

        if q.relation is None:
            # unknown relation: a single potential relation is taken as-is
            if potential is None or not potential:
                self.resolved["relation"] = None
                return
            if len(potential) == 1:
                self.resolved["relation"] = next(iter(potential))
                return
            names = tuple(sorted(potential))
            if "relation" in self.choices:
                if self.choices["relation"] not in names:
                    raise ChoiceError("recorded relation choice not among candidates")
                self.resolved["relation"] = self.choices["relation"]
                return
            self._counter += 1
            self.pending = PendingChoice(
                choice_id=f"relation-{self._counter}", slot="relation",
                candidates=names, context=self.context,
            )
            return

        pool = None
        if potential:
            pool = []
            for name in sorted(potential):
                relation = self.ontology.relations[name]
                pool.append((relation.name, relation.name))
                pool.extend((syn, relation.name) for syn in relation.synonyms)
        result = map_term(q.relation, "relation", self.ontology, self.threshold,
                          self.prof, pool=pool)
        if isinstance(result, NoMatch) and pool is not None:
            # fall back to the full relation inventory before giving up
            result = map_term(q.relation, "relation", self.ontology, self.threshold,
                              self.prof)
        element = self._decide("relation", result, q.relation)
        if self.pending:
            return
        self.resolved["relation"] = element

    def resolve(self, selection: str) -> PendingChoice | OntologyTuple:
        if self.pending is None:
            raise ChoiceError("no pending choice to resolve")
        if selection not in self.pending.candidates:
            raise ChoiceError(
                f"{selection!r} is not among the offered candidates"
            )
        self.choices[self.pending.slot] = selection
        self.pending = None
        return self.step()


def map_query_tuple(
    query: QueryTuple,
    ontology: Ontology,
    threshold: float,
    prof: LanguageProfile,
    context: str = "",
) -> TupleMapping:
    """Start the Fig-5-style mapping flow for one query tuple."""
    return TupleMapping(query=query, ontology=ontology, threshold=threshold,
                        prof=prof, context=context)
