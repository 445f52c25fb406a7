"""Typed, feature-bearing text annotations over an immutable document.

Every stage of the engine reads and writes these: the tokenizer posts base
tokens, the chunkers post phrases on top of them, and rule matches post
further layers. Offsets are Unicode code-point indices, never bytes, so
spans over Vietnamese text are portable across serializations.

Documents are append-only: stages layer new annotations instead of editing
old ones, which keeps match behaviour reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional


class AnnotationError(Exception):
    """Base class for annotation-store failures."""


class SpanRangeError(AnnotationError):
    """Span does not fit the document text."""


class ValidationError(AnnotationError):
    """Malformed annotation input (e.g. empty type name)."""


class UnknownAnnotationError(AnnotationError):
    """Annotation id does not resolve."""


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character interval [start, end) in code points."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise SpanRangeError(f"invalid span ({self.start}, {self.end})")

    def length(self) -> int:
        return self.end - self.start

    def contains(self, other: "Span") -> bool:
        # A span equal to self qualifies: a whole string counts as its own
        # substring.
        return self.start <= other.start and other.end <= self.end


@dataclass
class Annotation:
    id: int
    type_name: str
    span: Span
    features: dict[str, str] = field(default_factory=dict)

    def feature(self, name: str) -> Optional[str]:
        """Feature value, or None when the feature is absent.

        An absent feature is distinguishable from one stored as "".
        """
        return self.features.get(name)


def _sort_key(ann: Annotation) -> tuple[int, int, int]:
    # Total retrieval order: start asc, end desc, id asc.
    return (ann.span.start, -ann.span.end, ann.id)


class Document:
    """Text plus an append-only, deterministically ordered annotation set."""

    def __init__(self, text: str):
        self.text = text
        self._annotations: dict[int, Annotation] = {}
        self._next_id = 0

    # -- construction ------------------------------------------------------

    def add(self, type_name: str, span: Span, features: Optional[dict[str, str]] = None) -> int:
        if not type_name:
            raise ValidationError("annotation type name must be non-empty")
        if span.end > len(self.text):
            raise SpanRangeError(
                f"span ({span.start}, {span.end}) exceeds text length {len(self.text)}"
            )
        ann_id = self._next_id
        self._next_id += 1
        self._annotations[ann_id] = Annotation(ann_id, type_name, span, dict(features or {}))
        return ann_id

    def discard(self, ids: Iterable[int]) -> None:
        """Remove provisionally posted annotations (rule-match rollback only).

        Ids are never reused, so determinism of later adds is unaffected.
        """
        for ann_id in ids:
            self._annotations.pop(ann_id, None)

    # -- lookup ------------------------------------------------------------

    def get(self, ann_id: int) -> Annotation:
        try:
            return self._annotations[ann_id]
        except KeyError:
            raise UnknownAnnotationError(f"no annotation with id {ann_id}") from None

    def covered_text(self, ann_id: int) -> str:
        ann = self.get(ann_id)
        return self.text[ann.span.start : ann.span.end]

    def annotations(self, type_name: Optional[str] = None) -> list[Annotation]:
        anns = self._annotations.values()
        if type_name is not None:
            anns = (a for a in anns if a.type_name == type_name)
        return sorted(anns, key=_sort_key)

    def at(self, start: int, type_name: Optional[str] = None) -> list[Annotation]:
        """Annotations beginning exactly at ``start``, in retrieval order."""
        return [a for a in self.annotations(type_name) if a.span.start == start]

    def find_within(
        self,
        outer: Span,
        type_name: str,
        feature_constraint: Optional[tuple[str, str]] = None,
    ) -> list[int]:
        """Ids of ``type_name`` annotations whose span lies within ``outer``.

        Co-extensive annotations are included. Order is the document's
        retrieval order, so results are deterministic.
        """
        hits = []
        for ann in self.annotations(type_name):
            if not outer.contains(ann.span):
                continue
            if feature_constraint is not None:
                name, value = feature_constraint
                if ann.feature(name) != value:
                    continue
            hits.append(ann.id)
        return hits

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "annotations": [
                {
                    "id": a.id,
                    "type": a.type_name,
                    "start": a.span.start,
                    "end": a.span.end,
                    "features": dict(a.features),
                }
                for a in self.annotations()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "Document":
        doc = cls(data["text"])
        for item in data["annotations"]:
            span = Span(item["start"], item["end"])
            if span.end > len(doc.text):
                raise SpanRangeError(f"annotation {item['id']} exceeds text")
            doc._annotations[item["id"]] = Annotation(
                item["id"], item["type"], span, dict(item.get("features", {}))
            )
            doc._next_id = max(doc._next_id, item["id"] + 1)
        return doc


def create_document(text: str) -> Document:
    return Document(text)
