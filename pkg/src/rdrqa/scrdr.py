"""Single-classification ripple-down-rules knowledge base.

The knowledge base is a binary tree. Each node carries a rule: a pattern
condition with postings, optional extra containment constraints, and a
conclusion template. Evaluation passes a case down from the root: a node
whose condition is satisfied sends the case along its except edge, a failing
node along its false edge, and the conclusion comes from the node that fired
last. The root holds the default rule (always true, null conclusion), the
only rule that is not an exception of another.

Exception insertion attaches the correcting rule to the last node of the
evaluation path: on the except edge when that node fired, on the false edge
otherwise. Each non-root node stores its cornerstone, the question that
prompted it, and insertion is rejected when the new rule would change the
conclusion of an ancestor's cornerstone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .annotations import Document
from .ir import ConclusionTemplate, IntermediateRepresentation, instantiate
from .lang import profile
from .patterns import (
    ConditionPattern,
    ExtraConstraint,
    PostingSpec,
    apply_postings,
    check_extra,
    find_match,
    parse_extra_constraint,
    parse_rule_text,
)

KB_FORMAT_VERSION = 1

DocFactory = Callable[[str], Document]


class KnowledgeBaseError(Exception):
    """Structural failure in the knowledge base."""


class KbFileError(KnowledgeBaseError):
    """Malformed knowledge-base file."""


class RuleRejectedError(KnowledgeBaseError):
    """The candidate rule does not fire on its own case at the attachment."""


class ConsistencyError(KnowledgeBaseError):
    """The candidate rule re-concludes an ancestor's cornerstone."""

    def __init__(self, message: str, cornerstone: str):
        super().__init__(message)
        self.cornerstone = cornerstone


@dataclass
class Rule:
    """Rule content independent of tree position."""

    rule_text: Optional[str]  # None only for the default rule
    extra: tuple[str, ...] = ()
    conclusion: Optional[ConclusionTemplate] = None

    def parsed(self) -> tuple[Optional[ConditionPattern], Optional[PostingSpec],
                              tuple[ExtraConstraint, ...]]:
        if self.rule_text is None:
            return None, None, ()
        pattern, postings = parse_rule_text(self.rule_text)
        extras = tuple(parse_extra_constraint(e) for e in self.extra)
        return pattern, postings, extras


@dataclass
class RuleNode:
    node_id: int
    rule: Rule
    except_child: Optional[int] = None
    false_child: Optional[int] = None
    cornerstone: Optional[str] = None
    _pattern: Optional[ConditionPattern] = field(default=None, repr=False)
    _postings: Optional[PostingSpec] = field(default=None, repr=False)
    _extras: tuple[ExtraConstraint, ...] = field(default=(), repr=False)

    def __post_init__(self):
        self._pattern, self._postings, self._extras = self.rule.parsed()

    @property
    def is_default(self) -> bool:
        return self.rule.rule_text is None


@dataclass
class EvaluationResult:
    path: list[int]
    last_fired: int
    fired: list[int]
    conclusion: Optional[IntermediateRepresentation]


class KnowledgeBase:
    def __init__(self, language: str):
        self.language = language
        self.root_id = 0
        self.nodes: dict[int, RuleNode] = {
            0: RuleNode(0, Rule(rule_text=None, conclusion=None))
        }
        self._next_id = 1

    # -- evaluation ----------------------------------------------------------

    def _fires(self, node: RuleNode, doc: Document) -> bool:
        if node.is_default:
            return True
        assert node._pattern is not None and node._postings is not None
        match = find_match(doc, node._pattern)
        if match is None:
            return False
        posted = apply_postings(doc, match, node._postings)
        for constraint in node._extras:
            if not check_extra(doc, match, constraint):
                doc.discard(posted)
                return False
        return True

    def evaluate(self, doc: Document) -> EvaluationResult:
        path: list[int] = []
        fired: list[int] = []
        seen: set[int] = set()
        current = self.nodes[self.root_id]
        last_fired = self.root_id
        while True:
            if current.node_id in seen:
                raise KnowledgeBaseError(f"cycle at node {current.node_id}")
            seen.add(current.node_id)
            path.append(current.node_id)
            if self._fires(current, doc):
                fired.append(current.node_id)
                last_fired = current.node_id
                nxt = current.except_child
            else:
                nxt = current.false_child
            if nxt is None:
                break
            current = self.nodes[nxt]
        conclusion = None
        template = self.nodes[last_fired].rule.conclusion
        if template is not None:
            conclusion = instantiate(template, doc, profile(self.language))
        return EvaluationResult(path, last_fired, fired, conclusion)

    # -- incremental acquisition ----------------------------------------------

    def add_exception(self, rule: Rule, case_text: str, doc_factory: DocFactory,
                      pretagged_text: Optional[str] = None) -> int:
        """Attach ``rule`` as the correction for ``case_text``.

        ``doc_factory`` rebuilds a fresh annotated document from stored
        question text; ``pretagged_text`` is what gets stored as the
        cornerstone when the factory expects pre-tagged input.
        """
        stored = pretagged_text if pretagged_text is not None else case_text
        before = self.evaluate(doc_factory(stored))
        last_node = self.nodes[before.path[-1]]
        attach_fired = last_node.node_id in before.fired
        slot = "except" if attach_fired else "false"
        existing = last_node.except_child if attach_fired else last_node.false_child
        assert existing is None, f"{slot} slot of node {last_node.node_id} already occupied"

        ancestor_expectations = []
        for node_id in before.path:
            stone = self.nodes[node_id].cornerstone
            # changing the conclusion of the very case being corrected is the
            # point of the insertion, so an ancestor holding that same
            # question as its cornerstone is exempt
            if stone is not None and stone != stored:
                outcome = self.evaluate(doc_factory(stone))
                ancestor_expectations.append((node_id, stone, outcome))

        node_id = self._next_id
        self._next_id += 1
        node = RuleNode(node_id, rule, cornerstone=stored)
        self.nodes[node_id] = node
        if attach_fired:
            last_node.except_child = node_id
        else:
            last_node.false_child = node_id

        def detach() -> None:
            if attach_fired:
                last_node.except_child = None
            else:
                last_node.false_child = None
            del self.nodes[node_id]
            self._next_id = node_id

        after = self.evaluate(doc_factory(stored))
        if after.last_fired != node_id:
            detach()
            raise RuleRejectedError(
                f"rule does not fire on its case at node {last_node.node_id} "
                f"({slot} edge); evaluation still ends at node {after.last_fired}"
            )
        # the node whose wrong conclusion is being corrected must keep its own
        # cornerstone out of the new rule's reach
        corrected_id = before.fired[-1] if before.fired else self.root_id
        corrected_stone = self.nodes[corrected_id].cornerstone
        if corrected_stone is not None and corrected_stone != stored:
            redone = self.evaluate(doc_factory(corrected_stone))
            if node_id in redone.fired:
                detach()
                raise ConsistencyError(
                    f"rule fires on the cornerstone of corrected node {corrected_id}",
                    cornerstone=corrected_stone,
                )
        for ancestor_id, stone, outcome in ancestor_expectations:
            redone = self.evaluate(doc_factory(stone))
            old = outcome.conclusion.to_dict() if outcome.conclusion else None
            new = redone.conclusion.to_dict() if redone.conclusion else None
            if old != new:
                detach()
                raise ConsistencyError(
                    f"rule re-concludes the cornerstone of node {ancestor_id}",
                    cornerstone=stone,
                )
        return node_id

    # -- reporting -------------------------------------------------------------

    def layers(self) -> dict[int, int]:
        """node id → exception layer (root = 0; false edges stay in layer)."""
        layers = {self.root_id: 0}
        stack = [self.root_id]
        while stack:
            node = self.nodes[stack.pop()]
            depth = layers[node.node_id]
            if node.except_child is not None:
                layers[node.except_child] = depth + 1
                stack.append(node.except_child)
            if node.false_child is not None:
                layers[node.false_child] = depth
                stack.append(node.false_child)
        return layers

    def layer_histogram(self) -> dict[int, int]:
        """Exception-rule count per layer (the default rule sits at layer 0)."""
        histogram: dict[int, int] = {}
        for node_id, layer in self.layers().items():
            if node_id == self.root_id:
                continue
            histogram[layer] = histogram.get(layer, 0) + 1
        return dict(sorted(histogram.items()))

    def structure_histogram(self) -> dict[str, int]:
        """Rule count per concluded question structure."""
        histogram: dict[str, int] = {}
        for node in self.nodes.values():
            if node.rule.conclusion is None:
                continue
            structure = node.rule.conclusion.structure
            histogram[structure] = histogram.get(structure, 0) + 1
        return dict(sorted(histogram.items()))

    # -- persistence -------------------------------------------------------------

    def to_dict(self) -> dict:
        nodes = []
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            conclusion = node.rule.conclusion
            nodes.append({
                "id": node.node_id,
                "rule_text": node.rule.rule_text,
                "extra": list(node.rule.extra),
                "conclusion": conclusion.to_dict() if conclusion else None,
                "except": node.except_child,
                "false": node.false_child,
                "cornerstone": node.cornerstone,
            })
        return {
            "version": KB_FORMAT_VERSION,
            "language": self.language,
            "root": self.root_id,
            "nodes": nodes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KnowledgeBase":
        kb = cls.__new__(cls)
        kb.language = data["language"]
        kb.root_id = data["root"]
        kb.nodes = {}
        for item in data["nodes"]:
            node_id = item["id"]
            if node_id in kb.nodes:
                raise KbFileError(f"duplicate node id {node_id}")
            conclusion = item.get("conclusion")
            template = ConclusionTemplate.from_dict(conclusion) if conclusion else None
            rule = Rule(item.get("rule_text"), tuple(item.get("extra", ())), template)
            try:
                node = RuleNode(
                    node_id,
                    rule,
                    except_child=item.get("except"),
                    false_child=item.get("false"),
                    cornerstone=item.get("cornerstone"),
                )
            except Exception as exc:
                raise KbFileError(f"node {node_id}: {exc}") from exc
            kb.nodes[node_id] = node
        kb._next_id = max(kb.nodes, default=-1) + 1
        problems = kb.validate()
        if problems:
            raise KbFileError("; ".join(problems))
        return kb

    def validate(self) -> list[str]:
        problems: list[str] = []
        if self.root_id not in self.nodes:
            return [f"root node {self.root_id} missing"]
        root = self.nodes[self.root_id]
        if not root.is_default:
            problems.append("default rule must have the always-true condition")
        if root.rule.conclusion is not None:
            problems.append("default rule must have the null conclusion")
        child_of: dict[int, int] = {}
        for node in self.nodes.values():
            for child in (node.except_child, node.false_child):
                if child is None:
                    continue
                if child not in self.nodes:
                    problems.append(f"node {node.node_id} links to missing node {child}")
                    continue
                if child in child_of:
                    problems.append(f"node {child} has two parents")
                child_of[child] = node.node_id
            if (node.except_child is not None
                    and node.except_child == node.false_child):
                problems.append(f"node {node.node_id} repeats child {node.except_child}")
        roots = [n for n in self.nodes if n not in child_of]
        if roots != [self.root_id]:
            extra = [n for n in roots if n != self.root_id]
            if extra:
                problems.append(f"unreachable or extra root nodes: {extra}")
            if self.root_id in child_of:
                problems.append("the default rule must not be anyone's exception")
        # cycle check via iterative DFS from root
        seen: set[int] = set()
        stack = [self.root_id]
        while stack:
            node_id = stack.pop()
            if node_id in seen:
                problems.append(f"cycle at node {node_id}")
                break
            seen.add(node_id)
            node = self.nodes.get(node_id)
            if node is None:
                continue
            for child in (node.except_child, node.false_child):
                if child is not None:
                    stack.append(child)
        unreachable = set(self.nodes) - seen
        if unreachable:
            problems.append(f"unreachable nodes: {sorted(unreachable)}")
        return problems


def new_kb(language: str) -> KnowledgeBase:
    return KnowledgeBase(language)


def persist_kb(kb: KnowledgeBase, path: str | Path) -> None:
    """Atomic write: serialize beside the target, then rename over it."""
    target = Path(path)
    payload = json.dumps(kb.to_dict(), ensure_ascii=False, indent=1)
    temp = target.with_suffix(target.suffix + ".tmp")
    temp.write_text(payload, encoding="utf-8")
    temp.replace(target)


def load_kb(path: str | Path) -> KnowledgeBase:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise KbFileError(f"not valid JSON: {exc}") from exc
    if data.get("version") != KB_FORMAT_VERSION:
        raise KbFileError(f"unsupported KB format version {data.get('version')!r}")
    return KnowledgeBase.from_dict(data)


def validate_kb(kb: KnowledgeBase) -> list[str]:
    return kb.validate()


def evaluate(kb: KnowledgeBase, doc: Document) -> EvaluationResult:
    return kb.evaluate(doc)
