"""Rule-language parser and annotation-sequence matcher.

A rule condition is a regular-expression-like pattern over annotations:

    (({QuestionPhrase}):qp ({Relation}):rel ({NounPhrase}):np):left
        --> :left.RDR1_ = {category1 = "UnknTerm"}, :qp.RDR1_QP = {}, ...

Grammar (bit-exact for the knowledge-base file format):

    rule      := condition "-->" posting ("," posting)*
    condition := group
    group     := "(" body ")" [":" IDENT] [QUANT]
    body      := alt
    alt       := seq ("|" seq)*
    seq       := item+
    item      := test [QUANT] | group
    test      := "{" typeExpr ("|" typeExpr)* "}"
    typeExpr  := IDENT ["." IDENT "==" STRING]
    posting   := ":" IDENT "." IDENT "=" "{" [IDENT "=" STRING ("," IDENT "=" STRING)*] "}"
    QUANT     := "?" | "+" | "*"

Extra constraints are stored separately as
``IDENT ".hasAnno" "==" IDENT ["." IDENT "==" VALUE]``.

Matching walks a cursor of character offsets. An annotation test succeeds on
any annotation of the tested type starting exactly at the cursor and
satisfying all feature tests, and advances the cursor past the annotation
(skipping whitespace). Start offsets are tried left to right and the first
complete match wins; at one cursor, longer annotations are preferred, then
lower ids; quantifiers are greedy; dead ends backtrack fully. A rule can
therefore fire on any contiguous stretch of the question, which is how
exception rules refer to annotations posted by partially matching ancestors.

The ``string`` pseudo-feature compares covered text case-insensitively after
whitespace normalization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .annotations import Document, Span


class RuleSyntaxError(Exception):
    """Source does not conform to the rule grammar."""

    def __init__(self, message: str, line: int, column: int, expected: Optional[list[str]] = None):
        self.line = line
        self.column = column
        self.expected = expected or []
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {column}{detail}")


class RuleSemanticError(Exception):
    """Grammatical but ill-formed rule (duplicate label, unknown label...)."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeTest:
    type_name: str
    feature: Optional[str] = None
    value: Optional[str] = None


@dataclass(frozen=True)
class AnnotationTest:
    alternatives: tuple[TypeTest, ...]


@dataclass(frozen=True)
class Sequence:
    items: tuple["Node", ...]


@dataclass(frozen=True)
class Alternation:
    branches: tuple["Node", ...]


@dataclass(frozen=True)
class Group:
    body: "Node"
    label: Optional[str] = None


@dataclass(frozen=True)
class Quantified:
    body: "Node"
    quantifier: str  # "?", "+", "*"


Node = AnnotationTest | Sequence | Alternation | Group | Quantified


@dataclass(frozen=True)
class ConditionPattern:
    root: Group

    @property
    def outer_label(self) -> str:
        assert self.root.label is not None
        return self.root.label

    def labels(self) -> set[str]:
        found: set[str] = set()

        def walk(node: Node) -> None:
            if isinstance(node, Group):
                if node.label:
                    found.add(node.label)
                walk(node.body)
            elif isinstance(node, Sequence):
                for item in node.items:
                    walk(item)
            elif isinstance(node, Alternation):
                for branch in node.branches:
                    walk(branch)
            elif isinstance(node, Quantified):
                walk(node.body)

        walk(self.root)
        return found


@dataclass(frozen=True)
class Posting:
    label: str
    type_name: str
    features: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class PostingSpec:
    postings: tuple[Posting, ...]

    def posted_types(self) -> set[str]:
        return {p.type_name for p in self.postings}


@dataclass(frozen=True)
class ExtraConstraint:
    subject_type: str
    contained_type: str
    feature: Optional[str] = None
    value: Optional[str] = None

    def to_text(self) -> str:
        text = f"{self.subject_type}.hasAnno == {self.contained_type}"
        if self.feature is not None:
            text += f".{self.feature} == {self.value}"
        return text


@dataclass
class MatchResult:
    bindings: dict[str, Span]
    outer: Span
    posted: list[int] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Lexer / parser
# ---------------------------------------------------------------------------

_PUNCT = {"-->": "ARROW", "==": "EQEQ", "(": "LPAREN", ")": "RPAREN", "{": "LBRACE",
          "}": "RBRACE", ":": "COLON", ".": "DOT", ",": "COMMA", "|": "PIPE",
          "=": "EQ", "?": "QUANT", "+": "QUANT", "*": "QUANT"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if source.startswith("-->", i):
            tokens.append(_Token("ARROW", "-->", line, col))
            i += 3
            col += 3
            continue
        if source.startswith("==", i):
            tokens.append(_Token("EQEQ", "==", line, col))
            i += 2
            col += 2
            continue
        if ch == '"':
            j = i + 1
            chars: list[str] = []
            while j < len(source) and source[j] != '"':
                if source[j] == "\\" and j + 1 < len(source):
                    chars.append(source[j + 1])
                    j += 2
                else:
                    chars.append(source[j])
                    j += 1
            if j >= len(source):
                raise RuleSyntaxError("unterminated string", line, col, ['"'])
            tokens.append(_Token("STRING", "".join(chars), line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if _is_ident_char(ch):
            j = i
            while j < len(source) and _is_ident_char(source[j]):
                j += 1
            tokens.append(_Token("IDENT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        raise RuleSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise RuleSyntaxError(
                f"unexpected {tok.kind} {tok.text!r}", tok.line, tok.column, [kind]
            )
        return self.next()

    # group := "(" body ")" [":" IDENT] [QUANT]
    def parse_group(self) -> Node:
        self.expect("LPAREN")
        body = self.parse_alt()
        self.expect("RPAREN")
        label = None
        if self.peek().kind == "COLON":
            self.next()
            label = self.expect("IDENT").text
        node: Node = Group(body, label)
        if self.peek().kind == "QUANT":
            node = Quantified(node, self.next().text)
        return node

    def parse_alt(self) -> Node:
        branches = [self.parse_seq()]
        while self.peek().kind == "PIPE":
            self.next()
            branches.append(self.parse_seq())
        if len(branches) == 1:
            return branches[0]
        return Alternation(tuple(branches))

    def parse_seq(self) -> Node:
        items: list[Node] = []
        while self.peek().kind in ("LBRACE", "LPAREN"):
            items.append(self.parse_item())
        if not items:
            tok = self.peek()
            raise RuleSyntaxError(
                f"unexpected {tok.kind} {tok.text!r}", tok.line, tok.column, ["{", "("]
            )
        if len(items) == 1:
            return items[0]
        return Sequence(tuple(items))

    def parse_item(self) -> Node:
        if self.peek().kind == "LPAREN":
            return self.parse_group()
        node: Node = self.parse_test()
        if self.peek().kind == "QUANT":
            node = Quantified(node, self.next().text)
        return node

    # test := "{" typeExpr ("|" typeExpr)* "}"
    def parse_test(self) -> AnnotationTest:
        self.expect("LBRACE")
        alts = [self.parse_type_expr()]
        while self.peek().kind == "PIPE":
            self.next()
            alts.append(self.parse_type_expr())
        self.expect("RBRACE")
        return AnnotationTest(tuple(alts))

    def parse_type_expr(self) -> TypeTest:
        type_name = self.expect("IDENT").text
        if self.peek().kind == "DOT":
            self.next()
            feature = self.expect("IDENT").text
            self.expect("EQEQ")
            value = self.expect("STRING").text
            return TypeTest(type_name, feature, value)
        return TypeTest(type_name)

    # posting := ":" IDENT "." IDENT "=" "{" [IDENT "=" STRING ...] "}"
    def parse_posting(self) -> Posting:
        self.expect("COLON")
        label = self.expect("IDENT").text
        self.expect("DOT")
        type_name = self.expect("IDENT").text
        self.expect("EQ")
        self.expect("LBRACE")
        features: list[tuple[str, str]] = []
        if self.peek().kind == "IDENT":
            while True:
                name = self.expect("IDENT").text
                self.expect("EQ")
                value = self.expect("STRING").text
                features.append((name, value))
                if self.peek().kind != "COMMA":
                    break
                self.next()
        self.expect("RBRACE")
        return Posting(label, type_name, tuple(features))


def _validate_labels(node: Node, seen: set[str]) -> None:
    if isinstance(node, Group):
        if node.label:
            if node.label in seen:
                raise RuleSemanticError(f"duplicate label :{node.label}")
            seen.add(node.label)
        _validate_labels(node.body, seen)
    elif isinstance(node, Sequence):
        for item in node.items:
            _validate_labels(item, seen)
    elif isinstance(node, Alternation):
        for branch in node.branches:
            _validate_labels(branch, seen)
    elif isinstance(node, Quantified):
        _validate_labels(node.body, seen)


def parse_condition(source: str) -> ConditionPattern:
    parser = _Parser(source)
    node = parser.parse_group()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise RuleSyntaxError(f"trailing {tok.kind} {tok.text!r}", tok.line, tok.column, ["EOF"])
    return _finish_condition(node)


def _finish_condition(node: Node) -> ConditionPattern:
    if isinstance(node, Quantified):
        raise RuleSemanticError("the outermost group cannot be quantified")
    if not isinstance(node, Group) or node.label is None:
        raise RuleSemanticError("rule condition requires one outermost labeled group")
    pattern = ConditionPattern(node)
    _validate_labels(node, set())
    return pattern


def parse_rule_text(source: str) -> tuple[ConditionPattern, PostingSpec]:
    """Parse ``condition --> posting, posting...`` into its two halves."""
    parser = _Parser(source)
    node = parser.parse_group()
    pattern = _finish_condition(node)
    parser.expect("ARROW")
    postings = [parser.parse_posting()]
    while parser.peek().kind == "COMMA":
        parser.next()
        postings.append(parser.parse_posting())
    tok = parser.peek()
    if tok.kind != "EOF":
        raise RuleSyntaxError(f"trailing {tok.kind} {tok.text!r}", tok.line, tok.column, ["EOF"])
    labels = pattern.labels()
    for posting in postings:
        if posting.label not in labels:
            raise RuleSemanticError(f"posting refers to unknown label :{posting.label}")
    return pattern, PostingSpec(tuple(postings))


_EXTRA_RE = re.compile(
    r"^\s*([A-Za-z_]\w*)\.hasAnno\s*==\s*([A-Za-z_]\w*)"
    r"(?:\.([A-Za-z_]\w*)\s*==\s*(.+?))?\s*$"
)


def parse_extra_constraint(source: str) -> ExtraConstraint:
    match = _EXTRA_RE.match(source)
    if match is None:
        raise RuleSyntaxError(
            "malformed extra constraint", 1, 1, ["TYPE.hasAnno == TYPE[.feature == value]"]
        )
    subject, contained, feature, value = match.groups()
    if value is not None and len(value) >= 2 and value[0] == '"' and value[-1] == '"':
        value = value[1:-1]
    return ExtraConstraint(subject, contained, feature, value)


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------


def fold_text(text: str) -> str:
    """Whitespace-normalized, case-folded form used by ``string`` tests."""
    return " ".join(text.split()).casefold()


@dataclass(frozen=True)
class _State:
    cursor: int
    last_end: int
    bindings: tuple[tuple[str, int, int], ...]


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _test_matches(doc: Document, ann, test: AnnotationTest) -> bool:
    for alt in test.alternatives:
        if ann.type_name != alt.type_name:
            continue
        if alt.feature is None:
            return True
        if alt.feature == "string":
            covered = doc.text[ann.span.start : ann.span.end]
            if fold_text(covered) == fold_text(alt.value or ""):
                return True
        elif ann.feature(alt.feature) == alt.value:
            return True
    return False


class Matcher:
    """Backtracking matcher for one document; candidate order is fixed."""

    def __init__(self, doc: Document):
        self.doc = doc

    def _candidates(self, cursor: int, test: AnnotationTest):
        anns = [a for a in self.doc.at(cursor) if _test_matches(self.doc, a, test)]
        anns.sort(key=lambda a: (-a.span.end, a.id))
        return anns

    def _match_node(self, node: Node, state: _State) -> Iterator[_State]:
        if isinstance(node, AnnotationTest):
            for ann in self._candidates(state.cursor, node):
                yield _State(
                    _skip_ws(self.doc.text, ann.span.end), ann.span.end, state.bindings
                )
        elif isinstance(node, Sequence):
            yield from self._match_seq(node.items, 0, state)
        elif isinstance(node, Alternation):
            for branch in node.branches:
                yield from self._match_node(branch, state)
        elif isinstance(node, Group):
            entry = state.cursor
            for out in self._match_node(node.body, state):
                if node.label:
                    end = out.last_end if out.last_end > entry else entry
                    bound = out.bindings + ((node.label, entry, end),)
                    yield _State(out.cursor, out.last_end, bound)
                else:
                    yield out
        elif isinstance(node, Quantified):
            yield from self._match_quant(node, state)

    def _match_seq(self, items: tuple[Node, ...], index: int, state: _State) -> Iterator[_State]:
        if index == len(items):
            yield state
            return
        for out in self._match_node(items[index], state):
            yield from self._match_seq(items, index + 1, out)

    def _match_quant(self, node: Quantified, state: _State) -> Iterator[_State]:
        if node.quantifier == "?":
            yield from self._match_node(node.body, state)
            yield state
            return

        def repeat(at: _State, depth: int) -> Iterator[_State]:
            for out in self._match_node(node.body, at):
                if out.cursor == at.cursor and out.last_end == at.last_end:
                    continue  # zero-width repetition would never terminate
                yield from repeat(out, depth + 1)
            if depth >= (1 if node.quantifier == "+" else 0):
                yield at

        yield from repeat(state, 0)

    def find(self, pattern: ConditionPattern) -> Optional[MatchResult]:
        starts = sorted({a.span.start for a in self.doc.annotations()})
        for start in starts:
            initial = _State(start, start, ())
            for out in self._match_node(pattern.root, initial):
                bindings = {label: Span(s, e) for label, s, e in out.bindings}
                outer = bindings[pattern.outer_label]
                if outer.length() == 0:
                    continue  # an empty match is no match
                return MatchResult(bindings=bindings, outer=outer)
        return None


def find_match(doc: Document, pattern: ConditionPattern) -> Optional[MatchResult]:
    """First match by (start asc, longest-candidate-first DFS); no postings."""
    return Matcher(doc).find(pattern)


def apply_postings(doc: Document, match: MatchResult, postings: PostingSpec) -> list[int]:
    ids = []
    for posting in postings.postings:
        span = match.bindings.get(posting.label)
        if span is None:
            continue  # label sat in an unmatched alternation branch
        ids.append(doc.add(posting.type_name, span, dict(posting.features)))
    match.posted.extend(ids)
    return ids


def match_and_post(
    doc: Document, pattern: ConditionPattern, postings: PostingSpec
) -> Optional[MatchResult]:
    """Match the pattern and, on success, post its annotations.

    On failure the document is untouched.
    """
    match = find_match(doc, pattern)
    if match is None:
        return None
    apply_postings(doc, match, postings)
    return match


def check_extra(doc: Document, match: MatchResult, constraint: ExtraConstraint) -> bool:
    """True iff a subject annotation inside the match contains the required one.

    Subjects are annotations of the subject type lying within the match's
    outer span (annotations the match itself just posted included).
    """
    feature = None
    if constraint.feature is not None:
        feature = (constraint.feature, constraint.value or "")
    for subject_id in doc.find_within(match.outer, constraint.subject_type):
        subject = doc.get(subject_id)
        if doc.find_within(subject.span, constraint.contained_type, feature):
            return True
    return False
