import random

import pytest

from rdrqa.annotations import Span, create_document
from rdrqa.patterns import (
    Alternation,
    AnnotationTest,
    ConditionPattern,
    Group,
    Quantified,
    RuleSemanticError,
    RuleSyntaxError,
    Sequence,
    check_extra,
    find_match,
    match_and_post,
    parse_condition,
    parse_extra_constraint,
    parse_rule_text,
)

from bruteforce import brute_force_match

LIST_PATTERN = (
    '(({TokenVn.string == "liệt kê"} | {TokenVn.string == "chỉ ra"}) '
    '{NounPhrase.type == "Concept"}):qp '
    '--> :qp.QuestionPhrase = {category = "List"}'
)

R1_TEXT = (
    "(({QuestionPhrase}):qp ({Relation}):rel ({NounPhrase}):np):left "
    '--> :left.RDR1_ = {category1 = "UnknTerm"}, :qp.RDR1_QP = {}, '
    ":rel.RDR1_Rel = {}, :np.RDR1_NP = {}"
)

R3_TEXT = (
    "({RDR1_} ({Relation}):rel):left "
    '--> :left.RDR3_ = {category1 = "Normal"}, :rel.RDR3_Rel = {}'
)


class TestParser:
    def test_list_pattern_shape(self):
        pattern, postings = parse_rule_text(LIST_PATTERN)
        assert pattern.outer_label == "qp"
        body = pattern.root.body
        assert isinstance(body, Sequence)
        first, second = body.items
        assert isinstance(first, Group)
        assert isinstance(first.body, Alternation)
        tests = [b for b in first.body.branches]
        assert all(isinstance(t, AnnotationTest) for t in tests)
        assert tests[0].alternatives[0].feature == "string"
        assert tests[0].alternatives[0].value == "liệt kê"
        assert isinstance(second, AnnotationTest)
        assert second.alternatives[0].type_name == "NounPhrase"
        assert second.alternatives[0].value == "Concept"
        assert postings.postings[0].type_name == "QuestionPhrase"
        assert postings.postings[0].features == (("category", "List"),)

    def test_r3_parse(self):
        pattern, postings = parse_rule_text(R3_TEXT)
        assert pattern.outer_label == "left"
        body = pattern.root.body
        assert isinstance(body, Sequence)
        assert isinstance(body.items[0], AnnotationTest)
        assert body.items[0].alternatives[0].type_name == "RDR1_"
        assert {p.type_name for p in postings.postings} == {"RDR3_", "RDR3_Rel"}

    def test_duplicate_label_rejected(self):
        with pytest.raises(RuleSemanticError):
            parse_rule_text('(({A}):x):x --> :x.B = {}')

    def test_unknown_posting_label_rejected(self):
        with pytest.raises(RuleSemanticError):
            parse_rule_text("(({A}):x):left --> :zz.B = {}")

    def test_unlabeled_outer_group_rejected(self):
        with pytest.raises(RuleSemanticError):
            parse_rule_text("({A}) --> :x.B = {}")

    def test_syntax_error_carries_position_and_expectations(self):
        with pytest.raises(RuleSyntaxError) as err:
            parse_rule_text("(({A}):x):left --> x.B = {}")
        assert err.value.line == 1
        assert err.value.column > 0
        assert err.value.expected

    def test_quantifiers_parse(self):
        pattern = parse_condition("(({A})? ({B})+ {C}*):left")
        seq = pattern.root.body
        assert isinstance(seq, Sequence)
        assert all(isinstance(item, Quantified) for item in seq.items)
        assert [item.quantifier for item in seq.items] == ["?", "+", "*"]

    def test_extra_constraint_forms(self):
        full = parse_extra_constraint(
            "RDR1_QP.hasAnno == QuestionPhrase.category == QU-whichClass"
        )
        assert full.subject_type == "RDR1_QP"
        assert full.contained_type == "QuestionPhrase"
        assert full.feature == "category"
        assert full.value == "QU-whichClass"
        bare = parse_extra_constraint("RDR80_QP.hasAnno == Noun")
        assert bare.feature is None
        vbn = parse_extra_constraint("RDR1_Rel.hasAnno == Token.category == VBN")
        assert vbn.value == "VBN"


def build_researchers_doc():
    text = "Who are the researchers in semantic web research area ?"
    doc = create_document(text)
    doc.add("QuestionPhrase", Span(0, 3), {"category": "QU-who-what"})
    doc.add("Relation", Span(4, 26))  # "are the researchers in"
    doc.add("NounPhrase", Span(27, 53))  # "semantic web research area"
    return doc


class TestMatcher:
    def test_r1_matches_and_posts(self):
        doc = build_researchers_doc()
        pattern, postings = parse_rule_text(R1_TEXT)
        match = match_and_post(doc, pattern, postings)
        assert match is not None
        assert doc.covered_text(doc.annotations("RDR1_")[0].id) == (
            "Who are the researchers in semantic web research area"
        )
        assert doc.covered_text(doc.annotations("RDR1_QP")[0].id) == "Who"
        assert doc.covered_text(doc.annotations("RDR1_Rel")[0].id) == (
            "are the researchers in"
        )
        assert doc.annotations("RDR1_")[0].feature("category1") == "UnknTerm"

    def test_failed_match_posts_nothing(self):
        doc = build_researchers_doc()
        pattern, postings = parse_rule_text(
        "(({Relation}):rel ({Relation}):again):left --> :left.X = {}"
        )
        before = len(doc.annotations())
        assert match_and_post(doc, pattern, postings) is None
        assert len(doc.annotations()) == before

    def test_partial_coverage_still_matches(self):
        # the rule engine relies on subsequence matches: a match may cover
        # only part of the question
        text = "Which universities are Knowledge Media Institute collaborating with ?"
        doc = create_document(text)
        doc.add("QuestionPhrase", Span(0, 18), {"category": "QU-whichClass"})
        doc.add("Relation", Span(19, 22))  # "are"
        doc.add("NounPhrase", Span(23, 48))  # "Knowledge Media Institute"
        doc.add("Relation", Span(49, 67))  # "collaborating with"
        pattern, postings = parse_rule_text(R1_TEXT)
        match = match_and_post(doc, pattern, postings)
        assert match is not None
        assert doc.covered_text(doc.annotations("RDR1_")[0].id) == (
            "Which universities are Knowledge Media Institute"
        )

    def test_string_test_case_insensitive(self):
        doc = create_document("Liệt kê sinh viên")
        doc.add("TokenVn", Span(0, 7))
        pattern = parse_condition('(({TokenVn.string == "liệt kê"})):left')
        assert find_match(doc, pattern) is not None

    def test_greedy_longest_preference(self):
        doc = create_document("aa bb")
        doc.add("A", Span(0, 2))
        long_id = doc.add("A", Span(0, 5))
        pattern = parse_condition("(({A})):left")
        match = find_match(doc, pattern)
        assert match is not None
        assert match.outer == Span(0, 5)
        assert doc.get(long_id).span == match.outer

    def test_determinism(self):
        doc = build_researchers_doc()
        pattern, _ = parse_rule_text(R1_TEXT)
        first = find_match(doc, pattern)
        second = find_match(doc, pattern)
        assert first is not None and second is not None
        assert first.bindings == second.bindings

    def test_empty_alternation_branch_no_infinite_loop(self):
        doc = create_document("x y")
        doc.add("A", Span(0, 1))
        doc.add("A", Span(2, 3))
        pattern = parse_condition("(({A}*)+):left")
        match = find_match(doc, pattern)
        assert match is not None
        assert match.outer == Span(0, 3)


class TestCheckExtra:
    def test_r40_constraint_true(self):
        text = "Which researchers wrote publications related to semantic portals ?"
        doc = create_document(text)
        doc.add("QuestionPhrase", Span(0, 17), {"category": "QU-whichClass"})
        rdr1_qp = Span(0, 17)
        doc.add("RDR1_QP", rdr1_qp)
        doc.add("RDR5_", Span(0, 65))
        pattern = parse_condition("(({RDR5_})):left")
        match = find_match(doc, pattern)
        constraint = parse_extra_constraint(
            "RDR1_QP.hasAnno == QuestionPhrase.category == QU-whichClass"
        )
        assert check_extra(doc, match, constraint) is True

    def test_feature_mismatch_false(self):
        text = "Who are the partners involved in AKT project ?"
        doc = create_document(text)
        doc.add("QuestionPhrase", Span(0, 3), {"category": "QU-who-what"})
        doc.add("RDR1_QP", Span(0, 3))
        doc.add("RDR5_", Span(0, 45))
        pattern = parse_condition("(({RDR5_})):left")
        match = find_match(doc, pattern)
        constraint = parse_extra_constraint(
            "RDR1_QP.hasAnno == QuestionPhrase.category == QU-whichClass"
        )
        assert check_extra(doc, match, constraint) is False

    def test_vbn_constraint(self):
        text = "Which projects sponsored by eprsc are related to semantic web ?"
        doc = create_document(text)
        doc.add("Token", Span(15, 24), {"category": "VBN"})  # sponsored
        doc.add("RDR1_Rel", Span(15, 27))  # "sponsored by"
        doc.add("RDR40_", Span(0, 62))
        pattern = parse_condition("(({RDR40_})):left")
        match = find_match(doc, pattern)
        constraint = parse_extra_constraint("RDR1_Rel.hasAnno == Token.category == VBN")
        assert check_extra(doc, match, constraint) is True


# ---------------------------------------------------------------------------
# Randomized agreement with the brute-force enumerator
# ---------------------------------------------------------------------------

TYPE_ALPHABET = ("A", "B", "C")


def random_document(rng: random.Random):
    token_count = rng.randint(1, 6)
    words = ["w%d" % i for i in range(token_count)]
    text = " ".join(words)
    doc = create_document(text)
    bounds = []
    offset = 0
    for word in words:
        bounds.append((offset, offset + len(word)))
        offset += len(word) + 1
    for _ in range(rng.randint(0, 6)):
        i = rng.randrange(token_count)
        j = rng.randrange(i, token_count)
        features = {}
        if rng.random() < 0.5:
            features["f"] = rng.choice(("x", "y"))
        doc.add(rng.choice(TYPE_ALPHABET), Span(bounds[i][0], bounds[j][1]), features)
    return doc


def random_node(rng: random.Random, budget: list[int]):
    roll = rng.random()
    if budget[0] <= 1 or roll < 0.55:
        budget[0] -= 1
        if rng.random() < 0.3:
            return AnnotationTest((
                type_test(rng),
                type_test(rng),
            ))
        return AnnotationTest((type_test(rng),))
    if roll < 0.7:
        budget[0] -= 1
        return Quantified(random_node(rng, budget), rng.choice(("?", "+", "*")))
    if roll < 0.85:
        budget[0] -= 1
        return Alternation((random_node(rng, budget), random_node(rng, budget)))
    budget[0] -= 1
    return Sequence((random_node(rng, budget), random_node(rng, budget)))


def type_test(rng: random.Random):
    from rdrqa.patterns import TypeTest

    if rng.random() < 0.35:
        return TypeTest(rng.choice(TYPE_ALPHABET), "f", rng.choice(("x", "y")))
    return TypeTest(rng.choice(TYPE_ALPHABET))


def random_pattern(rng: random.Random) -> ConditionPattern:
    budget = [rng.randint(1, 5)]
    return ConditionPattern(Group(random_node(rng, budget), "left"))


@pytest.mark.parametrize("seed", range(4))
def test_matcher_agrees_with_brute_force(seed):
    rng = random.Random(1000 + seed)
    for _ in range(2500):
        doc = random_document(rng)
        pattern = random_pattern(rng)
        expected = brute_force_match(doc, pattern)
        got = find_match(doc, pattern)
        got_span = (got.outer.start, got.outer.end) if got else None
        assert got_span == expected, (
            f"disagreement: doc={doc.to_dict()} pattern={pattern} "
            f"oracle={expected} engine={got_span}"
        )


def test_zero_width_only_match_is_none():
    doc = create_document("x y")
    doc.add("B", Span(0, 1))
    pattern = parse_condition("(({A})?):left")
    assert find_match(doc, pattern) is None
