import pytest

from rdrqa.annotations import Span, create_document
from rdrqa.ir import (
    ConclusionTemplate,
    InstantiationError,
    IntermediateRepresentation,
    QueryTuple,
    Slot,
    TupleTemplate,
    instantiate,
    ir_matches,
    validate_ir,
)
from rdrqa.lang import EN, VI, comparable_relation, normalize_relation, normalize_term


class TestSlots:
    def test_parse_forms(self):
        assert Slot.parse("?").kind == "missing"
        text = Slot.parse("RDR1_NP")
        assert text.kind == "text" and text.type_name == "RDR1_NP"
        attr = Slot.parse("RDR1_.category1")
        assert attr.kind == "attr" and attr.type_name == "RDR1_"
        assert attr.feature == "category1"
        co = Slot.parse("RDR1_QP.QuestionPhrase.category")
        assert co.kind == "colocated" and co.co_type == "QuestionPhrase"

    def test_round_trip(self):
        for source in ("?", "RDR1_NP", "RDR1_.category1",
                       "RDR1_QP.QuestionPhrase.category"):
            assert Slot.parse(source).to_text() == source

    def test_template_needs_six_slots(self):
        with pytest.raises(ValueError):
            TupleTemplate.parse(["?", "?", "?"])


class TestValidateIr:
    def test_normal_single_tuple_ok(self):
        ir = IntermediateRepresentation(
            "Normal", (QueryTuple("Normal", "List", "sinh viên", "học", "Hà Nội"),)
        )
        assert validate_ir(ir) == []

    def test_and_single_tuple_violation(self):
        ir = IntermediateRepresentation(
            "And", (QueryTuple("Normal", "List", "a", "b", "c"),)
        )
        assert validate_ir(ir)

    def test_r80_shape_ok(self):
        ir = IntermediateRepresentation("And", (
            QueryTuple("Normal", "QU-listClass", "drugs", "lead to", "strokes"),
            QueryTuple("Normal", "QU-listClass", "drugs", "lead to", "arthrosis"),
        ))
        assert validate_ir(ir) == []

    def test_compare_context_allows_term3_on_normal(self):
        ir = IntermediateRepresentation("Compare", (
            QueryTuple("Normal", "Entity", "sinh viên", "điểm trung bình",
                       "khoa công nghệ thông tin", "cao nhất"),
        ))
        assert validate_ir(ir) == []

    def test_normal_term3_violation_outside_compare(self):
        ir = IntermediateRepresentation("Normal", (
            QueryTuple("Normal", "List", "a", "b", "c", "d"),
        ))
        assert validate_ir(ir)

    def test_unknterm_with_term1_violation(self):
        ir = IntermediateRepresentation("UnknTerm", (
            QueryTuple("UnknTerm", "Who", "oops", "tutor", "x"),
        ))
        assert validate_ir(ir)

    def test_definition_only_term2(self):
        good = IntermediateRepresentation("Definition", (
            QueryTuple("Definition", "QU-who-what", None, None, "research areas"),
        ))
        assert validate_ir(good) == []
        bad = IntermediateRepresentation("Definition", (
            QueryTuple("Definition", "QU-who-what", "x", None, "research areas"),
        ))
        assert validate_ir(bad)

    def test_unknown_structure(self):
        ir = IntermediateRepresentation("Banana", ())
        assert validate_ir(ir)


def build_akt_doc():
    text = "Who are the partners involved in AKT project ?"
    doc = create_document(text)
    doc.add("QuestionPhrase", Span(0, 3), {"category": "QU-who-what"})
    doc.add("RDR1_QP", Span(0, 3))
    doc.add("RDR1_NP", Span(8, 20))       # "the partners"
    doc.add("RDR3_Rel", Span(21, 32))     # "involved in"
    doc.add("RDR5_NP", Span(33, 44))      # "AKT project"
    doc.add("RDR5_", Span(0, 44), {"category1": "Normal"})
    return doc


R5_TEMPLATE = ConclusionTemplate("Normal", (
    TupleTemplate.parse([
        "RDR5_.category1", "RDR1_QP.QuestionPhrase.category",
        "RDR1_NP", "RDR3_Rel", "RDR5_NP", "?",
    ]),
))


class TestInstantiate:
    def test_r5_conclusion(self):
        ir = instantiate(R5_TEMPLATE, build_akt_doc(), EN)
        assert ir.structure == "Normal"
        t = ir.tuples[0]
        assert (t.sub_structure, t.category) == ("Normal", "QU-who-what")
        assert t.term1 == "partners"       # leading determiner trimmed
        assert t.relation == "involved in"  # trailing preposition kept
        assert t.term2 == "AKT project"
        assert t.term3 is None

    def test_missing_annotation_names_slot(self):
        doc = create_document("x")
        with pytest.raises(InstantiationError) as err:
            instantiate(R5_TEMPLATE, doc, EN)
        assert "RDR5_" in str(err.value)

    def test_missing_feature_is_error(self):
        doc = build_akt_doc()
        template = ConclusionTemplate("Normal", (
            TupleTemplate.parse([
                "RDR5_.absent", "RDR1_QP.QuestionPhrase.category",
                "RDR1_NP", "RDR3_Rel", "RDR5_NP", "?",
            ]),
        ))
        with pytest.raises(InstantiationError):
            instantiate(template, doc, EN)

    def test_missing_colocated_is_error(self):
        doc = build_akt_doc()
        template = ConclusionTemplate("Normal", (
            TupleTemplate.parse([
                "RDR5_.category1", "RDR1_NP.QuestionPhrase.category",
                "RDR1_NP", "RDR3_Rel", "RDR5_NP", "?",
            ]),
        ))
        with pytest.raises(InstantiationError):
            instantiate(template, doc, EN)

    def test_validates_against_fixture(self):
        ir = instantiate(R5_TEMPLATE, build_akt_doc(), EN)
        assert validate_ir(ir) == []


class TestNormalization:
    def test_term_strips_question_trigger(self):
        assert normalize_term("Which universities", EN) == "universities"
        assert normalize_term("the United States", EN) == "United States"
        assert normalize_term("List drugs", EN) == "drugs"

    def test_term_strips_vi_quantifiers_and_trailing_trigger(self):
        assert normalize_term("Liệt kê tất cả sinh viên", VI) == "sinh viên"
        assert normalize_term("trường đại học nào", VI) == "trường đại học"
        assert normalize_term("số lượng sinh viên", VI) == "sinh viên"

    def test_term_untouched_values(self):
        assert normalize_term("more than three", EN) == "more than three"
        assert normalize_term("cao nhất", VI) == "cao nhất"
        assert normalize_term("45", VI) == "45"

    def test_relation_strips_copula(self):
        assert normalize_relation("are related to", EN) == "related to"
        assert normalize_relation("are", EN) is None
        assert normalize_relation("được hướng dẫn bởi", VI) == "hướng dẫn bởi"
        assert normalize_relation("có quê ở", VI) == "có quê ở"

    def test_comparable_relation_ignores_trailing_preposition(self):
        assert comparable_relation("involved in", EN) == "involved"
        assert comparable_relation("có quê ở", VI) == "có quê"
        assert comparable_relation(None, EN) == ""


class TestIrMatches:
    def expected(self, rel):
        return IntermediateRepresentation("Normal", (
            QueryTuple("Normal", "QU-who-what", "partners", rel, "AKT project"),
        ))

    def test_trailing_preposition_allowance(self):
        actual = self.expected("involved in")
        ok, diffs = ir_matches(self.expected("involved"), actual, EN)
        assert ok, diffs

    def test_term_mismatch_reported(self):
        actual = IntermediateRepresentation("Normal", (
            QueryTuple("Normal", "QU-who-what", "others", "involved", "AKT project"),
        ))
        ok, diffs = ir_matches(self.expected("involved"), actual, EN)
        assert not ok
        assert any("term1" in d for d in diffs)

    def test_none_analysis_fails(self):
        ok, diffs = ir_matches(self.expected("involved"), None, EN)
        assert not ok
