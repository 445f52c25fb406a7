import json

import pytest

from rdrqa.annotations import (
    Document,
    Span,
    SpanRangeError,
    UnknownAnnotationError,
    ValidationError,
    create_document,
)


def test_create_empty_document():
    doc = create_document("")
    assert doc.text == ""
    assert doc.annotations() == []


def test_create_document_length():
    doc = create_document("Who are the partners ?")
    assert len(doc.text) == 22
    assert doc.annotations() == []


def test_unicode_text_round_trips():
    doc = create_document("Hà Nội")
    assert doc.text == "Hà Nội"
    ann = doc.add("TokenVn", Span(0, 6))
    assert doc.covered_text(ann) == "Hà Nội"


def test_add_and_lookup_by_type():
    text = "researchers in semantic web research area"
    doc = create_document(text)
    start = text.index("semantic")
    ann_id = doc.add("NounPhrase", Span(start, len(text)))
    hits = doc.annotations("NounPhrase")
    assert [h.id for h in hits] == [ann_id]
    assert doc.covered_text(ann_id) == "semantic web research area"


def test_inverted_span_rejected():
    doc = create_document("some text")
    with pytest.raises(SpanRangeError):
        doc.add("Token", Span(5, 3))


def test_span_beyond_text_rejected():
    doc = create_document("abc")
    with pytest.raises(SpanRangeError):
        doc.add("Token", Span(0, 4))


def test_empty_type_name_rejected():
    doc = create_document("abc")
    with pytest.raises(ValidationError):
        doc.add("", Span(0, 1))


def test_identical_adds_get_distinct_ids():
    doc = create_document("abc")
    first = doc.add("Token", Span(0, 3))
    second = doc.add("Token", Span(0, 3))
    assert first != second


def test_covered_text_zero_width_and_whole():
    doc = create_document("abc")
    zero = doc.add("Mark", Span(1, 1))
    whole = doc.add("All", Span(0, 3))
    assert doc.covered_text(zero) == ""
    assert doc.covered_text(whole) == "abc"


def test_unknown_id_raises():
    doc = create_document("abc")
    with pytest.raises(UnknownAnnotationError):
        doc.covered_text(99)


def test_find_within_feature_constraint():
    text = "Which projects are about ontologies"
    doc = create_document(text)
    qp = doc.add("QuestionPhrase", Span(0, 14), {"category": "QU-whichClass"})
    doc.add("QuestionPhrase", Span(15, 18), {"category": "QU-yesno"})
    hits = doc.find_within(Span(0, 14), "QuestionPhrase", ("category", "QU-whichClass"))
    assert hits == [qp]


def test_find_within_absent_type_is_empty():
    doc = create_document("whole text")
    doc.add("Token", Span(0, 5))
    assert doc.find_within(Span(0, 10), "Missing") == []


def test_find_within_includes_coextensive():
    doc = create_document("tất cả sinh viên")
    np = doc.add("NounPhrase", Span(0, 16))
    assert doc.find_within(Span(0, 16), "NounPhrase") == [np]


def test_retrieval_order_total_and_stable():
    doc = create_document("a b c d e")
    doc.add("T", Span(2, 3))
    doc.add("T", Span(0, 5))
    doc.add("T", Span(0, 9))
    doc.add("T", Span(0, 5))
    order = [(a.span.start, a.span.end, a.id) for a in doc.annotations("T")]
    assert order == [(0, 9, 2), (0, 5, 1), (0, 5, 3), (2, 3, 0)]
    reloaded = Document.from_dict(json.loads(doc.to_json()))
    assert [(a.span.start, a.span.end, a.id) for a in reloaded.annotations("T")] == order


def test_round_trip_covered_text_property():
    text = "Liệt kê tất cả sinh viên học lớp K50 khoa học máy tính"
    doc = create_document(text)
    for start in range(0, len(text), 7):
        for end in range(start, len(text), 5):
            ann = doc.add("X", Span(start, end))
            assert doc.covered_text(ann) == text[start:end]


def test_find_within_whole_document_returns_every_annotation_of_type():
    doc = create_document("x y z")
    ids = {doc.add("Tok", Span(i, i + 1)) for i in (0, 2, 4)}
    doc.add("Other", Span(0, 1))
    assert set(doc.find_within(Span(0, 5), "Tok")) == ids


def test_feature_absent_vs_empty():
    doc = create_document("abc")
    ann_id = doc.add("T", Span(0, 1), {"empty": ""})
    ann = doc.get(ann_id)
    assert ann.feature("empty") == ""
    assert ann.feature("missing") is None
