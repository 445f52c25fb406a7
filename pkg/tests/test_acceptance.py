"""Acceptance suite: the engine's exit criteria, one reported line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; every criterion states its tolerance inline.
"""

import contextlib
import json
import random
import time
from pathlib import Path

import pytest

from rdrqa.engine import Engine
from rdrqa.fixtures_build import build_pipeline
from rdrqa.ir import IntermediateRepresentation, ir_matches, validate_ir
from rdrqa.lang import VI
from rdrqa.mapping import Candidates, edit_distance, map_term, similarity
from rdrqa.ontology import load_ontology
from rdrqa.patterns import find_match
from rdrqa.scrdr import load_kb, new_kb, persist_kb

from bruteforce import brute_force_edit_distance, brute_force_match
from test_patterns import random_document, random_pattern
from test_scrdr import random_case, rule_for_case, synthetic_factory

FIXTURES = Path(__file__).parent.parent / "src" / "rdrqa" / "fixtures"

REQUIRED_IR_IDS = {
    "vi-or-dang",                 # two-tuple union question
    "vi-and-k50-hanoi",           # two-tuple intersection question
    "en-unknterm-researchers",    # R1 conclusion
    "en-normal-universities",     # R3 conclusion
    "en-normal-partners",         # R5 conclusion
    "en-clause-researchers-wrote",  # R40 clause conclusion
    "en-and-projects-sponsored",  # R45 conjunction conclusion
    "en-clause-presidents",       # R67 comparison clause
    "en-and-drugs",               # R80 coordinated objects
    "en-affirm-phd",              # yes/no membership question
    "vi-affirm3term-45",          # three-term yes/no paraphrase
    "vi-compare-gpa",             # superlative comparison question
    "vi-combine-hatay",           # independent sub-questions
    "vi-clause-45",               # threshold comparison clause
}


@contextlib.contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"[ACCEPTANCE] {name}: PASS")


@pytest.fixture(scope="module")
def engines():
    return {
        "vi": Engine.from_config_file(FIXTURES / "config_vi.json"),
        "en": Engine.from_config_file(FIXTURES / "config_en.json"),
    }


def test_worked_example_ir_suite(engines):
    """Every printed intermediate representation reproduces exactly,
    in under one second per question."""
    with criterion("worked-example IR suite (>=13 questions, exact, <1s each)"):
        seen = set()
        total = 0
        for raw in (FIXTURES / "corpus_examples.jsonl").read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            item = json.loads(line)
            engine = engines[item["lang"]]
            expected = IntermediateRepresentation.from_dict(item["expected"])
            started = time.perf_counter()
            outcome = engine.analyze(item["pretagged"], pretagged=True)
            elapsed = time.perf_counter() - started
            ok, diffs = ir_matches(expected, outcome.ir, engine.prof)
            assert ok, f"{item['id']}: {diffs}"
            assert elapsed < 1.0, f"{item['id']} took {elapsed:.3f}s"
            assert validate_ir(outcome.ir) == []
            seen.add(item["id"])
            total += 1
        assert REQUIRED_IR_IDS <= seen
        assert total >= 13


def test_scrdr_walkthrough_reproduction():
    """Both evaluation-path walkthroughs come out exactly on the encoded
    tree fragment."""
    with criterion("SCRDR walkthrough paths (exact path equality)"):
        kb = load_kb(FIXTURES / "kb_walkthrough_en.json")
        pipe = build_pipeline("en")
        akt = kb.evaluate(pipe.annotate(
            "Who/WP are/VBP the/DT partners/NNS involved/VBN in/IN AKT/NNP "
            "project/NN ?/.", pretagged=True))
        assert akt.path == [0, 1, 2, 3, 5, 40, 42, 43, 45]
        assert akt.last_fired == 40
        enrico = kb.evaluate(pipe.annotate(
            "In/IN which/WDT projects/NNS is/VBZ enrico/NNP motta/NNP "
            "working/VBG on/IN", pretagged=True))
        assert enrico.path == [0, 1, 2]
        assert enrico.last_fired == 2


def test_insertion_placement_property():
    """500 randomized insertions: placement edge, locality, cornerstone
    stability — all trials."""
    with criterion("insertion placement property (500 randomized trials, 100%)"):
        rng = random.Random(31337)
        trials = 0
        for batch in range(10):
            kb = new_kb("en")
            stones = []
            for i in range(50):
                trial = batch * 1000 + i
                case = random_case(rng, trial)
                rule = rule_for_case(case, rng, trial)
                before = kb.evaluate(synthetic_factory(case))
                last = before.path[-1]
                fired = last in before.fired
                node_id = kb.add_exception(rule, case, synthetic_factory)
                if fired:
                    assert kb.nodes[last].except_child == node_id
                else:
                    assert kb.nodes[last].false_child == node_id
                again = kb.evaluate(synthetic_factory(case))
                assert again.last_fired == node_id
                for stone, conclusion in stones:
                    redone = kb.evaluate(synthetic_factory(stone))
                    redone_ir = (redone.conclusion.to_dict()
                                 if redone.conclusion else None)
                    assert redone_ir == conclusion
                stones.append((case, again.conclusion.to_dict()
                               if again.conclusion else None))
                trials += 1
        assert trials == 500


def test_pattern_matcher_oracle():
    """>=10,000 generated (document, pattern) cases agree with the
    brute-force sequence enumerator on match/no-match and outer span."""
    with criterion("pattern-matcher oracle (>=10,000 cases, exact agreement)"):
        rng = random.Random(90210)
        cases = 0
        for _ in range(10_000):
            doc = random_document(rng)
            pattern = random_pattern(rng)
            expected = brute_force_match(doc, pattern)
            got = find_match(doc, pattern)
            got_span = (got.outer.start, got.outer.end) if got else None
            assert got_span == expected
            cases += 1
        assert cases == 10_000


def test_similarity_oracle():
    """Normalized-Levenshtein similarity equals the independent
    dynamic-programming oracle on 1,000 random Unicode pairs; the
    enroll/enrolled pair scores exactly 0.75."""
    with criterion("similarity oracle (1,000 pairs exact; enroll/enrolled = 0.75)"):
        assert similarity("enroll", "enrolled") == 0.75
        rng = random.Random(5150)
        alphabet = "aàáâãbcdđeèéêgհhiíịklmnoóôơpqrstuúưvxyýỳ ơư09"
        for _ in range(1000):
            a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 14)))
            b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 14)))
            assert edit_distance(a, b) == brute_force_edit_distance(a, b)


def test_answer_semantics_oracle(engines):
    """And/Or/Clause/Affirm answers equal exhaustive set computation on the
    fixture ontology; the worked And question answers with the brute-forced
    intersection; the course ambiguity offers exactly the two instances."""
    with criterion("answer semantics oracle (exhaustive sets; ambiguity candidates)"):
        uni = load_ontology(FIXTURES / "ontology_university.json")
        vi = engines["vi"]
        en = engines["en"]
        k50 = "lớp K50 khoa học máy tính"

        def linked(concept, relation, entity):
            members = uni.instances_of(concept, transitive=True)
            hits = set()
            for a in uni.assertions:
                if a.relation != relation:
                    continue
                if a.obj == entity and a.subject in members:
                    hits.add(a.subject)
                if a.subject == entity and a.obj in members:
                    hits.add(a.obj)
            return hits

        # And: the worked two-tuple question equals the brute-forced intersection
        answer = vi.answer(
            "Liệt_kê/Eq tất_cả/Pn sinh_viên/Nc học/Vv lớp/Nc K50/Np khoa_học/Nc "
            "máy_tính/Nc mà/Cc có/Vv quê/Nc ở/Cm Hà_Nội/Np")
        expected = linked("sinh viên", "học", k50) & linked("sinh viên", "có quê", "Hà Nội")
        assert set(answer.items) == expected

        # Or: union across sub-questions
        answer = vi.answer(
            "Phạm_Đức_Đăng/Np học/Vv trường_đại_học/Nc nào/Pq và/Cc được/Vv "
            "hướng_dẫn/Vv bởi/Cm ai/Pq ?/.")
        expected = (linked("trường đại học", "học", "Phạm Đức Đăng")
                    | {a.subject for a in uni.assertions
                       if a.relation == "hướng dẫn" and a.obj == "Phạm Đức Đăng"})
        assert set(answer.items) == expected

        # Clause: manual two-step substitution
        answer = vi.answer(
            "số_lượng/Eq sinh_viên/Nc học/Vv lớp/Nc K50/Np khoa_học/Nc "
            "máy_tính/Nc lớn_hơn/Aa 45/Nn phải_không/Eq ?/.")
        count = len(linked("sinh viên", "học", k50))
        assert answer.text == ("yes" if count > 45 else "no")

        # Affirm: concept membership answers yes
        answer = en.answer("Is/VBZ Tran/NNP Binh/NNP Giang/NNP a/DT PhD/NN "
                           "student/NN ?/.")
        member = "Trần Bình Giang" in uni.instances_of("nghiên cứu sinh",
                                                       transitive=True)
        assert answer.text == ("yes" if member else "no") == "yes"

        # the ambiguity: exactly the two candidates, best first
        result = map_term("lớp khoa học máy tính", "instance", uni,
                          vi.config.threshold, VI)
        assert isinstance(result, Candidates)
        assert [name for name, _ in result.ranked] == [
            "lớp K50 khoa học máy tính", "bộ môn khoa học máy tính",
        ]


def test_kb_persistence_and_histograms(engines, tmp_path, capsys):
    """A persist/load round trip leaves every acceptance question's path and
    representation identical; layer and structure histograms are emitted."""
    with criterion("KB persistence round-trip + layer/structure histograms"):
        corpus = [
            json.loads(line)
            for line in (FIXTURES / "corpus_examples.jsonl").read_text(
                encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        ]
        for language in ("vi", "en"):
            engine = engines[language]
            target = tmp_path / f"kb_{language}.json"
            persist_kb(engine.kb, target)
            reloaded = load_kb(target)
            for item in corpus:
                if item["lang"] != language:
                    continue
                doc_before = engine.build_document(item["pretagged"], True)
                doc_after = engine.build_document(item["pretagged"], True)
                before = engine.kb.evaluate(doc_before)
                after = reloaded.evaluate(doc_after)
                assert before.path == after.path
                assert before.last_fired == after.last_fired
                b = before.conclusion.to_dict() if before.conclusion else None
                a = after.conclusion.to_dict() if after.conclusion else None
                assert b == a

        # histograms come out of both reporting surfaces
        from rdrqa.cli import main

        assert main(["kb", "stats", "--lang", "vi"]) == 0
        stats_out = capsys.readouterr().out
        assert "rules per exception layer:" in stats_out
        assert "layer 1:" in stats_out
        assert main(["eval", "--lang", "en"]) == 0
        eval_out = capsys.readouterr().out
        assert "per question structure:" in eval_out
        assert "rules per exception layer:" in eval_out
