import json
from pathlib import Path

import pytest

from rdrqa.ontology import (
    OntologyError,
    UnknownEntityError,
    load_ontology,
    ontology_from_dict,
    save_ontology,
)

FIXTURES = Path(__file__).parent.parent / "src" / "rdrqa" / "fixtures"


@pytest.fixture(scope="module")
def uni():
    return load_ontology(FIXTURES / "ontology_university.json")


class TestLoad:
    def test_fixture_loads(self, uni):
        assert "sinh viên" in uni.concepts
        assert "học" in uni.relations
        assert "lớp K50 khoa học máy tính" in uni.instances

    def test_undeclared_relation_rejected(self):
        with pytest.raises(OntologyError):
            ontology_from_dict({
                "concepts": [{"name": "c"}],
                "relations": [],
                "instances": [{"name": "i", "concepts": ["c"]}],
                "assertions": [{"s": "i", "r": "ghost", "o": "i"}],
            })

    def test_duplicate_name_rejected(self):
        with pytest.raises(OntologyError):
            ontology_from_dict({
                "concepts": [{"name": "c"}, {"name": "c"}],
                "relations": [], "instances": [], "assertions": [],
            })

    def test_hierarchy_cycle_rejected(self):
        with pytest.raises(OntologyError):
            ontology_from_dict({
                "concepts": [{"name": "a", "parent": "b"}, {"name": "b", "parent": "a"}],
                "relations": [], "instances": [], "assertions": [],
            })

    def test_empty_ontology_loads(self):
        ont = ontology_from_dict({})
        assert ont.summary()["concepts"] == 0


class TestInstancesOf:
    def test_direct_members(self, uni):
        students = uni.instances_of("sinh viên")
        assert "Nguyễn Văn An" in students
        assert "Trần Bình Giang" not in students  # child concept, not direct

    def test_transitive_superset(self, uni):
        direct = uni.instances_of("sinh viên")
        transitive = uni.instances_of("sinh viên", transitive=True)
        assert direct <= transitive
        assert "Trần Bình Giang" in transitive

    def test_empty_concept(self, uni):
        assert uni.instances_of("người") == set()

    def test_unknown_concept_raises(self, uni):
        with pytest.raises(UnknownEntityError):
            uni.instances_of("nonexistent")


class TestRelationsBetween:
    def test_students_hanoi(self, uni):
        assert uni.relations_between("sinh viên", "Hà Nội") == {"có quê"}

    def test_disconnected_pair(self, uni):
        assert uni.relations_between("giảng viên", "Hà Nội") == set()

    def test_instance_with_itself(self, uni):
        assert uni.relations_between("Hà Nội", "Hà Nội") == set()

    def test_either_direction(self, uni):
        # the university is the object of the natural assertion direction
        assert "học" in uni.relations_between("trường đại học", "Phạm Đức Đăng")

    def test_unknown_operand_raises(self, uni):
        with pytest.raises(UnknownEntityError):
            uni.relations_between("sinh viên", "Atlantis")


class TestQueryAssertions:
    def test_enrolled_students(self, uni):
        got = uni.query_assertions("sinh viên", "học", "lớp K50 khoa học máy tính")
        assert got == {"Nguyễn Văn An", "Trần Thị Bình", "Lê Văn Cường"}

    def test_matches_brute_force_comprehension(self, uni):
        for concept in uni.concepts:
            members = uni.instances_of(concept, transitive=True)
            for relation in uni.relations:
                for obj in uni.instances:
                    expected = {
                        a.subject for a in uni.assertions
                        if a.relation == relation and a.obj == obj
                        and a.subject in members
                    }
                    assert uni.query_assertions(concept, relation, obj) == expected

    def test_result_subset_of_concept(self, uni):
        got = uni.query_assertions("sinh viên", "có quê", "Hà Tây")
        assert got <= uni.instances_of("sinh viên", transitive=True)

    def test_relation_without_assertions(self, uni):
        assert uni.query_assertions("giảng viên", "mã sinh viên", "Hà Nội") == set()


class TestRoundTrip:
    def test_save_load_identity(self, uni, tmp_path):
        target = tmp_path / "ontology.json"
        save_ontology(uni, target)
        again = load_ontology(target)
        assert again.to_dict() == uni.to_dict()

    def test_synonym_lookup_case_insensitive(self, uni):
        assert uni.resolve("instance", "tran binh giang") == "Trần Bình Giang"
        assert uni.resolve("concept", "STUDENT") == "sinh viên"
