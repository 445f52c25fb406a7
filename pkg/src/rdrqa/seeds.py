"""Seed rules for the shipped knowledge bases.

Each seed is a (rule, cornerstone question) pair; replaying them through
``add_exception`` in order reconstructs the fixture knowledge bases exactly,
which is also how the test suite and the workbench-parity check validate the
insertion semantics end to end. Questions are stored pre-tagged so tagging
quality can never perturb the tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ir import ConclusionTemplate, TupleTemplate
from .scrdr import KnowledgeBase, Rule


@dataclass(frozen=True)
class Seed:
    name: str
    rule_text: str
    extra: tuple[str, ...]
    structure: str
    tuples: tuple[tuple[str, str, str, str, str, str], ...]
    cornerstone: str  # pre-tagged question


def _conclusion(seed: Seed) -> ConclusionTemplate:
    return ConclusionTemplate(
        seed.structure,
        tuple(TupleTemplate.parse(list(slots)) for slots in seed.tuples),
    )


def as_rule(seed: Seed) -> Rule:
    return Rule(seed.rule_text, seed.extra, _conclusion(seed))


EN_SEEDS: tuple[Seed, ...] = (
    Seed(
        name="R1",
        rule_text=(
            "(({QuestionPhrase}):qp ({Relation}):rel ({NounPhrase}):np):left "
            '--> :left.RDR1_ = {category1 = "UnknTerm"}, :qp.RDR1_QP = {}, '
            ":rel.RDR1_Rel = {}, :np.RDR1_NP = {}"
        ),
        extra=(),
        structure="UnknTerm",
        tuples=(
            ("RDR1_.category1", "RDR1_QP.QuestionPhrase.category",
             "?", "RDR1_Rel", "RDR1_NP", "?"),
        ),
        cornerstone=(
            "Who/WP are/VBP the/DT researchers/NNS in/IN semantic/JJ web/NN "
            "research/NN area/NN ?/."
        ),
    ),
    Seed(
        name="R2",
        rule_text=(
            "({Preps} {RDR1_} ({Relation}):rel):left "
            '--> :left.RDR2_ = {category1 = "Normal"}, :rel.RDR2_Rel = {}'
        ),
        extra=(),
        structure="Normal",
        tuples=(
            ("RDR2_.category1", "RDR1_QP.QuestionPhrase.category",
             "RDR1_QP", "RDR2_Rel", "RDR1_NP", "?"),
        ),
        cornerstone=(
            "In/IN which/WDT projects/NNS is/VBZ enrico/NNP motta/NNP "
            "working/VBG on/IN"
        ),
    ),
    Seed(
        name="R3",
        rule_text=(
            "({RDR1_} ({Relation}):rel):left "
            '--> :left.RDR3_ = {category1 = "Normal"}, :rel.RDR3_Rel = {}'
        ),
        extra=(),
        structure="Normal",
        tuples=(
            ("RDR3_.category1", "RDR1_QP.QuestionPhrase.category",
             "RDR1_QP", "RDR3_Rel", "RDR1_NP", "?"),
        ),
        cornerstone=(
            "Which/WDT universities/NNS are/VBP Knowledge/NNP Media/NNP "
            "Institute/NNP collaborating/VBG with/IN ?/."
        ),
    ),
    Seed(
        name="R5",
        rule_text=(
            "({RDR3_} ({NounPhrase}):np):left "
            '--> :left.RDR5_ = {category1 = "Normal"}, :np.RDR5_NP = {}'
        ),
        extra=(),
        structure="Normal",
        tuples=(
            ("RDR5_.category1", "RDR1_QP.QuestionPhrase.category",
             "RDR1_NP", "RDR3_Rel", "RDR5_NP", "?"),
        ),
        cornerstone=(
            "Who/WP are/VBP the/DT partners/NNS involved/VBN in/IN AKT/NNP "
            "project/NN ?/."
        ),
    ),
    Seed(
        name="R40",
        rule_text='({RDR5_}):left --> :left.RDR40_ = {category1 = "Normal", category2 = "Normal"}',
        extra=("RDR1_QP.hasAnno == QuestionPhrase.category == QU-whichClass",),
        structure="Clause",
        tuples=(
            ("RDR40_.category1", "RDR1_QP.QuestionPhrase.category",
             "RDR1_QP", "RDR1_Rel", "?", "?"),
            ("RDR40_.category2", "RDR1_QP.QuestionPhrase.category",
             "RDR1_NP", "RDR3_Rel", "RDR5_NP", "?"),
        ),
        cornerstone=(
            "Which/WDT researchers/NNS wrote/VBD publications/NNS related/VBN "
            "to/TO semantic/JJ portals/NNS ?/."
        ),
    ),
    Seed(
        name="R45",
        rule_text='({RDR40_}):left --> :left.RDR45_ = {category1 = "Normal", category2 = "Normal"}',
        extra=("RDR1_Rel.hasAnno == Token.category == VBN",),
        structure="And",
        tuples=(
            ("RDR45_.category1", "RDR1_QP.QuestionPhrase.category",
             "RDR1_QP", "RDR1_Rel", "RDR1_NP", "?"),
            ("RDR45_.category2", "RDR1_QP.QuestionPhrase.category",
             "RDR1_QP", "RDR3_Rel", "RDR5_NP", "?"),
        ),
        cornerstone=(
            "Which/WDT projects/NNS sponsored/VBN by/IN eprsc/NN are/VBP "
            "related/VBN to/TO semantic/JJ web/NN ?/."
        ),
    ),
    Seed(
        name="R10",
        rule_text=(
            "(({QuestionPhrase}):qp {Preps} ({NounPhrase}):np):left "
            '--> :left.RDR10_ = {category1 = "UnknRel"}, :qp.RDR10_QP = {}, '
            ":np.RDR10_NP = {}"
        ),
        extra=(),
        structure="UnknRel",
        tuples=(
            ("RDR10_.category1", "RDR10_QP.QuestionPhrase.category",
             "RDR10_QP", "?", "RDR10_NP", "?"),
        ),
        cornerstone=(
            "Which/WDT presidents/NNS of/IN the/DT United/NNP States/NNPS "
            "had/VBD more/JJR than/IN three/CD children/NNS ?/."
        ),
    ),
    Seed(
        name="R27",
        rule_text=(
            '({RDR10_} ({Verb} {Token.category == "JJR"} {Token.string == "than"}):rel '
            '({Token.category == "CD"} {Noun}):np):left '
            '--> :left.RDR27_ = {category1 = "Normal"}, :rel.RDR27_Rel = {}, '
            ":np.RDR27_NP = {}"
        ),
        extra=(),
        structure="Normal",
        tuples=(
            ("RDR27_.category1", "RDR10_QP.QuestionPhrase.category",
             "RDR10_QP", "RDR27_Rel", "RDR27_NP", "?"),
        ),
        cornerstone=(
            "Which/WDT presidents/NNS of/IN the/DT United/NNP States/NNPS "
            "had/VBD more/JJR than/IN three/CD children/NNS ?/."
        ),
    ),
    Seed(
        name="R67",
        rule_text=(
            '({RDR10_} {Verb} ({Token.category == "JJR"} {Token.string == "than"} '
            '{Token.category == "CD"}):cp ({Noun}):np):left '
            '--> :left.RDR67_ = {category1 = "Compare", category2 = "UnknRel"}, '
            ":cp.RDR67_Compare = {}, :np.RDR67_NP = {}"
        ),
        extra=(),
        structure="Clause",
        tuples=(
            ("RDR67_.category1", "RDR10_QP.QuestionPhrase.category",
             "?", "RDR67_NP", "?", "RDR67_Compare"),
            ("RDR67_.category2", "RDR10_QP.QuestionPhrase.category",
             "RDR10_QP", "?", "RDR10_NP", "?"),
        ),
        cornerstone=(
            "Which/WDT presidents/NNS of/IN the/DT United/NNP States/NNPS "
            "had/VBD more/JJR than/IN three/CD children/NNS ?/."
        ),
    ),
    Seed(
        name="R80",
        rule_text=(
            "(({QuestionPhrase}):qp {RDR1_QP} {RDR1_Rel} ({Noun}):np1 "
            '{Token.category == "CC"} ({Noun}):np2):left '
            '--> :left.RDR80_ = {category1 = "Normal", category2 = "Normal"}, '
            ":qp.RDR80_QP = {}, :np1.RDR80_NP1 = {}, :np2.RDR80_NP2 = {}"
        ),
        extra=("RDR80_QP.hasAnno == Noun",),
        structure="And",
        tuples=(
            ("RDR80_.category1", "RDR80_QP.QuestionPhrase.category",
             "RDR80_QP", "RDR1_Rel", "RDR80_NP1", "?"),
            ("RDR80_.category2", "RDR80_QP.QuestionPhrase.category",
             "RDR80_QP", "RDR1_Rel", "RDR80_NP2", "?"),
        ),
        cornerstone=(
            "List/NN drugs/NNS that/WDT lead/VBP to/TO strokes/NNS and/CC "
            "arthrosis/NNS"
        ),
    ),
    Seed(
        name="R84",
        rule_text=(
            '(({QuestionPhrase.category == "YesNo"}):qp ({NounPhrase}):np1 '
            "({NounPhrase}):np2):left "
            '--> :left.RDR84_ = {category1 = "UnknRel"}, :qp.RDR84_QP = {}, '
            ":np1.RDR84_NP1 = {}, :np2.RDR84_NP2 = {}"
        ),
        extra=(),
        structure="Affirm",
        tuples=(
            ("RDR84_.category1", "RDR84_QP.QuestionPhrase.category",
             "RDR84_NP2", "?", "RDR84_NP1", "?"),
        ),
        cornerstone="Is/VBZ Tran/NNP Binh/NNP Giang/NNP a/DT PhD/NN student/NN ?/.",
    ),
    Seed(
        name="R86",
        rule_text=(
            '(({QuestionPhrase.category == "QU-who-what"}):qp '
            '{Relation.string == "are"} ({NounPhrase}):np):left '
            '--> :left.RDR86_ = {category1 = "Definition"}, :qp.RDR86_QP = {}, '
            ":np.RDR86_NP = {}"
        ),
        extra=(),
        structure="Definition",
        tuples=(
            ("RDR86_.category1", "RDR86_QP.QuestionPhrase.category",
             "?", "?", "RDR86_NP", "?"),
        ),
        cornerstone="What/WP are/VBP research/NN areas/NNS ?/.",
    ),
)


VI_SEEDS: tuple[Seed, ...] = (
    Seed(
        name="V101",
        rule_text=(
            '(({QuestionPhrase.category == "List"}):qp ({Relation}):rel '
            '({NounPhrase.type == "Entity"}):np):left '
            '--> :left.V101_ = {category1 = "Normal"}, :qp.V101_QP = {}, '
            ":rel.V101_Rel = {}, :np.V101_NP = {}"
        ),
        extra=(),
        structure="Normal",
        tuples=(
            ("V101_.category1", "V101_QP.QuestionPhrase.category",
             "V101_QP", "V101_Rel", "V101_NP", "?"),
        ),
        cornerstone=(
            "Liệt_kê/Eq tất_cả/Pn các/Nt sinh_viên/Nc học/Vv lớp/Nc "
            "khoa_học/Nc máy_tính/Nc"
        ),
    ),
    Seed(
        name="V102",
        rule_text=(
            '(({QuestionPhrase.category == "List"}):qp ({Relation}):rel1 '
            '({NounPhrase.type == "Entity"}):np1 {TokenVn.string == "mà"} '
            '({Relation}):rel2 ({NounPhrase.type == "Entity"}):np2):left '
            '--> :left.V102_ = {category1 = "Normal", category2 = "Normal"}, '
            ":qp.V102_QP = {}, :rel1.V102_Rel1 = {}, :np1.V102_NP1 = {}, "
            ":rel2.V102_Rel2 = {}, :np2.V102_NP2 = {}"
        ),
        extra=(),
        structure="And",
        tuples=(
            ("V102_.category1", "V102_QP.QuestionPhrase.category",
             "V102_QP", "V102_Rel1", "V102_NP1", "?"),
            ("V102_.category2", "V102_QP.QuestionPhrase.category",
             "V102_QP", "V102_Rel2", "V102_NP2", "?"),
        ),
        cornerstone=(
            "Liệt_kê/Eq tất_cả/Pn sinh_viên/Nc học/Vv lớp/Nc K50/Np "
            "khoa_học/Nc máy_tính/Nc mà/Cc có/Vv quê/Nc ở/Cm Hà_Nội/Np"
        ),
    ),
    Seed(
        name="V103",
        rule_text=(
            "(({NounPhrase}):np1 ({Relation}):rel1 "
            '({QuestionPhrase.category == "Entity"}):qp1 {TokenVn.string == "và"} '
            '({Relation}):rel2 ({QuestionPhrase.category == "Who"}):qp2):left '
            '--> :left.V103_ = {category1 = "Normal", category2 = "UnknTerm"}, '
            ":np1.V103_NP1 = {}, :rel1.V103_Rel1 = {}, :qp1.V103_QP1 = {}, "
            ":rel2.V103_Rel2 = {}, :qp2.V103_QP2 = {}"
        ),
        extra=(),
        structure="Or",
        tuples=(
            ("V103_.category1", "V103_QP1.QuestionPhrase.category",
             "V103_QP1", "V103_Rel1", "V103_NP1", "?"),
            ("V103_.category2", "V103_QP2.QuestionPhrase.category",
             "?", "V103_Rel2", "V103_NP1", "?"),
        ),
        cornerstone=(
            "Phạm_Đức_Đăng/Np học/Vv trường_đại_học/Nc nào/Pq và/Cc được/Vv "
            "hướng_dẫn/Vv bởi/Cm ai/Pq ?/."
        ),
    ),
    Seed(
        name="V104",
        rule_text=(
            '(({QuestionPhrase.category == "Entity"}):qp {Relation} '
            '({NounPhrase}):relnp ({TokenVn.comparison == "Sup"}):cmp '
            "({NounPhrase}):np2):left "
            '--> :left.V104_ = {category1 = "Normal"}, :qp.V104_QP = {}, '
            ":relnp.V104_RelNP = {}, :cmp.V104_Cmp = {}, :np2.V104_NP2 = {}"
        ),
        extra=(),
        structure="Compare",
        tuples=(
            ("V104_.category1", "V104_QP.QuestionPhrase.category",
             "V104_QP", "V104_RelNP", "V104_NP2", "V104_Cmp"),
        ),
        cornerstone=(
            "sinh_viên/Nc nào/Pq có/Vv điểm_trung_bình/Nc cao_nhất/Aa khoa/Nc "
            "công_nghệ_thông_tin/Nc ?/."
        ),
    ),
    Seed(
        name="V105",
        rule_text=(
            '(({QuestionPhrase.category == "ManyClass"}):qp ({Relation}):rel '
            '({NounPhrase.type == "Entity"}):np {TokenVn.string == "là"} '
            '({TokenVn.category == "Nn"}):num '
            '({QuestionPhrase.category == "YesNo"}):yn):left '
            '--> :left.V105_ = {category1 = "ThreeTerm"}, :qp.V105_QP = {}, '
            ":rel.V105_Rel = {}, :np.V105_NP = {}, :num.V105_Num = {}, "
            ":yn.V105_YN = {}"
        ),
        extra=(),
        structure="Affirm_3Term",
        tuples=(
            ("V105_.category1", "V105_QP.QuestionPhrase.category",
             "V105_QP", "V105_Rel", "V105_NP", "V105_Num"),
        ),
        cornerstone=(
            "số_lượng/Eq sinh_viên/Nc học/Vv lớp/Nc K50/Np khoa_học/Nc "
            "máy_tính/Nc là/Vv 45/Nn phải_không/Eq ?/."
        ),
    ),
    Seed(
        name="V106",
        rule_text=(
            '(({QuestionPhrase.category == "ManyClass"}):qp ({Relation}):rel '
            '({NounPhrase.type == "Entity"}):np ({TokenVn.comparison == "Gt"}):cmp '
            '({TokenVn.category == "Nn"}):num '
            '({QuestionPhrase.category == "YesNo"}):yn):left '
            '--> :left.V106_ = {category1 = "Compare", category2 = "Normal"}, '
            ":qp.V106_QP = {}, :rel.V106_Rel = {}, :np.V106_NP = {}, "
            ":cmp.V106_Cmp = {}, :num.V106_Num = {}, :yn.V106_YN = {}"
        ),
        extra=(),
        structure="Clause",
        tuples=(
            ("V106_.category1", "V106_YN.QuestionPhrase.category",
             "V106_Num", "?", "?", "V106_Cmp"),
            ("V106_.category2", "V106_QP.QuestionPhrase.category",
             "V106_QP", "V106_Rel", "V106_NP", "?"),
        ),
        cornerstone=(
            "số_lượng/Eq sinh_viên/Nc học/Vv lớp/Nc K50/Np khoa_học/Nc "
            "máy_tính/Nc lớn_hơn/Aa 45/Nn phải_không/Eq ?/."
        ),
    ),
    Seed(
        name="V107",
        rule_text=(
            '(({QuestionPhrase.category == "Who"}):qp1 ({Relation}):rel1 '
            '({NounPhrase.type == "Entity"}):np1 {TokenVn.string == "và"} '
            '({QuestionPhrase.category == "Who"}):qp2 ({Relation}):rel2 '
            '({NounPhrase.type == "Entity"}):np2):left '
            '--> :left.V107_ = {category1 = "UnknTerm", category2 = "UnknTerm"}, '
            ":qp1.V107_QP1 = {}, :rel1.V107_Rel1 = {}, :np1.V107_NP1 = {}, "
            ":qp2.V107_QP2 = {}, :rel2.V107_Rel2 = {}, :np2.V107_NP2 = {}"
        ),
        extra=(),
        structure="Combine",
        tuples=(
            ("V107_.category1", "V107_QP1.QuestionPhrase.category",
             "?", "V107_Rel1", "V107_NP1", "?"),
            ("V107_.category2", "V107_QP2.QuestionPhrase.category",
             "?", "V107_Rel2", "V107_NP2", "?"),
        ),
        cornerstone=(
            "Ai/Pq có/Vv quê_quán/Nc ở/Cm Hà_Tây/Np và/Cc ai/Pq học/Vv khoa/Nc "
            "công_nghệ_thông_tin/Nc ?/."
        ),
    ),
)


def seeds_for(language: str) -> tuple[Seed, ...]:
    return EN_SEEDS if language == "en" else VI_SEEDS


def replay(language: str, doc_factory) -> KnowledgeBase:
    """Rebuild a seed knowledge base through the insertion algorithm."""
    kb = KnowledgeBase(language)
    for seed in seeds_for(language):
        kb.add_exception(as_rule(seed), seed.cornerstone, doc_factory)
    return kb
