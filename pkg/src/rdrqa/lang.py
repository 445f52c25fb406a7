"""Per-language data: tagsets, chunk grammars inputs, and slot normalization.

Question-word and comparison trigger inventories ship in lexicon files; what
lives here is engine semantics — which part-of-speech tags form noun/verb/
preposition classes and which function words are trimmed off query-tuple
slots when a conclusion is instantiated.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class LanguageProfile:
    code: str
    base_type: str
    noun_tags: frozenset[str]
    proper_tags: frozenset[str]
    numeral_tags: frozenset[str]
    verb_tags: frozenset[str]
    prep_tags: frozenset[str]
    adj_tags: frozenset[str]
    det_tags: frozenset[str]
    cc_tags: frozenset[str]
    # leading words dropped from term slots (question triggers, determiners,
    # quantifiers); phrases allowed, matched word-wise
    term_leading: frozenset[str]
    # trailing words dropped from term slots (vi "nào"/"gì" style)
    term_trailing: frozenset[str]
    # leading words dropped from relation slots (copulas, passive markers)
    relation_leading: frozenset[str]
    # trailing prepositions ignored by the expected-IR comparator, never
    # removed from the stored representation
    trailing_preps: frozenset[str]
    have_words: frozenset[str] = field(default_factory=frozenset)
    copula_words: frozenset[str] = field(default_factory=frozenset)
    default_tag: str = "NN"


EN = LanguageProfile(
    code="en",
    base_type="Token",
    noun_tags=frozenset({"NN", "NNS", "NNP", "NNPS"}),
    proper_tags=frozenset({"NNP", "NNPS"}),
    numeral_tags=frozenset({"CD"}),
    verb_tags=frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"}),
    prep_tags=frozenset({"IN", "TO"}),
    adj_tags=frozenset({"JJ"}),
    det_tags=frozenset({"DT"}),
    cc_tags=frozenset({"CC"}),
    term_leading=frozenset({
        "which", "what", "who", "whom", "whose", "when", "where", "how", "many",
        "much", "list", "give", "name", "show", "tell",
        "the", "a", "an", "all", "some",
    }),
    term_trailing=frozenset(),
    relation_leading=frozenset({"is", "are", "am", "was", "were", "be", "been", "being"}),
    trailing_preps=frozenset({
        "in", "of", "by", "with", "to", "at", "on", "for", "from", "about", "as",
    }),
    have_words=frozenset({"have", "has", "had"}),
    copula_words=frozenset({"is", "are", "was", "were"}),
    default_tag="NN",
)

VI = LanguageProfile(
    code="vi",
    base_type="TokenVn",
    noun_tags=frozenset({"Nc", "Ng", "Nu", "Na", "Np"}),
    proper_tags=frozenset({"Np"}),
    numeral_tags=frozenset({"Nn"}),
    verb_tags=frozenset({"Vv"}),
    prep_tags=frozenset({"Cm"}),
    adj_tags=frozenset({"Aa", "An"}),
    det_tags=frozenset({"Nt"}),
    cc_tags=frozenset({"Cc"}),
    term_leading=frozenset({
        "liệt kê", "chỉ ra", "cho biết", "kể ra", "tìm", "danh sách", "số lượng",
        "tất cả", "các", "những", "mọi", "cái", "chiếc",
    }),
    term_trailing=frozenset({"nào", "gì", "này", "kia", "ấy", "đó"}),
    relation_leading=frozenset({"được", "bị"}),
    trailing_preps=frozenset({
        "ở", "tại", "bởi", "của", "về", "cho", "với", "trong", "đến", "từ",
    }),
    have_words=frozenset({"có"}),
    copula_words=frozenset({"là"}),
    default_tag="Nc",
)

PROFILES = {"en": EN, "vi": VI}


def profile(code: str) -> LanguageProfile:
    try:
        return PROFILES[code]
    except KeyError:
        raise ValueError(f"unsupported language {code!r}") from None


def _strip_words(words: list[str], inventory: frozenset[str], *, trailing: bool) -> list[str]:
    # Inventory entries may be multi-word; longest entry wins at each step.
    entries = sorted((e.split() for e in inventory), key=len, reverse=True)
    changed = True
    while changed and words:
        changed = False
        for entry in entries:
            n = len(entry)
            if len(words) < n:
                continue
            chunk = words[-n:] if trailing else words[:n]
            if [w.casefold() for w in chunk] == entry:
                words = words[:-n] if trailing else words[n:]
                changed = True
                break
    return words


def normalize_term(text: str, prof: LanguageProfile) -> str | None:
    """Trim leading triggers/determiners and trailing question words.

    Returns None when nothing content-bearing remains.
    """
    words = text.split()
    words = _strip_words(words, prof.term_leading, trailing=False)
    words = _strip_words(words, prof.term_trailing, trailing=True)
    return " ".join(words) or None


def normalize_relation(text: str, prof: LanguageProfile) -> str | None:
    """Trim leading copulas/passive markers; a bare copula is no relation."""
    words = text.split()
    words = _strip_words(words, prof.relation_leading, trailing=False)
    return " ".join(words) or None


def comparable_relation(text: str | None, prof: LanguageProfile) -> str:
    """Relation form used by the expected-IR comparator.

    Trailing prepositions are kept in the stored representation but ignored
    when comparing against printed tuples.
    """
    if not text:
        return ""
    words = " ".join(text.split()).split()
    while words and words[-1].casefold() in prof.trailing_preps:
        words.pop()
    return " ".join(words).casefold()
