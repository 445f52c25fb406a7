"""Base annotation layers: tokens, lexical units, phrases, relations.

The pipeline turns a question into the layers the rule engine matches over:

    Token/TokenVn   words with a ``category`` part-of-speech feature
    NounPhrase      chunked noun phrases (vi additionally typed Concept/Entity)
    QuestionPhrase  question phrases with a ``category`` feature
    Relation        relation phrases
    Noun/Verb/Preps maximal runs of noun/verb/preposition tokens (en)

Taggers are deliberately pluggable: pre-tagged input ("word/TAG", underscores
joining multi-syllable Vietnamese words) takes precedence, then lexicon
lookup, then a small suffix guesser, so fixture questions are immune to
tagger quality.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .annotations import Annotation, Document, Span
from .lang import LanguageProfile, profile

QWORD_FEATURE = "qword"
COMPARISON_FEATURE = "comparison"
SPECIAL_FEATURE = "special"


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    kind: str  # "word" | "question-word" | "comparison" | "special"
    tag: str   # part-of-speech tag for words, category label otherwise

    def __post_init__(self):
        if not self.surface:
            raise ValueError("lexicon surface must be non-empty")


def load_lexicon(path: str | Path) -> list[LexiconEntry]:
    """UTF-8 lines of ``surface<TAB>kind<TAB>tag-or-category``."""
    entries = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"malformed lexicon line: {raw!r}")
        entries.append(LexiconEntry(parts[0], parts[1], parts[2]))
    return entries


class PhraseTypeDictionary:
    """Concept names (and synonyms) from the target ontology, plus user
    synonyms; decides Concept vs Entity when the heuristics abstain."""

    def __init__(self, names: Iterable[str] = ()):
        self._names = {" ".join(n.split()).casefold() for n in names}

    @classmethod
    def from_ontology(cls, ontology, extra: Iterable[str] = ()) -> "PhraseTypeDictionary":
        names = []
        for concept in ontology.concepts.values():
            names.append(concept.name)
            names.extend(concept.synonyms)
        names.extend(extra)
        return cls(names)

    def __contains__(self, phrase: str) -> bool:
        return " ".join(phrase.split()).casefold() in self._names


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(text: str, language: str, word_list: Optional[Iterable[str]] = None) -> Document:
    """Whitespace/punctuation tokenizer posting base-layer annotations.

    A maximal run of letters/digits becomes one token; every other non-space
    character is a token by itself. For Vietnamese, adjacent syllables found
    in ``word_list`` merge into a single token annotation.
    """
    prof = profile(language)
    doc = Document(text)
    spans: list[Span] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_word_char(ch):
            j = i
            while j < len(text) and _is_word_char(text[j]):
                j += 1
            spans.append(Span(i, j))
            i = j
        else:
            spans.append(Span(i, i + 1))
            i += 1

    if word_list:
        folded = {" ".join(w.split()).casefold(): len(w.split()) for w in word_list}
        max_len = max(folded.values(), default=1)
        merged: list[Span] = []
        k = 0
        while k < len(spans):
            taken = None
            for n in range(min(max_len, len(spans) - k), 1, -1):
                covered = text[spans[k].start : spans[k + n - 1].end]
                if " ".join(covered.split()).casefold() in folded:
                    taken = Span(spans[k].start, spans[k + n - 1].end)
                    k += n
                    break
            if taken is None:
                taken = spans[k]
                k += 1
            merged.append(taken)
        spans = merged

    for span in spans:
        doc.add(prof.base_type, span)
    return doc


def parse_pretagged(pretagged: str, language: str) -> Document:
    """Build a document from ``word/TAG`` pairs separated by single spaces.

    Underscores inside a word stand for spaces (multi-syllable Vietnamese
    words), so "sinh_viên/Nc" covers the text "sinh viên".
    """
    prof = profile(language)
    surfaces: list[str] = []
    tags: list[str] = []
    for item in pretagged.split():
        word, slash, tag = item.rpartition("/")
        if not slash or not word:
            raise ValueError(f"malformed pre-tagged item {item!r}")
        surfaces.append(word.replace("_", " "))
        tags.append(tag)
    text = " ".join(surfaces)
    doc = Document(text)
    offset = 0
    for surface, tag in zip(surfaces, tags):
        doc.add(prof.base_type, Span(offset, offset + len(surface)), {"category": tag})
        offset += len(surface) + 1
    return doc


# ---------------------------------------------------------------------------
# Tagging and lexical units
# ---------------------------------------------------------------------------


def _guess_tag(word: str, prof: LanguageProfile) -> str:
    if prof.code == "en":
        if word.isdigit():
            return "CD"
        low = word.casefold()
        if low.endswith("ing"):
            return "VBG"
        if low.endswith("ed"):
            return "VBN"
        if word[:1].isupper():
            return "NNP"
        if low.endswith("s"):
            return "NNS"
        return prof.default_tag
    if word.isdigit():
        return "Nn"
    if word[:1].isupper():
        return "Np"
    return prof.default_tag


def _is_punct(word: str) -> bool:
    return len(word) == 1 and not word.isalnum() and not word.isspace()


def pos_tag(doc: Document, lexicon: list[LexiconEntry], language: str) -> Document:
    """Give every base annotation a ``category`` feature.

    Pre-tagged annotations keep their category; lexicon entries cover the
    known vocabulary; anything else falls to the suffix guesser so tagging is
    total.
    """
    prof = profile(language)
    by_surface = {}
    for entry in lexicon:
        if entry.kind == "word":
            by_surface.setdefault(" ".join(entry.surface.split()).casefold(), entry.tag)
    for ann in doc.annotations(prof.base_type):
        if ann.feature("category") is not None:
            continue
        covered = doc.covered_text(ann.id)
        folded = " ".join(covered.split()).casefold()
        if _is_punct(covered):
            ann.features["category"] = "."
        elif folded in by_surface:
            ann.features["category"] = by_surface[folded]
        else:
            ann.features["category"] = _guess_tag(covered, prof)
    return doc


def top_tokens(doc: Document, prof: LanguageProfile) -> list[Annotation]:
    """The canonical base-token stream: at each offset the longest base
    annotation wins (merged lexical units shadow their syllables)."""
    anns = doc.annotations(prof.base_type)
    stream: list[Annotation] = []
    position = -1
    for ann in anns:  # retrieval order is (start asc, end desc, id asc)
        if ann.span.start > position:
            stream.append(ann)
            position = ann.span.end - 1
    return stream


def mark_lexical_units(doc: Document, lexicon: list[LexiconEntry], language: str) -> Document:
    """Mark question words, comparison phrases, and special abbreviations.

    Multi-token surfaces become single merged base annotations carrying the
    unit feature; surfaces that are already one token just gain the feature.
    """
    prof = profile(language)
    feature_for = {"question-word": QWORD_FEATURE, "comparison": COMPARISON_FEATURE,
                   "special": SPECIAL_FEATURE}
    units = [e for e in lexicon if e.kind in feature_for]
    if not units:
        return doc
    by_words: dict[tuple[str, ...], LexiconEntry] = {}
    for entry in units:
        by_words[tuple(entry.surface.casefold().split())] = entry
    max_words = max(len(k) for k in by_words)

    stream = top_tokens(doc, prof)
    covered = [" ".join(doc.covered_text(a.id).split()).casefold() for a in stream]
    i = 0
    while i < len(stream):
        matched = None
        for n in range(min(max_words, len(stream) - i), 0, -1):
            words = []
            for tok in covered[i : i + n]:
                words.extend(tok.split())
            entry = by_words.get(tuple(words))
            if entry is not None:
                matched = (n, entry)
                break
        if matched is None:
            i += 1
            continue
        n, entry = matched
        feature = feature_for[entry.kind]
        if n == 1:
            stream[i].features[feature] = entry.tag
        else:
            span = Span(stream[i].span.start, stream[i + n - 1].span.end)
            doc.add(prof.base_type, span, {
                "category": stream[i].feature("category") or prof.default_tag,
                feature: entry.tag,
            })
        i += n
    return doc


# ---------------------------------------------------------------------------
# Chunking
# ---------------------------------------------------------------------------


def _excluded_from_np(ann: Annotation) -> bool:
    # question triggers and comparison phrases never sit inside a noun phrase
    return (ann.feature(QWORD_FEATURE) is not None
            or ann.feature(COMPARISON_FEATURE) is not None)


def _is_comparison(ann: Annotation) -> bool:
    return ann.feature(COMPARISON_FEATURE) is not None


def _np_match_vi(doc: Document, stream: list[Annotation], start: int,
                 prof: LanguageProfile) -> int:
    """Length (in stream tokens) of a noun phrase starting at ``start``.

    Grammar: Pn? (Nu|Nn)? ("cái"|"chiếc")? Nt? (Nc|Ng|Nu|Na|Np)+ (Aa|An)?
    ("này"|"kia"|"ấy"|"đó")?  — zero when the mandatory core is absent.
    """
    i = start

    def cat(k: int) -> Optional[str]:
        if k >= len(stream) or _excluded_from_np(stream[k]):
            return None
        return stream[k].feature("category")

    def word(k: int) -> str:
        return " ".join(doc.covered_text(stream[k].id).split()).casefold()

    if cat(i) == "Pn":
        i += 1
    if cat(i) in ("Nu", "Nn"):
        i += 1
    if cat(i) is not None and word(i) in ("cái", "chiếc"):
        i += 1
    if cat(i) == "Nt":
        i += 1
    core = 0
    while cat(i) in prof.noun_tags:
        i += 1
        core += 1
    if core == 0:
        return 0
    if cat(i) in prof.adj_tags:
        i += 1
    if cat(i) is not None and word(i) in ("này", "kia", "ấy", "đó"):
        i += 1
    return i - start


def _np_match_en(doc: Document, stream: list[Annotation], start: int,
                 prof: LanguageProfile) -> int:
    """DT? JJ* (NN|NNS|NNP|NNPS|CD)+"""
    i = start

    def cat(k: int) -> Optional[str]:
        if k >= len(stream) or _excluded_from_np(stream[k]):
            return None
        return stream[k].feature("category")

    if cat(i) in prof.det_tags:
        i += 1
    while cat(i) in prof.adj_tags:
        i += 1
    core = 0
    while cat(i) in (prof.noun_tags | prof.numeral_tags):
        i += 1
        core += 1
    if core == 0:
        return 0
    return i - start


def chunk_noun_phrases(doc: Document, language: str,
                       dictionary: Optional[PhraseTypeDictionary] = None) -> Document:
    """Post NounPhrase annotations (maximal munch, leftmost, non-overlapping).

    For Vietnamese each phrase also gets a ``type`` feature (Concept/Entity)
    when a dictionary is supplied; the English layers carry no type feature.
    """
    prof = profile(language)
    stream = top_tokens(doc, prof)
    matcher = _np_match_vi if prof.code == "vi" else _np_match_en
    i = 0
    while i < len(stream):
        length = matcher(doc, stream, i, prof)
        if length == 0:
            i += 1
            continue
        span = Span(stream[i].span.start, stream[i + length - 1].span.end)
        np_id = doc.add("NounPhrase", span)
        if prof.code == "vi":
            classify_phrase_type(doc, np_id, dictionary or PhraseTypeDictionary(), language)
        i += length
    return doc


def classify_phrase_type(doc: Document, np_id: int,
                         dictionary: PhraseTypeDictionary, language: str) -> str:
    """Concept/Entity decision for one noun phrase; sets its ``type`` feature.

    A proper noun or three-plus single nouns make an entity; a lone noun makes
    a concept; otherwise the dictionary decides (hit = concept).
    """
    prof = profile(language)
    np = doc.get(np_id)
    nouns = 0
    proper = False
    for ann in top_tokens(doc, prof):
        if ann.span.start < np.span.start or ann.span.end > np.span.end:
            continue
        cat = ann.feature("category") or ""
        if cat in prof.proper_tags:
            proper = True
        if cat in prof.noun_tags and cat not in prof.numeral_tags:
            nouns += 1
    if proper or nouns >= 3:
        value = "Entity"
    elif nouns == 1:
        value = "Concept"
    else:
        value = "Concept" if doc.covered_text(np_id) in dictionary else "Entity"
    np.features["type"] = value
    return value


# ---------------------------------------------------------------------------
# Question phrases
# ---------------------------------------------------------------------------


def _np_starting_at(doc: Document, offset: int) -> Optional[Annotation]:
    hits = doc.at(offset, "NounPhrase")
    return hits[0] if hits else None


def _next_content_offset(doc: Document, end: int) -> int:
    pos = end
    while pos < len(doc.text) and doc.text[pos].isspace():
        pos += 1
    return pos


def mark_question_phrases(doc: Document, language: str) -> Document:
    """Build QuestionPhrase annotations with a ``category`` feature.

    Question-word units combine with an adjacent noun phrase where their
    category asks for one (List/ManyClass style); "nào"/"gì" attach to the
    preceding noun phrase; English aux-initial questions yield a yes/no
    phrase over the leading auxiliary.
    """
    prof = profile(language)
    stream = top_tokens(doc, prof)
    for position, ann in enumerate(stream):
        qcat = ann.feature(QWORD_FEATURE)
        if qcat is None:
            continue
        if prof.code == "en" and (ann.feature("category") or "") == "DT":
            continue  # "that" as a determiner is not a question trigger
        if qcat == "YesNo" and prof.code == "en" and position != 0:
            continue
        following = _np_starting_at(doc, _next_content_offset(doc, ann.span.end))
        if qcat == "Entity":
            continue  # handled from the noun-phrase side below
        if qcat in ("List", "QU-listClass"):
            if following is None:
                continue
            doc.add("QuestionPhrase", Span(ann.span.start, following.span.end),
                    {"category": "QU-listClass" if prof.code == "en" else "List"})
            continue
        if qcat in ("Many", "QU-howmany"):
            if following is not None:
                label = "QU-howmany" if prof.code == "en" else "ManyClass"
                doc.add("QuestionPhrase", Span(ann.span.start, following.span.end),
                        {"category": label})
            else:
                label = "QU-howmany" if prof.code == "en" else "Many"
                doc.add("QuestionPhrase", ann.span, {"category": label})
            continue
        if prof.code == "en" and following is not None and qcat != "YesNo":
            doc.add("QuestionPhrase", Span(ann.span.start, following.span.end),
                    {"category": qcat})
        else:
            doc.add("QuestionPhrase", ann.span, {"category": qcat})

    if prof.code == "vi":
        for np in doc.annotations("NounPhrase"):
            nxt = _next_content_offset(doc, np.span.end)
            for tok in doc.at(nxt, prof.base_type):
                if tok.feature(QWORD_FEATURE) == "Entity":
                    doc.add("QuestionPhrase", Span(np.span.start, tok.span.end),
                            {"category": "Entity"})
                    break
    return doc


# ---------------------------------------------------------------------------
# Runs and relations
# ---------------------------------------------------------------------------


def mark_runs(doc: Document, language: str) -> Document:
    """Post Noun/Verb/Preps annotations over maximal same-class token runs."""
    prof = profile(language)
    stream = [a for a in top_tokens(doc, prof) if not _is_comparison(a)]
    classes = (("Noun", prof.noun_tags), ("Verb", prof.verb_tags), ("Preps", prof.prep_tags))
    for type_name, tags in classes:
        i = 0
        while i < len(stream):
            if (stream[i].feature("category") or "") in tags:
                j = i
                while j + 1 < len(stream) and (stream[j + 1].feature("category") or "") in tags:
                    j += 1
                doc.add(type_name, Span(stream[i].span.start, stream[j].span.end))
                i = j + 1
            else:
                i += 1
    return doc


def _relation_match(doc: Document, stream: list[Annotation], start: int,
                    prof: LanguageProfile) -> int:
    """Stream-token length of the longest relation phrase at ``start``.

    Patterns, longest preferred:
      1. Verb+ NounPhrase[Concept] Prep Verb?
      2. Verb+ (Prep Verb?)?
      3. (have|Verb)+ Adj Prep Verb?
      4. have (NounPhrase[Concept] | Adj) copula
    English noun phrases carry no type feature, so pattern 1 and 4 accept any
    noun phrase there.
    """
    def usable(k: int) -> bool:
        return k < len(stream) and not _is_comparison(stream[k])

    def cat(k: int) -> Optional[str]:
        return stream[k].feature("category") if usable(k) else None

    def word(k: int) -> str:
        return " ".join(doc.covered_text(stream[k].id).split()).casefold()

    def is_verb(k: int) -> bool:
        return cat(k) in prof.verb_tags

    def is_have(k: int) -> bool:
        return usable(k) and word(k) in prof.have_words

    def concept_np_at(k: int) -> Optional[int]:
        """Stream index just past a concept noun phrase starting at token k."""
        if not usable(k):
            return None
        np = _np_starting_at(doc, stream[k].span.start)
        if np is None:
            return None
        np_type = np.feature("type")
        if prof.code == "vi" and np_type != "Concept":
            return None
        j = k
        while j < len(stream) and stream[j].span.end <= np.span.end:
            j += 1
        return j

    best = 0

    # patterns 1 and 2 share the verb head
    if is_verb(start):
        i = start
        while is_verb(i):
            i += 1
        verbs_end = i
        # pattern 1
        after_np = concept_np_at(verbs_end)
        if after_np is not None and cat(after_np) in prof.prep_tags:
            j = after_np + 1
            if is_verb(j):
                j += 1
            best = max(best, j - start)
        # pattern 2
        j = verbs_end
        if cat(j) in prof.prep_tags:
            j += 1
            if is_verb(j):
                j += 1
        best = max(best, j - start)

    # pattern 3
    if is_have(start) or is_verb(start):
        i = start
        while is_have(i) or is_verb(i):
            i += 1
        if cat(i) in prof.adj_tags and cat(i + 1) in prof.prep_tags:
            j = i + 2
            if is_verb(j):
                j += 1
            best = max(best, j - start)

    # pattern 4
    if is_have(start):
        after = concept_np_at(start + 1)
        if after is None and cat(start + 1) in prof.adj_tags:
            after = start + 2
        if after is not None and usable(after) and word(after) in prof.copula_words:
            best = max(best, after + 1 - start)

    return best


def mark_relations(doc: Document, language: str) -> Document:
    """Post Relation annotations, longest-first, non-overlapping."""
    prof = profile(language)
    stream = top_tokens(doc, prof)
    i = 0
    while i < len(stream):
        length = _relation_match(doc, stream, i, prof)
        if length == 0:
            i += 1
            continue
        doc.add("Relation", Span(stream[i].span.start, stream[i + length - 1].span.end))
        i += length
    return doc


# ---------------------------------------------------------------------------
# Whole pipeline
# ---------------------------------------------------------------------------


@dataclass
class Pipeline:
    """All layers in order, bound to one language and its resources."""

    language: str
    lexicon: list[LexiconEntry]
    dictionary: PhraseTypeDictionary

    def __post_init__(self):
        self.prof = profile(self.language)
        self._word_list = [e.surface for e in self.lexicon
                           if e.kind == "word" and " " in e.surface]

    def annotate(self, question: str, pretagged: bool = False) -> Document:
        if pretagged:
            doc = parse_pretagged(question, self.language)
        else:
            doc = tokenize(question, self.language, self._word_list)
        pos_tag(doc, self.lexicon, self.language)
        mark_lexical_units(doc, self.lexicon, self.language)
        chunk_noun_phrases(doc, self.language, self.dictionary)
        mark_question_phrases(doc, self.language)
        mark_relations(doc, self.language)
        if self.language == "en":
            mark_runs(doc, self.language)
        return doc
