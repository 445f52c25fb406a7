"""Regenerate the shipped seed knowledge bases.

Run as ``python -m rdrqa.fixtures_build`` after changing seed rules. The
test suite replays the same seeds and asserts the shipped files match
node for node, so the fixtures can never drift from the insertion
algorithm that claims to have produced them.
"""

from __future__ import annotations

from pathlib import Path

from .ontology import load_ontology
from .pipeline import Pipeline, PhraseTypeDictionary, load_lexicon
from .scrdr import persist_kb
from .seeds import replay

FIXTURES = Path(__file__).parent / "fixtures"


def build_pipeline(language: str) -> Pipeline:
    ontology = load_ontology(FIXTURES / "ontology_university.json")
    lexicon = load_lexicon(FIXTURES / f"lexicon_{language}.tsv")
    return Pipeline(language, lexicon, PhraseTypeDictionary.from_ontology(ontology))


def build_seed_kb(language: str):
    pipeline = build_pipeline(language)
    return replay(language, lambda text: pipeline.annotate(text, pretagged=True))


def main() -> None:
    for language in ("en", "vi"):
        kb = build_seed_kb(language)
        target = FIXTURES / f"kb_{language}.json"
        persist_kb(kb, target)
        print(f"wrote {target} ({len(kb.nodes)} nodes)")


if __name__ == "__main__":
    main()
