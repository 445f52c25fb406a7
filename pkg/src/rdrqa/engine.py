"""Engine facade: configuration, analysis, answering, KB editing, evaluation.

One Engine owns a language pipeline, a knowledge base, and an ontology. The
service and the command line are thin shells over this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .annotations import Document
from .answering import Answer, PendingAnswer, answer_ir
from .ir import ConclusionTemplate, IntermediateRepresentation, ir_matches
from .lang import profile
from .mapping import DEFAULT_THRESHOLD
from .ontology import Ontology, load_ontology
from .pipeline import Pipeline, PhraseTypeDictionary, load_lexicon
from .scrdr import KnowledgeBase, Rule, load_kb, persist_kb


class ConfigError(Exception):
    """Invalid or incomplete engine configuration."""


@dataclass
class EngineConfig:
    language: str
    kb_path: Path
    ontology_path: Path
    lexicon_path: Path
    synonyms_path: Optional[Path] = None
    threshold: float = DEFAULT_THRESHOLD

    @classmethod
    def load(cls, path: str | Path) -> "EngineConfig":
        base = Path(path).parent
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc

        def resolve(name: str, required: bool = True) -> Optional[Path]:
            value = data.get(name)
            if value is None:
                if required:
                    raise ConfigError(f"config lacks {name!r}")
                return None
            candidate = Path(value)
            if not candidate.is_absolute():
                candidate = base / candidate
            if not candidate.exists():
                raise ConfigError(f"{name} file does not exist: {candidate}")
            return candidate

        language = data.get("language")
        if language not in ("vi", "en"):
            raise ConfigError("config language must be 'vi' or 'en'")
        threshold = float(data.get("threshold", DEFAULT_THRESHOLD))
        if not 0.0 < threshold <= 1.0:
            raise ConfigError("threshold must lie in (0, 1]")
        return cls(
            language=language,
            kb_path=resolve("kb"),
            ontology_path=resolve("ontology"),
            lexicon_path=resolve("lexicon"),
            synonyms_path=resolve("synonyms", required=False),
            threshold=threshold,
        )


@dataclass
class AnalysisOutcome:
    ir: Optional[IntermediateRepresentation]
    path: list[int]
    last_fired: int
    document: Document

    def to_dict(self) -> dict:
        payload = {
            "ir": self.ir.to_dict() if self.ir else None,
            "unanalyzed": self.ir is None,
            "path": list(self.path),
            "last_fired": self.last_fired,
            "document": self.document.to_dict(),
        }
        return payload


class Engine:
    def __init__(self, config: EngineConfig):
        self.config = config
        self.ontology: Ontology = load_ontology(config.ontology_path)
        lexicon = load_lexicon(config.lexicon_path)
        synonyms: list[str] = []
        if config.synonyms_path is not None:
            synonyms = [
                line.strip()
                for line in Path(config.synonyms_path).read_text(encoding="utf-8").splitlines()
                if line.strip() and not line.startswith("#")
            ]
        # the phrase-type dictionary is regenerated from the loaded ontology
        # at startup, enriched by the user-supplied synonym file
        dictionary = PhraseTypeDictionary.from_ontology(self.ontology, synonyms)
        self.pipeline = Pipeline(config.language, lexicon, dictionary)
        self.kb: KnowledgeBase = load_kb(config.kb_path)
        self.prof = profile(config.language)

    @classmethod
    def from_config_file(cls, path: str | Path) -> "Engine":
        return cls(EngineConfig.load(path))

    # -- documents -------------------------------------------------------------

    def build_document(self, question: str, pretagged: Optional[bool] = None) -> Document:
        if pretagged is None:
            pretagged = looks_pretagged(question)
        return self.pipeline.annotate(question, pretagged=pretagged)

    # -- analysis ----------------------------------------------------------------

    def analyze(self, question: str, pretagged: Optional[bool] = None) -> AnalysisOutcome:
        doc = self.build_document(question, pretagged)
        result = self.kb.evaluate(doc)
        return AnalysisOutcome(
            ir=result.conclusion,
            path=result.path,
            last_fired=result.last_fired,
            document=doc,
        )

    # -- answering ---------------------------------------------------------------

    def answer(
        self,
        question: str,
        pretagged: Optional[bool] = None,
        choices: Optional[dict[str, str]] = None,
    ) -> Answer | PendingAnswer:
        outcome = self.analyze(question, pretagged)
        if outcome.ir is None:
            raise ValueError("question was not analyzed; no rule concluded")
        return answer_ir(
            outcome.ir,
            self.ontology,
            self.config.threshold,
            self.prof,
            choices=choices,
            context=question,
        )

    # -- knowledge acquisition -----------------------------------------------------

    def add_exception(
        self,
        case_question: str,
        rule_text: str,
        extra: tuple[str, ...] = (),
        conclusion: Optional[dict] = None,
        pretagged: Optional[bool] = None,
        dry_run: bool = False,
        persist: bool = True,
    ) -> dict:
        """Insert an exception rule; readers keep the pre-edit tree until the
        new one is persisted and swapped in."""
        template = ConclusionTemplate.from_dict(conclusion) if conclusion else None
        rule = Rule(rule_text, tuple(extra), template)
        before = self.analyze(case_question, pretagged)

        working = KnowledgeBase.from_dict(self.kb.to_dict())
        node_id = working.add_exception(
            rule, case_question, lambda text: self.build_document(text)
        )
        case_doc = self.build_document(case_question, pretagged)
        after = working.evaluate(case_doc)
        cornerstones = []
        for node in working.nodes.values():
            if node.cornerstone is None or node.node_id == node_id:
                continue
            redone = working.evaluate(self.build_document(node.cornerstone))
            cornerstones.append({
                "node": node.node_id,
                "question": node.cornerstone,
                "last_fired": redone.last_fired,
            })
        report = {
            "node_id": node_id,
            "before": before.ir.to_dict() if before.ir else None,
            "after": after.conclusion.to_dict() if after.conclusion else None,
            "path": after.path,
            "cornerstones": cornerstones,
        }
        if dry_run:
            report["dry_run"] = True
            return report
        if persist:
            persist_kb(working, self.config.kb_path)
        self.kb = working
        return report

    # -- reporting ---------------------------------------------------------------

    def stats(self) -> dict:
        return {
            "language": self.kb.language,
            "nodes": len(self.kb.nodes),
            "exception_rules": len(self.kb.nodes) - 1,
            "layers": self.kb.layer_histogram(),
            "structures": self.kb.structure_histogram(),
        }

    def corpus_eval(self, corpus_path: str | Path) -> dict:
        """Run analysis over an expected-IR corpus; exact-match comparison."""
        report = {"total": 0, "passed": 0, "failed": 0, "results": [],
                  "structures": {}, "layers": self.kb.layer_histogram()}
        for line_no, raw in enumerate(
            Path(corpus_path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                item = json.loads(line)
                expected = IntermediateRepresentation.from_dict(item["expected"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"corpus line {line_no}: {exc}") from exc
            if item.get("lang", self.config.language) != self.config.language:
                continue
            report["total"] += 1
            question = item.get("pretagged") or item["question"]
            outcome = self.analyze(question, pretagged="pretagged" in item)
            ok, diffs = ir_matches(expected, outcome.ir, self.prof)
            structure = expected.structure
            bucket = report["structures"].setdefault(structure, {"total": 0, "passed": 0})
            bucket["total"] += 1
            if ok:
                report["passed"] += 1
                bucket["passed"] += 1
            else:
                report["failed"] += 1
            report["results"].append({
                "id": item.get("id", f"line-{line_no}"),
                "question": item["question"],
                "ok": ok,
                "diffs": diffs,
                "actual": outcome.ir.to_dict() if outcome.ir else None,
            })
        return report


def looks_pretagged(question: str) -> bool:
    """Heuristic for the word/TAG wire format."""
    items = question.split()
    return bool(items) and all("/" in item for item in items)
