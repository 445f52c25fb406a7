"""Command line: analyze, answer, kb add-rule, kb stats, eval, serve.

Every subcommand takes --config (engine configuration JSON), --lang to pick
a bundled fixture configuration instead, and --pretagged when the question
is given in word/TAG form. Exit codes: 0 success, 1 usage error, 2 data
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .answering import AnswerError, PendingAnswer, UnsupportedComparisonError
from .engine import ConfigError, Engine
from .mapping import MappingError
from .patterns import RuleSemanticError, RuleSyntaxError
from .scrdr import ConsistencyError, KnowledgeBaseError, RuleRejectedError

FIXTURES = Path(__file__).parent / "fixtures"

USAGE_ERROR = 1
DATA_ERROR = 2


def _engine(args) -> Engine:
    if args.config:
        return Engine.from_config_file(args.config)
    return Engine.from_config_file(FIXTURES / f"config_{args.lang}.json")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="engine configuration JSON")
    parser.add_argument("--lang", choices=("vi", "en"), default="vi",
                        help="bundled configuration to use when --config is absent")
    parser.add_argument("--pretagged", action="store_true",
                        help="the question is given as word/TAG tokens")
    parser.add_argument("--json", action="store_true", help="machine-readable output")


def cmd_analyze(args) -> int:
    engine = _engine(args)
    outcome = engine.analyze(args.question, pretagged=args.pretagged or None)
    if args.json:
        print(json.dumps(outcome.to_dict(), ensure_ascii=False, indent=1))
        return 0
    print("path:", "-".join(f"({n})" for n in outcome.path))
    print("last fired:", outcome.last_fired)
    if outcome.ir is None:
        print("unanalyzed: no rule concluded (add an exception rule)")
        return 0
    print("structure:", outcome.ir.structure)
    for t in outcome.ir.tuples:
        slots = [t.sub_structure, t.category, t.term1, t.relation, t.term2, t.term3]
        print(" tuple:", ", ".join(s if s is not None else "?" for s in slots))
    return 0


def cmd_answer(args) -> int:
    engine = _engine(args)
    choices: dict[str, str] = {}
    preselected = list(args.choose or [])
    while True:
        try:
            result = engine.answer(args.question, pretagged=args.pretagged or None,
                                   choices=choices)
        except (MappingError, AnswerError, UnsupportedComparisonError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return DATA_ERROR
        if not isinstance(result, PendingAnswer):
            break
        if preselected:
            selection = preselected.pop(0)
        elif sys.stdin.isatty():
            print(f"ambiguous {result.slot}; choose one of:")
            for i, name in enumerate(result.candidates, 1):
                print(f"  {i}. {name}")
            raw = input("> ").strip()
            selection = (result.candidates[int(raw) - 1]
                         if raw.isdigit() and 1 <= int(raw) <= len(result.candidates)
                         else raw)
        else:
            print("error: ambiguous mapping needs --choose "
                  + " | ".join(result.candidates), file=sys.stderr)
            return DATA_ERROR
        if selection not in result.candidates:
            print(f"error: {selection!r} is not among the candidates", file=sys.stderr)
            return DATA_ERROR
        choices[result.key] = selection
    if args.json:
        print(json.dumps(result.to_dict(), ensure_ascii=False, indent=1))
    else:
        print(result.text)
    return 0


def cmd_kb_add_rule(args) -> int:
    engine = _engine(args)
    conclusion = None
    if args.conclusion:
        source = Path(args.conclusion)
        text = source.read_text(encoding="utf-8") if source.exists() else args.conclusion
        conclusion = json.loads(text)
    try:
        report = engine.add_exception(
            case_question=args.question,
            rule_text=args.rule_text,
            extra=tuple(args.extra or ()),
            conclusion=conclusion,
            pretagged=args.pretagged or None,
            dry_run=args.dry_run,
        )
    except RuleSyntaxError as exc:
        print(f"rule parse error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (RuleSemanticError, RuleRejectedError, ConsistencyError,
            KnowledgeBaseError, ValueError) as exc:
        print(f"rule rejected: {exc}", file=sys.stderr)
        return DATA_ERROR
    if args.json:
        print(json.dumps(report, ensure_ascii=False, indent=1))
    else:
        print(f"node {report['node_id']} added; path now "
              + "-".join(f"({n})" for n in report["path"]))
    return 0


def cmd_kb_stats(args) -> int:
    engine = _engine(args)
    stats = engine.stats()
    if args.json:
        print(json.dumps(stats, ensure_ascii=False, indent=1))
        return 0
    print(f"language: {stats['language']}")
    print(f"nodes: {stats['nodes']} ({stats['exception_rules']} exception rules)")
    print("rules per exception layer:")
    for layer, count in stats["layers"].items():
        print(f"  layer {layer}: {count}")
    print("rules per question structure:")
    for structure, count in stats["structures"].items():
        print(f"  {structure}: {count}")
    return 0


def cmd_eval(args) -> int:
    engine = _engine(args)
    corpus = args.corpus or str(FIXTURES / "corpus_examples.jsonl")
    try:
        report = engine.corpus_eval(corpus)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    if args.json:
        print(json.dumps(report, ensure_ascii=False, indent=1))
        return 0
    for result in report["results"]:
        mark = "PASS" if result["ok"] else "FAIL"
        print(f"{mark} {result['id']}")
        for diff in result["diffs"]:
            print(f"     {diff}")
    print(f"passed {report['passed']} of {report['total']}")
    print("per question structure:")
    for structure, bucket in sorted(report["structures"].items()):
        print(f"  {structure}: {bucket['passed']}/{bucket['total']}")
    print("rules per exception layer:")
    for layer, count in report["layers"].items():
        print(f"  layer {layer}: {count}")
    return 0 if report["failed"] == 0 else DATA_ERROR


def cmd_serve(args) -> int:
    from .service import serve

    engine = _engine(args)
    serve(engine, args.host, args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdrqa",
        description="Ontology-based question answering over a ripple-down-rules "
                    "analysis knowledge base",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a question into its query tuples")
    _common(p)
    p.add_argument("question")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("answer", help="answer a question against the ontology")
    _common(p)
    p.add_argument("question")
    p.add_argument("--choose", action="append",
                   help="pre-recorded selection for an ambiguous slot (repeatable)")
    p.set_defaults(func=cmd_answer)

    kb = sub.add_parser("kb", help="knowledge-base operations")
    kb_sub = kb.add_subparsers(dest="kb_command", required=True)

    p = kb_sub.add_parser("add-rule", help="insert an exception rule for a question")
    _common(p)
    p.add_argument("--question", required=True, help="the mis-analyzed question")
    p.add_argument("--rule-text", required=True, help="condition --> postings")
    p.add_argument("--extra", action="append", help="hasAnno constraint (repeatable)")
    p.add_argument("--conclusion", help="conclusion template JSON (inline or a file)")
    p.add_argument("--dry-run", action="store_true",
                   help="report placement and consistency without committing")
    p.set_defaults(func=cmd_kb_add_rule)

    p = kb_sub.add_parser("stats", help="layer and structure histograms")
    _common(p)
    p.set_defaults(func=cmd_kb_stats)

    p = sub.add_parser("eval", help="evaluate analysis against an expected-IR corpus")
    _common(p)
    p.add_argument("--corpus", help="JSONL corpus path (defaults to the bundled worked examples)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    _common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
