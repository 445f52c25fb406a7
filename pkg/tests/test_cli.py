import json
import shutil
from pathlib import Path

import pytest

from rdrqa.cli import main

FIXTURES = Path(__file__).parent.parent / "src" / "rdrqa" / "fixtures"

AND_Q = ("Liệt_kê/Eq tất_cả/Pn sinh_viên/Nc học/Vv lớp/Nc K50/Np khoa_học/Nc "
         "máy_tính/Nc mà/Cc có/Vv quê/Nc ở/Cm Hà_Nội/Np")
DISAMB_Q = ("Liệt_kê/Eq tất_cả/Pn các/Nt sinh_viên/Nc học/Vv lớp/Nc khoa_học/Nc "
            "máy_tính/Nc")


@pytest.fixture()
def scratch_config(tmp_path):
    for name in ("ontology_university.json", "lexicon_vi.tsv", "kb_vi.json"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "language": "vi", "kb": "kb_vi.json",
        "ontology": "ontology_university.json",
        "lexicon": "lexicon_vi.tsv", "threshold": 0.7,
    }), encoding="utf-8")
    return config


def test_analyze_prints_tuples(capsys):
    code = main(["analyze", "--lang", "vi", "--pretagged", AND_Q])
    out = capsys.readouterr().out
    assert code == 0
    assert "structure: And" in out
    assert "sinh viên, học, lớp K50 khoa học máy tính" in out


def test_analyze_json_mode(capsys):
    code = main(["analyze", "--lang", "vi", "--pretagged", "--json", AND_Q])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ir"]["structure"] == "And"
    assert payload["last_fired"] == 2


def test_answer_direct(capsys):
    code = main(["answer", "--lang", "vi", "--pretagged", AND_Q])
    out = capsys.readouterr().out
    assert code == 0
    assert "Lê Văn Cường" in out and "Nguyễn Văn An" in out


def test_answer_with_preselected_choice(capsys):
    code = main([
        "answer", "--lang", "vi", "--pretagged", DISAMB_Q,
        "--choose", "lớp K50 khoa học máy tính",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "Trần Thị Bình" in out


def test_answer_ambiguous_without_choice_is_data_error(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin.isatty", lambda: False)
    code = main(["answer", "--lang", "vi", "--pretagged", DISAMB_Q])
    err = capsys.readouterr().err
    assert code == 2
    assert "ambiguous" in err


def test_kb_stats_histograms(capsys):
    code = main(["kb", "stats", "--lang", "en", "--json"])
    assert code == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["layers"] == {"1": 3, "2": 5, "3": 2, "4": 1, "5": 1}


def test_eval_pass_line_per_question(capsys):
    code = main(["eval", "--lang", "vi"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") >= 7
    assert "FAIL" not in out
    assert "per question structure:" in out


def test_kb_add_rule_dry_run(capsys, scratch_config):
    conclusion = json.dumps({"structure": "Normal", "tuples": [[
        "X10_.category1", "X10_QP.QuestionPhrase.category",
        "X10_QP", "X10_Rel", "X10_NP", "?",
    ]]})
    code = main([
        "kb", "add-rule", "--config", str(scratch_config),
        "--question", "Tìm/Eq các/Nt giảng_viên/Nc giảng_dạy/Vv lớp/Nc K50/Np "
                      "khoa_học/Nc máy_tính/Nc",
        "--pretagged",
        "--rule-text",
        '(({QuestionPhrase.category == "List"}):qp '
        '({Relation.string == "giảng dạy"}):rel ({NounPhrase}):np):left '
        '--> :left.X10_ = {category1 = "Normal"}, :qp.X10_QP = {}, '
        ":rel.X10_Rel = {}, :np.X10_NP = {}",
        "--conclusion", conclusion,
        "--dry-run", "--json",
    ])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["dry_run"] is True
    assert report["after"]["tuples"][0]["t1"] == "giảng viên"


def test_kb_add_rule_parse_error_exit_2(capsys, scratch_config):
    code = main([
        "kb", "add-rule", "--config", str(scratch_config),
        "--question", DISAMB_Q, "--pretagged",
        "--rule-text", "(({A}):x):left --> x.B = {}",
    ])
    assert code == 2
    assert "parse error" in capsys.readouterr().err


def test_usage_error_exit_1():
    assert main(["no-such-command"]) == 1


def test_bad_config_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    missing.write_text("{}", encoding="utf-8")
    code = main(["analyze", "--config", str(missing), "hello"])
    assert code == 2
