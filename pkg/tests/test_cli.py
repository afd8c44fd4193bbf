import json

import pytest

from fairnli.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_count_space(capsys):
    code, doc = run(capsys, "count-space", "--n-open", "100", "--seed", "3")
    assert code == 0
    assert int(doc["pairs"]) > 10**26
    assert doc["manifest"]["seed"] == 3 and doc["manifest"]["command"] == "count-space"


def test_gen_prop_and_check_fair(capsys, tmp_path):
    code, doc = run(capsys, "gen-prop", "--out", str(tmp_path))
    assert code == 0 and doc["manifest"]["fair"] is True
    assert doc["baseline_full_space"]["accuracy"] == 1.0
    code, doc = run(capsys, "check-fair", "--tree", str(tmp_path / "prop_tree.txt"), "--train", str(tmp_path / "train.txt"))
    assert code == 0 and doc["fairness"]["fair"] is True
    (tmp_path / "bad.txt").write_text("T ⇒ ε F\n", encoding="utf-8")
    code, doc = run(capsys, "check-fair", "--tree", str(tmp_path / "prop_tree.txt"), "--train", str(tmp_path / "bad.txt"))
    assert code == 1 and doc["fairness"]["unexposed"]


def test_gen_prop_with_ratio(capsys, tmp_path):
    code, doc = run(capsys, "gen-prop", "--out", str(tmp_path), "--ratio", "0.5", "--seed", "2")
    assert code == 0 and doc["manifest"]["source"] == "generated" and doc["manifest"]["fair"]


def test_corpus_commands(capsys, tmp_path):
    out = tmp_path / "c"
    code, doc = run(
        capsys, "gen-nli", "--n-open", "3", "--train", "1500", "--dev", "60", "--test", "60",
        "--seed", "4", "--out", str(out), "--oracle-samples", "5", "--verify",
    )
    assert code == 0 and doc["verification"]["passed"]
    assert doc["manifest"]["seed"] == 4
    code, doc = run(capsys, "check-fair", "--corpus", str(out))
    assert code == 0 and doc["fairness"]["fair"]
    code, doc = run(capsys, "baseline-eval", "--corpus", str(out))
    assert code == 0 and doc["baseline"]["test"]["accuracy"] == 1.0
    code, doc = run(capsys, "stats", "--corpus", str(out))
    assert code == 0 and doc["stats"]["train"]["deviation"]["label"] <= 0.01
    code, doc = run(capsys, "oracle-verify", "--corpus", str(out), "--samples", "5")
    assert code == 0 and doc["summary"]["inconsistent"] == 0


def test_oracle_verify_single_pair(capsys):
    code, doc = run(
        capsys, "oracle-verify",
        "--premise", "some ε snoun_000 ε ε verb_000 some ε onoun_000",
        "--hypothesis", "every ε snoun_000 not ε verb_000 some ε onoun_000",
    )
    assert code == 0 and doc["label"] == "contradiction" and doc["verdict"] == "Contradictory"


def test_missing_arguments():
    with pytest.raises(SystemExit):
        main(["check-fair"])
    with pytest.raises(SystemExit):
        main([])
