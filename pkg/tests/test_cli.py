import json
from pathlib import Path

from netccs.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
CHOICE_SYNC = str(FIXTURES / "choice_sync.pn")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_choice_sync(capsys):
    code, out, _ = run(capsys, "classify", CHOICE_SYNC)
    assert code == 0
    assert "ccs_net: true" in out
    assert "free_choice: false" in out


def test_classify_group_choice_flag(capsys):
    code, out, _ = run(capsys, "classify", str(FIXTURES / "overlap.pn"))
    assert code == 0
    assert "group_choice: false" in out


def test_classify_parse_failure_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.pn"
    bad.write_text("place p1\narc p1 zz\n")
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and "zz" in err


def test_classify_empty_net(tmp_path, capsys):
    empty = tmp_path / "empty.pn"
    empty.write_text("")
    code, out, _ = run(capsys, "classify", str(empty))
    assert code == 0
    assert "workflow: false" in out
    assert "free_choice: true" in out
    assert "2tau_sync: true" in out


def test_encode_golden_bytes(tmp_path, capsys):
    out_file = tmp_path / "choice_sync.ccs"
    code, _, _ = run(capsys, "encode", CHOICE_SYNC, "--out", str(out_file))
    assert code == 0
    assert out_file.read_text() == (FIXTURES / "choice_sync_golden.ccs").read_text()


def test_encode_generator_contains_respawn_equation(capsys):
    code, out, _ = run(capsys, "encode", str(FIXTURES / "generator.pn"), "--class", "2tau")
    assert code == 0
    assert "X_t1 = b.(X_t1 | X_p1)" in out.splitlines()


def test_encode_class_mismatch_exit_2(capsys):
    code, _, err = run(capsys, "encode", str(FIXTURES / "overlap.pn"))
    assert code == 2
    assert "overlap" in err or "class" in err


def test_encode_explicit_class_mismatch(capsys):
    code, _, err = run(capsys, "encode", str(FIXTURES / "generator.pn"), "--class", "ccs")
    assert code == 2


def test_lts_choice_sync_aut(capsys):
    code, out, _ = run(capsys, "lts", CHOICE_SYNC)
    assert code == 0
    assert out.startswith("des (0, 7, 7)")


def test_lts_deadlocked_net(tmp_path, capsys):
    src = tmp_path / "dead.pn"
    src.write_text("place p1\ntransition t1 label a\narc p1 t1\n")
    code, out, _ = run(capsys, "lts", str(src))
    assert code == 0
    assert out == "des (0, 0, 1)\n"


def test_lts_cap_exit_3(capsys):
    code, _, err = run(capsys, "lts", str(FIXTURES / "generator.pn"), "--max-states", "5")
    assert code == 3 and "cap" in err


def test_lts_ccs_input(capsys):
    code, out, _ = run(capsys, "lts", str(FIXTURES / "choice_sync_golden.ccs"), "--ccs")
    assert code == 0
    assert out.startswith("des (0, 7, 7)")


def test_check_choice_sync_strong_exit_0(capsys):
    code, out, _ = run(capsys, "check", CHOICE_SYNC, "--relation", "strong")
    assert code == 0
    assert "strong: true" in out


def test_check_workflow_weak_divergence(capsys):
    code, out, _ = run(capsys, "check", str(FIXTURES / "workflow.pn"), "--relation", "weak", "--divergence")
    assert code == 0
    assert "weak: true" in out and "divergence_match: true" in out


def test_check_corrupted_encoding_exit_1(capsys):
    code, out, _ = run(
        capsys, "check", CHOICE_SYNC, "--against", str(FIXTURES / "choice_sync_corrupted.ccs"), "--relation", "weak"
    )
    assert code == 1
    assert "weak: false" in out
    assert "distinguisher:" in out


def test_check_json_schema_stable(capsys):
    code, out, _ = run(capsys, "check", CHOICE_SYNC, "--relation", "strong", "--divergence", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert sorted(report) == [
        "classification",
        "command",
        "encoding",
        "input",
        "lts",
        "pipeline",
        "timing",
        "transform",
        "verdicts",
    ]
    assert report["pipeline"] == "ccs"
    assert report["verdicts"] == {
        "strong": True,
        "divergence_before": False,
        "divergence_after": False,
        "divergence_match": True,
        "distinguisher": None,
    }
    assert report["lts"] == {"net_states": 7, "net_edges": 7, "ccs_states": 7, "ccs_edges": 7}
    assert report["encoding"] == {"equations": 3, "restricted": 1, "symbols": 20}
    # digests pin the fixture bytes; timing keys are stable even if values vary
    assert len(report["input"]["sha256"]) == 64
    assert sorted(report["timing"]) == ["check", "classify", "encode", "lts", "parse"]


def test_check_seed_flag_runs_randomised_policy(capsys):
    code, out, _ = run(capsys, "check", str(FIXTURES / "workflow.pn"), "--seed", "5")
    assert code == 0
    assert "weak: true" in out


def test_encode_json_includes_ccs_text(capsys):
    code, out, _ = run(capsys, "encode", CHOICE_SYNC, "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["ccs"] == (FIXTURES / "choice_sync_golden.ccs").read_text()
    assert report["encoding"]["equations"] == 3


def test_bench_writes_csv_and_figure(tmp_path, capsys):
    code, out, _ = run(
        capsys, "bench", "--sizes", "5", "10", "20", "--repeats", "2", "--out-dir", str(tmp_path)
    )
    assert code == 0
    csv_text = (tmp_path / "scaling.csv").read_text()
    assert csv_text.splitlines()[0] == "size,net_size,symbols,equations,seconds"
    assert len(csv_text.splitlines()) == 4
    assert (tmp_path / "scaling.png").stat().st_size > 0
