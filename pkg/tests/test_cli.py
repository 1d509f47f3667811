import json

from tlfunctor.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_idempotent_and_pole(capsys):
    code, out, _ = run(capsys, "idempotent", "--r", "3", "--ring", "generic", "f", "2")
    assert code == 0 and "2 terms" in out
    code, _, err = run(capsys, "idempotent", "--r", "3", "--ring", "root", "f", "3")
    assert code == 2 and "specialize" in err


def test_even_level_is_a_usage_error(capsys):
    code, _, _ = run(capsys, "verify", "--r", "4", "--suite", "scalars")
    assert code == 2


def test_unknown_suite_is_a_usage_error(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "nonsense")
    assert code == 2


def test_verify_exit_zero_on_success(capsys):
    code, out, _ = run(capsys, "verify", "--r", "3", "--suite", "scalars", "--format", "json")
    assert code == 0 and json.loads(out)["ok"]


def test_hom_and_fullness(capsys):
    code, out, _ = run(capsys, "hom", "--r", "3", "2", "2")
    assert code == 0 and out.strip().endswith("2")
    code, out, _ = run(capsys, "fullness", "--r", "3", "5", "1")
    assert code == 0 and out.startswith("FULL")


def test_eval_and_parse_errors(capsys):
    code, out, _ = run(capsys, "eval", "--r", "3", "--format", "json", "p+ ; i+")
    assert code == 0 and json.loads(out)["rank"] == 3
    code, _, err = run(capsys, "eval", "--r", "3", "p+ ; p+")
    assert code == 2 and "position" in err


def test_out_file(tmp_path, capsys):
    path = tmp_path / "g3.json"
    code, _, _ = run(capsys, "idempotent", "g", "3", "--format", "json", "--out", str(path))
    assert code == 0 and json.loads(path.read_text())["source"] == 3
