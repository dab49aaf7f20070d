import io
import json
import shutil
from pathlib import Path

import pytest

from arrlog.cli import RunConfig, main, run, run_corpus

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run_json(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_derivations_starplus(capsys):
    code, obj = run_json(capsys, "derivations", str(CORPUS / "starplus.arr"))
    assert code == 0
    assert obj["schema"] == 1 and obj["degrees"] == [1, 3, 3, 4]


def test_charpoly_star7(capsys):
    code, obj = run_json(capsys, "charpoly", str(CORPUS / "star7.arr"))
    assert obj["coefficients"] == [-9, 15, -7, 1]


def test_graph_analyze_bipartite12(capsys):
    code, obj = run_json(capsys, "graph-analyze", str(CORPUS / "bipartite12.graph"))
    assert code == 0 and obj["tri"] == 6 and obj["t"] == 6


def test_rationals_are_strings(capsys):
    code, obj = run_json(capsys, "derivations", str(CORPUS / "square.arr"), "--emit-generators")
    coeff = obj["generators"][0]["coeffs"][0][0][1]
    assert isinstance(coeff, str) and "/" in coeff


def test_json_is_byte_identical(capsys):
    main(["hyp-analyze", str(CORPUS / "starplus.arr"), "--json"])
    first = capsys.readouterr().out
    main(["hyp-analyze", str(CORPUS / "starplus.arr"), "--json"])
    assert capsys.readouterr().out == first


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.arr"
    p.write_text("dim 3\n1 0 x\n")
    assert main(["charpoly", str(p)]) == 1
    assert "line 2, column 5" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["charpoly", str(tmp_path / "none.arr")]) == 1


def test_truncation_warning(capsys):
    code = main(["derivations", str(CORPUS / "starplus.arr"), "--max-degree", "2"])
    assert code == 0
    assert "truncated" in capsys.readouterr().err


def test_negative_max_degree_rejected():
    with pytest.raises(ValueError):
        RunConfig("derivations", "x", max_degree=-1)


def test_addition_command(capsys):
    code, obj = run_json(capsys, "addition", str(CORPUS / "square.arr"), "--hyperplane", "1,-1,0",
                         "--max-degree", "6")
    assert code == 0 and obj["degrees"] == [1, 2, 2, 3] and obj["verified_up_to"] == 6


def test_addition_condition_error(capsys):
    code = main(["addition", str(CORPUS / "square.arr"), "--hyperplane", "1 0 0"])
    assert code == 1
    assert "(1)" in capsys.readouterr().err


def test_freeness_with_deletion_criterion(capsys):
    code, obj = run_json(capsys, "freeness", str(CORPUS / "star7.arr"), "--hyperplane", "0,1,0")
    assert obj["deletion_criterion"] == "not_free" and obj["free"] is False


def test_tnumber_crosscheck_seeded(capsys):
    code, obj = run_json(capsys, "tnumber", str(CORPUS / "braid3.arr"), "--crosscheck", "--seed", "4")
    assert code == 0 and obj["t"] == 4 and obj["sampled_min"] >= 4


def test_invariant_failure_exit_code(monkeypatch, capsys):
    import arrlog.cli as cli
    from arrlog.logder import InvariantError

    def boom(a, cfg):
        raise InvariantError("forced")

    monkeypatch.setitem(cli.HANDLERS, "charpoly", boom)
    assert main(["charpoly", str(CORPUS / "star7.arr")]) == 2
    assert "INVARIANT" in capsys.readouterr().err


def test_text_output(capsys):
    main(["charpoly", str(CORPUS / "star7.arr")])
    out = capsys.readouterr().out
    assert "polynomial: t^3 - 7*t^2 + 15*t - 9" in out


def test_empty_corpus_passes(tmp_path, caplog):
    buf = io.StringIO()
    assert run_corpus(str(tmp_path), out=buf) == 0
    assert "empty" in caplog.text


def test_corrupted_expected_is_corpus_error(tmp_path):
    shutil.copy(CORPUS / "b1.arr", tmp_path / "b1.arr")
    (tmp_path / "b1.expected.json").write_text("{oops")
    buf = io.StringIO()
    assert run_corpus(str(tmp_path), out=buf) == 1
    assert "CORPUS-ERROR" in buf.getvalue() and "FAIL " not in buf.getvalue()


def test_mismatch_is_reported(tmp_path):
    shutil.copy(CORPUS / "b1.arr", tmp_path / "b1.arr")
    (tmp_path / "b1.expected.json").write_text(json.dumps(
        {"schema": 1, "checks": [{"command": "derivations", "expect": {"degrees": [1, 2, 2, 3]}}]}))
    buf = io.StringIO()
    assert run_corpus(str(tmp_path), out=buf) != 0
    assert "FAIL" in buf.getvalue()


def test_missing_expected_file(tmp_path):
    shutil.copy(CORPUS / "b1.arr", tmp_path / "b1.arr")
    buf = io.StringIO()
    assert run_corpus(str(tmp_path), out=buf) == 1


def test_full_corpus_passes():
    buf = io.StringIO()
    code = run(RunConfig("corpus", str(CORPUS)), out=buf)
    assert code == 0, buf.getvalue()
    assert "checks passed" in buf.getvalue()


def test_named_examples_ship():
    names = {p.name for p in CORPUS.iterdir()}
    for want in ("starplus.arr", "star7.arr", "bipartite12.graph", "square.arr", "square_diag.arr",
                 "braid3.arr", "b1.arr", "b4.arr", "generic4.arr", "generic6.arr", "fivevertex.graph"):
        assert want in names
