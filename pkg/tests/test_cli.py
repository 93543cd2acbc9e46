import json
from pathlib import Path

import pytest

from polyhom.cli import main
from polyhom.errors import ParseError
from polyhom.textfmt import parse, parse_file

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
C4 = str(CORPUS / "c4.ph")
GROUPS = str(CORPUS / "groups.ph")
FP = str(CORPUS / "fp.ph")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line)


def test_inspect_identity(capsys):
    code, out, _ = run(capsys, C4, "inspect", "I")
    f = fields(out)
    assert code == 0
    assert (f["alpha"], f["beta"], f["ker"]) == ("1/1", "1/1", "{0}")


def test_inspect_c4_example(capsys):
    code, out, _ = run(capsys, C4, "inspect", "P")
    f = fields(out)
    assert code == 0
    assert (f["alpha"], f["beta"], f["weight"]) == ("1/2", "1/1", "1/2")
    assert (f["dom"], f["im"], f["ker"], f["indef"]) == ("{0, 1, 2, 3}", "{0, 2}", "{0, 2}", "{0}")


def test_json_mode_mirrors_text(capsys):
    _, text, _ = run(capsys, GROUPS, "inspect", "mixed")
    _, js, _ = run(capsys, "--json", GROUPS, "inspect", "mixed")
    assert json.loads(js) == fields(text)


@pytest.mark.parametrize("path", [C4, GROUPS])
def test_inspect_round_trip(capsys, path):
    session = parse_file(path)
    for name in session.names("polyhom"):
        _, out, _ = run(capsys, path, "inspect", name)
        again = parse(fields(out)["definition"], base=session)
        assert again.lookup("polyhom", name) == session.lookup("polyhom", name)


def test_fp_round_trip(capsys):
    session = parse_file(FP)
    for name in session.names("fppolyhom"):
        _, out, _ = run(capsys, FP, "inspect", name)
        again = parse(fields(out)["definition"], base=session)
        assert again.lookup("fppolyhom", name) == session.lookup("fppolyhom", name)
    _, out, _ = run(capsys, FP, "fp", "chi", "[[1,0,0,1],[0,1,0,0],[1,0,1,0],[0,0,0,1]]", "--split", "1,2,1")
    f = fields(out)
    again = parse(f["window_definition"] + "\n" + f["definition"])
    assert again.lookup("fppolyhom", "chi").alpha == 1 / 2


def test_compose_as(capsys):
    code, out, _ = run(capsys, C4, "compose", "Q", "P", "--as", "QP")
    f = fields(out)
    assert code == 0 and f["name"] == "QP"
    assert (f["alpha"], f["beta"], f["im"]) == ("1/4", "1/1", "{0}")


def test_matrix_formats(capsys):
    _, grid, _ = run(capsys, C4, "matrix", "P")
    assert grid.splitlines()[1].split() == ["0/1", "0/1", "1/2", "0/1"]
    _, csv, _ = run(capsys, C4, "matrix", "P", "--format", "csv")
    assert csv.splitlines()[0] == "1/2,0/1,0/1,0/1"
    _, js, _ = run(capsys, "--json", C4, "matrix", "P")
    assert json.loads(js)["rows"][0] == ["1/2", "0/1", "0/1", "0/1"]


def test_involution_and_decompose(capsys):
    _, out, _ = run(capsys, C4, "involution", "P")
    f = fields(out)
    assert (f["alpha"], f["beta"]) == ("1/1", "1/2")
    code, out, _ = run(capsys, C4, "decompose", "P")
    f = fields(out)
    assert code == 0 and f["recomposes"] == "true"
    assert f["middle.pairs"] == "2"


def test_angle(capsys):
    code, out, _ = run(capsys, GROUPS, "angle", "K_left", "K_left", "K_right", "K_right")
    assert code == 0 and fields(out)["sigma"] == "1/4"
    _, out, _ = run(capsys, GROUPS, "angle", "S3_all", "A3", "swap", "S3_one")
    assert fields(out)["sigma"] == "1/3"
    code, _, err = run(capsys, GROUPS, "angle", "K_all", "K_one", "K_all", "K_one")
    assert code == 2 and "SamePair" in err


def test_fp_commands(capsys):
    code, out, _ = run(capsys, FP, "fp", "theta", "W", "1")
    f = fields(out)
    assert code == 0 and (f["dom_dim"], f["ker_dim"], f["alpha"]) == ("3", "1", "1/1")
    _, out, _ = run(capsys, FP, "fp", "sandwich", "line", "1")
    assert fields(out)["alpha"] == "1/4"
    _, out, _ = run(capsys, FP, "fp", "discrepancy", "shear", "shear", "0", "1")
    assert fields(out)["discrepancy"] == "0/1"
    code, out, _ = run(capsys, FP, "fp", "realize", "shear", "1")
    assert code == 0
    rows = [line.split(" = ")[1] for line in out.splitlines() if line.startswith("witness")]
    assert len(rows) == 4 and all(set(r.split()) <= {"0", "1"} for r in rows)


def test_determinism(capsys):
    first = run(capsys, GROUPS, "compose", "spread", "proj")
    assert run(capsys, GROUPS, "compose", "spread", "proj") == first


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.ph"
    bad.write_text("group C4 = cyclic 4\nsubgroup H in C4 = { 0, 2 \n")
    code, _, err = run(capsys, str(bad), "inspect", "H")
    assert code == 2 and "line 2" in err
    with pytest.raises(ParseError) as info:
        parse("group G = cyclic 4\npolyhom P : G -> G { relation = ; }")
    assert (info.value.line, info.value.column) == (2, 33)


def test_multiline_and_comments():
    s = parse(
        """
        # comment line
        group G = cyclic 4   # trailing comment
        polyhom P : G -> G {
          relation = generated { (1, 2) }
          weight = 1/2
        }
        """
    )
    assert s.lookup("polyhom", "P").alpha == 1 / 2


def test_unbound_and_duplicate_names(tmp_path, capsys):
    bad = tmp_path / "bad.ph"
    bad.write_text("group C4 = cyclic 4\nrelation R : C4 -> C5 = full\n")
    code, _, err = run(capsys, str(bad), "inspect", "R")
    assert code == 2 and "C5" in err
    code, _, err = run(capsys, C4, "inspect", "missing")
    assert code == 2 and "missing" in err
    with pytest.raises(ParseError):
        parse("group G = cyclic 2\ngroup G = cyclic 3")


def test_domain_error_names_the_binding(tmp_path, capsys):
    bad = tmp_path / "bad.ph"
    bad.write_text("group C4 = cyclic 4\npolyhom P : C4 -> C4 { relation = graph [0, 2, 0, 2]; weight = 1 }\n")
    code, _, err = run(capsys, str(bad), "inspect", "P")
    assert code == 2 and "'P'" in err and "DominationViolated" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main([C4, "frobnicate"])
    assert info.value.code == 2


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, C4, "verify", "theta")
    f = fields(out)
    assert code == 0 and f["suites.0.status"] == "pass"


def test_verify_all_quick_on_corpus(capsys):
    code, out, _ = run(capsys, GROUPS, "verify", "all", "--quick")
    statuses = [v for k, v in fields(out).items() if k.endswith(".status")]
    assert code == 0 and len(statuses) == 14 and set(statuses) == {"pass"}
    code, out, _ = run(capsys, FP, "verify", "realization", "--quick")
    assert code == 0
