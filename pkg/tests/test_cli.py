import json

import pytest

from coxbunch.cli import analyze, dump_json, main, parse_document, ParseError
from coxbunch.fans import parse_fan

from conftest import FIXTURES, load


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return FIXTURES / f"{name}.json"


@pytest.mark.parametrize(
    "name,code,needle",
    [
        ("g24_quotient", 0, ""),
        ("nested_bunch", 2, "OverlapViolation"),
        ("polynomial_identity", 2, "FacetConditionFails(1)"),
        ("malformed", 1, ""),
    ],
)
def test_validate_exit_codes(capsys, name, code, needle):
    got, _, err = run(capsys, "validate", fx(name))
    assert got == code
    assert needle in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.json")[0] == 1


def test_unknown_key_rejected():
    with pytest.raises(ParseError):
        parse_document({"class_rank": 1, "degrees": [[1]], "bunch": [], "colour": "red"})


def test_multiplicity_shorthand():
    doc = parse_document(json.loads(fx("g24_plain").read_text()))
    assert doc.presentation.degrees == ((1,),) * 6


def test_analyze_json_g24_quotient(capsys):
    code, out, _ = run(capsys, "analyze", "--json", fx("g24_quotient"))
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == 1
    assert rep["picard"]["index"] == 72
    assert len(rep["cones"]["semiample"]["rays"]) == 6
    assert sum(1 for s in rep["strata"] if s["q_factorial"] and not s["factorial"]) == 5
    # round trip and byte determinism
    assert dump_json(rep) == out
    assert run(capsys, "analyze", "--json", fx("g24_quotient"))[1] == out


def test_analyze_plain_and_text(capsys):
    rep = json.loads(run(capsys, "analyze", "--json", fx("g24_plain"))[1])
    assert rep["dimension"] == 4 and rep["fano"] == "Fano"
    code, out, _ = run(capsys, "analyze", "--text", fx("g24_plain"))
    assert code == 0 and "Fano" in out


def test_analyze_e6(capsys):
    rep = json.loads(run(capsys, "analyze", "--json", fx("e6_surface"))[1])
    assert rep["canonical_class"] == [-2, -3, -4, -4, -5, -6, -3]
    assert len(rep["cones"]["semiample"]["rays"]) == 7
    assert len(rep["ambient_fan"]["maximal_cones"]) == 10


@pytest.mark.parametrize("name", ["g24_quotient", "g24_plain", "e6_surface", "p2"])
def test_fan_reimport(capsys, name):
    code, out, _ = run(capsys, "fan", fx(name))
    assert code == 0
    R, phi = load(name)
    F = parse_fan(out)
    assert len(F) == len(analyze(R, phi)["ambient_fan"]["maximal_cones"])


def test_fan_plain_g24(capsys):
    out = run(capsys, "fan", fx("g24_plain"))[1]
    F = parse_fan(out)
    assert F.ambient_rank == 5 and len(F) == 6


def test_projectivize(capsys, tmp_path):
    target = tmp_path / "proj.json"
    assert run(capsys, "projectivize", fx("g24_quotient"), "-o", target)[0] == 0
    rep = json.loads(run(capsys, "analyze", "--json", target)[1])
    assert rep["projective"] is True
    plain = json.loads(run(capsys, "projectivize", fx("g24_plain"))[1])
    assert plain["bunch"] == [{"face": [1]}]
    assert run(capsys, "projectivize", fx("zero_degree"))[0] == 2


def test_quadric_commands(capsys):
    code, out, _ = run(capsys, "quadric", "rank2", "--side", "left", "--mu", 4, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["dimension"] == 5 and rep["fano"] == "Fano" and rep["smooth"] is True
    code, out, _ = run(capsys, "quadric", "rank1", "--weights", 1, "--mult", 6, "--json")
    assert code == 0 and json.loads(out)["dimension"] == 4
    assert run(capsys, "quadric", "rank1", "--weights", 1, "--mult", 4)[0] == 2
    assert run(capsys, "quadric", "rank2", "--side", "right", "--mu", 1, 2)[0] == 2
