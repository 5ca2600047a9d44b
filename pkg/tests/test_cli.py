import json
from pathlib import Path

import pytest

from hyperlag.cli import main, pattern_by_name
from hyperlag.hgio import emit_hg, load
from hyperlag.hypergraph import complete, complete_minus, linear_path, matching, named
from hyperlag.search import canonical_form

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def _schema(name):
    return json.loads((SCHEMAS / name).read_text())


def _validate(payload, schema_name):
    if jsonschema is None:
        return
    from referencing import Registry, Resource
    from referencing.jsonschema import DRAFT202012

    resources = [(p.name, Resource.from_contents(json.loads(p.read_text()),
                                                 default_specification=DRAFT202012))
                 for p in SCHEMAS.glob("*.json")]
    registry = Registry().with_resources(resources)
    validator = jsonschema.Draft202012Validator(_schema(schema_name), registry=registry)
    validator.validate(payload)


def test_pattern_resolver():
    assert pattern_by_name("P3") == linear_path(3)
    assert pattern_by_name("K6") == complete(6, 3)
    assert pattern_by_name("K6-") == complete_minus(6, 3)
    assert pattern_by_name("K5_4") == complete(5, 4)
    assert pattern_by_name("M2") == matching(2, 3)
    assert pattern_by_name("F5") == named("F5")
    with pytest.raises(SystemExit):
        pattern_by_name("Q9")


def test_lambda_certified_exit_zero(tmp_path, capsys):
    path = tmp_path / "k8.hg"
    path.write_text(emit_hg(complete(8, 3)))
    code = main(["lambda", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "7/64" in out and "certified: True" in out


def test_lambda_json_output_validates(tmp_path, capsys):
    path = tmp_path / "k5.hg"
    path.write_text(emit_hg(complete(5, 3)))
    code = main(["lambda", str(path), "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["value"] == pytest.approx(2 / 25)
    _validate(payload, "optimum.schema.json")


def test_lambda_empty_graph(tmp_path, capsys):
    path = tmp_path / "empty.hg"
    path.write_text("r=3 n=4\n")
    code = main(["lambda", str(path)])
    assert code == 0
    assert "value: 0.0" in capsys.readouterr().out


def test_lambda_parse_error_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.hg"
    path.write_text("r=3 nonsense\n1 2 3\n")
    code = main(["lambda", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "line 1" in err


def test_lambda_uncertified_exit_two(tmp_path):
    # an irrational optimum cannot land on an exactly stationary float
    # point, so an absurd tolerance leaves it uncertified
    path = tmp_path / "g.hg"
    path.write_text(emit_hg(complete_minus(6, 3)))
    assert main(["lambda", str(path), "--kkt-tol", "1e-30"]) == 2


def test_check_free_and_containing(tmp_path, capsys):
    k6 = tmp_path / "k6.hg"
    k6.write_text(emit_hg(complete(6, 3)))
    assert main(["check", str(k6), "--free-of", "P3"]) == 0
    assert "P3: free" in capsys.readouterr().out
    k7 = tmp_path / "k7.hg"
    k7.write_text(emit_hg(complete(7, 3)))
    assert main(["check", str(k7), "--free-of", "P3"]) == 0
    assert "contains" in capsys.readouterr().out
    f5 = tmp_path / "f5.hg"
    f5.write_text(emit_hg(named("F5")))
    assert main(["check", str(f5), "--free-of", "T2"]) == 0
    assert "contains" in capsys.readouterr().out


def test_compress_single_and_loop(tmp_path, capsys):
    src = tmp_path / "g.hg"
    src.write_text("r=3 n=4\n2 3 4\n")
    out = tmp_path / "out.hg"
    assert main(["compress", str(src), "--i", "1", "--j", "2", "--out", str(out)]) == 0
    assert load(out).edges == ((1, 3, 4),)
    capsys.readouterr()

    k6iso = tmp_path / "k6iso.hg"
    k6iso.write_text(emit_hg(complete(6, 3)).replace("n=6", "n=7"))
    out2 = tmp_path / "out2.hg"
    assert main(["compress", str(k6iso), "--loop", "3", "--out", str(out2)]) == 0
    assert load(out2) == complete(6, 3)
    text = capsys.readouterr().out
    assert "lambda before" in text


def test_compress_loop_rejects_bad_input(tmp_path, capsys):
    src = tmp_path / "k7.hg"
    src.write_text(emit_hg(complete(7, 3)))
    assert main(["compress", str(src), "--loop", "3"]) == 1


def test_extend_writes_extension(tmp_path, capsys):
    src = tmp_path / "t2.hg"
    src.write_text(emit_hg(named("T2")))
    out = tmp_path / "ext.hg"
    assert main(["extend", str(src), "--out", str(out)]) == 0
    assert canonical_form(load(out)) == canonical_form(named("F5"))


def test_construct_variants(tmp_path, capsys):
    out = tmp_path / "g.hg"
    assert main(["construct", "K", "6", "3", "--out", str(out)]) == 0
    assert len(load(out).edges) == 20
    assert main(["construct", "T", "3", "3", "7", "--out", str(out)]) == 0
    assert len(load(out).edges) == 12
    assert "t = 12" in capsys.readouterr().out
    assert main(["construct", "P", "4", "--out", str(out)]) == 0
    assert load(out) == linear_path(4)
    assert main(["construct", "F3", "--out", str(out)]) == 0
    assert load(out) == named("F3")
    assert main(["construct", "K", "two", "3"]) == 1


def test_turan_command_with_comparison(capsys):
    code = main(["turan", "--n", "5", "--forbid", "F5", "--compare-m", "4", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["max_edges"] == 6
    assert payload["status"] == "exact"
    assert payload["balanced_blowup_edges"] == 7
    _validate(payload, "turan.schema.json")


def test_turan_capped_exit_three(capsys):
    code = main(["turan", "--n", "5", "--forbid", "F5", "--max-nodes", "5"])
    assert code == 3


def test_density_command(capsys):
    code = main(["density", "--pattern", "P2", "--n", "5", "--mode", "all", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["max_lambda"] == pytest.approx(1 / 16)
    _validate(payload, "density_report.schema.json")


def test_density_capped_exit_three(capsys):
    assert main(["density", "--pattern", "P2", "--n", "5", "--mode", "all",
                 "--max-nodes", "3"]) == 3


def test_verify_subset_json(capsys):
    code = main(["verify", "--only", "turan-machinery", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["passed"] is True
    assert payload["seed"] == 0
    _validate(payload, "verify_report.schema.json")


def test_verify_human_output_prints_seed(capsys):
    main(["verify", "--only", "clique-extension-value"])
    out = capsys.readouterr().out
    assert "seed: 0" in out and "PASS" in out


def test_env_fallback_seed(monkeypatch, capsys):
    monkeypatch.setenv("HYPERLAG_SEED", "7")
    main(["verify", "--only", "clique-extension-value"])
    assert "seed: 7" in capsys.readouterr().out


def test_missing_file_exit_one(capsys):
    assert main(["lambda", "/nonexistent/file.hg"]) == 1
