import json

import pytest

from stabglue.cli import main
from stabglue.derived import DerivedObject, cohomology, cohomology_dims
from stabglue.morphcat import MorphObject, cof_fib
from stabglue.quiverrep import decompose_rep
from stabglue.scenarios import (
    SCENARIOS, LiteralError, Report, ScenarioConfig, emit_report, parse_object_literal, render_report, run_scenario,
)


def test_literal_sum_with_shift():
    x = parse_object_literal("S1[0]+S2[1]")
    assert cohomology_dims(x) == {0: (1, 0), -1: (0, 1)}
    assert DerivedObject.from_json(x.to_json()) == x


def test_literal_shifted_projective():
    assert cohomology_dims(parse_object_literal("P12[-1]")) == {1: (1, 1)}


def test_morphism_literal_cone():
    f = parse_object_literal(json.dumps({"src": "S2[0]", "tgt": "P12[0]", "map": {"0": [[], [[1]]]}}))
    assert isinstance(f, MorphObject)
    cof = cof_fib(f).cof
    assert cohomology_dims(cof) == {0: (1, 0)}
    assert [l.kind for l in decompose_rep(cohomology(cof, 0).H).labels()] == ["S1"]
    assert parse_object_literal(json.dumps(f.to_json())) == f


@pytest.mark.parametrize("text,pos", [("S1[0]+", 6), ("S3[0]", 0), ("S1[0] S2", 6)])
def test_literal_errors_carry_position(text, pos):
    with pytest.raises(LiteralError) as e:
        parse_object_literal(text)
    assert e.value.pos == pos


def test_empty_report_exits_zero(tmp_path):
    r = Report("empty", {})
    assert r.to_json()["summary"] == {"pass": 0, "fail": 0, "skipped": 0}
    assert emit_report(r, str(tmp_path / "r.json")) == 0


def test_failing_record_exits_nonzero():
    r = Report("x", {})
    r.add("a", True)
    r.add("b", False, {"why": "made up"})
    assert emit_report(r, None) == 1


def test_records_sorted_and_canonical():
    r = Report("x", {})
    r.add("zeta", True)
    r.add("alpha", "skipped", {"reason": "budget"})
    d = json.loads(render_report(r))
    assert [x["name"] for x in d["records"]] == ["alpha", "zeta"]
    assert d["schema"] == "stabglue/1"
    assert render_report(r) == json.dumps(d, sort_keys=True, indent=2) + "\n"


def test_unwritable_path_names_it():
    with pytest.raises(OSError, match="/nonexistent/dir"):
        emit_report(Report("x", {}), "/nonexistent/dir/r.json")


@pytest.mark.parametrize("bad", [
    dict(scenario="nope"), dict(scenario="hn-oracle", prime=5), dict(scenario="hn-oracle", thetas=("1/4",)),
    dict(scenario="hn-oracle", thetas=("1",)), dict(scenario="hn-oracle", max_dim=0),
])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        ScenarioConfig(**bad)


def test_reports_are_deterministic():
    cfg = dict(scenario="serre-duality", base="vect")
    a = render_report(run_scenario(ScenarioConfig(**cfg)))
    b = render_report(run_scenario(ScenarioConfig(**cfg)))
    assert a == b and "wall_clock" not in a


def test_no_oracle_skips():
    r = run_scenario(ScenarioConfig("hn-oracle", oracle=False))
    assert r.summary()["skipped"] == 1 and r.ok


def test_cli_run(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = main(["run", "--scenario", "path-a2", "--base", "a2", "--theta", "0,1/3", "--max-dim", "2",
                 "--out", str(out)])
    assert code == 0
    d = json.loads(out.read_text())
    assert d["summary"]["fail"] == 0 and d["config"]["thetas"] == ["0", "1/3"]


def test_cli_list(capsys):
    assert main(["list"]) == 0
    assert capsys.readouterr().out.split() == list(SCENARIOS)


def test_cli_bad_theta():
    with pytest.raises(SystemExit):
        main(["run", "--scenario", "path-p1", "--theta", "1/4"])


@pytest.mark.parametrize("name", ["serre-cy3", "sod-adjunctions", "stab-speck", "mor-equivalence"])
def test_light_scenarios_pass(name):
    assert run_scenario(ScenarioConfig(name, max_dim=3)).ok
