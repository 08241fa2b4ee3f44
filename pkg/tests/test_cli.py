import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from randoracle.cli import RunConfig, dumps, loads, main, parse_problem_spec, run
from randoracle.errors import SchemaError
from randoracle.separations import balanced_binary_problem, scenario_inv_cyc
from randoracle.uselessness import transcript_law, weak_classical_useless

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def cli(*args, tmp_path=None):
    out = tmp_path / "out.json"
    status = main([*args, "--output", str(out)])
    return status, loads(out.read_text())


def test_constructor_matches_library_problem():
    a = parse_problem_spec(PROBLEMS / "inv_cyc_4.json")
    b = scenario_inv_cyc(4).problem
    assert a == b


def test_explicit_oracles_give_same_laws():
    a = parse_problem_spec(str(PROBLEMS / "inv_cyc_4_explicit.json"))
    b = scenario_inv_cyc(4).problem
    assert transcript_law(a, 2).equals(transcript_law(b, 2))


def test_explicit_seed_tables():
    p = parse_problem_spec(PROBLEMS / "two_seed_table.json")
    b = balanced_binary_problem()
    for k in (1, 2):
        assert transcript_law(p, k).equals(transcript_law(b, k))
    assert not weak_classical_useless(p, 2).useless


def test_inline_json_and_dict():
    doc = {"version": 1, "constructor": {"name": "parity", "N": 2}}
    assert parse_problem_spec(doc) == parse_problem_spec(json.dumps(doc))


def test_prior_deficit_is_reported():
    with pytest.raises(SchemaError) as exc:
        parse_problem_spec(PROBLEMS / "bad_prior.json")
    assert "deficit 1/12" in str(exc.value)
    assert exc.value.path == "/prior"


@pytest.mark.parametrize("doc,path", [
    ({"version": 2, "constructor": {"name": "inv-cyc"}}, "/version"),
    ({"version": 1, "constructor": {"name": "bogus"}}, "/constructor/name"),
    ({"version": 1, "oracles": [{"class": "a", "permutations": [[1, 1]]}]}, "/oracles/0/permutations/0"),
    ({"version": 1, "oracles": [{"class": "a", "permutations": [[1, 2]]}],
      "prior": ["x"]}, "/prior/0"),
])
def test_schema_errors_carry_paths(doc, path):
    with pytest.raises(SchemaError) as exc:
        parse_problem_spec(doc)
    assert exc.value.path == path


def test_exit_codes(tmp_path):
    status, doc = cli("decide", "--scenario", "inv-cyc", "--k", "2", tmp_path=tmp_path)
    assert status == 0 and doc["verdicts"][0]["useless"] is True
    status, doc = cli("decide", "--problem", str(PROBLEMS / "bad_prior.json"), "--k", "1",
                      tmp_path=tmp_path)
    assert status == 1 and "deficit 1/12" in doc["notes"][0]
    status, doc = cli("simulate", "--scenario", "inv-cyc", "--trials", "10", tmp_path=tmp_path)
    assert status == 1
    status, doc = cli("encode", "--scenario", "inv-cyc", "--k", "2", "--max-dim", "100",
                      tmp_path=tmp_path)
    assert status == 2 and doc["notes"][0].startswith("refused")
    assert doc["exit_status"] == 2


def test_mismatch_exit_code(monkeypatch, tmp_path):
    from randoracle import separations
    from randoracle.separations import Expectation, COMPUTED

    real = separations.scenario_balanced_binary

    def broken():
        sc = real()
        sc.expectations.append(Expectation("always wrong", lambda: 1, 2, COMPUTED))
        return sc

    monkeypatch.setattr(separations, "scenario_balanced_binary", broken)
    status, doc = cli("scenario", "--name", "balanced-binary", "--check", tmp_path=tmp_path)
    assert status == 3
    assert [e["passed"] for e in doc["expectations"]] == [True, True, False]
    status, _ = cli("scenario", "--name", "balanced-binary", tmp_path=tmp_path)
    assert status == 0


def test_decide_check_against_scenario(tmp_path):
    status, doc = cli("decide", "--scenario", "inv-cyc", "--kind", "pairwise", "--pairs", "1",
                      "--check", tmp_path=tmp_path)
    assert status == 0
    assert doc["expectations"][0]["name"] == "pairwise 1 pair useless"
    w = doc["witnesses"][doc["verdicts"][0]["witness"]]
    assert w["p_class"] != w["p_reference"]
    assert doc["verdicts"][0]["classical_queries"] == 2


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["simulate", "--scenario", "inv-cyc", "--trials", "200", "--rng-seed", "11"]
    main(args + ["--output", str(a)])
    main(args + ["--output", str(b)])
    assert a.read_bytes() == b.read_bytes()
    doc = loads(a.read_text())
    assert doc["timing_ms"] is None
    exact = {p["class"]: p["value"] for p in doc["probabilities"] if p["name"] == "p_symmetric"}
    assert exact == {"INV": 1, "CYC": Fraction(1, 2)}


def test_timing_flag(tmp_path):
    _, doc = cli("decide", "--scenario", "parity", "--N", "2", "--k", "1", "--timing",
                 tmp_path=tmp_path)
    assert isinstance(doc["timing_ms"], float)


fractions = st.fractions(max_denominator=10**6)
docs = st.recursive(
    st.one_of(st.integers(), st.booleans(), st.none(), st.text(max_size=5), fractions),
    lambda children: st.one_of(st.lists(children, max_size=4),
                               st.dictionaries(st.text("abc", min_size=1, max_size=3), children,
                                               max_size=4)),
    max_leaves=12,
)


@given(docs)
def test_dumps_loads_round_trip(doc):
    back = loads(dumps({"x": doc}))["x"]
    assert back == doc
    assert dumps({"x": back}) == dumps({"x": doc})


def test_rows_and_table(tmp_path, capsys):
    assert main(["encode", "--scenario", "inv-cyc", "--k", "1", "--format", "rows"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "section,name,value,detail"
    assert any(r.startswith("verdict,quantum k=1,useful") for r in rows)
    assert main(["encode", "--scenario", "inv-cyc", "--k", "1", "--format", "table"]) == 0
    table = capsys.readouterr().out
    assert "~" in table and "helstrom_advantage" in table


def test_report_command(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["decide", "--scenario", "inv-cyc", "--k", "1", "--output", str(a)])
    main(["decide", "--scenario", "inv-cyc", "--kind", "quantum", "--k", "1", "--output", str(b)])
    status, doc = cli("report", "--input", str(a), "--input", str(b), tmp_path=tmp_path)
    assert status == 0
    assert [v["useless"] for v in doc["verdicts"]] == [True, False]
    bad = tmp_path / "bad.json"
    bad.write_text("{\"command\": 3}")
    status, _ = cli("report", "--input", str(bad), tmp_path=tmp_path)
    assert status == 1


def test_amplify_and_bounded_error(tmp_path):
    status, doc = cli("amplify", "--k", "1", "--check", tmp_path=tmp_path)
    assert status == 0 and all(e["passed"] for e in doc["expectations"])
    status, doc = cli("amplify", "--T", "2", "--check", tmp_path=tmp_path)
    assert status == 0
    err = [e for e in doc["expectations"] if e["name"] == "one-sided error"][0]
    assert err["actual"] == {"INV": 0, "CYC": Fraction(1, 4)}


def test_simon_simulation(tmp_path):
    status, doc = cli("simulate", "--scenario", "simon", "--n", "3", "--trials", "20",
                      "--rng-seed", "0", tmp_path=tmp_path)
    assert status == 0 and doc["probabilities"][0]["value"] == 1


def test_unknown_scenario(tmp_path):
    status, doc = cli("scenario", "--name", "nope", tmp_path=tmp_path)
    assert status == 1


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "randoracle.cli", "scenario", "--name",
                          "balanced-binary", "--check", "--format", "rows"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.count("expectation,") == 2


def test_three_way_prior_deficit():
    doc = {"version": 1, "oracles": [
        {"class": "a", "permutations": [[1, 2]]},
        {"class": "b", "permutations": [[2, 1]]},
        {"class": "b", "permutations": [[1, 2]]},
    ], "prior": ["1/3", "1/3", "1/4"]}
    with pytest.raises(SchemaError) as exc:
        parse_problem_spec(doc)
    assert "deficit 1/12" in str(exc.value)


def test_minimal_deterministic_spec():
    doc = {"version": 1, "oracles": [{"class": "a", "permutations": [[1, 2]]},
                                     {"class": "b", "permutations": [[2, 1]]}]}
    p = parse_problem_spec(doc)
    assert len(p.seeds) == 1 and p.is_deterministic


def test_sampled_swap_test_is_close_to_exact(tmp_path):
    status, doc = cli("simulate", "--scenario", "inv-cyc", "--N", "4", "--trials", "10000",
                      "--rng-seed", "7", tmp_path=tmp_path)
    assert status == 0
    sampled = {p["class"]: p["value"] for p in doc["probabilities"]
               if p["name"] == "p_symmetric_sampled"}
    assert abs(float(sampled["INV"]) - 1) <= 0.02
    assert abs(float(sampled["CYC"]) - 0.5) <= 0.02
