import io
import json
import xml.etree.ElementTree as ET

import pytest

from fisheco.cli import main
from fisheco.dsl import FIXTURE_NAMES, fixture_text, load_fixture, parse
from fisheco.graph import from_json, to_json


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def scen(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.fis"
        path.write_text(fixture_text(name), encoding="utf-8")
        return str(path)

    return write


def test_schema_show_and_check():
    code, out = run("schema", "show", "merged")
    assert code == 0
    rows = [line for line in out.splitlines() if line and not line.startswith(("#", "code\t", "verb\t"))]
    assert sum(1 for r in rows if len(r.split("\t")) == 4) == 23
    assert run("schema", "check", "A") == (0, "valid: 0 violations\n")


def test_schema_lookup():
    code, out = run("schema", "lookup", "merged", "fact_checked", "P", "UGC")
    assert (code, out) == (0, "fact_checked\tP\tUGC\tfact_check\tfact_checking\n")
    assert run("schema", "lookup", "A", "regulates", "R", "P")[0] == 2


def test_unknown_model_is_usage_error():
    assert run("schema", "show", "Z")[0] == 2
    assert run()[0] == 2
    assert run("query", "x.fis", "bogus")[0] == 2


def test_validate_fixture(scen):
    assert run("validate", scen("uk_regulators")) == (0, "valid: 0 violations\n")


def test_validate_errors_exit_one(tmp_path):
    doc = json.loads(to_json(load_fixture("bbc_breakfast")))
    for ent in doc["entities"]:
        if ent["id"] == "Sarah Turnidge":
            ent["attrs"]["fact_checking"] = False
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out = run("validate", str(path))
    assert code == 1
    assert "guard-violation" in out


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.fis"
    path.write_text('scenario "t"\nmodel A\nentity P "x" {\n', encoding="utf-8")
    assert run("validate", str(path))[0] == 2
    assert f"{path}:3:15: expected attribute name" in capsys.readouterr().err


def test_missing_file_exit_three(tmp_path):
    assert run("validate", str(tmp_path / "absent.fis"))[0] == 3
    assert run("export", "--format", "dot", "-o", str(tmp_path / "no" / "dir.dot"), str(tmp_path / "absent.fis"))[0] == 3


def test_query_co_fact_checkers_tsv_and_json(scen):
    path = scen("bbc_breakfast")
    code, out = run("query", path, "co-fact-checkers", "Twitter video")
    assert code == 0
    assert out.splitlines() == ["AFP Fact Check", "Abbas Panjwani", "Maldita"]
    code, out = run("query", path, "co-fact-checkers", "Twitter video", "--json")
    assert json.loads(out) == [{"checker": "AFP Fact Check"}, {"checker": "Abbas Panjwani"}, {"checker": "Maldita"}]


def test_query_events_tsv(scen):
    code, out = run("query", scen("bbc_breakfast"), "fact-check-events", "BBC Breakfast broadcast")
    assert out == "Sarah Turnidge\tP\tpast\t2022-02-25\tFull Fact report (Turnidge)\n"


def test_query_shared_backer_and_depth(scen):
    path = scen("uk_regulators")
    code, out = run("query", path, "shared-backer", "IPSO", "Telegraph", "--depth", "3")
    assert code == 0
    assert out.splitlines() == [
        "Telegraph Media Limited\tIPSO > Regulatory Funding Company > Telegraph Media Limited\t"
        "Telegraph > Telegraph Media Limited"
    ]
    assert run("query", path, "shared-backer", "IPSO", "Telegraph", "--depth", "0")[0] == 2
    assert run("query", path, "shared-backer", "IPSO")[0] == 2


def test_query_regulation_chain_and_match(scen):
    path = scen("uk_regulators")
    assert run("query", path, "regulation-chain", "Telegraph")[1] == "IPSO\tongoing\t-\nPCC\tpast\t-\n"
    code, out = run("query", path, "match", "r:R, m:MO; r -regulates/past-> m", "--json")
    assert code == 0
    assert len(json.loads(out)) == 6
    assert run("query", path, "match", "r:ZZ")[0] == 2


def test_query_unknown_entity(scen):
    assert run("query", scen("bbc_breakfast"), "co-fact-checkers", "nobody")[0] == 2


@pytest.mark.parametrize("fmt", ["dot", "graphml", "json", "fis"])
def test_export_formats(scen, fmt, tmp_path):
    path = scen("bbc_breakfast")
    code, out = run("export", path, "--format", fmt)
    assert code == 0
    target = tmp_path / f"out.{fmt}"
    assert run("export", path, "--format", fmt, "-o", str(target)) == (0, "")
    assert target.read_text(encoding="utf-8") == out
    g = load_fixture("bbc_breakfast")
    if fmt == "graphml":
        ET.fromstring(out)
    elif fmt == "json":
        assert from_json(out) == g
    elif fmt == "fis":
        assert parse(out) == g
    else:
        assert out.startswith("digraph")


def test_export_json_input(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(to_json(load_fixture("trump_suspension")), encoding="utf-8")
    code, out = run("export", str(path), "--format", "fis")
    assert code == 0 and parse(out) == load_fixture("trump_suspension")


def test_fixtures_list_and_dump():
    assert run("fixtures", "list") == (0, "".join(n + "\n" for n in FIXTURE_NAMES))
    assert run("fixtures", "dump", "trump_suspension") == (0, fixture_text("trump_suspension"))


def test_simulate_single_seed(scen):
    path = scen("bbc_breakfast")
    code, out = run("simulate", path, "--item", "Twitter video", "--p", "1", "--steps", "3")
    assert code == 0
    meta_line, *csv = out.splitlines()
    meta = json.loads(meta_line)
    assert meta["prng"].startswith("MT19937")
    assert meta["params"]["seed"] == 0
    assert csv[0] == "step,exposed"
    assert len(csv) == 5
    again = run("simulate", path, "--item", "Twitter video", "--p", "1", "--steps", "3")
    assert again[1] == out


def test_simulate_seed_batch(scen):
    path = scen("bbc_breakfast")
    code, out = run("simulate", path, "--item", "Twitter video", "--p", "0.5", "--steps", "2", "--seeds", "3..5")
    assert code == 0
    lines = out.splitlines()
    assert json.loads(lines[0])["seeds"] == [3, 5]
    assert lines[1] == "seed,step,exposed"
    assert len(lines) == 2 + 3 * 3
    assert run("simulate", path, "--item", "Twitter video", "--p", "0.5", "--seeds", "5..3")[0] == 2


def test_simulate_bad_params(scen):
    path = scen("bbc_breakfast")
    assert run("simulate", path, "--item", "Twitter video", "--p", "2")[0] == 2
    assert run("simulate", path, "--item", "Maldita", "--p", "0.5")[0] == 2


def test_exposure_network_query(scen):
    code, out = run("query", scen("bbc_breakfast"), "exposure-network", "--json")
    rows = json.loads(out)
    assert code == 0
    assert all(set(r) == {"agent", "neighbours"} for r in rows)
