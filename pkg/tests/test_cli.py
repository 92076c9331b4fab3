import json

import pytest

from clusterfusion.cli import main
from clusterfusion.verifier import load_cluster_table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_project_prints_signed_weight(capsys):
    assert run(capsys, "project", "A2", "6", "4,4")[:2] == (0, '{"sign":-1,"weight":[0,3,3]}\n')
    assert run(capsys, "project", "A2", "6", "5,2")[:2] == (0, '{"sign":0,"weight":null}\n')


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "project", "A2", "6", "1")[0] == 2
    assert run(capsys, "project", "A2", "6", "a,b")[0] == 2
    assert run(capsys, "cartan", "H3")[0] == 2
    assert run(capsys, "verify", "E6", "1")[0] == 2
    assert run(capsys, "kr", "restrict", "G2", "1", "1")[0] == 2
    code, _, err = run(capsys, "fusion", "smatrix", "E8", "2")
    assert code == 2 and "696729600" in err
    with pytest.raises(SystemExit) as info:
        main(["fusion", "nonsense", "A2", "2"])
    assert info.value.code == 2


def test_fusion_and_rep_commands(capsys):
    code, out, _ = run(capsys, "fusion", "qdim", "A2", "6", "0,3,3")
    assert code == 0 and out.startswith("4.41147")
    code, out, _ = run(capsys, "fusion", "mul", "A1", "2", "1,1", "1,1")
    assert code == 0 and out.strip() == "V_0 + V_2"
    code, out, _ = run(capsys, "rep", "dim", "--json", "B3", "0,0,1", "1,0,0")
    assert json.loads(out) == {"dim": [8, 7]}


def test_cluster_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "cluster", "enumerate", "--json", "D4", "1")
    data = json.loads(out)
    assert code == 0 and (data["variables"], data["clusters"], data["relations"]) == (20, 50, 52)
    code, out, _ = run(capsys, "cluster", "init", "--format", "dot", "A3", "2")
    assert code == 0 and out.count("shape=box") == 3
    target = tmp_path / "rels.txt"
    assert run(capsys, "cluster", "export", "E6", "1", "--out", str(target))[0] == 0
    assert len(target.read_text().splitlines()) == 385
    assert run(capsys, "cluster", "enumerate", "A3", "1", "--height", "0,0,1")[0] == 2


def test_verify_command(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "E6", "2")
    assert code == 0 and out.startswith("48 variables, all positive")
    report = tmp_path / "e6.json"
    assert run(capsys, "verify", "E6", "2", "--seed-source", "data", "--report", "json",
               "--out", str(report))[0] == 0
    assert json.loads(report.read_text())["table_match"] is True


def test_examples_command(capsys):
    code, out, _ = run(capsys, "examples", "a2", "b3")
    assert code == 0 and out.splitlines() == ["a2: consistent", "b3: consistent"]
    code, out, _ = run(capsys, "examples", "dn", "--n", "4", "6")
    assert code == 1 and out.splitlines() == ["D4: consistent", "D6: FAILED"]


def _write(tmp_path, obj):
    path = tmp_path / "table.json"
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_ingest_accepts_shipped_table(capsys, tmp_path):
    path = _write(tmp_path, load_cluster_table("E7"))
    code, out, _ = run(capsys, "ingest", path)
    assert code == 0 and out.strip() == "77 rows, 0 unmatched, 0 differing"


def test_ingest_rejects_bad_tables(capsys, tmp_path):
    good = load_cluster_table("E6")
    assert run(capsys, "ingest", _write(tmp_path, ""))[0] == 2
    assert run(capsys, "ingest", _write(tmp_path, "{not json"))[0] == 2
    dup = dict(good, rows=good["rows"] + [good["rows"][0]])
    code, _, err = run(capsys, "ingest", _write(tmp_path, dup))
    assert code == 2 and "duplicate index" in err
    bad_mono = dict(good, rows=[dict(good["rows"][0], monomial="Y_{1,x}")])
    assert run(capsys, "ingest", _write(tmp_path, bad_mono))[0] == 2
    bad_basis = dict(good, rows=[dict(good["rows"][0], image="V_9")])
    code, _, err = run(capsys, "ingest", _write(tmp_path, bad_basis))
    assert code == 2 and "V_9" in err
    wrong_basis = dict(good, basis=good["basis"][::-1])
    assert run(capsys, "ingest", _write(tmp_path, wrong_basis))[0] == 2
    missing = {k: v for k, v in good.items() if k != "rows"}
    assert run(capsys, "ingest", _write(tmp_path, missing))[0] == 2


def test_ingest_reports_wrong_image(capsys, tmp_path):
    good = load_cluster_table("E6")
    rows = [dict(r) for r in good["rows"]]
    rows[33]["image"] = "V_0"
    code, out, _ = run(capsys, "ingest", _write(tmp_path, dict(good, rows=rows)))
    assert code == 1 and "1 differing" in out
