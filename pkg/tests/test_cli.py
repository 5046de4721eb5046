import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from hlcy.cli import CHECK_FIELDS, ROW_FIELDS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("hlcy").joinpath("schema.json").read_text())


def rows_of(out):
    return json.loads(out)["rows"]


def test_homology_lie_witt(capsys, schema):
    code, out, _ = run(capsys, "homology", "--complex", "lie", "--algebra", "witt", "--weight", "0",
                       "--max-degree", "4")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["tool"] == "hlcy"
    r3 = [r for r in doc["rows"] if r["degree"] == 3][0]
    assert r3["dim_homology"] == 1 and r3["representatives"] == ["e-1∧e0∧e1"]


def test_homology_leibniz_abelian(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "leibniz", "--algebra", "abelian2", "--max-degree", "3")
    assert code == 0
    assert [r["dim_homology"] for r in rows_of(out)] == [1, 2, 4, 8]


def test_homology_mixed_mod_d(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "mixed-mod-d", "--algebra", "witt",
                       "--weight", "0", "--length", "1")
    assert code == 0
    h = {r["degree"]: r["dim_homology"] for r in rows_of(out)}
    assert h[2] == 1 and h[0] == h[1] == h[3] == 0


def test_infinite_slice_exit_2(capsys):
    code, _, err = run(capsys, "homology", "--complex", "lie", "--algebra", "witt")
    assert code == 2 and "weight" in err
    code, _, err = run(capsys, "homology", "--complex", "mixed", "--algebra", "witt", "--weight", "0")
    assert code == 2 and "length" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["homology", "--complex", "lie", "--algebra", "nonsense"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["homology", "--complex", "nonsense"])
    assert e.value.code == 2
    code, _, err = run(capsys, "homology", "--complex", "lie", "--algebra", "witt", "--weight", "0",
                       "--max-degree", "9")
    assert code == 2 and "max-degree" in err
    code, _, err = run(capsys, "homology", "--complex", "hochschild", "--algebra", "witt", "--weight", "0")
    assert code == 2
    code, _, err = run(capsys, "homology", "--complex", "lie", "--algebra", "sl2", "--weight", "0")
    assert code == 2 and "weight" in err


def test_negative_weight_ranges(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "lie", "--algebra", "witt", "--weight", "-2..1",
                       "--max-degree", "2", "--no-reps")
    assert code == 0
    assert sorted({r["weight"] for r in rows_of(out)}) == [-2, -1, 0, 1]
    assert all(r["representatives"] == [] for r in rows_of(out))


def test_csv_header_and_text(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "lie", "--algebra", "witt", "--weight", "0",
                       "--format", "csv")
    rdr = csv.reader(io.StringIO(out))
    assert next(rdr) == ROW_FIELDS
    code, out, _ = run(capsys, "verify", "gv", "--format", "csv")
    assert out.splitlines()[0] == ",".join(CHECK_FIELDS)
    code, out, _ = run(capsys, "verify", "gv", "--format", "text")
    assert "9/9 checks passed" in out


@pytest.mark.parametrize("target,extra", [("gv", []), ("ladder", ["--algebra", "dual-numbers", "--max-degree", "4"]),
                                          ("exactness", ["--max-degree", "3"])])
def test_verify_targets(capsys, schema, target, extra):
    code, out, _ = run(capsys, "verify", target, *extra)
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert code == 0
    assert doc["checks"] and all(c["pass"] for c in doc["checks"])


def test_verify_axioms_small(capsys, schema):
    code, out, _ = run(capsys, "verify", "axioms", "--max-degree", "3", "--weight", "-1..1", "--length", "0..1")
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert code == 0 and all(c["pass"] for c in doc["checks"])


def test_table_grid_and_output_file(tmp_path, capsys, schema):
    p = tmp_path / "t.json"
    code, out, _ = run(capsys, "table", "--complex", "lie,leibniz", "--algebra", "witt",
                       "--weight", "-1..1", "--max-degree", "3", "-o", str(p))
    assert code == 0 and out == ""
    doc = json.loads(p.read_text())
    jsonschema.validate(doc, schema)
    assert len(doc["rows"]) == 2 * 3 * 4
    keys = [(r["complex"], r["weight"], r["degree"]) for r in doc["rows"]]
    assert keys == sorted(keys, key=lambda k: (["lie", "leibniz"].index(k[0]), k[1], k[2]))


def test_exit_code_1_on_failure(monkeypatch, capsys):
    import hlcy.cli as cli
    monkeypatch.setitem(cli.VERIFIERS, "gv", lambda cfg: [cli._check("x", "y", False)])
    code, out, _ = run(capsys, "verify", "gv")
    assert code == 1


def _subprocess(args, env_jobs=None):
    import os
    env = dict(os.environ)
    if env_jobs is not None:
        env["HLCY_JOBS"] = str(env_jobs)
    return subprocess.run([sys.executable, "-m", "hlcy.cli", *args], capture_output=True, env=env, check=False)


def test_deterministic_across_jobs():
    args = ["table", "--complex", "lie,leibniz,cyclic", "--algebra", "uwitt", "--weight", "-1..1",
            "--length", "0..2", "--max-degree", "3"]
    a = _subprocess(args + ["--jobs", "1"])
    b = _subprocess(args + ["--jobs", "4"])
    c = _subprocess(args, env_jobs=3)
    assert a.returncode == 0 and a.stdout
    assert a.stdout == b.stdout == c.stdout
