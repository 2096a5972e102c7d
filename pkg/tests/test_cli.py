"""Tests for the command line front end."""

import csv
import json

import pytest

from tree_hardy.cli import main
from tree_hardy.models import CSV_COLUMNS

FAST = ["--restarts", "2", "--max-iter", "2000"]


@pytest.fixture
def chain3_file(tmp_path):
    path = tmp_path / "chain3.json"
    assert main(["gen", "--chain", "3", "-o", str(path)]) == 0
    return path


def test_gen_chain(tmp_path):
    path = tmp_path / "chain.json"
    assert main(["gen", "--chain", "5", "-o", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["root"] == 0
    assert [v["parent"] for v in doc["vertices"]] == [None, 0, 1, 2, 3]


def test_gen_regular_to_stdout(capsys):
    assert main(["gen", "--regular", "2,2,2"]) == 0
    assert len(json.loads(capsys.readouterr().out)["vertices"]) == 15


def test_gen_random_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        argv = ["gen", "--random", "50", "--seed", "9", "--u", "loguniform:0.1:10", "-o", str(path)]
        assert main(argv) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_writes_dot(tmp_path):
    dot = tmp_path / "t.dot"
    assert main(["gen", "--star", "3", "-o", str(tmp_path / "t.json"), "--dot", str(dot)]) == 0
    assert "0 -> 3;" in dot.read_text()


def test_norm_single_vertex(tmp_path, capsys):
    path = tmp_path / "single.json"
    assert main(["gen", "--chain", "1", "--u", "constant:2", "--w", "constant:3", "-o", str(path)]) == 0
    assert main(["norm", "-i", str(path), "--p", "2", "--q", "3", *FAST]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == pytest.approx(6.0)
    assert report["converged"]


def test_bound_on_chain3(chain3_file, capsys):
    assert main(["bound", "-i", str(chain3_file), "--p", "2", "--q", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["M"] == pytest.approx(2 ** (5 / 6))
    assert report["argmax_vertex"] == 1
    assert report["bennett"] == pytest.approx(report["M"])


def test_bound_csv_row(chain3_file, capsys):
    assert main(["bound", "-i", str(chain3_file), "--format", "csv"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.startswith("n,p,q,M,argmax_vertex")
    assert row.startswith("3,2.0,3.0,")


def test_partition_of_geometric_chain(tmp_path, capsys):
    path = tmp_path / "geo.json"
    reduced = tmp_path / "reduced.json"
    assert main(["gen", "--chain", "4", "--w", "geometric:0.01", "-o", str(path)]) == 0
    argv = ["partition", "-i", str(path), "--q", "2", "--sigma", "0.1", "--reduced-output", str(reduced)]
    code = main([*argv, *FAST])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["block_count"] == 4
    assert report["passed"]
    assert len(json.loads(reduced.read_text())["vertices"]) == 4


def test_partition_human_output(chain3_file, capsys):
    assert main(["partition", "-i", str(chain3_file), "--format", "human", "--sigma", "0.5", *FAST]) == 0
    assert "Sigma-partition" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv, code",
    [
        (["gen", "--chain", "0"], 2),
        (["gen", "--chain", "200000"], 3),
        (["gen", "--chain", "3", "--u", "normal:1"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err.startswith(f"Error {code}:")


def test_bad_exponent(chain3_file, capsys):
    assert main(["bound", "-i", str(chain3_file), "--p", "1", "--q", "3"]) == 2


def test_invalid_input_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["norm", "-i", str(path)]) == 4
    assert main(["bound", "-i", str(tmp_path / "absent.json")]) == 4


def test_missing_input_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["norm"])
    assert info.value.code == 2


def test_experiment_csv(tmp_path, capsys):
    config = tmp_path / "config.json"
    ensemble = {"tree": {"kind": "chain", "sizes": [1, 3]}, "u": "constant:2", "w": "constant:3"}
    solver = {"restarts": 2, "max_iter": 2000}
    document = {"ensembles": [ensemble], "exponents": [[2.0, 3.0]], "solver": solver, "seed": 1}
    config.write_text(json.dumps(document))
    out = tmp_path / "results.csv"
    assert main(["experiment", "-c", str(config), "-o", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert [row["n"] for row in rows] == ["1", "3"]
    assert float(rows[0]["ratio"]) == pytest.approx(1.0)
    assert "Ratio summary" in capsys.readouterr().err


@pytest.fixture
def study_config(tmp_path):
    config = tmp_path / "study.json"
    ensemble = {"tree": {"kind": "random", "sizes": [6]}, "count": 2, "u": "loguniform:0.1:10"}
    document = {"ensembles": [ensemble], "exponents": [[2.0, 3.0]], "solver": {"restarts": 3}, "seed": 5}
    config.write_text(json.dumps(document))
    return config


def _rows(capsys) -> list[dict]:
    return list(csv.DictReader(capsys.readouterr().out.splitlines()))


def test_experiment_keeps_config_values_without_flags(study_config, capsys):
    assert main(["experiment", "-c", str(study_config)]) == 0
    rows = _rows(capsys)
    assert {row["restarts"] for row in rows} == {"3"}
    assert {(row["p"], row["q"]) for row in rows} == {("2.0", "3.0")}


def test_experiment_flags_override_the_config(study_config, capsys):
    assert main(["experiment", "-c", str(study_config), "--restarts", "1", "--q", "4"]) == 0
    overridden = _rows(capsys)
    assert {row["restarts"] for row in overridden} == {"1"}
    assert {(row["p"], row["q"]) for row in overridden} == {("2.0", "4.0")}

    assert main(["experiment", "-c", str(study_config), "--seed", "5"]) == 0
    same_seed = _rows(capsys)
    assert main(["experiment", "-c", str(study_config), "--seed", "99"]) == 0
    other_seed = _rows(capsys)
    assert [r["M"] for r in same_seed] != [r["M"] for r in other_seed]


def test_experiment_rejects_bad_overrides(study_config, capsys):
    assert main(["experiment", "-c", str(study_config), "--sigma", "1.5"]) == 2
    assert main(["experiment", "-c", str(study_config), "--p", "3.5"]) == 2


def test_experiment_to_stdout_prints_the_summary(study_config, capsys):
    assert main(["experiment", "-c", str(study_config), *FAST]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("instance_id,n,p,q,")
    assert "Ratio summary" in captured.err


def test_experiment_records_failed_shapes(tmp_path, capsys):
    config = tmp_path / "mixed.json"
    ensembles = [
        {"tree": {"kind": "chain", "sizes": [3]}},
        {"tree": {"kind": "regular", "branchings": [[2] * 20]}},
    ]
    config.write_text(json.dumps({"ensembles": ensembles, "exponents": [[2.0, 3.0]]}))
    assert main(["experiment", "-c", str(config), *FAST]) == 0
    chain, failed = _rows(capsys)
    assert chain["error"] == ""
    assert failed["error"].startswith("Error 3:")
