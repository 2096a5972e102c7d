"""Tests for instance files, DOT output and result tables."""

import csv
import io
import json

import pytest

from tree_hardy.generators import gen_chain
from tree_hardy.models import (
    CSV_COLUMNS,
    Exponents,
    ExperimentRecord,
    InvalidInputFile,
    InvalidTree,
    WeightPair,
)
from tree_hardy.partition import build_partition, reduce
from tree_hardy.serialization import (
    dumps_instance,
    load_instance,
    loads_instance,
    partition_to_dict,
    records_to_csv,
    save_instance,
    to_dot,
)

from .helpers import random_instance


def test_instance_file_is_bit_exact(tmp_path):
    t, wt = random_instance(40, seed=7, lo=1e-8, hi=1e8)
    path = tmp_path / "t.json"
    save_instance(t, wt, path)
    t2, wt2 = load_instance(path)
    assert t2.parent == t.parent
    assert wt2.u == wt.u
    assert wt2.w == wt.w
    assert dumps_instance(t2, wt2) == path.read_text(encoding="utf-8")


def test_root_is_relabelled_to_zero():
    doc = {
        "root": 2,
        "vertices": [
            {"id": 0, "parent": 2, "u": 1.0, "w": 10.0},
            {"id": 1, "parent": 0, "u": 2.0, "w": 20.0},
            {"id": 2, "parent": None, "u": 3.0, "w": 30.0},
        ],
    }
    t, wt = loads_instance(json.dumps(doc))
    assert t.root == 0
    assert t.parent == (None, 0, 1)
    assert wt.u == (3.0, 1.0, 2.0)
    assert wt.w == (30.0, 10.0, 20.0)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"root": 0, "vertices": []}',
        '{"root": 0, "vertices": [{"id": 0, "parent": null, "u": -1, "w": 1}]}',
        '{"root": 0, "vertices": [{"id": 0, "parent": null, "u": 1, "w": 1}, {"id": 2, "parent": 0, "u": 1, "w": 1}]}',
        '{"root": 0, "vertices": [{"id": 0, "parent": null, "u": 1, "w": 1}, {"id": 1, "parent": 7, "u": 1, "w": 1}]}',
    ],
)
def test_invalid_files(text):
    with pytest.raises(InvalidInputFile):
        loads_instance(text)


def test_cycle_in_file_is_an_invalid_tree():
    text = json.dumps(
        {
            "root": 0,
            "vertices": [
                {"id": 0, "parent": None, "u": 1, "w": 1},
                {"id": 1, "parent": 2, "u": 1, "w": 1},
                {"id": 2, "parent": 1, "u": 1, "w": 1},
            ],
        }
    )
    with pytest.raises(InvalidTree) as info:
        loads_instance(text)
    assert info.value.exit_code == 4


def test_missing_file(tmp_path):
    with pytest.raises(InvalidInputFile):
        load_instance(tmp_path / "absent.json")


def test_dot_export():
    t = gen_chain(3)
    wt = WeightPair.for_tree(t, [1.0, 2.0, 3.0], [0.5, 0.25, 0.125])
    dot = to_dot(t, wt)
    assert dot.startswith("digraph tree {")
    assert "0 -> 1;" in dot and "1 -> 2;" in dot
    assert "u=2" in dot and "w=0.125" in dot
    partition = build_partition(t, wt.w, 2.0, 0.9)
    assert dot.count("->") == to_dot(t, wt, partition).count("->")
    assert "cluster_0" in to_dot(t, wt, partition)


def test_partition_dict_carries_the_reduced_tree():
    t = gen_chain(3)
    wt = WeightPair.for_tree(t, [1.0] * 3, [1.0] * 3)
    partition = reduce(t, wt, Exponents(p=2, q=2), build_partition(t, wt.w, 2.0, 0.7))
    out = partition_to_dict(partition)
    assert out["block_count"] == 2
    assert out["membership"] == [0, 0, 1]
    assert [v["parent"] for v in out["reduced"]["vertices"]] == [None, 0]
    json.dumps(out)


def test_csv_has_exactly_the_frozen_columns():
    record = ExperimentRecord(instance_id=0, n=1, p=2.0, q=3.0, M=6.0, norm_lb=6.0, ratio=1.0, converged=True)
    records = [record]
    rows = list(csv.reader(io.StringIO(records_to_csv(records))))
    assert rows[0] == list(CSV_COLUMNS)
    assert rows[1][CSV_COLUMNS.index("ratio")] == "1.0"
    assert rows[1][CSV_COLUMNS.index("converged")] == "true"
    assert rows[1][CSV_COLUMNS.index("block_count")] == ""


def test_csv_error_column_only_on_failure():
    ok = ExperimentRecord(instance_id=0, n=1, p=2.0, q=3.0)
    bad = ExperimentRecord(instance_id=1, n=1, p=2.0, q=3.0, error="Error 5: overflow")
    header = records_to_csv([ok, bad]).splitlines()[0].split(",")
    assert header == list(CSV_COLUMNS) + ["error"]
