import pytest

from conftest import ids
from revkit.config import NegativeHandling
from revkit.data import (
    InstanceFiles,
    allocation_from_json,
    allocation_to_json,
    generate_synthetic,
    load_allocation,
    load_instance,
    load_order,
    load_search_result,
    read_instance,
    read_loads,
    save_allocation,
    save_instance,
    save_order,
    save_search_result,
)
from revkit.errors import DimensionMismatchError, InvalidParamsError, NegativeValueError, ParseError
from revkit.model import Order, validate_allocation
from revkit.rrr import reviewer_round_robin, run_rrr
from revkit.search import GrrrConfig, greedy_rrr


def test_load_inst_a(inst_a_csv, inst_a):
    loaded = load_instance(InstanceFiles(inst_a_csv, "1", 2))
    assert loaded.same_as(inst_a)


def test_header_row_is_skipped(tmp_path, inst_a):
    path = tmp_path / "with_header.csv"
    path.write_text("r1,r2,r3,r4,r5,r6\n9,3,5,9,4,4\n10,4,0,10,6,5\n1,1,2,2,4,4\n", encoding="utf-8")
    assert load_instance(InstanceFiles(str(path), 1, 2, header=True)).same_as(inst_a)


@pytest.mark.parametrize("text", ["1,2,3\n4,5,6,7\n", "1,2,3\n4,5\n"])
def test_ragged_csv(tmp_path, text):
    path = tmp_path / "ragged.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ParseError):
        load_instance(InstanceFiles(str(path), 1, 1))


def test_non_numeric_cell_position(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2,3\n4,five,6\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_instance(InstanceFiles(str(path), 1, 1))
    assert (err.value.row, err.value.col) == (2, 2)


def test_missing_file():
    with pytest.raises(ParseError):
        load_instance(InstanceFiles("/nonexistent/scores.csv", 1, 1))


def test_scores_that_are_not_utf8(tmp_path):
    path = tmp_path / "latin1.csv"
    path.write_bytes(b"\xff\xfe1,2\n3,4\n")
    with pytest.raises(ParseError, match="not UTF-8"):
        load_instance(InstanceFiles(str(path), 1, 1))


def test_negative_scores_need_an_explicit_choice(tmp_path):
    path = tmp_path / "neg.csv"
    path.write_text("-1,1\n0.5,0\n", encoding="utf-8")
    files = InstanceFiles(str(path), 1, 1)
    with pytest.raises(NegativeValueError):
        load_instance(files)
    inst, shift = read_instance(files, NegativeHandling.SHIFT)
    assert shift == 1.0
    assert inst.values.tolist() == [[0.0, 2.0], [1.5, 1.0]]


def test_loads_from_csv(tmp_path):
    path = tmp_path / "loads.csv"
    path.write_text("1,2,3\n", encoding="utf-8")
    assert read_loads(str(path), 3).tolist() == [1, 2, 3]
    with pytest.raises(DimensionMismatchError):
        read_loads(str(path), 4)
    single = tmp_path / "one.csv"
    single.write_text("4\n", encoding="utf-8")
    assert read_loads(str(single), 3).tolist() == [4, 4, 4]
    assert read_loads(2, 2).tolist() == [2, 2]


def test_instance_round_trip(tmp_path):
    inst = generate_synthetic(5, 9, 3, capacity=(1, 4), distribution="exponential", seed=13)
    scores, loads = str(tmp_path / "s.csv"), str(tmp_path / "l.csv")
    save_instance(inst, scores, loads)
    assert load_instance(InstanceFiles(scores, loads, 3)).same_as(inst)


def test_generate_synthetic_is_deterministic():
    first = generate_synthetic(5, 20, 3, capacity=4, seed=7)
    assert first.same_as(generate_synthetic(5, 20, 3, capacity=4, seed=7))
    assert not first.same_as(generate_synthetic(5, 20, 3, capacity=4, seed=8))
    assert first.capacities.tolist() == [4] * 20


@pytest.mark.parametrize("kwargs", [
    dict(n=3, m=2, k=3),
    dict(n=0, m=2, k=1),
    dict(n=2, m=2, k=1, capacity=0),
    dict(n=2, m=2, k=1, capacity=(3, 2)),
    dict(n=2, m=2, k=1, distribution="normal"),
])
def test_generate_synthetic_rejects_bad_parameters(kwargs):
    with pytest.raises(InvalidParamsError):
        generate_synthetic(**kwargs)


def test_allocation_json(inst_a, tmp_path):
    alloc, _ = reviewer_round_robin(inst_a, ids(2, 1, 3))
    data = allocation_to_json(inst_a, alloc)
    assert data["bundles"] == {"1": [3, 4], "2": [1, 6], "3": [2, 5]}
    assert data["first_reviewer"] == {"1": 4, "2": 1, "3": 5}
    assert data["usw"] == 34.0
    assert data["k"] == 2 and data["halted_early"] is False

    path = str(tmp_path / "alloc.json")
    save_allocation(inst_a, alloc, path)
    reloaded = load_allocation(path)
    assert reloaded == alloc
    assert validate_allocation(inst_a, reloaded).ok


def test_allocation_json_without_first_reviewer():
    alloc = allocation_from_json({"k": 1, "bundles": {"1": [2], "2": []}})
    assert alloc.bundles == ((1,), ())
    assert alloc.first_reviewer == (1, None)


def test_malformed_allocation_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_allocation(str(path))
    with pytest.raises(ParseError):
        allocation_from_json({"bundles": {"x": [1]}})


@pytest.mark.parametrize("payload", [
    {"bundles": {"0": [1]}},
    {"bundles": {"1": [0]}},
    {"bundles": {"1": [1]}, "first_reviewer": {"0": 1}},
])
def test_allocation_json_ids_start_at_one(payload):
    with pytest.raises(ParseError, match="below 1"):
        allocation_from_json(payload)


def test_order_round_trip(tmp_path):
    path = str(tmp_path / "order.txt")
    save_order(Order(ids(2, 1, 3)), path)
    assert load_order(path) == Order(ids(2, 1, 3))
    (tmp_path / "spaced.txt").write_text("2 1\n3\n", encoding="utf-8")
    assert load_order(str(tmp_path / "spaced.txt")) == Order(ids(2, 1, 3))
    (tmp_path / "bad.txt").write_text("2,x", encoding="utf-8")
    with pytest.raises(ParseError):
        load_order(str(tmp_path / "bad.txt"))


def test_search_result_round_trip(tmp_path):
    inst = generate_synthetic(5, 12, 2, capacity=2, seed=3)
    result = greedy_rrr(inst, GrrrConfig(subsample_size=2, seed=99))
    path = str(tmp_path / "search.json")
    save_search_result(result, path)
    assert load_search_result(path) == result
    assert run_rrr(inst, load_search_result(path).order).bundles == run_rrr(inst, result.order).bundles
