import math

import numpy as np
import pytest

from conftest import ids
from revkit.data import generate_synthetic
from revkit.errors import AllZeroScoresError, InvalidParamsError
from revkit.metrics import (
    full_report,
    gini,
    gini_of,
    nsw,
    nsw_of,
    paper_scores,
    percentile_block_of,
    summarize_runs,
    total_envy,
    usw_mean,
)
from revkit.model import Allocation, new_instance
from revkit.rrr import run_rrr


def gini_oracle(scores):
    n = len(scores)
    pairs = sum(abs(a - b) for a in scores for b in scores)
    return pairs / (2 * n * sum(scores))


def test_usw_mean_is_normalized_by_papers(inst_a):
    alloc = run_rrr(inst_a, ids(2, 1, 3))
    assert usw_mean(inst_a, alloc) == pytest.approx(34 / 3)
    assert usw_mean(inst_a, Allocation.empty(3)) == 0.0


def test_usw_mean_matches_direct_sum():
    inst = generate_synthetic(8, 20, 3, capacity=2, seed=21)
    alloc = run_rrr(inst, range(8))
    direct = sum(inst.values[i, r] for i, b in enumerate(alloc.bundles) for r in b) / 8
    assert usw_mean(inst, alloc) == pytest.approx(direct, abs=1e-12)


def test_nsw_zero_handling():
    assert nsw_of(np.array([2.0, 8.0])) == pytest.approx((4.0, 4.0, 0))
    assert nsw_of(np.array([0.0, 8.0])) == (0.0, pytest.approx(8.0), 1)
    assert nsw_of(np.array([3.0, 3.0, 3.0])) == pytest.approx((3.0, 3.0, 0))


def test_nsw_respects_am_gm():
    scores = np.array([1.0, 4.0, 9.0, 0.0])
    _, positive, zeros = nsw_of(scores)
    assert zeros == 1
    assert positive <= scores[scores > 0].mean()


def test_nsw_matches_the_direct_product():
    for n in range(1, 21):
        inst = generate_synthetic(n, 3 * n, 2, capacity=1, seed=n)
        scores = paper_scores(inst, run_rrr(inst, range(n)))
        assert (scores > 0).all()
        direct = math.prod(scores.tolist()) ** (1.0 / n)
        assert nsw(inst, run_rrr(inst, range(n)))[0] == pytest.approx(direct, rel=1e-9, abs=1e-9), n


def test_gini_extremes():
    assert gini_of(np.array([5.0, 5.0, 5.0])) == pytest.approx(0.0, abs=1e-12)
    assert gini_of(np.array([0.0, 7.0])) == pytest.approx(0.5)
    with pytest.raises(AllZeroScoresError):
        gini_of(np.zeros(4))


def test_gini_matches_double_loop():
    rng = np.random.default_rng(0)
    for _ in range(50):
        scores = rng.exponential(1.0, int(rng.integers(1, 30)))
        assert gini_of(scores) == pytest.approx(gini_oracle(scores.tolist()), abs=1e-12)


def test_gini_is_scale_invariant():
    inst = generate_synthetic(6, 18, 3, capacity=2, seed=8)
    scaled = new_instance(inst.values * 3.5, inst.capacities, inst.k)
    alloc = run_rrr(inst, range(6))
    assert gini(inst, alloc) == pytest.approx(gini(scaled, alloc), abs=1e-12)


def test_envy_of_the_counterexample(inst_b, naive_b_alloc):
    positive, literal = total_envy(inst_b, naive_b_alloc)
    assert positive >= 15 - 4.001 - 1e-9
    assert literal <= positive


def test_envy_single_paper():
    inst = new_instance([[1.0, 2.0]], 1, 1)
    assert total_envy(inst, run_rrr(inst, [0])) == (0.0, 0.0)


def test_envy_free_allocation_has_no_envy():
    inst = new_instance([[5.0, 1.0], [1.0, 5.0]], 1, 1)
    alloc = run_rrr(inst, [0, 1])
    assert total_envy(inst, alloc)[0] == 0.0
    assert full_report(inst, alloc).ef1_violations == 0


def test_percentile_blocks():
    scores = np.arange(1.0, 11.0)
    assert percentile_block_of(scores, 0.25) == pytest.approx((2.0, math.sqrt(2 / 3)))
    assert percentile_block_of(np.full(10, 4.0), 0.1) == (4.0, 0.0)
    assert percentile_block_of(scores, 1.0) == pytest.approx((scores.mean(), scores.std()))
    with pytest.raises(InvalidParamsError):
        percentile_block_of(scores, 0.0)
    with pytest.raises(InvalidParamsError):
        percentile_block_of(scores, 1.5)


def test_full_report_on_naive_and_repaired_allocations(inst_b, naive_b_alloc, repaired_b_alloc):
    assert full_report(inst_b, naive_b_alloc).ef1_violations >= 1
    repaired = full_report(inst_b, repaired_b_alloc)
    assert repaired.ef1_violations == 0
    assert repaired.total_envy >= 0


def test_full_report_on_empty_allocation(inst_a):
    report = full_report(inst_a, Allocation.empty(3))
    assert report.usw_mean == 0.0
    assert report.total_envy == 0.0
    assert report.nsw == 0.0 and report.zero_score_count == 3
    assert report.gini == 0.0


def test_full_report_json_and_purity(inst_a):
    alloc = run_rrr(inst_a, ids(2, 1, 3))
    report = full_report(inst_a, alloc)
    assert report == full_report(inst_a, alloc)
    data = report.to_json()
    assert [b["fraction"] for b in data["percentile_blocks"]] == [0.1, 0.25]
    assert data["min_score"] == min(paper_scores(inst_a, alloc))
    assert (report.nsw == 0) == (report.zero_score_count > 0)


def test_summarize_runs(inst_a):
    reports = [full_report(inst_a, run_rrr(inst_a, order)) for order in (ids(2, 1, 3), ids(3))]
    summary = summarize_runs(reports)
    mean, std = summary["usw_mean"]
    assert mean == pytest.approx((34 / 3 + 8 / 3) / 2)
    assert std == pytest.approx((34 / 3 - 8 / 3) / 2)
    assert summarize_runs(reports[:1])["gini"][1] == 0.0
    with pytest.raises(InvalidParamsError):
        summarize_runs([])
