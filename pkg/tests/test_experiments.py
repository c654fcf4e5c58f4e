import json

import numpy as np
import pytest

from linebroadcast.experiments import (
    HIST_COLUMNS,
    SWEEP_COLUMNS,
    ExperimentConfig,
    bm_histogram,
    diff_histogram,
    make_histogram,
    normalized_difference,
    report_text,
    run_density_sweep,
    run_trial,
    run_trials,
)
from linebroadcast.network import NetworkError


class TestNormalizedDifference:
    def test_examples(self):
        assert normalized_difference(11, 11) == 0
        assert normalized_difference(20404, 10405) == pytest.approx(0.96098, abs=1e-5)
        assert normalized_difference(20202, 10405) == pytest.approx(0.94156, abs=1e-5)

    def test_symmetric(self):
        assert normalized_difference(3, 5) == normalized_difference(5, 3)

    def test_zero_rejected(self):
        with pytest.raises(NetworkError, match="cost"):
            normalized_difference(0, 5)


def small(**kw):
    base = dict(length=1000, lambdas=(0.02, 0.04), trials=40, pcs=(0.9,), seed=3)
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfig:
    @pytest.mark.parametrize(
        "kw, field",
        [
            (dict(trials=0), "trials"),
            (dict(lambdas=()), "lambda"),
            (dict(algorithms=("greedy",)), "algorithms"),
            (dict(mode="grid"), "mode"),
            (dict(workers=0), "workers"),
        ],
    )
    def test_rejects(self, kw, field):
        with pytest.raises(NetworkError, match=field):
            small(**kw)

    def test_n_is_rounded_density(self):
        assert small().n_for(0.03) == 30


def test_trial_costs_are_ordered():
    cfg = small(audit=True)
    for recs in run_trials(cfg):
        for r in recs:
            c = r.costs
            assert c["optimal"] <= c["suboptimal"] * (1 + 1e-12)
            assert c["suboptimal"] <= c["distributed"] * (1 + 1e-12)
            assert all(v >= 0 for v in r.normdiff.values())


def test_sweep_csv_shape():
    rep = run_density_sweep(small(pcs=()))
    lines = report_text(rep, "csv").splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 1 + 6
    assert {ln.split(",")[1] for ln in lines[1:]} == {"optimal", "suboptimal", "distributed"}
    assert all(ln.endswith(",40,3") for ln in lines[1:])


def test_sweep_identical_and_analytic_rows():
    rep = run_density_sweep(small(algorithms=("optimal", "analytic")))
    algs = [ln.split(",")[1] for ln in report_text(rep).splitlines()[1:]]
    assert algs == ["optimal", "analytic", "identical_pc0.9"] * 2
    doc = json.loads(report_text(rep, "json"))
    assert doc["config"]["source_policy"] == "random"
    # N=20, lambda=0.02: (N-3)*2/lam^2 + 7/(2 lam^2)
    assert doc["points"][0]["analytic"] == pytest.approx(17 * 2 / 0.02**2 + 3.5 / 0.02**2)


def test_empty_histogram_is_header_only():
    h = make_histogram([], 50)
    assert h.edges == [] and h.counts == []
    from linebroadcast.experiments import SweepReport

    rep = SweepReport("histogram", {}, [], h)
    assert report_text(rep, "csv") == ",".join(HIST_COLUMNS) + "\n"


def test_histogram_counts_and_edges():
    rep = diff_histogram(small(), ("distributed", "optimal"))
    h = rep.histogram
    assert sum(h.counts) == 80
    assert len(h.counts) == 50 and np.all(np.diff(h.edges) > 0)
    assert h.edges[0] == 0 and h.edges[-1] == h.summary["max"]
    assert 0 <= h.summary["fraction_below_0.1"] <= 1


def test_identical_pair_gives_zero_histogram():
    cfg = small(mode="adv_a", lambdas=(0.004,), trials=3)
    rep = diff_histogram(cfg, ("suboptimal", "optimal"))
    assert rep.histogram.summary["max"] == 0
    assert sum(rep.histogram.counts) == 3 and rep.histogram.counts[0] == 3


def test_bad_pair():
    with pytest.raises(NetworkError, match="pair"):
        diff_histogram(small(trials=1), ("optimal", "distributed"))


def test_adv_b_always_has_bm():
    cfg = small(mode="adv_b", r1=101, lambdas=(0.005,), trials=5)
    rep = bm_histogram(cfg)
    assert rep.histogram.summary["no_bm_fraction"] == 0
    assert sum(rep.histogram.counts) == 5


def test_reports_are_deterministic():
    a = report_text(bm_histogram(small()), "json")
    b = report_text(bm_histogram(small()), "json")
    assert a == b
    assert report_text(run_density_sweep(small())) == report_text(run_density_sweep(small()))


def test_worker_count_does_not_change_results():
    one = report_text(run_density_sweep(small(trials=30)), "json")
    two = report_text(run_density_sweep(small(trials=30, workers=2)), "json")
    assert one == two


def test_trial_is_reproducible_in_isolation():
    cfg = small()
    rec = run_trials(cfg)[1][17]
    again = run_trial(cfg, 1, 17)
    assert rec == again


def test_emit_report_io_error(tmp_path):
    from linebroadcast.experiments import emit_report

    with pytest.raises(OSError, match="missing"):
        emit_report(run_density_sweep(small(trials=2)), "csv", tmp_path / "missing" / "out.csv")


def test_algorithm_selection():
    rep = run_density_sweep(small(algorithms=("distributed",), pcs=()))
    assert [ln.split(",")[1] for ln in report_text(rep).splitlines()[1:]] == ["distributed"] * 2
    assert all(r.bm is None and set(r.costs) == {"distributed"} for recs in rep.records for r in recs)
    with pytest.raises(NetworkError, match="optimal"):
        diff_histogram(small(algorithms=("distributed",)), ("distributed", "optimal"))
    with pytest.raises(NetworkError, match="optimal"):
        bm_histogram(small(algorithms=("distributed", "suboptimal")))
