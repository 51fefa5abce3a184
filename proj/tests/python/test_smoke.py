import math
import xml.etree.ElementTree as ET

import pytest

import facspeed as fs


def summary(t_s, t_1, points, elision=None):
    s = fs.MeasureSummary()
    s.baseline_time = t_s
    s.one_core_time = t_1
    s.per_p = {p: fs.PerP(t_p, i_p) for p, (t_p, i_p) in points.items()}
    s.elision_time = elision
    return s


def test_formulas():
    assert fs.parallel_work(4, 10.0, 4.0) == 36.0
    assert fs.work_inflation(4, 10.0, 4.0, 30.0) == 6.0
    est = fs.sched_work_estimate(9.9, 10.0)
    assert est.seconds == 0.0 and est.noisy
    with pytest.raises(fs.InconsistentSample):
        fs.parallel_work(8, 2.0, 17.0)


def test_curves_and_ratio_of_means():
    c = fs.speedup_curves(summary(10, 12, {4: (5, 2)}))
    pt = c.points[0]
    assert pt.maximal == pytest.approx(40 / 12)
    assert pt.idle_specific == pytest.approx(40 / 14)
    assert pt.inflation_specific == pytest.approx(40 / 18)
    assert pt.actual == 2.0
    assert c.gaps()[0].a == pytest.approx(4 - 40 / 12)

    agg = fs.aggregate([fs.TimingSample(1, 1.0), fs.TimingSample(1, 2.0)])
    assert 4 / agg.t_p == pytest.approx(2.6667, abs=1e-4)


def test_benchmarks():
    assert [fs.gap_index(i, 2, 8) for i in range(8)] == [0, 2, 4, 6, 1, 3, 5, 7]
    with pytest.raises(fs.ConfigError):
        fs.gap_index(0, 3, 10)
    data = fs.sort_input(5000, seed=3)
    assert fs.cilksort(data, mode="parallel", cutoff=100) == sorted(data)
    assert fs.cilksort(data, mode="elision", cutoff=100) == sorted(data)
    assert fs.array_checksum(1000) == 1000
    assert fs.array_checksum(4096, l=2, g=32, r=3, mode="parallel") == 4096 * 2 * 3
    assert {"array_gap", "cilksort"} <= set(fs.benchmark_ids())


def test_run_single_and_sample_json():
    s = fs.run_single("array_gap", {"m": "2048"}, fs.RunKind.baseline, 1)
    assert s.p == 1 and s.idle_time == 0 and s.steals == 0
    assert s.result_digest == 2048
    assert fs.RunSample.from_json(s.to_json()) == s


def test_experiment_round_trip(tmp_path):
    plan = fs.make_plan("noop", [1], reps=2, warmup_runs=0, isolate=False,
                        output_path=str(tmp_path / "r.json"))
    results = fs.run_experiment(plan)
    assert len(results.samples) == 2 * 4
    assert results.summary is not None
    loaded = fs.load_results(plan.output_path)
    assert loaded.to_json() == results.to_json()
    curves = fs.curves_from_file(plan.output_path)
    assert len(curves) == 1


def test_isolated_experiment(tmp_path):
    if fs.cli_path() is None:
        pytest.skip("facspeed executable not installed")
    plan = fs.make_plan("cilksort", [1], params={"n": 5000, "cutoff": 200}, reps=1, warmup_runs=0)
    results = fs.run_experiment(plan)
    assert results.isolated
    assert results.failures == 0


def test_report():
    pts = {p: (8 / p, 0.0) for p in range(1, 9)}
    curves = fs.speedup_curves(summary(8, 8, pts))
    csv = fs.emit_csv(curves)
    assert csv.splitlines()[0] == fs.CSV_HEADER
    back = fs.parse_csv(csv)
    assert [p.actual for p in back.points] == pytest.approx([p.actual for p in curves.points])

    svg = fs.emit_svg(curves, title="linear", annotate_gaps=True)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")

    d = fs.diagnose(curves)
    assert d.has(fs.FindingCode.healthy)
    assert "healthy" in d.to_text()

    starved = {p: (4 / p, 0.0) if p <= 4 else (1.0, p - 4.0) for p in range(1, 9)}
    assert fs.diagnose(fs.speedup_curves(summary(4, 4, starved))).has(fs.FindingCode.parallelism_starved)
    with pytest.raises(fs.ConfigError):
        fs.diagnose(fs.speedup_curves(summary(8, 8, {1: (8, 0)})))


def test_unbounded_point_is_flagged():
    pt = fs.speedup_curves(summary(1, 1, {2: (1, 2)})).points[0]
    assert pt.unbounded_inflation_specific
    assert math.isinf(pt.inflation_specific)
