import math

import pytest

import mmwsched

FIG = dict(
    nodes=[(0, 0), (2, 0), (0, 8), (2, 8), (4, 8), (10, 8)],
    hops=[[0, 1, 0, 1, 10], [1, 1, 2, 3, 3], [1, 2, 3, 4, 3], [2, 1, 5, 4, 3]],
    beamwidth_deg=20,
)


def test_schedule_round_trip_and_gantt():
    f = mmwsched.schedule("emhct-f", **FIG)
    assert f["consumed_slots"] == 10
    placed = [p for g in f["groups"] for p in g["placements"]]
    assert len(placed) == 4
    m = mmwsched.schedule("mhct", **FIG)
    assert m["consumed_slots"] >= f["consumed_slots"]
    assert mmwsched.brute_force_optimum(**FIG) <= f["consumed_slots"]
    chart = mmwsched.render_gantt(f, width=40)
    assert chart.startswith("consumed 10/1000")


def test_waterfill_and_jain():
    alloc, level = mmwsched.solve_waterfill([1.0, 1.0, 1.0, 1.0], 8.0)
    assert alloc == pytest.approx([2.0] * 4)
    assert level == pytest.approx(3.0)
    assert mmwsched.jain_index([1.0, 2.0, 3.0]) == pytest.approx(6 / 7)
    assert mmwsched.jain_index([0.0, 0.0]) is None
    with pytest.raises(ValueError):
        mmwsched.solve_waterfill([], 1.0)


def test_run_scenario_and_sweep():
    c = mmwsched.SimConfig.parse("node_count = 12\nflow_counts = 4\nseeds = 3\nthreads = 1\n")
    c.beamwidths_deg = [20.0]
    r = mmwsched.run_scenario(c, 3, "emhct-f", 20.0, 4)
    assert r["policy"] == "emhct-f"
    assert r["throughput_bps"] > 0
    assert r["waterfill_bps"] >= r["throughput_bps"]
    recs = mmwsched.run_sweep(c)
    assert [x["policy"] for x in recs] == list(mmwsched.POLICIES)
    again = mmwsched.run_sweep(c)
    assert [x["throughput_bps"] for x in recs] == [x["throughput_bps"] for x in again]
    assert all(math.isfinite(x["throughput_bps"]) for x in recs)
    assert mmwsched.csv_header().startswith("seed,policy")


def test_bad_input():
    c = mmwsched.SimConfig()
    with pytest.raises(ValueError, match="no_such_key"):
        c.set("no_such_key", "1")
    with pytest.raises(ValueError):
        mmwsched.SimConfig.parse("maxslots = zero\n")
    with pytest.raises(ValueError):
        mmwsched.schedule("mhct", nodes=[(0, 0)], hops=[[0, 1, 0]], beamwidth_deg=20)
    with pytest.raises(ValueError):
        mmwsched.schedule("nope", **FIG)
