"""mmWave WPAN concurrent transmission scheduling."""

import json

from ._mmwsched import (
    InvariantViolation,
    SimConfig,
    brute_force_optimum,
    csv_header,
    jain_index,
    run_scenario,
    run_sweep,
    solve_waterfill,
)
from . import _mmwsched

POLICIES = ("mhct", "emhct-f", "emhct-e")


def schedule(policy, nodes, hops, beamwidth_deg, maxslots=1000):
    """Schedules hop rows [flow, hop, tx, rx, slots] and returns the map as a dict."""
    return json.loads(_mmwsched.schedule_json(policy, nodes, hops, beamwidth_deg, maxslots))


def render_gantt(schedule_map, width=80):
    return _mmwsched.render_gantt_json(json.dumps(schedule_map), width)


__all__ = [
    "InvariantViolation",
    "POLICIES",
    "SimConfig",
    "brute_force_optimum",
    "csv_header",
    "jain_index",
    "render_gantt",
    "run_scenario",
    "run_sweep",
    "schedule",
    "solve_waterfill",
]
