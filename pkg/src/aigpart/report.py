"""QoR measurement and the end-to-end pipeline driver.

Area proxy = AND count, delay proxy = logic depth, ADP proxy = their
product (with +1 on depth to keep buffer-only nets comparable).  Reports
are deterministic byte-for-byte: no timing data is written.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

from .aig import AigNetwork, extract_comb, levels, strash
from .aiger_io import parse_aiger, write_aiger
from .blif_io import parse_blif
from .equiv import EquivPolicy, check_equiv
from .merge import merge, verify_merge
from .partition import (
    PartitionConfig,
    cut_and_stitch,
    partition_network,
    save_manifest,
)
from .rl import (
    OptimizeBudget,
    cost_of,
    flow_text,
    run_parallel,
    trace_jsonl,
)
from .transforms import baseline_script


class VerificationError(Exception):
    pass


@dataclass
class QorReport:
    area_proxy: int
    delay_proxy: int

    @property
    def adp_proxy(self) -> int:
        return self.area_proxy * (self.delay_proxy + 1)


def qor(net: AigNetwork) -> QorReport:
    _, depth = levels(net)
    return QorReport(area_proxy=net.num_ands, delay_proxy=depth)


def _delta(base: float, ours: float) -> str:
    if base == 0:
        return "n/a"
    return "%.2f%%" % ((ours - base) / base * 100.0)


def compare(baseline: QorReport, ours: QorReport) -> dict:
    """Percent deltas per metric, negative meaning improvement."""
    return {
        "area": _delta(baseline.area_proxy, ours.area_proxy),
        "delay": _delta(baseline.delay_proxy, ours.delay_proxy),
        "adp": _delta(baseline.adp_proxy, ours.adp_proxy),
    }


def geomean_ratio(pairs) -> float:
    """Geometric mean of ours/baseline ratios; pairs with a zero baseline
    are skipped (they carry no ratio information)."""
    logs = [math.log(o / b) for b, o in pairs if b > 0 and o > 0]
    if not logs:
        return 1.0
    return math.exp(sum(logs) / len(logs))


def aggregate(rows) -> dict:
    """Geometric-mean aggregate row over per-circuit (baseline, ours)
    QorReport pairs, formatted like the per-circuit deltas."""
    out = {}
    for metric in ("area_proxy", "delay_proxy", "adp_proxy"):
        g = geomean_ratio(
            [(getattr(b, metric), getattr(o, metric)) for b, o in rows]
        )
        out[metric.replace("_proxy", "")] = "%.2f%%" % ((g - 1.0) * 100.0)
    return out


@dataclass
class FlowConfig:
    seed: int = 0
    max_part_size: int = 10000
    epsilon: float = 0.05
    workers: int = 1
    episodes: int = 50
    episode_len: int = 10
    max_wall_seconds: float = 7200.0
    out_dir: str = "run"


def read_network(path: str) -> AigNetwork:
    with open(path, "rb") as f:
        data = f.read()
    if path.endswith(".blif"):
        return parse_blif(data.decode())
    return parse_aiger(data)


def _report_text(rows: list) -> str:
    lines = ["%-10s %10s %10s %12s" % ("flow", "area", "delay", "adp")]
    for name, q, deltas in rows:
        lines.append("%-10s %10d %10d %12d" % (name, q.area_proxy, q.delay_proxy, q.adp_proxy))
        if deltas is not None:
            lines.append("%-10s %10s %10s %12s" % ("  vs base", deltas["area"], deltas["delay"], deltas["adp"]))
    return "\n".join(lines) + "\n"


def flow_end_to_end(input_path: str, config: FlowConfig) -> dict:
    """partition -> parallel RL optimization -> merge -> verify -> report.

    Persists every intermediate artifact under config.out_dir and returns
    the report dict.  Verification failure raises VerificationError.
    """
    net = strash(read_network(input_path))
    os.makedirs(config.out_dir, exist_ok=True)
    with open(os.path.join(config.out_dir, "input.aig"), "wb") as f:
        f.write(write_aiger(net, fmt="binary"))

    comb, shell = extract_comb(net)
    pcfg = PartitionConfig(
        max_part_size=config.max_part_size,
        epsilon=config.epsilon,
        seed=config.seed,
    )
    assignment, fallback = partition_network(comb, pcfg)
    manifest = cut_and_stitch(
        comb, assignment, pcfg,
        shell=shell if net.num_latches else None,
        fallback_parts=fallback,
    )
    save_manifest(manifest, config.out_dir)

    budget = OptimizeBudget(
        max_episodes=config.episodes,
        max_wall_seconds=config.max_wall_seconds,
        episode_len=config.episode_len,
        seed=config.seed,
    )
    jobs = [(p.part_id, p.net) for p in manifest.parts]
    results = run_parallel(jobs, budget, workers=config.workers, global_seed=config.seed)
    for res in results:
        stem = os.path.join(config.out_dir, "part_%04d" % res.part_id)
        with open(stem + ".opt.aig", "wb") as f:
            f.write(write_aiger(res.net, fmt="binary"))
        with open(stem + ".flow", "w") as f:
            f.write(flow_text(res.flow))
        with open(stem + ".trace.jsonl", "w") as f:
            f.write(trace_jsonl(res.traces))

    merged = merge(manifest, [res.net for res in results])
    with open(os.path.join(config.out_dir, "merged.aig"), "wb") as f:
        f.write(write_aiger(merged, fmt="binary"))

    verdict = verify_merge(net, merged)
    if verdict.is_counterexample:
        raise VerificationError(
            "merged network differs from input on PO %r" % verdict.po_name
        )

    base = baseline_script(net)
    with open(os.path.join(config.out_dir, "baseline.aig"), "wb") as f:
        f.write(write_aiger(base, fmt="binary"))

    q_in, q_base, q_ours = qor(net), qor(base), qor(merged)
    report = {
        "input": input_path,
        "seed": config.seed,
        "parts": len(manifest.parts),
        "boundary_pairs": len(manifest.boundary_pairs),
        "fallback_parts": manifest.fallback_parts,
        "flagged": {r.part_id: r.flagged for r in results if r.flagged},
        "verification": verdict.kind,
        "no_opt": {"area": q_in.area_proxy, "delay": q_in.delay_proxy, "adp": q_in.adp_proxy},
        "baseline": {"area": q_base.area_proxy, "delay": q_base.delay_proxy, "adp": q_base.adp_proxy},
        "ours": {"area": q_ours.area_proxy, "delay": q_ours.delay_proxy, "adp": q_ours.adp_proxy},
        "delta_vs_baseline": compare(q_base, q_ours),
        "delta_vs_no_opt": compare(q_in, q_ours),
    }
    with open(os.path.join(config.out_dir, "report.json"), "w") as f:
        json.dump(report, f, indent=1, sort_keys=True)
        f.write("\n")
    rows = [
        ("no-opt", q_in, None),
        ("baseline", q_base, None),
        ("ours", q_ours, compare(q_base, q_ours)),
    ]
    with open(os.path.join(config.out_dir, "report.txt"), "w") as f:
        f.write(_report_text(rows))
    return report
