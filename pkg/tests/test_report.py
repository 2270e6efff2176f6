"""QoR proxies, delta formatting, aggregation, and the end-to-end flow
driver with byte-identical artifacts."""

import json
import os

import pytest

from aigpart.aig import AigBuilder
from aigpart.aiger_io import write_aiger
from aigpart.bench import random_aig
from aigpart.report import (
    FlowConfig,
    QorReport,
    aggregate,
    compare,
    flow_end_to_end,
    geomean_ratio,
    qor,
)


def test_qor_buffer_only_net():
    b = AigBuilder(1)
    net = b.finish([b.leaf_lit(0)])
    q = qor(net)
    assert (q.area_proxy, q.delay_proxy, q.adp_proxy) == (0, 0, 0)


def test_qor_three_ands_depth_two():
    b = AigBuilder(3)
    t = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    net = b.finish([b.add_and(t, b.leaf_lit(2)), b.add_and(t, b.leaf_lit(2) ^ 1)])
    q = qor(net)
    assert q.area_proxy == 3 and q.delay_proxy == 2
    assert q.adp_proxy == 9


def test_compare_formatting():
    base = QorReport(area_proxy=100, delay_proxy=0)   # adp 100
    ours = QorReport(area_proxy=94, delay_proxy=0)
    d = compare(base, ours)
    assert d["area"] == "-6.00%"
    assert d["adp"] == "-6.00%"
    assert d["delay"] == "n/a"  # zero baseline depth


def test_compare_adp_minus_5_17():
    base = QorReport(area_proxy=10000, delay_proxy=0)
    ours = QorReport(area_proxy=9483, delay_proxy=0)
    assert compare(base, ours)["adp"] == "-5.17%"


def test_geomean_ratio_hand_values():
    pairs = [(100, 50), (100, 200), (10, 10)]
    # ratios 0.5, 2.0, 1.0 -> geomean exactly 1
    assert geomean_ratio(pairs) == pytest.approx(1.0)
    assert geomean_ratio([(100, 90)]) == pytest.approx(0.9)
    assert geomean_ratio([(0, 5)]) == 1.0  # no usable ratio


def test_aggregate_formats_percent():
    rows = [
        (QorReport(100, 9), QorReport(90, 9)),
        (QorReport(200, 9), QorReport(180, 9)),
    ]
    agg = aggregate(rows)
    assert agg["area"] == "-10.00%"
    assert agg["delay"] == "0.00%"


def _write_input(tmp_path, seed=51):
    net = random_aig(7, 160, num_pos=3, seed=seed)
    path = os.path.join(str(tmp_path), "in.aig")
    with open(path, "wb") as f:
        f.write(write_aiger(net, fmt="binary"))
    return path, net


def test_flow_end_to_end_artifacts(tmp_path):
    path, net = _write_input(tmp_path)
    cfg = FlowConfig(seed=3, max_part_size=max(8, net.num_ands // 3),
                     episodes=3, episode_len=4,
                     out_dir=os.path.join(str(tmp_path), "run"))
    report = flow_end_to_end(path, cfg)
    assert report["verification"] in ("equivalent_exhaustive", "probably_equivalent")
    assert report["parts"] >= 2
    for name in ("input.aig", "manifest.json", "merged.aig", "baseline.aig",
                 "report.json", "report.txt", "part_0000.opt.aig",
                 "part_0000.flow", "part_0000.trace.jsonl"):
        assert os.path.exists(os.path.join(cfg.out_dir, name)), name
    with open(os.path.join(cfg.out_dir, "report.json")) as f:
        assert json.load(f)["seed"] == 3


def test_flow_reports_byte_identical_across_runs(tmp_path):
    path, net = _write_input(tmp_path)
    blobs = []
    for tag in ("a", "b"):
        cfg = FlowConfig(seed=9, max_part_size=max(8, net.num_ands // 3),
                         episodes=2, episode_len=3,
                         out_dir=os.path.join(str(tmp_path), tag))
        flow_end_to_end(path, cfg)
        run = {}
        for name in ("manifest.json", "merged.aig", "report.txt"):
            with open(os.path.join(cfg.out_dir, name), "rb") as f:
                run[name] = f.read()
        with open(os.path.join(cfg.out_dir, "report.json")) as f:
            doc = json.load(f)
        doc.pop("input")  # differs only by requested path
        run["report"] = json.dumps(doc, sort_keys=True)
        blobs.append(run)
    assert blobs[0] == blobs[1]


def test_flow_on_sequential_input(tmp_path):
    from aigpart.bench import sequential_counter
    net = sequential_counter(6)
    path = os.path.join(str(tmp_path), "ctr.aig")
    with open(path, "wb") as f:
        f.write(write_aiger(net, fmt="binary"))
    cfg = FlowConfig(seed=0, max_part_size=max(4, net.num_ands // 2),
                     episodes=2, episode_len=3,
                     out_dir=os.path.join(str(tmp_path), "run"))
    report = flow_end_to_end(path, cfg)
    assert report["verification"] in ("equivalent_exhaustive", "probably_equivalent")
