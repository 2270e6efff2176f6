"""Boundary clustering, workload packing, graph bisection, and the
cut-and-stitch manifest contract."""

import random

import pytest

from aigpart.aig import AigBuilder, AigNetwork, lit
from aigpart.bench import random_aig
from aigpart.equiv import check_equiv
from aigpart.graphpart import GraphPartError, cut_weight, partition_graph
from aigpart.partition import (
    Cluster,
    PartitionConfig,
    cluster_by_boundaries,
    cut_and_stitch,
    estimate_workload,
    load_manifest,
    pack_clusters,
    partition_network,
    save_manifest,
)


def _two_cones():
    b = AigBuilder(4)
    x = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    y = b.add_and(b.leaf_lit(2), b.leaf_lit(3))
    return b.finish([x, y])


def test_cluster_two_independent_cones():
    assert len(cluster_by_boundaries(_two_cones())) == 2


def test_shared_pi_does_not_connect():
    # both cones read PI 0 but share no AND wire: still two clusters
    b = AigBuilder(3)
    x = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    y = b.add_and(b.leaf_lit(0), b.leaf_lit(2))
    net = b.finish([x, y])
    assert len(cluster_by_boundaries(net)) == 2


def test_shared_and_wire_connects():
    b = AigBuilder(3)
    s = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    x = b.add_and(s, b.leaf_lit(2))
    y = b.add_and(s, b.leaf_lit(2) ^ 1)
    net = b.finish([x, y])
    assert len(cluster_by_boundaries(net)) == 1


def test_workload_is_nodes_plus_depth():
    b = AigBuilder(4)
    l = b.leaf_lit(0)
    for i in range(1, 4):
        l = b.add_and(l, b.leaf_lit(i))
    net = b.finish([l])
    members = set(range(net.and_offset, net.num_nodes))
    assert estimate_workload(members, net) == 3 + 3
    assert estimate_workload({net.and_offset}, net) == 1 + 1


def test_pack_first_fit_decreasing():
    def cl(n, base):
        return Cluster(frozenset(range(base, base + n)), n)

    cfg = PartitionConfig(max_part_size=10)
    groups = pack_clusters([cl(5, 0), cl(4, 100), cl(6, 200)], cfg)
    sizes = sorted(len(g.members) for g in groups)
    assert sizes == [5, 10]
    assert not any(g.oversized for g in groups)


def test_pack_flags_oversized():
    cfg = PartitionConfig(max_part_size=4)
    groups = pack_clusters([Cluster(frozenset(range(9)), 9)], cfg)
    assert len(groups) == 1 and groups[0].oversized


def test_partition_graph_balance_and_caps():
    rng = random.Random(5)
    for trial in range(10):
        nv = rng.randint(12, 60)
        weights = [rng.randint(1, 3) for _ in range(nv)]
        edges = []
        for _ in range(nv * 2):
            a, b = rng.randrange(nv), rng.randrange(nv)
            if a != b:
                edges.append((a, b, rng.randint(1, 4)))
        k = rng.randint(2, 4)
        total = sum(weights)
        cap = int(1.05 * -(-total // k)) + max(weights)
        try:
            assign = partition_graph(weights, edges, k, epsilon=0.05,
                                     seed=trial, cap=cap)
        except GraphPartError:
            continue
        loads = [0] * k
        for v, p in enumerate(assign):
            loads[p] += weights[v]
        assert all(l <= cap for l in loads), trial


def test_partition_graph_beats_random_cut():
    # 2d grid graph, local structure the partitioner should exploit
    n = 12
    weights = [1] * (n * n)
    edges = []
    for r in range(n):
        for c in range(n):
            v = r * n + c
            if c + 1 < n:
                edges.append((v, v + 1, 1))
            if r + 1 < n:
                edges.append((v, v + n, 1))
    assign = partition_graph(weights, edges, 2, epsilon=0.05, seed=0)
    rng = random.Random(0)
    rand_cuts = []
    for _ in range(50):
        half = set(rng.sample(range(n * n), n * n // 2))
        rand_cuts.append(cut_weight([0 if v in half else 1 for v in range(n * n)], edges))
    assert cut_weight(assign, edges) <= 0.5 * (sum(rand_cuts) / len(rand_cuts))


def test_partition_graph_deterministic():
    rng = random.Random(9)
    nv = 40
    weights = [1] * nv
    edges = [(rng.randrange(nv), rng.randrange(nv), 1) for _ in range(80)]
    edges = [(a, b, w) for a, b, w in edges if a != b]
    a1 = partition_graph(weights, edges, 3, seed=42)
    a2 = partition_graph(weights, edges, 3, seed=42)
    assert a1 == a2


def test_partition_network_respects_cap():
    rng = random.Random(13)
    for trial in range(12):
        net = random_aig(rng.randint(4, 10), rng.randint(30, 400),
                         num_pos=rng.randint(1, 4), seed=6000 + trial)
        cap = max(8, net.num_ands // 3)
        cfg = PartitionConfig(max_part_size=cap, seed=trial)
        assignment, _ = partition_network(net, cfg)
        assert set(assignment) == set(range(net.and_offset, net.num_nodes))
        counts = {}
        for p in assignment.values():
            counts[p] = counts.get(p, 0) + 1
        assert all(c <= cap for c in counts.values()), trial


def _manifest_invariants(comb, manifest):
    # each part validates and its AND count matches its ownership
    wires = {}
    for bp in manifest.boundary_pairs:
        key = (bp["sink_part"], bp["sink_local_pi"])
        assert key not in wires, "boundary PI referenced twice"
        wires[key] = bp["wire"]
        drv = manifest.parts[bp["driver_part"]].net
        snk = manifest.parts[bp["sink_part"]].net
        assert drv.po_names[bp["driver_local_po"]] == bp["wire"]
        assert snk.pi_names[bp["sink_local_pi"]] == bp["wire"]
    # every cut PI of every part is matched by exactly one pair
    for part in manifest.parts:
        part.net.validate()
        for i, name in enumerate(part.net.pi_names):
            if name.startswith("__cut_"):
                assert wires.get((part.part_id, i)) == name
    # ownership covers every original AND exactly once
    owned = {}
    for part in manifest.parts:
        for orig in part.node_map:
            assert orig not in owned
            owned[orig] = part.part_id
    assert set(owned) == set(range(comb.and_offset, comb.num_nodes))
    assert len(manifest.pos) == len(comb.pos)


def test_cut_and_stitch_manifest_invariants():
    rng = random.Random(21)
    for trial in range(8):
        net = random_aig(rng.randint(4, 8), rng.randint(40, 250),
                         num_pos=rng.randint(1, 3), seed=7000 + trial)
        cfg = PartitionConfig(max_part_size=max(8, net.num_ands // 3), seed=trial)
        assignment, fb = partition_network(net, cfg)
        manifest = cut_and_stitch(net, assignment, cfg, fallback_parts=fb)
        assert len(manifest.parts) >= 2
        _manifest_invariants(net, manifest)


def test_constant_and_pi_pos_recorded():
    b = AigBuilder(2)
    x = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    net = b.finish([x, b.leaf_lit(0), 1], po_names=["y", "pa", "one"])
    cfg = PartitionConfig(max_part_size=10)
    assignment, fb = partition_network(net, cfg)
    manifest = cut_and_stitch(net, assignment, cfg, fallback_parts=fb)
    kinds = [r["kind"] for r in manifest.pos]
    assert kinds.count("part") == 1
    assert "pi" in kinds and "const" in kinds


def test_save_load_round_trip(tmp_path):
    net = random_aig(6, 120, num_pos=2, seed=33)
    cfg = PartitionConfig(max_part_size=max(8, net.num_ands // 3), seed=1)
    assignment, fb = partition_network(net, cfg)
    manifest = cut_and_stitch(net, assignment, cfg, fallback_parts=fb)
    save_manifest(manifest, str(tmp_path))
    back = load_manifest(str(tmp_path))
    assert back.boundary_pairs == manifest.boundary_pairs
    assert back.pos == manifest.pos
    assert back.po_names == manifest.po_names
    assert back.fallback_parts == manifest.fallback_parts
    for a, b in zip(manifest.parts, back.parts):
        assert b.net.structurally_equal(a.net)
        assert b.net.pi_names == a.net.pi_names
        assert b.net.po_names == a.net.po_names


def test_config_validation():
    with pytest.raises(ValueError):
        PartitionConfig(max_part_size=0)
    with pytest.raises(ValueError):
        PartitionConfig(epsilon=-0.1)
