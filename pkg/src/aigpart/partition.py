"""Network partitioning: latch-boundary clustering, workload-balanced
packing, MFFC-graph splitting of oversized pieces, and stitching the
assignment into standalone sub-networks connected by named boundary wires.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

from .aig import AigBuilder, AigNetwork, SequentialShell, lit_compl, lit_var
from .aiger_io import parse_aiger, write_aiger
from .graphpart import GraphPartError, partition_graph
from .mffc import build_compressed_graph, decompose


def cut_wire_name(node_id: int) -> str:
    return "__cut_%d" % node_id


def orig_po_name(index: int) -> str:
    return "__opo_%d" % index


def keep_name(node_id: int) -> str:
    return "__keep_%d" % node_id


@dataclass
class Cluster:
    members: frozenset
    workload: int


@dataclass
class PartitionConfig:
    max_part_size: int = 10000
    epsilon: float = 0.05
    # clustering counts as failed when the largest cluster exceeds this
    # multiple of max_part_size while fewer clusters than parts exist
    fallback_threshold: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.max_part_size < 1:
            raise ValueError("max_part_size must be >= 1")
        if not 0 <= self.epsilon < 1:
            raise ValueError("epsilon must be in [0, 1)")


@dataclass
class ClusterGroup:
    members: frozenset
    oversized: bool


@dataclass
class PartPayload:
    part_id: int
    net: AigNetwork
    node_map: dict  # original AND id -> local node id


@dataclass
class PartitionManifest:
    parts: list
    boundary_pairs: list      # {wire, driver_part, driver_local_po, sink_part, sink_local_pi}
    pos: list                 # one record per original (comb) PO
    pi_names: list
    po_names: list
    shell: object = None      # SequentialShell when the source was sequential
    fallback_parts: list = field(default_factory=list)


def _uf_find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        parent[v], v = root, parent[v]
    return root


def cluster_by_boundaries(comb: AigNetwork) -> list[Cluster]:
    """Connected components of the AND-node support graph.

    PIs (including pseudo latch outputs) sever connectivity, so a pipeline
    cut at latches falls apart into stage clusters.  Labels are reconciled
    with union-find over both sweep directions; representative ids are
    minimal, making labels deterministic.
    """
    off = comb.and_offset
    parent = list(range(comb.num_nodes))
    for k, (f0, f1) in enumerate(comb.ands):
        v = off + k
        for f in (f0, f1):
            w = lit_var(f)
            if comb.is_and_id(w):
                a, b = _uf_find(parent, v), _uf_find(parent, w)
                if a != b:
                    if a > b:
                        a, b = b, a
                    parent[b] = a
    comps: dict[int, list[int]] = {}
    for v in range(off, comb.num_nodes):
        comps.setdefault(_uf_find(parent, v), []).append(v)
    out = []
    for root in sorted(comps):
        members = frozenset(comps[root])
        out.append(Cluster(members=members, workload=estimate_workload(members, comb)))
    return out


def estimate_workload(members, net: AigNetwork) -> int:
    """Workload proxy for a cluster: node count plus induced depth."""
    if not members:
        return 0
    depth = {}
    best = 0
    for v in sorted(members):
        d = 1
        for f in net.and_fanins(v):
            w = lit_var(f)
            if w in members:
                d = max(d, depth[w] + 1)
        depth[v] = d
        best = max(best, d)
    return len(members) + best


def pack_clusters(clusters: list[Cluster], cfg: PartitionConfig) -> list[ClusterGroup]:
    """First-fit-decreasing by workload into bins capped by node count.
    Clusters too large for any bin pass through flagged for splitting."""
    groups: list[ClusterGroup] = []
    bin_sets: list[list] = []
    bin_load: list[int] = []
    order = sorted(
        range(len(clusters)),
        key=lambda i: (-clusters[i].workload, min(clusters[i].members, default=0)),
    )
    for i in order:
        c = clusters[i]
        if len(c.members) > cfg.max_part_size:
            groups.append(ClusterGroup(members=c.members, oversized=True))
            continue
        for j in range(len(bin_sets)):
            if bin_load[j] + len(c.members) <= cfg.max_part_size:
                bin_sets[j].append(c.members)
                bin_load[j] += len(c.members)
                break
        else:
            bin_sets.append([c.members])
            bin_load.append(len(c.members))
    for sets in bin_sets:
        groups.append(ClusterGroup(members=frozenset().union(*sets), oversized=False))
    return groups


def partition_oversized(comb: AigNetwork, members, cfg: PartitionConfig):
    """Split one oversized cluster into k parts over its MFFC quotient graph.

    Returns (node -> local part id, used_node_fallback).  The node-graph
    fallback fires when the MFFC graph admits no balanced split (typically a
    single MFFC heavier than the cap).
    """
    n = len(members)
    k = math.ceil(n / cfg.max_part_size)
    cap = min(cfg.max_part_size, int((1 + cfg.epsilon) * math.ceil(n / k)))
    dec = decompose(comb)
    graph = build_compressed_graph(comb, dec)
    vids = sorted(i for i, m in enumerate(dec.mffcs) if m.root in members)
    index = {mi: i for i, mi in enumerate(vids)}
    weights = [graph.weights[mi] for mi in vids]
    edges = [
        (index[s], index[d], w)
        for s, d, w in graph.edges
        if s in index and d in index
    ]
    try:
        assign = partition_graph(weights, edges, k, cfg.epsilon, seed=cfg.seed, cap=cap)
        out = {}
        for i, mi in enumerate(vids):
            for v in dec.mffcs[mi].members:
                out[v] = assign[i]
        return out, False
    except GraphPartError:
        pass
    # node-graph fallback: unit weights are always packable
    nodes = sorted(members)
    nindex = {v: i for i, v in enumerate(nodes)}
    nedges = []
    for v in nodes:
        for f in comb.and_fanins(v):
            w = lit_var(f)
            if w in nindex:
                nedges.append((nindex[w], nindex[v], 1))
    assign = partition_graph([1] * n, nedges, k, cfg.epsilon, seed=cfg.seed, cap=cap)
    return {v: assign[i] for i, v in enumerate(nodes)}, True


def partition_network(comb: AigNetwork, cfg: PartitionConfig):
    """Full assignment: cluster, pack, split oversized groups.

    Returns (node -> part id over all AND nodes, fallback part id list).
    """
    clusters = cluster_by_boundaries(comb)
    groups = pack_clusters(clusters, cfg)
    assignment: dict[int, int] = {}
    fallback: list[int] = []
    next_part = 0
    for g in groups:
        if not g.oversized:
            for v in g.members:
                assignment[v] = next_part
            next_part += 1
            continue
        sub, used_fb = partition_oversized(comb, g.members, cfg)
        width = max(sub.values()) + 1
        for v, p in sub.items():
            assignment[v] = next_part + p
        if used_fb:
            fallback.extend(range(next_part, next_part + width))
        next_part += width
    return assignment, fallback


def cut_and_stitch(comb: AigNetwork, assignment: dict, cfg: PartitionConfig,
                   shell=None, fallback_parts=None) -> PartitionManifest:
    """Materialize an assignment as standalone part networks.

    A wire from part A into part B becomes PO __cut_<id> in A and PI
    __cut_<id> in B; a wire read by several parts gets one PO and one PI
    per consumer under the same name.  Original PIs are replicated into
    every part that reads them.
    """
    if not assignment:
        num_parts = 0
    else:
        num_parts = max(assignment.values()) + 1
    off = comb.and_offset
    part_nodes: list[list[int]] = [[] for _ in range(num_parts)]
    for v in sorted(assignment):
        part_nodes[assignment[v]].append(v)

    # crossing wires: driver node -> sorted consumer part ids
    consumers: dict[int, set] = {}
    uses_pi: list[set] = [set() for _ in range(num_parts)]
    uses_cut: list[set] = [set() for _ in range(num_parts)]
    internal_fanout: list[dict] = [dict() for _ in range(num_parts)]
    for v, p in assignment.items():
        for f in comb.and_fanins(v):
            w = lit_var(f)
            if w == 0:
                continue
            if comb.is_leaf_id(w):
                uses_pi[p].add(w - 1)
            elif assignment[w] != p:
                consumers.setdefault(w, set()).add(p)
                uses_cut[p].add(w)
            else:
                internal_fanout[p][w] = internal_fanout[p].get(w, 0) + 1

    parts: list[PartPayload] = []
    boundary_pairs: list[dict] = []
    pin_index: list[dict] = []   # per part: original node id of a boundary PI -> local pi index
    pout_index: list[dict] = []  # per part: (driver, sink part) -> local po index

    for p in range(num_parts):
        nodes = part_nodes[p]
        pis = sorted(uses_pi[p])
        cuts = sorted(uses_cut[p])
        b = AigBuilder(len(pis) + len(cuts))
        local = {0: 0}
        for i, orig_leaf in enumerate(pis):
            local[1 + orig_leaf] = b.leaf_lit(i)
        for i, d in enumerate(cuts):
            local[d] = b.leaf_lit(len(pis) + i)

        def ml(l):
            return local[lit_var(l)] ^ lit_compl(l)

        for v in nodes:
            f0, f1 = comb.and_fanins(v)
            local[v] = b.add_and(ml(f0), ml(f1))

        pos = []
        po_names = []
        exposed = []  # original driver node per emitted PO
        pouts: dict = {}
        for d in sorted(consumers):
            if assignment.get(d) != p:
                continue
            # one PO per crossing wire; every sink's pair references it
            pouts[d] = len(pos)
            pos.append(local[d])
            po_names.append(cut_wire_name(d))
            exposed.append(d)
        for i, l in enumerate(comb.pos):
            w = lit_var(l)
            if w in assignment and assignment[w] == p:
                pos.append(local[w])
                po_names.append(orig_po_name(i))
                exposed.append(w)
        # expose anything not reachable from the POs so no owned logic is
        # dropped by builder compaction (dead logic must survive round-trip)
        reach = set()
        stack = list(exposed)
        while stack:
            u = stack.pop()
            if u in reach or assignment.get(u) != p:
                continue
            reach.add(u)
            for f in comb.and_fanins(u):
                stack.append(lit_var(f))
        for v in reversed(nodes):
            if v in reach:
                continue
            pos.append(local[v])
            po_names.append(keep_name(v))
            stack = [v]
            while stack:
                u = stack.pop()
                if u in reach or assignment.get(u) != p:
                    continue
                reach.add(u)
                for f in comb.and_fanins(u):
                    stack.append(lit_var(f))

        pi_names = [comb.pi_names[i] for i in pis] + [cut_wire_name(d) for d in cuts]
        net = b.finish(pos, pi_names=pi_names, po_names=po_names)
        node_map = {v: lit_var(local[v]) for v in nodes}
        parts.append(PartPayload(part_id=p, net=net, node_map=node_map))
        pin_index.append({d: len(pis) + i for i, d in enumerate(cuts)})
        pout_index.append(pouts)

    for d in sorted(consumers):
        dp = assignment[d]
        for q in sorted(consumers[d]):
            boundary_pairs.append({
                "wire": cut_wire_name(d),
                "driver_part": dp,
                "driver_local_po": pout_index[dp][d],
                "sink_part": q,
                "sink_local_pi": pin_index[q][d],
            })

    po_records = []
    for i, l in enumerate(comb.pos):
        w = lit_var(l)
        c = lit_compl(l)
        name = comb.po_names[i]
        if w == 0:
            po_records.append({"kind": "const", "value": c, "name": name})
        elif comb.is_leaf_id(w):
            po_records.append({
                "kind": "pi", "pi_name": comb.pi_names[w - 1], "compl": c, "name": name,
            })
        else:
            p = assignment[w]
            j = next(
                j for j, n in enumerate(parts[p].net.po_names) if n == orig_po_name(i)
            )
            po_records.append({
                "kind": "part", "part": p, "po_index": j, "compl": c, "name": name,
            })

    return PartitionManifest(
        parts=parts,
        boundary_pairs=boundary_pairs,
        pos=po_records,
        pi_names=list(comb.pi_names),
        po_names=list(comb.po_names),
        shell=shell,
        fallback_parts=list(fallback_parts or []),
    )


def part_filename(part_id: int) -> str:
    return "part_%04d.aig" % part_id


def save_manifest(manifest: PartitionManifest, rundir: str) -> None:
    """Persist the manifest as manifest.json plus one AIGER file per part."""
    os.makedirs(rundir, exist_ok=True)
    doc = {
        "parts": [
            {
                "part_id": p.part_id,
                "file": part_filename(p.part_id),
                "node_map": {str(k): v for k, v in sorted(p.node_map.items())},
            }
            for p in manifest.parts
        ],
        "boundary_pairs": manifest.boundary_pairs,
        "pos": manifest.pos,
        "pi_names": manifest.pi_names,
        "po_names": manifest.po_names,
        "latches": None if manifest.shell is None else {
            "num_orig_pis": manifest.shell.num_orig_pis,
            "num_orig_pos": manifest.shell.num_orig_pos,
            "inits": manifest.shell.inits,
            "latch_names": manifest.shell.latch_names,
        },
        "fallback_parts": manifest.fallback_parts,
    }
    with open(os.path.join(rundir, "manifest.json"), "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")
    for p in manifest.parts:
        with open(os.path.join(rundir, part_filename(p.part_id)), "wb") as f:
            f.write(write_aiger(p.net, fmt="binary"))


def load_manifest(rundir: str) -> PartitionManifest:
    with open(os.path.join(rundir, "manifest.json")) as f:
        doc = json.load(f)
    parts = []
    for rec in doc["parts"]:
        with open(os.path.join(rundir, rec["file"]), "rb") as f:
            net = parse_aiger(f.read())
        parts.append(PartPayload(
            part_id=rec["part_id"],
            net=net,
            node_map={int(k): v for k, v in rec["node_map"].items()},
        ))
    shell = None
    if doc.get("latches") is not None:
        la = doc["latches"]
        shell = SequentialShell(
            num_orig_pis=la["num_orig_pis"],
            num_orig_pos=la["num_orig_pos"],
            inits=la["inits"],
            latch_names=la["latch_names"],
        )
    return PartitionManifest(
        parts=parts,
        boundary_pairs=doc["boundary_pairs"],
        pos=doc["pos"],
        pi_names=doc["pi_names"],
        po_names=doc["po_names"],
        shell=shell,
        fallback_parts=doc.get("fallback_parts", []),
    )
