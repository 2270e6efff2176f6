"""Maximum fanout-free cones: per-node computation, whole-network disjoint
decomposition, and the compressed MFFC dependency graph.

The MFFC of an AND node v is the largest cone rooted at v such that any
non-PI node whose fanouts all stay inside the cone is itself inside.  It is
computed with the classic dereference walk: decrement fanin reference
counts from v; a node whose count reaches zero joins and recurses; counts
are restored before returning.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .aig import AigError, AigNetwork, fanout_counts, lit_var


@dataclass
class Mffc:
    root: int
    members: frozenset
    leaves: frozenset  # fanin frontier literals

    @property
    def size(self) -> int:
        return len(self.members)

    def leaf_nodes(self) -> set:
        return {lit_var(l) for l in self.leaves}


@dataclass
class MffcDecomposition:
    mffcs: list
    owner: dict = field(default_factory=dict)  # and node id -> mffc index


@dataclass
class CompressedGraph:
    weights: list          # vertex weight = member count, one per MFFC
    edges: list            # (src mffc index, dst mffc index, distinct wires)


def _walk(net: AigNetwork, refs: list[int], v: int, owned=None):
    """Dereference walk from v.  Returns (members, leaf literals, decrements);
    the caller restores refs from the decrement log."""
    members = {v}
    decs: list[int] = []
    leaves: set[int] = set()
    stack = [v]
    while stack:
        m = stack.pop()
        for f in net.and_fanins(m):
            w = lit_var(f)
            if not net.is_and_id(w) or (owned is not None and w in owned):
                leaves.add(f)
                continue
            if w in members:
                continue
            refs[w] -= 1
            decs.append(w)
            if refs[w] == 0:
                members.add(w)
                stack.append(w)
            else:
                leaves.add(f)
    # a literal is a leaf only if its node never joined
    leaves = {l for l in leaves if lit_var(l) not in members}
    return members, leaves, decs


def compute_mffc(net: AigNetwork, refs: list[int], v: int) -> Mffc:
    """MFFC of AND node v given current fanout counts; refs are restored."""
    if not net.is_and_id(v):
        raise AigError("node %d is not an AND node (PIs/constants have no MFFC)" % v)
    members, leaves, decs = _walk(net, refs, v)
    for w in decs:
        refs[w] += 1
    return Mffc(root=v, members=frozenset(members), leaves=frozenset(leaves))


def decompose(net: AigNetwork) -> MffcDecomposition:
    """Disjoint MFFC cover of all AND nodes.

    PO-driven roots are processed in PO order; roots newly exposed on MFFC
    frontiers in descending id order.  Deterministic.
    """
    refs = fanout_counts(net)
    owned: dict[int, int] = {}
    mffcs: list[Mffc] = []

    def extract(root):
        members, leaves, decs = _walk(net, refs, root, owned=owned)
        for w in decs:
            refs[w] += 1
        idx = len(mffcs)
        mffcs.append(Mffc(root=root, members=frozenset(members), leaves=frozenset(leaves)))
        for w in members:
            owned[w] = idx
        return sorted(
            {lit_var(l) for l in leaves if net.is_and_id(lit_var(l))} - owned.keys(),
            reverse=True,
        )

    exposed: list[int] = []
    po_roots = []
    for l in net.pos + [la.next_state for la in net.latches]:
        w = lit_var(l)
        if net.is_and_id(w):
            po_roots.append(w)
    for root in po_roots:
        if root in owned:
            continue
        exposed.extend(extract(root))
    # frontier roots, largest id first (a max-heap over negated ids)
    heap = [-w for w in exposed]
    heapq.heapify(heap)
    while heap:
        root = -heapq.heappop(heap)
        if root in owned:
            continue
        for w in extract(root):
            heapq.heappush(heap, -w)
    # dangling cover (zero-fanout nodes never reached from any PO)
    for v in range(net.num_nodes - 1, net.and_offset - 1, -1):
        if v not in owned:
            for w in extract(v):
                pass
    return MffcDecomposition(mffcs=mffcs, owner=owned)


def containment_check(net: AigNetwork, v: int, w: int) -> bool:
    """True iff (w in MFFC_v) implies MFFC_w is contained in MFFC_v."""
    refs = fanout_counts(net)
    mv = compute_mffc(net, refs, v)
    if w not in mv.members:
        return True
    mw = compute_mffc(net, refs, w)
    return mw.members <= mv.members


def build_compressed_graph(net: AigNetwork, decomposition: MffcDecomposition) -> CompressedGraph:
    """Quotient graph: one vertex per MFFC, edge weight = number of distinct
    driver wires crossing from src members into dst members."""
    owner = decomposition.owner
    wires: dict[tuple[int, int], set] = {}
    for mi, mf in enumerate(decomposition.mffcs):
        for v in mf.members:
            for f in net.and_fanins(v):
                w = lit_var(f)
                if not net.is_and_id(w):
                    continue
                src = owner[w]
                if src != mi:
                    wires.setdefault((src, mi), set()).add(w)
    edges = [(s, d, len(ws)) for (s, d), ws in sorted(wires.items())]
    weights = [mf.size for mf in decomposition.mffcs]
    return CompressedGraph(weights=weights, edges=edges)


def dump_compressed(graph: CompressedGraph) -> tuple[str, str]:
    """Debug dump: `src dst weight` edge list and a vertex-weight file."""
    edge_txt = "".join("%d %d %d\n" % e for e in graph.edges)
    vw_txt = "".join("%d %d\n" % (i, w) for i, w in enumerate(graph.weights))
    return edge_txt, vw_txt
