"""MFFC computation against a brute-force maximal-FFC oracle, decomposition
disjointness/coverage, the separation property, and the compressed graph."""

import random
from itertools import combinations

from aigpart.aig import AigBuilder, fanout_counts, lit_var
from aigpart.bench import random_aig
from aigpart.mffc import (
    build_compressed_graph,
    compute_mffc,
    containment_check,
    decompose,
)


def brute_force_mffc(net, v):
    """Largest fanout-free cone at v by exhaustive subset search.

    A valid FFC contains v; every other member has all its fanouts (AND
    consumers and PO references) inside the cone and reaches v through
    consumers inside the cone.
    """
    off = net.and_offset
    consumers = {u: set() for u in range(off, net.num_nodes)}
    po_refs = set()
    for k in range(net.num_ands):
        u = off + k
        for f in net.and_fanins(u):
            w = lit_var(f)
            if w >= off:
                consumers[w].add(u)
    for l in net.pos:
        if lit_var(l) >= off:
            po_refs.add(lit_var(l))

    ands = [u for u in range(off, net.num_nodes) if u != v]
    best = {v}
    for r in range(len(ands) + 1):
        for extra in combinations(ands, r):
            cone = set(extra) | {v}
            ok = True
            for m in extra:
                if m in po_refs or not consumers[m] <= cone:
                    ok = False
                    break
            if not ok:
                continue
            # every member must reach v via consumers inside the cone
            reach = {v}
            changed = True
            while changed:
                changed = False
                for m in cone - reach:
                    if consumers[m] & reach:
                        reach.add(m)
                        changed = True
            if reach == cone and len(cone) > len(best):
                best = cone
    return best


def test_mffc_matches_brute_force_oracle():
    rng = random.Random(3)
    checked = 0
    for trial in range(80):
        net = random_aig(rng.randint(2, 5), rng.randint(2, 12),
                         num_pos=rng.randint(1, 2), seed=trial)
        if net.num_ands == 0 or net.num_ands > 12:
            continue
        refs = fanout_counts(net)
        for v in range(net.and_offset, net.num_nodes):
            got = compute_mffc(net, refs, v)
            want = brute_force_mffc(net, v)
            assert set(got.members) == want, (trial, v)
            checked += 1
    assert checked > 100


def test_refcounts_restored():
    net = random_aig(5, 30, num_pos=2, seed=7)
    refs = fanout_counts(net)
    snapshot = list(refs)
    for v in range(net.and_offset, net.num_nodes):
        compute_mffc(net, refs, v)
        assert refs == snapshot


def test_mffc_of_chain_is_whole_chain():
    b = AigBuilder(4)
    l = b.leaf_lit(0)
    for i in range(1, 4):
        l = b.add_and(l, b.leaf_lit(i))
    net = b.finish([l])
    refs = fanout_counts(net)
    m = compute_mffc(net, refs, lit_var(l))
    assert m.size == 3


def test_shared_node_excluded():
    # two POs share a node: it belongs to no single-rooted MFFC above it
    b = AigBuilder(3)
    shared = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    top = b.add_and(shared, b.leaf_lit(2))
    net = b.finish([top, shared])
    refs = fanout_counts(net)
    m = compute_mffc(net, refs, lit_var(top))
    assert lit_var(shared) not in m.members
    assert m.size == 1


def test_decompose_disjoint_and_covering():
    rng = random.Random(11)
    for trial in range(60):
        net = random_aig(rng.randint(3, 10), rng.randint(5, 400),
                         num_pos=rng.randint(1, 4), seed=1000 + trial)
        dec = decompose(net)
        seen = set()
        for mf in dec.mffcs:
            assert not (mf.members & seen)
            seen |= mf.members
        assert seen == set(range(net.and_offset, net.num_nodes))
        for v in seen:
            assert dec.owner[v] is not None
            assert v in dec.mffcs[dec.owner[v]].members


def test_separation_property():
    rng = random.Random(19)
    for trial in range(25):
        net = random_aig(rng.randint(3, 8), rng.randint(5, 60),
                         num_pos=rng.randint(1, 3), seed=2000 + trial)
        if net.num_ands > 60:
            continue
        refs = fanout_counts(net)
        mffcs = {
            v: set(compute_mffc(net, refs, v).members)
            for v in range(net.and_offset, net.num_nodes)
        }
        for v, w in combinations(mffcs, 2):
            a, b = mffcs[v], mffcs[w]
            inter = a & b
            assert not inter or inter == a or inter == b, (trial, v, w)
            assert containment_check(net, v, w)


def test_compressed_graph_hand_example():
    # chain of two 1-node MFFCs: shared drives both POs indirectly
    b = AigBuilder(3)
    lo = b.add_and(b.leaf_lit(0), b.leaf_lit(1))
    hi = b.add_and(lo, b.leaf_lit(2))
    net = b.finish([hi, lo])
    dec = decompose(net)
    g = build_compressed_graph(net, dec)
    assert sorted(g.weights) == [1, 1]
    assert len(g.edges) == 1
    src, dst, w = g.edges[0]
    assert w == 1
    assert dec.mffcs[src].root == lit_var(lo)
    assert dec.mffcs[dst].root == lit_var(hi)


def test_compressed_graph_is_acyclic():
    # every crossing wire leaves from an MFFC root, so edges ascend root ids
    rng = random.Random(23)
    for trial in range(20):
        net = random_aig(rng.randint(4, 10), rng.randint(20, 300),
                         num_pos=rng.randint(1, 4), seed=3000 + trial)
        dec = decompose(net)
        g = build_compressed_graph(net, dec)
        for src, dst, _ in g.edges:
            assert dec.mffcs[src].root < dec.mffcs[dst].root


def test_vertex_weights_sum_to_and_count():
    net = random_aig(8, 200, num_pos=3, seed=5)
    dec = decompose(net)
    g = build_compressed_graph(net, dec)
    assert sum(g.weights) == net.num_ands
