"""The action alphabet of equivalence-preserving DAG optimizations:
balance, rewrite (+zero-gain), refactor (+zero-gain), resubstitute.

Actions serialize as the tokens b rw rwz rf rfz rs.  Every action accepts
any network (latches are cut and reattached around the pass) and returns a
strashed, functionally equivalent network.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

from .aig import (
    AigBuilder,
    AigNetwork,
    extract_comb,
    fanout_counts,
    levels,
    lit,
    lit_compl,
    lit_var,
    reattach_latches,
    strash,
)
from .isop import resynth_tt
from .worknet import WorkNet

ACTION_TOKENS = ("b", "rw", "rwz", "rf", "rfz", "rs")

CUT_SIZE = 4
CUTS_PER_NODE = 8
REFACTOR_MAX_LEAVES = 10
RESUB_CUT_LEAVES = 12
RESUB_MAX_DIVISORS = 48
RESUB_SIG_WIDTH = 1024


@dataclass
class StepStats:
    nodes_before: int
    nodes_after: int
    depth_before: int
    depth_after: int
    wall_time: float


def _comb_pass(net: AigNetwork, fn) -> AigNetwork:
    """Run a combinational pass, cutting and restoring latches."""
    if net.num_latches == 0:
        return fn(strash(net))
    comb, shell = extract_comb(net)
    out = fn(strash(comb))
    return reattach_latches(out, shell)


def balance(net: AigNetwork) -> AigNetwork:
    """Rebuild maximal AND trees depth-minimally: sort operands by level and
    repeatedly combine the two shallowest.  Depth never increases."""
    return _comb_pass(net, _balance_comb)


def _balance_comb(net: AigNetwork) -> AigNetwork:
    po_use = [0] * net.num_nodes
    use_count = [0] * net.num_nodes
    compl_use = [0] * net.num_nodes
    for f0, f1 in net.ands:
        for f in (f0, f1):
            use_count[lit_var(f)] += 1
            compl_use[lit_var(f)] |= lit_compl(f)
    for l in net.pos:
        po_use[lit_var(l)] = 1

    off = net.and_offset

    def must_build(v):
        return po_use[v] or use_count[v] != 1 or compl_use[v]

    def conjuncts(v):
        # flatten single-fanout, non-complemented AND fanins into one list
        out = []
        stack = [lit(v)]
        while stack:
            l = stack.pop()
            w = lit_var(l)
            if (
                not lit_compl(l)
                and net.is_and_id(w)
                and not must_build(w)
                and w != v
            ):
                stack.extend(net.and_fanins(w))
            elif w == v and not lit_compl(l) and l == lit(v):
                stack.extend(net.and_fanins(w))
            else:
                out.append(l)
        return out

    b = AigBuilder(net.num_leaves)
    built = [0] * net.num_nodes
    lev = {0: 0, 1: 0}
    for i in range(net.num_leaves):
        built[1 + i] = b.leaf_lit(i)
        lev[built[1 + i] >> 1] = 0

    def new_level(l):
        return lev[lit_var(l)]

    for k in range(net.num_ands):
        v = off + k
        if not must_build(v):
            continue
        heap = []
        for c in conjuncts(v):
            ml = built[lit_var(c)] ^ lit_compl(c)
            heapq.heappush(heap, (new_level(ml), ml))
        while len(heap) > 1:
            l0 = heapq.heappop(heap)
            l1 = heapq.heappop(heap)
            nl = b.add_and(l0[1], l1[1])
            if lit_var(nl) not in lev:
                lev[lit_var(nl)] = 1 + max(l0[0], l1[0])
            heapq.heappush(heap, (lev[lit_var(nl)], nl))
        built[v] = heap[0][1]

    def m(l):
        return built[lit_var(l)] ^ lit_compl(l)

    return b.finish(
        [m(l) for l in net.pos],
        pi_names=net.pi_names,
        po_names=net.po_names,
    )


def _enumerate_cuts(w: WorkNet, v: int, cutsets: dict) -> list:
    """Priority cuts: merge the fanin cut lists, keep the smallest few."""
    trivial = frozenset((v,))
    c0 = cutsets.get(lit_var(w.f0[v]), [frozenset((lit_var(w.f0[v]),))])
    c1 = cutsets.get(lit_var(w.f1[v]), [frozenset((lit_var(w.f1[v]),))])
    merged = set()
    for a in c0:
        for cset in c1:
            u = a | cset
            if len(u) <= CUT_SIZE:
                merged.add(u)
    # dominance filter: drop any cut that is a superset of another
    cuts = sorted(merged, key=lambda s: (len(s), sorted(s)))
    kept = []
    for c in cuts:
        if not any(k < c for k in kept):
            kept.append(c)
        if len(kept) >= CUTS_PER_NODE - 1:
            break
    return [trivial] + kept


def _gc_created(w: WorkNet, created: list) -> None:
    for u in reversed(created):
        if w.is_and(u) and w.nrefs(u) == 0:
            w.collect(u)


def _try_replace(w: WorkNet, v: int, cut_sorted: list, tt: int, saved: int, zero_gain: bool):
    """Build a resynthesized cone for tt over the cut; return
    (gain, cand_lit, created_ids) when acceptable, else None.

    Never garbage-collects: a later trial may strash-hit nodes built here,
    so the caller frees all trial nodes only after the final substitution.
    """
    before = len(w.f0)
    cand = resynth_tt(tt, len(cut_sorted), [lit(x) for x in cut_sorted], w.add_and)
    created = list(range(before, len(w.f0)))
    added = len(created)
    gain = saved - added
    if (gain > 0 or (zero_gain and gain >= 0)) and lit_var(cand) != v:
        # a strash hit can return existing structure whose cone runs through
        # v itself; substituting would create a cycle
        cv = lit_var(cand)
        if w.is_and(cv):
            cone = w.cone_over_cut(cv, set(cut_sorted))
            if cone is None or v in cone:
                return None
        # sanity: never install a functionally wrong cone
        new_tt = w.cut_tt(lit_var(cand), cut_sorted)
        if new_tt is not None:
            if lit_compl(cand):
                new_tt = ~new_tt & ((1 << (1 << len(cut_sorted))) - 1)
            if new_tt == tt:
                return gain, cand, created
    return None


def rewrite(net: AigNetwork, zero_gain: bool = False) -> AigNetwork:
    """Cut-based rewriting: for each node, resynthesize the function of a
    small cut and accept when it frees more nodes than it adds."""
    return _comb_pass(net, lambda c: _guard_count(c, _rewrite_comb(c, zero_gain), zero_gain))


def _rewrite_comb(net: AigNetwork, zero_gain: bool) -> AigNetwork:
    w = WorkNet(net)
    cutsets: dict[int, list] = {}
    for i in range(w.num_leaves):
        cutsets[1 + i] = [frozenset((1 + i,))]
    for v in list(range(w.off, len(w.f0))):
        if not w.is_and(v):
            continue
        cuts = _enumerate_cuts(w, v, cutsets)
        cutsets[v] = cuts
        best = None
        first_trial = len(w.f0)
        for cut in cuts:
            if not 2 <= len(cut) <= CUT_SIZE or v in cut:
                continue
            cut_sorted = sorted(cut)
            tt = w.cut_tt(v, cut_sorted)
            if tt is None:
                continue
            saved = len(w.mffc_nodes(v, stop=set(cut)))
            res = _try_replace(w, v, cut_sorted, tt, saved, zero_gain)
            if res is not None and (best is None or res[0] > best[0]):
                best = res
        # trials may strash-hit each other's nodes, so gc only after the
        # winner (if any) has been wired in and holds real references
        if best is not None:
            w.substitute(v, best[1])
        _gc_created(w, list(range(first_trial, len(w.f0))))
    return w.to_network()


def refactor(
    net: AigNetwork, zero_gain: bool = False, max_leaves: int = REFACTOR_MAX_LEAVES
) -> AigNetwork:
    """Collapse each node's MFFC into a truth table and resynthesize it."""
    return _comb_pass(
        net, lambda c: _guard_count(c, _refactor_comb(c, zero_gain, max_leaves), zero_gain)
    )


def _refactor_comb(net: AigNetwork, zero_gain: bool, max_leaves: int) -> AigNetwork:
    w = WorkNet(net)
    for v in list(range(w.off, len(w.f0))):
        if not w.is_and(v):
            continue
        members = w.mffc_nodes(v)
        leaves = set()
        for u in members:
            for f in (w.f0[u], w.f1[u]):
                fv = lit_var(f)
                if fv not in members:
                    leaves.add(fv)
        if not 2 <= len(leaves) <= max_leaves:
            continue
        cut_sorted = sorted(leaves)
        tt = w.cut_tt(v, cut_sorted)
        if tt is None:
            continue
        first_trial = len(w.f0)
        res = _try_replace(w, v, cut_sorted, tt, len(members), zero_gain)
        if res is not None:
            w.substitute(v, res[1])
        _gc_created(w, list(range(first_trial, len(w.f0))))
    return w.to_network()


def _resub_cut(w: WorkNet, v: int, max_leaves: int) -> list:
    """Grow a cut below v by expanding the deepest AND leaf while the leaf
    count permits."""
    cut = {lit_var(w.f0[v]), lit_var(w.f1[v])}
    for _ in range(3 * max_leaves):
        cands = sorted(u for u in cut if w.is_and(u))
        expanded = False
        for u in cands:
            fan = {lit_var(w.f0[u]), lit_var(w.f1[u])}
            if len((cut - {u}) | fan) <= max_leaves:
                cut = (cut - {u}) | fan
                expanded = True
                break
        if not expanded:
            break
    return sorted(cut)


def resub(net: AigNetwork) -> AigNetwork:
    """Signature-guided resubstitution: replace a node by an existing
    divisor (or an AND/OR of two) with the same function, validated exactly
    over the window cut."""
    return _comb_pass(net, lambda c: _guard_count(c, _resub_comb(c), False))


def _resub_comb(net: AigNetwork) -> AigNetwork:
    w = WorkNet(net)
    w.init_sigs(RESUB_SIG_WIDTH, seed=0x5EED)
    mask = (1 << RESUB_SIG_WIDTH) - 1
    for v in list(range(w.off, len(w.f0))):
        if not w.is_and(v):
            continue
        doomed = w.mffc_nodes(v)
        saved = len(doomed)
        cut = _resub_cut(w, v, RESUB_CUT_LEAVES)
        # window: forward closure of the cut
        window = set(cut)
        queue = list(cut)
        while queue and len(window) < 4 * RESUB_MAX_DIVISORS:
            u = queue.pop(0)
            for c in sorted(w.fanout[u]):
                if c in window or not w.is_and(c):
                    continue
                if lit_var(w.f0[c]) in window and lit_var(w.f1[c]) in window:
                    window.add(c)
                    queue.append(c)
        tfo = w.tfo_within(v, window)
        divisors = sorted(window - tfo - doomed)[:RESUB_MAX_DIVISORS]
        sv = w.sig[v]
        tt_v = None
        done = False
        # 0-resub: an existing node with the same signature
        for d in divisors:
            sd = w.sig[d]
            if sd == sv or sd == (~sv & mask):
                neg = 1 if sd != sv else 0
                if tt_v is None:
                    tt_v = w.cut_tt(v, cut)
                td = w.cut_tt(d, cut)
                if tt_v is None or td is None:
                    continue
                full = (1 << (1 << len(cut))) - 1
                if (td ^ (full if neg else 0)) == tt_v:
                    w.substitute(v, lit(d, neg))
                    done = True
                    break
        if done or saved < 2:
            continue
        # 1-resub: AND/OR of two divisors
        for i, d1 in enumerate(divisors):
            if done:
                break
            s1 = w.sig[d1]
            for d2 in divisors[i + 1 :]:
                s2 = w.sig[d2]
                for p1 in (0, 1):
                    for p2 in (0, 1):
                        sc = (s1 ^ (mask if p1 else 0)) & (s2 ^ (mask if p2 else 0))
                        if sc == sv:
                            neg = 0
                        elif sc == (~sv & mask):
                            neg = 1
                        else:
                            continue
                        if tt_v is None:
                            tt_v = w.cut_tt(v, cut)
                        t1 = w.cut_tt(d1, cut)
                        t2 = w.cut_tt(d2, cut)
                        if tt_v is None or t1 is None or t2 is None:
                            continue
                        full = (1 << (1 << len(cut))) - 1
                        tc = (t1 ^ (full if p1 else 0)) & (t2 ^ (full if p2 else 0))
                        if (tc ^ (full if neg else 0)) != tt_v:
                            continue
                        before = len(w.f0)
                        cand = w.add_and(lit(d1, p1), lit(d2, p2))
                        added = len(w.f0) - before
                        if saved - added <= 0 or lit_var(cand) == v:
                            _gc_created(w, list(range(before, len(w.f0))))
                            continue
                        w.substitute(v, cand ^ neg)
                        done = True
                        break
                    if done:
                        break
                if done:
                    break
    return w.to_network()


def _guard_count(inp: AigNetwork, out: AigNetwork, zero_gain: bool) -> AigNetwork:
    """Greedy local gains can in rare cases lose globally; non-zero-gain
    passes must never grow the network."""
    if not zero_gain and out.num_ands > inp.num_ands:
        return inp
    return out


def baseline_script(net: AigNetwork) -> AigNetwork:
    """The fixed comparison flow: b; rw; rf; b; rw; rwz; b; rfz; rwz; b."""
    for tok in ("b", "rw", "rf", "b", "rw", "rwz", "b", "rfz", "rwz", "b"):
        net, _ = apply_action(net, tok)
    return net


_ACTIONS = {
    "b": balance,
    "rw": lambda n: rewrite(n, zero_gain=False),
    "rwz": lambda n: rewrite(n, zero_gain=True),
    "rf": lambda n: refactor(n, zero_gain=False),
    "rfz": lambda n: refactor(n, zero_gain=True),
    "rs": resub,
}


def apply_action(net: AigNetwork, action: str) -> tuple[AigNetwork, StepStats]:
    if action not in _ACTIONS:
        raise ValueError("unknown action %r" % action)
    _, d0 = levels(net)
    n0 = net.num_ands
    t0 = time.perf_counter()
    out = _ACTIONS[action](net)
    wall = time.perf_counter() - t0
    _, d1 = levels(out)
    return out, StepStats(
        nodes_before=n0,
        nodes_after=out.num_ands,
        depth_before=d0,
        depth_after=d1,
        wall_time=wall,
    )
