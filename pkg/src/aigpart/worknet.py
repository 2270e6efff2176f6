"""Mutable AIG with incremental structural hashing.

Supports node creation, fanout-tracking, node substitution with hash-table
maintenance (merging cascades upward), and garbage collection of
dereferenced cones.  Used by the optimization passes; converted back to an
immutable AigNetwork when a pass finishes.
"""

from __future__ import annotations

import random
from collections import Counter, deque

from .aig import AigNetwork, lit, lit_compl, lit_var


class WorkNet:
    def __init__(self, net: AigNetwork):
        assert net.num_latches == 0, "WorkNet operates on combinational views"
        self.num_leaves = net.num_leaves
        self.off = 1 + self.num_leaves
        n = net.num_nodes
        self.f0: list[int | None] = [None] * n
        self.f1: list[int | None] = [None] * n
        self.fanout: list[Counter] = [Counter() for _ in range(n)]
        self.po_ref: list[int] = [0] * n
        self.strash: dict[tuple[int, int], int] = {}
        self.pos = list(net.pos)
        self.pi_names = list(net.pi_names)
        self.po_names = list(net.po_names)
        self.sig: list[int] | None = None
        self.sig_width = 0
        for k, (a, b) in enumerate(net.ands):
            v = self.off + k
            self.f0[v], self.f1[v] = a, b
            self.strash[(a, b)] = v
            self.fanout[lit_var(a)][v] += 1
            self.fanout[lit_var(b)][v] += 1
        for l in self.pos:
            self.po_ref[lit_var(l)] += 1

    # queries

    def is_and(self, v: int) -> bool:
        return v >= self.off and self.f0[v] is not None

    def nrefs(self, v: int) -> int:
        return sum(self.fanout[v].values()) + self.po_ref[v]

    def live_and_count(self) -> int:
        return sum(1 for v in range(self.off, len(self.f0)) if self.f0[v] is not None)

    def and_ids(self) -> list[int]:
        return [v for v in range(self.off, len(self.f0)) if self.f0[v] is not None]

    # construction

    def init_sigs(self, width: int = 1024, seed: int = 0) -> None:
        """Attach random simulation signatures, kept current by add_and."""
        rng = random.Random(seed)
        self.sig_width = width
        self.sig = [0] * len(self.f0)
        mask = (1 << width) - 1
        self.sig[0] = 0
        for i in range(self.num_leaves):
            self.sig[1 + i] = rng.getrandbits(width)
        for v in range(self.off, len(self.f0)):
            if self.f0[v] is not None:
                self.sig[v] = self._sig_of(self.f0[v]) & self._sig_of(self.f1[v]) & mask

    def _sig_of(self, l: int) -> int:
        s = self.sig[lit_var(l)]
        if lit_compl(l):
            s ^= (1 << self.sig_width) - 1
        return s

    def add_and(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == 0:
            return 0
        if a == 1:
            return b
        if a == b:
            return a
        if a ^ b == 1:
            return 0
        hit = self.strash.get((a, b))
        if hit is not None:
            return lit(hit)
        v = len(self.f0)
        self.f0.append(a)
        self.f1.append(b)
        self.fanout.append(Counter())
        self.po_ref.append(0)
        self.strash[(a, b)] = v
        self.fanout[lit_var(a)][v] += 1
        self.fanout[lit_var(b)][v] += 1
        if self.sig is not None:
            self.sig.append(self._sig_of(a) & self._sig_of(b))
        return lit(v)

    # destruction

    def collect(self, v: int) -> int:
        """Recursively delete v's cone while reference counts are zero.
        Returns the number of deleted nodes."""
        if not self.is_and(v) or self.nrefs(v) > 0:
            return 0
        deleted = 0
        stack = [v]
        while stack:
            u = stack.pop()
            if not self.is_and(u) or self.nrefs(u) > 0:
                continue
            a, b = self.f0[u], self.f1[u]
            del self.strash[(a, b)]
            self.f0[u] = None
            self.f1[u] = None
            deleted += 1
            for f in (a, b):
                w = lit_var(f)
                self.fanout[w][u] -= 1
                if self.fanout[w][u] <= 0:
                    del self.fanout[w][u]
                if w >= self.off:
                    stack.append(w)
        return deleted

    # substitution

    def substitute(self, old: int, new_lit: int) -> None:
        """Redirect every fanout of node `old` to new_lit, maintaining the
        hash table.  Consumers whose fanin pair collapses or collides with
        an existing node are merged recursively."""
        pending = deque([(old, new_lit)])
        # queued target literals can go stale when the target node is itself
        # merged away before the entry is processed; chase the replacements
        repl: dict[int, int] = {}
        # deletion must wait for the queue to drain: a queued fold still owes
        # its target references, and collecting early would sweep the target
        dead: list[int] = []
        while pending:
            old, new = pending.popleft()
            while lit_var(new) in repl:
                new = repl[lit_var(new)] ^ lit_compl(new)
            if lit_var(new) == old:
                continue
            repl[old] = new
            # PO references
            if self.po_ref[old]:
                for i, l in enumerate(self.pos):
                    if lit_var(l) == old:
                        self.pos[i] = new ^ lit_compl(l)
                self.po_ref[lit_var(new)] += self.po_ref[old]
                self.po_ref[old] = 0
            for c in sorted(self.fanout[old]):
                a, b = self.f0[c], self.f1[c]
                na = (new ^ lit_compl(a)) if lit_var(a) == old else a
                nb = (new ^ lit_compl(b)) if lit_var(b) == old else b
                # detach c from its current fanins and the hash table
                del self.strash[(a, b)]
                for f in (a, b):
                    w = lit_var(f)
                    self.fanout[w][c] -= 1
                    if self.fanout[w][c] <= 0:
                        del self.fanout[w][c]
                if na > nb:
                    na, nb = nb, na
                folded = self._fold(na, nb)
                if folded is not None:
                    self.f0[c] = None
                    self.f1[c] = None
                    pending.append((c, folded))
                    continue
                other = self.strash.get((na, nb))
                if other is not None and other != c:
                    self.f0[c] = None
                    self.f1[c] = None
                    pending.append((c, lit(other)))
                    continue
                self.f0[c], self.f1[c] = na, nb
                self.strash[(na, nb)] = c
                self.fanout[lit_var(na)][c] += 1
                self.fanout[lit_var(nb)][c] += 1
            self.fanout[old] = Counter()
            dead.append(old)
        for u in dead:
            self.collect(u)

    @staticmethod
    def _fold(a: int, b: int) -> int | None:
        if a == 0:
            return 0
        if a == 1:
            return b
        if a == b:
            return a
        if a ^ b == 1:
            return 0
        return None

    # analysis helpers

    def mffc_nodes(self, v: int, stop: set | None = None) -> set:
        """Nodes freed if v were removed: the MFFC of v, optionally bounded
        by `stop` nodes that never join.  Non-mutating."""
        decs: Counter = Counter()
        members = {v}
        stack = [v]
        while stack:
            m = stack.pop()
            for f in (self.f0[m], self.f1[m]):
                w = lit_var(f)
                if not self.is_and(w) or (stop is not None and w in stop) or w in members:
                    continue
                decs[w] += 1
                if self.nrefs(w) - decs[w] == 0:
                    members.add(w)
                    stack.append(w)
        return members

    def cone_over_cut(self, v: int, cut: set) -> list | None:
        """Topologically ordered cone nodes from v down to the cut, or None
        if the cone escapes the cut or grows past a size limit."""
        order = []
        state: dict[int, int] = {}
        stack = [(v, 0)]
        while stack:
            u, phase = stack.pop()
            if phase == 0:
                if state.get(u) == 1:
                    continue
                state[u] = 0
                stack.append((u, 1))
                for f in (self.f0[u], self.f1[u]):
                    w = lit_var(f)
                    if w in cut:
                        continue
                    if not self.is_and(w):
                        return None  # escapes: reaches a leaf outside the cut
                    if state.get(w) != 1:
                        stack.append((w, 0))
            else:
                if state[u] != 1:
                    state[u] = 1
                    order.append(u)
            if len(order) > 256:
                return None
        return order

    def cut_tt(self, v: int, cut_sorted: list) -> int | None:
        """Truth table of v over the (sorted) cut leaves; None if invalid."""
        from .isop import var_mask

        if v in cut_sorted:
            i = cut_sorted.index(v)
            return var_mask(i, len(cut_sorted))
        if not self.is_and(v):
            return 0 if v == 0 else None
        cone = self.cone_over_cut(v, set(cut_sorted))
        if cone is None:
            return None
        n = len(cut_sorted)
        full = (1 << (1 << n)) - 1
        val = {w: var_mask(i, n) for i, w in enumerate(cut_sorted)}
        for u in cone:
            a = val[lit_var(self.f0[u])] ^ (full if lit_compl(self.f0[u]) else 0)
            b = val[lit_var(self.f1[u])] ^ (full if lit_compl(self.f1[u]) else 0)
            val[u] = a & b
        return val[v]

    def tfo_within(self, v: int, window: set) -> set:
        out = {v}
        changed = True
        while changed:
            changed = False
            for u in list(window):
                if u in out or not self.is_and(u):
                    continue
                if lit_var(self.f0[u]) in out or lit_var(self.f1[u]) in out:
                    out.add(u)
                    changed = True
        return out

    # export

    def to_network(self) -> AigNetwork:
        """Immutable snapshot with dense topological ids (reachable logic
        only)."""
        order = []
        state: dict[int, int] = {}
        stack = [(lit_var(l), 0) for l in self.pos]
        while stack:
            u, phase = stack.pop()
            if not self.is_and(u):
                continue
            if phase == 0:
                if state.get(u) == 1:
                    continue
                if state.get(u) == 0:
                    continue
                state[u] = 0
                stack.append((u, 1))
                for f in (self.f0[u], self.f1[u]):
                    w = lit_var(f)
                    if self.is_and(w) and state.get(w) != 1:
                        stack.append((w, 0))
            else:
                state[u] = 1
                order.append(u)
        remap = {0: 0}
        for i in range(self.num_leaves):
            remap[1 + i] = 1 + i
        ands = []
        for u in order:
            remap[u] = self.off + len(ands)
            a, b = self.f0[u], self.f1[u]
            ra = lit(remap[lit_var(a)], lit_compl(a))
            rb = lit(remap[lit_var(b)], lit_compl(b))
            if ra > rb:
                ra, rb = rb, ra
            ands.append((ra, rb))

        def m(l):
            return lit(remap[lit_var(l)], lit_compl(l))

        return AigNetwork(
            num_pis=self.num_leaves,
            ands=ands,
            pos=[m(l) for l in self.pos],
            pi_names=list(self.pi_names),
            po_names=list(self.po_names),
        )
