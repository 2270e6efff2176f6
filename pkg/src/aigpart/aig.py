"""And-Inverter Graph data model.

A network is a DAG of two-input AND nodes over complemented-edge literals.
Node ids are dense and topologically ordered: id 0 is the constant, ids
1..num_pis are primary inputs, the next num_latches ids are latch outputs,
and AND nodes follow.  A literal encodes ``2 * node_id + complement_bit``;
literal 0 is constant false, literal 1 constant true.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace


class AigError(Exception):
    pass


class InterfaceMismatchError(AigError):
    pass


# literal helpers

def lit(var: int, compl: int = 0) -> int:
    return 2 * var + compl


def lit_var(l: int) -> int:
    return l >> 1


def lit_compl(l: int) -> int:
    return l & 1


def lit_not(l: int) -> int:
    return l ^ 1


CONST0 = 0
CONST1 = 1


@dataclass
class Latch:
    next_state: int  # literal
    init: int = 0    # 0, 1, or 2 for X


@dataclass
class SequentialShell:
    """Latch bookkeeping needed to reverse extract_comb."""

    num_orig_pis: int
    num_orig_pos: int
    inits: list[int]
    latch_names: list[str]

    @property
    def num_latches(self) -> int:
        return len(self.inits)


def latch_out_name(k: int) -> str:
    return "__lat_out_%d" % k


def latch_in_name(k: int) -> str:
    return "__lat_in_%d" % k


@dataclass
class AigNetwork:
    num_pis: int
    ands: list[tuple[int, int]]
    pos: list[int]
    latches: list[Latch] = field(default_factory=list)
    pi_names: list[str] = None
    po_names: list[str] = None
    latch_names: list[str] = None

    def __post_init__(self):
        if self.pi_names is None:
            self.pi_names = ["i%d" % k for k in range(self.num_pis)]
        if self.po_names is None:
            self.po_names = ["o%d" % k for k in range(len(self.pos))]
        if self.latch_names is None:
            self.latch_names = ["l%d" % k for k in range(len(self.latches))]

    @property
    def num_latches(self) -> int:
        return len(self.latches)

    @property
    def num_leaves(self) -> int:
        """PIs plus latch outputs: everything an AND may treat as an input."""
        return self.num_pis + len(self.latches)

    @property
    def num_ands(self) -> int:
        return len(self.ands)

    @property
    def num_nodes(self) -> int:
        return 1 + self.num_leaves + len(self.ands)

    @property
    def and_offset(self) -> int:
        return 1 + self.num_leaves

    def is_and_id(self, v: int) -> bool:
        return v >= self.and_offset

    def is_leaf_id(self, v: int) -> bool:
        return 1 <= v < self.and_offset

    def and_fanins(self, v: int) -> tuple[int, int]:
        return self.ands[v - self.and_offset]

    def validate(self) -> None:
        off = self.and_offset
        for k, (f0, f1) in enumerate(self.ands):
            vid = off + k
            if not (f0 <= f1):
                raise AigError("node %d: fanins not in canonical order" % vid)
            if lit_var(f0) >= vid or lit_var(f1) >= vid:
                raise AigError("node %d: fanin refers forward" % vid)
        for l in self.pos:
            if lit_var(l) >= self.num_nodes:
                raise AigError("PO literal %d out of range" % l)
        for la in self.latches:
            if lit_var(la.next_state) >= self.num_nodes:
                raise AigError("latch next-state literal out of range")

    def copy(self) -> "AigNetwork":
        return replace(
            self,
            ands=list(self.ands),
            pos=list(self.pos),
            latches=[replace(la) for la in self.latches],
            pi_names=list(self.pi_names),
            po_names=list(self.po_names),
            latch_names=list(self.latch_names),
        )

    def structurally_equal(self, other: "AigNetwork") -> bool:
        return (
            self.num_pis == other.num_pis
            and self.ands == other.ands
            and self.pos == other.pos
            and [(l.next_state, l.init) for l in self.latches]
            == [(l.next_state, l.init) for l in other.latches]
        )


class AigBuilder:
    """Incremental AIG construction with structural hashing.

    ``add_and`` folds constants (x*0=0, x*1=x, x*x=x, x*!x=0) and returns an
    existing literal when the fanin pair was seen before.  ``finish`` keeps
    only nodes reachable from the outputs and renumbers them densely.
    """

    def __init__(self, num_leaves: int):
        self.num_leaves = num_leaves
        self.f0: list[int] = []
        self.f1: list[int] = []
        self.table: dict[tuple[int, int], int] = {}

    def leaf_lit(self, index: int, compl: int = 0) -> int:
        if not 0 <= index < self.num_leaves:
            raise AigError("leaf index %d out of range" % index)
        return lit(1 + index, compl)

    @property
    def num_nodes(self) -> int:
        return 1 + self.num_leaves + len(self.f0)

    def add_and(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == CONST0:
            return CONST0
        if a == CONST1:
            return b
        if a == b:
            return a
        if a ^ b == 1:
            return CONST0
        key = (a, b)
        hit = self.table.get(key)
        if hit is not None:
            return lit(hit)
        vid = self.num_nodes
        self.f0.append(a)
        self.f1.append(b)
        self.table[key] = vid
        return lit(vid)

    def finish(
        self,
        pos: list[int],
        pi_names=None,
        po_names=None,
        latch_spec: list[tuple[int, int]] | None = None,
        latch_names=None,
    ) -> AigNetwork:
        """Produce a compacted network.

        latch_spec pairs (next_lit, init); the last len(latch_spec) leaves
        become latch outputs.
        """
        latch_spec = latch_spec or []
        num_pis = self.num_leaves - len(latch_spec)
        off = 1 + self.num_leaves
        roots = [lit_var(l) for l in pos] + [lit_var(n) for n, _ in latch_spec]
        reach = set()
        stack = [v for v in roots if v >= off]
        while stack:
            v = stack.pop()
            if v in reach:
                continue
            reach.add(v)
            for f in (self.f0[v - off], self.f1[v - off]):
                fv = lit_var(f)
                if fv >= off:
                    stack.append(fv)
        remap = {0: 0}
        for i in range(self.num_leaves):
            remap[1 + i] = 1 + i
        new_ands = []
        for k in range(len(self.f0)):
            v = off + k
            if v not in reach:
                continue
            remap[v] = off + len(new_ands)
            a = lit(remap[lit_var(self.f0[k])], lit_compl(self.f0[k]))
            b = lit(remap[lit_var(self.f1[k])], lit_compl(self.f1[k]))
            if a > b:
                a, b = b, a
            new_ands.append((a, b))

        def m(l):
            return lit(remap[lit_var(l)], lit_compl(l))

        latches = [Latch(m(n), init) for n, init in latch_spec]
        return AigNetwork(
            num_pis=num_pis,
            ands=new_ands,
            pos=[m(l) for l in pos],
            latches=latches,
            pi_names=list(pi_names) if pi_names is not None else None,
            po_names=list(po_names) if po_names is not None else None,
            latch_names=list(latch_names) if latch_names is not None else None,
        )


def strash(net: AigNetwork) -> AigNetwork:
    """Structurally hash a network: fold constants, merge duplicate AND
    pairs, and drop logic unreachable from the outputs."""
    b = AigBuilder(net.num_leaves)
    m = [0] * net.num_nodes
    for i in range(net.num_leaves):
        m[1 + i] = b.leaf_lit(i)

    def ml(l):
        return m[lit_var(l)] ^ lit_compl(l)

    off = net.and_offset
    for k, (f0, f1) in enumerate(net.ands):
        m[off + k] = b.add_and(ml(f0), ml(f1))
    latch_spec = [(ml(la.next_state), la.init) for la in net.latches]
    return b.finish(
        [ml(l) for l in net.pos],
        pi_names=net.pi_names,
        po_names=net.po_names,
        latch_spec=latch_spec,
        latch_names=net.latch_names,
    )


def levels(net: AigNetwork) -> tuple[list[int], int]:
    """Per-node logic level and network depth.  Leaves are level 0; an AND
    is 1 + max of its fanin levels; depth is the max over PO drivers."""
    lev = [0] * net.num_nodes
    off = net.and_offset
    for k, (f0, f1) in enumerate(net.ands):
        lev[off + k] = 1 + max(lev[lit_var(f0)], lev[lit_var(f1)])
    depth = 0
    for l in net.pos:
        depth = max(depth, lev[lit_var(l)])
    for la in net.latches:
        depth = max(depth, lev[lit_var(la.next_state)])
    return lev, depth


def simulate(net: AigNetwork, leaf_vectors: list[int], width: int) -> list[int]:
    """Word-parallel simulation.

    leaf_vectors holds one width-bit integer per leaf (PIs then latch
    outputs; latches are cut points).  Returns one vector per PO.
    """
    if len(leaf_vectors) != net.num_leaves:
        raise AigError(
            "expected %d leaf vectors, got %d" % (net.num_leaves, len(leaf_vectors))
        )
    mask = (1 << width) - 1
    for v in leaf_vectors:
        if v < 0 or v > mask:
            raise AigError("leaf vector wider than %d bits" % width)
    val = [0] * net.num_nodes
    for i, v in enumerate(leaf_vectors):
        val[1 + i] = v
    off = net.and_offset
    for k, (f0, f1) in enumerate(net.ands):
        a = val[lit_var(f0)] ^ (mask if lit_compl(f0) else 0)
        b = val[lit_var(f1)] ^ (mask if lit_compl(f1) else 0)
        val[off + k] = a & b
    out = []
    for l in net.pos:
        v = val[lit_var(l)]
        out.append(v ^ mask if lit_compl(l) else v)
    return out


def eval_scalar(net: AigNetwork, leaf_values: list[int]) -> list[int]:
    """Single-pattern recursive evaluation; the independent oracle for
    simulate()."""
    return [v & 1 for v in simulate_scalar_all(net, leaf_values)[1]]


def simulate_scalar_all(net, leaf_values):
    val = [0] * net.num_nodes
    for i, v in enumerate(leaf_values):
        val[1 + i] = v & 1
    off = net.and_offset

    def ev(v):
        if val[v] is not None:
            return val[v]
        f0, f1 = net.and_fanins(v)
        a = ev(lit_var(f0)) ^ lit_compl(f0)
        b = ev(lit_var(f1)) ^ lit_compl(f1)
        val[v] = a & b
        return val[v]

    # mark AND nodes unknown, then evaluate demand-driven
    for k in range(net.num_ands):
        val[off + k] = None
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, net.num_nodes * 2 + 100))
    try:
        outs = []
        for l in net.pos:
            outs.append(ev(lit_var(l)) ^ lit_compl(l))
    finally:
        sys.setrecursionlimit(old)
    return val, outs


def fanout_counts(net: AigNetwork) -> list[int]:
    """Reference count per node: AND fanin uses plus PO and latch
    next-state uses."""
    refs = [0] * net.num_nodes
    for f0, f1 in net.ands:
        refs[lit_var(f0)] += 1
        refs[lit_var(f1)] += 1
    for l in net.pos:
        refs[lit_var(l)] += 1
    for la in net.latches:
        refs[lit_var(la.next_state)] += 1
    return refs


def extract_comb(net: AigNetwork) -> tuple[AigNetwork, SequentialShell]:
    """Cut the network at its latches.

    Latch outputs become pseudo-PIs named __lat_out_<k>, next-states become
    pseudo-POs named __lat_in_<k>.  The shell records inits and names so the
    cut can be reversed exactly by reattach_latches.
    """
    L = net.num_latches
    shell = SequentialShell(
        num_orig_pis=net.num_pis,
        num_orig_pos=len(net.pos),
        inits=[la.init for la in net.latches],
        latch_names=list(net.latch_names),
    )
    comb = AigNetwork(
        num_pis=net.num_pis + L,
        ands=list(net.ands),
        pos=list(net.pos) + [la.next_state for la in net.latches],
        latches=[],
        pi_names=list(net.pi_names) + [latch_out_name(k) for k in range(L)],
        po_names=list(net.po_names) + [latch_in_name(k) for k in range(L)],
        latch_names=[],
    )
    return comb, shell


def reattach_latches(comb: AigNetwork, shell: SequentialShell) -> AigNetwork:
    """Inverse of extract_comb; matches pseudo PIs/POs by name."""
    L = shell.num_latches
    pi_pos = {n: i for i, n in enumerate(comb.pi_names)}
    po_pos = {n: i for i, n in enumerate(comb.po_names)}
    for k in range(L):
        if latch_out_name(k) not in pi_pos or latch_in_name(k) not in po_pos:
            raise InterfaceMismatchError("latch boundary %d missing" % k)
    orig_pi_idx = [i for i, n in enumerate(comb.pi_names) if not n.startswith("__lat_out_")]
    if len(orig_pi_idx) != shell.num_orig_pis:
        raise InterfaceMismatchError("PI count mismatch against shell")
    b = AigBuilder(shell.num_orig_pis + L)
    leaf_map = {}
    for new_i, old_i in enumerate(orig_pi_idx):
        leaf_map[1 + old_i] = b.leaf_lit(new_i)
    for k in range(L):
        leaf_map[1 + pi_pos[latch_out_name(k)]] = b.leaf_lit(shell.num_orig_pis + k)
    m = [0] * comb.num_nodes
    for old_id, l in leaf_map.items():
        m[old_id] = l

    def ml(l):
        return m[lit_var(l)] ^ lit_compl(l)

    off = comb.and_offset
    for k, (f0, f1) in enumerate(comb.ands):
        m[off + k] = b.add_and(ml(f0), ml(f1))
    pos = [ml(comb.pos[i]) for i in range(shell.num_orig_pos)]
    latch_spec = [
        (ml(comb.pos[po_pos[latch_in_name(k)]]), shell.inits[k]) for k in range(L)
    ]
    return b.finish(
        pos,
        pi_names=[comb.pi_names[i] for i in orig_pi_idx],
        po_names=comb.po_names[: shell.num_orig_pos],
        latch_spec=latch_spec,
        latch_names=shell.latch_names,
    )
