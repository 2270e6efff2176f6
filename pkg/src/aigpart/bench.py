"""Seeded circuit generators: random AIGs and a suite of structured
combinational benchmarks (adders, multipliers, parity, mux trees, ...)
used as the desk-scale test corpus.
"""

from __future__ import annotations

import random

from .aig import AigBuilder, AigNetwork, strash


def _xor(b: AigBuilder, x: int, y: int) -> int:
    return b.add_and(b.add_and(x, y ^ 1) ^ 1, b.add_and(x ^ 1, y) ^ 1) ^ 1


def _or(b: AigBuilder, x: int, y: int) -> int:
    return b.add_and(x ^ 1, y ^ 1) ^ 1


def _mux(b: AigBuilder, s: int, t: int, e: int) -> int:
    return _or(b, b.add_and(s, t), b.add_and(s ^ 1, e))


def _maj(b: AigBuilder, x: int, y: int, z: int) -> int:
    return _or(b, b.add_and(x, y), _or(b, b.add_and(x, z), b.add_and(y, z)))


def _full_add(b: AigBuilder, x: int, y: int, z: int) -> tuple[int, int]:
    return _xor(b, _xor(b, x, y), z), _maj(b, x, y, z)


def random_aig(
    num_pis: int,
    num_ands: int,
    num_pos: int = 1,
    seed: int = 0,
    compl_prob: float = 0.5,
) -> AigNetwork:
    """Random strashed AIG; folding may make it slightly smaller than asked."""
    rng = random.Random(seed)
    b = AigBuilder(num_pis)
    lits = [b.leaf_lit(i) for i in range(num_pis)]
    attempts = 0
    while len(b.f0) < num_ands and attempts < 20 * num_ands + 100:
        attempts += 1
        x = rng.choice(lits)
        y = rng.choice(lits)
        if rng.random() < compl_prob:
            x ^= 1
        if rng.random() < compl_prob:
            y ^= 1
        l = b.add_and(x, y)
        if l > 1:
            lits.append(l)
    # bias POs toward late nodes so most of the logic stays alive
    npos = min(num_pos, len(lits))
    tail = lits[-max(4 * npos, 16):]
    pos = [rng.choice(tail) ^ (1 if rng.random() < 0.5 else 0) for _ in range(npos)]
    return strash(b.finish(pos))


def ripple_adder(n: int) -> AigNetwork:
    b = AigBuilder(2 * n + 1)
    a = [b.leaf_lit(i) for i in range(n)]
    c = [b.leaf_lit(n + i) for i in range(n)]
    carry = b.leaf_lit(2 * n)
    sums = []
    for i in range(n):
        s, carry = _full_add(b, a[i], c[i], carry)
        sums.append(s)
    sums.append(carry)
    names = ["a%d" % i for i in range(n)] + ["b%d" % i for i in range(n)] + ["cin"]
    return strash(b.finish(sums, pi_names=names, po_names=["s%d" % i for i in range(n + 1)]))


def multiplier(n: int) -> AigNetwork:
    """Array multiplier, n x n -> 2n bits."""
    b = AigBuilder(2 * n)
    a = [b.leaf_lit(i) for i in range(n)]
    c = [b.leaf_lit(n + i) for i in range(n)]
    acc = [0] * (2 * n)
    for i in range(n):
        carry = 0
        for j in range(n):
            pp = b.add_and(a[j], c[i])
            acc[i + j], carry = _full_add(b, acc[i + j], pp, carry)
        for p in range(i + n, 2 * n):
            acc[p], carry = _full_add(b, acc[p], carry, 0)
    names = ["a%d" % i for i in range(n)] + ["b%d" % i for i in range(n)]
    return strash(b.finish(acc, pi_names=names, po_names=["p%d" % i for i in range(2 * n)]))


def parity_chain(n: int) -> AigNetwork:
    b = AigBuilder(n)
    l = b.leaf_lit(0)
    for i in range(1, n):
        l = _xor(b, l, b.leaf_lit(i))
    return strash(b.finish([l], po_names=["par"]))


def mux_tree(sel_bits: int) -> AigNetwork:
    n = 1 << sel_bits
    b = AigBuilder(n + sel_bits)
    data = [b.leaf_lit(i) for i in range(n)]
    sel = [b.leaf_lit(n + i) for i in range(sel_bits)]
    layer = data
    for s in sel:
        layer = [_mux(b, s, layer[2 * i + 1], layer[2 * i]) for i in range(len(layer) // 2)]
    return strash(b.finish(layer, po_names=["y"]))


def comparator(n: int) -> AigNetwork:
    """a < b, unsigned."""
    b = AigBuilder(2 * n)
    a = [b.leaf_lit(i) for i in range(n)]
    c = [b.leaf_lit(n + i) for i in range(n)]
    lt = 0
    eq = 1
    for i in range(n - 1, -1, -1):
        bit_lt = b.add_and(a[i] ^ 1, c[i])
        lt = _or(b, lt, b.add_and(eq, bit_lt))
        eq = b.add_and(eq, _xor(b, a[i], c[i]) ^ 1)
    return strash(b.finish([lt], po_names=["lt"]))


def popcount(n: int) -> AigNetwork:
    """Population count of n inputs via an adder tree."""
    b = AigBuilder(n)
    vals = [[b.leaf_lit(i)] for i in range(n)]

    def add(x, y):
        out = []
        carry = 0
        for i in range(max(len(x), len(y))):
            xi = x[i] if i < len(x) else 0
            yi = y[i] if i < len(y) else 0
            s, carry = _full_add(b, xi, yi, carry)
            out.append(s)
        out.append(carry)
        return out

    while len(vals) > 1:
        nxt = [add(vals[2 * i], vals[2 * i + 1]) for i in range(len(vals) // 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return strash(b.finish(vals[0], po_names=["c%d" % i for i in range(len(vals[0]))]))


def layered_random(num_pis: int, layers: int, width: int, seed: int = 0) -> AigNetwork:
    """Random circuit with a layered structure; denser than random_aig."""
    rng = random.Random(seed)
    b = AigBuilder(num_pis)
    prev = [b.leaf_lit(i) for i in range(num_pis)]
    for _ in range(layers):
        cur = []
        for _ in range(width):
            x = rng.choice(prev) ^ rng.getrandbits(1)
            y = rng.choice(prev) ^ rng.getrandbits(1)
            l = b.add_and(x, y)
            if l > 1:
                cur.append(l)
        if cur:
            prev = cur
    pos = [l ^ rng.getrandbits(1) for l in prev[: max(1, width // 2)]]
    return strash(b.finish(pos))


def sequential_counter(n: int) -> AigNetwork:
    """n-bit counter with enable: the sequential round-trip fixture."""
    b = AigBuilder(1 + n)  # enable + n state bits
    en = b.leaf_lit(0)
    state = [b.leaf_lit(1 + i) for i in range(n)]
    carry = en
    nexts = []
    for i in range(n):
        nexts.append(_xor(b, state[i], carry))
        carry = b.add_and(state[i], carry)
    net = b.finish(
        [state[-1]],
        pi_names=["en"],
        po_names=["msb"],
        latch_spec=[(nx, 0) for nx in nexts],
        latch_names=["r%d" % i for i in range(n)],
    )
    return strash(net)


def benchmark_corpus() -> list[tuple[str, AigNetwork]]:
    """At least 20 named combinational circuits of varied size and texture."""
    nets = [
        ("adder8", ripple_adder(8)),
        ("adder16", ripple_adder(16)),
        ("adder32", ripple_adder(32)),
        ("mult4", multiplier(4)),
        ("mult6", multiplier(6)),
        ("mult8", multiplier(8)),
        ("parity16", parity_chain(16)),
        ("parity64", parity_chain(64)),
        ("mux8", mux_tree(3)),
        ("mux32", mux_tree(5)),
        ("mux64", mux_tree(6)),
        ("cmp16", comparator(16)),
        ("cmp32", comparator(32)),
        ("popcount16", popcount(16)),
        ("popcount32", popcount(32)),
        ("rand_a", random_aig(16, 300, num_pos=8, seed=11)),
        ("rand_b", random_aig(24, 600, num_pos=12, seed=12)),
        ("rand_c", random_aig(32, 1200, num_pos=16, seed=13)),
        ("layered_a", layered_random(20, 12, 60, seed=21)),
        ("layered_b", layered_random(30, 20, 80, seed=22)),
        ("layered_c", layered_random(40, 25, 120, seed=23)),
    ]
    return nets


def random_corpus(count: int, seed: int = 0, max_pis: int = 12, max_ands: int = 200):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        pis = rng.randint(3, max_pis)
        ands = rng.randint(5, max_ands)
        pos = rng.randint(1, 4)
        out.append(("rnd%03d" % k, random_aig(pis, ands, num_pos=pos, seed=rng.getrandbits(32))))
    return out
