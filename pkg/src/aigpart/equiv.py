"""Combinational equivalence checking by simulation.

Small interfaces are checked exhaustively; larger ones get seeded random
patterns and a ProbablyEquivalent verdict.  Sequential networks are
compared on their combinational views with latches as cut points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .aig import AigNetwork, InterfaceMismatchError, extract_comb, lit_compl, lit_var

EQUIVALENT_EXHAUSTIVE = "equivalent_exhaustive"
PROBABLY_EQUIVALENT = "probably_equivalent"
COUNTEREXAMPLE = "counterexample"

_CHUNK_LOG2 = 12  # simulate in 4096-bit words


@dataclass
class EquivPolicy:
    exhaustive_pi_limit: int = 16
    random_pattern_count: int = 1024  # 64-bit words, i.e. 65,536 patterns
    seed: int = 0


@dataclass
class EquivVerdict:
    kind: str
    pattern_count: int = 0
    assignment: dict = field(default_factory=dict)  # PI name -> 0/1
    po_name: str | None = None

    @property
    def is_counterexample(self) -> bool:
        return self.kind == COUNTEREXAMPLE


def _comb_view(net: AigNetwork) -> AigNetwork:
    if net.num_latches == 0:
        return net
    comb, _ = extract_comb(net)
    return comb


def _tt_chunk(var_index: int, chunk: int, width: int) -> int:
    """Bits of truth-table variable var_index for global pattern indices
    [chunk*width, (chunk+1)*width)."""
    mask = (1 << width) - 1
    log2w = width.bit_length() - 1
    if var_index < log2w:
        period = 1 << var_index
        v = ((1 << period) - 1) << period
        span = 2 * period
        while span < width:
            v |= v << span
            span *= 2
        return v & mask
    return mask if (chunk >> (var_index - log2w)) & 1 else 0


def check_equiv(a: AigNetwork, b: AigNetwork, policy: EquivPolicy | None = None) -> EquivVerdict:
    """Compare two networks PI-by-name and PO-by-name."""
    policy = policy or EquivPolicy()
    ca, cb = _comb_view(a), _comb_view(b)
    if set(ca.pi_names) != set(cb.pi_names) or len(set(ca.pi_names)) != ca.num_pis:
        raise InterfaceMismatchError("PI name sets differ or are not unique")
    if set(ca.po_names) != set(cb.po_names) or len(set(ca.po_names)) != len(ca.po_names):
        raise InterfaceMismatchError("PO name sets differ or are not unique")

    # b's leaves/POs reordered to a's
    b_pi_of = {n: i for i, n in enumerate(cb.pi_names)}
    b_leaf_order = [b_pi_of[n] for n in ca.pi_names]
    b_po_of = {n: i for i, n in enumerate(cb.po_names)}
    b_po_order = [b_po_of[n] for n in ca.po_names]

    n = ca.num_pis
    if n <= policy.exhaustive_pi_limit:
        total = 1 << n
        width = min(total, 1 << _CHUNK_LOG2)
        chunks = (total + width - 1) // width
        for c in range(chunks):
            vecs = [_tt_chunk(i, c, width) for i in range(n)]
            cex = _compare_chunk(ca, cb, b_leaf_order, b_po_order, vecs, width, c * width)
            if cex is not None:
                return cex
        return EquivVerdict(EQUIVALENT_EXHAUSTIVE, pattern_count=total)

    rng = random.Random(policy.seed)
    total = policy.random_pattern_count * 64
    width = 1 << _CHUNK_LOG2
    done = 0
    while done < total:
        w = min(width, total - done)
        vecs = [rng.getrandbits(w) for _ in range(n)]
        cex = _compare_chunk(ca, cb, b_leaf_order, b_po_order, vecs, w, None)
        if cex is not None:
            return cex
        done += w
    return EquivVerdict(PROBABLY_EQUIVALENT, pattern_count=total)


def _compare_chunk(ca, cb, b_leaf_order, b_po_order, vecs, width, base_index):
    from .aig import simulate

    outs_a = simulate(ca, vecs, width)
    b_vecs = [0] * cb.num_pis
    for ai, bi in enumerate(b_leaf_order):
        b_vecs[bi] = vecs[ai]
    outs_b_raw = simulate(cb, b_vecs, width)
    outs_b = [outs_b_raw[j] for j in b_po_order]
    for j, (va, vb) in enumerate(zip(outs_a, outs_b)):
        diff = va ^ vb
        if diff:
            t = (diff & -diff).bit_length() - 1
            assignment = {name: (vecs[i] >> t) & 1 for i, name in enumerate(ca.pi_names)}
            return EquivVerdict(
                COUNTEREXAMPLE,
                pattern_count=(base_index + t) if base_index is not None else 0,
                assignment=assignment,
                po_name=ca.po_names[j],
            )
    return None
