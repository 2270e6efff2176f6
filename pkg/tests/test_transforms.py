"""Soundness and size/depth contracts of the local transforms, the ISOP
factoring resynthesis, and the fixed baseline script."""

import random

import pytest

from aigpart.aig import AigBuilder, levels, strash
from aigpart.bench import random_aig
from aigpart.equiv import check_equiv
from aigpart.isop import expr_and_count, isop, resynth_expr, resynth_tt
from aigpart.transforms import (
    ACTION_TOKENS,
    apply_action,
    balance,
    baseline_script,
)


def _eval_cover(cubes, m, nvars):
    for cube in cubes:
        if all(((m >> v) & 1) == phase for v, phase in cube):
            return 1
    return 0


def test_isop_exhaustive_small():
    for nvars in (1, 2, 3):
        for tt in range(1 << (1 << nvars)):
            cubes = isop(tt, tt, nvars)
            for m in range(1 << nvars):
                assert _eval_cover(cubes, m, nvars) == (tt >> m) & 1, (nvars, tt)


def test_isop_respects_dont_cares():
    # lower=AND, upper=OR over 2 vars: a single-literal cover fits between
    cubes = isop(0b1000, 0b1110, 2)
    assert len(cubes) == 1 and len(cubes[0]) == 1


def test_resynth_node_counts():
    and4 = 1 << 15  # a&b&c&d over 4 vars
    assert expr_and_count(resynth_expr(and4, 4)) == 3
    xor2 = 0b0110
    assert expr_and_count(resynth_expr(xor2, 2)) == 3
    assert expr_and_count(resynth_expr(0, 3)) == 0
    assert expr_and_count(resynth_expr((1 << 8) - 1, 3)) == 0


def test_resynth_tt_functionally_correct():
    rng = random.Random(2)
    for nvars in (2, 3, 4):
        for _ in range(40):
            tt = rng.getrandbits(1 << nvars)
            b = AigBuilder(nvars)
            leaves = [b.leaf_lit(i) for i in range(nvars)]
            root = resynth_tt(tt, nvars, leaves, b.add_and)
            net = b.finish([root])
            from aigpart.aig import eval_scalar
            for m in range(1 << nvars):
                vals = [(m >> i) & 1 for i in range(nvars)]
                assert eval_scalar(net, vals) == [(tt >> m) & 1]


def test_balance_and_chain():
    # left-leaning 8-input AND chain: depth 7 becomes 3
    b = AigBuilder(8)
    l = b.leaf_lit(0)
    for i in range(1, 8):
        l = b.add_and(l, b.leaf_lit(i))
    net = b.finish([l])
    assert levels(net)[1] == 7
    out = balance(net)
    assert levels(out)[1] == 3
    assert out.num_ands == 7
    assert check_equiv(net, out).kind == "equivalent_exhaustive"


def test_action_contracts_random_sweep():
    rng = random.Random(17)
    for trial in range(40):
        net = strash(random_aig(rng.randint(3, 8), rng.randint(5, 80),
                                num_pos=rng.randint(1, 3), seed=4000 + trial))
        for tok in ACTION_TOKENS:
            out, st = apply_action(net, tok)
            assert check_equiv(net, out).kind == "equivalent_exhaustive", (trial, tok)
            assert st.nodes_before == net.num_ands
            assert st.nodes_after == out.num_ands
            if tok in ("rw", "rf", "rs"):
                assert out.num_ands <= net.num_ands, (trial, tok)
            if tok == "b":
                assert levels(out)[1] <= levels(net)[1], trial


def test_zero_gain_variants_stay_equivalent():
    rng = random.Random(29)
    for trial in range(15):
        net = strash(random_aig(rng.randint(4, 10), rng.randint(20, 150),
                                num_pos=2, seed=5000 + trial))
        for tok in ("rwz", "rfz"):
            out, _ = apply_action(net, tok)
            assert not check_equiv(net, out).is_counterexample


def test_apply_action_rejects_unknown():
    net = random_aig(3, 5, seed=0)
    with pytest.raises(ValueError):
        apply_action(net, "fraig")


def test_baseline_script_reduces_redundant_logic():
    # raw network with a duplicated cone; the builder would have folded it
    from aigpart.aig import AigNetwork, lit
    net = AigNetwork(
        num_pis=3,
        ands=[(2, 4), (8, 6), (2, 4), (12, 6)],
        pos=[lit(5), lit(7)],
    )
    out = baseline_script(net)
    assert out.num_ands == 2
    assert check_equiv(net, out).kind == "equivalent_exhaustive"


def test_baseline_script_on_larger_net():
    net = random_aig(8, 200, num_pos=4, seed=77)
    out = baseline_script(net)
    assert out.num_ands <= strash(net).num_ands
    assert check_equiv(net, out).kind == "equivalent_exhaustive"
