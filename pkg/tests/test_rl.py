"""Episode-based flow search: reward shape, keep-best guarantee,
determinism, seeding, and the parallel driver."""

import pytest

from aigpart.aig import AigBuilder, AigNetwork, levels, lit, strash
from aigpart.bench import random_aig
from aigpart.equiv import check_equiv
from aigpart.rl import (
    NUM_ACTIONS,
    NUM_FEATURES,
    OptimizeBudget,
    cost_of,
    flow_state,
    flow_text,
    optimize_partition,
    part_seed,
    reward,
    run_parallel,
    trace_jsonl,
)
from aigpart.transforms import StepStats


def test_reward_formula():
    # 100 nodes at depth 9 shrinking to 90 at depth 9: (1000-900)/1000
    st = StepStats(nodes_before=100, nodes_after=90, depth_before=9,
                   depth_after=9, wall_time=0.0)
    assert reward(st, 1000) == pytest.approx(0.1)
    st2 = StepStats(nodes_before=90, nodes_after=90, depth_before=9,
                    depth_after=9, wall_time=0.0)
    assert reward(st2, 1000) == 0.0


def test_cost_of():
    b = AigBuilder(3)
    t = b.add_and(b.add_and(b.leaf_lit(0), b.leaf_lit(1)), b.leaf_lit(2))
    net = b.finish([t])
    assert cost_of(net) == 2 * (2 + 1)


def test_rewards_telescope_to_cost_drop():
    net = random_aig(6, 120, num_pos=2, seed=3)
    budget = OptimizeBudget(max_episodes=4, episode_len=6, seed=0)
    _, _, traces = optimize_partition(net, budget)
    c0 = cost_of(strash(net))
    for tr in traces:
        assert sum(tr.rewards) * c0 == pytest.approx(c0 - tr.final_cost)


def test_keep_best_never_worse_than_input():
    for seed in range(4):
        net = random_aig(5, 80, num_pos=2, seed=100 + seed)
        budget = OptimizeBudget(max_episodes=3, episode_len=5, seed=seed)
        best, flow, traces = optimize_partition(net, budget)
        assert cost_of(best) <= cost_of(strash(net))
        assert len(flow) <= budget.episode_len
        assert check_equiv(net, best).kind == "equivalent_exhaustive"
        assert len(traces) == 3


def test_deterministic_for_fixed_seed():
    net = random_aig(6, 100, num_pos=2, seed=9)
    budget = OptimizeBudget(max_episodes=5, episode_len=6, seed=123)
    b1, f1, t1 = optimize_partition(net, budget)
    b2, f2, t2 = optimize_partition(net, budget)
    assert f1 == f2
    assert b1.structurally_equal(b2)
    assert [tr.actions for tr in t1] == [tr.actions for tr in t2]


def test_seed_changes_exploration():
    net = random_aig(6, 100, num_pos=2, seed=9)
    t1 = optimize_partition(net, OptimizeBudget(max_episodes=3, episode_len=8, seed=1))[2]
    t2 = optimize_partition(net, OptimizeBudget(max_episodes=3, episode_len=8, seed=2))[2]
    assert [tr.actions for tr in t1] != [tr.actions for tr in t2]


def test_exhausted_wall_clock_gives_empty_flagged_flow():
    net = random_aig(5, 60, seed=4)
    budget = OptimizeBudget(max_episodes=5, episode_len=5, seed=0,
                            max_wall_seconds=1e-9)
    best, flow, traces = optimize_partition(net, budget)
    assert flow == [] and traces == []
    assert best.structurally_equal(strash(net))
    res = run_parallel([(0, net)], budget, workers=1)
    assert res[0].flagged == "empty_flow"


def test_flow_state_layout():
    net = random_aig(4, 20, seed=0)
    n0, d0 = net.num_ands, levels(net)[1]
    x = flow_state(net, n0, d0, 3, 10, last=2, second_last=-1)
    assert x.shape == (NUM_FEATURES,)
    assert x[0] == pytest.approx(1.0)
    assert x[2] == pytest.approx(0.3)
    assert x[3 + 2] == 1.0
    assert x[3 + NUM_ACTIONS:].sum() == 0.0


def test_part_seed_stable_and_distinct():
    assert part_seed(7, 0) == part_seed(7, 0)
    assert part_seed(7, 0) != part_seed(7, 1)
    assert part_seed(7, 0) != part_seed(8, 0)
    assert 0 <= part_seed(7, 3) < 2 ** 64


def test_run_parallel_worker_count_invariant():
    nets = [(i, random_aig(5, 70, num_pos=2, seed=200 + i)) for i in range(3)]
    budget = OptimizeBudget(max_episodes=3, episode_len=5, seed=0)
    seq = run_parallel(nets, budget, workers=1, global_seed=11)
    par = run_parallel(nets, budget, workers=4, global_seed=11)
    for a, b in zip(seq, par):
        assert a.part_id == b.part_id
        assert a.flow == b.flow
        assert a.net.structurally_equal(b.net)
        assert a.flagged == b.flagged == ""


def test_budget_validation():
    with pytest.raises(ValueError):
        OptimizeBudget(max_episodes=0)
    with pytest.raises(ValueError):
        OptimizeBudget(episode_len=0)
    with pytest.raises(ValueError):
        OptimizeBudget(max_wall_seconds=0)


def test_flow_text_and_trace_jsonl():
    assert flow_text(["b", "rw"]) == "b rw\n"
    assert flow_text([]) == ""
    net = random_aig(4, 30, seed=5)
    _, _, traces = optimize_partition(net, OptimizeBudget(max_episodes=2, episode_len=3, seed=0))
    txt = trace_jsonl(traces)
    import json
    lines = [json.loads(l) for l in txt.splitlines()]
    assert len(lines) == 2
    assert lines[0]["episode"] == 0
    assert len(lines[0]["actions"]) <= 3
