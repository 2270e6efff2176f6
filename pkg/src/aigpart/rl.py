"""Per-partition flow exploration: a REINFORCE agent with a linear softmax
policy samples optimization action sequences, keeps the best network seen
across all intermediate states, and verifies the winner against its input.

Parallel orchestration assigns every part an independent seeded job; the
outcome is a pure function of (part, budget, seed), so results do not
depend on worker count or scheduling.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .aig import AigNetwork, levels, strash
from .equiv import EquivPolicy, check_equiv
from .transforms import ACTION_TOKENS, StepStats, apply_action, baseline_script


class OptimizerInternalError(Exception):
    """A transform produced a non-equivalent network; always a bug."""


NUM_ACTIONS = len(ACTION_TOKENS)
NUM_FEATURES = 3 + 2 * NUM_ACTIONS


@dataclass
class PolicyConfig:
    temperature: float = 1.0
    learning_rate: float = 0.01


@dataclass
class OptimizeBudget:
    max_episodes: int = 50
    max_wall_seconds: float = 3600.0
    episode_len: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.max_episodes < 1 or self.max_wall_seconds <= 0 or self.episode_len < 1:
            raise ValueError("budget fields must be positive")


@dataclass
class EpisodeTrace:
    actions: list
    stats: list        # StepStats per step
    rewards: list
    final_cost: int


@dataclass
class PartResult:
    part_id: int
    net: AigNetwork
    flow: list
    traces: list
    flagged: str = ""  # "", "empty_flow", or "worker_fallback"


def cost_of(net: AigNetwork) -> int:
    """ADP proxy: AND count times (depth + 1)."""
    _, d = levels(net)
    return net.num_ands * (d + 1)


def reward(stats: StepStats, initial_cost: int) -> float:
    before = stats.nodes_before * (stats.depth_before + 1)
    after = stats.nodes_after * (stats.depth_after + 1)
    return (before - after) / initial_cost


def flow_state(net: AigNetwork, nodes0: int, depth0: int, step: int, ep_len: int,
               last: int, second_last: int) -> np.ndarray:
    _, d = levels(net)
    x = np.zeros(NUM_FEATURES)
    x[0] = net.num_ands / max(nodes0, 1)
    x[1] = (d + 1) / max(depth0 + 1, 1)
    x[2] = step / ep_len
    if last >= 0:
        x[3 + last] = 1.0
    if second_last >= 0:
        x[3 + NUM_ACTIONS + second_last] = 1.0
    return x


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def optimize_partition(net: AigNetwork, budget: OptimizeBudget,
                       policy_cfg: PolicyConfig | None = None):
    """REINFORCE episodes over the action alphabet with keep-best semantics.

    Returns (best_net, best_flow, traces).  Deterministic for a fixed seed
    when the episode budget binds before the wall clock.
    """
    cfg = policy_cfg or PolicyConfig()
    rng = np.random.default_rng(budget.seed)
    W = np.zeros((NUM_ACTIONS, NUM_FEATURES))
    start = strash(net)
    nodes0, depth0 = start.num_ands, levels(start)[1]
    initial_cost = max(cost_of(start), 1)

    best_net = start
    best_cost = cost_of(start)
    best_flow: list[str] = []
    traces: list[EpisodeTrace] = []
    baseline = 0.0
    t0 = time.monotonic()

    for _ in range(budget.max_episodes):
        if time.monotonic() - t0 > budget.max_wall_seconds:
            break
        cur = start
        last = second_last = -1
        actions: list[str] = []
        stats_list: list[StepStats] = []
        rewards: list[float] = []
        grads = []
        for step in range(budget.episode_len):
            x = flow_state(cur, nodes0, depth0, step, budget.episode_len, last, second_last)
            probs = _softmax(W @ x / cfg.temperature)
            a = int(rng.choice(NUM_ACTIONS, p=probs))
            nxt, st = apply_action(cur, ACTION_TOKENS[a])
            r = reward(st, initial_cost)
            actions.append(ACTION_TOKENS[a])
            stats_list.append(st)
            rewards.append(r)
            # grad of log softmax: (onehot(a) - probs) outer x
            g = -np.outer(probs, x)
            g[a] += x
            grads.append(g)
            cur = nxt
            c = cost_of(cur)
            if c < best_cost:
                best_cost = c
                best_net = cur
                best_flow = list(actions)
            second_last, last = last, a
        ep_return = sum(rewards)
        traces.append(EpisodeTrace(
            actions=actions, stats=stats_list, rewards=rewards, final_cost=cost_of(cur)
        ))
        # baseline: running mean of episode returns seen so far (this one
        # included), subtracted from the reward-to-go of every step
        baseline += (ep_return - baseline) / len(traces)
        togo = np.cumsum(rewards[::-1])[::-1]
        scale = cfg.learning_rate / cfg.temperature
        for g, G in zip(grads, togo):
            W += scale * (G - baseline) * g

    if not traces:
        return start, [], []

    verdict = check_equiv(start, best_net)
    if verdict.is_counterexample:
        raise OptimizerInternalError(
            "best network differs from input on PO %r" % verdict.po_name
        )
    return best_net, best_flow, traces


def part_seed(global_seed: int, part_id: int) -> int:
    h = hashlib.sha256(("%d:%d" % (global_seed, part_id)).encode()).digest()
    return int.from_bytes(h[:8], "big")


def _worker(args):
    part_id, net, budget = args
    best, flow, traces = optimize_partition(net, budget)
    flag = "" if traces else "empty_flow"
    return PartResult(part_id=part_id, net=best, flow=flow, traces=traces, flagged=flag)


def run_parallel(parts, budget: OptimizeBudget, workers: int = 1,
                 global_seed: int | None = None) -> list[PartResult]:
    """Optimize each (part_id, net) independently; results are a pure
    function of (net, budget, per-part seed)."""
    seed0 = budget.seed if global_seed is None else global_seed
    jobs = []
    for part_id, net in parts:
        b = OptimizeBudget(
            max_episodes=budget.max_episodes,
            max_wall_seconds=budget.max_wall_seconds,
            episode_len=budget.episode_len,
            seed=part_seed(seed0, part_id),
        )
        jobs.append((part_id, net, b))
    results: dict[int, PartResult] = {}
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            results[job[0]] = _run_one(job)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for res in pool.map(_run_one, jobs):
                results[res.part_id] = res
    return [results[part_id] for part_id, _ in parts]


def _run_one(job) -> PartResult:
    part_id, net, budget = job
    try:
        return _worker(job)
    except OptimizerInternalError:
        raise
    except Exception:
        # keep the run alive: fall back to the fixed script, flagged
        out = baseline_script(net)
        if cost_of(out) > cost_of(net):
            out = strash(net)
        return PartResult(
            part_id=part_id, net=out, flow=[], traces=[], flagged="worker_fallback"
        )


def flow_text(flow: list) -> str:
    return " ".join(flow) + ("\n" if flow else "")


def trace_jsonl(traces: list) -> str:
    lines = []
    for ep, tr in enumerate(traces):
        lines.append(json.dumps({
            "episode": ep,
            "actions": tr.actions,
            "rewards": tr.rewards,
            "final_cost": tr.final_cost,
            "steps": [
                {
                    "nodes_before": s.nodes_before,
                    "nodes_after": s.nodes_after,
                    "depth_before": s.depth_before,
                    "depth_after": s.depth_after,
                }
                for s in tr.stats
            ],
        }, sort_keys=True))
    return "".join(line + "\n" for line in lines)
