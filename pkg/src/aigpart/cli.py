"""Command-line driver.

Commands: partition, optimize, merge, equiv, report, flow.  A JSON config
file can preset any flag; explicit flags win.  Exit codes: 0 ok, 1 usage,
2 I/O error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .aig import AigError, extract_comb, strash
from .aiger_io import AigFormatError, write_aiger
from .equiv import check_equiv
from .merge import MergeError, merge, verify_merge
from .partition import (
    PartitionConfig,
    cut_and_stitch,
    load_manifest,
    partition_network,
    save_manifest,
)
from .report import (
    FlowConfig,
    VerificationError,
    compare,
    flow_end_to_end,
    qor,
    read_network,
)
from .rl import OptimizeBudget, flow_text, run_parallel, trace_jsonl

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    p = _Parser(prog="aigpart", description="partition-parallel AIG optimization")
    p.add_argument("--config", help="JSON file presetting any flag")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--max-size", type=int, default=None, dest="max_size")
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--episodes", type=int, default=None)
        sp.add_argument("--len", type=int, default=None, dest="episode_len")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("partition", help="split a network into parts")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("optimize", help="optimize the parts of a run directory")
    sp.add_argument("rundir")
    common(sp)

    sp = sub.add_parser("merge", help="reassemble optimized parts")
    sp.add_argument("rundir")
    sp.add_argument("--verify", action="store_true")
    common(sp)

    sp = sub.add_parser("equiv", help="equivalence-check two networks")
    sp.add_argument("a")
    sp.add_argument("b")
    common(sp)

    sp = sub.add_parser("report", help="QoR of one network, or deltas of two")
    sp.add_argument("baseline")
    sp.add_argument("ours", nargs="?")
    common(sp)

    sp = sub.add_parser("flow", help="end-to-end partition/optimize/merge/report")
    sp.add_argument("input")
    common(sp)
    return p


_DEFAULTS = {
    "seed": 0,
    "max_size": 10000,
    "workers": 1,
    "episodes": 50,
    "episode_len": 10,
    "out": "run",
}


def _settings(args) -> dict:
    merged = dict(_DEFAULTS)
    if args.config:
        with open(args.config) as f:
            cfg = json.load(f)
        unknown = set(cfg) - set(_DEFAULTS)
        if unknown:
            raise SystemExit(EXIT_USAGE)
        merged.update(cfg)
    for key in _DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _cmd_partition(args, s) -> int:
    net = strash(read_network(args.input))
    comb, shell = extract_comb(net)
    pcfg = PartitionConfig(max_part_size=s["max_size"], seed=s["seed"])
    assignment, fallback = partition_network(comb, pcfg)
    manifest = cut_and_stitch(
        comb, assignment, pcfg,
        shell=shell if net.num_latches else None,
        fallback_parts=fallback,
    )
    save_manifest(manifest, s["out"])
    with open(os.path.join(s["out"], "input.aig"), "wb") as f:
        f.write(write_aiger(net, fmt="binary"))
    print("wrote %d parts (%d boundary pairs) to %s"
          % (len(manifest.parts), len(manifest.boundary_pairs), s["out"]))
    return EXIT_OK


def _cmd_optimize(args, s) -> int:
    manifest = load_manifest(args.rundir)
    budget = OptimizeBudget(
        max_episodes=s["episodes"], episode_len=s["episode_len"], seed=s["seed"]
    )
    jobs = [(p.part_id, p.net) for p in manifest.parts]
    results = run_parallel(jobs, budget, workers=s["workers"], global_seed=s["seed"])
    for res in results:
        stem = os.path.join(args.rundir, "part_%04d" % res.part_id)
        with open(stem + ".opt.aig", "wb") as f:
            f.write(write_aiger(res.net, fmt="binary"))
        with open(stem + ".flow", "w") as f:
            f.write(flow_text(res.flow))
        with open(stem + ".trace.jsonl", "w") as f:
            f.write(trace_jsonl(res.traces))
        flag = " [%s]" % res.flagged if res.flagged else ""
        print("part %d: %d -> %d ANDs%s"
              % (res.part_id, manifest.parts[res.part_id].net.num_ands,
                 res.net.num_ands, flag))
    return EXIT_OK


def _cmd_merge(args, s) -> int:
    from .aiger_io import parse_aiger

    manifest = load_manifest(args.rundir)
    nets = []
    for p in manifest.parts:
        opt = os.path.join(args.rundir, "part_%04d.opt.aig" % p.part_id)
        path = opt if os.path.exists(opt) else os.path.join(
            args.rundir, "part_%04d.aig" % p.part_id
        )
        with open(path, "rb") as f:
            nets.append(parse_aiger(f.read()))
    merged = merge(manifest, nets)
    out = s["out"] if s["out"] != _DEFAULTS["out"] else "merged.aig"
    with open(out, "wb") as f:
        f.write(write_aiger(merged, fmt="binary"))
    print("merged %d parts into %s (%d ANDs)" % (len(nets), out, merged.num_ands))
    if args.verify:
        orig_path = os.path.join(args.rundir, "input.aig")
        if not os.path.exists(orig_path):
            print("no input.aig in run directory; cannot verify", file=sys.stderr)
            return EXIT_IO
        original = read_network(orig_path)
        verdict = verify_merge(original, merged)
        print("verification: %s" % verdict.kind)
        if verdict.is_counterexample:
            return EXIT_VERIFY
    return EXIT_OK


def _cmd_equiv(args, s) -> int:
    a = read_network(args.a)
    b = read_network(args.b)
    verdict = check_equiv(a, b)
    print(verdict.kind)
    if verdict.is_counterexample:
        print("PO %s differs under %r" % (verdict.po_name, verdict.assignment))
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_report(args, s) -> int:
    base = qor(read_network(args.baseline))
    print("%s: area %d delay %d adp %d"
          % (args.baseline, base.area_proxy, base.delay_proxy, base.adp_proxy))
    if args.ours:
        ours = qor(read_network(args.ours))
        print("%s: area %d delay %d adp %d"
              % (args.ours, ours.area_proxy, ours.delay_proxy, ours.adp_proxy))
        d = compare(base, ours)
        print("delta: area %s delay %s adp %s" % (d["area"], d["delay"], d["adp"]))
    return EXIT_OK


def _cmd_flow(args, s) -> int:
    cfg = FlowConfig(
        seed=s["seed"],
        max_part_size=s["max_size"],
        workers=s["workers"],
        episodes=s["episodes"],
        episode_len=s["episode_len"],
        out_dir=s["out"],
    )
    report = flow_end_to_end(args.input, cfg)
    d = report["delta_vs_baseline"]
    print("parts=%d verification=%s" % (report["parts"], report["verification"]))
    print("vs baseline: area %s delay %s adp %s" % (d["area"], d["delay"], d["adp"]))
    return EXIT_OK


_COMMANDS = {
    "partition": _cmd_partition,
    "optimize": _cmd_optimize,
    "merge": _cmd_merge,
    "equiv": _cmd_equiv,
    "report": _cmd_report,
    "flow": _cmd_flow,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        s = _settings(args)
    except SystemExit:
        raise
    except (OSError, json.JSONDecodeError) as e:
        print("config error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, s)
    except (OSError, AigFormatError) as e:
        print("I/O error: %s" % e, file=sys.stderr)
        return EXIT_IO
    except (VerificationError, MergeError) as e:
        print("verification failure: %s" % e, file=sys.stderr)
        return EXIT_VERIFY
    except AigError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
