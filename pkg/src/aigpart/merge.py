"""Reassembly of optimized parts: boundary PIs are wired to the literal
behind the matching boundary PO in the driver part, interface nodes are
dropped, latches reattached, and the result strashed with the original PO
names and order.
"""

from __future__ import annotations

from .aig import (
    AigBuilder,
    AigNetwork,
    extract_comb,
    lit,
    lit_compl,
    lit_var,
    reattach_latches,
    strash,
)
from .equiv import EquivPolicy, EquivVerdict, check_equiv
from .partition import PartitionManifest


class MergeError(Exception):
    pass


def _part_interfaces(manifest: PartitionManifest, nets: list[AigNetwork]):
    """Check PI/PO name sets against the manifest's pre-optimization parts."""
    if len(nets) != len(manifest.parts):
        raise MergeError(
            "expected %d parts, got %d" % (len(manifest.parts), len(nets))
        )
    for payload, net in zip(manifest.parts, nets):
        want_pi = set(payload.net.pi_names)
        want_po = set(payload.net.po_names)
        # keep-POs guard dead logic; optimization may legitimately drop them
        have_po = set(net.po_names)
        if set(net.pi_names) != want_pi:
            raise MergeError(
                "part %d PI set changed during optimization" % payload.part_id
            )
        core_want = {n for n in want_po if not n.startswith("__keep_")}
        if not core_want <= have_po:
            raise MergeError(
                "part %d PO set changed during optimization" % payload.part_id
            )


def merge(manifest: PartitionManifest, parts_after_opt: list[AigNetwork]) -> AigNetwork:
    nets = list(parts_after_opt)
    _part_interfaces(manifest, nets)

    # boundary wiring: (sink part, sink local pi index) -> (driver part, po index)
    sink_wire: dict[tuple[int, int], tuple[int, int]] = {}
    for bp in manifest.boundary_pairs:
        dp, dj = bp["driver_part"], bp["driver_local_po"]
        sp, si = bp["sink_part"], bp["sink_local_pi"]
        if not (0 <= dp < len(nets)) or not (0 <= sp < len(nets)):
            raise MergeError("boundary pair %r references a missing part" % bp["wire"])
        if dj >= len(nets[dp].pos):
            raise MergeError("dangling driver PO for wire %r" % bp["wire"])
        if nets[dp].po_names[dj] != bp["wire"]:
            raise MergeError("driver PO name mismatch for wire %r" % bp["wire"])
        key = (sp, si)
        if key in sink_wire:
            raise MergeError("boundary PI bound twice for wire %r" % bp["wire"])
        sink_wire[key] = (dp, dj)

    b = AigBuilder(len(manifest.pi_names))
    leaf_by_name = {n: b.leaf_lit(i) for i, n in enumerate(manifest.pi_names)}

    # resolved[(part, local node id)] -> merged literal (node-level, so
    # cyclic part-to-part dependencies are fine while the node DAG is not)
    resolved: dict[tuple[int, int], int] = {}

    def resolve(part: int, node: int) -> int:
        root = (part, node)
        if root in resolved:
            return resolved[root]
        stack = [root]
        while stack:
            p, v = stack[-1]
            if (p, v) in resolved:
                stack.pop()
                continue
            net = nets[p]
            if v == 0:
                resolved[(p, v)] = 0
                stack.pop()
                continue
            if net.is_leaf_id(v):
                name = net.pi_names[v - 1]
                if name.startswith("__cut_"):
                    tgt = sink_wire.get((p, v - 1))
                    if tgt is None:
                        raise MergeError(
                            "boundary PI %r of part %d has no pair" % (name, p)
                        )
                    dp, dj = tgt
                    dl = nets[dp].pos[dj]
                    dep = (dp, lit_var(dl))
                    if dep not in resolved:
                        stack.append(dep)
                        continue
                    resolved[(p, v)] = resolved[dep] ^ lit_compl(dl)
                else:
                    if name not in leaf_by_name:
                        raise MergeError("part %d reads unknown input %r" % (p, name))
                    resolved[(p, v)] = leaf_by_name[name]
                stack.pop()
                continue
            f0, f1 = net.and_fanins(v)
            d0, d1 = (p, lit_var(f0)), (p, lit_var(f1))
            missing = [d for d in (d0, d1) if d not in resolved]
            if missing:
                stack.extend(missing)
                continue
            a = resolved[d0] ^ lit_compl(f0)
            c = resolved[d1] ^ lit_compl(f1)
            resolved[(p, v)] = b.add_and(a, c)
            stack.pop()
        return resolved[root]

    pos = []
    for rec in manifest.pos:
        if rec["kind"] == "const":
            pos.append(rec["value"])
        elif rec["kind"] == "pi":
            if rec["pi_name"] not in leaf_by_name:
                raise MergeError("PO %r reads unknown input" % rec["name"])
            pos.append(leaf_by_name[rec["pi_name"]] ^ rec["compl"])
        else:
            p, j = rec["part"], rec["po_index"]
            name = manifest.parts[p].net.po_names[j]
            try:
                j_now = nets[p].po_names.index(name)
            except ValueError:
                raise MergeError("part %d lost output %r" % (p, name)) from None
            l = nets[p].pos[j_now]
            pos.append(resolve(p, lit_var(l)) ^ lit_compl(l) ^ rec["compl"])

    comb = b.finish(pos, pi_names=manifest.pi_names, po_names=manifest.po_names)
    if manifest.shell is not None:
        out = reattach_latches(comb, manifest.shell)
    else:
        out = comb
    return strash(out)


def verify_merge(original: AigNetwork, merged: AigNetwork,
                 policy: EquivPolicy | None = None) -> EquivVerdict:
    """Combinational equivalence with latch boundaries as cut points."""
    if original.num_latches != merged.num_latches:
        raise MergeError("latch count differs between original and merged")
    a, _ = extract_comb(original)
    c, _ = extract_comb(merged)
    return check_equiv(a, c, policy)
