"""BLIF subset reader: .model/.inputs/.outputs/.names/.latch/.end.

Each .names body (up to 16 inputs) is turned into a truth table and
converted to AND nodes by recursive Shannon expansion.
"""

from __future__ import annotations

from .aig import AigBuilder, AigError, AigNetwork


class BlifError(AigError):
    pass


MAX_NAMES_INPUTS = 16


def tt_to_aig(tt: int, nvars: int, leaf_lits: list[int], builder: AigBuilder) -> int:
    """Shannon-expand a truth table into AND nodes; returns the root literal.

    Variable 0 is the fastest-toggling truth-table variable.
    """
    full = (1 << (1 << nvars)) - 1

    def rec(t, n):
        if t == 0:
            return 0
        if t == (1 << (1 << n)) - 1:
            return 1
        # split on the top variable
        half = 1 << (n - 1)
        mask = (1 << half) - 1
        lo, hi = t & mask, t >> half
        x = leaf_lits[n - 1]
        if lo == hi:
            return rec(lo, n - 1)
        l0 = rec(lo, n - 1)
        l1 = rec(hi, n - 1)
        t0 = builder.add_and(x ^ 1, l0)
        t1 = builder.add_and(x, l1)
        return builder.add_and(t0 ^ 1, t1 ^ 1) ^ 1

    tt &= full
    return rec(tt, nvars)


def _cover_to_tt(rows: list[str], out_vals: set[str], nvars: int) -> int:
    onset = 0
    for row in rows:
        # expand the cube over all minterm indices
        idxs = [0]
        for i, ch in enumerate(row):
            if ch == "1":
                idxs = [x | (1 << i) for x in idxs]
            elif ch == "0":
                pass
            elif ch == "-":
                idxs = idxs + [x | (1 << i) for x in idxs]
            else:
                raise BlifError("invalid cover character %r" % ch)
        for x in idxs:
            onset |= 1 << x
    full = (1 << (1 << nvars)) - 1
    if out_vals == {"0"}:
        return full & ~onset
    return onset


def parse_blif(text: str) -> AigNetwork:
    lines = []
    buf = ""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line:
            continue
        if line.endswith("\\"):
            buf += line[:-1] + " "
            continue
        lines.append(buf + line)
        buf = ""

    inputs: list[str] = []
    outputs: list[str] = []
    latches: list[tuple[str, str, int]] = []  # (in_sig, out_sig, init)
    gates: dict[str, tuple[list[str], list[str], set[str]]] = {}  # out -> (ins, rows, out_vals)

    i = 0
    cur_gate = None
    while i < len(lines):
        line = lines[i]
        i += 1
        tok = line.split()
        if tok[0].startswith("."):
            cur_gate = None
        if tok[0] == ".model":
            continue
        if tok[0] == ".inputs":
            inputs.extend(tok[1:])
        elif tok[0] == ".outputs":
            outputs.extend(tok[1:])
        elif tok[0] == ".latch":
            if len(tok) < 3:
                raise BlifError("malformed .latch line")
            init = 2
            if len(tok) in (4, 6) and tok[-1] in ("0", "1", "2", "3"):
                init = {"0": 0, "1": 1, "2": 2, "3": 2}[tok[-1]]
            latches.append((tok[1], tok[2], init))
        elif tok[0] == ".names":
            out = tok[-1]
            ins = tok[1:-1]
            if len(ins) > MAX_NAMES_INPUTS:
                raise BlifError(".names with more than %d inputs" % MAX_NAMES_INPUTS)
            gates[out] = (ins, [], set())
            cur_gate = out
        elif tok[0] == ".end":
            break
        elif tok[0].startswith("."):
            raise BlifError("unsupported BLIF construct %s" % tok[0])
        else:
            if cur_gate is None:
                raise BlifError("cover line outside .names")
            ins, rows, out_vals = gates[cur_gate]
            if len(ins) == 0:
                out_vals.add(tok[0])
            else:
                if len(tok) != 2:
                    raise BlifError("malformed cover line %r" % line)
                rows.append(tok[0])
                out_vals.add(tok[1])

    latch_outs = [o for _, o, _ in latches]
    num_leaves = len(inputs) + len(latch_outs)
    b = AigBuilder(num_leaves)
    sig: dict[str, int] = {}
    for k, name in enumerate(inputs + latch_outs):
        sig[name] = b.leaf_lit(k)

    # topological elaboration of .names gates
    done: set[str] = set()
    visiting: set[str] = set()

    def build(name: str) -> int:
        if name in sig:
            return sig[name]
        if name not in gates:
            raise BlifError("undriven signal %s" % name)
        if name in visiting:
            raise BlifError("combinational cycle through %s" % name)
        visiting.add(name)
        ins, rows, out_vals = gates[name]
        if out_vals and out_vals != {"0"} and out_vals != {"1"}:
            raise BlifError("mixed on/off-set cover for %s" % name)
        leaf_lits = [build(n) for n in ins]
        if not ins:
            l = 1 if out_vals == {"1"} else 0
        else:
            tt = _cover_to_tt(rows, out_vals, len(ins))
            l = tt_to_aig(tt, len(ins), leaf_lits, b)
        visiting.discard(name)
        sig[name] = l
        done.add(name)
        return l

    pos = [build(n) for n in outputs]
    latch_spec = [(build(nin), init) for nin, _, init in latches]
    return b.finish(
        pos,
        pi_names=inputs,
        po_names=outputs,
        latch_spec=latch_spec,
        latch_names=latch_outs,
    )
