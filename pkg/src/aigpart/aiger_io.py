"""AIGER 1.9 reader and writer (ASCII `aag` and binary `aig`).

The binary writer is canonical: nodes are emitted in id order with the
usual delta encoding, so parse/write round trips are bit-exact for
networks with dense, topologically ordered ids.
"""

from __future__ import annotations

from .aig import AigError, AigNetwork, Latch, lit, lit_compl, lit_var


class AigFormatError(AigError):
    def __init__(self, msg: str, offset: int):
        super().__init__("%s (at byte %d)" % (msg, offset))
        self.offset = offset


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def eof(self) -> bool:
        return self.pos >= len(self.data)

    def read_line(self) -> tuple[bytes, int]:
        start = self.pos
        end = self.data.find(b"\n", self.pos)
        if end < 0:
            end = len(self.data)
            self.pos = end
        else:
            self.pos = end + 1
        return self.data[start:end], start

    def read_byte(self) -> int:
        if self.pos >= len(self.data):
            raise AigFormatError("unexpected end of file", self.pos)
        b = self.data[self.pos]
        self.pos += 1
        return b


def _ints(line: bytes, start: int, count: int | None = None) -> list[int]:
    parts = line.split()
    out = []
    for p in parts:
        try:
            out.append(int(p))
        except ValueError:
            raise AigFormatError("expected integer, got %r" % p.decode("ascii", "replace"), start)
    if count is not None and len(out) != count:
        raise AigFormatError("expected %d fields, got %d" % (count, len(out)), start)
    return out


def parse_aiger(data: bytes) -> AigNetwork:
    r = _Reader(data)
    header, hoff = r.read_line()
    fields = header.split()
    if len(fields) < 6 or fields[0] not in (b"aag", b"aig"):
        raise AigFormatError("malformed header", hoff)
    binary = fields[0] == b"aig"
    try:
        miloa = [int(x) for x in fields[1:]]
    except ValueError:
        raise AigFormatError("malformed header", hoff)
    if len(miloa) != 5 or any(x < 0 for x in miloa):
        raise AigFormatError("malformed header", hoff)
    M, I, L, O, A = miloa
    if M < I + L + A:
        raise AigFormatError("header M smaller than I+L+A", hoff)

    if binary:
        return _parse_binary(r, M, I, L, O, A)
    return _parse_ascii(r, M, I, L, O, A)


def _latch_from_fields(vals, off, max_lit):
    out_lit, rest = vals[0], vals[1:]
    if out_lit & 1 or out_lit < 2 or out_lit > max_lit:
        raise AigFormatError("invalid latch output literal", off)
    nxt = rest[0]
    if nxt > max_lit:
        raise AigFormatError("latch next-state literal out of range", off)
    init = 0
    if len(rest) == 2:
        if rest[1] in (0, 1):
            init = rest[1]
        elif rest[1] == out_lit:
            init = 2
        else:
            raise AigFormatError("invalid latch init value", off)
    return out_lit, nxt, init


def _parse_ascii(r: _Reader, M, I, L, O, A) -> AigNetwork:
    max_lit = 2 * M + 1
    pi_lits = []
    for _ in range(I):
        line, off = r.read_line()
        (v,) = _ints(line, off, 1)
        if v > max_lit or v < 2 or v & 1:
            raise AigFormatError("invalid input literal %d" % v, off)
        pi_lits.append(v)
    latch_raw = []
    for _ in range(L):
        line, off = r.read_line()
        vals = _ints(line, off)
        if len(vals) not in (2, 3):
            raise AigFormatError("malformed latch line", off)
        latch_raw.append((_latch_from_fields(vals, off, max_lit), off))
    po_lits = []
    for _ in range(O):
        line, off = r.read_line()
        (v,) = _ints(line, off, 1)
        if v > max_lit:
            raise AigFormatError("output literal %d out of range" % v, off)
        po_lits.append(v)
    and_raw = []
    for _ in range(A):
        line, off = r.read_line()
        lhs, rhs0, rhs1 = _ints(line, off, 3)
        if lhs & 1 or lhs < 2 or lhs > max_lit:
            raise AigFormatError("invalid AND literal %d" % lhs, off)
        if rhs0 > max_lit or rhs1 > max_lit:
            raise AigFormatError("AND fanin literal out of range", off)
        and_raw.append(((lhs, rhs0, rhs1), off))
    return _assemble(r, M, pi_lits, latch_raw, po_lits, and_raw)


def _parse_binary(r: _Reader, M, I, L, O, A) -> AigNetwork:
    max_lit = 2 * M + 1
    pi_lits = [2 * (1 + k) for k in range(I)]
    latch_raw = []
    for k in range(L):
        line, off = r.read_line()
        vals = _ints(line, off)
        out_var = 1 + I + k
        if len(vals) not in (1, 2):
            raise AigFormatError("malformed latch line", off)
        nxt = vals[0]
        if nxt > max_lit:
            raise AigFormatError("latch next-state literal out of range", off)
        init = 0
        if len(vals) == 2:
            if vals[1] in (0, 1):
                init = vals[1]
            elif vals[1] == 2 * out_var:
                init = 2
            else:
                raise AigFormatError("invalid latch init value", off)
        latch_raw.append(((2 * out_var, nxt, init), off))
    po_lits = []
    for _ in range(O):
        line, off = r.read_line()
        (v,) = _ints(line, off, 1)
        if v > max_lit:
            raise AigFormatError("output literal %d out of range" % v, off)
        po_lits.append(v)
    and_raw = []
    for k in range(A):
        lhs = 2 * (1 + I + L + k)
        off = r.pos
        d0 = _read_varint(r)
        d1 = _read_varint(r)
        rhs0 = lhs - d0
        rhs1 = rhs0 - d1
        if d0 == 0 or rhs0 < 0 or rhs1 < 0:
            raise AigFormatError("non-monotone binary delta", off)
        and_raw.append(((lhs, rhs0, rhs1), off))
    return _assemble(r, M, pi_lits, latch_raw, po_lits, and_raw)


def _read_varint(r: _Reader) -> int:
    x = 0
    shift = 0
    while True:
        b = r.read_byte()
        x |= (b & 0x7F) << shift
        if not b & 0x80:
            return x
        shift += 7


def _assemble(r, M, pi_lits, latch_raw, po_lits, and_raw) -> AigNetwork:
    I, L, A = len(pi_lits), len(latch_raw), len(and_raw)
    var_kind = {0: "const"}
    for v in pi_lits:
        if lit_var(v) in var_kind:
            raise AigFormatError("duplicate variable %d" % lit_var(v), 0)
        var_kind[lit_var(v)] = "pi"
    for (out_lit, _, _), off in latch_raw:
        if out_lit & 1 or lit_var(out_lit) in var_kind:
            raise AigFormatError("invalid latch output literal", off)
        var_kind[lit_var(out_lit)] = "latch"
    and_defs = {}
    for (lhs, rhs0, rhs1), off in and_raw:
        v = lit_var(lhs)
        if v in var_kind:
            raise AigFormatError("duplicate variable %d" % v, off)
        var_kind[v] = "and"
        and_defs[v] = (rhs0, rhs1, off)

    # map variables to the dense id scheme: pis, latch outputs, ands (topo)
    var_map = {0: 0}
    for i, v in enumerate(pi_lits):
        var_map[lit_var(v)] = 1 + i
    for k, ((out_lit, _, _), _) in enumerate(latch_raw):
        var_map[lit_var(out_lit)] = 1 + I + k

    # topological order of AND definitions
    order = []
    state = {}  # var -> 0 visiting, 1 done
    for root in sorted(and_defs):
        if root in state:
            continue
        stack = [(root, 0)]
        while stack:
            v, phase = stack.pop()
            if phase == 0:
                if state.get(v) == 1:
                    continue
                state[v] = 0
                stack.append((v, 1))
                rhs0, rhs1, off = and_defs[v]
                for f in (rhs0, rhs1):
                    fv = lit_var(f)
                    kind = var_kind.get(fv)
                    if kind is None:
                        raise AigFormatError("dangling fanin literal %d" % f, off)
                    if kind == "and" and state.get(fv) != 1:
                        if state.get(fv) == 0:
                            raise AigFormatError("cyclic AND definition", off)
                        stack.append((fv, 0))
            else:
                state[v] = 1
                order.append(v)
    for k, v in enumerate(order):
        var_map[v] = 1 + I + L + k

    def ml(l):
        fv = lit_var(l)
        if fv not in var_map:
            raise AigFormatError("dangling fanin literal %d" % l, 0)
        return lit(var_map[fv], lit_compl(l))

    ands = []
    for v in order:
        rhs0, rhs1, off = and_defs[v]
        a, b = ml(rhs0), ml(rhs1)
        if a > b:
            a, b = b, a
        ands.append((a, b))
    pos = [ml(l) for l in po_lits]
    latches = [Latch(ml(nxt), init) for (_, nxt, init), _ in latch_raw]

    net = AigNetwork(num_pis=I, ands=ands, pos=pos, latches=latches)
    _read_symbols(r, net)
    net.validate()
    return net


def _read_symbols(r: _Reader, net: AigNetwork) -> None:
    while not r.eof():
        line, off = r.read_line()
        if not line:
            continue
        if line == b"c":
            break  # comment section: ignored
        kind = chr(line[0])
        if kind not in "ilo":
            raise AigFormatError("malformed symbol line", off)
        sp = line.find(b" ")
        if sp < 0:
            raise AigFormatError("malformed symbol line", off)
        try:
            idx = int(line[1:sp])
        except ValueError:
            raise AigFormatError("malformed symbol index", off)
        name = line[sp + 1 :].decode("utf-8", "replace")
        tables = {"i": net.pi_names, "l": net.latch_names, "o": net.po_names}
        table = tables[kind]
        if idx >= len(table):
            raise AigFormatError("symbol index out of range", off)
        table[idx] = name


def write_aiger(net: AigNetwork, fmt: str = "binary", symbols: bool = True) -> bytes:
    if fmt not in ("ascii", "binary"):
        raise AigError("unknown AIGER format %r" % fmt)
    I, L, A = net.num_pis, net.num_latches, net.num_ands
    M = I + L + A
    out = bytearray()
    tag = b"aag" if fmt == "ascii" else b"aig"
    out += b"%s %d %d %d %d %d\n" % (tag, M, I, L, len(net.pos), A)
    if fmt == "ascii":
        for k in range(I):
            out += b"%d\n" % (2 * (1 + k))
        for k, la in enumerate(net.latches):
            out += _latch_line(2 * (1 + I + k), la)
        for l in net.pos:
            out += b"%d\n" % l
        off = net.and_offset
        for k, (f0, f1) in enumerate(net.ands):
            out += b"%d %d %d\n" % (2 * (off + k), max(f0, f1), min(f0, f1))
    else:
        for k, la in enumerate(net.latches):
            out += _latch_line(2 * (1 + I + k), la, with_out=False)
        for l in net.pos:
            out += b"%d\n" % l
        off = net.and_offset
        for k, (f0, f1) in enumerate(net.ands):
            lhs = 2 * (off + k)
            rhs0, rhs1 = max(f0, f1), min(f0, f1)
            if rhs0 >= lhs:
                raise AigError("node %d not topologically ordered" % (off + k))
            out += _varint(lhs - rhs0)
            out += _varint(rhs0 - rhs1)
    if symbols:
        out += _symbol_section(net)
    return bytes(out)


def _latch_line(out_lit: int, la: Latch, with_out: bool = True) -> bytes:
    fields = [out_lit] if with_out else []
    fields.append(la.next_state)
    if la.init == 1:
        fields.append(1)
    elif la.init == 2:
        fields.append(out_lit)
    return (" ".join(str(f) for f in fields) + "\n").encode()


def _varint(x: int) -> bytes:
    out = bytearray()
    while True:
        b = x & 0x7F
        x >>= 7
        if x:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def _symbol_section(net: AigNetwork) -> bytes:
    out = bytearray()
    for k, n in enumerate(net.pi_names):
        if n != "i%d" % k:
            out += b"i%d %s\n" % (k, n.encode())
    for k, n in enumerate(net.latch_names):
        if n != "l%d" % k:
            out += b"l%d %s\n" % (k, n.encode())
    for k, n in enumerate(net.po_names):
        if n != "o%d" % k:
            out += b"o%d %s\n" % (k, n.encode())
    return bytes(out)
