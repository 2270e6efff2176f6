"""BLIF subset reader and truth-table elaboration."""

import pytest

from aigpart.aig import AigBuilder, eval_scalar
from aigpart.blif_io import BlifError, parse_blif, tt_to_aig
from aigpart.equiv import check_equiv


def test_and_gate():
    net = parse_blif(""".model top
.inputs a b
.outputs y
.names a b y
11 1
.end
""")
    b = AigBuilder(2)
    ref = b.finish([b.add_and(b.leaf_lit(0), b.leaf_lit(1))],
                   pi_names=["a", "b"], po_names=["y"])
    assert check_equiv(net, ref).kind == "equivalent_exhaustive"


def test_xor_from_cover():
    net = parse_blif(""".model top
.inputs a b
.outputs y
.names a b y
10 1
01 1
.end
""")
    for a in (0, 1):
        for c in (0, 1):
            assert eval_scalar(net, [a, c]) == [a ^ c]


def test_offset_cover():
    # y defined by its offset: 0 exactly when a=b=1, so y = nand
    net = parse_blif(""".model top
.inputs a b
.outputs y
.names a b y
11 0
.end
""")
    for a in (0, 1):
        for c in (0, 1):
            assert eval_scalar(net, [a, c]) == [1 - (a & c)]


def test_dont_care_column():
    net = parse_blif(""".model top
.inputs a b c
.outputs y
.names a b c y
1-1 1
.end
""")
    for a in (0, 1):
        for bb in (0, 1):
            for c in (0, 1):
                assert eval_scalar(net, [a, bb, c]) == [a & c]


def test_constant_nodes():
    net = parse_blif(""".model top
.inputs a
.outputs y z
.names y
1
.names z
.end
""")
    assert eval_scalar(net, [0]) == [1, 0]
    assert eval_scalar(net, [1]) == [1, 0]


def test_latch_parsed():
    net = parse_blif(""".model top
.inputs a
.outputs y
.latch nxt st 0
.names a st nxt
11 1
.names st y
1 1
.end
""")
    assert net.num_latches == 1
    assert net.latches[0].init == 0


def test_line_continuation():
    net = parse_blif(".model top\n.inputs a \\\nb\n.outputs y\n.names a b y\n11 1\n.end\n")
    assert net.num_pis == 2


def test_errors():
    with pytest.raises(BlifError):
        parse_blif(".model t\n.inputs a\n.outputs y\n.end\n")  # undriven y
    with pytest.raises(BlifError):
        parse_blif(".model t\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n")
    with pytest.raises(BlifError):
        parse_blif(
            ".model t\n.inputs %s\n.outputs y\n.names %s y\n%s 1\n.end\n"
            % (" ".join("x%d" % i for i in range(17)),
               " ".join("x%d" % i for i in range(17)), "1" * 17)
        )


def test_tt_to_aig_exhaustive_3vars():
    for tt in range(256):
        b = AigBuilder(3)
        leaves = [b.leaf_lit(i) for i in range(3)]
        root = tt_to_aig(tt, 3, leaves, b)
        net = b.finish([root])
        for m in range(8):
            vals = [(m >> i) & 1 for i in range(3)]
            assert eval_scalar(net, vals) == [(tt >> m) & 1], (tt, m)
