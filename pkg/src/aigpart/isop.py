"""Truth-table resynthesis: irredundant sum-of-products (Minato-style
recursion over cofactor bounds) followed by literal factoring, emitted as
AND nodes.  Shared kernel for the rewriting and refactoring passes.

Truth tables are integers over 2**k minterms, variable 0 toggling fastest.
"""

from __future__ import annotations

from functools import lru_cache

from .aig import AigBuilder


@lru_cache(maxsize=None)
def var_mask(v: int, nvars: int) -> int:
    """Positions of the truth table where variable v is 1."""
    period = 1 << v
    m = ((1 << period) - 1) << period
    span = 2 * period
    width = 1 << nvars
    while span < width:
        m |= m << span
        span *= 2
    return m


def _cofactors(t: int, v: int, nvars: int) -> tuple[int, int]:
    """Negative/positive cofactors, expanded back to the full space."""
    m = var_mask(v, nvars)
    period = 1 << v
    t0 = t & ~m
    t0 |= t0 << period
    t1 = t & m
    t1 |= t1 >> period
    full = (1 << (1 << nvars)) - 1
    return t0 & full, t1 & full


def isop(lower: int, upper: int, nvars: int) -> list[tuple[tuple[int, int], ...]]:
    """Irredundant SOP cover f with lower <= f <= upper.

    Cubes are tuples of (variable, phase) literals; the empty cube is the
    tautology.
    """
    full = (1 << (1 << nvars)) - 1
    lower &= full
    upper &= full
    if lower & ~upper:
        raise ValueError("lower bound not contained in upper bound")
    cubes, _ = _isop_rec(lower, upper, nvars - 1, nvars, full)
    return cubes


def _isop_rec(L, U, vtop, nvars, full):
    if L == 0:
        return [], 0
    if U == full:
        return [()], full
    # top variable on which either bound depends
    v = vtop
    while v >= 0:
        L0, L1 = _cofactors(L, v, nvars)
        U0, U1 = _cofactors(U, v, nvars)
        if L0 != L1 or U0 != U1:
            break
        v -= 1
    assert v >= 0, "constant bounds must hit a base case"
    c0, f0 = _isop_rec(L0 & ~U1, U0, v - 1, nvars, full)
    c1, f1 = _isop_rec(L1 & ~U0, U1, v - 1, nvars, full)
    Lrest = (L0 & ~f0) | (L1 & ~f1)
    cd, fd = _isop_rec(Lrest, U0 & U1, v - 1, nvars, full)
    m = var_mask(v, nvars)
    cubes = (
        [c + ((v, 0),) for c in c0]
        + [c + ((v, 1),) for c in c1]
        + cd
    )
    f = (f0 & ~m) | (f1 & m) | fd
    return cubes, f


# factored expression trees: ("c", 0|1) | ("l", (var, phase)) | ("and", a, b) | ("or", a, b)

def factor(cubes) -> tuple:
    """Literal factoring of an SOP cover: divide by the most frequent
    literal recursively."""
    if not cubes:
        return ("c", 0)
    if any(len(c) == 0 for c in cubes):
        return ("c", 1)
    if len(cubes) == 1:
        return _and_tree([("l", l) for l in sorted(cubes[0])])
    freq: dict[tuple[int, int], int] = {}
    for c in cubes:
        for l in c:
            freq[l] = freq.get(l, 0) + 1
    best = min(freq, key=lambda l: (-freq[l], l))
    if freq[best] <= 1:
        return _or_tree([factor([c]) for c in sorted(cubes)])
    quot = [tuple(l for l in c if l != best) for c in cubes if best in c]
    rem = [c for c in cubes if best not in c]
    left = ("and", ("l", best), factor(quot))
    if not rem:
        return left
    return ("or", left, factor(rem))


def _and_tree(parts):
    while len(parts) > 1:
        parts = [
            ("and", parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i]
            for i in range(0, len(parts), 2)
        ]
    return parts[0]


def _or_tree(parts):
    while len(parts) > 1:
        parts = [
            ("or", parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i]
            for i in range(0, len(parts), 2)
        ]
    return parts[0]


def expr_and_count(e) -> int:
    if e[0] in ("and", "or"):
        return 1 + expr_and_count(e[1]) + expr_and_count(e[2])
    return 0


def emit_expr(e, leaf_lits, add_and) -> int:
    """Build the expression with an add_and(a, b) -> literal callback."""
    op = e[0]
    if op == "c":
        return e[1]
    if op == "l":
        var, phase = e[1]
        return leaf_lits[var] ^ (phase ^ 1)
    a = emit_expr(e[1], leaf_lits, add_and)
    b = emit_expr(e[2], leaf_lits, add_and)
    if op == "and":
        return add_and(a, b)
    return add_and(a ^ 1, b ^ 1) ^ 1


def resynth_expr(tt: int, nvars: int):
    """Pick the cheaper factored form of the function or its complement."""
    full = (1 << (1 << nvars)) - 1
    tt &= full
    if tt == 0:
        return ("c", 0)
    if tt == full:
        return ("c", 1)
    pos = factor(isop(tt, tt, nvars))
    neg = factor(isop(full & ~tt, full & ~tt, nvars))
    if expr_and_count(neg) < expr_and_count(pos):
        return ("not", neg)
    return pos


def resynth_tt(tt: int, nvars: int, leaf_lits, add_and) -> int:
    """Resynthesize a truth table over the given leaves; returns the root
    literal.  Deterministic."""
    e = resynth_expr(tt, nvars)
    if e[0] == "not":
        return emit_expr(e[1], leaf_lits, add_and) ^ 1
    return emit_expr(e, leaf_lits, add_and)
