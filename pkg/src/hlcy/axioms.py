"""Mechanical checks of the algebraic identities every complex must satisfy.

Each check is a *cell*: a module-level function plus plain arguments, so a
grid can be farmed out to worker processes and merged back in list order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from hlcy import exactq
from hlcy.complexes import (
    build_slice, connes_B, cyclic_N, cyclic_t, extra_s, gamma_homotopy, h_operator,
    hochschild_b, b_prime, kahler_d, make_complex, mixed_delta,
)
from hlcy.grid import parallel_map
from hlcy.liealg import get_algebra
from hlcy.maps import total_mixed_D
from hlcy.words import Chain

WEIGHTS = tuple(range(-3, 5))
MAX_DEGREE = 5
MAX_LENGTH = 3


@dataclass
class CellResult:
    name: str
    anchor: str
    passed: bool
    cells: int = 0
    witness: Dict[str, str] = field(default_factory=dict)


# --- d o d = 0 on built slices ---------------------------------------------------------

def _dd_cell(complex_name: str, algebra: str, weight, length, max_degree: int) -> Tuple[bool, int, str]:
    cx = make_complex(complex_name, get_algebra(algebra))
    try:
        s = build_slice(cx, weight, range(0, max_degree + 1), length, check=True)
    except exactq.NotAComplexError as exc:
        return False, 0, str(exc)
    return True, sum(len(b) for b in s.bases.values()), ""


def _basis_words(complex_name, algebra, n, weight, length):
    return make_complex(complex_name, get_algebra(algebra)).words(n, weight, length)


def _op_pair_cell(kind: str, algebra: str, weight, length, max_degree: int) -> Tuple[bool, int, str]:
    """Operator identities checked on every basis word of the slice."""
    A = get_algebra(algebra)
    count = 0
    for n in range(0, max_degree + 1):
        if kind in ("delta-d", "D2", "kahler-dd", "gamma"):
            words = make_complex("mixed", A).words(n, weight, length)
        else:
            words = make_complex("hochschild", A).words(n, weight, length)
        for w in words:
            x = Chain.word(w)
            count += 1
            bad = _op_identity(kind, A, x, n)
            if bad:
                return False, count, f"{kind} fails on {w!r}: {bad!r}"
    return True, count, ""


def _op_identity(kind, A, x: Chain, n: int):
    """Residual of the identity on x; empty chain (or falsy) means it holds."""
    if kind == "b(1-t)":
        return hochschild_b(x - cyclic_t(x), A) - (b_prime(x, A) - cyclic_t(b_prime(x, A)))
    if kind == "bN":
        # N b = b' N: the other half of the (b, b') bicomplex
        return cyclic_N(hochschild_b(x, A)) - b_prime(cyclic_N(x), A)
    if kind == "b'b'":
        return b_prime(b_prime(x, A), A)
    if kind == "b's+sb'":
        return b_prime(extra_s(x, A), A) + extra_s(b_prime(x, A), A) - x
    if kind == "Bb+bB":
        return connes_B(hochschild_b(x, A), A) + hochschild_b(connes_B(x, A), A)
    if kind == "BB":
        return connes_B(connes_B(x, A), A)
    if kind == "delta-d":
        return mixed_delta(kahler_d(x), A) + kahler_d(mixed_delta(x, A))
    if kind == "kahler-dd":
        return kahler_d(kahler_d(x))
    if kind == "D2":
        for col in (1, 2):
            r = total_mixed_D(total_mixed_D({col: x}, A), A)
            if r:
                return r
        return Chain()
    if kind == "bh":
        # b' h = h b on Im(1 - t), up to the image of N (h(1 - t) = 1 - N/(n+1))
        if n < 1:
            return Chain()
        y = x - cyclic_t(x)
        lhs = b_prime(h_operator(y), A)
        rhs = h_operator(hochschild_b(y, A)) if n >= 2 else Chain()
        diff = lhs - rhs
        return diff - cyclic_t(diff)
    raise ValueError(kind)


def _gamma_cell(algebra: str, weight: int, length: int, max_degree: int) -> Tuple[bool, int, str]:
    """delta gamma + gamma delta = 1 on Omega/Im d at a nonzero weight."""
    cx = make_complex("mixed-mod-d", get_algebra(algebra))
    count = 0
    for n in range(0, max_degree + 1):
        for w in cx.words(n, weight, length):
            x = Chain.word(w)
            count += 1
            lhs = cx.d(gamma_homotopy(x))
            dx = cx.reduce(cx.d(x))
            if dx:
                lhs = lhs + gamma_homotopy(dx)
            if cx.reduce(lhs - x):
                return False, count, f"homotopy identity fails on {w!r}"
    return True, count, ""


CELL_FUNCS: Dict[str, Callable] = {"dd": _dd_cell, "op": _op_pair_cell, "gamma": _gamma_cell}


def _run_cell(cell):
    kind, args = cell
    return CELL_FUNCS[kind](*args)


# --- the suite --------------------------------------------------------------------------

FINITE_LIE = ("abelian2", "sl2", "solvable2")
FINITE_ASSOC = ("dual-numbers", "truncated3", "sqzero2")


def suite_plan(weights=WEIGHTS, max_degree=MAX_DEGREE, max_length=MAX_LENGTH) -> List[Tuple[str, str, list]]:
    """(check name, anchor, cells) in reporting order."""
    lengths = range(0, max_length + 1)
    plan = []
    for cname, label in (("leibniz", "CL"), ("lie", "Lambda")):
        plan.append((f"dd=0 {label}(witt)", "Leibniz/CE differential squares to zero",
                     [("dd", (cname, "witt", w, None, max_degree)) for w in weights]))
    for cname, label in (("hochschild", "b"), ("bprime", "b'"), ("cyclic", "b on C^lambda")):
        plan.append((f"dd=0 {label} on U(witt)", "Hochschild-type boundaries square to zero",
                     [("dd", (cname, "uwitt", w, L, max_degree)) for w in weights for L in lengths]))
    plan.append(("dd=0 delta on Omega(witt)", "Poisson/CE boundary on forms squares to zero",
                 [("dd", ("mixed", "witt", w, L, max_degree)) for w in weights for L in lengths]))
    plan.append(("dd=0 delta on Omega/Im d", "quotient differential squares to zero",
                 [("dd", ("mixed-mod-d", "witt", w, L, max_degree)) for w in weights for L in lengths]))
    for kind, label in (("kahler-dd", "dd=0 Kahler d"), ("delta-d", "delta d + d delta = 0"),
                        ("D2", "D o D = 0 mixed total complex")):
        plan.append((label, "mixed complex axioms",
                     [("op", (kind, "witt", w, L, max_degree)) for w in weights for L in lengths]))
    for name in FINITE_LIE:
        for cname, label in (("leibniz", "CL"), ("lie", "Lambda"), ("ker-pi1", "ker pi1")):
            plan.append((f"dd=0 {label}({name})", "finite fixture", [("dd", (cname, name, None, None, max_degree))]))
        plan.append((f"dd=0 mixed Omega({name})", "finite fixture",
                     [("dd", ("mixed", name, None, L, max_degree - 1)) for L in lengths]))
    for name in FINITE_ASSOC:
        for cname, label in (("hochschild", "b"), ("bprime", "b'"), ("cyclic", "C^lambda"), ("ker-pi2", "ker pi2")):
            plan.append((f"dd=0 {label}({name})", "finite fixture", [("dd", (cname, name, None, None, max_degree - 1))]))
    # operator identities on U(witt), degrees <= 4, length <= 2
    small = [(w, L) for w in range(-2, 3) for L in range(0, 3)]
    for kind, label in (("b(1-t)", "b(1-t) = (1-t)b'"), ("bN", "N b = b' N"),
                        ("b's+sb'", "b's + sb' = id"), ("Bb+bB", "Bb + bB = 0"), ("BB", "BB = 0"),
                        ("bh", "b'h = hb on Im(1-t) mod Im N")):
        deg = 3 if kind in ("Bb+bB", "BB") else 4
        cells = [("op", (kind, "uwitt", w, L, deg)) for w, L in small]
        cells += [("op", (kind, name, None, None, deg)) for name in FINITE_ASSOC]
        plan.append((label, "cyclic operator identities", cells))
    plan.append(("delta gamma + gamma delta = 1", "contracting homotopy on Omega/Im d, weight != 0",
                 [("gamma", ("witt", q, L, 3)) for q in (-2, -1, 1, 2, 3) for L in range(0, 4)]))
    return plan


def map_cells(cells: Sequence, jobs: Optional[int] = None) -> List:
    return parallel_map(_run_cell, cells, jobs)


def run_suite(jobs: Optional[int] = None, **kw) -> List[CellResult]:
    plan = suite_plan(**kw)
    flat = [c for _, _, cells in plan for c in cells]
    results = iter(map_cells(flat, jobs))
    out = []
    for name, anchor, cells in plan:
        rs = [next(results) for _ in cells]
        bad = next((msg for ok, _, msg in rs if not ok), None)
        r = CellResult(name, anchor, bad is None, sum(n for _, n, _ in rs))
        if bad:
            r.witness["failure"] = bad
        out.append(r)
    return out
