"""Chain maps, the two short exact sequences, their long exact sequences,
and the Godbillon-Vey verification pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from hlcy import exactq
from hlcy.complexes import (
    GradedSlice, build_slice, connes_B, ce_d, cyclic_N, cyclic_t, extra_s, h_operator, hochschild_b,
    b_prime, homology, in_boundaries, kahler_d, leibniz_d, make_complex, mixed_delta, project_cyclic,
)
from hlcy.exactq import Echelon, SparseMatrix
from hlcy.liealg import AssocPresentation, LiePresentation, PBWAlgebra, U_WITT, WITT
from hlcy.words import Chain, sort_sign, wedge_normalize

__all__ = [
    "pi1", "pi2", "theta", "phi", "alpha_chain", "kernel_to_cyclic", "iota_map", "p_project",
    "mu1", "mu2", "total_bB", "total_bbprime", "total_mixed_D", "wedge_in_cyclic",
    "SES", "pirashvili_ses", "connes_ses", "connecting_map", "LesPosition", "LesReport",
    "assemble_les", "LadderReport", "verify_ladder", "Check", "GvReport", "gv_pipeline",
    "GV", "GAMMA", "ALPHA_GV", "F_ALPHA", "THEOREM_ELEMENT", "BOUNDARY_WITNESS",
    "SesSlices", "ses_slices", "ConnectingMapError",
]


# --- projections and the maps theta, phi ---------------------------------------------

def pi1(c: Chain) -> Chain:
    """Tensor words onto wedge words."""
    return Chain.accumulate((r[1], r[0] * k) for w, k in c.items()
                            if (r := wedge_normalize(w)) is not None)


def pi2(c: Chain) -> Chain:
    return project_cyclic(c)


def _antisym_tail(w) -> List[Tuple[Tuple, int]]:
    head, tail = w[:1], w[1:]
    out = []
    for perm in permutations(range(len(tail))):
        s, _ = sort_sign(perm)
        out.append((head + tuple(tail[p] for p in perm), s))
    return out


def phi(c: Chain) -> Chain:
    """(a0, a1..an) -> sum over S_n of sgn * (a0, permuted tail), in Hochschild degree n."""
    return Chain.accumulate((nw, s * k) for w, k in c.items() for nw, s in _antisym_tail(w))


def theta(c: Chain) -> Chain:
    """Wedge words of degree n+1 into Connes' complex in degree n."""
    for w in c:
        if len(w) < 1:
            raise ValueError("theta is defined from wedge degree 1")
    return project_cyclic(phi(c))


def wedge_in_cyclic(letters: Sequence) -> Chain:
    """The class written a0^a1^...^an inside Connes' complex: 1/(n+1)! sum_S sgn * word."""
    m = len(letters)
    acc = []
    fact = 1
    for k in range(2, m + 1):
        fact *= k
    for perm in permutations(range(m)):
        s, _ = sort_sign(perm)
        acc.append((tuple(letters[p] for p in perm), Fraction(s, fact)))
    return project_cyclic(Chain.accumulate(acc))


def kernel_to_cyclic(y: Chain, A: AssocPresentation) -> Chain:
    """ker(pi_2) in degree n -> Connes' complex in degree n-1: (1/n) b' h, then pi_2."""
    if not y:
        return Chain()
    n = len(next(iter(y))) - 1
    return project_cyclic(b_prime(h_operator(y), A)) * Fraction(1, n)


def alpha_chain(x: Chain, A: AssocPresentation) -> Chain:
    """(1/n) b' h phi on ker(pi_1) in tensor degree n+1, landing in C^lambda_{n-1}."""
    if pi1(x):
        raise ValueError("alpha is defined on ker(pi_1) only")
    return kernel_to_cyclic(phi(x), A)


def _map_letters(c: Chain, f) -> Chain:
    return Chain.accumulate((tuple(f(a) for a in w), k) for w, k in c.items())


def mu1(c: Chain) -> Chain:
    """Tensor words over the Witt algebra into tensor words over its enveloping algebra."""
    return _map_letters(c, lambda a: (a,))


def mu2(c: Chain) -> Chain:
    return _map_letters(c, lambda a: (a,))


# --- total complexes -----------------------------------------------------------------
# A total chain is {column: Chain}.

def _clean(d):
    return {k: v for k, v in d.items() if v}


def total_bB(x: Dict[int, Chain], A) -> Dict[int, Chain]:
    """(b, B) bicomplex: D = b + B, B raising Hochschild degree by one, column k -> k-1."""
    out: Dict[int, Chain] = {}
    for k, c in x.items():
        out[k] = out.get(k, Chain()) + hochschild_b(c, A)
        if k >= 1:
            out[k - 1] = out.get(k - 1, Chain()) + connes_B(c, A)
    return _clean(out)


def total_bbprime(y: Dict[int, Chain], A) -> Dict[int, Chain]:
    """(b, -b') columns joined by 1 - t (odd -> even) and N (even -> odd)."""
    out: Dict[int, Chain] = {}
    for p, c in y.items():
        vert = hochschild_b(c, A) if p % 2 == 0 else -b_prime(c, A)
        out[p] = out.get(p, Chain()) + vert
        if p >= 1:
            hor = (c - cyclic_t(c)) if p % 2 == 1 else cyclic_N(c)
            out[p - 1] = out.get(p - 1, Chain()) + hor
    return _clean(out)


def total_mixed_D(x: Dict[int, Chain], lie: LiePresentation = WITT) -> Dict[int, Chain]:
    """D = delta + d on the mixed complex; d moves column k to k-1."""
    out: Dict[int, Chain] = {}
    for k, c in x.items():
        out[k] = out.get(k, Chain()) + mixed_delta(c, lie)
        if k >= 1:
            out[k - 1] = out.get(k - 1, Chain()) + kahler_d(c)
    return _clean(out)


def iota_map(x: Dict[int, Chain], A) -> Dict[int, Chain]:
    """x -> x + sNx: column k goes to column 2k, and sN of it to column 2k-1."""
    out = {}
    for k, c in x.items():
        out[2 * k] = c
        if k >= 1:
            out[2 * k - 1] = extra_s(cyclic_N(c), A)
    return _clean(out)


def p_project(y: Dict[int, Chain]) -> Chain:
    return project_cyclic(y.get(0, Chain()))


# --- short and long exact sequences -----------------------------------------------------

@dataclass
class SES:
    """0 -> kernel -> middle -> quotient -> 0 with projection ``project``."""

    name: str
    kernel: object
    middle: object
    quotient: object
    project: Callable[[Chain], Chain]
    labels: Tuple[str, str, str]


def pirashvili_ses(lie) -> SES:
    return SES("pirashvili", make_complex("ker-pi1", lie), make_complex("leibniz", lie),
               make_complex("lie", lie), pi1, ("H^rel", "HL", "H^Lie"))


def connes_ses(A) -> SES:
    return SES("connes", make_complex("ker-pi2", A), make_complex("hochschild", A),
               make_complex("cyclic", A), pi2, ("H(ker pi2)", "HH", "HC"))


@dataclass
class SesSlices:
    ses: SES
    K: GradedSlice
    M: GradedSlice
    Q: GradedSlice

    def projection_matrix(self, n) -> SparseMatrix:
        cols = []
        for w in self.M.bases[n]:
            v = self.Q.to_vector(n, self.ses.project(Chain.word(w)))
            cols.append({i: x for i, x in enumerate(v) if x})
        return SparseMatrix.from_columns(len(self.Q.bases[n]), cols)


def ses_slices(ses: SES, weight, degrees, length=None) -> SesSlices:
    return SesSlices(ses, *(build_slice(c, weight, degrees, length) for c in (ses.kernel, ses.middle, ses.quotient)))


class ConnectingMapError(RuntimeError):
    pass


def connecting_map(sl: SesSlices, n: int, z: Chain, lift: Optional[Chain] = None) -> Chain:
    """Snake-lemma boundary of a quotient cycle z in degree n; a cycle of the kernel in degree n-1.

    The lift is found by solving against the projection unless one is supplied.
    """
    if not z:
        return Chain()
    if lift is None:
        x = exactq.solve(sl.projection_matrix(n), sl.Q.to_vector(n, z))
        if x is None:
            raise ConnectingMapError(f"{sl.ses.name}: cannot lift through the projection in degree {n}")
        lift = sl.M.to_chain(n, x)
    elif sl.Q.complex.reduce(sl.ses.project(lift) - z):
        raise ConnectingMapError("supplied lift does not project to z")
    y = sl.M.complex.d(lift)
    if sl.Q.complex.reduce(sl.ses.project(y)):
        raise ConnectingMapError("d(lift) does not land in the kernel subcomplex")
    kx = sl.K.complex
    red = kx.reduce(y)
    back = Chain()
    for w, k in red.items():
        back = back + kx.lift(w) * k
    if back != y:
        raise ConnectingMapError("d(lift) is not a combination of kernel basis chains")
    return y


def _homology_rank(target: GradedSlice, n: int, images: List[Chain]) -> int:
    """Rank of the subspace spanned by ``images`` in H_n(target)."""
    ech = Echelon(len(target.bases[n]))
    d_in = target.diffs.get(n + 1)
    if d_in is not None:
        for col in d_in.col_dicts():
            if col:
                ech.add(col)
    base = len(ech)
    for c in images:
        v = target.to_vector(n, c)
        ech.add({i: x for i, x in enumerate(v) if x})
    return len(ech) - base


def _all_boundaries(target: GradedSlice, n: int, chains: List[Chain]) -> bool:
    return _homology_rank(target, n, chains) == 0


@dataclass
class LesPosition:
    group: str
    degree: int
    dim: int
    rank_in: Optional[int]
    rank_out: Optional[int]
    composite_zero: Optional[bool]
    exact: Optional[bool]


@dataclass
class LesReport:
    ses: str
    weight: Optional[int]
    length: Optional[int]
    positions: List[LesPosition] = field(default_factory=list)
    homology_dims: Dict[str, Dict[int, int]] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.positions if p.exact is not None)


def assemble_les(sl: SesSlices, degrees=None) -> LesReport:
    """Homology maps i_*, p_*, boundary around the sequence; exactness at interior positions.

    ``degrees`` defaults to lo..hi-1 of the slices (degrees where homology is known).
    """
    lo = sl.M.lo
    hi = sl.M.hi - 1
    degrees = list(degrees) if degrees is not None else list(range(lo, hi + 1))
    hk = {s: homology(x) for s, x in zip("KMQ", (sl.K, sl.M, sl.Q))}
    reps = {s: {n: hk[s].degrees[n].representatives for n in degrees} for s in "KMQ"}
    dims = {s: {n: hk[s].degrees[n].dim for n in degrees} for s in "KMQ"}
    lab = dict(zip("KMQ", sl.ses.labels))
    rep = LesReport(sl.ses.name, sl.M.weight, sl.M.length,
                    homology_dims={lab[s]: dims[s] for s in "KMQ"})

    # maps out of each group, as images of its representatives
    def out_images(s, n):
        if s == "K":
            return "M", n, list(reps["K"][n])
        if s == "M":
            return "Q", n, [sl.ses.project(c) for c in reps["M"][n]]
        return "K", n - 1, [connecting_map(sl, n, c) for c in reps["Q"][n]]

    def slice_of(s):
        return {"K": sl.K, "M": sl.M, "Q": sl.Q}[s]

    def out_rank(s, n):
        t, m, imgs = out_images(s, n)
        if m < lo:
            return 0, t, m, imgs
        return _homology_rank(slice_of(t), m, imgs), t, m, imgs

    seq = []
    for n in sorted(degrees, reverse=True):
        seq += [("K", n), ("M", n), ("Q", n)]
    for idx, (s, n) in enumerate(seq):
        r_out, t, m, imgs = out_rank(s, n)
        if idx == 0:
            rep.positions.append(LesPosition(f"{lab[s]}_{n}", n, dims[s][n], None, r_out, None, None))
            continue
        ps, pn = seq[idx - 1]
        r_in, _, _, in_imgs = out_rank(ps, pn)
        # composite: push the incoming images through the outgoing map
        if s == "K":
            comp = [c for c in in_imgs]          # inclusion of kernel cycles into middle
            comp_ok = _all_boundaries(sl.M, n, comp)
        elif s == "M":
            comp_ok = _all_boundaries(sl.Q, n, [sl.ses.project(c) for c in in_imgs])
        else:
            comp_ok = (n - 1 < lo) or _all_boundaries(sl.K, n - 1, [connecting_map(sl, n, c) for c in in_imgs])
        exact = comp_ok and (r_in == dims[s][n] - r_out)
        rep.positions.append(LesPosition(f"{lab[s]}_{n}", n, dims[s][n], r_in, r_out, comp_ok, exact))
    return rep


# --- the ladder ---------------------------------------------------------------------------

@dataclass
class LadderReport:
    top: LesReport
    bottom: LesReport
    squares: Dict[str, bool]
    lemma: Dict[str, bool]

    @property
    def ok(self):
        return self.top.exact and self.bottom.exact and all(self.squares.values()) and all(self.lemma.values())


def verify_ladder(A: AssocPresentation, weight=None, max_degree=4, length=None) -> LadderReport:
    """Both LESs for A, the three squares on homology representatives, and the
    identification H_n(ker pi_2) = HC_{n-1} via (1/n) b' h."""
    top = ses_slices(pirashvili_ses(A), weight, range(0, max_degree + 3), length)
    bot = ses_slices(connes_ses(A), weight, range(0, max_degree + 2), length)
    top_rep = assemble_les(top, range(0, max_degree + 2))
    bot_rep = assemble_les(bot, range(0, max_degree + 1))

    squares: Dict[str, bool] = {}
    hK = homology(top.K)
    hM = homology(top.M)
    hQ = homology(top.Q)
    bK = homology(bot.K)
    for m in range(1, max_degree + 2):
        n = m - 1
        # kernel square: phi restricted to ker pi_1 lands in ker pi_2 cycles
        ok = True
        for z in hK.degrees[m].representatives:
            y = phi(z)
            ok &= not pi2(y) and not hochschild_b(y, A)
        squares[f"alpha|phi m={m}"] = ok
        # middle square: pi_2 phi = theta pi_1 on HL representatives (chain level)
        ok = all(pi2(phi(z)) == theta(pi1(z)) for z in hM.degrees[m].representatives)
        squares[f"I phi = theta pi1 m={m}"] = ok
        # boundary square: d_bottom theta = alpha d_top up to a boundary in ker pi_2
        ok = True
        if n >= 1:
            diffs = []
            for z in hQ.degrees[m].representatives:
                up = phi(connecting_map(top, m, z))
                down = connecting_map(bot, n, theta(z))
                diffs.append(up - down)
            ok = _all_boundaries(bot.K, n - 1, diffs)
        squares[f"S-square m={m}"] = ok

    lemma: Dict[str, bool] = {}
    hC = homology(bot.Q)
    for n in range(1, max_degree + 1):
        ys = bK.degrees[n].representatives
        imgs = [kernel_to_cyclic(y, A) for y in ys]
        cyc = all(not project_cyclic(hochschild_b(c, A)) for c in imgs)
        rk = _homology_rank(bot.Q, n - 1, imgs)
        # boundaries of ker pi_2 go to boundaries
        bnd = [kernel_to_cyclic(bot.K.complex.d(bot.K.complex.lift(w)), A) for w in bot.K.bases[n + 1]]
        well = _all_boundaries(bot.Q, n - 1, bnd)
        lemma[f"H_{n}(ker pi2) = HC_{n-1}"] = cyc and well and rk == len(ys) == hC.degrees[n - 1].dim
    return LadderReport(top_rep, bot_rep, squares, lemma)


# --- Godbillon-Vey ----------------------------------------------------------------------

GV = Chain.word((-1, 0, 1))
GAMMA = Chain({(-1, 0, 1): Fraction(1, 2), (0, -1, 1): Fraction(-1, 2), (-1, -1, 2): Fraction(1, 6)})
# (e_-1 (x) de_0 ^ de_1  in column 0,  e_0^2  in column 1)
ALPHA_GV = {0: Chain.word(((-1,), (0, 1))), 1: Chain.word(((0, 0), ()))}
_u = lambda *ms: tuple(tuple(m) for m in ms)
THEOREM_ELEMENT = Chain({
    _u([-1], [0], [1]): 1,
    _u([-1], [1], [0]): -1,
    _u([], [0], [0]): 1,
    _u([], [], [0, 0]): -1,
})
F_ALPHA = {0: THEOREM_ELEMENT, 1: Chain.word(((0, 0),))}
BOUNDARY_WITNESS = Chain({_u([], [], [0], [0]): -1})


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    witness: Dict[str, str] = field(default_factory=dict)


@dataclass
class GvReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self):
        return len(self.checks) == 9 and all(c.passed for c in self.checks)

    @property
    def failed(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)


def gv_pipeline(lie: LiePresentation = WITT, cap_evidence: int = 3) -> GvReport:
    """Run the nine Godbillon-Vey checks in order; stops at the first failure.

    ``lie`` can be swapped for a perturbed bracket in regression tests.
    ``cap_evidence`` is the length cap used for the non-vanishing evidence
    over the enveloping algebra (0 disables it).
    """
    from hlcy.words import render_chain
    U = U_WITT if lie is WITT else PBWAlgebra(lie)
    rep = GvReport()
    R = lambda kind, c: render_chain(kind, c)

    def add(name, anchor, passed, **wit):
        rep.checks.append(Check(name, anchor, bool(passed), {k: v for k, v in wit.items()}))
        return passed

    # 1
    dg = leibniz_d(GAMMA, lie)
    p1 = pi1(GAMMA)
    if not add("gamma-leibniz-cycle", "d(gamma)=0, pi1(gamma)=e-1∧e0∧e1",
               not dg and p1 == GV, gamma=R("tensor", GAMMA), d_gamma=R("tensor", dg), pi1_gamma=R("wedge", p1)):
        return rep
    # 2
    lam = build_slice(make_complex("lie", lie), 0, range(0, 5))
    h3 = homology(lam).degrees[3]
    gv_cycle = not ce_d(GV, lie)
    gv_nonbdry = in_boundaries(lam, 3, GV) is None
    if not add("H^Lie_3(W)_0 = 1", "dim H^Lie_3 weight 0 = 1, generated by e-1∧e0∧e1",
               h3.dim == 1 and gv_cycle and gv_nonbdry, dim=str(h3.dim), representative=R("wedge", GV)):
        return rep
    # 3
    D = total_mixed_D(ALPHA_GV, lie)
    if not add("alpha-D-cycle", "(delta + d)(e-1⊗de0∧de1, e0^2) = 0", not D,
               delta_part=R("form", mixed_delta(ALPHA_GV[0], lie)), d_part=R("form", kahler_d(ALPHA_GV[1]))):
        return rep
    # 4
    bB = total_bB(F_ALPHA, U)
    if not add("f(alpha)-bB-cycle", "(b + B) f(alpha) = 0", not bB,
               b_part=R("utensor", hochschild_b(F_ALPHA[0], U)), B_part=R("utensor", connes_B(F_ALPHA[1], U))):
        return rep
    # 5
    io = iota_map(F_ALPHA, U)
    image = p_project(io)
    stated = project_cyclic(THEOREM_ELEMENT)
    io_cycle = not total_bbprime(io, U)
    if not add("p-iota-f(alpha)", "p∘ι∘f(alpha) = stated element of C^λ_2", image == stated and io_cycle,
               image=R("utensor", image)):
        return rep
    # 6
    gv_u = mu2(GV)
    th = theta(gv_u)
    x = project_cyclic(Chain({_u([], [0], [0]): 1, _u([], [], [0, 0]): -1}))
    residual = stated - th - x
    wit_ok = not project_cyclic(hochschild_b(BOUNDARY_WITNESS, U) - x)
    if not add("boundary-witness", "stated - θ(GV) = b(-(1⊗1⊗e0⊗e0)) in C^λ",
               not residual and wit_ok, witness=R("utensor", BOUNDARY_WITNESS), boundary=R("utensor", x)):
        return rep
    # 7
    third = Chain.accumulate((tuple((a,) for a in p), Fraction(sort_sign(p)[0], 3))
                             for p in permutations((-1, 0, 1)))
    third = project_cyclic(third)
    two_wedge = wedge_in_cyclic(((-1,), (0,), (1,))) * 2
    diff = stated - third
    if not add("class = 2(e-1∧e0∧e1)", "stated ≡ 1/3 Σ_S3 sgn e_σ(-1)⊗e_σ(0)⊗e_σ(1) = 2(e-1∧e0∧e1) in HC_2",
               third == two_wedge and not project_cyclic(hochschild_b(BOUNDARY_WITNESS, U) - diff),
               third=R("utensor", third)):
        return rep
    # 8
    if not add("theta-mu2-detects", "(θ∘μ2)(e-1∧e0∧e1) = 2(e-1∧e0∧e1)", th == two_wedge,
               image=R("utensor", th)):
        return rep
    # 9
    route_a = project_cyclic(phi(mu1(GAMMA)))
    route_b = theta(mu2(pi1(GAMMA)))
    cl = build_slice(make_complex("leibniz", lie), 0, range(0, 5))
    gamma_nonzero = in_boundaries(cl, 3, GAMMA) is None
    wit = {"route_a": R("utensor", route_a), "route_b": R("utensor", route_b), "boundary_witness": "0"}
    nonzero_u = True
    if cap_evidence:
        # non-vanishing inside length-capped slices; a capped boundary would be a genuine one
        A_cl = build_slice(make_complex("leibniz", U), 0, range(3, 5), cap_evidence)
        A_lam = build_slice(make_complex("lie", U), 0, range(3, 5), cap_evidence)
        A_hh = build_slice(make_complex("hochschild", U), 0, range(2, 4), cap_evidence)
        A_hc = build_slice(make_complex("cyclic", U), 0, range(2, 4), cap_evidence)
        probes = [(A_cl, 3, mu1(GAMMA)), (A_lam, 3, mu2(GV)), (A_hh, 2, phi(mu1(GAMMA))), (A_hc, 2, route_b)]
        nonzero_u = all(s.complex.reduce(s.complex.d(c)) == Chain() and in_boundaries(s, n, c) is None
                        for s, n, c in probes)
        wit["capped_evidence"] = f"length<= {cap_evidence}: {'non-boundary' if nonzero_u else 'BOUNDARY FOUND'}"
    add("diagram-agrees", "I∘φ∘μ1(gamma) = θ∘μ2∘pi1(gamma); classes non-zero",
        route_a == route_b and gamma_nonzero and gv_nonbdry and nonzero_u, **wit)
    return rep
