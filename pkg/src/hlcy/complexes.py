"""Chain complexes as finite graded slices with explicit sparse differentials.

Operators act on :class:`~hlcy.words.Chain` values; a :class:`Complex`
bundles one differential with its basis enumeration and, for quotients
and subcomplexes, the maps between ambient chains and slice coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from hlcy import exactq
from hlcy.exactq import Echelon, SparseMatrix
from hlcy.liealg import (AssocPresentation, LiePresentation, PresentationError, WITT, poisson)
from hlcy.words import Chain, InfiniteSliceError, enumerate_slice_basis, monomials, sort_sign, wedge_normalize

__all__ = [
    "leibniz_d", "ce_d", "hochschild_b", "b_prime", "cyclic_t", "cyclic_N", "extra_s", "connes_B",
    "h_operator", "mixed_delta", "kahler_d", "gamma_homotopy", "cyclic_class", "project_cyclic",
    "Complex", "GradedSlice", "DegreeHomology", "HomologyReport",
    "make_complex", "build_slice", "homology", "is_cycle", "boundary_witness_check",
    "COMPLEX_NAMES", "HomotopyError", "SliceError",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class HomotopyError(ValueError):
    pass


class SliceError(RuntimeError):
    pass


def _acc_add(acc, w, c):
    v = acc.get(w, _ZERO) + c
    if v:
        acc[w] = v
    else:
        acc.pop(w, None)


# --- Lie-type differentials ---------------------------------------------------------

@lru_cache(maxsize=None)
def _leibniz_word(lie, w):
    n = len(w)
    if n <= 1:
        return ()
    acc: Dict = {}
    for j in range(1, n):           # 0-based j, sign (-1)^(j+1)
        sj = -1 if j % 2 == 0 else 1
        gj = w[j]
        rest = w[:j] + w[j + 1:]
        for i in range(j):
            for k, c in lie.bracket_letters(w[i], gj).items():
                nw = rest[:i] + (k,) + rest[i + 1:]
                _acc_add(acc, nw, sj * c)
    return tuple(acc.items())


def leibniz_d(c: Chain, lie: LiePresentation = WITT) -> Chain:
    """Leibniz boundary on tensor words; degree 1 maps to 0 in the ground field."""
    return c.map_linear(lambda w: Chain._wrap(dict(_leibniz_word(lie, w))))


@lru_cache(maxsize=None)
def _ce_word(lie, w):
    acc: Dict = {}
    for nw, c in _leibniz_word(lie, w):
        r = wedge_normalize(nw)
        if r is not None:
            _acc_add(acc, r[1], r[0] * c)
    return tuple(acc.items())


def ce_d(c: Chain, lie: LiePresentation = WITT) -> Chain:
    """Chevalley-Eilenberg boundary on wedge words (same signs as the Leibniz one)."""
    return c.map_linear(lambda w: Chain._wrap(dict(_ce_word(lie, w))))


# --- Hochschild / cyclic operators ----------------------------------------------

def _mul(A, a, b):
    return A.multiply_letters(a, b)


@lru_cache(maxsize=None)
def _b_word(A, w, prime):
    n = len(w) - 1
    acc: Dict = {}
    for i in range(n):
        s = -1 if i % 2 else 1
        for k, c in _mul(A, w[i], w[i + 1]).items():
            _acc_add(acc, w[:i] + (k,) + w[i + 2:], s * c)
    if not prime and n >= 1:
        s = -1 if n % 2 else 1
        for k, c in _mul(A, w[n], w[0]).items():
            _acc_add(acc, (k,) + w[1:n], s * c)
    return tuple(acc.items())


def hochschild_b(c: Chain, A: AssocPresentation) -> Chain:
    return c.map_linear(lambda w: Chain._wrap(dict(_b_word(A, w, False))))


def b_prime(c: Chain, A: AssocPresentation) -> Chain:
    return c.map_linear(lambda w: Chain._wrap(dict(_b_word(A, w, True))))


def _t_word(w):
    n = len(w) - 1
    return (w[-1],) + w[:-1], (-1 if n % 2 else 1)


def cyclic_t(c: Chain) -> Chain:
    """t(a0, ..., an) = (-1)^n (an, a0, ..., a_{n-1})."""
    return Chain.accumulate((nw, s * k) for w, k in c.items() for nw, s in [_t_word(w)])


def cyclic_N(c: Chain) -> Chain:
    out = Chain()
    cur = c
    for w in c:
        n = len(w) - 1
        break
    else:
        return out
    for _ in range(n + 1):
        out = out + cur
        cur = cyclic_t(cur)
    return out


def extra_s(c: Chain, A: AssocPresentation) -> Chain:
    u = A.unit
    return Chain._wrap({(u,) + w: k for w, k in c.items()})


def connes_B(c: Chain, A: AssocPresentation) -> Chain:
    """B = (1 - t) s N."""
    y = extra_s(cyclic_N(c), A)
    return y - cyclic_t(y)


def h_operator(c: Chain) -> Chain:
    """h = -1/(n+1) (t + 2t^2 + ... + n t^n) on degree n."""
    if not c:
        return Chain()
    n = len(next(iter(c))) - 1
    if n < 1:
        raise ValueError("h is defined in degree >= 1")
    out = Chain()
    cur = c
    for k in range(1, n + 1):
        cur = cyclic_t(cur)
        out = out + cur * k
    return out * Fraction(-1, n + 1)


@lru_cache(maxsize=None)
def cyclic_class(w) -> Optional[Tuple[int, Tuple]]:
    """(sign, orbit representative) with w = sign * rep modulo (1 - t); None if w = 0 there.

    The representative is the lexicographically least rotation.
    """
    n = len(w) - 1
    best = None
    for k in range(n + 1):
        r = w[len(w) - k:] + w[:len(w) - k] if k else w
        s = -1 if (n * k) % 2 else 1
        if r == w and s == -1:
            return None
        if best is None or r < best[1]:
            best = (s, r)
    return best


def project_cyclic(c: Chain) -> Chain:
    """pi_2: Hochschild chains onto canonical cyclic representatives."""
    acc: Dict = {}
    for w, k in c.items():
        cl = cyclic_class(w)
        if cl is not None:
            _acc_add(acc, cl[1], cl[0] * k)
    return Chain._wrap(acc)


# --- mixed complex (S(g) (x) Lambda g, delta, d) -------------------------------------

@lru_cache(maxsize=None)
def _delta_word(lie, w):
    mono, form = w
    n = len(form)
    acc: Dict = {}
    for i in range(n):
        s = 1 if i % 2 == 0 else -1          # (-1)^{(i+1)+1}, 1-based i
        rest = form[:i] + form[i + 1:]
        for m, c in poisson(mono, form[i], lie).items():
            _acc_add(acc, (m, rest), s * c)
    for j in range(1, n):
        s = -1 if j % 2 == 1 else 1          # (-1)^{(j+1)+1}
        rest = form[:j] + form[j + 1:]
        for i in range(j):
            for k, c in lie.bracket_letters(form[i], form[j]).items():
                r = wedge_normalize(rest[:i] + (k,) + rest[i + 1:])
                if r is not None:
                    _acc_add(acc, (mono, r[1]), s * r[0] * c)
    return tuple(acc.items())


def mixed_delta(c: Chain, lie: LiePresentation = WITT) -> Chain:
    return c.map_linear(lambda w: Chain._wrap(dict(_delta_word(lie, w))))


@lru_cache(maxsize=None)
def _kahler_word(w):
    mono, form = w
    acc: Dict = {}
    k = 0
    while k < len(mono):
        j = k
        while j < len(mono) and mono[j] == mono[k]:
            j += 1
        g = mono[k]
        r = wedge_normalize((g,) + form)
        if r is not None:
            _acc_add(acc, (mono[:k] + mono[k + 1:], r[1]), r[0] * (j - k))
        k = j
    return tuple(acc.items())


def kahler_d(c: Chain) -> Chain:
    """Exterior derivative: d(f (x) w) = df ^ w, df = sum_i (df/de_i) de_i."""
    return c.map_linear(lambda w: Chain._wrap(dict(_kahler_word(w))))


def gamma_homotopy(c: Chain, n: Optional[int] = None) -> Chain:
    """gamma_n(f (x) w) = (-1)^{n+1} / wt * (f (x) w ^ de_0)."""
    acc: Dict = {}
    for (mono, form), k in c.items():
        deg = len(form) if n is None else n
        wt = sum(mono) + sum(form)
        if wt == 0:
            raise HomotopyError("homotopy undefined at weight 0")
        r = wedge_normalize(form + (0,))
        if r is None:
            continue
        coef = Fraction((-1) ** (deg + 1), wt) * r[0] * k
        _acc_add(acc, (mono, r[1]), coef)
    return Chain._wrap(acc)


# --- complexes ---------------------------------------------------------------------

class Complex:
    """One differential plus basis enumeration and coordinate maps.

    ``words(n, weight, length)`` lists basis labels of degree n.  ``lift``
    turns a label into an ambient chain, ``reduce`` maps an ambient chain
    (lying in the complex) back to a chain of labels.
    """

    name = ""
    kind = "tensor"

    def __init__(self, alg):
        self.alg = alg

    def words(self, n, weight, length):
        raise NotImplementedError

    def d(self, c: Chain) -> Chain:
        raise NotImplementedError

    def lift(self, w) -> Chain:
        return Chain.word(w)

    def reduce(self, c: Chain) -> Chain:
        return c

    @property
    def render_kind(self):
        if self.kind in ("tensor", "wedge") and getattr(self.alg, "letter_kind", "tensor") == "utensor":
            return "utensor" if self.kind == "tensor" else "uwedge"
        return self.kind

    def __repr__(self):
        return f"{self.name}({self.alg.name})"


class LeibnizComplex(Complex):
    name = "CL"

    def words(self, n, weight, length):
        if n < 0:
            return []
        if n == 0:
            return [()] if not weight else []
        return self.alg.tensor_words(n, weight, length)

    def d(self, c):
        return leibniz_d(c, self.alg)


class CEComplex(Complex):
    name = "Lambda"
    kind = "wedge"

    def words(self, n, weight, length):
        if n < 0:
            return []
        if n == 0:
            return [()] if not weight else []
        return self.alg.wedge_words(n, weight, length)

    def d(self, c):
        return ce_d(c, self.alg)


class KerPi1Complex(Complex):
    """ker(pi_1) inside CL; labels are the non-canonical tensor words."""

    name = "KerPi1Shift2"

    def words(self, n, weight, length):
        if n < 2:
            return []
        return [w for w in self.alg.tensor_words(n, weight, length)
                if (r := wedge_normalize(w)) is None or r[1] != w]

    def lift(self, w):
        r = wedge_normalize(w)
        if r is None:
            return Chain.word(w)
        return Chain._wrap({w: _ONE, r[1]: Fraction(-r[0])})

    def reduce(self, c):
        return Chain._wrap({w: k for w, k in c.items()
                            if (r := wedge_normalize(w)) is None or r[1] != w})

    def d(self, c):
        return leibniz_d(c, self.alg)


def _require_assoc(alg, what):
    if not isinstance(alg, AssocPresentation):
        raise PresentationError(f"{what} needs an associative algebra, got {alg.name}")


class HochschildComplex(Complex):
    name = "CHH"

    def __init__(self, alg):
        _require_assoc(alg, self.name)
        super().__init__(alg)

    def words(self, n, weight, length):
        if n < 0:
            return []
        return self.alg.tensor_words(n + 1, weight, length)

    def d(self, c):
        return hochschild_b(c, self.alg)


class BPrimeComplex(HochschildComplex):
    name = "BPrimeColumn"

    def words(self, n, weight, length):
        # b' lands in degree n-1 >= 0 only
        return super().words(n, weight, length)

    def d(self, c):
        return b_prime(c, self.alg)


class CyclicComplex(HochschildComplex):
    """Connes' complex: coinvariants of t, labels are least rotations."""

    name = "CLambda"

    def words(self, n, weight, length):
        return [w for w in super().words(n, weight, length)
                if (cl := cyclic_class(w)) is not None and cl[1] == w]

    def reduce(self, c):
        return project_cyclic(c)


class KerPi2Complex(HochschildComplex):
    """ker(pi_2) inside CHH; labels are the words that are not orbit representatives."""

    name = "KerPi2"

    def words(self, n, weight, length):
        return [w for w in super().words(n, weight, length)
                if (cl := cyclic_class(w)) is None or cl[1] != w]

    def lift(self, w):
        cl = cyclic_class(w)
        if cl is None:
            return Chain.word(w)
        return Chain._wrap({w: _ONE, cl[1]: Fraction(-cl[0])})

    def reduce(self, c):
        return Chain._wrap({w: k for w, k in c.items()
                            if (cl := cyclic_class(w)) is None or cl[1] != w})


def _form_words(lie, n, weight, length):
    if n < 0 or length is None or length < 0:
        if length is None:
            raise InfiniteSliceError(f"Omega({lie.name}) slices need a length (L) grading")
        return []
    if lie.graded:
        if weight is None:
            raise InfiniteSliceError(f"Omega({lie.name}) slices need a weight")
        return enumerate_slice_basis("form", weight, n, length)
    from itertools import combinations, combinations_with_replacement
    return sorted((m, f) for m in combinations_with_replacement(range(lie.dim), length)
                  for f in combinations(range(lie.dim), n))


class MixedOmega(Complex):
    """(S(g) (x) Lambda^n g, delta) at fixed weight and exact length L."""

    name = "MixedOmega"
    kind = "form"

    def words(self, n, weight, length):
        return _form_words(self.alg, n, weight, length)

    def d(self, c):
        return mixed_delta(c, self.alg)


class MixedOmegaModImD(MixedOmega):
    """Quotient by the image of the exterior derivative, slice by slice.

    Coset labels are the words left free by an echelon basis of Im d whose
    pivots sit on the largest words.
    """

    name = "MixedOmegaModImD"

    def __init__(self, alg):
        super().__init__(alg)
        self._cache = {}

    def _image(self, n, weight, length):
        key = (n, weight, length)
        if key not in self._cache:
            full = _form_words(self.alg, n, weight, length)
            idx = {w: i for i, w in enumerate(full)}
            ech = Echelon(len(full), prefer=lambda c: -c)
            for src in _form_words(self.alg, n - 1, weight, length + 1):
                img = kahler_d(Chain.word(src))
                ech.add({idx[w]: k for w, k in img.items()})
            ech.reduce_fully()
            self._cache[key] = (full, idx, ech)
        return self._cache[key]

    def words(self, n, weight, length):
        full, idx, ech = self._image(n, weight, length)
        piv = set(ech.pivots)
        return [w for i, w in enumerate(full) if i not in piv]

    def reduce(self, c):
        if not c:
            return c
        groups: Dict = {}
        for (mono, form), k in c.items():
            key = (len(form), sum(mono) + sum(form), len(mono))
            groups.setdefault(key, []).append(((mono, form), k))
        out: Dict = {}
        for (n, wt, L), items in groups.items():
            full, idx, ech = self._image(n, wt, L)
            rem = ech.reduce({idx[w]: k for w, k in items})
            for i, k in rem.items():
                out[full[i]] = k
        return Chain._wrap(out)


COMPLEX_NAMES = {
    "leibniz": LeibnizComplex,
    "lie": CEComplex,
    "ker-pi1": KerPi1Complex,
    "hochschild": HochschildComplex,
    "cyclic": CyclicComplex,
    "ker-pi2": KerPi2Complex,
    "mixed": MixedOmega,
    "mixed-mod-d": MixedOmegaModImD,
    "bprime": BPrimeComplex,
}

_ID_ALIASES = {
    "CL": "leibniz", "Lambda": "lie", "KerPi1Shift2": "ker-pi1", "CHH": "hochschild",
    "CLambda": "cyclic", "KerPi2": "ker-pi2", "MixedOmega": "mixed",
    "MixedOmegaModImD": "mixed-mod-d", "BPrimeColumn": "bprime",
}


@lru_cache(maxsize=None)
def make_complex(name: str, alg) -> Complex:
    name = _ID_ALIASES.get(name, name)
    if name not in COMPLEX_NAMES:
        raise ValueError(f"unknown complex {name!r}")
    return COMPLEX_NAMES[name](alg)


# --- slices and homology --------------------------------------------------------------

@dataclass
class GradedSlice:
    complex: Complex
    weight: Optional[int]
    length: Optional[int]
    lo: int
    hi: int
    bases: Dict[int, List] = field(default_factory=dict)       # degrees lo-1 .. hi
    index: Dict[int, Dict] = field(default_factory=dict)
    diffs: Dict[int, SparseMatrix] = field(default_factory=dict)  # d_n: C_n -> C_{n-1}, n = lo .. hi

    @property
    def degrees(self):
        return range(self.lo, self.hi + 1)

    def dims(self):
        return {n: len(self.bases[n]) for n in self.degrees}

    def to_vector(self, n: int, c: Chain) -> List[Fraction]:
        """Coordinates of an ambient chain of degree n in this slice."""
        red = self.complex.reduce(c)
        idx = self.index[n]
        v = [_ZERO] * len(self.bases[n])
        for w, k in red.items():
            if w not in idx:
                raise SliceError(f"{self.complex}: word {w!r} is outside the degree-{n} slice")
            v[idx[w]] = k
        return v

    def to_chain(self, n: int, v: Sequence) -> Chain:
        acc = Chain()
        for i, k in enumerate(v):
            if k:
                acc = acc + self.complex.lift(self.bases[n][i]) * k
        return acc

    def label_chain(self, n: int, v: Sequence) -> Chain:
        return Chain._wrap({self.bases[n][i]: Fraction(k) for i, k in enumerate(v) if k})


def _matrix(cx: Complex, src: List, tgt_index: Dict, nrows: int, check_lift=False) -> SparseMatrix:
    ent = {}
    for j, w in enumerate(src):
        img = cx.d(cx.lift(w))
        red = cx.reduce(img)
        if check_lift:
            back = Chain()
            for v, k in red.items():
                back = back + cx.lift(v) * k
            if cx.reduce(back - img):
                raise SliceError(f"{cx}: image of {w!r} leaves the subcomplex")
        for v, k in red.items():
            i = tgt_index.get(v)
            if i is None:
                raise SliceError(f"{cx}: d({w!r}) has term {v!r} outside the target slice; "
                                 "the grading is not preserved")
            ent[i, j] = k
    return SparseMatrix(nrows, len(src), ent)


_slice_cache: Dict = {}


def build_slice(cx: Complex, weight: Optional[int], degrees, length: Optional[int] = None,
                check=True) -> GradedSlice:
    """Bases for degrees lo-1..hi and differentials d_lo..d_hi, d o d = 0 verified."""
    lo, hi = degrees[0], degrees[-1]
    key = (cx, weight, lo, hi, length)
    if key in _slice_cache:
        return _slice_cache[key]
    s = GradedSlice(cx, weight, length, lo, hi)
    for n in range(lo - 1, hi + 1):
        b = cx.words(n, weight, length)
        s.bases[n] = b
        s.index[n] = {w: i for i, w in enumerate(b)}
    subcomplex = isinstance(cx, (KerPi1Complex, KerPi2Complex))
    for n in range(lo, hi + 1):
        s.diffs[n] = _matrix(cx, s.bases[n], s.index[n - 1], len(s.bases[n - 1]),
                             check_lift=subcomplex and check)
    if check:
        for n in range(lo + 1, hi + 1):
            if not (s.diffs[n - 1] @ s.diffs[n]).is_zero():
                raise exactq.NotAComplexError(f"{cx}: d_{n-1} o d_{n} != 0 at weight {weight}, length {length}")
    _slice_cache[key] = s
    return s


@dataclass
class DegreeHomology:
    degree: int
    dim_chains: int
    dim_cycles: int
    dim_boundaries: int
    representatives: List[Chain] = field(default_factory=list)

    @property
    def dim(self):
        return self.dim_cycles - self.dim_boundaries


@dataclass
class HomologyReport:
    complex: str
    weight: Optional[int]
    length: Optional[int]
    degrees: Dict[int, DegreeHomology]

    def dims(self):
        return {n: h.dim for n, h in self.degrees.items()}


def _boundary_echelon(s: GradedSlice, n: int) -> Echelon:
    d_in = s.diffs.get(n + 1)
    e = Echelon(len(s.bases[n]))
    if d_in is not None:
        for col in d_in.col_dicts():
            if col:
                e.add(col)
    return e


def homology(s: GradedSlice, reps=True) -> HomologyReport:
    """Homology in degrees lo..hi-1 (degree hi lacks its incoming differential)."""
    out = {}
    for n in range(s.lo, s.hi):
        d_out, d_in = s.diffs[n], s.diffs[n + 1]
        dim_c = len(s.bases[n])
        rk_out = exactq.rank(d_out)
        rk_in = exactq.rank(d_in)
        h = DegreeHomology(n, dim_c, dim_c - rk_out, rk_in)
        if h.dim < 0:
            raise SliceError(f"{s.complex}: negative homology in degree {n}")
        if reps and h.dim:
            ech = _boundary_echelon(s, n)
            for v in exactq.kernel_basis(d_out):
                if ech.add({i: x for i, x in enumerate(v) if x}) is not None:
                    h.representatives.append(s.to_chain(n, v))
        out[n] = h
    return HomologyReport(repr(s.complex), s.weight, s.length, out)


def in_boundaries(s: GradedSlice, n: int, c: Chain) -> Optional[Chain]:
    """A witness w (labels of degree n+1) with d w = c, or None."""
    v = s.to_vector(n, c)
    x = exactq.solve(s.diffs[n + 1], v)
    if x is None:
        return None
    return s.to_chain(n + 1, x)


def is_cycle(cx: Complex, c: Chain) -> bool:
    return not cx.reduce(cx.d(c))


def boundary_witness_check(cx: Complex, x: Chain, w: Chain) -> bool:
    """d(w) == x after normalisation in the complex."""
    return not cx.reduce(cx.d(w) - x)
