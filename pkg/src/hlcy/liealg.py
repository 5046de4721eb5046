"""Lie and associative algebra presentations.

Letters of a Lie presentation are ints: the index ``i`` of ``e_i`` for the
Witt rule, or a basis position for a finite table.  Letters of an
associative presentation are whatever its basis uses: basis positions for
finite tables, PBW monomials (sorted int tuples) for enveloping algebras.
Every associative presentation is also a Lie algebra under the commutator.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from hlcy.words import Chain, InfiniteSliceError, enumerate_slice_basis, monomials

__all__ = [
    "LiePresentation",
    "WittAlgebra",
    "FiniteLie",
    "AssocPresentation",
    "PBWAlgebra",
    "FiniteAssoc",
    "PresentationError",
    "bracket",
    "pbw_multiply",
    "poisson",
    "weight",
    "length",
    "WITT",
    "U_WITT",
    "FIXTURES",
    "get_algebra",
    "load_table",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PresentationError(ValueError):
    pass


class LiePresentation:
    """Base class.  Subclasses provide ``bracket_letters``."""

    name = "lie"
    graded = False        # letters carry an integer weight
    names: Optional[Tuple[str, ...]] = None
    letter_kind = "tensor"  # how tensor words over this algebra render

    def bracket_letters(self, a, b) -> Dict:
        raise NotImplementedError

    def letter_weight(self, a) -> int:
        raise PresentationError(f"{self.name} carries no weight grading")

    def letter_length(self, a) -> int:
        return 1

    def tensor_words(self, n: int, weight=None, length=None) -> List[Tuple]:
        raise NotImplementedError

    def wedge_words(self, n: int, weight=None, length=None) -> List[Tuple]:
        raise NotImplementedError


class WittAlgebra(LiePresentation):
    """Polynomial vector fields e_i = x^{i+1} d/dx, [e_i, e_j] = (j - i) e_{i+j}."""

    graded = True

    def __init__(self, scale=1, name="witt", scale_from=None):
        # scale != 1 is a deliberately broken bracket for regression tests.
        # A uniform rescaling is an isomorphism and changes no cycle; with
        # scale_from=k only brackets touching some e_i, i >= k, are scaled.
        self.scale = Fraction(scale)
        self.scale_from = scale_from
        self.name = name

    def bracket_letters(self, i, j):
        c = j - i
        if self.scale_from is None or max(i, j) >= self.scale_from:
            c *= self.scale
        return {i + j: c} if c else {}

    def letter_weight(self, i):
        return i

    def tensor_words(self, n, weight=None, length=None):
        if weight is None:
            raise InfiniteSliceError(f"{self.name}: tensor degree {n} needs a weight")
        return enumerate_slice_basis("tensor", weight, n)

    def wedge_words(self, n, weight=None, length=None):
        if weight is None:
            raise InfiniteSliceError(f"{self.name}: wedge degree {n} needs a weight")
        return enumerate_slice_basis("wedge", weight, n)

    def monomials(self, length, weight):
        return list(monomials(length, weight))

    def __reduce__(self):
        return (WittAlgebra, (self.scale, self.name, self.scale_from))


def _as_fraction(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


class FiniteLie(LiePresentation):
    """Finite-dimensional Lie algebra from structure constants.

    ``table`` maps ``(i, j)`` to ``{k: c}``; missing pairs bracket to zero
    and pairs ``(j, i)`` are filled in by antisymmetry when absent.
    """

    def __init__(self, name: str, basis: Sequence[str], table: Dict[Tuple[int, int], Dict[int, object]]):
        self.name = name
        self.names = tuple(basis)
        d = len(self.names)
        full: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), val in table.items():
            if not (0 <= i < d and 0 <= j < d):
                raise PresentationError(f"{name}: bracket pair ({i}, {j}) out of range")
            vec = {k: _as_fraction(c) for k, c in dict(val).items()}
            if any(not (0 <= k < d) for k in vec):
                raise PresentationError(f"{name}: bracket [{basis[i]}, {basis[j]}] names an unknown basis element")
            full[i, j] = {k: c for k, c in vec.items() if c}
        for (i, j), vec in list(full.items()):
            if (j, i) not in full:
                full[j, i] = {k: -c for k, c in vec.items()}
        self._table = full
        self.dim = d
        self._validate()

    def _validate(self):
        nm = self.names
        for i in range(self.dim):
            for j in range(self.dim):
                a = self.bracket_letters(i, j)
                b = self.bracket_letters(j, i)
                if any(a.get(k, 0) + b.get(k, 0) for k in set(a) | set(b)):
                    raise PresentationError(f"{self.name}: antisymmetry fails on ({nm[i]}, {nm[j]})")
        for i, j, k in product(range(self.dim), repeat=3):
            x, y, z = Chain.word(i), Chain.word(j), Chain.word(k)
            s = bracket(bracket(x, y, self), z, self) + bracket(bracket(y, z, self), x, self) \
                + bracket(bracket(z, x, self), y, self)
            if s:
                raise PresentationError(f"{self.name}: Jacobi fails on ({nm[i]}, {nm[j]}, {nm[k]})")

    def bracket_letters(self, i, j):
        return self._table.get((i, j), {})

    def tensor_words(self, n, weight=None, length=None):
        return list(product(range(self.dim), repeat=n))

    def wedge_words(self, n, weight=None, length=None):
        from itertools import combinations
        return list(combinations(range(self.dim), n))


class AssocPresentation(LiePresentation):
    """Unital associative algebra; also a Lie algebra via ab - ba."""

    unit = None

    def multiply_letters(self, a, b) -> Dict:
        raise NotImplementedError

    def bracket_letters(self, a, b):
        out = dict(self.multiply_letters(a, b))
        for k, c in self.multiply_letters(b, a).items():
            v = out.get(k, _ZERO) - c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def multiply(self, u: Chain, v: Chain) -> Chain:
        acc: Dict = {}
        for a, c in u.items():
            for b, d in v.items():
                for k, e in self.multiply_letters(a, b).items():
                    acc[k] = acc.get(k, _ZERO) + c * d * e
        return Chain._wrap({k: x for k, x in acc.items() if x})


class PBWAlgebra(AssocPresentation):
    """Universal enveloping algebra in the ordered-monomial basis.

    Monomials are non-decreasing tuples of generator letters of ``lie``.
    Normal ordering rewrites e_j e_i (j > i) as e_i e_j - [e_i, e_j].
    """

    letter_kind = "utensor"

    def __init__(self, lie: LiePresentation, name: Optional[str] = None):
        self.lie = lie
        self.name = name or f"U({lie.name})"
        self.names = lie.names
        self.graded = lie.graded
        self.unit = ()
        self._times_gen = lru_cache(maxsize=None)(self._times_gen_raw)
        self._mul = lru_cache(maxsize=None)(self._mul_raw)

    def __reduce__(self):
        return (PBWAlgebra, (self.lie, self.name))

    def _times_gen_raw(self, m: Tuple, g) -> Dict[Tuple, Fraction]:
        # normal form of m * e_g, m already normal-ordered
        if not m or m[-1] <= g:
            return {m + (g,): _ONE}
        head, last = m[:-1], m[-1]
        acc: Dict[Tuple, Fraction] = {}
        # m' e_l e_g = (m' e_g) e_l - m' [e_g, e_l]
        for w, c in self._times_gen(head, g).items():
            for v, d in self._times_gen(w, last).items():
                acc[v] = acc.get(v, _ZERO) + c * d
        for k, c in self.lie.bracket_letters(g, last).items():
            for v, d in self._times_gen(head, k).items():
                acc[v] = acc.get(v, _ZERO) - c * d
        return {w: c for w, c in acc.items() if c}

    def _mul_raw(self, a: Tuple, b: Tuple) -> Dict[Tuple, Fraction]:
        cur = {a: _ONE}
        for g in b:
            nxt: Dict[Tuple, Fraction] = {}
            for w, c in cur.items():
                for v, d in self._times_gen(w, g).items():
                    nxt[v] = nxt.get(v, _ZERO) + c * d
            cur = {w: c for w, c in nxt.items() if c}
        return cur

    def multiply_letters(self, a, b):
        return self._mul(a, b)

    def letter_weight(self, m):
        return sum(self.lie.letter_weight(g) for g in m)

    def letter_length(self, m):
        return len(m)

    def generator(self, g) -> Tuple:
        return (g,)

    def _check_slice(self, weight, length):
        if length is None:
            raise InfiniteSliceError(f"{self.name}: slices need a length cap")
        if self.lie.graded and weight is None:
            raise InfiniteSliceError(f"{self.name}: slices need a weight")

    def tensor_words(self, n, weight=None, length=None):
        self._check_slice(weight, length)
        if self.lie.graded:
            return enumerate_slice_basis("utensor", weight, n, length)
        letters = [m for l in range(length + 1)
                   for m in sorted(_finite_monomials(self.lie.dim, l))]
        out = []

        def rec(prefix, left, budget):
            if left == 0:
                out.append(tuple(prefix))
                return
            for m in letters:
                if len(m) <= budget:
                    prefix.append(m)
                    rec(prefix, left - 1, budget - len(m))
                    prefix.pop()

        rec([], n, length)
        out.sort()
        return out

    def wedge_words(self, n, weight=None, length=None):
        from hlcy.words import wedge_normalize
        return sorted({w for w in self.tensor_words(n, weight, length)
                       if wedge_normalize(w) is not None and list(w) == sorted(w)})


def _finite_monomials(d, l):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(range(d), l)


class FiniteAssoc(AssocPresentation):
    """Finite-dimensional unital algebra from a multiplication table."""

    def __init__(self, name: str, basis: Sequence[str], table: Dict[Tuple[int, int], Dict[int, object]],
                 unit: int):
        self.name = name
        self.names = tuple(basis)
        self.dim = d = len(self.names)
        if not 0 <= unit < d:
            raise PresentationError(f"{name}: unit index {unit} out of range")
        self.unit = unit
        full = {}
        for (i, j), val in table.items():
            if not (0 <= i < d and 0 <= j < d):
                raise PresentationError(f"{name}: product pair ({i}, {j}) out of range")
            vec = {k: _as_fraction(c) for k, c in dict(val).items()}
            if any(not (0 <= k < d) for k in vec):
                raise PresentationError(f"{name}: product {basis[i]}*{basis[j]} names an unknown basis element")
            full[i, j] = {k: c for k, c in vec.items() if c}
        self._table = full
        self._validate()

    def _validate(self):
        nm = self.names
        u = self.unit
        for i in range(self.dim):
            if self.multiply_letters(u, i) != {i: 1} or self.multiply_letters(i, u) != {i: 1}:
                raise PresentationError(f"{self.name}: unit law fails on ({nm[u]}, {nm[i]})")
        for i, j, k in product(range(self.dim), repeat=3):
            x, y, z = Chain.word(i), Chain.word(j), Chain.word(k)
            if self.multiply(self.multiply(x, y), z) != self.multiply(x, self.multiply(y, z)):
                raise PresentationError(f"{self.name}: associativity fails on ({nm[i]}, {nm[j]}, {nm[k]})")

    def multiply_letters(self, a, b):
        return self._table.get((a, b), {})

    def tensor_words(self, n, weight=None, length=None):
        return list(product(range(self.dim), repeat=n))

    def wedge_words(self, n, weight=None, length=None):
        from itertools import combinations
        return list(combinations(range(self.dim), n))


# --- operations on chains ------------------------------------------------------

def bracket(a: Chain, b: Chain, lie: LiePresentation = None) -> Chain:
    """Bilinear bracket of two chains of letters (default: the Witt rule)."""
    lie = lie or WITT
    acc: Dict = {}
    for x, c in a.items():
        for y, d in b.items():
            for k, e in lie.bracket_letters(x, y).items():
                acc[k] = acc.get(k, _ZERO) + c * d * e
    return Chain._wrap({k: v for k, v in acc.items() if v})


def pbw_multiply(u: Chain, v: Chain, alg: PBWAlgebra = None) -> Chain:
    return (alg or U_WITT).multiply(u, v)


@lru_cache(maxsize=None)
def _poisson_mono(lie, mono: Tuple, g) -> Tuple[Tuple[Tuple, Fraction], ...]:
    acc: Dict[Tuple, Fraction] = {}
    for s, a in enumerate(mono):
        rest = mono[:s] + mono[s + 1:]
        for k, c in lie.bracket_letters(a, g).items():
            m = tuple(sorted(rest + (k,)))
            acc[m] = acc.get(m, _ZERO) + c
    return tuple((m, c) for m, c in acc.items() if c)


def poisson(a, g, lie: LiePresentation = None) -> Chain:
    """{a, e_g} in the symmetric algebra: the derivation extending [-, e_g].

    ``a`` is a monomial (sorted tuple) or a Chain of monomials.
    """
    lie = lie or WITT
    if isinstance(a, Chain):
        return a.map_linear(lambda m: Chain._wrap(dict(_poisson_mono(lie, m, g))))
    return Chain._wrap(dict(_poisson_mono(lie, tuple(a), g)))


def weight(w, kind: str = "pbw") -> int:
    """Total index weight of a word over e_{-1}, e_0, e_1, ..."""
    from hlcy.words import word_weight
    return word_weight(kind, w)


def length(w, kind: str = "pbw") -> int:
    from hlcy.words import word_length
    return word_length(kind, w)


# --- built-in presentations ------------------------------------------------------

WITT = WittAlgebra()
U_WITT = PBWAlgebra(WITT, name="U(witt)")


def _abelian2():
    return FiniteLie("abelian2", ["x", "y"], {})


def _sl2():
    # basis e, h, f
    return FiniteLie("sl2", ["e", "h", "f"], {
        (1, 0): {0: 2},
        (1, 2): {2: -2},
        (0, 2): {1: 1},
    })


def _solvable2():
    return FiniteLie("solvable2", ["x", "y"], {(0, 1): {1: 1}})


def _truncated(m, name):
    # Q[x]/x^m, basis 1, x, ..., x^{m-1}
    basis = ["1"] + ["x" if k == 1 else f"x{k}" for k in range(1, m)]
    table = {(i, j): {i + j: 1} for i in range(m) for j in range(m) if i + j < m}
    return FiniteAssoc(name, basis, table, unit=0)


def _sqzero2():
    # Q + V with V = <x, y>, V*V = 0
    table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    return FiniteAssoc("sqzero2", ["1", "x", "y"], table, unit=0)


FIXTURES = {
    "abelian2": _abelian2,
    "sl2": _sl2,
    "solvable2": _solvable2,
    "dual-numbers": lambda: _truncated(2, "dual-numbers"),
    "truncated3": lambda: _truncated(3, "truncated3"),
    "sqzero2": _sqzero2,
}


@lru_cache(maxsize=None)
def get_algebra(selector: str) -> LiePresentation:
    """Resolve ``witt``, ``uwitt``, a fixture name, or a JSON table path."""
    if selector == "witt":
        return WITT
    if selector in ("uwitt", "U(witt)"):
        return U_WITT
    if selector in FIXTURES:
        return FIXTURES[selector]()
    if selector.startswith("U(") and selector.endswith(")"):
        return PBWAlgebra(get_algebra(selector[2:-1]))
    p = Path(selector)
    if p.suffix == ".json" and p.exists():
        return load_table(p)
    raise PresentationError(f"unknown algebra {selector!r}")


def load_table(path) -> LiePresentation:
    """Read a finite Lie (``brackets``) or associative (``products`` + ``unit``) table."""
    data = json.loads(Path(path).read_text())
    basis = data.get("basis")
    if not isinstance(basis, list) or not basis:
        raise PresentationError(f"{path}: 'basis' must be a non-empty list")
    name = data.get("name", Path(path).stem)
    key = "products" if "products" in data else "brackets"
    table = {}
    for entry in data.get(key, []):
        try:
            i, j, vec = entry
            table[int(i), int(j)] = {int(k): _as_fraction(c) for k, c in vec}
        except (TypeError, ValueError) as exc:
            raise PresentationError(f"{path}: malformed {key} entry {entry!r}") from exc
    if key == "products":
        if "unit" not in data:
            raise PresentationError(f"{path}: associative table needs 'unit'")
        return FiniteAssoc(name, basis, table, int(data["unit"]))
    return FiniteLie(name, basis, table)
