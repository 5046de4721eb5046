"""Basis words and formal rational linear combinations of them.

Word kinds, all plain tuples so they hash and sort cheaply:

* ``tensor``  -- ``(a0, a1, ...)``, order significant.  Letters are ints
  (generators ``e_i`` or finite-basis indices) or PBW monomials.
* ``wedge``   -- strictly increasing tuple of letters.
* ``pbw``     -- non-decreasing tuple of generator indices; ``()`` is 1.
* ``form``    -- ``(monomial, form_part)`` with ``form_part`` strictly
  increasing: ``f (x) de_j1 ^ ... ^ de_jn``.

The empty tensor / wedge word stands for the ground-field term in degree 0.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

__all__ = [
    "Chain",
    "InfiniteSliceError",
    "wedge_normalize",
    "sort_sign",
    "compositions",
    "strict_sequences",
    "monomials",
    "enumerate_slice_basis",
    "word_weight",
    "word_length",
    "render_letter",
    "render_word",
    "render_chain",
    "parse_letter",
    "parse_word",
    "parse_chain",
    "KINDS",
]

KINDS = ("tensor", "wedge", "pbw", "form", "utensor")

_ZERO = Fraction(0)


class InfiniteSliceError(ValueError):
    """A requested slice is not cut down to finitely many words."""


class Chain:
    """Finitely supported map word -> Fraction, zeros pruned.

    Treated as immutable; arithmetic returns new chains.
    """

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for w, c in items:
                if c:
                    t[w] = t.get(w, _ZERO) + Fraction(c)
            t = {w: c for w, c in t.items() if c}
        self._t = t

    @classmethod
    def _wrap(cls, d):
        ch = cls.__new__(cls)
        ch._t = d
        return ch

    @classmethod
    def word(cls, w, coeff=1) -> "Chain":
        return cls._wrap({w: Fraction(coeff)}) if coeff else cls()

    @classmethod
    def zero(cls) -> "Chain":
        return cls._wrap({})

    @classmethod
    def accumulate(cls, pairs: Iterable[Tuple[object, Fraction]]) -> "Chain":
        t: Dict = {}
        for w, c in pairs:
            if c:
                t[w] = t.get(w, _ZERO) + c
        return cls._wrap({w: c for w, c in t.items() if c})

    @property
    def terms(self) -> Dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def words(self):
        return self._t.keys()

    def coeff(self, w) -> Fraction:
        return self._t.get(w, _ZERO)

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def __iter__(self):
        return iter(self._t)

    def __eq__(self, other):
        if isinstance(other, Chain):
            return self._t == other._t
        if other == 0:
            return not self._t
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __add__(self, other: "Chain") -> "Chain":
        if not other._t:
            return self
        t = dict(self._t)
        for w, c in other._t.items():
            v = t.get(w, _ZERO) + c
            if v:
                t[w] = v
            else:
                del t[w]
        return Chain._wrap(t)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain._wrap({w: -c for w, c in self._t.items()})

    def __mul__(self, k) -> "Chain":
        k = Fraction(k)
        if not k:
            return Chain._wrap({})
        return Chain._wrap({w: c * k for w, c in self._t.items()})

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Chain":
        return self * (1 / Fraction(k))

    def map_linear(self, f: Callable[[object], "Chain"]) -> "Chain":
        """Extend a word -> Chain function linearly."""
        acc: Dict = {}
        for w, c in self._t.items():
            for v, d in f(w).items():
                acc[v] = acc.get(v, _ZERO) + c * d
        return Chain._wrap({w: c for w, c in acc.items() if c})

    def sorted_items(self, key=None):
        return sorted(self._t.items(), key=(lambda kv: key(kv[0])) if key else (lambda kv: kv[0]))

    def __repr__(self):
        inner = ", ".join(f"{w!r}: {c}" for w, c in self.sorted_items(key=_order_key))
        return f"Chain({{{inner}}})"


def _order_key(w):
    # total order across letter types for display; slices never mix kinds
    return (len(w), repr(w)) if not isinstance(w, tuple) else (len(w), w)


def sort_sign(factors: Sequence) -> Tuple[int, Tuple]:
    """Sign of the sorting permutation and the sorted tuple."""
    seq = list(factors)
    sign = 1
    # insertion sort; words are short
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def wedge_normalize(factors: Sequence) -> Optional[Tuple[int, Tuple]]:
    """``(sign, sorted word)``, or None when a factor repeats."""
    sign, w = sort_sign(factors)
    for a, b in zip(w, w[1:]):
        if a == b:
            return None
    return sign, w


# --- enumeration over the alphabet e_{-1}, e_0, e_1, ... ---------------------

def compositions(total: int, parts: int, lo: int = -1) -> Iterator[Tuple[int, ...]]:
    """All ordered tuples of ``parts`` ints >= lo summing to ``total``, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= lo:
            yield (total,)
        return
    hi = total - lo * (parts - 1)
    for first in range(lo, hi + 1):
        for rest in compositions(total - first, parts - 1, lo):
            yield (first,) + rest


def strict_sequences(total: int, parts: int, lo: int = -1) -> Iterator[Tuple[int, ...]]:
    """Strictly increasing tuples of ints >= lo summing to ``total``, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    # minimal sum of parts-1 values strictly above `first`
    first = lo
    while True:
        tail_min = (parts - 1) * (first + 1) + (parts - 1) * (parts - 2) // 2
        if first + tail_min > total:
            return
        if parts == 1:
            if first == total:
                yield (first,)
        else:
            for rest in strict_sequences(total - first, parts - 1, first + 1):
                yield (first,) + rest
        first += 1


def monomials(length: int, weight: int, lo: int = -1) -> Iterator[Tuple[int, ...]]:
    """Non-decreasing tuples (PBW / symmetric monomials) of given length and weight."""
    if length == 0:
        if weight == 0:
            yield ()
        return
    if length == 1:
        if weight >= lo:
            yield (weight,)
        return
    first = lo
    while first * length <= weight:
        for rest in monomials(length - 1, weight - first, first):
            yield (first,) + rest
        first += 1


def _utensor_words(slots: int, weight: int, length_cap: int) -> List[Tuple]:
    # tensor words whose letters are monomials; total length <= cap
    out: List[Tuple] = []

    def rec(prefix, slots_left, w_left, len_left):
        if slots_left == 0:
            if w_left == 0:
                out.append(tuple(prefix))
            return
        for l in range(len_left + 1):
            # remaining letters can contribute weight >= -(len_left - l)
            lo_w = -l
            hi_w = w_left + (len_left - l)
            for w in range(lo_w, hi_w + 1):
                for m in monomials(l, w):
                    prefix.append(m)
                    rec(prefix, slots_left - 1, w_left - w, len_left - l)
                    prefix.pop()

    rec([], slots, weight, length_cap)
    out.sort()
    return out


def enumerate_slice_basis(kind: str, weight: int, degree: int,
                          length: Optional[int] = None) -> List[Tuple]:
    """Every basis word of the given kind, weight and degree, sorted.

    ``degree`` counts tensor/wedge factors, monomial length for ``pbw``,
    form degree for ``form`` and tensor slots for ``utensor``.  ``length``
    is an exact symmetric-algebra length for ``form`` and a cap for
    ``utensor``; both of those kinds are infinite without it.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if kind == "tensor":
        return sorted(compositions(weight, degree))
    if kind == "wedge":
        return sorted(strict_sequences(weight, degree))
    if kind == "pbw":
        return sorted(monomials(degree, weight))
    if kind == "form":
        if length is None:
            raise InfiniteSliceError("form words of fixed weight need a length (L) grading")
        out = []
        # form part weight ranges over what is left for the monomial (>= -length)
        lo = degree * (degree - 3) // 2  # minimal sum of `degree` distinct indices >= -1
        for fw in range(lo, weight + length + 1):
            for form in strict_sequences(fw, degree):
                for mono in monomials(length, weight - fw):
                    out.append((mono, form))
        out.sort()
        return out
    if kind == "utensor":
        if length is None:
            raise InfiniteSliceError("tensor words over the enveloping algebra need a length cap")
        return _utensor_words(degree, weight, length)
    raise ValueError(f"unknown word kind {kind!r}")


def word_weight(kind: str, w) -> int:
    if kind in ("tensor", "wedge", "pbw"):
        return sum(w)
    if kind == "form":
        return sum(w[0]) + sum(w[1])
    if kind == "utensor":
        return sum(sum(m) for m in w)
    raise ValueError(f"unknown word kind {kind!r}")


def word_length(kind: str, w) -> int:
    if kind == "pbw":
        return len(w)
    if kind == "form":
        return len(w[0])
    if kind == "utensor":
        return sum(len(m) for m in w)
    raise ValueError(f"length is defined on pbw, form and utensor words, not {kind!r}")


# --- text grammar --------------------------------------------------------------
#
#   generator  e-1 | e0 | e12            (or a basis name when `names` is given)
#   monomial   1 | e-1^2*e2
#   tensor     (e-1,e0,e1)    utensor (1,e0,e-1^2*e2)    empty ()
#   wedge      e-1∧e0∧e1      empty 1
#   form       e-1^2*e2 ⊗ de0∧de1 | e0^2 | 1 ⊗ de3
#   chain      2*(e-1,e1) - 1/2*(e0,e0) ; zero chain is 0

TENSOR = "⊗"
WEDGE = "∧"


def render_letter(i: int, names: Optional[Sequence[str]] = None) -> str:
    return names[i] if names is not None else f"e{i}"


def _render_mono(m, names=None) -> str:
    if not m:
        return "1"
    parts = []
    k = 0
    while k < len(m):
        j = k
        while j < len(m) and m[j] == m[k]:
            j += 1
        s = render_letter(m[k], names)
        parts.append(s if j - k == 1 else f"{s}^{j - k}")
        k = j
    return "*".join(parts)


def render_word(kind: str, w, names: Optional[Sequence[str]] = None) -> str:
    if kind == "tensor":
        return "(" + ",".join(render_letter(a, names) for a in w) + ")"
    if kind == "utensor":
        return "(" + ",".join(_render_mono(m, names) for m in w) + ")"
    if kind == "wedge":
        return WEDGE.join(render_letter(a, names) for a in w) if w else "1"
    if kind == "uwedge":
        return WEDGE.join(_render_mono(m, names) for m in w) if w else "1"
    if kind == "pbw":
        return _render_mono(w, names)
    if kind == "form":
        mono, form = w
        if not form:
            return _render_mono(mono, names)
        return f"{_render_mono(mono, names)} {TENSOR} " + WEDGE.join(
            "d" + render_letter(j, names) for j in form)
    raise ValueError(f"unknown word kind {kind!r}")


def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_chain(kind: str, ch: Chain, names: Optional[Sequence[str]] = None) -> str:
    if not ch:
        return "0"
    out = []
    for k, (w, c) in enumerate(ch.sorted_items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = render_word(kind, w, names)
        term = body if a == 1 else f"{_render_coeff(a)}*{body}"
        if k == 0:
            out.append(("-" if sign == "-" else "") + term)
        else:
            out.append(f" {sign} {term}")
    return "".join(out)


_GEN = re.compile(r"e(-?\d+)$")


def parse_letter(s: str, names: Optional[Sequence[str]] = None) -> int:
    s = s.strip()
    if names is not None:
        try:
            return list(names).index(s)
        except ValueError:
            raise ValueError(f"unknown basis name {s!r}") from None
    m = _GEN.match(s)
    if not m:
        raise ValueError(f"bad generator {s!r}")
    i = int(m.group(1))
    if i < -1:
        raise ValueError(f"generator index {i} < -1")
    return i


def _parse_mono(s: str, names=None) -> Tuple[int, ...]:
    s = s.strip()
    if s == "1":
        return ()
    out: List[int] = []
    for part in s.split("*"):
        base, _, exp = part.partition("^")
        out.extend([parse_letter(base, names)] * (int(exp) if exp else 1))
    return tuple(sorted(out))


def parse_word(kind: str, s: str, names: Optional[Sequence[str]] = None):
    s = s.strip()
    if kind in ("tensor", "utensor"):
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"tensor word must be parenthesised: {s!r}")
        inner = s[1:-1].strip()
        if not inner:
            return ()
        parts = inner.split(",")
        if kind == "tensor":
            return tuple(parse_letter(p, names) for p in parts)
        return tuple(_parse_mono(p, names) for p in parts)
    if kind in ("wedge", "uwedge"):
        if s == "1":
            return ()
        parse = parse_letter if kind == "wedge" else _parse_mono
        res = wedge_normalize([parse(p, names) for p in s.split(WEDGE)])
        if res is None or res[0] != 1:
            raise ValueError(f"wedge word not in canonical form: {s!r}")
        return res[1]
    if kind == "pbw":
        return _parse_mono(s, names)
    if kind == "form":
        mono, sep, form = s.partition(TENSOR)
        if not sep:
            return (_parse_mono(mono, names), ())
        letters = []
        for p in form.split(WEDGE):
            p = p.strip()
            if not p.startswith("d"):
                raise ValueError(f"form factor must start with d: {p!r}")
            letters.append(parse_letter(p[1:], names))
        res = wedge_normalize(letters)
        if res is None or res[0] != 1:
            raise ValueError(f"form part not in canonical form: {s!r}")
        return (_parse_mono(mono, names), res[1])
    raise ValueError(f"unknown word kind {kind!r}")


def parse_chain(kind: str, s: str, names: Optional[Sequence[str]] = None) -> Chain:
    s = s.strip()
    if s == "0":
        return Chain()
    pieces = re.split(r" ([+-]) ", s)
    signs = ["+"] + pieces[1::2]
    terms = pieces[0::2]
    pairs = []
    for sign, term in zip(signs, terms):
        term = term.strip()
        neg = sign == "-"
        if term.startswith("-"):
            neg = not neg
            term = term[1:]
        m = re.match(r"^(\d+(?:/\d+)?)\*(.*)$", term)
        coeff = Fraction(1)
        if m:
            coeff = Fraction(m.group(1))
            term = m.group(2)
        pairs.append((parse_word(kind, term, names), -coeff if neg else coeff))
    return Chain.accumulate(pairs)
