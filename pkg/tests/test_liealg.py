import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, strategies as st

from hlcy.liealg import (FIXTURES, U_WITT, WITT, FiniteAssoc, FiniteLie, PBWAlgebra, PresentationError,
                         WittAlgebra, bracket, get_algebra, length, load_table, pbw_multiply, poisson,
                         weight)
from hlcy.words import Chain

E = lambda *i: Chain.word(i[0]) if len(i) == 1 else Chain.word(i)
P = lambda *m: Chain.word(tuple(m))   # PBW monomial


def test_bracket_examples():
    assert bracket(E(-1), E(1)) == E(0) * 2
    assert bracket(E(0), E(0)) == Chain()
    assert bracket(E(1), E(2)) == E(3)


def test_pbw_examples():
    assert pbw_multiply(P(-1), P(1)) == P(-1, 1)
    assert pbw_multiply(P(1), P(-1)) == P(-1, 1) - P(0) * 2
    assert pbw_multiply(P(0), P(0)) == P(0, 0)
    assert pbw_multiply(P(), P(2, 3)) == P(2, 3)


def test_poisson_examples():
    f = (-1, 1, 1)
    # the derivation extending [-, e0] multiplies a monomial by -wt
    assert weight(f) == 1
    assert poisson(f, 0) == Chain.word(f) * (-weight(f))
    assert poisson((0, 0), -1) == Chain.word((-1, 0)) * -2
    assert poisson((), 3) == Chain()


def test_weight_length_examples():
    assert weight((-1, -1, 2)) == 0
    assert weight(((-1,), (0, 1)), "form") == 0
    assert weight(()) == 0
    assert length(((-1,), (0, 1)), "form") == 1
    assert length((0, 0)) == 2
    assert length(((), (3,)), "form") == 0


def test_witt_jacobi_exhaustive():
    for i, j, k in product(range(-1, 9), repeat=3):
        x, y, z = E(i), E(j), E(k)
        s = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
        assert s == Chain(), (i, j, k)


@given(st.integers(-1, 8), st.integers(-1, 8))
def test_bracket_weight_additive_and_antisymmetric(i, j):
    b = bracket(E(i), E(j))
    assert b == -bracket(E(j), E(i))
    assert all(k == i + j for k, _ in b.items())


@given(st.integers(-1, 8), st.integers(-1, 8))
def test_pbw_compatibility(i, j):
    comm = pbw_multiply(P(i), P(j)) - pbw_multiply(P(j), P(i))
    assert comm == bracket(E(i), E(j)).map_linear(lambda k: P(k))


MONOS_3 = [m for L in range(0, 4) for m in combinations_with_replacement(range(-1, 5), L)]
MONOS_2 = [m for m in MONOS_3 if len(m) <= 2]


def _int_mul():
    @lru_cache(maxsize=None)
    def mul(a, b):
        r = U_WITT._mul(a, b)
        assert all(v.denominator == 1 for v in r.values())
        return tuple((m, int(v)) for m, v in r.items())

    def left(x, c):
        acc = {}
        for m, k in x:
            for v, d in mul(m, c):
                acc[v] = acc.get(v, 0) + k * d
        return {v: k for v, k in acc.items() if k}

    def right(a, y):
        acc = {}
        for m, k in y:
            for v, d in mul(a, m):
                acc[v] = acc.get(v, 0) + k * d
        return {v: k for v, k in acc.items() if k}

    return mul, left, right


def _assoc_sweep(monos):
    mul, left, right = _int_mul()
    bad = []
    for a in monos:
        for b in monos:
            ab = mul(a, b)
            for c in monos:
                if left(ab, c) != right(a, mul(b, c)):
                    bad.append((a, b, c))
    return bad


def test_pbw_associative_length_le_2_exhaustive():
    assert _assoc_sweep(MONOS_2) == []


@pytest.mark.slow
def test_pbw_associative_length_le_3_exhaustive():
    # 84^3 triples; a couple of minutes
    assert _assoc_sweep(MONOS_3) == []


def test_pbw_weight_additive_and_normal_form():
    for a in MONOS_2:
        for b in MONOS_2:
            for m, _ in pbw_multiply(P(*a), P(*b)).items():
                assert weight(m) == weight(a) + weight(b)
                assert list(m) == sorted(m)
                assert len(m) <= len(a) + len(b)


@given(st.lists(st.integers(-1, 5), max_size=3), st.lists(st.integers(-1, 5), max_size=3),
       st.integers(-1, 5))
def test_poisson_is_derivation(a, b, g):
    a, b = tuple(sorted(a)), tuple(sorted(b))
    smul = lambda x, y: Chain.accumulate((tuple(sorted(m + n)), c * d)
                                         for m, c in x.items() for n, d in y.items())
    lhs = poisson(tuple(sorted(a + b)), g)
    rhs = smul(poisson(a, g), Chain.word(b)) + smul(Chain.word(a), poisson(b, g))
    assert lhs == rhs


def test_u_sl2_associative_and_compatible():
    U = PBWAlgebra(get_algebra("sl2"))
    monos = [m for L in range(0, 3) for m in combinations_with_replacement(range(3), L)]
    for a, b, c in product(monos, repeat=3):
        x, y, z = P(*a), P(*b), P(*c)
        assert U.multiply(U.multiply(x, y), z) == U.multiply(x, U.multiply(y, z))
    for i, j in product(range(3), repeat=2):
        comm = U.multiply(P(i), P(j)) - U.multiply(P(j), P(i))
        assert comm == bracket(E(i), E(j), U.lie).map_linear(lambda k: P(k))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_validate(name):
    alg = get_algebra(name)
    assert alg.names and alg.dim == len(alg.names)


def test_finite_lie_reports_failing_pair_and_triple():
    with pytest.raises(PresentationError, match=r"antisymmetry fails on \(x, x\)"):
        FiniteLie("bad", ["x", "y"], {(0, 0): {1: 1}})
    # [x,y]=z, [y,z]=x, [z,x]=z breaks Jacobi
    with pytest.raises(PresentationError, match="Jacobi fails on"):
        FiniteLie("bad", ["x", "y", "z"], {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {2: 1}})


def test_finite_assoc_reports_failures():
    with pytest.raises(PresentationError, match="unit law"):
        FiniteAssoc("bad", ["1", "x"], {(0, 0): {0: 1}}, unit=0)
    with pytest.raises(PresentationError, match="associativity fails"):
        FiniteAssoc("bad", ["1", "x", "y"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1},
                                             (0, 2): {2: 1}, (2, 0): {2: 1},
                                             (1, 1): {2: 1}, (1, 2): {1: 1}, (2, 1): {0: 1}}, unit=0)


def test_load_table(tmp_path):
    p = tmp_path / "heis.json"
    p.write_text(json.dumps({"basis": ["x", "y", "z"], "brackets": [[0, 1, [[2, "1"]]]]}))
    lie = load_table(p)
    assert bracket(E(1), E(0), lie) == E(2) * -1
    assert get_algebra(str(p)).names == ("x", "y", "z")
    q = tmp_path / "dual.json"
    q.write_text(json.dumps({"basis": ["1", "x"], "unit": 0,
                             "products": [[0, 0, [[0, "1"]]], [0, 1, [[1, "1"]]], [1, 0, [[1, "1/1"]]]]}))
    A = load_table(q)
    assert A.multiply(E(1), E(1)) == Chain()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"basis": ["x", "y"], "brackets": [[0, 1, [[0, "1"]]], [1, 0, [[0, "1"]]]]}))
    with pytest.raises(PresentationError, match=r"\(x, y\)"):
        load_table(bad)
    with pytest.raises(PresentationError):
        get_algebra("no-such-algebra")


def test_perturbed_witt_is_not_lie():
    w = WittAlgebra(2, scale_from=2)
    x, y, z = E(-1), E(1), E(2)
    s = bracket(bracket(x, y, w), z, w) + bracket(bracket(y, z, w), x, w) + bracket(bracket(z, x, w), y, w)
    assert s != Chain()
    assert WITT.bracket_letters(1, 2) == {3: 1}
