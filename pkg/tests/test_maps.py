import random
from fractions import Fraction
from itertools import permutations

import pytest

from hlcy.complexes import (b_prime, build_slice, cyclic_N, cyclic_t, h_operator, hochschild_b,
                            make_complex, project_cyclic)
from hlcy.exactq import Echelon, SparseMatrix, rank, solve
from hlcy.liealg import U_WITT, WITT, WittAlgebra, get_algebra
from hlcy.maps import (ALPHA_GV, BOUNDARY_WITNESS, F_ALPHA, GAMMA, GV, THEOREM_ELEMENT, _all_boundaries,
                       alpha_chain, assemble_les, connecting_map, connes_ses, gv_pipeline, iota_map, mu1,
                       mu2, p_project, phi, pi1, pi2, pirashvili_ses, ses_slices, theta, total_bB,
                       total_bbprime, verify_ladder, wedge_in_cyclic)
from hlcy.words import Chain, sort_sign

F = Fraction
W = Chain.word


def U(*monos, c=1):
    return Chain({tuple(tuple(m) for m in monos): c})


def test_pi1_examples():
    assert pi1(GAMMA) == GV
    assert pi1(W((0, 0))) == Chain()
    assert pi1(W((1, -1))) == W((-1, 1)) * -1


def test_pi2_examples():
    assert pi2(U([0], [], [0])) == pi2(U([], [0], [0]))
    assert pi2(U([], [0, 0])) == pi2(U([0, 0], [], c=-1))
    assert pi2(U([], [0, 0])) != Chain()
    assert pi2(Chain()) == Chain()


def test_theta_examples():
    assert theta(GV) == project_cyclic(W((-1, 0, 1)) - W((-1, 1, 0)))
    third = Chain.accumulate((p, F(sort_sign(p)[0], 3)) for p in permutations((-1, 0, 1)))
    assert theta(GV) == project_cyclic(third)
    assert theta(GV) == wedge_in_cyclic((-1, 0, 1)) * 2
    assert theta(W((2,))) == W((2,))


def test_phi_examples():
    assert phi(W((-1, 0, 1))) == W((-1, 0, 1)) - W((-1, 1, 0))
    assert phi(W((3, 5))) == W((3, 5))
    x = W((0, 1, 2))
    assert pi2(phi(x)) == theta(pi1(x))


def test_alpha_chain():
    a, b = [0], [1]
    x = U(a, b) + U(b, a)
    A = U_WITT
    ab = A.multiply(W((0,)), W((1,)))
    ba = A.multiply(W((1,)), W((0,)))
    expect = (ab + ba).map_linear(lambda m: W((m,))) * F(1, 2)
    assert alpha_chain(x, A) == expect
    assert alpha_chain(Chain(), A) == Chain()
    with pytest.raises(ValueError):
        alpha_chain(U(a, b), A)


@pytest.mark.parametrize("name", ["dual-numbers", "truncated3", "sqzero2"])
def test_phi_restricts_to_kernels(name):
    A = get_algebra(name)
    k1 = make_complex("ker-pi1", A)
    for n in range(2, 5):
        for w in k1.words(n, None, None):
            y = phi(k1.lift(w))
            assert pi1(k1.lift(w)) == Chain()
            assert pi2(y) == Chain()


def test_iota_p_theorem_element():
    assert p_project(iota_map(F_ALPHA, U_WITT)) == project_cyclic(THEOREM_ELEMENT)
    assert p_project({}) == Chain()
    assert total_bB(F_ALPHA, U_WITT) == {}


def _u_words(n, wt, L):
    return U_WITT.tensor_words(n + 1, wt, L)


def test_iota_is_chain_map_on_u_slices():
    rng = random.Random(3)
    for wt in (-1, 0, 1):
        for top in range(1, 4):
            for _ in range(4):
                x = {}
                for k in range(0, top // 2 + 1):
                    words = _u_words(top - 2 * k, wt, 3)
                    if words:
                        pick = rng.sample(words, min(3, len(words)))
                        x[k] = Chain.accumulate((w, F(rng.randint(-3, 3))) for w in pick)
                x = {k: c for k, c in x.items() if c}
                lhs = total_bbprime(iota_map(x, U_WITT), U_WITT)
                rhs = iota_map(total_bB(x, U_WITT), U_WITT)
                assert lhs == rhs


def test_mu_maps():
    m = mu1(GAMMA)
    assert {w for w, _ in m.items()} == {((-1,), (0,), (1,)), ((0,), (-1,), (1,)), ((-1,), (-1,), (2,))}
    assert mu2(GV) == W(((-1,), (0,), (1,)))
    assert pi1(mu1(GAMMA)) == mu2(pi1(GAMMA))


# --- chain-level square and cyclic identities --------------------------------------------------

def square_matrices(alg, weight, length, n):
    """Matrices of pi2 phi and theta pi1 from CL_n into C^lambda_{n-1}."""
    cl = make_complex("leibniz", alg)
    cy = build_slice(make_complex("cyclic", alg), weight, range(0, n), length)
    src = cl.words(n, weight, length)
    left, right = [], []
    for w in src:
        x = W(w)
        left.append(dict(enumerate(cy.to_vector(n - 1, pi2(phi(x))))))
        right.append(dict(enumerate(cy.to_vector(n - 1, theta(pi1(x))))))
    rows = len(cy.bases[n - 1])
    clean = lambda cols: [{i: v for i, v in c.items() if v} for c in cols]
    return SparseMatrix.from_columns(rows, clean(left)), SparseMatrix.from_columns(rows, clean(right))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_theta_pi1_equals_pi2_phi_u_witt(n):
    a, b = square_matrices(U_WITT, 0, 2, n)
    assert a == b


@pytest.mark.parametrize("name", ["dual-numbers", "truncated3"])
def test_theta_pi1_equals_pi2_phi_finite(name):
    for n in range(1, 5):
        a, b = square_matrices(get_algebra(name), None, None, n)
        assert a == b


def _span(vectors, ncols):
    e = Echelon(ncols)
    for v in vectors:
        e.add(v)
    return e


@pytest.mark.parametrize("alg,wt,L", [("uwitt", 0, 2), ("uwitt", 1, 2), ("dual-numbers", None, None),
                                      ("truncated3", None, None)])
def test_ker_pi2_equals_image_one_minus_t(alg, wt, L):
    A = get_algebra(alg)
    for n in range(0, 5):
        full = A.tensor_words(n + 1, wt, L)
        idx = {w: i for i, w in enumerate(full)}
        vec = lambda c: {idx[w]: k for w, k in c.items()}
        im = [vec(W(w) - cyclic_t(W(w))) for w in full]
        k2 = make_complex("ker-pi2", A)
        ker = [vec(k2.lift(w)) for w in k2.words(n, wt, L)]
        e_im, e_ker = _span(im, len(full)), _span(ker, len(full))
        assert len(e_im) == len(e_ker)
        assert all(e_ker.contains(v) for v in im)
        assert all(e_im.contains(v) for v in ker)


@pytest.mark.parametrize("alg,wt,L", [("uwitt", 0, 2), ("dual-numbers", None, None), ("truncated3", None, None)])
def test_h_on_image_of_one_minus_t(alg, wt, L):
    """b'h = hb modulo Im N (= ker(1-t)), and h is injective on Im(1-t) modulo Im N."""
    A = get_algebra(alg)
    for n in range(1, 5):
        full = A.tensor_words(n + 1, wt, L)
        idx = {w: i for i, w in enumerate(full)}
        ys = [W(w) - cyclic_t(W(w)) for w in full]
        for y in ys:
            if not y:
                continue
            d = b_prime(h_operator(y), A) - (h_operator(hochschild_b(y, A)) if n >= 2 else Chain())
            assert d - cyclic_t(d) == Chain()
        # injectivity: (1-t) h y spans as much as y does
        vec = lambda c: {idx[w]: k for w, k in c.items()}
        e_y = _span([vec(y) for y in ys if y], len(full))
        e_h = _span([vec(h_operator(y) - cyclic_t(h_operator(y))) for y in ys if y], len(full))
        assert len(e_y) == len(e_h)


def test_b_prime_h_literal_equality_fails():
    # the ambient identity is false; the degree-1 counterexample y = 2(1 (x) 1)
    A = get_algebra("dual-numbers")
    y = W((0, 0)) - cyclic_t(W((0, 0)))
    assert y == W((0, 0)) * 2
    assert b_prime(h_operator(y), A) == W((0,))
    assert h_operator(hochschild_b(y, A)) == Chain()
    assert cyclic_N(W((0,))) == W((0,))


# --- connecting maps and long exact sequences --------------------------------------------------------

def test_connecting_map_zero():
    sl = ses_slices(connes_ses(get_algebra("dual-numbers")), None, range(0, 5))
    assert connecting_map(sl, 2, Chain()) == Chain()


@pytest.mark.parametrize("which,name", [("connes", "dual-numbers"), ("connes", "truncated3"),
                                         ("pirashvili", "sl2"), ("pirashvili", "solvable2")])
def test_connecting_map_lift_independence(which, name):
    from hlcy.complexes import homology
    A = get_algebra(name)
    ses = connes_ses(A) if which == "connes" else pirashvili_ses(A)
    sl = ses_slices(ses, None, range(0, 5))
    rng = random.Random(11)
    checked = 0
    for n in range(1, 4):
        for z in homology(sl.Q).degrees[n].representatives:
            x0 = sl.M.to_chain(n, solve(sl.projection_matrix(n), sl.Q.to_vector(n, z)))
            base = connecting_map(sl, n, z)
            kwords = sl.K.bases[n]
            for _ in range(10):
                lift = x0
                for w in rng.sample(kwords, min(3, len(kwords))):
                    lift = lift + sl.K.complex.lift(w) * rng.randint(-4, 4)
                other = connecting_map(sl, n, z, lift=lift)
                assert _all_boundaries(sl.K, n - 1, [other - base])
                checked += 1
    assert checked > 0 or which == "pirashvili"


def test_connecting_map_rejects_bad_lift():
    from hlcy.maps import ConnectingMapError
    sl = ses_slices(connes_ses(get_algebra("dual-numbers")), None, range(0, 5))
    with pytest.raises(ConnectingMapError):
        connecting_map(sl, 2, W((0, 0, 0)) * 3, lift=Chain())


def test_les_dual_numbers_exact():
    sl = ses_slices(connes_ses(get_algebra("dual-numbers")), None, range(0, 7))
    rep = assemble_les(sl, range(0, 6))
    assert rep.exact
    assert all(p.exact for p in rep.positions[1:])
    assert rep.homology_dims["HH"] == {0: 2, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1}
    assert rep.homology_dims["HC"] == {0: 2, 1: 0, 2: 2, 3: 0, 4: 2, 5: 0}


@pytest.mark.parametrize("name", ["dual-numbers", "sqzero2"])
def test_verify_ladder(name):
    rep = verify_ladder(get_algebra(name), max_degree=3)
    assert rep.ok, (rep.squares, rep.lemma)


def test_square_on_u_witt_ladder_slice():
    rep = verify_ladder(U_WITT, weight=0, max_degree=2, length=2)
    assert rep.ok


# --- Godbillon-Vey ---------------------------------------------------------------------------------

def test_gv_pipeline_all_pass():
    rep = gv_pipeline()
    assert rep.ok
    assert [c.name for c in rep.checks][:2] == ["gamma-leibniz-cycle", "H^Lie_3(W)_0 = 1"]
    assert len(rep.checks) == 9


def test_gv_regression_guard_localized_perturbation():
    rep = gv_pipeline(WittAlgebra(2, scale_from=2), cap_evidence=0)
    assert not rep.ok
    assert rep.failed.name == "gamma-leibniz-cycle"
    assert len(rep.checks) == 1


def test_gv_uniform_rescaling_is_not_caught_by_first_check():
    # a uniform rescaling is an isomorphism: gamma stays a cycle, a later check trips
    rep = gv_pipeline(WittAlgebra(2), cap_evidence=0)
    assert rep.checks[0].passed
    assert not rep.ok


def test_gv_constants():
    assert total_bB(F_ALPHA, U_WITT) == {}
    assert project_cyclic(hochschild_b(BOUNDARY_WITNESS, U_WITT)) == \
        project_cyclic(U([], [0], [0]) - U([], [], [0, 0]))
    from hlcy.maps import total_mixed_D
    assert total_mixed_D(ALPHA_GV) == {}
