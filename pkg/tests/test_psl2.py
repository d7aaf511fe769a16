import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from wordmaps.errors import ContractError
from wordmaps.groups import is_homomorphism
from wordmaps.psl2 import (Psl2Aut, ad_image_size, aut_permutation, commutator, compose, diagonal, field,
                           fixed_points, fixed_subgroup_mask, frobenius, identity_aut, inner, inverse,
                           lemma_bound, outer_coset_reps, prime_power, psl2, psl2_order, within_lemma_bound)

QS = [2, 3, 4, 5, 7, 8, 9, 11]

# (i, j) -> |Fix| for q = 9, frozen from an exhaustive run.
FIX_Q9 = {(0, 0): 360, (0, 1): 4, (0, 2): 4, (0, 3): 4, (0, 4): 8, (0, 5): 4, (0, 6): 4, (0, 7): 4,
          (1, 0): 24, (1, 1): 2, (1, 2): 24, (1, 3): 2, (1, 4): 24, (1, 5): 2, (1, 6): 24, (1, 7): 2}


def test_prime_power():
    assert prime_power(9) == (3, 2) and prime_power(8) == (2, 3) and prime_power(7) == (7, 1)
    assert prime_power(12) is None and prime_power(1) is None


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27])
def test_field_axioms(q):
    F = field(q)
    els = range(q)
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a in els:
        for b in els:
            assert F.mul(a, b) == F.mul(b, a)
            for c in (0, 1, q - 1):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    powers = {F.omega_pow(k) for k in range(q - 1)}
    assert powers == set(range(1, q))


@pytest.mark.parametrize("q", QS)
def test_group_orders(q):
    assert psl2(q).group.order == psl2_order(q)


def test_small_isomorphism_types():
    assert psl2(2).group.order == 6 and not psl2(2).group.is_abelian
    assert psl2(3).group.order == 12
    assert len({psl2(5).group.element_order(x) for x in range(60)}) == 4  # orders 1, 2, 3, 5


def test_psl2_prime_matches_oracle():
    assert len(oracle.field_elements_psl2(5)) == 60
    assert len(oracle.field_elements_psl2(7)) == 168


def test_determinant_contract():
    with pytest.raises(ContractError):
        psl2(5).element((2, 0, 0, 1))
    with pytest.raises(ContractError):
        psl2(6)


@pytest.mark.parametrize("q", [4, 5, 8, 9])
def test_outer_generators_are_automorphisms(q):
    G = psl2(q).group
    auts = [frobenius(q)] + ([diagonal(q)] if q % 2 else [])
    for a in auts:
        assert is_homomorphism(G, G, aut_permutation(a))


def test_diagonal_frobenius_commutator():
    for q in (9, 25, 27, 49):
        p, _ = prime_power(q)
        c = commutator(diagonal(q), frobenius(q))
        assert (c.i, c.j, c.inner) == (0, (p - 1) % (q - 1), None)
    c = commutator(diagonal(9), frobenius(9))
    assert np.array_equal(aut_permutation(c), aut_permutation(Psl2Aut(9, j=2)))


def test_compose_is_right_action():
    q = 9
    a, b = Psl2Aut(q, i=1, j=3), Psl2Aut(q, j=2, inner=17)
    pa, pb, pab = aut_permutation(a), aut_permutation(b), aut_permutation(compose(a, b))
    assert np.array_equal(pab, pb[pa])


@given(st.integers(0, 1), st.integers(0, 7), st.integers(0, 359))
def test_hypothesis_inverse(i, j, g):
    a = Psl2Aut(9, i, j, g)
    ident = np.arange(360)
    assert np.array_equal(aut_permutation(compose(a, inverse(a)))[ident], ident)


def _diag_fix_oracle(p, j, omega):
    wj = pow(omega, j, p)
    wj_inv = pow(wj, p - 2, p)
    count = 0
    for a, b, c, d in oracle.field_elements_psl2(p):
        img = (a, b * wj_inv % p, c * wj % p, d)
        neg = tuple((-x) % p for x in (a, b, c, d))
        if img in ((a, b, c, d), neg):
            count += 1
    return count


@pytest.mark.parametrize("p", [5, 7, 11])
def test_diagonal_fixed_points_match_oracle(p):
    omega = field(p).omega
    for j in range(p - 1):
        assert fixed_points(Psl2Aut(p, j=j)) == _diag_fix_oracle(p, j, omega)


def test_fixed_points_q9_frozen():
    got = {(a.i, a.j): fixed_points(a) for a in outer_coset_reps(9)}
    assert got == FIX_Q9


@pytest.mark.parametrize("q", [3, 5, 9])
def test_ad_identity(q):
    n = psl2(q).group.order
    for a in outer_coset_reps(q):
        assert ad_image_size(a) * fixed_points(a) == n


def test_fixed_subgroup_is_subgroup():
    G = psl2(9).group
    for a in outer_coset_reps(9):
        mask = fixed_subgroup_mask(a)
        els = np.flatnonzero(mask)
        assert mask[G.table[np.ix_(els, els)]].all()


def test_lemma_bound():
    assert lemma_bound(9) == 12.0
    assert within_lemma_bound(9, 12) and not within_lemma_bound(9, 13)
    assert not within_lemma_bound(9, 24)


def test_inner_automorphism_fixes_centralizer():
    G = psl2(5).group
    g = 7
    fix = fixed_points(inner(5, g))
    cent = sum(1 for x in range(60) if G.mul(x, g) == G.mul(g, x))
    assert fix == cent
    assert fixed_points(identity_aut(5)) == 60
