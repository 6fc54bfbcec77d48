from __future__ import annotations

import numpy as np
import pytest

from codegree.errors import HallNotFound, LimitExceeded, MixedRealization, NotNormalized
from codegree.groups import (
    AffineBlock,
    FiniteGroup,
    PermBlock,
    QuotientGroup,
    Realization,
    closure,
    derived_series,
    enumerate_elements,
    fitting_subgroup,
    frobenius_structure,
    generated_subgroup,
    hall_pq,
    is_fixed_point_free,
    is_normal,
    is_solvable,
    p_core,
    sylow_subgroup,
    whole,
)

from conftest import group
from helpers import brute_classes, brute_subgroup, element_order, mul_table

SMALL = ["s3", "s4", "a4", "a5", "d8", "q8", "z6", "f21", "f42"]


def perm_group(degree, *gens):
    return FiniteGroup(Realization([PermBlock(degree)]), [np.array(g) for g in gens])


def affine1(r, *maps):
    blk = AffineBlock(r, 1)
    return FiniteGroup(Realization([blk]), [blk.join(np.array([v]), np.array([[m]])) for v, m in maps])


def test_enumeration_examples():
    assert perm_group(3, [1, 0, 2], [1, 2, 0]).order == 6
    assert perm_group(4, [1, 2, 3, 0], [1, 0, 2, 3]).order == 24
    assert affine1(7, (1, 1), (0, 2)).order == 21


def test_enumeration_identity_first_and_deterministic():
    real = Realization([PermBlock(4)])
    gens = [np.array([1, 2, 3, 0]), np.array([1, 0, 2, 3])]
    a, ia = enumerate_elements(real, gens)
    b, ib = enumerate_elements(real, gens[::-1])
    assert np.array_equal(a[0], np.arange(4))
    assert np.array_equal(a, b)
    assert sorted(ia) == sorted(ib)


def test_enumeration_limit_and_mixed():
    with pytest.raises(LimitExceeded):
        FiniteGroup(Realization([PermBlock(5)]), [np.array([1, 2, 3, 4, 0]), np.array([1, 0, 2, 3, 4])], limit=50)
    with pytest.raises(MixedRealization):
        FiniteGroup(Realization([PermBlock(3)]), [np.array([1, 0, 2, 3])])


def test_multi_block_realization():
    blocks = [PermBlock(3), AffineBlock(5, 1)]
    row = np.concatenate([[1, 2, 0], AffineBlock(5, 1).join(np.array([1]), np.array([[1]]))])
    G = FiniteGroup(Realization(blocks), [row])
    assert G.order == 15


@pytest.mark.parametrize("alias", SMALL)
def test_group_axioms(alias):
    G = group(alias)
    T = mul_table(G)
    assert np.array_equal(T[0], np.arange(G.order))
    assert np.array_equal(T[np.arange(G.order), G.inverse], np.zeros(G.order, dtype=np.int64))
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, G.order, size=(3, 200))
    assert np.array_equal(T[T[a, b], c], T[a, T[b, c]])


@pytest.mark.parametrize("alias", SMALL)
def test_classes_match_brute_force(alias):
    G = group(alias)
    conj = G.conjugacy
    ours = {frozenset(c.members.tolist()) for c in conj.classes}
    assert ours == set(brute_classes(G))
    T = mul_table(G)
    for c in conj.classes:
        assert c.element_order == element_order(T, c.representative)
        assert conj.class_of[c.representative] == conj.classes.index(c)
    assert conj.exponent == np.lcm.reduce([c.element_order for c in conj.classes])
    # power map: class of g^j
    for ci, c in enumerate(conj.classes):
        x, y = c.representative, 0
        for j in range(c.element_order):
            assert conj.power_map[ci, j] == conj.class_of[y]
            y = int(T[y, x])


@pytest.mark.parametrize("alias,sizes,e", [
    ("s3", [1, 2, 3], 6), ("z6", [1] * 6, 6), ("s4", [1, 3, 6, 6, 8], 12),
])
def test_class_examples(alias, sizes, e):
    conj = group(alias).conjugacy
    assert sorted(conj.sizes.tolist()) == sizes
    assert conj.exponent == e


def test_generated_subgroup_examples():
    S4 = group("s4")
    idx = S4.index_of(np.array([[1, 0, 3, 2], [2, 3, 0, 1]]))
    V = generated_subgroup(S4, idx.tolist())
    assert V.order == 4 and V.normal
    T = generated_subgroup(S4, S4.index_of(np.array([[1, 0, 2, 3]])).tolist())
    assert T.order == 2 and not T.normal
    E = generated_subgroup(S4, [0])
    assert E.order == 1 and E.normal


@pytest.mark.parametrize("alias", SMALL)
def test_closure_matches_brute_force(alias):
    G = group(alias)
    rng = np.random.default_rng(1)
    for _ in range(5):
        seeds = rng.integers(0, G.order, size=2).tolist()
        assert set(closure(G, seeds).members.tolist()) == brute_subgroup(G, seeds)


@pytest.mark.parametrize("alias,orders,solvable", [
    ("s4", [24, 12, 4, 1], True), ("a5", [60], False), ("z6", [6, 1], True),
])
def test_derived_series(alias, orders, solvable):
    chain, flag = derived_series(group(alias))
    assert [H.order for H in chain] == orders
    assert flag is solvable
    assert is_solvable(group(alias)) is solvable


@pytest.mark.parametrize("alias,p,order", [("s4", 2, 8), ("z6", 3, 3), ("a5", 2, 4), ("a5", 5, 5), ("f42", 7, 7)])
def test_sylow(alias, p, order):
    P = sylow_subgroup(group(alias), p)
    assert P.order == order and P.primes == (p,)


def _core_oracle(G, p):
    P = sylow_subgroup(G, p)
    mask = np.ones(G.order, dtype=bool)
    for g in range(G.order):
        conj = np.zeros(G.order, dtype=bool)
        conj[G.conjugate(P.members, g)] = True
        mask &= conj
    return set(np.flatnonzero(mask).tolist())


@pytest.mark.parametrize("alias", SMALL)
def test_p_core_and_fitting_match_oracle(alias):
    G = group(alias)
    fit = 1
    for p in G.primes:
        core = p_core(G, p)
        assert set(core.members.tolist()) == _core_oracle(G, p)
        fit *= core.order
    assert fitting_subgroup(G).order == fit


@pytest.mark.parametrize("alias,p,order", [("s4", 2, 4), ("a5", 2, 1), ("z6", 2, 2)])
def test_p_core_examples(alias, p, order):
    assert p_core(group(alias), p).order == order


@pytest.mark.parametrize("alias,order", [("s4", 4), ("a5", 1), ("z6", 6)])
def test_fitting_examples(alias, order):
    assert fitting_subgroup(group(alias)).order == order


def test_fixed_point_free_examples():
    F21 = affine1(7, (1, 1), (0, 2))
    Z7 = closure(F21, F21.index_of(np.array([[1, 1]])).tolist())
    Z3 = closure(F21, F21.index_of(np.array([[0, 2]])).tolist())
    assert is_fixed_point_free(Z3, Z7)
    D14 = affine1(7, (1, 1), (0, 6))
    assert is_fixed_point_free(closure(D14, D14.index_of(np.array([[0, 6]])).tolist()),
                               closure(D14, D14.index_of(np.array([[1, 1]])).tolist()))
    Z6 = group("z6")
    assert not is_fixed_point_free(sylow_subgroup(Z6, 2), sylow_subgroup(Z6, 3))
    S3 = group("s3")
    with pytest.raises(NotNormalized):
        is_fixed_point_free(sylow_subgroup(S3, 3), sylow_subgroup(S3, 2))


def test_hall_examples():
    assert hall_pq(group("s4"), 2, 3).order == 24
    assert hall_pq(group("f42"), 2, 7).order == 14
    with pytest.raises(HallNotFound):
        hall_pq(group("a5"), 2, 5)


@pytest.mark.parametrize("alias,pq,kind,extra", [
    ("s3", (2, 3), "frobenius", (3, 2)), ("f21", (3, 7), "frobenius", (7, 3)),
    ("a4", (2, 3), "frobenius", (2, 3)), ("s4", (2, 3), "two_frobenius", (2, 3, 2)),
    ("z6", (2, 3), "neither", None),
])
def test_frobenius_structure_examples(alias, pq, kind, extra):
    fs = frobenius_structure(group(alias), *pq)
    assert fs.kind == kind
    if kind == "frobenius":
        assert (fs.kernel_prime, fs.complement_prime) == extra
    elif kind == "two_frobenius":
        assert fs.type == extra


def test_frobenius_structure_rejects_wrong_primes():
    with pytest.raises(ValueError):
        frobenius_structure(group("d8"), 2, 3)


@pytest.mark.parametrize("alias", SMALL)
def test_quotient_class_count(alias):
    G = group(alias)
    H = whole(G)
    T = mul_table(G)
    for N in {p: p_core(G, p) for p in G.primes}.values():
        Q = QuotientGroup(H, N)
        coset = Q.coset_of
        # oracle: conjugacy classes of G/N from G's own classes
        seen, count = set(), 0
        for x in range(Q.order):
            if x in seen:
                continue
            count += 1
            rep = Q.representatives[x]
            seen |= {int(coset[T[T[G.inverse[g], rep], g]]) for g in range(G.order)}
        assert Q.class_count() == count
        assert is_normal(N, H)
