from __future__ import annotations

import json

import numpy as np
import pytest

from codegree.constructors import (
    ALIASES,
    AutomorphismAction,
    Cyclic,
    DirectProduct,
    ElementaryAbelian,
    Frobenius,
    MatrixAction,
    Permutations,
    Semidirect,
    Symmetric,
    TwoFrobenius,
    build,
    canonical_json,
    digest,
    from_dict,
    loads,
    make_frobenius,
    qian_family,
    resolve,
    to_dict,
)
from codegree.errors import (
    ActionNotHomomorphism,
    NotFixedPointFree,
    PreconditionViolated,
    SpecError,
    StructureMismatch,
)
from codegree.groups import classify_frobenius, component_subgroup, is_normal, sylow_subgroup, whole
from codegree.groups.subgroups import metadata_sylow

from helpers import mul_table


def scalar(p, c):
    return MatrixAction(p, 1, (((c,),),))


INVERT = AutomorphismAction(((((0, -1),),),))
V4_Z3 = MatrixAction(2, 2, (((0, 1), (1, 1)),))
V4_SWAP = MatrixAction(2, 2, (((0, 1), (1, 0)),))


def test_cyclic_is_abelian():
    G = build(Cyclic(6))
    T = mul_table(G)
    assert G.order == 6 and np.array_equal(T, T.T)


@pytest.mark.parametrize("spec,order", [
    (Semidirect(Cyclic(7), Cyclic(3), scalar(7, 2)), 21),
    (Semidirect(ElementaryAbelian(31, 2), Cyclic(5), MatrixAction(31, 2, (((2, 0), (0, 16)),))), 4805),
    (Semidirect(Cyclic(4), Cyclic(2), INVERT), 8),
    (DirectProduct((Cyclic(2), Symmetric(3))), 12),
    (Semidirect(DirectProduct((Cyclic(2), Cyclic(2))), Cyclic(3),
                AutomorphismAction(((((1, 1),), ((0, 1), (1, 1))),))), 12),
    (Frobenius(Cyclic(7), Cyclic(3), scalar(7, 2)), 21),
    (Frobenius(Cyclic(7), Cyclic(2), scalar(7, 6)), 14),
    (Frobenius(Cyclic(7), Cyclic(2), INVERT), 14),
])
def test_build_orders(spec, order):
    assert build(spec).order == order


def test_semidirect_components_are_normal_kernel():
    G = build(Semidirect(Cyclic(7), Cyclic(3), scalar(7, 2)))
    K, C = component_subgroup(G, "kernel"), component_subgroup(G, "complement")
    assert (K.order, C.order) == (7, 3)
    assert is_normal(K, whole(G)) and not is_normal(C, whole(G))


def test_frobenius_swap_not_fixed_point_free():
    with pytest.raises(NotFixedPointFree) as exc:
        make_frobenius(ElementaryAbelian(3, 2), Cyclic(2), MatrixAction(3, 2, (((0, 1), (1, 0)),)))
    actor, target = exc.value.witness
    assert actor and target


def test_non_faithful_action_keeps_complement():
    # Z4 acting on Z5 through its quotient Z2 (inversion)
    G = build(Semidirect(Cyclic(5), Cyclic(4), scalar(5, 4)))
    assert G.order == 20
    assert classify_frobenius(G).kind == "neither"


def test_action_not_homomorphism():
    # x -> 6x has order 2, so it cannot be the image of a generator of order 3
    with pytest.raises(ActionNotHomomorphism):
        build(Semidirect(Cyclic(7), Cyclic(3), scalar(7, 6)))


def test_two_frobenius_s4_chain():
    spec = TwoFrobenius(ElementaryAbelian(2, 2), Cyclic(3), Cyclic(2), V4_Z3, V4_SWAP, INVERT)
    G = build(spec)
    assert G.order == 24
    fs = classify_frobenius(G)
    assert fs.kind == "two_frobenius" and fs.type == (2, 3, 2)
    assert [component_subgroup(G, n).order for n in ("bottom", "middle", "top")] == [4, 3, 2]


def test_two_frobenius_literal_7_3_2_is_not_a_homomorphism():
    spec = TwoFrobenius(Cyclic(7), Cyclic(3), Cyclic(2), scalar(7, 2), scalar(7, 1), INVERT)
    with pytest.raises(ActionNotHomomorphism):
        build(spec)


def test_two_frobenius_type_7_3_2():
    spec = TwoFrobenius(ElementaryAbelian(7, 2), Cyclic(3), Cyclic(2),
                        MatrixAction(7, 2, (((2, 0), (0, 4)),)),
                        MatrixAction(7, 2, (((0, 1), (1, 0)),)), INVERT)
    G = build(spec)
    assert G.order == 294
    assert classify_frobenius(G).type == (7, 3, 2)


def test_two_frobenius_collapses_to_frobenius():
    identity_on_z4 = AutomorphismAction(((((0, 1),),),))
    spec = TwoFrobenius(Cyclic(5), Cyclic(4), Cyclic(1), scalar(5, 2), scalar(5, 1), identity_on_z4)
    with pytest.raises(StructureMismatch):
        build(spec)


def test_qian_precondition():
    with pytest.raises(PreconditionViolated):
        qian_family(3, 5)
    with pytest.raises(PreconditionViolated):
        qian_family(4, 7)
    with pytest.raises(PreconditionViolated):
        qian_family(3, 3)


def test_qian_3_7_structure(qian37):
    G = qian37
    assert G.order == 36 * 7 ** 4 == 86436
    assert [component_subgroup(G, n).order for n in ("V", "Q", "P")] == [7 ** 4, 9, 4]
    assert component_subgroup(G, "V").normal


@pytest.mark.slow
def test_qian_3_13_order():
    G = qian_family(3, 13)
    assert G.order == 36 * 13 ** 4


@pytest.mark.parametrize("alias", sorted(set(ALIASES) - {"five-cycle"}) + ["qian:3,7"])
def test_metadata_sylow_is_sylow(alias, request):
    G = request.getfixturevalue("qian37") if alias == "qian:3,7" else build(resolve(alias))
    for p in G.primes:
        meta = metadata_sylow(G, p)
        if meta is None:
            continue
        P = sylow_subgroup(G, p)
        assert meta.order == P.order
        if P.normal:
            assert meta.same_as(P)
        else:
            conj = [np.sort(G.conjugate(P.members, g)) for g in range(min(G.order, 5000))]
            assert any(np.array_equal(c, meta.members) for c in conj)


# specs: serialization --------------------------------------------------------

@pytest.mark.parametrize("alias", sorted(ALIASES))
def test_spec_round_trip_and_digest(alias):
    spec = resolve(alias)
    text = canonical_json(spec)
    assert from_dict(json.loads(text)) == spec
    assert loads(text) == spec
    assert digest(spec) == digest(loads(text))
    assert to_dict(spec)["kind"]


def test_digests_distinct_and_stable():
    ds = {alias: digest(resolve(alias)) for alias in ALIASES}
    assert len(set(ds.values())) == len(ds)
    assert digest(resolve("qian:3,7")) == digest(resolve(" QIAN:3,7 "))


@pytest.mark.parametrize("alias", ["s4", "f21", "q8", "d8"])
def test_universe_deterministic(alias):
    a, b = build(resolve(alias)), build(resolve(alias))
    assert np.array_equal(a.elements, b.elements)


@pytest.mark.parametrize("text,path", [
    ('{"kind": "nope"}', "$"),
    ('{"kind": "cyclic"}', "$"),
    ('{"kind": "cyclic", "n": 0}', "$.n"),
    ('{"kind": "semidirect", "kernel": {"kind": "cyclic", "n": "x"}, "complement": {"kind": "cyclic", "n": 2},'
     ' "action": {"kind": "automorphism", "images": [[[[0, -1]]]]}}', "$.kernel"),
    ('[1, 2]', "$"),
    ('{not json', "$"),
])
def test_malformed_specs(text, path):
    with pytest.raises(SpecError) as exc:
        loads(text)
    assert exc.value.path.startswith(path)


def test_matrix_action_errors():
    with pytest.raises(SpecError):
        build(Semidirect(Symmetric(3), Cyclic(2), scalar(3, 2)))
    with pytest.raises(SpecError):
        build(Semidirect(ElementaryAbelian(7, 2), Cyclic(3), scalar(7, 2)))
    with pytest.raises(SpecError):
        build(Semidirect(ElementaryAbelian(7, 2), Cyclic(3), MatrixAction(7, 2, (((1, 1), (1, 1)),))))


def test_resolve_unknown():
    with pytest.raises(SpecError):
        resolve("m11")
    with pytest.raises(SpecError):
        resolve("qian:3")


def test_permutations_spec_q8():
    G = build(Permutations(8, ((2, 3, 1, 0, 7, 6, 4, 5), (4, 5, 6, 7, 1, 0, 3, 2))))
    orders = G.conjugacy.element_orders()
    assert G.order == 8 and sorted(orders.tolist()) == [1, 2, 4, 4, 4, 4, 4, 4]
