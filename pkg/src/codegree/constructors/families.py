"""The two fixed witness constructions: the 2-path/triangle family and the 5-cycle group."""

from __future__ import annotations

from itertools import product

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import isprime, primitive_root

from ..chartable import modp
from ..errors import ModuleReducible, PreconditionViolated, StructureMismatch
from ..groups import (
    DEFAULT_LIMIT,
    AffineBlock,
    FiniteGroup,
    Realization,
    component_subgroup,
    closure,
)
from ..groups.subgroups import fixed_point_witness
from . import spec as S
from .build import Builder, _rename

FIVE_CYCLE_PRIMES = {"A": 2, "B": 5, "C": 31, "D": 3, "E": 7}
FIVE_CYCLE_ORDER = 2 * 3 * 5 * 7 * 31 * 31


# 2-path / triangle family ------------------------------------------------------

def _rotation(q: int) -> np.ndarray:
    """Order-4 matrix over GF(q) squaring to -1; no power but the identity fixes a vector."""
    return np.array([[0, q - 1], [1, 0]], dtype=np.int64)


def _induced_module(q: int, r: int, c: tuple[int, int]) -> list[np.ndarray]:
    """Monomial 4x4 matrices over GF(r) for e1, e2 and the rotation a.

    Basis w_i = w_0 a^i; Q scales w_i by omega^(c . (u M^-i)) and a shifts
    w_i to w_(i+1).
    """
    M = _rotation(q)
    Minv = modp.rref(np.concatenate([M, np.eye(2, dtype=np.int64)], axis=1), q)[0][:, 2:]
    omega = pow(int(primitive_root(r)), (r - 1) // q, r)
    c_vec = np.array(c, dtype=np.int64)
    mats = []
    for k in range(2):
        u = np.eye(2, dtype=np.int64)[k]
        D = np.zeros((4, 4), dtype=np.int64)
        P = np.eye(2, dtype=np.int64)
        for i in range(4):
            D[i, i] = pow(omega, int((u @ P % q) @ c_vec % q), r)
            P = P @ Minv % q
        mats.append(D)
    shift = np.zeros((4, 4), dtype=np.int64)
    for i in range(4):
        shift[i, (i + 1) % 4] = 1
    mats.append(shift)
    return mats


def _is_irreducible(mats: list[np.ndarray], r: int, dim: int) -> bool:
    """Spin the span of each orbit representative of nonzero vectors; all must reach full rank."""
    n = r ** dim
    vecs = np.array(list(product(range(r), repeat=dim)), dtype=np.int64)
    weights = r ** np.arange(dim - 1, -1, -1)
    src, dst = [], []
    for m in mats:
        src.append(np.arange(n))
        dst.append((vecs @ m % r) @ weights)
    adj = coo_matrix((np.ones(n * len(mats), dtype=np.int8), (np.concatenate(src), np.concatenate(dst))),
                     shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="weak")
    _, reps = np.unique(labels, return_index=True)
    for rep in reps:
        if rep == 0:
            continue
        basis = vecs[rep][None, :]
        while True:
            grown = np.concatenate([basis] + [basis @ m % r for m in mats], axis=0)
            nxt, _ = modp.rref(grown, r)
            if len(nxt) == len(basis):
                break
            basis = nxt
        if len(basis) < dim:
            return False
    return True


def qian_family(q: int, r: int, limit: int = DEFAULT_LIMIT, info: dict | None = None) -> FiniteGroup:
    """V x| (Q x| P): P = Z4 rotating Q = GF(q)^2, V = GF(r)^4 an induced faithful irreducible module.

    Components ``V``, ``Q``, ``P``.  The prime graph is the path 2 - r - q and
    the codegree graph the triangle on {2, q, r}.
    """
    if not (isprime(q) and q % 2 == 1):
        raise PreconditionViolated("q must be an odd prime, got %d" % q)
    if not isprime(r) or r in (2, q):
        raise PreconditionViolated("r must be a prime different from 2 and q, got %d" % r)
    if r % q != 1:
        raise PreconditionViolated("GF(%d) has no primitive %d-th root of unity (%d is not 1 mod %d)" % (r, q, r, q))
    M = _rotation(q)
    upper = S.Semidirect(S.ElementaryAbelian(q, 2), S.Cyclic(4),
                         S.MatrixAction(q, 2, (tuple(map(tuple, M.tolist())),)))
    H = FiniteGroup(Realization([AffineBlock(q, 2)]),
                    [AffineBlock(q, 2).join(np.array(v), M2) for v, M2 in
                     ((np.array([1, 0]), np.eye(2, dtype=np.int64)),
                      (np.array([0, 1]), np.eye(2, dtype=np.int64)),
                      (np.zeros(2, dtype=np.int64), M))], limit=limit)
    target = H.order
    tried = []
    for c in product(range(q), repeat=2):
        if c == (0, 0):
            continue
        mats = _induced_module(q, r, c)
        image = FiniteGroup(Realization([AffineBlock(r, 4)]),
                            [AffineBlock(r, 4).join(np.zeros(4, dtype=np.int64), m) for m in mats], limit=limit)
        if image.order == target and _is_irreducible(mats, r, 4):
            break
        tried.append(c)
    else:
        raise ModuleReducible("no faithful irreducible induced module among characters %s" % tried)
    spec = S.Semidirect(S.ElementaryAbelian(r, 4), upper,
                        S.MatrixAction(r, 4, tuple(tuple(map(tuple, m.tolist())) for m in mats)))
    b = Builder(limit)
    con = _rename(b.lower(spec), {"kernel": "V", "complement.kernel": "Q", "complement.complement": "P"})
    meta = {"family": "qian", "q": q, "r": r, "character": list(c)}
    return b.group(con, {**meta, **(info or {})})


# five-cycle witness ----------------------------------------------------------

def five_cycle_instance(limit: int = DEFAULT_LIMIT, info: dict | None = None) -> FiniteGroup:
    """(C x E) x| (B x| (A x D)) with (a,b,c,d,e) = (2,5,31,3,7), |G| = 201810.

    C = GF(31)^2, E = GF(7).  B = diag(2, 16) on C; A swaps the C coordinates
    and inverts E (hence inverts B); D is scalar 5 on C and doubles E.
    """
    cb, eb = AffineBlock(31, 2), AffineBlock(7, 1)
    I2 = np.eye(2, dtype=np.int64)
    I1 = np.eye(1, dtype=np.int64)
    z2, z1 = np.zeros(2, dtype=np.int64), np.zeros(1, dtype=np.int64)

    def row(vc, Mc, ve, Me):
        return np.concatenate([cb.join(np.asarray(vc) % 31, np.asarray(Mc) % 31),
                               eb.join(np.asarray(ve) % 7, np.asarray(Me) % 7)])

    gens = {
        "C": [row([1, 0], I2, z1, I1), row([0, 1], I2, z1, I1)],
        "E": [row(z2, I2, [1], I1)],
        "B": [row(z2, [[2, 0], [0, 16]], z1, I1)],
        "A": [row(z2, [[0, 1], [1, 0]], z1, [[6]])],
        "D": [row(z2, 5 * I2, z1, [[2]])],
    }
    order = ["C", "E", "B", "A", "D"]
    G = FiniteGroup(Realization([cb, eb]), [g for k in order for g in gens[k]], limit=limit,
                    components=gens,
                    info={"family": "five_cycle", "labels": dict(FIVE_CYCLE_PRIMES), **(info or {})})
    _verify_five_cycle(G)
    return G


def _verify_five_cycle(G: FiniteGroup) -> None:
    def fail(msg: str) -> None:
        raise StructureMismatch("five-cycle witness: " + msg)

    if G.order != FIVE_CYCLE_ORDER:
        fail("order %d, expected %d" % (G.order, FIVE_CYCLE_ORDER))
    comp = {k: component_subgroup(G, k) for k in "ABCDE"}
    for k, p in FIVE_CYCLE_PRIMES.items():
        expected = p * p if k == "C" else p
        if comp[k].order != expected:
            fail("component %s has order %d" % (k, comp[k].order))
    a, b, d = (comp[k].generators[0] for k in "ABD")
    if int(G.conjugate(b, G.inverse[a])) != int(G.inverse[b]):
        fail("a b a^-1 != b^-1")
    if int(G.commutator(d, b)) != 0 or int(G.commutator(a, d)) != 0:
        fail("D does not centralize A and B")
    for e in comp["E"].generators:
        if int(G.commutator(b, e)) != 0:
            fail("B does not centralize E")
    pairs = [("A", "B"), ("A", "E"), ("D", "E"), ("D", "C"), ("B", "C")]
    for actor, target in pairs:
        if fixed_point_witness(comp[actor], comp[target]) is not None:
            fail("%s is not fixed-point-free on %s" % (actor, target))
    BD = closure(G, comp["B"].generators + comp["D"].generators)
    AD = closure(G, comp["A"].generators + comp["D"].generators)
    if fixed_point_witness(BD, comp["C"]) is not None:
        fail("<B,D> is not fixed-point-free on C")
    if fixed_point_witness(AD, comp["E"]) is not None:
        fail("<A,D> is not fixed-point-free on E")
