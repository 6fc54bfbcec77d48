"""Subgroups of an enumerated group and the structural tests built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import HallNotFound, InternalSearchFailure, NotNormalized, QuotientFailure
from .group import FiniteGroup, p_part, prime_factors

DEFAULT_HALL_RETRIES = 64


class Subgroup:
    """A subgroup of ``group`` held as a sorted array of universe indices."""

    def __init__(self, group: FiniteGroup, members: np.ndarray, generators: Sequence[int]):
        self.group = group
        self.members = np.asarray(members, dtype=np.int64)
        self.members.setflags(write=False)
        self.generators = tuple(int(g) for g in generators if int(g) != 0)

    def __repr__(self) -> str:
        return "Subgroup(order=%d, gens=%s)" % (self.order, list(self.generators))

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.members] = True
        return m

    def contains(self, idx) -> np.ndarray:
        return self.mask[np.asarray(idx, dtype=np.int64)]

    def same_as(self, other: "Subgroup") -> bool:
        return self.order == other.order and bool(np.array_equal(self.members, other.members))

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.members].all())

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(prime_factors(self.order)))

    @cached_property
    def normal(self) -> bool:
        """Normal in the ambient group."""
        return is_normal(self, whole(self.group))


def whole(G: FiniteGroup) -> Subgroup:
    cache = G.__dict__.setdefault("_whole", None)
    if cache is None:
        cache = Subgroup(G, np.arange(G.order), G.generators)
        G.__dict__["_whole"] = cache
    return cache


def closure(
    G: FiniteGroup,
    seeds: Iterable[int],
    start: Subgroup | None = None,
    cap: int | None = None,
) -> Subgroup | None:
    """Subgroup generated by ``seeds`` (and ``start``); None once ``cap`` is passed."""
    seeds = [int(s) for s in dict.fromkeys(int(s) for s in seeds) if int(s) != 0]
    gens = list(start.generators) if start is not None else []
    for s in seeds:
        if s not in gens:
            gens.append(s)
    mask = np.zeros(G.order, dtype=bool)
    if start is not None:
        mask[start.members] = True
        frontier = start.members.copy()
        if all(start.mask[s] for s in seeds):
            return start
    else:
        mask[0] = True
        frontier = np.zeros(1, dtype=np.int64)
    count = int(mask.sum())
    S = np.array(gens, dtype=np.int64)
    while len(frontier) and len(S):
        prod = G.mul(frontier[:, None], S[None, :]).ravel()
        new = prod[~mask[prod]]
        if not len(new):
            break
        new = np.unique(new)
        mask[new] = True
        count += len(new)
        if cap is not None and count > cap:
            return None
        frontier = new
    return Subgroup(G, np.flatnonzero(mask), gens)


def generated_subgroup(G: FiniteGroup, seeds: Iterable[int]) -> Subgroup:
    """Closure of ``seeds`` in the universe; ``.normal`` reports normality in G."""
    return closure(G, seeds)


def subgroup_from_mask(G: FiniteGroup, mask: np.ndarray, hint: Sequence[int] = ()) -> Subgroup:
    """Wrap a set already known to be a subgroup, choosing a small generating set."""
    members = np.flatnonzero(mask)
    gens: list[int] = []
    cur: Subgroup | None = Subgroup(G, np.zeros(1, dtype=np.int64), ())
    candidates = [int(h) for h in hint if mask[int(h)]] + members.tolist()
    for x in candidates:
        if cur.order == len(members):
            break
        if x == 0 or cur.mask[x]:
            continue
        gens.append(x)
        cur = closure(G, [x], start=cur)
    if cur.order != len(members):
        raise InternalSearchFailure("set is not closed under multiplication")
    return Subgroup(G, members, gens)


def is_normal(N: Subgroup, H: Subgroup) -> bool:
    G = N.group
    if not N.generators:
        return True
    for s in H.generators:
        if not N.mask[G.conjugate(np.array(N.generators), s)].all():
            return False
    return True


def normal_closure(H: Subgroup, seeds: Iterable[int]) -> Subgroup:
    G = H.group
    cur = closure(G, seeds)
    while True:
        extra = []
        for s in H.generators:
            if not cur.generators:
                break
            conj = G.conjugate(np.array(cur.generators), s)
            extra.extend(int(x) for x in conj[~cur.mask[conj]])
        if not extra:
            return cur
        cur = closure(G, extra[:1], start=cur)


def derived_subgroup(H: Subgroup) -> Subgroup:
    G = H.group
    gens = list(H.generators)
    comms = []
    for i, x in enumerate(gens):
        for y in gens[i + 1:]:
            comms.append(int(G.commutator(x, y)))
    return normal_closure(H, comms)


def derived_series(H: Subgroup | FiniteGroup) -> tuple[list[Subgroup], bool]:
    """Chain H >= H' >= H'' ... until stable, and whether it reaches 1."""
    if isinstance(H, FiniteGroup):
        H = whole(H)
    chain = [H]
    while True:
        nxt = derived_subgroup(chain[-1])
        if nxt.order == chain[-1].order:
            break
        chain.append(nxt)
    return chain, chain[-1].order == 1


def is_solvable(H: Subgroup | FiniteGroup) -> bool:
    return derived_series(H)[1]


def _element_orders(G: FiniteGroup) -> np.ndarray:
    if "_elem_orders" not in G.__dict__:
        G.__dict__["_elem_orders"] = G.conjugacy.element_orders()
    return G.__dict__["_elem_orders"]


def _is_p_power(values: np.ndarray, p: int) -> np.ndarray:
    v = values.copy()
    while True:
        div = (v % p == 0) & (v > 1)
        if not div.any():
            break
        v[div] //= p
    return v == 1


def sylow_subgroup(H: Subgroup | FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup of H, grown through normalizers from a maximal p-element."""
    if isinstance(H, FiniteGroup):
        H = whole(H)
    G = H.group
    target = p_part(H.order, p)
    trivial = Subgroup(G, np.zeros(1, dtype=np.int64), ())
    if target == 1:
        return trivial
    orders = _element_orders(G)[H.members]
    cand = H.members[_is_p_power(orders, p) & (orders > 1)]
    cand_orders = _element_orders(G)[cand]
    seed = int(cand[np.argmax(cand_orders)])
    P = closure(G, [seed])
    while P.order < target:
        pool = cand[~P.mask[cand]]
        ok = np.ones(len(pool), dtype=bool)
        for s in P.generators:
            ok &= P.mask[G.conjugate(s, pool)]
        if not ok.any():
            raise InternalSearchFailure("Sylow %d-search stalled at order %d" % (p, P.order))
        P = closure(G, [int(pool[np.argmax(ok)])], start=P)
    if P.order != target:
        raise InternalSearchFailure("Sylow %d-search overshot to order %d" % (p, P.order))
    return P


def _core(H: Subgroup, X: Subgroup) -> Subgroup:
    """Intersection of the conjugates of X under H's generators, to a fixpoint."""
    G = H.group
    mask = X.mask.copy()
    while True:
        before = int(mask.sum())
        for s in H.generators:
            members = np.flatnonzero(mask)
            img = np.zeros(G.order, dtype=bool)
            img[G.conjugate(members, s)] = True
            mask &= img
        if int(mask.sum()) == before:
            break
    core = subgroup_from_mask(G, mask, hint=X.generators)
    if not is_normal(core, H):
        raise InternalSearchFailure("core fixpoint is not normal")
    return core


def p_core(H: Subgroup | FiniteGroup, p: int) -> Subgroup:
    """O_p(H): the largest normal p-subgroup."""
    if isinstance(H, FiniteGroup):
        H = whole(H)
    return _core(H, sylow_subgroup(H, p))


def fitting_subgroup(H: Subgroup | FiniteGroup) -> Subgroup:
    if isinstance(H, FiniteGroup):
        H = whole(H)
    G = H.group
    cores = [p_core(H, p) for p in H.primes]
    gens = [g for c in cores for g in c.generators]
    fit = closure(G, gens)
    expected = 1
    for c in cores:
        expected *= c.order
    if fit.order != expected:
        raise InternalSearchFailure("Fitting subgroup order %d != product of cores %d" % (fit.order, expected))
    return fit


def relative_core(H: Subgroup, K: Subgroup, p: int) -> Subgroup:
    """Preimage of O_p(H/K) for K normal in H."""
    G = H.group
    S = sylow_subgroup(H, p)
    return _core(H, closure(G, S.generators, start=K))


def fitting_preimage(H: Subgroup, K: Subgroup) -> Subgroup:
    """Preimage of Fit(H/K) for K normal in H."""
    if not is_normal(K, H):
        raise QuotientFailure("subgroup is not normal")
    G = H.group
    gens = list(K.generators)
    for p in H.primes:
        gens.extend(relative_core(H, K, p).generators)
    return closure(G, gens)


def fixed_point_witness(actor: Subgroup, target: Subgroup, modulo: Subgroup | None = None):
    """First pair (a, t) with a != 1 in actor centralizing t != 1 in target, or None.

    With ``modulo`` = N the test runs in the quotient by N: actor elements in N
    are skipped and ``t`` counts as centralized when ``[t, a]`` lies in N.
    """
    G = actor.group
    if modulo is None:
        for a in actor.generators:
            if target.generators and not target.mask[G.conjugate(np.array(target.generators), a)].all():
                raise NotNormalized("actor does not normalize target")
    acts = actor.members[actor.members != 0]
    if modulo is not None:
        acts = acts[~modulo.mask[acts]]
    tgt = target.members[target.members != 0]
    if modulo is not None:
        tgt = tgt[~modulo.mask[tgt]]
    if not len(acts) or not len(tgt):
        return None
    block = max(1, 4_000_000 // len(tgt))
    for lo in range(0, len(acts), block):
        a = acts[lo:lo + block]
        if modulo is None:
            hit = G.conjugate(tgt[None, :], a[:, None]) == tgt[None, :]
        else:
            hit = modulo.mask[G.commutator(tgt[None, :], a[:, None])]
        if hit.any():
            i, j = np.argwhere(hit)[0]
            return int(a[i]), int(tgt[j])
    return None


def is_fixed_point_free(actor: Subgroup, target: Subgroup, modulo: Subgroup | None = None) -> bool:
    return fixed_point_witness(actor, target, modulo) is None


def is_frobenius(H: Subgroup, kernel: Subgroup, complement: Subgroup) -> bool:
    """H = kernel x| complement with the complement acting fixed-point-freely."""
    if kernel.order == 1 or complement.order == 1:
        return False
    if kernel.order * complement.order != H.order:
        return False
    if not (kernel.is_subgroup_of(H) and complement.is_subgroup_of(H)):
        return False
    if int(np.count_nonzero(kernel.mask[complement.members])) != 1:
        return False
    if not is_normal(kernel, H):
        return False
    return is_fixed_point_free(complement, kernel)


def is_two_frobenius(H: Subgroup, N: Subgroup, M: Subgroup, middle: Subgroup, top: Subgroup) -> bool:
    """N < M < H normal with M = Fro(N, middle) and H/N = Fro(M/N, top N/N)."""
    if not (N.order < M.order < H.order):
        return False
    if not (N.is_subgroup_of(M) and M.is_subgroup_of(H)):
        return False
    if not (is_normal(N, H) and is_normal(M, H)):
        return False
    if not is_frobenius(M, N, middle):
        return False
    if top.order * M.order != H.order * int(np.count_nonzero(N.mask[top.members])):
        return False
    if top.mask[middle.members].sum() != 1:
        return False
    return is_fixed_point_free(top, middle, modulo=N)


def metadata_sylow(G: FiniteGroup, p: int) -> Subgroup | None:
    """A recorded construction component that is a Sylow p-subgroup of G, if any."""
    target = p_part(G.order, p)
    for name in sorted(G.component_names):
        sub = component_subgroup(G, name)
        if sub.order == target and sub.primes == (p,):
            return sub
    return None


def component_subgroup(G: FiniteGroup, name: str) -> Subgroup:
    cache = G.__dict__.setdefault("_components", {})
    if name not in cache:
        cache[name] = closure(G, G.component_generators(name))
    return cache[name]


def hall_subgroups(
    G: FiniteGroup,
    p: int,
    q: int,
    retries: int = DEFAULT_HALL_RETRIES,
    first_only: bool = False,
) -> list[Subgroup]:
    """Distinct Hall {p,q}-subgroups met while trying metadata and <P, Q^g>."""
    target = p_part(G.order, p) * p_part(G.order, q)
    found: list[Subgroup] = []

    def consider(sub: Subgroup | None) -> None:
        if sub is not None and sub.order == target and not any(sub.same_as(f) for f in found):
            found.append(sub)

    Pm, Qm = metadata_sylow(G, p), metadata_sylow(G, q)
    if Pm is not None and Qm is not None:
        consider(closure(G, Pm.generators + Qm.generators, cap=target))
        if first_only and found:
            return found
    P, Q = sylow_subgroup(G, p), sylow_subgroup(G, q)
    first = closure(G, P.generators + Q.generators, cap=target)
    consider(first)
    if first_only and found:
        return found
    excluded = first.mask if first is not None else P.mask
    tried = 0
    for g in range(1, G.order):
        if tried >= retries:
            break
        if excluded[g]:
            continue
        tried += 1
        Qg = G.conjugate(np.array(Q.generators), g).tolist()
        consider(closure(G, list(P.generators) + Qg, cap=target))
        if first_only and found:
            break
    return found


def hall_pq(G: FiniteGroup, p: int, q: int, retries: int = DEFAULT_HALL_RETRIES) -> Subgroup:
    found = hall_subgroups(G, p, q, retries, first_only=True)
    if not found:
        raise HallNotFound(p, q, retries)
    return found[0]


@dataclass(frozen=True)
class FrobeniusStructure:
    """Outcome of classifying a group by its Fitting chain.

    ``kind`` is "frobenius", "two_frobenius" or "neither".  For Frobenius groups
    ``kernel_prime``/``complement_prime`` are set; for 2-Frobenius groups
    ``type`` is the prime triple (bottom, middle, top).
    """

    kind: str
    kernel_prime: int | None = None
    complement_prime: int | None = None
    type: tuple[int, int, int] | None = None

    def arc(self) -> tuple[int, int] | None:
        """Frobenius-digraph orientation induced on the prime pair, if any."""
        if self.kind == "frobenius":
            return (self.complement_prime, self.kernel_prime)
        if self.kind == "two_frobenius" and self.type[0] == self.type[2]:
            return (self.type[0], self.type[1])
        return None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "frobenius":
            out.update(kernel_prime=self.kernel_prime, complement_prime=self.complement_prime)
        elif self.kind == "two_frobenius":
            out["type"] = list(self.type)
        return out


NEITHER = FrobeniusStructure("neither")


def classify_frobenius(H: Subgroup | FiniteGroup) -> FrobeniusStructure:
    """Frobenius / 2-Frobenius / neither, from K1 = Fit(H) and K2/K1 = Fit(H/K1).

    Only chains whose layers each have prime-power order are recognised, which
    covers every group of order p^a q^b.
    """
    if isinstance(H, FiniteGroup):
        H = whole(H)
    K1 = fitting_subgroup(H)
    if K1.order == H.order or len(K1.primes) != 1:
        return NEITHER
    K2 = fitting_preimage(H, K1)
    x = K1.primes[0]
    if K2.order == H.order:
        rest = prime_factors(H.order // K1.order)
        if len(rest) != 1 or x in rest:
            return NEITHER
        y = next(iter(rest))
        comp = sylow_subgroup(H, y)
        if is_frobenius(H, K1, comp):
            return FrobeniusStructure("frobenius", kernel_prime=x, complement_prime=y)
        return NEITHER
    mid = prime_factors(K2.order // K1.order)
    top = prime_factors(H.order // K2.order)
    if len(mid) != 1 or len(top) != 1:
        return NEITHER
    y, z = next(iter(mid)), next(iter(top))
    if y == x or z == y:
        return NEITHER
    Y = sylow_subgroup(K2, y)
    Z = sylow_subgroup(H, z)
    if is_two_frobenius(H, K1, K2, Y, Z):
        return FrobeniusStructure("two_frobenius", type=(x, y, z))
    return NEITHER


def frobenius_structure(H: Subgroup | FiniteGroup, p: int, q: int) -> FrobeniusStructure:
    if isinstance(H, FiniteGroup):
        H = whole(H)
    if set(H.primes) != {p, q}:
        raise ValueError("subgroup order %d is not of the form %d^a %d^b" % (H.order, p, q))
    return classify_frobenius(H)


class QuotientGroup:
    """H/N as a table of cosets with least-index representatives."""

    def __init__(self, H: Subgroup, N: Subgroup):
        if not is_normal(N, H):
            raise QuotientFailure("subgroup is not normal")
        G = H.group
        self.H, self.N = H, N
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[H.members] = np.arange(H.order)
        src = [np.arange(H.order)]
        dst = [np.arange(H.order)]
        for n in N.generators:
            src.append(np.arange(H.order))
            dst.append(pos[G.mul(H.members, n)])
        adj = coo_matrix((np.ones(sum(map(len, src)), dtype=np.int8),
                          (np.concatenate(src), np.concatenate(dst))), shape=(H.order, H.order))
        ncomp, labels = connected_components(adj, directed=True, connection="weak")
        least = np.full(ncomp, G.order, dtype=np.int64)
        np.minimum.at(least, labels, H.members)
        order = np.argsort(least)
        relabel = np.empty(ncomp, dtype=np.int64)
        relabel[order] = np.arange(ncomp)
        self.coset_of = np.full(G.order, -1, dtype=np.int64)
        self.coset_of[H.members] = relabel[labels]
        self.representatives = least[order]
        self.order = ncomp
        if ncomp * N.order != H.order:
            raise QuotientFailure("coset sizes inconsistent")

    def mul(self, a, b) -> np.ndarray:
        G = self.H.group
        return self.coset_of[G.mul(self.representatives[a], self.representatives[b])]

    def conjugation(self, h: int) -> np.ndarray:
        G = self.H.group
        return self.coset_of[G.conjugate(self.representatives, h)]

    def class_count(self) -> int:
        n = self.order
        src = [np.arange(n)] + [np.arange(n) for _ in self.H.generators]
        dst = [np.arange(n)] + [self.conjugation(s) for s in self.H.generators]
        adj = coo_matrix((np.ones(n * len(src), dtype=np.int8),
                          (np.concatenate(src), np.concatenate(dst))), shape=(n, n))
        return int(connected_components(adj, directed=True, connection="weak")[0])
