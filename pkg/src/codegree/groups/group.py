"""Fully enumerated finite groups and their conjugacy data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import LimitExceeded, MixedRealization
from .realization import Realization

DEFAULT_LIMIT = 2_000_000


def _first_occurrence(codes: np.ndarray) -> np.ndarray:
    """Positions of the first occurrence of each distinct code, in input order."""
    _, first = np.unique(codes, return_index=True)
    return np.sort(first)


def enumerate_elements(
    realization: Realization,
    generators: Sequence[np.ndarray],
    limit: int = DEFAULT_LIMIT,
) -> tuple[np.ndarray, list[int]]:
    """Breadth-first closure of ``generators``.

    Returns the element rows (identity first, then discovery order using the
    lexicographically sorted generators) and the universe index of each input
    generator.
    """
    gens = []
    for g in generators:
        g = np.asarray(g, dtype=np.int64)
        if g.shape != (realization.width,):
            raise MixedRealization("generator width %s does not match realization width %d"
                                   % (g.shape, realization.width))
        realization.validate(g)
        gens.append(g)
    ordered = sorted({tuple(int(v) for v in g) for g in gens})
    S = np.array(ordered, dtype=np.int64).reshape(len(ordered), realization.width)

    ident = realization.identity()[None, :]
    layers = [ident]
    known = realization.encode(ident)
    frontier = ident
    total = 1
    while len(frontier) and len(S):
        prod = realization.mul(frontier[:, None, :], S[None, :, :]).reshape(-1, realization.width)
        codes = realization.encode(prod)
        pos = np.searchsorted(known, codes)
        pos = np.minimum(pos, len(known) - 1)
        fresh = known[pos] != codes
        prod, codes = prod[fresh], codes[fresh]
        keep = _first_occurrence(codes)
        frontier = prod[keep]
        total += len(frontier)
        if total > limit:
            raise LimitExceeded(limit)
        layers.append(frontier)
        known = np.sort(np.concatenate([known, codes[keep]]))
    elements = np.concatenate(layers, axis=0)

    codes = realization.encode(elements)
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]
    gen_idx = []
    for g in gens:
        c = realization.encode(g[None, :])
        gen_idx.append(int(order[np.searchsorted(sorted_codes, c)[0]]))
    return elements, gen_idx


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: np.ndarray = field(repr=False)
    size: int
    element_order: int


@dataclass(frozen=True, eq=False)
class ConjugacyData:
    """Classes, element->class map, power map and exponent of a group."""

    classes: tuple[ConjugacyClass, ...]
    class_of: np.ndarray
    power_map: np.ndarray
    exponent: int
    inverse_class: np.ndarray

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes], dtype=np.int64)

    @property
    def orders(self) -> np.ndarray:
        return np.array([c.element_order for c in self.classes], dtype=np.int64)

    @property
    def representatives(self) -> np.ndarray:
        return np.array([c.representative for c in self.classes], dtype=np.int64)

    def element_orders(self) -> np.ndarray:
        """Order of every universe element (order is a class function)."""
        return self.orders[self.class_of]


class FiniteGroup:
    """A group given by generators with its whole element universe enumerated.

    Elements are referred to by their index in the universe; index 0 is the
    identity.  Instances are immutable once constructed.
    """

    def __init__(
        self,
        realization: Realization,
        generators: Sequence[np.ndarray],
        limit: int = DEFAULT_LIMIT,
        components: Mapping[str, Sequence[np.ndarray]] | None = None,
        info: Mapping[str, object] | None = None,
    ):
        self.realization = realization
        elements, gen_idx = enumerate_elements(realization, generators, limit)
        elements.setflags(write=False)
        self.elements = elements
        self.order = len(elements)
        self.generators = tuple(dict.fromkeys(i for i in gen_idx if i != 0))
        codes = realization.encode(elements)
        self._code_order = np.argsort(codes, kind="stable")
        self._sorted_codes = codes[self._code_order]
        inv_rows = realization.inv(elements)
        self.inverse = self.index_of(inv_rows)
        self.inverse.setflags(write=False)
        self.info = dict(info or {})
        # named component subgroups, as generator index tuples; closed lazily
        self._component_gens = {
            name: tuple(self.index_of(np.asarray(rows, dtype=np.int64).reshape(-1, realization.width)).tolist())
            for name, rows in (components or {}).items()
        }
        self._right_mult: dict[int, np.ndarray] = {}
        self._conj: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return "FiniteGroup(order=%d, blocks=%s)" % (self.order, self.realization.describe())

    # element level -----------------------------------------------------

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Universe indices of element rows; raises KeyError for strangers."""
        rows = np.asarray(rows, dtype=np.int64)
        shape = rows.shape[:-1]
        codes = self.realization.encode(rows.reshape(-1, self.realization.width))
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, self.order - 1)
        if not np.all(self._sorted_codes[pos] == codes):
            raise KeyError("element not in group universe")
        return self._code_order[pos].reshape(shape)

    def mul(self, a, b) -> np.ndarray:
        """Products of (broadcast) index arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self.realization.mul(self.elements[a], self.elements[b])
        return self.index_of(prod)

    def right_multiplication(self, g: int) -> np.ndarray:
        """Permutation ``x -> x*g`` of the universe (cached)."""
        if g not in self._right_mult:
            perm = self.mul(np.arange(self.order), g)
            perm.setflags(write=False)
            self._right_mult[g] = perm
        return self._right_mult[g]

    def conjugation(self, g: int) -> np.ndarray:
        """Permutation ``x -> g^-1 x g`` of the universe (cached)."""
        if g not in self._conj:
            perm = self.conjugate(np.arange(self.order), g)
            perm.setflags(write=False)
            self._conj[g] = perm
        return self._conj[g]

    def conjugate(self, x, g) -> np.ndarray:
        """``g^-1 x g`` for broadcast index arrays, with a single lookup."""
        g = np.asarray(g, dtype=np.int64)
        x = np.asarray(x, dtype=np.int64)
        R, E = self.realization, self.elements
        return self.index_of(R.mul(R.mul(E[self.inverse[g]], E[x]), E[g]))

    def commutator(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return self.mul(self.mul(self.inverse[x], self.inverse[y]), self.mul(x, y))

    def format(self, idx: int) -> str:
        return self.realization.format(self.elements[int(idx)])

    @property
    def component_names(self) -> tuple[str, ...]:
        return tuple(self._component_gens)

    def component_generators(self, name: str) -> tuple[int, ...]:
        return self._component_gens[name]

    # class data --------------------------------------------------------

    @cached_property
    def conjugacy(self) -> ConjugacyData:
        return conjugacy_data(self)

    @property
    def exponent(self) -> int:
        return self.conjugacy.exponent

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(_prime_factors(self.order)))


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> dict[int, int]:
    return _prime_factors(n)


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def _orders_of(G: FiniteGroup, reps: np.ndarray) -> np.ndarray:
    orders = np.zeros(len(reps), dtype=np.int64)
    cur = reps.copy()
    live = np.arange(len(reps))
    t = 1
    while len(live):
        done = cur == 0
        orders[live[done]] = t
        live, cur = live[~done], cur[~done]
        if not len(live):
            break
        cur = G.mul(cur, reps[live])
        t += 1
    return orders


def conjugacy_data(G: FiniteGroup) -> ConjugacyData:
    """Conjugacy classes as orbits of conjugation by the generators.

    Classes are ordered by (element order, size, least member index).
    """
    n = G.order
    src = [np.arange(n)]
    dst = [np.arange(n)]
    for s in G.generators:
        src.append(np.arange(n))
        dst.append(G.conjugation(s))
    src_a = np.concatenate(src)
    dst_a = np.concatenate(dst)
    adj = coo_matrix((np.ones(len(src_a), dtype=np.int8), (src_a, dst_a)), shape=(n, n))
    ncomp, labels = connected_components(adj, directed=True, connection="weak")

    # least member of each orbit, in index order
    least = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(least, labels, np.arange(n))
    sizes = np.bincount(labels, minlength=ncomp)
    orders = _orders_of(G, least)
    perm = sorted(range(ncomp), key=lambda c: (int(orders[c]), int(sizes[c]), int(least[c])))
    relabel = np.empty(ncomp, dtype=np.int64)
    relabel[perm] = np.arange(ncomp)
    class_of = relabel[labels]
    members_sorted = np.argsort(class_of, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(sizes[perm])])
    classes = tuple(
        ConjugacyClass(
            representative=int(least[c]),
            members=members_sorted[bounds[i]:bounds[i + 1]],
            size=int(sizes[c]),
            element_order=int(orders[c]),
        )
        for i, c in enumerate(perm)
    )
    k = len(classes)
    class_orders = np.array([c.element_order for c in classes], dtype=np.int64)
    exponent = int(reduce(math.lcm, class_orders.tolist(), 1))

    reps = np.array([c.representative for c in classes], dtype=np.int64)
    maxo = int(class_orders.max())
    power = np.zeros((k, exponent), dtype=np.int32)
    cur = np.zeros(k, dtype=np.int64)
    cols = np.empty((k, maxo), dtype=np.int32)
    for j in range(maxo):
        cols[:, j] = class_of[cur]
        cur = G.mul(cur, reps)
    for c in range(k):
        o = int(class_orders[c])
        power[c] = np.resize(cols[c, :o], exponent)
    inverse_class = class_of[G.inverse[reps]]
    class_of.setflags(write=False)
    power.setflags(write=False)
    return ConjugacyData(
        classes=classes,
        class_of=class_of,
        power_map=power,
        exponent=exponent,
        inverse_class=inverse_class,
    )
