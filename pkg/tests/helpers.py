"""Brute-force oracles shared by the tests; deliberately naive."""

from __future__ import annotations

from itertools import combinations, product

import networkx as nx
import numpy as np

from codegree.graphs import LabeledGraph, complement, is_realizable_codegree


def mul_table(G) -> np.ndarray:
    n = G.order
    idx = np.arange(n)
    return G.mul(idx[:, None], idx[None, :])


def brute_classes(G) -> list[frozenset[int]]:
    T = mul_table(G)
    inv = [int(np.flatnonzero(T[g] == 0)[0]) for g in range(G.order)]
    seen: set[int] = set()
    out = []
    for x in range(G.order):
        if x in seen:
            continue
        orbit = frozenset(int(T[T[inv[g], x], g]) for g in range(G.order))
        seen |= orbit
        out.append(orbit)
    return out


def brute_subgroup(G, seeds) -> frozenset[int]:
    T = mul_table(G)
    S = {0} | {int(s) for s in seeds}
    while True:
        new = {int(T[a, b]) for a in S for b in S} | S
        if new == S:
            return frozenset(S)
        S = new


def element_order(T, x) -> int:
    y, k = x, 1
    while y != 0:
        y = int(T[y, x])
        k += 1
    return k


COLORINGS = {n: np.array(list(product(range(3), repeat=n)), dtype=np.int8).reshape(-1, n) for n in range(1, 8)}


def brute_realizable(n, edges) -> bool:
    eset = {frozenset(e) for e in edges}
    non = [(a, b) for a, b in combinations(range(n), 2) if frozenset((a, b)) not in eset]
    nonset = {frozenset(e) for e in non}
    for a, b, c in combinations(range(n), 3):
        if {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} <= nonset:
            return False
    cols = COLORINGS[n]
    ok = np.ones(len(cols), dtype=bool)
    for a, b in non:
        ok &= cols[:, a] != cols[:, b]
    return bool(ok.any())


def atlas_sweep() -> tuple[int, int]:
    """Compare the decision against the brute-force oracle on every graph with <= 7 vertices."""
    checked = mismatches = 0
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n == 0:
            continue
        lg = LabeledGraph(tuple(range(n)), frozenset(g.edges))
        res = is_realizable_codegree(lg)
        if res.realizable != brute_realizable(n, g.edges):
            mismatches += 1
        if res.realizable:
            comp = complement(lg)
            if not all(res.coloring[a] != res.coloring[b] for a, b in comp.edges):
                mismatches += 1
        checked += 1
    return checked, mismatches
