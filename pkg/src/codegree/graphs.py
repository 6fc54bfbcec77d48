"""Prime graphs: Gruenberg-Kegel construction, realizability, minimality, Frobenius digraphs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import NotRealizableInput
from .groups import DEFAULT_HALL_RETRIES, FiniteGroup, frobenius_structure, hall_subgroups, prime_factors


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected simple graph on primes; edges stored as sorted pairs."""

    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        edges = set()
        for p, q in self.edges:
            if p == q:
                raise ValueError("loop at %d" % p)
            if p not in verts or q not in verts:
                raise ValueError("edge (%d, %d) references a missing vertex" % (p, q))
            edges.add((min(p, q), max(p, q)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(edges))

    def adjacent(self, p: int, q: int) -> bool:
        return (min(p, q), max(p, q)) in self.edges

    def neighbors(self, p: int) -> tuple[int, ...]:
        return tuple(q for q in self.vertices if q != p and self.adjacent(p, q))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_subgraph_of(self, other: "LabeledGraph") -> bool:
        return set(self.vertices) <= set(other.vertices) and self.edges <= other.edges

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            p = stack.pop()
            for q in self.neighbors(p):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen) == len(self.vertices)

    def without(self, drop: Iterable[int]) -> "LabeledGraph":
        drop = set(drop)
        return LabeledGraph(tuple(v for v in self.vertices if v not in drop),
                            frozenset(e for e in self.edges if not (set(e) & drop)))

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledGraph":
        return cls(tuple(int(v) for v in data["vertices"]),
                   frozenset((int(a), int(b)) for a, b in data.get("edges", [])))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[int, ...]
    arcs: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        for p, q in self.arcs:
            if p == q:
                raise ValueError("loop at %d" % p)
            if p not in verts or q not in verts:
                raise ValueError("arc (%d, %d) references a missing vertex" % (p, q))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arcs", frozenset((int(p), int(q)) for p, q in self.arcs))

    def successors(self, p: int) -> tuple[int, ...]:
        return tuple(sorted(q for a, q in self.arcs if a == p))

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "arcs": [list(a) for a in sorted(self.arcs)]}

    @classmethod
    def from_dict(cls, data: dict) -> "Digraph":
        return cls(tuple(int(v) for v in data["vertices"]),
                   frozenset((int(a), int(b)) for a, b in data.get("arcs", [])))


# construction ----------------------------------------------------------------

def gk_graph(values: Iterable[int]) -> LabeledGraph:
    """Vertices: primes dividing some value; p ~ q iff pq divides a single value."""
    verts: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for v in values:
        ps = sorted(prime_factors(int(v)))
        verts.update(ps)
        edges.update(combinations(ps, 2))
    return LabeledGraph(tuple(verts), frozenset(edges))


def prime_graph(G: FiniteGroup) -> LabeledGraph:
    return gk_graph(set(G.conjugacy.orders.tolist()))


def codegree_graph(codegrees: Iterable[int]) -> LabeledGraph:
    """Codegree graph from cod(G) (see ``chartable.codegree_set``)."""
    return gk_graph(codegrees)


def complement(g: LabeledGraph) -> LabeledGraph:
    return LabeledGraph(g.vertices, frozenset(e for e in combinations(g.vertices, 2) if e not in g.edges))


def find_triangle(g: LabeledGraph) -> tuple[int, int, int] | None:
    for a, b, c in combinations(g.vertices, 3):
        if g.adjacent(a, b) and g.adjacent(b, c) and g.adjacent(a, c):
            return (a, b, c)
    return None


def has_triangle(g: LabeledGraph) -> bool:
    return find_triangle(g) is not None


def chromatic_at_most(g: LabeledGraph, k: int) -> tuple[bool, dict[int, int] | None]:
    """Exact backtracking k-coloring; the witness maps vertices to colors 1..k."""
    if k < 1:
        raise ValueError("k must be positive")
    order = sorted(g.vertices, key=lambda v: (-len(g.neighbors(v)), v))
    nbrs = {v: g.neighbors(v) for v in g.vertices}
    color: dict[int, int] = {}

    def place(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        used = {color[u] for u in nbrs[v] if u in color}
        # symmetry break: never open more than one new color at a time
        top = max(color.values(), default=0)
        for c in range(1, min(k, top + 1) + 1):
            if c in used:
                continue
            color[v] = c
            if place(i + 1):
                return True
            del color[v]
        return False

    if place(0):
        return True, dict(sorted(color.items()))
    return False, None


def chromatic_number(g: LabeledGraph) -> int:
    if not g.vertices:
        return 0
    k = 1
    while not chromatic_at_most(g, k)[0]:
        k += 1
    return k


@dataclass(frozen=True)
class Realizability:
    realizable: bool
    complement_triangle: tuple[int, int, int] | None = None
    coloring: dict[int, int] | None = None
    coloring_exhausted: bool = False

    def to_dict(self) -> dict:
        out: dict = {"realizable": self.realizable}
        if self.complement_triangle is not None:
            out["complement_triangle"] = list(self.complement_triangle)
        if self.coloring is not None:
            out["coloring"] = {str(v): c for v, c in sorted(self.coloring.items())}
        if self.coloring_exhausted:
            out["coloring_search_exhausted"] = True
        return out


def is_realizable_codegree(g: LabeledGraph) -> Realizability:
    """Realizable iff the complement is triangle-free and 3-colorable.

    The graph on no vertices counts as realizable (trivial group).
    """
    comp = complement(g)
    tri = find_triangle(comp)
    if tri is not None:
        return Realizability(False, complement_triangle=tri)
    ok, coloring = chromatic_at_most(comp, 3)
    if not ok:
        return Realizability(False, coloring_exhausted=True)
    return Realizability(True, coloring=coloring)


@dataclass(frozen=True)
class Minimality:
    """``minimal`` uses edge deletion; the vertex-pair readings are reported alongside."""

    minimal: bool
    reason: str
    readings: dict[str, bool]
    realizable_remnant: tuple[int, int] | None = None

    @property
    def reading_differs(self) -> bool:
        return any(v != self.minimal for v in self.readings.values())

    def to_dict(self) -> dict:
        out = {"minimal": self.minimal, "reason": self.reason,
               "readings": dict(sorted(self.readings.items())), "reading_differs": self.reading_differs}
        if self.realizable_remnant is not None:
            out["realizable_after_deleting"] = list(self.realizable_remnant)
        return out


def _vertex_pair_minimal(g: LabeledGraph, pairs) -> bool:
    return not any(is_realizable_codegree(g.without(pair)).realizable for pair in pairs)


def is_minimal_codegree_graph(g: LabeledGraph) -> Minimality:
    """Minimal: realizable, connected, more than one vertex, and no single-edge deletion is realizable.

    Two vertex-deletion readings (remove both endpoints, over all pairs or
    over edges only) are evaluated too and reported under ``readings``.
    """
    if not is_realizable_codegree(g).realizable:
        raise NotRealizableInput("graph is not realizable as a codegree graph")
    if len(g.vertices) <= 1:
        return Minimality(False, "at most one vertex", {})
    if not g.is_connected():
        return Minimality(False, "not connected", {})
    witness = None
    for e in g.sorted_edges():
        if is_realizable_codegree(LabeledGraph(g.vertices, g.edges - {e})).realizable:
            witness = e
            break
    readings = {
        "vertex_pairs_all": _vertex_pair_minimal(g, combinations(g.vertices, 2)),
        "vertex_pairs_edges": _vertex_pair_minimal(g, g.sorted_edges()),
    }
    if witness is None:
        return Minimality(True, "every single-edge deletion is non-realizable", readings)
    return Minimality(False, "an edge deletion is realizable", readings, witness)


# Frobenius digraph -------------------------------------------------------------

@dataclass
class DigraphResult:
    digraph: Digraph
    classifications: dict[tuple[int, int], dict] = field(default_factory=dict)
    hall_skips: list[tuple[int, int]] = field(default_factory=list)
    violations: list[tuple[int, int]] = field(default_factory=list)
    disagreements: list[tuple[int, int]] = field(default_factory=list)
    hall_counts: dict[tuple[int, int], int] = field(default_factory=dict)


def frobenius_digraph(G: FiniteGroup, graph: LabeledGraph, retries: int = DEFAULT_HALL_RETRIES,
                      all_halls: bool = False) -> DigraphResult:
    """Orient each complement edge {p, q} of ``graph`` from its Hall {p,q}-subgroup.

    Frobenius with kernel Q gives p -> q, as does 2-Frobenius of type (p,q,p).
    Pairs with no Hall subgroup found are skipped and recorded; "neither"
    classifications are recorded as violations.  With ``all_halls`` every
    Hall subgroup met during the retries is classified and disagreements noted.
    """
    arcs: set[tuple[int, int]] = set()
    res = DigraphResult(Digraph(graph.vertices))
    for p, q in complement(graph).sorted_edges():
        halls = hall_subgroups(G, p, q, retries, first_only=not all_halls)
        res.hall_counts[(p, q)] = len(halls)
        if not halls:
            res.hall_skips.append((p, q))
            continue
        structs = [frobenius_structure(H, p, q) for H in halls]
        s = structs[0]
        res.classifications[(p, q)] = s.to_dict()
        if any(t != s for t in structs[1:]):
            res.disagreements.append((p, q))
        if s.kind == "neither":
            res.violations.append((p, q))
            continue
        arc = s.arc()
        if arc is not None:
            arcs.add(arc)
    res.digraph = Digraph(graph.vertices, frozenset(arcs))
    return res


def longest_directed_path(d: Digraph) -> tuple[int, list[int]]:
    """Length (in arcs) of a longest simple directed path and one such path."""
    best: list[int] = [d.vertices[0]] if d.vertices else []

    def walk(path: list[int], seen: set[int]) -> None:
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        for q in d.successors(path[-1]):
            if q not in seen:
                seen.add(q)
                path.append(q)
                walk(path, seen)
                path.pop()
                seen.discard(q)

    for v in d.vertices:
        walk([v], {v})
    return max(len(best) - 1, 0), best


def directed_two_paths(d: Digraph) -> list[tuple[int, int, int]]:
    out = []
    for r, p in sorted(d.arcs):
        for q in d.successors(p):
            if q != r:
                out.append((r, p, q))
    return out


# export -------------------------------------------------------------------------

def to_dot(graph: LabeledGraph, digraph: Digraph | None = None, name: str = "G") -> str:
    """Solid undirected edges for the graph, dashed arcs for the digraph."""
    lines = ["digraph %s {" % json.dumps(name), "  node [shape=circle];"]
    for v in graph.vertices:
        lines.append('  "%d" [label="%d"];' % (v, v))
    for p, q in graph.sorted_edges():
        lines.append('  "%d" -> "%d" [dir=none, style=solid];' % (p, q))
    if digraph is not None:
        for p, q in sorted(digraph.arcs):
            lines.append('  "%d" -> "%d" [style=dashed];' % (p, q))
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> LabeledGraph:
    with open(path, encoding="utf-8") as fh:
        return LabeledGraph.from_dict(json.load(fh))


def parse_edge_list(text: str) -> LabeledGraph:
    """Inline form ``2-3,3-5`` (isolated vertices as bare numbers, e.g. ``2-3,7``)."""
    verts: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        parts = tok.split("-")
        if len(parts) == 1:
            verts.add(int(parts[0]))
        elif len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
            verts.update((a, b))
            edges.add((a, b))
        else:
            raise ValueError("bad edge token %r" % tok)
    return LabeledGraph(tuple(verts), frozenset(edges))
