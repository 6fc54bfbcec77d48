"""Structural checks over a corpus of constructed groups, and the report they produce.

Every check yields a record ``{"id", "status", "enforced", "detail"}`` with
status ``pass``, ``fail`` or ``skipped``.  Only enforced failures (and build
errors) make a report unclean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .cache import TableCache
from .chartable import CharacterTable
from .constructors import FIVE_CYCLE_PRIMES, build, digest, load
from .constructors.spec import GroupSpec
from .errors import CodegreeError, LimitExceeded, NotRealizableInput
from .graphs import (
    DigraphResult,
    LabeledGraph,
    chromatic_at_most,
    chromatic_number,
    codegree_graph,
    complement,
    directed_two_paths,
    find_triangle,
    frobenius_digraph,
    is_minimal_codegree_graph,
    is_realizable_codegree,
    longest_directed_path,
    prime_graph,
)
from .groups import (
    DEFAULT_HALL_RETRIES,
    DEFAULT_LIMIT,
    FiniteGroup,
    classify_frobenius,
    closure,
    component_subgroup,
    fitting_subgroup,
    is_frobenius,
    is_solvable,
    is_two_frobenius,
    sylow_subgroup,
)


@dataclass
class Analysis:
    name: str
    digest: str
    group: FiniteGroup
    table: CharacterTable
    gamma: LabeledGraph
    gamma_e: LabeledGraph
    digraph: DigraphResult
    solvable: bool
    fitting_order: int

    @property
    def codegrees(self) -> tuple[int, ...]:
        return self.table.codegrees


def analyze(spec: GroupSpec, name: str, cache: TableCache, limit: int = DEFAULT_LIMIT,
            retries: int = DEFAULT_HALL_RETRIES) -> Analysis:
    d = digest(spec)
    G = build(spec, limit=limit)
    table = cache.table(G, d)
    gamma = codegree_graph(table.codegrees)
    return Analysis(
        name=name, digest=d, group=G, table=table, gamma=gamma, gamma_e=prime_graph(G),
        digraph=frobenius_digraph(G, gamma, retries, all_halls=True),
        solvable=is_solvable(G), fitting_order=fitting_subgroup(G).order,
    )


def _pairs(d: dict) -> dict:
    return {"%d,%d" % k: v for k, v in sorted(d.items())}


def analysis_document(an: Analysis) -> dict:
    G, T = an.group, an.table
    length, path = longest_directed_path(an.digraph.digraph)
    return {
        "name": an.name,
        "digest": an.digest,
        "order": G.order,
        "class_count": T.k,
        "exponent": T.exponent,
        "dixon_prime": T.p,
        "solvable": an.solvable,
        "primes": list(G.primes),
        "fitting_order": an.fitting_order,
        "degrees": T.degrees,
        "codegrees": list(T.codegrees),
        "prime_graph": an.gamma_e.to_dict(),
        "codegree_graph": an.gamma.to_dict(),
        "graphs_equal": an.gamma == an.gamma_e,
        "digraph": an.digraph.digraph.to_dict(),
        "longest_directed_path": {"length": length, "path": path},
        "hall": {
            "classifications": _pairs(an.digraph.classifications),
            "subgroups_found": _pairs(an.digraph.hall_counts),
            "not_found": [list(p) for p in an.digraph.hall_skips],
        },
    }


# individual checks -------------------------------------------------------------

def _check(cid: str, ok: bool | None, enforced: bool = True, **detail) -> dict:
    status = "skipped" if ok is None else ("pass" if ok else "fail")
    return {"id": cid, "status": status, "enforced": enforced, "detail": detail}


def check_group_invariants(an: Analysis) -> list[dict]:
    G, T, gamma, ge = an.group, an.table, an.gamma, an.gamma_e
    out = []

    missing = sorted(set(ge.edges) - set(gamma.edges))
    same_vertices = ge.vertices == gamma.vertices
    out.append(_check("prime_graph_subgraph", same_vertices and not missing,
                      strict=gamma != ge, witness=[list(e) for e in missing]))

    comp = complement(gamma)
    tri = find_triangle(comp)
    out.append(_check("complement_triangle_free", tri is None, witness=list(tri) if tri else None))
    ok3, coloring = chromatic_at_most(comp, 3)
    out.append(_check("complement_3_colorable", ok3,
                      witness={str(k): v for k, v in coloring.items()} if coloring else None))

    length, path = longest_directed_path(an.digraph.digraph)
    out.append(_check("no_directed_3_path", length <= 2, longest=length, witness=path,
                      hall_not_found=[list(p) for p in an.digraph.hall_skips]))

    checked, no_normal, bad = [], [], []
    for p in G.primes:
        if sylow_subgroup(G, p).normal:
            checked.append(p)
            if set(gamma.neighbors(p)) != set(ge.neighbors(p)):
                bad.append(p)
        else:
            no_normal.append(p)
    out.append(_check("normal_sylow_adjacency", not bad, primes_checked=checked,
                      primes_without_normal_sylow=no_normal, witness=bad))

    if an.fitting_order == 1:
        out.append(_check("trivial_fitting_complete", gamma.is_complete(), vacuous=False))
    else:
        out.append(_check("trivial_fitting_complete", True, vacuous=True, fitting_order=an.fitting_order))

    if an.digraph.hall_skips:
        out.append(_check("gallai_roy", None, reason="HallNotFound",
                          pairs=[list(p) for p in an.digraph.hall_skips]))
    else:
        chi = chromatic_number(comp)
        out.append(_check("gallai_roy", chi <= length + 1, chromatic_number=chi, longest_path=length))

    out.append(_check("hall_structure", not an.digraph.violations,
                      witness=[list(p) for p in an.digraph.violations]))
    out.append(_check("hall_well_defined", not an.digraph.disagreements,
                      witness=[list(p) for p in an.digraph.disagreements],
                      pairs_with_several_halls=[list(k) for k, n in sorted(an.digraph.hall_counts.items()) if n > 1]))
    out.append(_check("realizable_self_consistency", is_realizable_codegree(gamma).realizable))
    out.append(_check("triangle_free_implies_solvable",
                      an.solvable or find_triangle(gamma) is not None, solvable=an.solvable))
    if an.solvable:
        out.append(_check("solvable_radical_containment", True, vacuous=True, reason="solvable group"))
    else:
        out.append(_check("solvable_radical_containment", None, enforced=False,
                          reason="solvable radical not computed for non-solvable groups"))

    degree_sum = sum(d * d for d in T.degrees)
    out.append(_check("degree_sum", degree_sum == G.order, sum=degree_sum))
    out.append(_check("class_count", T.k == G.conjugacy.k, characters=T.k, classes=G.conjugacy.k))
    out.append(_check("first_orthogonality", T.first_orthogonality(), prime=T.p))
    bad_cod = [i for i, ch in enumerate(T.characters)
               if (G.order // ch.kernel_order) % ch.codegree or G.order % ch.kernel_order]
    out.append(_check("codegree_divides_index", not bad_cod, witness=bad_cod))
    return out


def _c5(g: LabeledGraph) -> bool:
    return len(g.vertices) == 5 and len(g.edges) == 5 and all(len(g.neighbors(v)) == 2 for v in g.vertices) \
        and g.is_connected()


def check_five_cycle_classification(an: Analysis) -> dict:
    G = an.group
    if len(G.primes) != 5:
        return _check("five_cycle_classification", None, reason="|pi(G)| = %d" % len(G.primes))
    if G.info.get("family") != "five_cycle" or not all(k in G.component_names for k in "ABCDE"):
        return _check("five_cycle_classification", None, reason="MetadataMissing")
    comp = {k: component_subgroup(G, k) for k in "ABCDE"}
    lab = FIVE_CYCLE_PRIMES
    a, b, c, d, e = (lab[k] for k in "ABCDE")
    CE = closure(G, comp["C"].generators + comp["E"].generators)
    BC = closure(G, comp["B"].generators + comp["C"].generators)
    ABC = closure(G, comp["A"].generators + BC.generators)
    DCE = closure(G, comp["D"].generators + CE.generators)
    AE = closure(G, comp["A"].generators + comp["E"].generators)
    abc = classify_frobenius(ABC)
    expected_arcs = sorted([(a, b), (a, e), (d, e), (d, c), (b, c)])
    clauses = {
        "codegree_graph_is_c5": _c5(an.gamma),
        "prime_graph_is_c5": _c5(an.gamma_e),
        "graphs_equal": an.gamma == an.gamma_e,
        "c5_edges": an.gamma.sorted_edges() == sorted(
            tuple(sorted(x)) for x in [(a, c), (c, e), (e, b), (b, d), (d, a)]),
        "fitting_is_CxE": fitting_subgroup(G).same_as(CE),
        "ABC_two_frobenius_chain": is_two_frobenius(ABC, comp["C"], BC, comp["B"], comp["A"])
        and abc.kind == "two_frobenius" and abc.type == (c, b, a),
        "DCE_frobenius_kernel_CxE": is_frobenius(DCE, CE, comp["D"]),
        "AE_frobenius_kernel_E": is_frobenius(AE, comp["E"], comp["A"]),
        "digraph_orientation": sorted(an.digraph.digraph.arcs) == expected_arcs,
    }
    return _check("five_cycle_classification", all(clauses.values()), clauses=clauses,
                  labels=dict(lab), chain="C < BC < ABC", ABC_type=abc.to_dict())


def check_two_path_triangle(an: Analysis) -> dict:
    G = an.group
    if G.info.get("family") != "qian":
        return _check("two_path_triangle", None, reason="not in the 2-path/triangle family")
    q, r = int(G.info["q"]), int(G.info["r"])
    path = LabeledGraph((2, q, r), frozenset({(2, r), (q, r)}))
    tri = LabeledGraph((2, q, r), frozenset({(2, q), (2, r), (q, r)}))
    witness = next((i for i, ch in enumerate(an.table.characters) if ch.codegree % (2 * q) == 0), None)
    ok = an.gamma_e == path and an.gamma == tri and witness is not None and an.gamma != an.gamma_e
    detail = {"q": q, "r": r, "witness_character": witness}
    if witness is not None:
        ch = an.table.characters[witness]
        detail.update(witness_degree=ch.degree, witness_codegree=ch.codegree, witness_kernel_order=ch.kernel_order)
    return _check("two_path_triangle", ok, **detail)


def check_directed_2path_endpoints(an: Analysis) -> dict:
    G = an.group
    paths = directed_two_paths(an.digraph.digraph)
    if not paths:
        return _check("directed_2path_endpoints", None, reason="no directed 2-path")
    try:
        minimal = is_minimal_codegree_graph(an.gamma).minimal
    except NotRealizableInput:
        minimal = False
    observations = []
    ok = True
    for r, p, q in paths:
        normal = sylow_subgroup(G, q).normal
        observations.append({
            "path": [r, p, q],
            "sylow_endpoint_normal": normal,
            "middle_sylow_order": sylow_subgroup(G, p).order,
            "middle_sylow_exceeds_prime": sylow_subgroup(G, p).order > p,
        })
        if minimal and not normal:
            ok = False
    if not minimal:
        return _check("directed_2path_endpoints", None, enforced=False,
                      reason="codegree graph is not minimal", observations=observations)
    return _check("directed_2path_endpoints", ok, observations=observations,
                  middle_sylow_rule="observed only")


def run_checks(an: Analysis) -> list[dict]:
    return check_group_invariants(an) + [
        check_five_cycle_classification(an),
        check_two_path_triangle(an),
        check_directed_2path_endpoints(an),
    ]


# corpus ---------------------------------------------------------------------------

def default_corpus_dir() -> Path:
    return Path(__file__).parent / "data" / "corpus"


def corpus_specs(directory: str | Path) -> list[tuple[str, GroupSpec | CodegreeError]]:
    """(name, spec or parse error) for every ``*.json`` in the directory, by file name."""
    out: list[tuple[str, GroupSpec | CodegreeError]] = []
    for path in sorted(Path(directory).glob("*.json")):
        try:
            out.append((path.stem, load(str(path))))
        except CodegreeError as exc:
            out.append((path.stem, exc))
    return out


def _error_entry(name: str, d: str | None, exc: Exception) -> dict:
    entry = {"name": name, "digest": d, "status": "error",
             "error": {"type": type(exc).__name__, "message": str(exc)}}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        entry["error"]["witness"] = list(witness)
    return entry


def run_corpus(specs: Iterable[tuple[str, GroupSpec | CodegreeError]], cache: TableCache,
               limit: int = DEFAULT_LIMIT, retries: int = DEFAULT_HALL_RETRIES) -> dict:
    entries = []
    for name, spec in specs:
        if isinstance(spec, CodegreeError):
            entries.append(_error_entry(name, None, spec))
            continue
        d = digest(spec)
        try:
            an = analyze(spec, name, cache, limit, retries)
        except (CodegreeError, LimitExceeded) as exc:
            entries.append(_error_entry(name, d, exc))
            continue
        checks = run_checks(an)
        failed = [c["id"] for c in checks if c["enforced"] and c["status"] == "fail"]
        entry = analysis_document(an)
        entry.update(checks=checks, status="fail" if failed else "ok", failed_checks=failed)
        entries.append(entry)
    entries.sort(key=lambda e: (e["digest"] or "", e["name"]))
    solvable_skips = sum(1 for e in entries if e.get("solvable")
                         for c in e["checks"] if c["status"] == "skipped" and c["id"] in CORE_CHECKS)
    summary = {
        "groups": len(entries),
        "errors": sum(e["status"] == "error" for e in entries),
        "failures": sum(e["status"] == "fail" for e in entries),
        "core_skips_in_solvable_groups": solvable_skips,
    }
    summary["clean"] = summary["errors"] == 0 and summary["failures"] == 0
    return {"entries": entries, "summary": summary, "stats": dict(sorted(cache.stats.items()))}


CORE_CHECKS = (
    "prime_graph_subgraph", "complement_triangle_free", "complement_3_colorable", "no_directed_3_path",
    "normal_sylow_adjacency", "degree_sum", "class_count", "first_orthogonality",
)


def report_text(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"
