from __future__ import annotations

import json
import shutil
from dataclasses import replace

import pytest

from codegree.cache import TableCache
from codegree.checks import (
    CORE_CHECKS,
    analyze,
    check_directed_2path_endpoints,
    check_five_cycle_classification,
    check_group_invariants,
    check_two_path_triangle,
    corpus_specs,
    default_corpus_dir,
    run_corpus,
)
from codegree.constructors import resolve
from codegree.graphs import Digraph, DigraphResult, LabeledGraph

CORPUS = ["a4", "a5", "d8", "f21", "f42", "five-cycle", "q8", "qian-3-7", "s3", "s4", "s5", "z6"]


def checks_by_id(entry):
    return {c["id"]: c for c in entry["checks"]}


def small(alias):
    return analyze(resolve(alias), alias, TableCache(None))


def test_corpus_contents():
    assert [name for name, _ in corpus_specs(default_corpus_dir())] == CORPUS


def test_corpus_clean(corpus_cold):
    report = corpus_cold[0]
    assert report["summary"] == {"groups": 12, "errors": 0, "failures": 0,
                                 "core_skips_in_solvable_groups": 0, "clean": True}
    digests = [e["digest"] for e in report["entries"]]
    assert digests == sorted(digests)


@pytest.mark.parametrize("name", CORPUS)
def test_every_enforced_check_passes(corpus_entries, name):
    entry = corpus_entries[name]
    assert entry["status"] == "ok"
    for c in entry["checks"]:
        if c["enforced"]:
            assert c["status"] in ("pass", "skipped"), c
        if entry["solvable"] and c["id"] in CORE_CHECKS:
            assert c["status"] == "pass", c


def test_s5_prime_graph_strictly_smaller(corpus_entries):
    e = corpus_entries["s5"]
    assert e["prime_graph"]["edges"] == [[2, 3]]
    assert e["codegree_graph"]["edges"] == [[2, 3], [2, 5], [3, 5]]
    assert not e["graphs_equal"]
    assert checks_by_id(e)["prime_graph_subgraph"]["status"] == "pass"


def test_a5_trivial_fitting_complete(corpus_entries):
    c = checks_by_id(corpus_entries["a5"])["trivial_fitting_complete"]
    assert c["status"] == "pass" and not c["detail"].get("vacuous")


def test_five_cycle_entry(corpus_entries):
    e = corpus_entries["five-cycle"]
    assert e["order"] == 201810 and e["fitting_order"] == 31 * 31 * 7
    assert e["graphs_equal"]
    assert e["digraph"]["arcs"] == [[2, 5], [2, 7], [3, 7], [3, 31], [5, 31]]
    cl = checks_by_id(e)["five_cycle_classification"]
    assert cl["status"] == "pass" and all(cl["detail"]["clauses"].values())
    assert cl["detail"]["chain"] == "C < BC < ABC"
    normal = checks_by_id(e)["normal_sylow_adjacency"]
    assert normal["status"] == "pass"
    assert normal["detail"]["primes_checked"] == [7, 31]
    ep = checks_by_id(e)["directed_2path_endpoints"]
    assert ep["status"] == "pass" and ep["enforced"]
    assert [o["path"] for o in ep["detail"]["observations"]] == [[2, 5, 31]]
    assert all(o["sylow_endpoint_normal"] for o in ep["detail"]["observations"])


def test_qian_entry(corpus_entries):
    e = corpus_entries["qian-3-7"]
    assert e["order"] == 86436
    c = checks_by_id(e)["two_path_triangle"]
    assert c["status"] == "pass" and c["detail"]["witness_codegree"] % 6 == 0
    assert checks_by_id(e)["five_cycle_classification"]["status"] == "skipped"


def test_family_checks_skip_elsewhere():
    an = small("s4")
    assert check_five_cycle_classification(an)["status"] == "skipped"
    assert check_two_path_triangle(an)["status"] == "skipped"
    ep = check_directed_2path_endpoints(an)
    assert ep["status"] == "skipped"


def test_directed_2path_not_applicable():
    ep = check_directed_2path_endpoints(small("f42"))
    assert ep["status"] == "skipped" and ep["detail"]["reason"] == "no directed 2-path"


def test_directed_2path_not_enforced_when_not_minimal():
    an = small("s4")
    # disconnected realizable graph carrying a 2-path in its orientation
    an = replace(an, gamma=LabeledGraph((2, 3, 5), frozenset({(2, 5)})),
                 digraph=DigraphResult(Digraph((2, 3, 5), frozenset({(2, 3), (3, 5)}))))
    ep = check_directed_2path_endpoints(an)
    assert ep["status"] == "skipped" and not ep["enforced"]
    assert ep["detail"]["observations"][0]["path"] == [2, 3, 5]


def test_invariant_ids_and_status():
    checks = {c["id"]: c for c in check_group_invariants(small("s4"))}
    for cid in CORE_CHECKS:
        assert checks[cid]["status"] == "pass"
    assert checks["trivial_fitting_complete"]["detail"].get("vacuous") is True


def test_empty_corpus(tmp_path):
    report = run_corpus(corpus_specs(tmp_path), TableCache(None))
    assert report["entries"] == [] and report["summary"]["clean"]


def test_limit_exceeded_entry_isolated(tmp_path):
    for name in ("s3", "s4"):
        shutil.copy(default_corpus_dir() / (name + ".json"), tmp_path)
    (tmp_path / "big.json").write_text(json.dumps({"kind": "symmetric", "d": 9}))
    report = run_corpus(corpus_specs(tmp_path), TableCache(None), limit=100_000)
    by = {e["name"]: e for e in report["entries"]}
    assert by["big"]["status"] == "error" and by["big"]["error"]["type"] == "LimitExceeded"
    assert by["s3"]["status"] == by["s4"]["status"] == "ok"
    assert not report["summary"]["clean"]


def test_broken_frobenius_entry(tmp_path):
    broken = {"kind": "frobenius", "kernel": {"kind": "elementary_abelian", "p": 3, "k": 2},
              "complement": {"kind": "cyclic", "n": 2},
              "action": {"kind": "matrix", "prime": 3, "dim": 2, "matrices": [[[0, 1], [1, 0]]]}}
    (tmp_path / "broken.json").write_text(json.dumps(broken))
    report = run_corpus(corpus_specs(tmp_path), TableCache(None))
    e = report["entries"][0]
    assert e["status"] == "error" and e["error"]["type"] == "NotFixedPointFree"
    assert len(e["error"]["witness"]) == 2


def test_malformed_spec_entry(tmp_path):
    (tmp_path / "bad.json").write_text('{"kind": "cyclic", "n": -1}')
    report = run_corpus(corpus_specs(tmp_path), TableCache(None))
    e = report["entries"][0]
    assert e["status"] == "error" and e["error"]["type"] == "SpecError"
