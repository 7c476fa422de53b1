import csv
import io
import json

import pytest

import modcover.harness as harness
from modcover.dsl import parse_module, parse_ring
from modcover.harness import (
    DEFAULT_CHECKS,
    InstanceSpec,
    check_localization,
    check_sigma_agreement,
    corpus_generate,
    hdim_pairs_from_specs,
    reports_to_csv,
    reports_to_json,
    run_hdim_pairs,
    run_suite,
)
from modcover.modules import is_cyclic
from modcover.rings import maximal_ideals


# -- corpus ---------------------------------------------------------------------


def test_corpus_is_deterministic():
    a = corpus_generate(seed=1, count=30)
    b = corpus_generate(seed=1, count=30)
    assert a == b


def test_corpus_seeds_differ():
    assert corpus_generate(seed=1, count=10) != corpus_generate(seed=2, count=10)


def test_corpus_count_zero():
    assert corpus_generate(seed=1, count=0) == []


def test_corpus_respects_guards_and_quotas():
    specs = corpus_generate(seed=3, count=40, max_ring=64, max_module=512)
    assert len(specs) == 40
    cyclic = 0
    multi = 0
    for spec in specs:
        m = parse_module(spec.module_expr)
        assert 2 <= m.size <= 512
        assert m.ring.size <= 64
        if is_cyclic(m)[0]:
            cyclic += 1
        if len(maximal_ideals(parse_ring(spec.ring_expr))) >= 2:
            multi += 1
    assert cyclic >= 8  # at least 20%
    assert multi >= 8


def test_corpus_expressions_parse():
    for spec in corpus_generate(seed=5, count=15):
        parse_ring(spec.ring_expr)
        parse_module(spec.module_expr)
        assert spec.provenance == "GENERATED"


# -- checks ---------------------------------------------------------------------


def curated(expr, ring_expr=None):
    ring_expr = ring_expr or expr.split("over")[-1].strip()
    return InstanceSpec(ring_expr, expr, 0, "CURATED")


def test_check_sigma_agreement_passes_on_known_instances():
    for expr in [
        "free 2 over Z/2",
        "free 1 over Z/6",
        "module over Z/4: gens=2; rels=[(2,0)]",
    ]:
        spec = curated(expr)
        result = check_sigma_agreement(spec, parse_module(expr))
        assert result.status == "PASS", result.details


def test_check_localization_pass_and_skip_reasons():
    spec = curated("Z/2 (+) Z/2 (+) Z/3 over Z/6")
    assert check_localization(spec, parse_module(spec.module_expr)).status == "PASS"

    cyclic = curated("free 1 over Z/6")
    r = check_localization(cyclic, parse_module(cyclic.module_expr))
    assert r.status == "SKIPPED" and "S empty" in r.details["reason"]

    everything = curated("free 2 over Z/2")
    r = check_localization(everything, parse_module(everything.module_expr))
    assert r.status == "SKIPPED" and "mSpec" in r.details["reason"]


def test_failure_payload_carries_repro_expressions(monkeypatch):
    # force a formula/exact mismatch to exercise the FAIL path
    from modcover.covering import SigmaPrediction

    monkeypatch.setattr(
        harness, "sigma_formula", lambda m: SigmaPrediction(99, None, 98)
    )
    spec = curated("free 2 over Z/2")
    result = check_sigma_agreement(spec, parse_module(spec.module_expr))
    assert result.status == "FAIL"
    assert result.details["module"] == "free 2 over Z/2"
    assert result.details["ring"] == "Z/2"
    assert result.details["formula"] == 99 and result.details["exact"] == 3
    # the payload round-trips through the parser
    assert parse_module(result.details["module"]).size == 4


def test_hdim_pair_check():
    specs = [
        curated("free 1 over Z/6"),
        curated("Z/2 (+) Z/3 over Z/6"),
        curated("free 2 over Z/2"),
        curated("module over Z/2: gens=2; rels=[(1,0)]"),
    ]
    pairs = hdim_pairs_from_specs(specs)
    assert all(a.ring_expr == b.ring_expr for a, b in pairs)
    results = run_hdim_pairs(pairs)
    assert results and all(r.status == "PASS" for r in results)


# -- suite ----------------------------------------------------------------------


def test_run_suite_empty():
    reports, summary = run_suite([])
    assert reports == []
    assert summary["instances"] == 0
    assert summary["FAIL"] == 0


def test_run_suite_full_pipeline_zero_failures():
    specs = corpus_generate(seed=9, count=12)
    reports, summary = run_suite(specs, DEFAULT_CHECKS)
    assert summary["FAIL"] == 0
    assert summary["instances"] == 12
    for r in reports:
        for c in r.results:
            assert c.status in ("PASS", "SKIPPED")
            if c.status == "SKIPPED":
                assert "reason" in c.details


def test_run_suite_parallelism_is_invisible():
    specs = corpus_generate(seed=4, count=10)
    serial = run_suite(specs, ("sigma-agreement", "radical-agreement"), parallelism=1)
    parallel = run_suite(specs, ("sigma-agreement", "radical-agreement"), parallelism=4)
    strip = lambda reports: [
        (r.instance, [(c.check, c.status, c.details) for c in r.results])
        for r in reports
    ]
    assert strip(serial[0]) == strip(parallel[0])
    assert serial[1]["PASS"] == parallel[1]["PASS"]


def test_run_suite_rejects_unknown_check():
    with pytest.raises(ValueError):
        run_suite([], ("bogus",))


# -- serialization -----------------------------------------------------------------


def test_json_report_schema():
    specs = corpus_generate(seed=2, count=4)
    reports, summary = run_suite(specs, ("sigma-agreement",))
    payload = json.loads(reports_to_json(reports, summary))
    assert payload["summary"]["FAIL"] == 0
    for entry in payload["reports"]:
        assert {"ring", "module", "seed", "provenance"} <= entry["instance"].keys()
        for check in entry["checks"]:
            assert {"check", "status", "details", "ms"} <= check.keys()


def test_csv_report_one_row_per_check():
    specs = corpus_generate(seed=2, count=4)
    reports, _ = run_suite(specs, ("sigma-agreement", "radical-agreement"))
    rows = list(csv.reader(io.StringIO(reports_to_csv(reports))))
    assert rows[0] == ["ring", "module", "seed", "check", "status", "details", "ms"]
    assert len(rows) == 1 + 4 * 2
