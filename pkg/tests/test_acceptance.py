"""Acceptance criteria, one test per criterion, with stated tolerances.

Each test prints a single pass line (visible with -s / -rA) and enforces
its runtime budget. Tolerances are pinned here and nowhere else.
"""

import json
import random
import resource
import time
from fractions import Fraction
from pathlib import Path

import pytest

from kgqual.metrics import (
    build_instance_index,
    ci_kg,
    class_instantiation,
    full_report,
    imi,
    is_defined,
)
from kgqual.ontology import extract_ontology, normalize
from kgqual.oracle import oracle_metrics
from kgqual.profiles import RDF_TYPE, RDFS_CLASS, bundled_profile
from kgqual.report import render_decimal, to_markdown
from kgqual.store import ParseError, TripleStoreBuilder, iri, parse_ntriples
from kgqual.synth import SYNTH_PROFILE, SynthParams, generate_kg, write_fixture

from conftest import DATA_DIR, GENERIC_PROFILE, build_store, domain, ex, subclass

TOLERANCE = Fraction(1, 10**9)


def announce(number: int, name: str, elapsed: float) -> None:
    print(f"[acceptance] criterion {number} ({name}): PASS in {elapsed:.2f}s")


def test_criterion_1_figure1_ci_exact():
    started = time.perf_counter()
    store = parse_ntriples(DATA_DIR / "figure1.nt")
    graph, _ = normalize(extract_ontology(store, GENERIC_PROFILE))
    index = build_instance_index(store, graph, GENERIC_PROFILE)
    person = graph.resolve(store.find_iri(ex("Person")))

    value = class_instantiation(graph, index, person)
    # 0.1 + (0.02 + 0.01 + 0.06)/2 + (0.06 + 0.1 + 0.04)/4, exactly
    expected = (
        Fraction(50, 500)
        + (Fraction(10, 500) + Fraction(5, 500) + Fraction(30, 500)) / 2
        + (Fraction(30, 500) + Fraction(50, 500) + Fraction(20, 500)) / 4
    )
    assert expected == Fraction(39, 200)
    assert value == expected
    rendered = float(render_decimal(value))
    assert abs(rendered - 0.195) <= 1e-12

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    announce(1, "figure-1 CI exact 0.195", elapsed)


def test_criterion_2_flat_root_synthesis_imi_one():
    started = time.perf_counter()
    store = build_store(
        [(iri(ex(f"C{i}")), iri(RDF_TYPE), iri(RDFS_CLASS)) for i in range(40)]
    )
    graph, _ = normalize(extract_ontology(store, bundled_profile("freebase")))
    assert graph.synthesized_root
    value = imi(graph)
    assert value == Fraction(1)

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    announce(2, "flat ontology IMI exactly 1", elapsed)


def test_criterion_3_ipr_endpoints():
    started = time.perf_counter()
    base = [subclass("A", "Top")]
    base += [domain(f"p{i}", "A") for i in range(5)]
    usage = [(iri(ex("e")), iri(ex(f"p{i}")), iri(ex("x"))) for i in range(5)]

    saturated = build_store(base + usage)
    graph, _ = normalize(extract_ontology(saturated, GENERIC_PROFILE))
    index = build_instance_index(saturated, graph, GENERIC_PROFILE)
    from kgqual.metrics import ipr

    assert ipr(graph, index) == Fraction(1)

    starved = build_store(base)
    graph2, _ = normalize(extract_ontology(starved, GENERIC_PROFILE))
    index2 = build_instance_index(starved, graph2, GENERIC_PROFILE)
    assert ipr(graph2, index2) == Fraction(0)

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    announce(3, "IPR saturation 1.0 and starvation 0.0", elapsed)


ORACLE_PRESETS = {
    "tree": dict(
        class_count=30, max_depth=5, multi_parent_probability=0.0,
        entity_count=200, property_count=15, property_per_class_mean=1.5,
        usage_triples_per_entity_mean=2.0,
    ),
    "multi-parent": dict(
        class_count=50, max_depth=6, multi_parent_probability=0.3,
        entity_count=400, property_count=25, property_per_class_mean=2.0,
        usage_triples_per_entity_mean=2.0, planted_cycles=2,
    ),
    "zipf-skewed": dict(
        class_count=40, max_depth=5, multi_parent_probability=0.15,
        entity_count=500, property_count=20, property_per_class_mean=2.0,
        instantiation_skew="zipf", zipf_s=1.5,
        usage_triples_per_entity_mean=2.5, planted_cycles=1,
    ),
}

_REPORT_FIELDS = ("icr", "ipr", "ci", "imi", "spa_mean_count", "spa_ratio_mean", "spi_mean")


def _assert_equivalent(main_report, oracle_report, context: str) -> None:
    for field in _REPORT_FIELDS:
        a = getattr(main_report, field)
        b = getattr(oracle_report, field)
        assert is_defined(a) == is_defined(b), (context, field)
        if is_defined(a):
            assert abs(a - b) <= TOLERANCE, (context, field)
    assert main_report.per_class.keys() == oracle_report.per_class.keys(), context
    for name, left in main_report.per_class.items():
        right = oracle_report.per_class[name]
        assert left.spa_count == right.spa_count, (context, name)
        for attr in ("ci", "spa_ratio", "spi"):
            a = getattr(left, attr)
            b = getattr(right, attr)
            if a is None or b is None:
                assert a is None and b is None, (context, name, attr)
                continue
            assert is_defined(a) == is_defined(b), (context, name, attr)
            if is_defined(a):
                assert abs(a - b) <= TOLERANCE, (context, name, attr)


def test_criterion_4_oracle_equivalence_300_runs():
    started = time.perf_counter()
    for preset_name, preset in ORACLE_PRESETS.items():
        for seed in range(100):
            params = SynthParams(seed=seed, **preset)
            store, graph, _ = generate_kg(params)
            graph, _ = normalize(graph)
            main_report = full_report(store, graph, SYNTH_PROFILE)
            oracle_report = oracle_metrics(store, graph, SYNTH_PROFILE)
            _assert_equivalent(main_report, oracle_report, f"{preset_name}/seed={seed}")

    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    announce(4, "oracle equivalence over 100 seeds x 3 presets", elapsed)


def test_criterion_5_w3c_suite():
    started = time.perf_counter()
    suite = Path(__file__).parent / "data" / "w3c_ntriples"
    manifest = json.loads((suite / "manifest.json").read_text())["tests"]
    matched = 0
    for entry in manifest:
        try:
            parse_ntriples((suite / entry["file"]).read_bytes(), mode="strict")
            verdict = "positive"
        except ParseError:
            verdict = "negative"
        matched += verdict == entry["verdict"]
    rate = matched / len(manifest)
    assert rate >= 0.95, f"match rate {rate:.3f}"

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    announce(5, f"W3C suite verdicts {matched}/{len(manifest)}", elapsed)


def _incomparable_pairs(graph, typed_entities):
    """(entity, class) pairs where the class neither ancestors nor descends
    the entity's existing type, so adding the assertion only adds weight."""
    pairs = []
    classes = sorted(graph.classes)
    for entity, existing in typed_entities:
        for class_id in classes:
            if class_id == existing:
                continue
            if class_id in graph.ancestors(existing):
                continue
            if existing in graph.ancestors(class_id):
                continue
            pairs.append((entity, class_id))
    return pairs


def test_criterion_6_invariant_suite():
    started = time.perf_counter()
    rng = random.Random(20240808)
    seeds_checked = 0
    for seed in range(55):
        preset = ("tree", "multi-parent", "zipf-skewed")[seed % 3]
        params = SynthParams(seed=seed, **ORACLE_PRESETS[preset])
        store, graph, _ = generate_kg(params)
        graph, _ = normalize(graph)
        index = build_instance_index(store, graph, SYNTH_PROFILE)
        report = full_report(store, graph, SYNTH_PROFILE)

        # Ratio ranges.
        for value in (report.icr, report.ipr, report.spa_ratio_mean, report.spi_mean):
            if is_defined(value):
                assert 0 <= value <= 1
        for entry in report.per_class.values():
            if entry.spa_ratio is not None and is_defined(entry.spa_ratio):
                assert 0 <= entry.spa_ratio <= 1
            if entry.spi is not None and is_defined(entry.spi):
                assert 0 <= entry.spi <= 1

        # IMI = 1 iff the non-root hierarchy is a tree.
        is_tree = all(
            len(graph.parents.get(c, ())) == 1
            for c in graph.classes
            if c != graph.root
        )
        assert (imi(graph) == 1) == is_tree

        # Single-typed generator data keeps the root CI at most 1.
        value = ci_kg(graph, index)
        assert is_defined(value) and value <= 1

        # CI monotonicity: an added incomparable type assertion never
        # lowers any class's CI (total entity count is unchanged).
        type_pid = store.find_iri(RDF_TYPE)
        typed_entities = [
            (s, graph.resolve(o)) for s, _, o in store.with_predicate(type_pid)
        ]
        pairs = _incomparable_pairs(graph, typed_entities[:20])
        if pairs:
            entity, extra_class = pairs[rng.randrange(len(pairs))]
            builder = TripleStoreBuilder()
            for s, p, o in store.triples():
                builder.add(store.term(s), store.term(p), store.term(o))
            builder.add(store.term(entity), iri(RDF_TYPE), iri(graph.name(extra_class)))
            grown = builder.finish()
            grown_index = build_instance_index(grown, graph, SYNTH_PROFILE)
            assert grown_index.total_entities == index.total_entities
            for class_id in graph.classes:
                before = class_instantiation(graph, index, class_id)
                after = class_instantiation(graph, grown_index, class_id)
                assert after >= before
        seeds_checked += 1

    assert seeds_checked >= 50
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    announce(6, f"invariant suite over {seeds_checked} seeds", elapsed)


@pytest.fixture(scope="module")
def large_fixture(tmp_path_factory):
    path = tmp_path_factory.mktemp("scale") / "large.nt"
    params = SynthParams(
        class_count=1000,
        max_depth=8,
        multi_parent_probability=0.1,
        entity_count=260_000,
        property_count=400,
        property_per_class_mean=2.5,
        usage_triples_per_entity_mean=3.0,
        seed=1,
    )
    write_fixture(params, path)
    return path


def test_criterion_7_scale_one_million_triples(large_fixture):
    started = time.perf_counter()
    store = parse_ntriples(large_fixture)
    assert store.triple_count >= 1_000_000
    graph, _ = normalize(extract_ontology(store, SYNTH_PROFILE))
    assert len(graph.classes) >= 1000
    report = full_report(store, graph, SYNTH_PROFILE, kg_label="scale")
    assert is_defined(report.ci)

    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    peak_gib = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / (1024**2)
    assert peak_gib < 2.0, f"peak RSS {peak_gib:.2f} GiB"
    announce(
        7,
        f"scale: {store.triple_count} triples in {elapsed:.1f}s, peak {peak_gib:.2f} GiB",
        elapsed,
    )


def test_criterion_8_bundled_demo_end_to_end():
    started = time.perf_counter()
    fixture = DATA_DIR / "demo_10k.nt.gz"
    ledger = json.loads((DATA_DIR / "demo_10k.ledger.json").read_text())

    store = parse_ntriples(fixture)
    assert store.triple_count == ledger["totals"]["triples"]
    graph, _ = normalize(extract_ontology(store, SYNTH_PROFILE))
    report = full_report(store, graph, SYNTH_PROFILE, kg_label="demo")

    assert report.stats["instances"] == ledger["totals"]["entities"]
    # Only properties with at least one domain assertion are extractable
    # from the serialized triples.
    declared = set().union(*ledger["domain_properties"].values())
    assert report.stats["properties"] == len(declared)
    merged_away = sum(len(cycle) - 1 for cycle in ledger["cycles"])
    assert report.stats["classes"] == ledger["totals"]["classes"] - merged_away
    assert report.provenance["cycle_count"] == len(ledger["cycles"])
    for field in _REPORT_FIELDS:
        assert is_defined(getattr(report, field)), field

    table = to_markdown(report)
    assert table.splitlines()[0] == "| kg | ICR | IPR | CI | IMI | SPA | SPI |"

    elapsed = time.perf_counter() - started
    announce(8, "bundled 10k-triple demo end to end", elapsed)
