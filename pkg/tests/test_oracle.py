"""Oracle equivalence on targeted fixtures (the bulk runs in acceptance)."""

from fractions import Fraction

import pytest

from kgqual.metrics import UNDEFINED, full_report, is_defined
from kgqual.ontology import extract_ontology, normalize
from kgqual.oracle import OracleGuardError, oracle_metrics
from kgqual.store import TripleStoreBuilder, parse_ntriples
from kgqual.synth import SYNTH_PROFILE, SynthParams, generate_kg

from conftest import DATA_DIR, GENERIC_PROFILE


def assert_reports_match(main, reference):
    for field in ("icr", "ipr", "ci", "imi", "spa_mean_count", "spa_ratio_mean", "spi_mean"):
        a = getattr(main, field)
        b = getattr(reference, field)
        assert is_defined(a) == is_defined(b), field
        if is_defined(a):
            assert abs(a - b) <= Fraction(1, 10**9), field
    assert main.per_class.keys() == reference.per_class.keys()
    for name in main.per_class:
        left = main.per_class[name]
        right = reference.per_class[name]
        for attr in ("ci", "spa_ratio", "spi"):
            a = getattr(left, attr)
            b = getattr(right, attr)
            if a is None or b is None:
                assert a is None and b is None, (name, attr)
                continue
            assert is_defined(a) == is_defined(b), (name, attr)
            if is_defined(a):
                assert abs(a - b) <= Fraction(1, 10**9), (name, attr)
        assert left.spa_count == right.spa_count, name


def test_figure1_fixture_oracle():
    store = parse_ntriples(DATA_DIR / "figure1.nt")
    graph, _ = normalize(extract_ontology(store, GENERIC_PROFILE))
    main = full_report(store, graph, GENERIC_PROFILE)
    reference = oracle_metrics(store, graph, GENERIC_PROFILE)
    assert_reports_match(main, reference)
    person = "http://example.org/kg#Person"
    assert reference.per_class[person].ci == Fraction(39, 200)


def test_empty_store_same_markers():
    ontology_store = parse_ntriples(
        b"<urn:c:A> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <urn:c:Top> .\n"
    )
    graph, _ = normalize(extract_ontology(ontology_store, GENERIC_PROFILE))
    empty = TripleStoreBuilder().finish()
    main = full_report(empty, graph, GENERIC_PROFILE)
    reference = oracle_metrics(empty, graph, GENERIC_PROFILE)
    for field in ("ci", "spi_mean", "ipr"):
        assert getattr(main, field) is getattr(reference, field) is UNDEFINED or (
            getattr(main, field) == getattr(reference, field)
        )
    assert_reports_match(main, reference)


def test_oracle_on_cyclic_multiparent_fixture():
    params = SynthParams(
        class_count=40,
        entity_count=350,
        property_count=20,
        multi_parent_probability=0.35,
        planted_cycles=3,
        instantiation_skew="zipf",
        seed=123,
    )
    store, graph, _ = generate_kg(params)
    graph, _ = normalize(graph)
    assert_reports_match(
        full_report(store, graph, SYNTH_PROFILE),
        oracle_metrics(store, graph, SYNTH_PROFILE),
    )


def test_oracle_on_multityped_entities():
    from kgqual.profiles import RDF_TYPE
    from kgqual.store import iri

    from conftest import build_store, domain, ex, subclass, typed

    triples = [
        subclass("Artist", "Person"),
        subclass("Musician", "Artist"),
        subclass("Scientist", "Person"),
        domain("instrument", "Musician"),
        domain("field", "Scientist"),
        # ancestor + descendant asserted together: direct of Musician only
        typed("ariana", "Artist"),
        typed("ariana", "Musician"),
        # incomparable classes: direct of both
        typed("brian", "Musician"),
        typed("brian", "Scientist"),
        (iri(ex("brian")), iri(ex("instrument")), iri(ex("guitar"))),
        (iri(ex("brian")), iri(ex("field")), iri(ex("astrophysics"))),
        # plain single type plus an unknown class assertion
        typed("carol", "Person"),
        typed("carol", "Mystery"),
    ]
    store = build_store(triples)
    graph, _ = normalize(extract_ontology(store, GENERIC_PROFILE))
    main = full_report(store, graph, GENERIC_PROFILE)
    reference = oracle_metrics(store, graph, GENERIC_PROFILE)
    assert_reports_match(main, reference)
    musician = ex("Musician")
    assert main.per_class[musician].spi == reference.per_class[musician].spi


# Randomized cross-check: arbitrary hierarchies (cycles, self-loops,
# multi-typing, unknown classes, undeclared predicates) must agree with
# the oracle after normalization.

from hypothesis import given, settings
from hypothesis import strategies as st

from kgqual.ontology import OntologyGraph
from kgqual.profiles import RDF_TYPE
from kgqual.store import TripleStoreBuilder, iri


@st.composite
def _chaotic_kg(draw):
    n_classes = draw(st.integers(min_value=2, max_value=7))
    edges = draw(
        st.lists(
            st.tuples(
                st.integers(0, n_classes - 1), st.integers(0, n_classes - 1)
            ),
            max_size=12,
        )
    )
    n_props = draw(st.integers(min_value=0, max_value=4))
    domains = draw(
        st.lists(
            st.tuples(st.integers(0, max(n_props - 1, 0)), st.integers(0, n_classes - 1)),
            max_size=8,
        )
    ) if n_props else []
    entities = draw(
        st.lists(
            st.tuples(
                st.lists(st.integers(-1, n_classes - 1), min_size=1, max_size=3),
                st.lists(st.integers(0, n_props), max_size=4),
            ),
            max_size=10,
        )
    )
    return n_classes, edges, n_props, domains, entities


@settings(max_examples=120, deadline=None)
@given(_chaotic_kg())
def test_random_graphs_match_oracle(case):
    n_classes, edges, n_props, domains, entities = case
    builder = TripleStoreBuilder()
    class_ids = [builder.intern(iri(f"urn:c:{i}")) for i in range(n_classes)]
    prop_ids = [builder.intern(iri(f"urn:p:{i}")) for i in range(n_props)]
    for index, (types, usage) in enumerate(entities):
        entity = iri(f"urn:e:{index}")
        for t in types:
            target = iri("urn:c:unknown") if t < 0 else iri(f"urn:c:{t}")
            builder.add(entity, iri(RDF_TYPE), target)
        for u in usage:
            predicate = iri("urn:q:undeclared") if u >= n_props else iri(f"urn:p:{u}")
            builder.add(entity, predicate, iri("urn:o:thing"))
    store = builder.finish()

    graph = OntologyGraph()
    graph.classes = set(class_ids)
    graph.properties = set(prop_ids)
    graph.names = {cid: f"urn:c:{i}" for i, cid in enumerate(class_ids)}
    graph.names.update({pid: f"urn:p:{i}" for i, pid in enumerate(prop_ids)})
    for child, parent in edges:
        graph.parents.setdefault(class_ids[child], set()).add(class_ids[parent])
    for prop, cls in domains:
        graph.domain_of.setdefault(class_ids[cls], set()).add(prop_ids[prop])

    graph, _ = normalize(graph)
    assert_reports_match(
        full_report(store, graph, GENERIC_PROFILE),
        oracle_metrics(store, graph, GENERIC_PROFILE),
    )


def test_oracle_guard():
    params = SynthParams(class_count=30, entity_count=0, property_count=0, seed=1)
    store, graph, _ = generate_kg(params)
    graph, _ = normalize(graph)
    with pytest.raises(OracleGuardError):
        oracle_metrics(store, graph, SYNTH_PROFILE, class_limit=10)


def test_oracle_requires_rooted_graph():
    params = SynthParams(class_count=5, entity_count=0, property_count=0, seed=1)
    store, graph, _ = generate_kg(params)
    with pytest.raises(ValueError):
        oracle_metrics(store, graph, SYNTH_PROFILE)
