"""The six structural quality metrics over a triple store and ontology.

All metric values are computed in exact rational arithmetic (Fraction) so
results are independent of accumulation order; decimal rendering happens
only at output. Metrics whose denominator is empty return the UNDEFINED
marker instead of a coerced 0 or 1.

Metric summary:

  ICR  instantiated class ratio: classes with instances / all classes
  IPR  instantiated property ratio: properties used in triples / declared
  CI   class instantiation: depth-discounted sum of direct-instance
       ratios over a class and its descendants; the knowledge-graph value
       is CI at the root
  SPA  subclass property acquisition: properties a class adds beyond its
       ancestors (reported as a count and as a ratio of all properties)
  SPI  subclass property instantiation: share of a class's instances'
       triples that use the class's own added properties
  IMI  inverse multiple inheritance: reciprocal of the mean number of
       direct superclasses over non-root classes
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import ontology as ontology_mod
from .ontology import OntologyGraph, UnknownClassError
from .profiles import ExtractionProfile
from .store import IRI, TripleStore


class _Undefined:
    """Singleton marker for metrics with an empty denominator."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        raise TypeError("an undefined metric has no truth value")


UNDEFINED = _Undefined()


def is_defined(value) -> bool:
    return value is not UNDEFINED


class RootClassError(ValueError):
    """Raised for per-class metrics that exclude the root."""


class MetricInputError(ValueError):
    """The graph is not ready for metric computation (not normalized)."""


@dataclass(frozen=True)
class InstanceIndex:
    """One-pass instance statistics for metric evaluation.

    direct_instances counts entities whose asserted types include the
    class but none of its strict descendants. subject_triples counts all
    triples whose subject is an instance (direct or inherited) of the
    class; distinct_prop_triples counts the subset whose predicate is one
    of the class's own added properties. total_entities counts distinct
    subjects with at least one type assertion, whether or not the typed
    class is known.
    """

    direct_instances: dict[int, int]
    total_entities: int
    subject_triples: dict[int, int]
    distinct_prop_triples: dict[int, int]
    used_properties: frozenset[int]
    instantiated_classes: frozenset[int]
    undeclared_predicates: int
    untyped_class_assertions: int


def _require_normalized(graph: OntologyGraph) -> None:
    if graph.root is None:
        raise MetricInputError("graph has no root; run ontology.normalize first")


def build_instance_index(
    store: TripleStore, graph: OntologyGraph, profile: ExtractionProfile
) -> InstanceIndex:
    """Scan the store once and aggregate all per-class instance counters.

    Classes and properties are matched by IRI, so the store need not be
    the one the graph was extracted from (ontology-file workflows). Type
    assertions pointing at unknown classes are tallied, not errors.
    """
    _require_normalized(graph)

    # IRI-keyed lookups, including condensed-away members.
    class_by_iri: dict[str, int] = {}
    for class_id in graph.classes:
        class_by_iri[graph.name(class_id)] = class_id
    for original, rep in graph.condensation.items():
        class_by_iri[graph.name(original)] = rep
    prop_by_iri = {graph.name(p): p for p in graph.properties}

    type_id = store.find_iri(profile.type_predicate)

    typed: dict[int, set[int]] = {}
    untyped_class_assertions = 0
    if type_id is not None:
        for s, _, o in store.with_predicate(type_id):
            types = typed.get(s)
            if types is None:
                types = typed[s] = set()
            obj = store.term(o)
            class_id = class_by_iri.get(obj.lexical) if obj.kind == IRI else None
            if class_id is None:
                untyped_class_assertions += 1
            else:
                types.add(class_id)

    # Map the store's predicate ids onto ontology property ids.
    prop_of_pred: dict[int, int | None] = {}
    undeclared = 0
    for pred_id in store.predicate_ids():
        term = store.term(pred_id)
        prop_id = prop_by_iri.get(term.lexical)
        prop_of_pred[pred_id] = prop_id
        if prop_id is None:
            undeclared += 1

    direct: Counter[int] = Counter()
    subject_triples: Counter[int] = Counter()
    distinct_prop_triples: Counter[int] = Counter()
    instantiated: set[int] = set()
    ancestors = graph.ancestors
    distinct_properties = graph.distinct_properties

    for entity, types in typed.items():
        if not types:
            continue
        for class_id in types:
            if len(types) == 1 or not any(
                class_id in ancestors(other) for other in types if other != class_id
            ):
                direct[class_id] += 1
        closure: set[int] = set()
        for class_id in types:
            closure.add(class_id)
            closure |= ancestors(class_id)
        instantiated |= closure

        entity_triples = store.with_subject(entity)
        triple_count = len(entity_triples)
        predicate_counts: Counter[int] = Counter()
        for _, p, _ in entity_triples:
            prop_id = prop_of_pred[p]
            if prop_id is not None:
                predicate_counts[prop_id] += 1
        for class_id in closure:
            subject_triples[class_id] += triple_count
            if predicate_counts:
                own = distinct_properties(class_id)
                if own:
                    hits = sum(
                        count for prop_id, count in predicate_counts.items() if prop_id in own
                    )
                    if hits:
                        distinct_prop_triples[class_id] += hits

    used = frozenset(
        prop_id for prop_id in prop_of_pred.values() if prop_id is not None
    )
    return InstanceIndex(
        direct_instances=dict(direct),
        total_entities=len(typed),
        subject_triples=dict(subject_triples),
        distinct_prop_triples=dict(distinct_prop_triples),
        used_properties=used,
        instantiated_classes=frozenset(instantiated),
        undeclared_predicates=undeclared,
        untyped_class_assertions=untyped_class_assertions,
    )


def _countable_classes(graph: OntologyGraph) -> set[int]:
    classes = set(graph.classes)
    if graph.synthesized_root and graph.root is not None:
        classes.discard(graph.root)
    return classes


def icr(graph: OntologyGraph, index: InstanceIndex):
    """Instantiated class ratio; a synthesized root counts on neither side."""
    classes = _countable_classes(graph)
    if not classes:
        return UNDEFINED
    return Fraction(len(index.instantiated_classes & classes), len(classes))


def ipr(graph: OntologyGraph, index: InstanceIndex):
    """Instantiated property ratio over the declared ontology properties."""
    if not graph.properties:
        return UNDEFINED
    return Fraction(len(index.used_properties & graph.properties), len(graph.properties))


def class_instantiation(graph: OntologyGraph, index: InstanceIndex, class_id: int):
    """Depth-discounted instantiation of a class and its descendants.

    Each descendant contributes its direct-instance ratio divided by
    2**d, where d is the minimum subclass-edge distance from `class_id`;
    the class itself contributes at depth 0.
    """
    _require_normalized(graph)
    class_id = graph.resolve(class_id)
    if class_id not in graph.classes:
        raise UnknownClassError(class_id)
    if index.total_entities == 0:
        return UNDEFINED
    direct = index.direct_instances
    total = index.total_entities
    value = Fraction(0)
    for descendant, depth in graph.descendant_depths(class_id).items():
        count = direct.get(descendant, 0)
        if count:
            value += Fraction(count, total * (1 << depth))
    return value


def ci_kg(graph: OntologyGraph, index: InstanceIndex):
    """Knowledge-graph class instantiation: CI anchored at the root."""
    _require_normalized(graph)
    return class_instantiation(graph, index, graph.root)


def spa(graph: OntologyGraph, class_id: int):
    """Subclass property acquisition: (count, ratio of all properties).

    Both shapes are returned because the headline tables are usually
    count-scaled while the definition is a ratio. The root is excluded.
    """
    _require_normalized(graph)
    class_id = graph.resolve(class_id)
    if class_id not in graph.classes:
        raise UnknownClassError(class_id)
    if class_id == graph.root:
        raise RootClassError("SPA is not defined for the root class")
    count = len(graph.distinct_properties(class_id))
    if not graph.properties:
        return count, UNDEFINED
    return count, Fraction(count, len(graph.properties))


def spa_summary(graph: OntologyGraph):
    """Arithmetic means of SPA count and ratio over all non-root classes."""
    _require_normalized(graph)
    non_root = [c for c in graph.classes if c != graph.root]
    if not non_root:
        return UNDEFINED, UNDEFINED
    total = sum(len(graph.distinct_properties(c)) for c in non_root)
    mean_count = Fraction(total, len(non_root))
    if not graph.properties:
        return mean_count, UNDEFINED
    return mean_count, Fraction(total, len(non_root) * len(graph.properties))


def spi(graph: OntologyGraph, index: InstanceIndex, class_id: int):
    """Share of a class's instance triples using its own added properties.

    The denominator is the class's own subject-triple count. A class whose
    instances have no triples yields UNDEFINED and is skipped in averages.
    """
    _require_normalized(graph)
    class_id = graph.resolve(class_id)
    if class_id not in graph.classes:
        raise UnknownClassError(class_id)
    if class_id == graph.root:
        raise RootClassError("SPI is not defined for the root class")
    denominator = index.subject_triples.get(class_id, 0)
    if denominator == 0:
        return UNDEFINED
    return Fraction(index.distinct_prop_triples.get(class_id, 0), denominator)


def spi_mean(graph: OntologyGraph, index: InstanceIndex):
    """Mean SPI over non-root classes where SPI is defined."""
    _require_normalized(graph)
    values = [
        spi(graph, index, c)
        for c in graph.classes
        if c != graph.root
    ]
    defined = [v for v in values if is_defined(v)]
    if not defined:
        return UNDEFINED
    return sum(defined, Fraction(0)) / len(defined)


def imi(graph: OntologyGraph):
    """Reciprocal of the mean direct-superclass count over non-root classes.

    Exactly 1 iff every non-root class has a single parent (a tree).
    """
    _require_normalized(graph)
    non_root = [c for c in graph.classes if c != graph.root]
    if not non_root:
        return UNDEFINED
    total_superclasses = sum(len(graph.parents.get(c, ())) for c in non_root)
    if total_superclasses == 0:
        return UNDEFINED
    return Fraction(len(non_root), total_superclasses)


@dataclass(frozen=True)
class PerClassMetrics:
    """Per-class breakdown; None marks not-applicable (root-only fields)."""

    ci: object
    spa_count: int | None
    spa_ratio: object
    spi: object


@dataclass
class MetricReport:
    """Full metric report with per-class breakdowns and provenance.

    Values are Fractions or UNDEFINED; per_class is keyed by class IRI.
    The provenance record spells out every interpretation the numbers
    depend on so published figures are self-describing.
    """

    kg_label: str
    icr: object
    ipr: object
    ci: object
    imi: object
    spa_mean_count: object
    spa_ratio_mean: object
    spi_mean: object
    per_class: dict[str, PerClassMetrics] = field(default_factory=dict)
    stats: dict[str, object] = field(default_factory=dict)
    provenance: dict[str, object] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)


def full_report(
    store: TripleStore,
    graph: OntologyGraph,
    profile: ExtractionProfile,
    kg_label: str = "kg",
) -> MetricReport:
    """Run the whole pipeline and assemble a MetricReport.

    The graph is normalized here if it was not already (the cycle report
    lands in provenance either way). Undefined metrics stay as markers;
    rendering decides how to show them.
    """
    if graph.root is None:
        graph, _ = ontology_mod.normalize(graph)
    index = build_instance_index(store, graph, profile)

    spa_count_mean, spa_ratio = spa_summary(graph)
    report = MetricReport(
        kg_label=kg_label,
        icr=icr(graph, index),
        ipr=ipr(graph, index),
        ci=ci_kg(graph, index),
        imi=imi(graph),
        spa_mean_count=spa_count_mean,
        spa_ratio_mean=spa_ratio,
        spi_mean=spi_mean(graph, index),
    )

    ci_sum = Fraction(0)
    any_ci_defined = False
    for class_id in sorted(graph.classes, key=graph.name):
        ci_value = class_instantiation(graph, index, class_id)
        if is_defined(ci_value):
            ci_sum += ci_value
            any_ci_defined = True
        if class_id == graph.root:
            entry = PerClassMetrics(ci=ci_value, spa_count=None, spa_ratio=None, spi=None)
        else:
            spa_count, spa_ratio_value = spa(graph, class_id)
            entry = PerClassMetrics(
                ci=ci_value,
                spa_count=spa_count,
                spa_ratio=spa_ratio_value,
                spi=spi(graph, index, class_id),
            )
        report.per_class[graph.name(class_id)] = entry

    class_count = len(graph.classes) - (1 if graph.synthesized_root else 0)
    report.stats = {
        "classes": class_count,
        "properties": len(graph.properties),
        "triples": store.triple_count,
        "instances": index.total_entities,
        "undeclared_predicates": index.undeclared_predicates,
        "untyped_class_assertions": index.untyped_class_assertions,
        "parse": store.counters.to_json(),
    }
    report.provenance = {
        "depth_rule": "minimum edge distance under multiple inheritance",
        "ci_anchor": "root class (per-class sum exposed separately)",
        "ci_per_class_sum": ci_sum if any_ci_defined else UNDEFINED,
        "spi_denominator": "per-class subject triples",
        "spa_reported_as": "count and ratio",
        "ir_denominator": "entities with at least one type assertion",
        "icr_instantiation": "direct or inherited",
        "imi_scope": "non-root classes",
        "duplicate_triples": "collapsed (set semantics)",
        "root": graph.name(graph.root),
        "synthesized_root": graph.synthesized_root,
        "cycle_count": len(graph.cycles),
        "condensed_cycles": [[graph.name(m) for m in cycle] for cycle in graph.cycles],
        "dropped_domain_assertions": graph.dropped_domain_assertions,
    }
    return report
