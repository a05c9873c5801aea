"""Brute-force reference implementation of all six metrics.

This module recomputes every metric by the most literal exhaustive method:
ancestor and descendant sets by fixpoint expansion, depths by frontier
growth, direct-instance decisions by per-entity type-set scans, and SPI by
a full triple scan per class. It deliberately shares no traversal or
aggregation code with the metrics module (only data containers), so
agreement between the two is evidence rather than tautology.

The oracle exists for testing; it refuses graphs above a class-count guard.
"""

from __future__ import annotations

from fractions import Fraction

from .metrics import UNDEFINED, MetricReport, PerClassMetrics
from .ontology import OntologyGraph
from .profiles import ExtractionProfile
from .store import IRI, TripleStore

ORACLE_CLASS_LIMIT = 10_000


class OracleGuardError(RuntimeError):
    """The input exceeds the oracle's exhaustive-computation guard."""


def oracle_metrics(
    store: TripleStore,
    graph: OntologyGraph,
    profile: ExtractionProfile,
    class_limit: int = ORACLE_CLASS_LIMIT,
) -> MetricReport:
    if len(graph.classes) > class_limit:
        raise OracleGuardError(
            f"{len(graph.classes)} classes exceed the oracle guard of {class_limit}"
        )
    if graph.root is None:
        raise ValueError("oracle requires a rooted (normalized) graph")

    classes = sorted(graph.classes)
    root = graph.root
    parent_map = {c: set(graph.parents.get(c, ())) for c in classes}
    child_map: dict[int, set[int]] = {c: set() for c in classes}
    for child, parent_set in parent_map.items():
        for parent in parent_set:
            child_map.setdefault(parent, set()).add(child)

    # Strict ancestors by fixpoint expansion.
    ancestors: dict[int, set[int]] = {}
    for c in classes:
        reached: set[int] = set()
        frontier = set(parent_map.get(c, ()))
        while frontier:
            reached |= frontier
            next_frontier: set[int] = set()
            for node in frontier:
                next_frontier |= parent_map.get(node, set())
            frontier = next_frontier - reached
        ancestors[c] = reached

    # Minimum depths to descendants by frontier growth.
    def depths_from(top: int) -> dict[int, int]:
        depth = {top: 0}
        frontier = {top}
        level = 0
        while frontier:
            level += 1
            grown: set[int] = set()
            for node in frontier:
                grown |= child_map.get(node, set())
            grown -= depth.keys()
            for node in grown:
                depth[node] = level
            frontier = grown
        return depth

    # Resolve class/property IRIs (independent lookup tables).
    class_of_iri: dict[str, int] = {}
    for c in classes:
        class_of_iri[graph.names.get(c, f"#{c}")] = c
    for original, rep in graph.condensation.items():
        class_of_iri[graph.names.get(original, f"#{original}")] = rep
    property_of_iri = {graph.names.get(p, f"#{p}"): p for p in graph.properties}

    # Literal scan of every triple for type assertions.
    all_triples = list(store.triples())
    entity_types: dict[int, set[int]] = {}
    for s, p, o in all_triples:
        predicate = store.term(p)
        if predicate.kind == IRI and predicate.lexical == profile.type_predicate:
            types = entity_types.setdefault(s, set())
            obj = store.term(o)
            if obj.kind == IRI:
                resolved = class_of_iri.get(obj.lexical)
                if resolved is not None:
                    types.add(resolved)
    total_entities = len(entity_types)

    # Direct instances by pairwise type comparison.
    direct: dict[int, int] = {}
    instance_closure: dict[int, set[int]] = {}
    for entity, types in entity_types.items():
        closure: set[int] = set()
        for t in types:
            closure.add(t)
            closure |= ancestors[t]
        instance_closure[entity] = closure
        for t in types:
            if all(t not in ancestors[other] for other in types if other != t):
                direct[t] = direct.get(t, 0) + 1

    # Distinct properties per class by full ancestor-domain union.
    distinct: dict[int, set[int]] = {}
    for c in classes:
        union: set[int] = set()
        for a in ancestors[c]:
            union |= graph.domain_of.get(a, set())
        distinct[c] = set(graph.domain_of.get(c, set())) - union

    def ci_of(top: int):
        if total_entities == 0:
            return UNDEFINED
        total = Fraction(0)
        for node, depth in depths_from(top).items():
            total += Fraction(direct.get(node, 0), total_entities * 2**depth)
        return total

    # ICR.
    countable = [c for c in classes if not (graph.synthesized_root and c == root)]
    if countable:
        instantiated = set()
        for closure in instance_closure.values():
            instantiated |= closure
        icr_value = Fraction(len(instantiated & set(countable)), len(countable))
    else:
        icr_value = UNDEFINED

    # IPR by scanning every triple's predicate.
    if graph.properties:
        used: set[int] = set()
        for _, p, _ in all_triples:
            predicate = store.term(p)
            if predicate.kind == IRI:
                prop = property_of_iri.get(predicate.lexical)
                if prop is not None:
                    used.add(prop)
        ipr_value = Fraction(len(used), len(graph.properties))
    else:
        ipr_value = UNDEFINED

    # IMI.
    non_root = [c for c in classes if c != root]
    if non_root:
        superclass_total = sum(len(parent_map.get(c, ())) for c in non_root)
        imi_value = (
            Fraction(len(non_root), superclass_total) if superclass_total else UNDEFINED
        )
    else:
        imi_value = UNDEFINED

    # SPA means.
    if non_root:
        spa_total = sum(len(distinct[c]) for c in non_root)
        spa_mean_count = Fraction(spa_total, len(non_root))
        spa_ratio_mean = (
            Fraction(spa_total, len(non_root) * len(graph.properties))
            if graph.properties
            else UNDEFINED
        )
    else:
        spa_mean_count = UNDEFINED
        spa_ratio_mean = UNDEFINED

    # SPI by full per-class triple scans.
    distinct_iris = {
        c: {graph.names.get(p, f"#{p}") for p in distinct[c]} for c in classes
    }
    spi_values: dict[int, object] = {}
    for c in non_root:
        denominator = 0
        numerator = 0
        for s, p, _ in all_triples:
            closure = instance_closure.get(s)
            if closure is None or c not in closure:
                continue
            denominator += 1
            predicate = store.term(p)
            if predicate.kind == IRI and predicate.lexical in distinct_iris[c]:
                numerator += 1
        spi_values[c] = Fraction(numerator, denominator) if denominator else UNDEFINED
    defined_spi = [v for v in spi_values.values() if v is not UNDEFINED]
    spi_mean_value = (
        sum(defined_spi, Fraction(0)) / len(defined_spi) if defined_spi else UNDEFINED
    )

    report = MetricReport(
        kg_label="oracle",
        icr=icr_value,
        ipr=ipr_value,
        ci=ci_of(root),
        imi=imi_value,
        spa_mean_count=spa_mean_count,
        spa_ratio_mean=spa_ratio_mean,
        spi_mean=spi_mean_value,
    )
    for c in sorted(classes, key=lambda x: graph.names.get(x, f"#{x}")):
        name = graph.names.get(c, f"#{c}")
        if c == root:
            report.per_class[name] = PerClassMetrics(
                ci=ci_of(c), spa_count=None, spa_ratio=None, spi=None
            )
        else:
            count = len(distinct[c])
            report.per_class[name] = PerClassMetrics(
                ci=ci_of(c),
                spa_count=count,
                spa_ratio=Fraction(count, len(graph.properties))
                if graph.properties
                else UNDEFINED,
                spi=spi_values[c],
            )
    report.stats = {
        "classes": len(classes) - (1 if graph.synthesized_root else 0),
        "properties": len(graph.properties),
        "triples": len(all_triples),
        "instances": total_entities,
    }
    report.provenance = {"engine": "brute-force oracle"}
    return report
