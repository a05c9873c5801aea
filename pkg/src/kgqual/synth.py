"""Synthetic knowledge-graph generator with an exact ground-truth ledger.

Generates a class hierarchy (optionally with multiple inheritance and
planted subclass cycles), property domain declarations, single-typed
entities, and property-usage triples. Generation is deterministic for a
fixed seed; the ledger records exactly what was planted so tests can
check the pipeline against known truth.

Planted cycles are built from the highest class indexes as dedicated
three-class chains closed into a loop. Members never receive children or
extra parents, every non-closing edge points to a strictly smaller index,
and the chain head keeps one ordinary tree parent, so each strongly
connected component is exactly the planted member set and condensation
can only move classes shallower (max_depth stays respected).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .ontology import OntologyGraph
from .profiles import (
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_LABEL,
    RDFS_SUBCLASS_OF,
    ExtractionProfile,
)
from .store import TripleStore, TripleStoreBuilder, Term, iri

CLASS_IRI = "urn:synth:class/C{}"
ENTITY_IRI = "urn:synth:entity/E{}"
PROPERTY_IRI = "urn:synth:prop/P{}"

SYNTH_PROFILE = ExtractionProfile(
    name="synth",
    type_predicate=RDF_TYPE,
    subclass_predicate=RDFS_SUBCLASS_OF,
    domain_predicate=RDFS_DOMAIN,
    label_predicate=RDFS_LABEL,
)

_CYCLE_LENGTH = 3


class SynthParamError(ValueError):
    pass


@dataclass(frozen=True)
class SynthParams:
    class_count: int = 20
    max_depth: int = 5
    multi_parent_probability: float = 0.0
    entity_count: int = 100
    property_count: int = 10
    property_per_class_mean: float = 1.5
    instantiation_skew: str = "uniform"  # "uniform" or "zipf"
    zipf_s: float = 1.5
    planted_cycles: int = 0
    seed: int = 0
    usage_triples_per_entity_mean: float = 2.0

    def validate(self) -> None:
        if self.class_count < 1:
            raise SynthParamError("class_count must be >= 1")
        if self.entity_count < 0:
            raise SynthParamError("entity_count must be >= 0")
        if self.property_count < 0:
            raise SynthParamError("property_count must be >= 0")
        if not 0.0 <= self.multi_parent_probability <= 1.0:
            raise SynthParamError("multi_parent_probability must be in [0, 1]")
        if self.property_per_class_mean < 0:
            raise SynthParamError("property_per_class_mean must be >= 0")
        if self.usage_triples_per_entity_mean < 0:
            raise SynthParamError("usage_triples_per_entity_mean must be >= 0")
        if self.instantiation_skew not in ("uniform", "zipf"):
            raise SynthParamError("instantiation_skew must be 'uniform' or 'zipf'")
        if self.instantiation_skew == "zipf" and self.zipf_s <= 0:
            raise SynthParamError("zipf_s must be > 0")
        if self.planted_cycles < 0:
            raise SynthParamError("planted_cycles must be >= 0")
        if self.class_count > 1 and self.max_depth < 1:
            raise SynthParamError("max_depth must be >= 1 for more than one class")
        if self.planted_cycles and _CYCLE_LENGTH * self.planted_cycles > self.class_count - 1:
            raise SynthParamError(
                f"planted_cycles={self.planted_cycles} infeasible for "
                f"class_count={self.class_count}"
            )


@dataclass
class GroundTruthLedger:
    """Exact record of what the generator planted, keyed by IRI."""

    params: SynthParams
    parent_lists: dict[str, list[str]] = field(default_factory=dict)
    domain_properties: dict[str, list[str]] = field(default_factory=dict)
    direct_instances: dict[str, int] = field(default_factory=dict)
    cycles: list[list[str]] = field(default_factory=list)
    totals: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        params = self.params
        return {
            "params": {
                "class_count": params.class_count,
                "max_depth": params.max_depth,
                "multi_parent_probability": params.multi_parent_probability,
                "entity_count": params.entity_count,
                "property_count": params.property_count,
                "property_per_class_mean": params.property_per_class_mean,
                "instantiation_skew": params.instantiation_skew,
                "zipf_s": params.zipf_s,
                "planted_cycles": params.planted_cycles,
                "seed": params.seed,
                "usage_triples_per_entity_mean": params.usage_triples_per_entity_mean,
            },
            "parent_lists": self.parent_lists,
            "domain_properties": self.domain_properties,
            "direct_instances": self.direct_instances,
            "cycles": self.cycles,
            "totals": self.totals,
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n").encode("utf-8")


@dataclass
class _Plan:
    """Deterministic structural plan shared by store and graph assembly."""

    params: SynthParams
    parents: list[list[int]]  # class index -> parent class indexes
    domains: list[list[int]]  # class index -> property indexes
    entity_types: list[int]  # entity index -> class index
    usage: list[list[tuple[int, int]]]  # entity index -> (property, object entity)
    cycles: list[list[int]]


def _draw_count(rng: random.Random, mean: float, cap: int) -> int:
    if mean <= 0 or cap <= 0:
        return 0
    # Binomial draw with the requested mean, capped at the pool size.
    probability = min(1.0, mean / cap)
    return sum(1 for _ in range(cap) if rng.random() < probability)


def _plan(params: SynthParams) -> _Plan:
    params.validate()
    rng = random.Random(params.seed)
    n = params.class_count

    # The highest indexes are reserved as cycle-chain members; they take
    # no children (tree parents come from earlier indexes only) and no
    # extra parents, so each planted component stays exactly its members.
    first_member = n - _CYCLE_LENGTH * params.planted_cycles
    cycle_members = set(range(first_member, n))

    depth = [0] * n
    parents: list[list[int]] = [[] for _ in range(n)]
    for i in range(1, first_member):
        parent = rng.randrange(i)
        # Respect max_depth by re-drawing toward shallower classes.
        while depth[parent] >= params.max_depth:
            parent = rng.randrange(i)
        parents[i] = [parent]
        depth[i] = depth[parent] + 1

    cycles: list[list[int]] = []
    for k in range(params.planted_cycles):
        head = first_member + k * _CYCLE_LENGTH
        mid, tail = head + 1, head + 2
        anchor = rng.randrange(first_member)
        while depth[anchor] >= params.max_depth:
            anchor = rng.randrange(first_member)
        parents[head] = [anchor, tail]
        parents[mid] = [head]
        parents[tail] = [mid]
        depth[head] = depth[mid] = depth[tail] = depth[anchor] + 1
        cycles.append([head, mid, tail])

    if params.multi_parent_probability > 0:
        for i in range(1, first_member):
            if rng.random() < params.multi_parent_probability:
                candidates = [c for c in range(i) if c not in parents[i]]
                if candidates:
                    parents[i].append(rng.choice(candidates))

    domains: list[list[int]] = []
    for _ in range(n):
        k = _draw_count(rng, params.property_per_class_mean, params.property_count)
        domains.append(sorted(rng.sample(range(params.property_count), k)) if k else [])

    if params.entity_count:
        if params.instantiation_skew == "zipf":
            weights = [1.0 / (rank + 1) ** params.zipf_s for rank in range(n)]
            entity_types = rng.choices(range(n), weights=weights, k=params.entity_count)
        else:
            entity_types = [rng.randrange(n) for _ in range(params.entity_count)]
    else:
        entity_types = []

    # Properties applicable to a class: its own domains plus all ancestors'.
    applicable_cache: dict[int, list[int]] = {}

    def applicable(class_index: int) -> list[int]:
        cached = applicable_cache.get(class_index)
        if cached is not None:
            return cached
        seen: set[int] = set()
        stack = [class_index]
        props: set[int] = set()
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            props.update(domains[current])
            stack.extend(parents[current])
        result = sorted(props)
        applicable_cache[class_index] = result
        return result

    # Usage rows are deduplicated here; duplicates can only occur within
    # one entity's rows, so downstream emission never needs a global set.
    usage: list[list[tuple[int, int]]] = []
    for entity_index, class_index in enumerate(entity_types):
        pool = applicable(class_index)
        count = _draw_count(rng, params.usage_triples_per_entity_mean, 64) if pool else 0
        rows = [
            (rng.choice(pool), rng.randrange(params.entity_count)) for _ in range(count)
        ]
        usage.append(list(dict.fromkeys(rows)))

    return _Plan(params, parents, domains, entity_types, usage, cycles)


def _iter_term_triples(plan: _Plan) -> Iterator[tuple[Term, Term, Term]]:
    subclass_of = iri(RDFS_SUBCLASS_OF)
    domain = iri(RDFS_DOMAIN)
    rdf_type = iri(RDF_TYPE)
    class_terms = [iri(CLASS_IRI.format(i)) for i in range(plan.params.class_count)]
    prop_terms = [iri(PROPERTY_IRI.format(j)) for j in range(plan.params.property_count)]

    for child, parent_list in enumerate(plan.parents):
        for parent in parent_list:
            yield class_terms[child], subclass_of, class_terms[parent]
    for class_index, props in enumerate(plan.domains):
        for prop in props:
            yield prop_terms[prop], domain, class_terms[class_index]
    for entity_index, class_index in enumerate(plan.entity_types):
        entity = iri(ENTITY_IRI.format(entity_index))
        yield entity, rdf_type, class_terms[class_index]
        for prop, target in plan.usage[entity_index]:
            yield entity, prop_terms[prop], iri(ENTITY_IRI.format(target))


def _build_ledger(plan: _Plan, triple_count: int) -> GroundTruthLedger:
    params = plan.params
    ledger = GroundTruthLedger(params=params)
    for i in range(params.class_count):
        name = CLASS_IRI.format(i)
        ledger.parent_lists[name] = [CLASS_IRI.format(p) for p in plan.parents[i]]
        ledger.domain_properties[name] = [PROPERTY_IRI.format(p) for p in plan.domains[i]]
        ledger.direct_instances[name] = 0
    for class_index in plan.entity_types:
        ledger.direct_instances[CLASS_IRI.format(class_index)] += 1
    ledger.cycles = [[CLASS_IRI.format(m) for m in group] for group in plan.cycles]
    ledger.totals = {
        "classes": params.class_count,
        "properties": params.property_count,
        "entities": params.entity_count,
        "triples": triple_count,
    }
    return ledger


def _build_graph(plan: _Plan, store: TripleStore) -> OntologyGraph:
    graph = OntologyGraph()
    params = plan.params
    class_ids = []
    for i in range(params.class_count):
        term_id = store.find_iri(CLASS_IRI.format(i))
        if term_id is None:
            # Classes never mentioned in triples (degenerate stores) still
            # need ids; allocate past the dictionary.
            term_id = store.term_count + i
        class_ids.append(term_id)
        graph.classes.add(term_id)
        graph.names[term_id] = CLASS_IRI.format(i)
    for child, parent_list in enumerate(plan.parents):
        if parent_list:
            graph.parents[class_ids[child]] = {class_ids[p] for p in parent_list}
    prop_ids = {}
    for j in range(params.property_count):
        term_id = store.find_iri(PROPERTY_IRI.format(j))
        if term_id is None:
            term_id = store.term_count + params.class_count + j
        prop_ids[j] = term_id
        graph.properties.add(term_id)
        graph.names[term_id] = PROPERTY_IRI.format(j)
    for class_index, props in enumerate(plan.domains):
        if props:
            graph.domain_of[class_ids[class_index]] = {prop_ids[p] for p in props}
    return graph


def generate_kg(params: SynthParams) -> tuple[TripleStore, OntologyGraph, GroundTruthLedger]:
    """Generate a store, its ontology graph, and the ground-truth ledger.

    The graph is returned raw (cycles intact, no root chosen); run
    ontology.normalize before computing metrics. Deterministic for a
    fixed seed.
    """
    plan = _plan(params)
    builder = TripleStoreBuilder()
    for s, p, o in _iter_term_triples(plan):
        builder.add(s, p, o)
    store = builder.finish()
    graph = _build_graph(plan, store)
    ledger = _build_ledger(plan, store.triple_count)
    return store, graph, ledger


def write_fixture(
    params: SynthParams,
    triples_path: str | Path,
    ledger_path: str | Path | None = None,
) -> GroundTruthLedger:
    """Stream a generated fixture to disk without holding the store.

    Writes N-Triples to triples_path (gzip if the name ends with .gz) and
    the ledger JSON when a path is given. The emitted triple sequence is
    duplicate-free, so the ledger's triple total equals the line count and
    the parsed store's size.
    """
    import gzip as gzip_mod

    plan = _plan(params)
    path = Path(triples_path)
    opener: Callable = gzip_mod.open if path.suffix == ".gz" else open
    count = 0
    with opener(path, "wb") as out:
        for s, p, o in _iter_term_triples(plan):
            count += 1
            line = f"{s.ntriples_token()} {p.ntriples_token()} {o.ntriples_token()} .\n"
            out.write(line.encode("utf-8"))
    ledger = _build_ledger(plan, count)
    if ledger_path is not None:
        Path(ledger_path).write_bytes(ledger.to_json_bytes())
    return ledger
