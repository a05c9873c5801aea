"""Ontology graph: classes, subclass hierarchy, properties and domains.

Builds an OntologyGraph from a TripleStore using an ExtractionProfile
(either mining the instance data or reading a standalone ontology file),
then normalizes it for metric computation: strongly connected components
of the subclass relation are condensed into single classes, and a root is
synthesized when the hierarchy has no unique top.

Class and property ids are the term ids of the store the graph was built
from; a synthesized root gets a fresh id above them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .profiles import ExtractionProfile
from .store import IRI, TripleStore

SYNTHETIC_ROOT_IRI = "urn:kgqual:synthetic-root"


class OntologyError(Exception):
    pass


class EmptyOntologyError(OntologyError):
    """The profile matched no classes (likely wrong predicates)."""


class UnknownClassError(OntologyError, KeyError):
    pass


@dataclass(frozen=True)
class CycleReport:
    """Nontrivial strongly connected components found during condensation."""

    cycle_count: int
    cycles: list[list[int]]
    edges_removed: int = 0


@dataclass
class OntologyGraph:
    """Class hierarchy with property domains.

    parents maps each class to its direct superclasses (the subclass
    relation, child to parent). condensation maps every original class id
    to its representative; ids untouched by condensation are absent. The
    graph is treated as immutable once built; operations return new graphs.
    """

    classes: set[int] = field(default_factory=set)
    parents: dict[int, set[int]] = field(default_factory=dict)
    properties: set[int] = field(default_factory=set)
    domain_of: dict[int, set[int]] = field(default_factory=dict)
    names: dict[int, str] = field(default_factory=dict)
    root: int | None = None
    synthesized_root: bool = False
    condensation: dict[int, int] = field(default_factory=dict)
    cycles: list[list[int]] = field(default_factory=list)
    dropped_domain_assertions: int = 0

    def __post_init__(self):
        self._children: dict[int, list[int]] | None = None
        self._ancestors: dict[int, frozenset[int]] = {}
        self._distinct: dict[int, frozenset[int]] = {}

    def resolve(self, class_id: int) -> int:
        """Map a class id through condensation to its representative."""
        return self.condensation.get(class_id, class_id)

    def name(self, item_id: int) -> str:
        return self.names.get(item_id, f"#{item_id}")

    def children(self) -> dict[int, list[int]]:
        if self._children is None:
            children: dict[int, list[int]] = {}
            for child, parent_set in self.parents.items():
                for parent in parent_set:
                    children.setdefault(parent, []).append(child)
            self._children = children
        return self._children

    def ancestors(self, class_id: int) -> frozenset[int]:
        """Strict ancestors of a class via any superclass path."""
        cached = self._ancestors.get(class_id)
        if cached is not None:
            return cached
        if class_id not in self.classes:
            raise UnknownClassError(class_id)
        result: set[int] = set()
        stack = list(self.parents.get(class_id, ()))
        while stack:
            current = stack.pop()
            if current in result:
                continue
            result.add(current)
            stack.extend(self.parents.get(current, ()))
        frozen = frozenset(result)
        self._ancestors[class_id] = frozen
        return frozen

    def descendant_depths(self, class_id: int) -> dict[int, int]:
        """Minimum edge-count distance from class_id to each descendant.

        The class itself maps to 0. Requires an acyclic graph (depths are
        ill-defined otherwise).
        """
        if class_id not in self.classes:
            raise UnknownClassError(class_id)
        children = self.children()
        depths = {class_id: 0}
        frontier = [class_id]
        level = 0
        while frontier:
            level += 1
            next_frontier = []
            for node in frontier:
                for child in children.get(node, ()):
                    if child not in depths:
                        depths[child] = level
                        next_frontier.append(child)
            frontier = next_frontier
        return depths

    def distinct_properties(self, class_id: int) -> frozenset[int]:
        """Domain properties of a class not declared on any strict ancestor."""
        cached = self._distinct.get(class_id)
        if cached is not None:
            return cached
        own = self.domain_of.get(class_id, set())
        inherited: set[int] = set()
        for ancestor in self.ancestors(class_id):
            inherited |= self.domain_of.get(ancestor, set())
        result = frozenset(own - inherited)
        self._distinct[class_id] = result
        return result

    def is_acyclic(self) -> bool:
        return not _nontrivial_sccs(self.classes, self.parents)


def _extract(store: TripleStore, profile: ExtractionProfile, from_ontology_file: bool) -> OntologyGraph:
    graph = OntologyGraph()
    classes = graph.classes
    names = graph.names

    def note(term_id: int) -> None:
        if term_id not in names:
            names[term_id] = store.term(term_id).lexical

    def is_iri(term_id: int) -> bool:
        return store.term(term_id).kind == IRI

    # Classes from subclass links. Blank nodes and literals are never
    # classes; an edge is recorded only when both ends qualify.
    subclass_id = store.find_iri(profile.subclass_predicate)
    if subclass_id is not None:
        for s, _, o in store.with_predicate(subclass_id):
            if not is_iri(s) or not is_iri(o):
                continue
            classes.add(s)
            classes.add(o)
            note(s)
            note(o)
            graph.parents.setdefault(s, set()).add(o)

    # Classes from the class-marker rule.
    if profile.class_marker is not None:
        marker_id = store.find_iri(profile.class_marker.predicate)
        if marker_id is not None:
            for s, _, o in store.with_predicate(marker_id):
                if not is_iri(s) or not is_iri(o):
                    continue
                if profile.class_marker.matches(store.term(o).lexical):
                    classes.add(s)
                    note(s)

    # Classes from type objects, only when the profile says so and the
    # ontology is being mined from instance data.
    if profile.type_objects_are_classes and not from_ontology_file:
        type_id = store.find_iri(profile.type_predicate)
        if type_id is not None:
            for _, _, o in store.with_predicate(type_id):
                if is_iri(o):
                    classes.add(o)
                    note(o)

    if not classes:
        raise EmptyOntologyError(
            f"profile {profile.name!r} matched no classes in the input"
        )

    # Properties from the property-marker rule.
    if profile.property_marker is not None:
        marker_id = store.find_iri(profile.property_marker.predicate)
        if marker_id is not None:
            for s, _, o in store.with_predicate(marker_id):
                if not is_iri(s) or not is_iri(o):
                    continue
                if profile.property_marker.matches(store.term(o).lexical):
                    graph.properties.add(s)
                    note(s)

    # Properties and domains from domain assertions. Assertions whose
    # object is not a known class still declare the property but the
    # domain entry is dropped (and tallied).
    domain_id = store.find_iri(profile.domain_predicate) if profile.domain_predicate else None
    if domain_id is not None:
        for s, _, o in store.with_predicate(domain_id):
            if not is_iri(s) or not is_iri(o):
                continue
            graph.properties.add(s)
            note(s)
            if o in classes:
                graph.domain_of.setdefault(o, set()).add(s)
            else:
                graph.dropped_domain_assertions += 1

    return graph


def extract_ontology(store: TripleStore, profile: ExtractionProfile) -> OntologyGraph:
    """Mine an ontology from instance-data triples.

    No root synthesis or condensation happens here; see `normalize`.
    Raises EmptyOntologyError when the profile matches no classes.
    """
    return _extract(store, profile, from_ontology_file=False)


def load_ontology_triples(store: TripleStore, profile: ExtractionProfile) -> OntologyGraph:
    """Read an ontology from a standalone ontology file's triples.

    Only classes defined in the file count, even if instance data types
    entities into others, so the type-objects rule never applies here.
    """
    return _extract(store, profile, from_ontology_file=True)


def _copy_graph(graph: OntologyGraph) -> OntologyGraph:
    return OntologyGraph(
        classes=set(graph.classes),
        parents={c: set(ps) for c, ps in graph.parents.items()},
        properties=set(graph.properties),
        domain_of={c: set(ps) for c, ps in graph.domain_of.items()},
        names=dict(graph.names),
        root=graph.root,
        synthesized_root=graph.synthesized_root,
        condensation=dict(graph.condensation),
        cycles=[list(c) for c in graph.cycles],
        dropped_domain_assertions=graph.dropped_domain_assertions,
    )


def synthesize_root(graph: OntologyGraph) -> OntologyGraph:
    """Guarantee a single root class.

    A unique parentless class becomes the root as-is; otherwise a fresh
    root is created and every parentless class is attached beneath it.
    Idempotent: a graph that already has its root is returned unchanged.
    """
    result = _copy_graph(graph)
    parentless = sorted(c for c in result.classes if not result.parents.get(c))
    if len(parentless) == 1:
        root = parentless[0]
        result.root = root
        # Preserve the flag when re-rooting an already synthesized graph.
        result.synthesized_root = graph.synthesized_root and graph.root == root
        return result

    used_ids = set(result.names) | result.classes | result.properties
    root = max(used_ids, default=-1) + 1
    result.classes.add(root)
    result.names[root] = SYNTHETIC_ROOT_IRI
    for class_id in parentless:
        result.parents.setdefault(class_id, set()).add(root)
    result.root = root
    result.synthesized_root = True
    return result


def _tarjan_sccs(nodes, successors: dict[int, set[int]]) -> list[list[int]]:
    """Iterative Tarjan strongly connected components."""
    index_of: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for start in sorted(nodes):
        if start in index_of:
            continue
        work = [(start, iter(sorted(successors.get(start, ()))))]
        index_of[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, edges = work[-1]
            advanced = False
            for succ in edges:
                if succ not in index_of:
                    index_of[succ] = low[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(sorted(successors.get(succ, ())))))
                    advanced = True
                    break
                if succ in on_stack:
                    if index_of[succ] < low[node]:
                        low[node] = index_of[succ]
            if advanced:
                continue
            work.pop()
            if low[node] == index_of[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                sccs.append(component)
            if work:
                parent_node = work[-1][0]
                if low[node] < low[parent_node]:
                    low[parent_node] = low[node]
    return sccs


def _nontrivial_sccs(nodes, successors: dict[int, set[int]]) -> list[list[int]]:
    # Size >= 2, or a singleton with a self-loop: both contain a cycle.
    result = []
    for component in _tarjan_sccs(nodes, successors):
        if len(component) > 1 or component[0] in successors.get(component[0], ()):
            result.append(sorted(component))
    return sorted(result)


def condense_cycles(graph: OntologyGraph) -> tuple[OntologyGraph, CycleReport]:
    """Collapse strongly connected components of the subclass relation.

    Each cycle merges into its lowest-id member; domain sets are unioned
    into the representative and the condensation map records every merged
    member. Edges are never removed, so the report's edges_removed is 0.
    """
    cycles = _nontrivial_sccs(graph.classes, graph.parents)
    report = CycleReport(cycle_count=len(cycles), cycles=cycles, edges_removed=0)
    if not cycles:
        return _copy_graph(graph), report

    representative: dict[int, int] = {}
    for component in cycles:
        rep = component[0]
        for member in component:
            representative[member] = rep

    def resolve(class_id: int) -> int:
        return representative.get(class_id, class_id)

    result = OntologyGraph(
        properties=set(graph.properties),
        names=dict(graph.names),
        synthesized_root=graph.synthesized_root,
        dropped_domain_assertions=graph.dropped_domain_assertions,
    )
    result.classes = {resolve(c) for c in graph.classes}
    for child, parent_set in graph.parents.items():
        child_rep = resolve(child)
        for parent in parent_set:
            parent_rep = resolve(parent)
            if parent_rep != child_rep:
                result.parents.setdefault(child_rep, set()).add(parent_rep)
    for class_id, props in graph.domain_of.items():
        result.domain_of.setdefault(resolve(class_id), set()).update(props)
    # Compose with any earlier condensation so old ids still resolve.
    result.condensation = {
        original: resolve(rep) for original, rep in graph.condensation.items()
    }
    for member, rep in representative.items():
        if member != rep:
            result.condensation[member] = rep
    result.cycles = [list(c) for c in graph.cycles] + [list(c) for c in cycles]
    result.root = resolve(graph.root) if graph.root is not None else None
    return result, report


def normalize(graph: OntologyGraph) -> tuple[OntologyGraph, CycleReport]:
    """Condense cycles, then guarantee a root.

    Condensation must run first: a cycle with no parents outside itself
    has no parentless member, so root synthesis alone would leave it
    unreachable from the root.
    """
    condensed, report = condense_cycles(graph)
    return synthesize_root(condensed), report
