"""Extraction profiles: declarative rules for reading an ontology out of
a knowledge graph's triples.

A profile names the predicates that carry instance typing, subclass links,
and property domains, plus optional marker rules ("the subject of
(s, marker_predicate, marker_object) is a class/property"). Profiles load
from simple `key = value` text files; five bundled profiles cover common
public knowledge graphs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDF_PROPERTY = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property"
RDFS_SUBCLASS_OF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
RDFS_DOMAIN = "http://www.w3.org/2000/01/rdf-schema#domain"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDFS_CLASS = "http://www.w3.org/2000/01/rdf-schema#Class"
OWL_CLASS = "http://www.w3.org/2002/07/owl#Class"

BUNDLED_PROFILE_NAMES = ("wikidata", "freebase", "dbpedia", "yago", "schemaorg")

PROFILE_DIR_ENV = "KGQUAL_PROFILE_DIR"


class ProfileError(ValueError):
    """A profile is malformed or cannot be found."""


@dataclass(frozen=True)
class MarkerRule:
    """Subjects of (s, predicate, object) triples are classes/properties.

    The object pattern is an exact IRI, an IRI suffix, or both.
    """

    predicate: str
    object: str | None = None
    object_suffix: str | None = None

    def __post_init__(self):
        if not self.predicate:
            raise ProfileError("marker rule without a predicate")
        if self.object is None and self.object_suffix is None:
            raise ProfileError("marker rule without an object pattern")

    def matches(self, object_iri: str) -> bool:
        if self.object is not None and object_iri != self.object:
            return False
        if self.object_suffix is not None and not object_iri.endswith(self.object_suffix):
            return False
        return True


@dataclass(frozen=True)
class ExtractionProfile:
    name: str
    type_predicate: str
    subclass_predicate: str
    domain_predicate: str
    class_marker: MarkerRule | None = None
    property_marker: MarkerRule | None = None
    label_predicate: str | None = None
    type_objects_are_classes: bool = False

    def __post_init__(self):
        if not self.type_predicate or not self.subclass_predicate:
            raise ProfileError(
                f"profile {self.name!r}: type_predicate and subclass_predicate are required"
            )


def parse_profile_text(text: str, name: str = "custom") -> ExtractionProfile:
    """Parse the `key = value` profile format (# starts a comment line)."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ProfileError(f"profile {name!r} line {line_no}: expected 'key = value'")
        key = key.strip()
        if key in values:
            raise ProfileError(f"profile {name!r} line {line_no}: duplicate key {key!r}")
        values[key] = value.strip()

    def take(key: str, default: str | None = None) -> str | None:
        return values.pop(key, default)

    def marker(prefix: str) -> MarkerRule | None:
        predicate = take(f"{prefix}_predicate")
        exact = take(f"{prefix}_object")
        suffix = take(f"{prefix}_object_suffix")
        if predicate is None and exact is None and suffix is None:
            return None
        if predicate is None:
            raise ProfileError(f"profile {name!r}: {prefix} rule needs {prefix}_predicate")
        return MarkerRule(predicate, exact, suffix)

    flag = take("type_objects_are_classes", "false").lower()
    if flag not in ("true", "false"):
        raise ProfileError(f"profile {name!r}: type_objects_are_classes must be true/false")

    profile = ExtractionProfile(
        name=name,
        type_predicate=take("type_predicate") or "",
        subclass_predicate=take("subclass_predicate") or "",
        domain_predicate=take("domain_predicate") or "",
        class_marker=marker("class_marker"),
        property_marker=marker("property_marker"),
        label_predicate=take("label_predicate"),
        type_objects_are_classes=flag == "true",
    )
    if values:
        unknown = ", ".join(sorted(values))
        raise ProfileError(f"profile {name!r}: unknown keys: {unknown}")
    return profile


def load_profile_file(path: str | Path) -> ExtractionProfile:
    path = Path(path)
    return parse_profile_text(path.read_text(encoding="utf-8"), name=path.stem)


def bundled_profile(name: str) -> ExtractionProfile:
    if name not in BUNDLED_PROFILE_NAMES:
        raise ProfileError(
            f"unknown bundled profile {name!r}; available: {', '.join(BUNDLED_PROFILE_NAMES)}"
        )
    text = resources.files("kgqual.data").joinpath(f"{name}.profile").read_text("utf-8")
    return parse_profile_text(text, name=name)


def resolve_profile(
    name: str | None = None,
    path: str | Path | None = None,
    search_dir: str | Path | None = None,
) -> ExtractionProfile:
    """Resolve a profile by name or explicit file path (exactly one).

    Named profiles are looked up first in `search_dir` (default: the
    KGQUAL_PROFILE_DIR environment variable), then among the bundled ones.
    """
    if (name is None) == (path is None):
        raise ProfileError("exactly one of profile name / profile file must be given")
    if path is not None:
        return load_profile_file(path)
    if search_dir is None:
        search_dir = os.environ.get(PROFILE_DIR_ENV)
    if search_dir:
        candidate = Path(search_dir) / f"{name}.profile"
        if candidate.is_file():
            return load_profile_file(candidate)
    return bundled_profile(name)
