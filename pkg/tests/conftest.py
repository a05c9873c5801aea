from pathlib import Path

import pytest

from kgqual.profiles import (
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_LABEL,
    RDFS_SUBCLASS_OF,
    ExtractionProfile,
)
from kgqual.store import TripleStore, TripleStoreBuilder, iri

DATA_DIR = Path(__file__).parent / "data"

EX = "http://example.org/kg#"


def ex(name: str) -> str:
    return EX + name


def build_store(triples) -> TripleStore:
    """Build a store from (Term, Term, Term) triples."""
    builder = TripleStoreBuilder()
    for s, p, o in triples:
        builder.add(s, p, o)
    return builder.finish()


def subclass(child: str, parent: str):
    return iri(ex(child)), iri(RDFS_SUBCLASS_OF), iri(ex(parent))


def typed(entity: str, cls: str):
    return iri(ex(entity)), iri(RDF_TYPE), iri(ex(cls))


def domain(prop: str, cls: str):
    return iri(ex(prop)), iri(RDFS_DOMAIN), iri(ex(cls))


GENERIC_PROFILE = ExtractionProfile(
    name="generic",
    type_predicate=RDF_TYPE,
    subclass_predicate=RDFS_SUBCLASS_OF,
    domain_predicate=RDFS_DOMAIN,
    label_predicate=RDFS_LABEL,
)


@pytest.fixture
def generic_profile() -> ExtractionProfile:
    return GENERIC_PROFILE


@pytest.fixture(scope="session")
def figure1_path() -> Path:
    return DATA_DIR / "figure1.nt"
