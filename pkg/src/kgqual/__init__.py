"""kgqual: structural quality metrics for RDF knowledge graphs.

Pipeline: stream-parse N-Triples into a dictionary-encoded TripleStore,
extract or load an ontology (class hierarchy plus property domains),
normalize it (cycle condensation, root synthesis), then compute six
structural quality metrics with exact rational arithmetic. A synthetic
generator and an independent brute-force oracle back the test suite.
"""

from .metrics import (
    UNDEFINED,
    InstanceIndex,
    MetricReport,
    PerClassMetrics,
    build_instance_index,
    ci_kg,
    class_instantiation,
    full_report,
    icr,
    imi,
    ipr,
    is_defined,
    spa,
    spa_summary,
    spi,
    spi_mean,
)
from .ontology import (
    CycleReport,
    EmptyOntologyError,
    OntologyGraph,
    UnknownClassError,
    condense_cycles,
    extract_ontology,
    load_ontology_triples,
    normalize,
    synthesize_root,
)
from .oracle import OracleGuardError, oracle_metrics
from .profiles import (
    ExtractionProfile,
    MarkerRule,
    ProfileError,
    bundled_profile,
    load_profile_file,
    parse_profile_text,
    resolve_profile,
)
from .store import (
    LabelFilterResult,
    ParseCounters,
    ParseError,
    StoreStats,
    Term,
    TripleStore,
    TripleStoreBuilder,
    bnode,
    filter_by_label_language,
    iri,
    literal,
    parse_ntriples,
    store_stats,
)
from .synth import GroundTruthLedger, SynthParamError, SynthParams, generate_kg, write_fixture

__version__ = "0.1.0"

__all__ = [
    "UNDEFINED",
    "CycleReport",
    "EmptyOntologyError",
    "ExtractionProfile",
    "GroundTruthLedger",
    "InstanceIndex",
    "LabelFilterResult",
    "MarkerRule",
    "MetricReport",
    "OntologyGraph",
    "OracleGuardError",
    "ParseCounters",
    "ParseError",
    "PerClassMetrics",
    "ProfileError",
    "StoreStats",
    "SynthParamError",
    "SynthParams",
    "Term",
    "TripleStore",
    "TripleStoreBuilder",
    "UnknownClassError",
    "bnode",
    "build_instance_index",
    "bundled_profile",
    "ci_kg",
    "class_instantiation",
    "condense_cycles",
    "extract_ontology",
    "filter_by_label_language",
    "full_report",
    "generate_kg",
    "icr",
    "imi",
    "ipr",
    "iri",
    "is_defined",
    "literal",
    "load_ontology_triples",
    "load_profile_file",
    "normalize",
    "oracle_metrics",
    "parse_ntriples",
    "parse_profile_text",
    "resolve_profile",
    "spa",
    "spa_summary",
    "spi",
    "spi_mean",
    "store_stats",
    "synthesize_root",
    "write_fixture",
]
