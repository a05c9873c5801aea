"""Dictionary-encoded, immutable RDF triple storage.

Terms are interned into dense integer ids; triples are deduplicated
(s, p, o) id tuples with predicate and subject indexes. A finished
TripleStore is read-only and safe to share across threads; all mutation
happens in TripleStoreBuilder before `finish()`.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

from . import ntriples
from .ntriples import RDF_LANG_STRING, LineSyntaxError

IRI = "iri"
BNODE = "bnode"
LITERAL = "literal"

_GZIP_MAGIC = b"\x1f\x8b"


class ParseError(ValueError):
    """Strict-mode parse abort, carrying the offending position."""

    def __init__(self, message: str, line_no: int, byte_offset: int):
        super().__init__(f"line {line_no} (byte offset {byte_offset}): {message}")
        self.line_no = line_no
        self.byte_offset = byte_offset


@dataclass(frozen=True, slots=True)
class Term:
    """An RDF term: IRI, blank node, or literal.

    Equality is exact field equality; IRIs are never normalized. A literal
    carries at most one of datatype/language, except the language-string
    datatype which may accompany a tag.
    """

    kind: str
    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self):
        if self.kind == IRI and not self.lexical:
            raise ValueError("IRI term with empty lexical form")
        if self.kind != LITERAL and (self.datatype or self.language):
            raise ValueError("datatype/language are only valid on literals")
        if self.datatype and self.language and self.datatype != RDF_LANG_STRING:
            raise ValueError("literal with both datatype and language tag")

    def ntriples_token(self) -> str:
        if self.kind == IRI:
            return ntriples.format_iri(self.lexical)
        if self.kind == BNODE:
            return ntriples.format_bnode(self.lexical)
        return ntriples.format_literal(self.lexical, self.datatype, self.language)


def iri(text: str) -> Term:
    return Term(IRI, text)


def bnode(label: str) -> Term:
    return Term(BNODE, label)


def literal(text: str, datatype: str | None = None, language: str | None = None) -> Term:
    return Term(LITERAL, text, datatype, language)


class TermDict:
    """Append-only bidirectional mapping between terms and dense ids."""

    __slots__ = ("_terms", "_iris", "_bnodes", "_literals")

    def __init__(self):
        self._terms: list[Term] = []
        self._iris: dict[str, int] = {}
        self._bnodes: dict[str, int] = {}
        self._literals: dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self._terms)

    def term(self, term_id: int) -> Term:
        return self._terms[term_id]

    def intern_iri(self, text: str) -> int:
        term_id = self._iris.get(text)
        if term_id is None:
            term_id = len(self._terms)
            self._terms.append(Term(IRI, text))
            self._iris[text] = term_id
        return term_id

    def intern_bnode(self, label: str) -> int:
        term_id = self._bnodes.get(label)
        if term_id is None:
            term_id = len(self._terms)
            self._terms.append(Term(BNODE, label))
            self._bnodes[label] = term_id
        return term_id

    def intern_literal(self, text: str, datatype: str | None, language: str | None) -> int:
        key = (text, datatype, language)
        term_id = self._literals.get(key)
        if term_id is None:
            term_id = len(self._terms)
            self._terms.append(Term(LITERAL, text, datatype, language))
            self._literals[key] = term_id
        return term_id

    def intern(self, term: Term) -> int:
        if term.kind == IRI:
            return self.intern_iri(term.lexical)
        if term.kind == BNODE:
            return self.intern_bnode(term.lexical)
        return self.intern_literal(term.lexical, term.datatype, term.language)

    def find_iri(self, text: str) -> int | None:
        return self._iris.get(text)


@dataclass(frozen=True, slots=True)
class ParseCounters:
    """Statistics from one parse (or builder) run."""

    lines_read: int = 0
    parsed_triples: int = 0
    triples_kept: int = 0
    duplicates_dropped: int = 0
    malformed_skipped: int = 0

    def to_json(self) -> dict[str, int]:
        return {
            "lines_read": self.lines_read,
            "parsed_triples": self.parsed_triples,
            "triples_kept": self.triples_kept,
            "duplicates_dropped": self.duplicates_dropped,
            "malformed_skipped": self.malformed_skipped,
        }


@dataclass(frozen=True, slots=True)
class StoreStats:
    triple_count: int
    subject_count: int
    predicate_count: int
    term_count: int


@dataclass(frozen=True, slots=True)
class LabelFilterResult:
    """Outcome of a label-language filter.

    `retained_subjects` holds subject ids of the *source* store. The warning
    flag signals an unknown label predicate (likely profile misconfiguration).
    """

    store: "TripleStore"
    retained_subjects: frozenset[int]
    warning_unknown_predicate: bool


class TripleStore:
    """Immutable, deduplicated, indexed set of RDF triples."""

    __slots__ = ("_dict", "_triples", "_by_predicate", "_by_subject", "_counters")

    def __init__(
        self,
        term_dict: TermDict,
        triples: list[tuple[int, int, int]],
        by_predicate: dict[int, list[tuple[int, int, int]]],
        by_subject: dict[int, list[tuple[int, int, int]]],
        counters: ParseCounters,
    ):
        self._dict = term_dict
        self._triples = triples
        self._by_predicate = by_predicate
        self._by_subject = by_subject
        self._counters = counters

    @property
    def triple_count(self) -> int:
        return len(self._triples)

    @property
    def term_count(self) -> int:
        return len(self._dict)

    @property
    def counters(self) -> ParseCounters:
        return self._counters

    def term(self, term_id: int) -> Term:
        return self._dict.term(term_id)

    def find_iri(self, text: str) -> int | None:
        return self._dict.find_iri(text)

    def triples(self) -> Iterator[tuple[int, int, int]]:
        return iter(self._triples)

    def with_predicate(self, predicate_id: int) -> list[tuple[int, int, int]]:
        return self._by_predicate.get(predicate_id, [])

    def with_subject(self, subject_id: int) -> list[tuple[int, int, int]]:
        return self._by_subject.get(subject_id, [])

    def subject_ids(self) -> Iterable[int]:
        return self._by_subject.keys()

    def predicate_ids(self) -> Iterable[int]:
        return self._by_predicate.keys()

    def stats(self) -> StoreStats:
        return StoreStats(
            triple_count=len(self._triples),
            subject_count=len(self._by_subject),
            predicate_count=len(self._by_predicate),
            term_count=len(self._dict),
        )

    def term_triple_set(self) -> frozenset[tuple[Term, Term, Term]]:
        """Materialize the triple set at term level (for comparisons)."""
        term = self._dict.term
        return frozenset((term(s), term(p), term(o)) for s, p, o in self._triples)

    def serialize(self, out: BinaryIO) -> None:
        """Write the store as N-Triples, one triple per line, UTF-8."""
        term = self._dict.term
        write = out.write
        for s, p, o in self._triples:
            line = f"{term(s).ntriples_token()} {term(p).ntriples_token()} {term(o).ntriples_token()} .\n"
            write(line.encode("utf-8"))

    def serialize_to_bytes(self) -> bytes:
        buffer = io.BytesIO()
        self.serialize(buffer)
        return buffer.getvalue()


class TripleStoreBuilder:
    """Single-writer construction phase for TripleStore."""

    def __init__(self):
        self._dict = TermDict()
        self._triples: list[tuple[int, int, int]] = []
        self._seen: set[tuple[int, int, int]] = set()
        self._by_predicate: dict[int, list] = {}
        self._by_subject: dict[int, list] = {}
        self._finished = False

    def intern(self, term: Term) -> int:
        return self._dict.intern(term)

    def add(self, subject: Term, predicate: Term, obj: Term) -> bool:
        """Add one triple; returns False if it was a duplicate."""
        if predicate.kind != IRI:
            raise ValueError("predicate must be an IRI term")
        if subject.kind == LITERAL:
            raise ValueError("subject must be an IRI or blank node term")
        return self._add_ids(
            self._dict.intern(subject),
            self._dict.intern(predicate),
            self._dict.intern(obj),
        )

    def _add_ids(self, s: int, p: int, o: int) -> bool:
        triple = (s, p, o)
        if triple in self._seen:
            return False
        self._seen.add(triple)
        self._triples.append(triple)
        bucket = self._by_predicate.get(p)
        if bucket is None:
            bucket = self._by_predicate[p] = []
        bucket.append(triple)
        bucket = self._by_subject.get(s)
        if bucket is None:
            bucket = self._by_subject[s] = []
        bucket.append(triple)
        return True

    def add_parsed(self, parsed) -> bool:
        """Add a (subject, predicate, object) of ntriples term tuples."""
        s, p, o = parsed
        interned = []
        for term in (s, p, o):
            kind = term[0]
            if kind == "iri":
                interned.append(self._dict.intern_iri(term[1]))
            elif kind == "bnode":
                interned.append(self._dict.intern_bnode(term[1]))
            else:
                interned.append(self._dict.intern_literal(term[1], term[2], term[3]))
        return self._add_ids(interned[0], interned[1], interned[2])

    def finish(self, counters: ParseCounters | None = None) -> TripleStore:
        if self._finished:
            raise RuntimeError("builder already finished")
        self._finished = True
        if counters is None:
            kept = len(self._triples)
            counters = ParseCounters(triples_kept=kept, parsed_triples=kept)
        self._seen = set()
        return TripleStore(self._dict, self._triples, self._by_predicate, self._by_subject, counters)


def _open_byte_stream(source) -> BinaryIO:
    if isinstance(source, (bytes, bytearray)):
        raw: BinaryIO = io.BytesIO(bytes(source))
    elif isinstance(source, (str, Path)):
        raw = open(source, "rb")
    else:
        raw = source
    buffered = raw if hasattr(raw, "peek") else io.BufferedReader(raw)
    if buffered.peek(2)[:2] == _GZIP_MAGIC:
        return gzip.GzipFile(fileobj=buffered)
    return buffered


def _logical_lines(stream: BinaryIO) -> Iterator[tuple[str | None, int, int]]:
    """Yield (text, line_no, byte_offset) per logical line.

    Splits on LF; lone CR inside a physical line is also treated as a line
    terminator (the grammar's EOL covers both). text is None when the line
    is not valid UTF-8.
    """
    offset = 0
    line_no = 0
    first = True
    for raw in stream:
        start = offset
        offset += len(raw)
        raw = raw.rstrip(b"\r\n")
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            line_no += 1
            yield None, line_no, start
            continue
        if first:
            first = False
            if text.startswith("﻿"):
                text = text[1:]
        if "\r" in text:
            sub_offset = start
            for part in text.split("\r"):
                line_no += 1
                yield part, line_no, sub_offset
                sub_offset += len(part.encode("utf-8")) + 1
        else:
            line_no += 1
            yield text, line_no, start


def parse_ntriples(source, mode: str = "lenient") -> TripleStore:
    """Stream-parse N-Triples into an immutable TripleStore.

    `source` is a binary file object, bytes, or a path. gzip input is
    detected from its magic bytes; UTF-8 is required. In strict mode the
    first malformed line raises ParseError with line number and byte
    offset; in lenient mode malformed lines are counted and skipped and
    only I/O failures raise. Memory use is proportional to distinct terms
    plus kept triples, not to input size.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown parse mode: {mode!r}")
    strict = mode == "strict"

    builder = TripleStoreBuilder()
    add_parsed = builder.add_parsed
    parse_line = ntriples.parse_line

    lines_read = 0
    parsed = 0
    duplicates = 0
    malformed = 0

    stream = _open_byte_stream(source)
    for text, line_no, byte_offset in _logical_lines(stream):
        lines_read += 1
        if text is None:
            if strict:
                raise ParseError("invalid UTF-8", line_no, byte_offset)
            malformed += 1
            continue
        try:
            triple = parse_line(text)
        except LineSyntaxError as exc:
            if strict:
                raise ParseError(str(exc), line_no, byte_offset) from None
            malformed += 1
            continue
        if triple is None:
            continue
        parsed += 1
        if not add_parsed(triple):
            duplicates += 1

    counters = ParseCounters(
        lines_read=lines_read,
        parsed_triples=parsed,
        triples_kept=parsed - duplicates,
        duplicates_dropped=duplicates,
        malformed_skipped=malformed,
    )
    return builder.finish(counters)


def _language_matches(tag: str | None, wanted: str) -> bool:
    # RFC 4647 basic filtering: case-insensitive, subtag-boundary prefix.
    if tag is None:
        return False
    tag = tag.lower()
    wanted = wanted.lower()
    return tag == wanted or tag.startswith(wanted + "-")


def filter_by_label_language(
    store: TripleStore, label_predicate: str, language: str
) -> LabelFilterResult:
    """Keep only triples whose subject has a label literal in `language`.

    Returns a fresh store plus the retained subject ids of the source
    store. An unknown label predicate yields an empty store with the
    warning flag set rather than an error.
    """
    predicate_id = store.find_iri(label_predicate)
    if predicate_id is None:
        empty = TripleStoreBuilder().finish()
        return LabelFilterResult(empty, frozenset(), True)

    retained: set[int] = set()
    for s, _, o in store.with_predicate(predicate_id):
        obj = store.term(o)
        if obj.kind == LITERAL and _language_matches(obj.language, language):
            retained.add(s)

    builder = TripleStoreBuilder()
    term = store.term
    for s, p, o in store.triples():
        if s in retained:
            builder.add(term(s), term(p), term(o))
    return LabelFilterResult(builder.finish(), frozenset(retained), False)


def store_stats(store: TripleStore) -> StoreStats:
    """Triple, distinct-subject, distinct-predicate and term counts."""
    return store.stats()
