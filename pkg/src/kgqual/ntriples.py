"""Line-level N-Triples grammar: parsing and serialization.

Implements the W3C RDF 1.1 N-Triples grammar. Each content line is matched
in a single pass against one compiled regex that encodes the whole grammar
(IRIREF, BLANK_NODE_LABEL, STRING_LITERAL_QUOTE, LANGTAG, UCHAR/ECHAR
escapes). Escapes are decoded afterwards, and IRIs are checked for
absoluteness, which the character-level grammar cannot express.

Terms at this layer are plain tuples so the tokenizer stays free of any
storage concerns:

    ("iri", text)
    ("bnode", label)
    ("literal", text, datatype_or_None, language_or_None)
"""

from __future__ import annotations

import re

RDF_LANG_STRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"


class LineSyntaxError(ValueError):
    """A single line violated the N-Triples grammar."""


# Character classes from the W3C grammar. PN_CHARS_U includes ':' because
# N-Triples follows the SPARQL production, unlike Turtle.
_PN_CHARS_BASE = (
    "A-Za-z"
    "\u00c0-\u00d6\u00d8-\u00f6\u00f8-\u02ff\u0370-\u037d\u037f-\u1fff"
    "\u200c-\u200d\u2070-\u218f\u2c00-\u2fef\u3001-\ud7ff\uf900-\ufdcf"
    "\ufdf0-\ufffd\U00010000-\U000effff"
)
_PN_CHARS_U = _PN_CHARS_BASE + "_:"
_PN_CHARS = _PN_CHARS_U + "\\-0-9\u00b7\u0300-\u036f\u203f-\u2040"

_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_IRIREF = r'<(?:[^\x00-\x20<>"{}|^`\\]|' + _UCHAR + r")*>"
_BNODE = "_:[" + _PN_CHARS_U + "0-9](?:[" + _PN_CHARS + ".]*[" + _PN_CHARS + "])?"
_STRING = r'"(?:[^"\\\n\r]|\\[tbnrf"\'\\]|' + _UCHAR + r')*"'
_LANGTAG = r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"

_TRIPLE_RE = re.compile(
    "[ \t]*(?:(?P<s_iri>" + _IRIREF + ")|(?P<s_bnode>" + _BNODE + "))"
    "[ \t]*(?P<p_iri>" + _IRIREF + ")"
    "[ \t]*(?:(?P<o_iri>" + _IRIREF + ")|(?P<o_bnode>" + _BNODE + ")"
    "|(?P<o_lex>" + _STRING + ")"
    "(?:\\^\\^(?P<o_dt>" + _IRIREF + ")|(?P<o_lang>" + _LANGTAG + "))?)"
    "[ \t]*\\.[ \t]*(?:#.*)?"
)

# Absolute IRIs must start with an RFC 3987 scheme.
_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")

_UNESCAPE_RE = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})|\\(.)")
_ECHAR = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape(text: str, where: str) -> str:
    def repl(match: re.Match) -> str:
        hex4, hex8, echar = match.groups()
        if echar is not None:
            return _ECHAR[echar]
        code_point = int(hex4 or hex8, 16)
        if 0xD800 <= code_point <= 0xDFFF:
            raise LineSyntaxError(f"surrogate code point U+{code_point:04X} in {where}")
        try:
            return chr(code_point)
        except (ValueError, OverflowError):
            raise LineSyntaxError(f"code point out of range in {where}") from None

    return _UNESCAPE_RE.sub(repl, text)


def _iri_value(token: str) -> str:
    iri = token[1:-1]
    if "\\" in iri:
        iri = _unescape(iri, "IRI")
    if _SCHEME_RE.match(iri) is None:
        raise LineSyntaxError(f"relative IRI <{iri}>")
    return iri


def parse_line(line: str):
    """Parse one logical line (no trailing EOL characters).

    Returns a (subject, predicate, object) tuple of term tuples, or None
    for blank and comment-only lines. Raises LineSyntaxError on any
    grammar violation.
    """
    stripped = line.strip(" \t")
    if not stripped or stripped[0] == "#":
        return None
    match = _TRIPLE_RE.fullmatch(line)
    if match is None:
        raise LineSyntaxError("not a valid N-Triples statement")

    token = match.group("s_iri")
    if token is not None:
        subject = ("iri", _iri_value(token))
    else:
        subject = ("bnode", match.group("s_bnode")[2:])

    predicate = ("iri", _iri_value(match.group("p_iri")))

    token = match.group("o_iri")
    if token is not None:
        obj = ("iri", _iri_value(token))
    else:
        token = match.group("o_bnode")
        if token is not None:
            obj = ("bnode", token[2:])
        else:
            lex = match.group("o_lex")[1:-1]
            if "\\" in lex:
                lex = _unescape(lex, "string literal")
            datatype = match.group("o_dt")
            language = match.group("o_lang")
            obj = (
                "literal",
                lex,
                _iri_value(datatype) if datatype is not None else None,
                language[1:] if language is not None else None,
            )
    return subject, predicate, obj


# Serialization. Output is canonical enough to round-trip: required escapes
# plus all C0 controls and DEL, everything else as raw UTF-8.

_IRI_ESCAPE_RE = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_LITERAL_ESCAPE_RE = re.compile(r'[\x00-\x1f"\\\x7f]')
_LITERAL_NAMED = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_iri_char(match: re.Match) -> str:
    return "\\u%04X" % ord(match.group())


def _escape_literal_char(match: re.Match) -> str:
    char = match.group()
    return _LITERAL_NAMED.get(char) or "\\u%04X" % ord(char)


def format_iri(text: str) -> str:
    return "<" + _IRI_ESCAPE_RE.sub(_escape_iri_char, text) + ">"


def format_bnode(label: str) -> str:
    return "_:" + label


def format_literal(text: str, datatype: str | None = None, language: str | None = None) -> str:
    body = '"' + _LITERAL_ESCAPE_RE.sub(_escape_literal_char, text) + '"'
    if language is not None:
        return body + "@" + language
    if datatype is not None:
        return body + "^^" + format_iri(datatype)
    return body
