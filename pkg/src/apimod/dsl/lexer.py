"""Shared lexer for all textual model formats.

Produces a flat token stream with 1-based spans. `//` comments run to end of
line. Names containing spaces (or clashing with a keyword) are double-quoted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..core import SourceSpan


class TokKind(Enum):
    IDENT = "identifier"
    STRING = "string"
    NUMBER = "number"
    PUNCT = "punctuation"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokKind
    value: str  # decoded text for STRING, lexeme otherwise
    span: SourceSpan


#: Reserved words across all dialects; a model name equal to one of these
#: must be written quoted.
KEYWORDS = frozenset({
    "valuemodel", "goalmodel", "scenario", "metric", "api",
    "actor", "activity", "flow", "stimulus", "depend", "partof",
    "goal", "task", "quality", "resource",
    "and", "or", "makes", "helps", "hurts", "breaks",
    "layer", "bapo", "status", "in", "from", "to", "group", "market",
    "draft", "label",
    "stage", "observed", "curve", "rationale",
    "what", "why", "who", "where", "dimensions", "automation", "links",
})

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[0-9]+(\.[0-9]+)?")
_PUNCT = ("->", "{", "}", "(", ")", "=", ":", ",", ".")


class LexError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def span(l0: int, c0: int, l1: int, c1: int) -> SourceSpan:
        return SourceSpan(filename, l0, c0, l1, c1)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if ch == '"':
            l0, c0 = line, col
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise LexError("unterminated string", span(l0, c0, line, col))
                if text[i] == "\\" and i + 1 < n and text[i + 1] in '"\\':
                    buf.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                buf.append(text[i])
                i += 1
                col += 1
            if i >= n:
                raise LexError("unterminated string", span(l0, c0, line, col))
            i += 1
            col += 1
            tokens.append(Token(TokKind.STRING, "".join(buf), span(l0, c0, line, col - 1)))
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            lex = m.group(0)
            tokens.append(Token(TokKind.NUMBER, lex, span(line, col, line, col + len(lex) - 1)))
            i = m.end()
            col += len(lex)
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            lex = m.group(0)
            tokens.append(Token(TokKind.IDENT, lex, span(line, col, line, col + len(lex) - 1)))
            i = m.end()
            col += len(lex)
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token(TokKind.PUNCT, p, span(line, col, line, col + len(p) - 1)))
                i += len(p)
                col += len(p)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", span(line, col, line, col))

    tokens.append(Token(TokKind.EOF, "", span(line, col, line, col)))
    return tokens


def is_bare_name(s: str) -> bool:
    """True if `s` can be printed unquoted."""
    return bool(_IDENT_RE.fullmatch(s)) and s not in KEYWORDS


def quote_name(s: str) -> str:
    if is_bare_name(s):
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'
