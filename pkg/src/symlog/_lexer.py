"""Tokenizer and parser scaffolding shared by both concrete grammars."""

from __future__ import annotations

import re
from dataclasses import dataclass

RESERVED_PREFIX = "!"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>!?[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>/\\|\\/|->|[\\:.<>,*()\[\]~#|])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, source: str, pos: int):
        self.source = source
        self.pos = pos
        self.line = source.count("\n", 0, pos) + 1
        self.col = pos - (source.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{self.line}:{self.col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "punct" or "eof"
    text: str
    pos: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", source, pos)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(source)))
    return tokens


class Parser:
    keywords: frozenset[str] = frozenset()

    def __init__(self, source: str, allow_reserved: bool = False):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0
        self.allow_reserved = allow_reserved

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.text == text

    def advance(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", self.source, tok.pos)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in self.keywords:
            raise self.error("expected an identifier")
        if tok.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise self.error("names starting with '!' are reserved")
        self.advance()
        return tok.text

    def finish(self) -> None:
        if self.peek().kind != "eof":
            raise self.error("unexpected trailing input")
