"""Parser for the ASCII concrete syntax of λSym terms, types and contexts.

Types::

    A ::= a | ~a | ~(A) | A /\\ A | A \\/ A | # | (A)

``/\\`` binds tighter than ``\\/``; both associate to the left.  ``~(A)`` is
the de Morgan dual of ``A`` (negation is not a connective).

Terms::

    P ::= x | <P, P> | inl[B] P | inr[A] P | \\x:A. P | (P * P) | (P)
"""

from __future__ import annotations

from ._lexer import ParseError, Parser
from .sym_core import (
    BOTTOM,
    And,
    Atom,
    Inj,
    Lam,
    NegAtom,
    Or,
    Pair,
    Star,
    SymTerm,
    SymType,
    Var,
    is_mtype,
    neg_type,
)

__all__ = ["parse_sym_type", "parse_sym_term", "parse_sym_context", "ParseError"]


class _SymParser(Parser):
    keywords = frozenset({"inl", "inr"})

    # types ---------------------------------------------------------------

    def type_(self) -> SymType:
        left = self.conj()
        while self.at("\\/"):
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self) -> SymType:
        left = self.type_atom()
        while self.at("/\\"):
            self.advance()
            left = And(left, self.type_atom())
        return left

    def type_atom(self) -> SymType:
        if self.at("#"):
            self.advance()
            return BOTTOM
        if self.at("("):
            self.advance()
            a = self.type_()
            self.expect(")")
            return a
        if self.at("~"):
            tok = self.advance()
            if self.at("("):
                self.advance()
                a = self.type_()
                self.expect(")")
                if not is_mtype(a):
                    raise self.error("'~' applies to m-types only", tok)
                return neg_type(a)
            return NegAtom(self.type_name())
        return Atom(self.type_name())

    def type_name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text.startswith("!"):
            raise self.error("expected a type")
        self.advance()
        return tok.text

    def mtype(self) -> SymType:
        tok = self.peek()
        a = self.type_()
        if not is_mtype(a):
            raise self.error("expected an m-type ('#' is not allowed here)", tok)
        return a

    # terms ---------------------------------------------------------------

    def term(self) -> SymTerm:
        tok = self.peek()
        if self.at("<"):
            self.advance()
            p = self.term()
            self.expect(",")
            q = self.term()
            self.expect(">")
            return Pair(p, q)
        if tok.kind == "ident" and tok.text in ("inl", "inr"):
            self.advance()
            self.expect("[")
            other = self.mtype()
            self.expect("]")
            return Inj(1 if tok.text == "inl" else 2, other, self.term())
        if self.at("\\"):
            self.advance()
            x = self.ident()
            self.expect(":")
            ann = self.mtype()
            self.expect(".")
            return Lam(x, ann, self.term())
        if self.at("("):
            self.advance()
            p = self.term()
            if self.at("*"):
                self.advance()
                q = self.term()
                self.expect(")")
                return Star(p, q)
            self.expect(")")
            return p
        if tok.kind == "ident":
            return Var(self.ident())
        raise self.error("expected a term")

    def context(self) -> dict[str, SymType]:
        ctx: dict[str, SymType] = {}
        if self.peek().kind == "eof":
            return ctx
        while True:
            tok = self.peek()
            x = self.ident()
            self.expect(":")
            a = self.mtype()
            if x in ctx:
                raise self.error(f"variable {x} bound twice in context", tok)
            ctx[x] = a
            if not self.at(","):
                return ctx
            self.advance()


def parse_sym_type(source: str) -> SymType:
    p = _SymParser(source)
    a = p.type_()
    p.finish()
    return a


def parse_sym_term(source: str, allow_reserved: bool = False) -> SymTerm:
    p = _SymParser(source, allow_reserved)
    m = p.term()
    p.finish()
    return m


def parse_sym_context(source: str, allow_reserved: bool = False) -> dict[str, SymType]:
    """Parse ``x:A, y:B, ...`` (possibly empty)."""
    p = _SymParser(source, allow_reserved)
    ctx = p.context()
    p.finish()
    return ctx
