"""Parser for the ASCII concrete syntax of λ̄μμ̃* terms, types and sequents.

Types::

    A ::= a | A -> A | ~A | (A)        (-> is right-associative)

Terms::

    p ::= < t | e >
    t ::= x | \\x:A. t | mu a:A. p | bar(e) | (t)
    e ::= a | t . e | mut x:A. p | tilde(t) | (e)

In r-term position an identifier directly followed by ``.`` is the head of a
``t . e`` cons; otherwise it is an r-variable.
"""

from __future__ import annotations

from ._lexer import ParseError, Parser
from .lmm_core import (
    Arrow,
    Atom,
    BarE,
    Cons,
    Cut,
    Lam,
    LmmSequent,
    LmmTerm,
    LmmType,
    LVar,
    Mu,
    MuTilde,
    Neg,
    RVar,
    TildeT,
)

__all__ = ["parse_lmm_type", "parse_lmm_term", "parse_lmm_sequent", "ParseError"]


class _LmmParser(Parser):
    keywords = frozenset({"mu", "mut", "bar", "tilde"})

    def type_(self) -> LmmType:
        dom = self.type_prefix()
        if self.at("->"):
            self.advance()
            return Arrow(dom, self.type_())
        return dom

    def type_prefix(self) -> LmmType:
        if self.at("~"):
            self.advance()
            return Neg(self.type_prefix())
        if self.at("("):
            self.advance()
            a = self.type_()
            self.expect(")")
            return a
        tok = self.peek()
        if tok.kind != "ident" or tok.text.startswith("!"):
            raise self.error("expected a type")
        self.advance()
        return Atom(tok.text)

    def binder(self) -> tuple[str, LmmType]:
        x = self.ident()
        self.expect(":")
        a = self.type_()
        self.expect(".")
        return x, a

    def cterm(self) -> LmmTerm:
        self.expect("<")
        t = self.lterm()
        self.expect("|")
        e = self.rterm()
        self.expect(">")
        return Cut(t, e)

    def lterm(self) -> LmmTerm:
        tok = self.peek()
        if self.at("\\"):
            self.advance()
            x, a = self.binder()
            return Lam(x, a, self.lterm())
        if tok.kind == "ident" and tok.text == "mu":
            self.advance()
            x, a = self.binder()
            return Mu(x, a, self.cterm())
        if tok.kind == "ident" and tok.text == "bar":
            self.advance()
            self.expect("(")
            e = self.rterm()
            self.expect(")")
            return BarE(e)
        if self.at("("):
            self.advance()
            t = self.lterm()
            self.expect(")")
            return t
        if tok.kind == "ident":
            return LVar(self.ident())
        raise self.error("expected an l-term")

    def rterm(self) -> LmmTerm:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "mut":
            self.advance()
            x, a = self.binder()
            return MuTilde(x, a, self.cterm())
        if tok.kind == "ident" and tok.text == "tilde":
            self.advance()
            self.expect("(")
            t = self.lterm()
            self.expect(")")
            return TildeT(t)
        if tok.kind == "ident" and tok.text not in self.keywords and self.peek(1).text != ".":
            return RVar(self.ident())
        if self.at("("):
            saved = self.i
            try:
                return self.cons()
            except ParseError:
                self.i = saved
            self.advance()
            e = self.rterm()
            self.expect(")")
            return e
        return self.cons()

    def cons(self) -> LmmTerm:
        t = self.lterm()
        self.expect(".")
        return Cons(t, self.rterm())

    def context_entries(self, stop: str | None) -> dict[str, LmmType]:
        out: dict[str, LmmType] = {}
        if self.peek().kind == "eof" or (stop and self.at(stop)):
            return out
        while True:
            tok = self.peek()
            x = self.ident()
            self.expect(":")
            a = self.type_()
            if x in out:
                raise self.error(f"variable {x} declared twice", tok)
            out[x] = a
            if not self.at(","):
                return out
            self.advance()


def parse_lmm_type(source: str) -> LmmType:
    p = _LmmParser(source)
    a = p.type_()
    p.finish()
    return a


def parse_lmm_term(source: str, sort: str | None = None, allow_reserved: bool = False) -> LmmTerm:
    """Parse a term of the given sort (``"c"``, ``"l"`` or ``"r"``).

    Without `sort`, a leading ``<`` means a c-term; otherwise an l-term is
    tried first and an r-term second.
    """
    p = _LmmParser(source, allow_reserved)
    if sort is None:
        if p.at("<"):
            sort = "c"
        else:
            try:
                return parse_lmm_term(source, "l", allow_reserved)
            except ParseError as first:
                try:
                    return parse_lmm_term(source, "r", allow_reserved)
                except ParseError:
                    raise first from None
    parse = {"c": p.cterm, "l": p.lterm, "r": p.rterm}.get(sort)
    if parse is None:
        raise ValueError(f"unknown sort {sort!r}")
    u = parse()
    p.finish()
    return u


def parse_lmm_sequent(source: str, allow_reserved: bool = False) -> LmmSequent:
    """Parse ``x:A, y:B | a:C, b:D``; the ``| ...`` part (Δ) is optional."""
    p = _LmmParser(source, allow_reserved)
    gamma = p.context_entries("|")
    delta: dict[str, LmmType] = {}
    if p.at("|"):
        p.advance()
        delta = p.context_entries(None)
    p.finish()
    clash = gamma.keys() & delta.keys()
    if clash:
        raise ParseError(f"names used on both sides: {', '.join(sorted(clash))}", source, 0)
    return LmmSequent(gamma, delta)
