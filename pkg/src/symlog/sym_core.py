"""Syntax, typing and substitution for the symmetric lambda calculus (λSym-Prop).

Types are m-types built from atoms and negated atoms with ``/\\`` and ``\\/``,
plus the separate type ``#`` (bottom) given to terms of the form ``(P * Q)``
and to λ-bodies.  Negation is not a connective: :func:`neg_type` computes the
de Morgan dual, which is an involution.

Terms are immutable.  ``==`` on terms is α-equivalence, implemented by
comparing a cached de Bruijn key; use :func:`format_term` when the concrete
names matter.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from ._names import fresh


class SymTypeError(Exception):
    """A λSym term does not typecheck."""


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class NegAtom:
    name: str

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class And:
    left: SymType
    right: SymType

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class Or:
    left: SymType
    right: SymType

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "#"


BOTTOM = Bottom()

SymType = Union[Atom, NegAtom, And, Or, Bottom]


def is_mtype(a: SymType) -> bool:
    if isinstance(a, (Atom, NegAtom)):
        return True
    if isinstance(a, (And, Or)):
        return is_mtype(a.left) and is_mtype(a.right)
    return False


def neg_type(a: SymType) -> SymType:
    """De Morgan dual of an m-type."""
    if isinstance(a, Atom):
        return NegAtom(a.name)
    if isinstance(a, NegAtom):
        return Atom(a.name)
    if isinstance(a, And):
        return Or(neg_type(a.left), neg_type(a.right))
    if isinstance(a, Or):
        return And(neg_type(a.left), neg_type(a.right))
    raise ValueError("negation defined on m-types only")


def cxty_type(a: SymType) -> int:
    if isinstance(a, (And, Or)):
        return 1 + cxty_type(a.left) + cxty_type(a.right)
    return 0


def format_type(a: SymType, prec: int = 0) -> str:
    # precedence: \/ = 1, /\ = 2, atoms = 3; both connectives associate left
    if isinstance(a, Atom):
        return a.name
    if isinstance(a, NegAtom):
        return "~" + a.name
    if isinstance(a, Bottom):
        return "#"
    if isinstance(a, Or):
        s = f"{format_type(a.left, 1)} \\/ {format_type(a.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(a, And):
        s = f"{format_type(a.left, 2)} /\\ {format_type(a.right, 3)}"
        return f"({s})" if prec > 2 else s
    raise TypeError(f"not a λSym type: {a!r}")


# ---------------------------------------------------------------------------
# terms


class SymTerm:
    """Base class of λSym terms; equality and hashing are up to α."""

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, SymTerm):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return format_term(self)

    @property
    def children(self) -> tuple[SymTerm, ...]:
        raise NotImplementedError

    def rebuild(self, children: Sequence[SymTerm]) -> SymTerm:
        raise NotImplementedError

    @cached_property
    def key(self) -> str:
        """Canonical de Bruijn rendering: equal keys iff α-equivalent."""
        return _key(self, {}, 0, symmetric=False)

    @cached_property
    def sym_key(self) -> str:
        """Like :attr:`key`, but invariant under swapping the sides of ``*``."""
        return _key(self, {}, 0, symmetric=True)

    @cached_property
    def fv(self) -> frozenset[str]:
        return frozenset().union(*(c.fv for c in self.children))

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)


@dataclass(frozen=True, eq=False)
class Var(SymTerm):
    x: str

    @property
    def children(self) -> tuple[SymTerm, ...]:
        return ()

    def rebuild(self, children: Sequence[SymTerm]) -> SymTerm:
        return self

    @cached_property
    def fv(self) -> frozenset[str]:
        return frozenset((self.x,))


@dataclass(frozen=True, eq=False)
class Pair(SymTerm):
    p1: SymTerm
    p2: SymTerm

    @property
    def children(self) -> tuple[SymTerm, ...]:
        return (self.p1, self.p2)

    def rebuild(self, children: Sequence[SymTerm]) -> SymTerm:
        return Pair(children[0], children[1])


@dataclass(frozen=True, eq=False)
class Inj(SymTerm):
    """``σ_side(body)``; `other` is the disjunct the body does not inhabit."""

    side: int
    other: SymType
    body: SymTerm

    def __post_init__(self) -> None:
        if self.side not in (1, 2):
            raise ValueError(f"injection side must be 1 or 2, got {self.side}")

    @property
    def children(self) -> tuple[SymTerm, ...]:
        return (self.body,)

    def rebuild(self, children: Sequence[SymTerm]) -> SymTerm:
        return Inj(self.side, self.other, children[0])


@dataclass(frozen=True, eq=False)
class Lam(SymTerm):
    binder: str
    ann: SymType
    body: SymTerm

    @property
    def children(self) -> tuple[SymTerm, ...]:
        return (self.body,)

    def rebuild(self, children: Sequence[SymTerm]) -> SymTerm:
        return Lam(self.binder, self.ann, children[0])

    @cached_property
    def fv(self) -> frozenset[str]:
        return self.body.fv - {self.binder}


@dataclass(frozen=True, eq=False)
class Star(SymTerm):
    left: SymTerm
    right: SymTerm

    @property
    def children(self) -> tuple[SymTerm, ...]:
        return (self.left, self.right)

    def rebuild(self, children: Sequence[SymTerm]) -> SymTerm:
        return Star(children[0], children[1])


def _key(m: SymTerm, env: dict[str, int], depth: int, symmetric: bool) -> str:
    if isinstance(m, Var):
        level = env.get(m.x)
        return f"${m.x}" if level is None else f"%{depth - level}"
    if isinstance(m, Lam):
        saved = env.get(m.binder)
        env[m.binder] = depth + 1
        body = _key(m.body, env, depth + 1, symmetric)
        if saved is None:
            del env[m.binder]
        else:
            env[m.binder] = saved
        return f"L[{format_type(m.ann)}]({body})"
    if isinstance(m, Inj):
        return f"I{m.side}[{format_type(m.other)}]({_key(m.body, env, depth, symmetric)})"
    a = _key(m.children[0], env, depth, symmetric)
    b = _key(m.children[1], env, depth, symmetric)
    if isinstance(m, Pair):
        return f"P({a},{b})"
    if symmetric and b < a:
        a, b = b, a
    return f"S({a},{b})"


def format_term(m: SymTerm) -> str:
    if isinstance(m, Var):
        return m.x
    if isinstance(m, Pair):
        return f"<{format_term(m.p1)}, {format_term(m.p2)}>"
    if isinstance(m, Inj):
        kw = "inl" if m.side == 1 else "inr"
        return f"{kw}[{format_type(m.other)}] {format_term(m.body)}"
    if isinstance(m, Lam):
        return f"\\{m.binder}:{format_type(m.ann)}. {format_term(m.body)}"
    if isinstance(m, Star):
        return f"({format_term(m.left)} * {format_term(m.right)})"
    raise TypeError(f"not a λSym term: {m!r}")


SymContext = Mapping[str, SymType]


def format_context(ctx: SymContext) -> str:
    return ", ".join(f"{x}:{format_type(a)}" for x, a in ctx.items())


# ---------------------------------------------------------------------------
# paths


Path = tuple[int, ...]


def subterm(m: SymTerm, path: Sequence[int]) -> SymTerm:
    for i in path:
        kids = m.children
        if i >= len(kids):
            raise IndexError(f"path {tuple(path)} leaves the term")
        m = kids[i]
    return m


def replace_at(m: SymTerm, path: Sequence[int], new: SymTerm) -> SymTerm:
    if not path:
        return new
    kids = list(m.children)
    i = path[0]
    if i >= len(kids):
        raise IndexError(f"path {tuple(path)} leaves the term")
    kids[i] = replace_at(kids[i], path[1:], new)
    return m.rebuild(kids)


def positions(m: SymTerm, path: Path = ()) -> Iterator[tuple[Path, SymTerm]]:
    """All subterms in pre-order (outermost first, then left to right)."""
    yield path, m
    for i, c in enumerate(m.children):
        yield from positions(c, path + (i,))


def free_vars(m: SymTerm) -> set[str]:
    return set(m.fv)


def cxty_term(m: SymTerm) -> int:
    if isinstance(m, Var):
        return 0
    if isinstance(m, (Lam, Inj)):
        return 1 + cxty_term(m.body)
    return cxty_term(m.children[0]) + cxty_term(m.children[1])


def all_names(m: SymTerm) -> set[str]:
    names = set(m.fv)
    for _, s in positions(m):
        if isinstance(s, Lam):
            names.add(s.binder)
    return names


def count_free(m: SymTerm, x: str) -> int:
    if isinstance(m, Var):
        return int(m.x == x)
    if isinstance(m, Lam) and m.binder == x:
        return 0
    if x not in m.fv:
        return 0
    return sum(count_free(c, x) for c in m.children)


# ---------------------------------------------------------------------------
# substitution


@dataclass(frozen=True)
class SimSubstitution:
    """``[x1:=N1, ..., xk:=Nk]`` with every ``Ni`` proper and of type `type`."""

    pairs: tuple[tuple[str, SymTerm], ...]
    type: SymType

    @property
    def domain(self) -> set[str]:
        return {x for x, _ in self.pairs}

    @property
    def image(self) -> list[SymTerm]:
        return [n for _, n in self.pairs]

    def as_dict(self) -> dict[str, SymTerm]:
        return dict(self.pairs)

    def validate(self, ctx: SymContext) -> None:
        """Raise :class:`SymTypeError` unless every image is proper and of the declared type."""
        if len(self.domain) != len(self.pairs):
            raise SymTypeError("substitution domain has a repeated variable")
        for x, n in self.pairs:
            if isinstance(n, Var):
                raise SymTypeError(f"image of {x} is a variable, not a proper term")
            got, _ = typecheck_sym(ctx, n)
            if got != self.type:
                raise SymTypeError(
                    f"image of {x} has type {format_type(got)}, expected {format_type(self.type)}"
                )


def substitute(m: SymTerm, x: str, n: SymTerm) -> SymTerm:
    return _subst(m, {x: n})


def apply_sim_subst(m: SymTerm, s: SimSubstitution | Mapping[str, SymTerm]) -> SymTerm:
    mapping = s.as_dict() if isinstance(s, SimSubstitution) else dict(s)
    return _subst(m, mapping)


def _subst(m: SymTerm, s: Mapping[str, SymTerm]) -> SymTerm:
    if isinstance(m, Var):
        return s.get(m.x, m)
    live = {x: n for x, n in s.items() if x in m.fv}
    if not live:
        return m
    if isinstance(m, Lam):
        incoming = frozenset().union(*(n.fv for n in live.values()))
        binder = m.binder
        if binder in incoming:
            binder = fresh(m.binder, incoming | m.body.fv | live.keys())
            live[m.binder] = Var(binder)
        return Lam(binder, m.ann, _subst(m.body, live))
    return m.rebuild([_subst(c, live) for c in m.children])


# ---------------------------------------------------------------------------
# typing


@dataclass(frozen=True, eq=False)
class SymDerivation:
    rule: str  # "var", "pair", "inj1", "inj2", "lam", "star"
    ctx: SymContext
    term: SymTerm
    type: SymType
    children: tuple[SymDerivation, ...] = field(default=())

    def nodes(self, path: Path = ()) -> Iterator[tuple[Path, SymDerivation]]:
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.nodes(path + (i,))

    def types_by_path(self) -> dict[Path, SymType]:
        return {p: d.type for p, d in self.nodes()}


def typecheck_sym(ctx: SymContext, m: SymTerm) -> tuple[SymType, SymDerivation]:
    """Compute the unique type of `m` under `ctx` with its derivation."""
    for x, a in ctx.items():
        if not is_mtype(a):
            raise SymTypeError(f"context binds {x} to {format_type(a)}, not an m-type")
    d = _derive(dict(ctx), m)
    return d.type, d


def type_of(ctx: SymContext, m: SymTerm) -> SymType:
    return typecheck_sym(ctx, m)[0]


def _require_mtype(d: SymDerivation, where: str) -> None:
    if isinstance(d.type, Bottom):
        raise SymTypeError(f"{where} has type #, an m-type is required: {format_term(d.term)}")


def _derive(ctx: dict[str, SymType], m: SymTerm) -> SymDerivation:
    if isinstance(m, Var):
        if m.x not in ctx:
            raise SymTypeError(f"unbound variable {m.x}")
        return SymDerivation("var", ctx, m, ctx[m.x])
    if isinstance(m, Pair):
        d1, d2 = _derive(ctx, m.p1), _derive(ctx, m.p2)
        _require_mtype(d1, "pair component")
        _require_mtype(d2, "pair component")
        return SymDerivation("pair", ctx, m, And(d1.type, d2.type), (d1, d2))
    if isinstance(m, Inj):
        if not is_mtype(m.other):
            raise SymTypeError(f"injection annotation {format_type(m.other)} is not an m-type")
        d = _derive(ctx, m.body)
        _require_mtype(d, "injected term")
        a = Or(d.type, m.other) if m.side == 1 else Or(m.other, d.type)
        return SymDerivation(f"inj{m.side}", ctx, m, a, (d,))
    if isinstance(m, Lam):
        if not is_mtype(m.ann):
            raise SymTypeError(f"binder {m.binder} annotated with {format_type(m.ann)}, not an m-type")
        inner = {**ctx, m.binder: m.ann}
        d = _derive(inner, m.body)
        if not isinstance(d.type, Bottom):
            raise SymTypeError(
                f"body of \\{m.binder} has type {format_type(d.type)}, expected #"
            )
        return SymDerivation("lam", ctx, m, neg_type(m.ann), (d,))
    if isinstance(m, Star):
        d1, d2 = _derive(ctx, m.left), _derive(ctx, m.right)
        _require_mtype(d1, "left side of *")
        _require_mtype(d2, "right side of *")
        if d1.type != neg_type(d2.type):
            raise SymTypeError(
                f"mismatch in {format_term(m)}: left has type {format_type(d1.type)}, "
                f"which is not the negation of {format_type(d2.type)}"
            )
        return SymDerivation("star", ctx, m, BOTTOM, (d1, d2))
    raise TypeError(f"not a λSym term: {m!r}")


# ---------------------------------------------------------------------------
# equality up to symmetry, subformulas


def sym_equiv(m: SymTerm, n: SymTerm) -> bool:
    """``m ~ n``: equal up to α and to swapping the two sides of any ``*``."""
    return m.sym_key == n.sym_key


def subformulas(a: SymType) -> set[SymType]:
    out = {a}
    if isinstance(a, (And, Or)):
        out |= subformulas(a.left) | subformulas(a.right)
    return out


def subformula_closure(roots: Sequence[SymType]) -> set[SymType]:
    """Subformulas of `roots`, closed under negation, plus ``#``."""
    out: set[SymType] = {BOTTOM}
    for r in roots:
        if isinstance(r, Bottom):
            continue
        for s in subformulas(r):
            out.add(s)
            out.add(neg_type(s))
    return out


def derivation_types(d: SymDerivation) -> set[SymType]:
    """Every type written in the derivation: conclusions and binder annotations."""
    out = set()
    for _, node in d.nodes():
        out.add(node.type)
        out.update(node.ctx.values())
    return out


def subformula_report(d: SymDerivation) -> bool:
    closure = subformula_closure([*d.ctx.values(), d.type])
    return derivation_types(d) <= closure
