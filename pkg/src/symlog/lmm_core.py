"""Syntax, typing and substitution for the λ̄μμ̃*-calculus.

Three sorts of terms: commands (c-terms) ``<t | e>``, producers (l-terms)
and consumers (r-terms).  l-variables and r-variables live in separate
namespaces.  Types are atoms, arrows and a negation ``~A`` satisfying
``~~A = A``; the equation is applied by :func:`canonicalize_type` whenever
types are compared, so printed annotations keep the user's spelling.

Term ``==`` is α-equivalence over both kinds of binder, with annotations
compared up to the negation equation.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from ._names import fresh


class LmmTypeError(Exception):
    """A λ̄μμ̃* term does not typecheck."""


class SortError(TypeError):
    """A term of the wrong sort was put in a position."""


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class Arrow:
    dom: LmmType
    cod: LmmType

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class Neg:
    inner: LmmType

    def __str__(self) -> str:
        return format_type(self)


LmmType = Union[Atom, Arrow, Neg]


def canonicalize_type(a: LmmType) -> LmmType:
    """Remove every double negation."""
    if isinstance(a, Atom):
        return a
    if isinstance(a, Arrow):
        return Arrow(canonicalize_type(a.dom), canonicalize_type(a.cod))
    inner = canonicalize_type(a.inner)
    if isinstance(inner, Neg):
        return inner.inner
    return Neg(inner)


def type_eq(a: LmmType, b: LmmType) -> bool:
    return canonicalize_type(a) == canonicalize_type(b)


def neg(a: LmmType) -> LmmType:
    """Canonical negation of `a`."""
    return canonicalize_type(Neg(a))


def cxty_type(a: LmmType) -> int:
    """Number of arrows."""
    if isinstance(a, Arrow):
        return 1 + cxty_type(a.dom) + cxty_type(a.cod)
    if isinstance(a, Neg):
        return cxty_type(a.inner)
    return 0


def format_type(a: LmmType, prec: int = 0) -> str:
    # prec 0: arrow allowed; 1: operand of ~ or left of ->
    if isinstance(a, Atom):
        return a.name
    if isinstance(a, Neg):
        return "~" + format_type(a.inner, 1)
    if isinstance(a, Arrow):
        s = f"{format_type(a.dom, 1)} -> {format_type(a.cod, 0)}"
        return f"({s})" if prec else s
    raise TypeError(f"not a λ̄μμ̃* type: {a!r}")


# ---------------------------------------------------------------------------
# terms

C, L, R = "c", "l", "r"


class LmmTerm:
    """Base class; equality and hashing are up to α."""

    sort: str = ""
    child_sorts: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for kid, want in zip(self.children, self.child_sorts):
            if not isinstance(kid, LmmTerm) or kid.sort != want:
                got = getattr(kid, "sort", type(kid).__name__)
                raise SortError(f"{type(self).__name__} expects a {want}-term, got {got}")

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, LmmTerm):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return format_term(self)

    @property
    def children(self) -> tuple[LmmTerm, ...]:
        raise NotImplementedError

    def rebuild(self, children: Sequence[LmmTerm]) -> LmmTerm:
        raise NotImplementedError

    @cached_property
    def key(self) -> str:
        return _key(self, {}, {}, 0)

    @cached_property
    def fv_l(self) -> frozenset[str]:
        return frozenset().union(*(c.fv_l for c in self.children))

    @cached_property
    def fv_r(self) -> frozenset[str]:
        return frozenset().union(*(c.fv_r for c in self.children))

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)


@dataclass(frozen=True, eq=False)
class Cut(LmmTerm):
    t: LmmTerm
    e: LmmTerm
    sort = C
    child_sorts = (L, R)

    @property
    def children(self):
        return (self.t, self.e)

    def rebuild(self, children):
        return Cut(children[0], children[1])


@dataclass(frozen=True, eq=False)
class LVar(LmmTerm):
    x: str
    sort = L

    @property
    def children(self):
        return ()

    def rebuild(self, children):
        return self

    @cached_property
    def fv_l(self) -> frozenset[str]:
        return frozenset((self.x,))


@dataclass(frozen=True, eq=False)
class Lam(LmmTerm):
    x: str
    ann: LmmType
    body: LmmTerm
    sort = L
    child_sorts = (L,)

    @property
    def children(self):
        return (self.body,)

    def rebuild(self, children):
        return Lam(self.x, self.ann, children[0])

    @cached_property
    def fv_l(self) -> frozenset[str]:
        return self.body.fv_l - {self.x}


@dataclass(frozen=True, eq=False)
class Mu(LmmTerm):
    alpha: str
    ann: LmmType
    body: LmmTerm
    sort = L
    child_sorts = (C,)

    @property
    def children(self):
        return (self.body,)

    def rebuild(self, children):
        return Mu(self.alpha, self.ann, children[0])

    @cached_property
    def fv_r(self) -> frozenset[str]:
        return self.body.fv_r - {self.alpha}


@dataclass(frozen=True, eq=False)
class BarE(LmmTerm):
    e: LmmTerm
    sort = L
    child_sorts = (R,)

    @property
    def children(self):
        return (self.e,)

    def rebuild(self, children):
        return BarE(children[0])


@dataclass(frozen=True, eq=False)
class RVar(LmmTerm):
    alpha: str
    sort = R

    @property
    def children(self):
        return ()

    def rebuild(self, children):
        return self

    @cached_property
    def fv_r(self) -> frozenset[str]:
        return frozenset((self.alpha,))


@dataclass(frozen=True, eq=False)
class Cons(LmmTerm):
    head: LmmTerm
    tail: LmmTerm
    sort = R
    child_sorts = (L, R)

    @property
    def children(self):
        return (self.head, self.tail)

    def rebuild(self, children):
        return Cons(children[0], children[1])


@dataclass(frozen=True, eq=False)
class MuTilde(LmmTerm):
    x: str
    ann: LmmType
    body: LmmTerm
    sort = R
    child_sorts = (C,)

    @property
    def children(self):
        return (self.body,)

    def rebuild(self, children):
        return MuTilde(self.x, self.ann, children[0])

    @cached_property
    def fv_l(self) -> frozenset[str]:
        return self.body.fv_l - {self.x}


@dataclass(frozen=True, eq=False)
class TildeT(LmmTerm):
    t: LmmTerm
    sort = R
    child_sorts = (L,)

    @property
    def children(self):
        return (self.t,)

    def rebuild(self, children):
        return TildeT(children[0])


def _key(u: LmmTerm, envl: dict[str, int], envr: dict[str, int], depth: int) -> str:
    if isinstance(u, LVar):
        lvl = envl.get(u.x)
        return f"${u.x}" if lvl is None else f"%{depth - lvl}"
    if isinstance(u, RVar):
        lvl = envr.get(u.alpha)
        return f"&{u.alpha}" if lvl is None else f"@{depth - lvl}"
    if isinstance(u, (Lam, Mu, MuTilde)):
        name = u.alpha if isinstance(u, Mu) else u.x
        env = envr if isinstance(u, Mu) else envl
        saved = env.get(name)
        env[name] = depth + 1
        body = _key(u.body, envl, envr, depth + 1)
        if saved is None:
            del env[name]
        else:
            env[name] = saved
        return f"{type(u).__name__}[{format_type(canonicalize_type(u.ann))}]({body})"
    kids = ",".join(_key(c, envl, envr, depth) for c in u.children)
    return f"{type(u).__name__}({kids})"


def format_term(u: LmmTerm) -> str:
    if isinstance(u, Cut):
        return f"< {format_term(u.t)} | {format_term(u.e)} >"
    if isinstance(u, LVar):
        return u.x
    if isinstance(u, RVar):
        return u.alpha
    if isinstance(u, Lam):
        return f"\\{u.x}:{format_type(u.ann)}. {format_term(u.body)}"
    if isinstance(u, Mu):
        return f"mu {u.alpha}:{format_type(u.ann)}. {format_term(u.body)}"
    if isinstance(u, MuTilde):
        return f"mut {u.x}:{format_type(u.ann)}. {format_term(u.body)}"
    if isinstance(u, BarE):
        return f"bar({format_term(u.e)})"
    if isinstance(u, TildeT):
        return f"tilde({format_term(u.t)})"
    if isinstance(u, Cons):
        head = format_term(u.head)
        if isinstance(u.head, (Lam, Mu)):
            head = f"({head})"
        return f"{head} . {format_term(u.tail)}"
    raise TypeError(f"not a λ̄μμ̃* term: {u!r}")


# ---------------------------------------------------------------------------
# sequents


@dataclass(frozen=True)
class LmmSequent:
    """Left context Γ (l-variables) and right context Δ (r-variables)."""

    gamma: Mapping[str, LmmType] = field(default_factory=dict)
    delta: Mapping[str, LmmType] = field(default_factory=dict)

    def with_l(self, x: str, a: LmmType) -> LmmSequent:
        return LmmSequent({**self.gamma, x: a}, self.delta)

    def with_r(self, alpha: str, a: LmmType) -> LmmSequent:
        return LmmSequent(self.gamma, {**self.delta, alpha: a})

    def __str__(self) -> str:
        g = ", ".join(f"{x}:{format_type(a)}" for x, a in self.gamma.items())
        d = ", ".join(f"{x}:{format_type(a)}" for x, a in self.delta.items())
        return f"{g} | {d}" if d else g


def typecheck_lmm(seq: LmmSequent, u: LmmTerm) -> LmmType | None:
    """Canonical type of an l- or r-term; ``None`` for a well-typed c-term."""
    return _tc(seq, u)


def _tc(seq: LmmSequent, u: LmmTerm) -> LmmType | None:
    if isinstance(u, LVar):
        if u.x not in seq.gamma:
            raise LmmTypeError(f"unbound l-variable {u.x}")
        return canonicalize_type(seq.gamma[u.x])
    if isinstance(u, RVar):
        if u.alpha not in seq.delta:
            raise LmmTypeError(f"unbound r-variable {u.alpha}")
        return canonicalize_type(seq.delta[u.alpha])
    if isinstance(u, Lam):
        b = _tc(seq.with_l(u.x, u.ann), u.body)
        return Arrow(canonicalize_type(u.ann), b)
    if isinstance(u, Mu):
        _tc(seq.with_r(u.alpha, u.ann), u.body)
        return canonicalize_type(u.ann)
    if isinstance(u, MuTilde):
        _tc(seq.with_l(u.x, u.ann), u.body)
        return canonicalize_type(u.ann)
    if isinstance(u, BarE):
        return neg(_tc(seq, u.e))
    if isinstance(u, TildeT):
        return neg(_tc(seq, u.t))
    if isinstance(u, Cons):
        return Arrow(_tc(seq, u.head), _tc(seq, u.tail))
    if isinstance(u, Cut):
        a, b = _tc(seq, u.t), _tc(seq, u.e)
        if a != b:
            raise LmmTypeError(
                f"cut mismatch in {format_term(u)}: {format_type(a)} against {format_type(b)}"
            )
        return None
    raise TypeError(f"not a λ̄μμ̃* term: {u!r}")


# ---------------------------------------------------------------------------
# structure


Path = tuple[int, ...]


def subterm(u: LmmTerm, path: Sequence[int]) -> LmmTerm:
    for i in path:
        kids = u.children
        if i >= len(kids):
            raise IndexError(f"path {tuple(path)} leaves the term")
        u = kids[i]
    return u


def replace_at(u: LmmTerm, path: Sequence[int], new: LmmTerm) -> LmmTerm:
    if not path:
        return new
    kids = list(u.children)
    i = path[0]
    if i >= len(kids):
        raise IndexError(f"path {tuple(path)} leaves the term")
    kids[i] = replace_at(kids[i], path[1:], new)
    return u.rebuild(kids)


def positions(u: LmmTerm, path: Path = ()) -> Iterator[tuple[Path, LmmTerm]]:
    yield path, u
    for i, c in enumerate(u.children):
        yield from positions(c, path + (i,))


def cxty_term(u: LmmTerm) -> int:
    own = 1 if isinstance(u, (Lam, Mu, MuTilde, BarE, TildeT)) else 0
    return own + sum(cxty_term(c) for c in u.children)


def is_pure_lmm(u: LmmTerm) -> bool:
    """True iff `u` lies in the λ̄μμ̃ fragment: no bar/tilde terms, no negation in annotations."""

    def has_neg(a: LmmType) -> bool:
        if isinstance(a, Neg):
            return True
        return isinstance(a, Arrow) and (has_neg(a.dom) or has_neg(a.cod))

    for _, s in positions(u):
        if isinstance(s, (BarE, TildeT)):
            return False
        if isinstance(s, (Lam, Mu, MuTilde)) and has_neg(s.ann):
            return False
    return True


# ---------------------------------------------------------------------------
# substitution


def subst_l(u: LmmTerm, x: str, t: LmmTerm) -> LmmTerm:
    """``u[x := t]`` for an l-variable `x` and an l-term `t`."""
    if t.sort != L:
        raise SortError(f"l-variable {x} can only be replaced by an l-term, got a {t.sort}-term")
    return _subst(u, {x: t}, {})


def subst_r(u: LmmTerm, alpha: str, e: LmmTerm) -> LmmTerm:
    """``u[alpha := e]`` for an r-variable `alpha` and an r-term `e`."""
    if e.sort != R:
        raise SortError(f"r-variable {alpha} can only be replaced by an r-term, got a {e.sort}-term")
    return _subst(u, {}, {alpha: e})


def _subst(u: LmmTerm, sl: Mapping[str, LmmTerm], sr: Mapping[str, LmmTerm]) -> LmmTerm:
    if isinstance(u, LVar):
        return sl.get(u.x, u)
    if isinstance(u, RVar):
        return sr.get(u.alpha, u)
    sl = {x: t for x, t in sl.items() if x in u.fv_l}
    sr = {a: e for a, e in sr.items() if a in u.fv_r}
    if not sl and not sr:
        return u
    imgs = [*sl.values(), *sr.values()]
    if isinstance(u, (Lam, MuTilde)):
        incoming = frozenset().union(*(t.fv_l for t in imgs))
        x = u.x
        if x in incoming:
            x = fresh(u.x, incoming | u.body.fv_l | sl.keys())
            sl[u.x] = LVar(x)
        return u.__class__(x, u.ann, _subst(u.body, sl, sr))
    if isinstance(u, Mu):
        incoming = frozenset().union(*(t.fv_r for t in imgs))
        a = u.alpha
        if a in incoming:
            a = fresh(u.alpha, incoming | u.body.fv_r | sr.keys())
            sr[u.alpha] = RVar(a)
        return Mu(a, u.ann, _subst(u.body, sl, sr))
    return u.rebuild([_subst(c, sl, sr) for c in u.children])
