"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from symlog import lmm_core as L
from symlog import sym_core as S
from symlog.testgen import GenConfig, gen_lmm, gen_sym

atoms = st.sampled_from(["a", "b", "c"])

sym_types = st.recursive(
    st.one_of(atoms.map(S.Atom), atoms.map(S.NegAtom)),
    lambda sub: st.one_of(st.builds(S.And, sub, sub), st.builds(S.Or, sub, sub)),
    max_leaves=6,
)

lmm_types = st.recursive(
    atoms.map(L.Atom),
    lambda sub: st.one_of(st.builds(L.Arrow, sub, sub), st.builds(L.Neg, sub)),
    max_leaves=6,
)

seeds = st.integers(min_value=0, max_value=2**63 - 1)


def typed_sym(max_size: int = 16):
    return seeds.map(lambda s: gen_sym(GenConfig(seed=s, max_size=max_size)))


def typed_lmm(max_size: int = 16, sort: str | None = None):
    return seeds.map(lambda s: gen_lmm(GenConfig(seed=s, max_size=max_size), sort))
