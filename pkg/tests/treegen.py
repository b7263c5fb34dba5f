"""Random and exhaustive tree generators shared by the test modules."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from changepat.aterm import AInt, AList, Appl, ATerm, children, head, size, with_children

LABELS = ("A", "B", "C", "F", "G")


def random_tree(rng: random.Random, max_size: int, labels=LABELS, ints=3) -> ATerm:
    """A tree with at most ``max_size`` nodes drawn from a small vocabulary
    so that independently drawn trees still share structure."""
    budget = [rng.randint(1, max_size)]

    def build() -> ATerm:
        budget[0] -= 1
        roll = rng.random()
        if budget[0] <= 0 or roll < 0.2:
            return AInt(rng.randrange(ints)) if rng.random() < 0.5 else Appl(rng.choice(labels))
        kids = []
        for _ in range(rng.randint(0, 3)):
            if budget[0] <= 0:
                break
            kids.append(build())
        if roll < 0.35:
            return AList(kids)
        return Appl(rng.choice(labels), kids)

    return build()


def mutate(rng: random.Random, t: ATerm, rate: float = 0.15, max_size: int = 6) -> ATerm:
    """Replace random subtrees of ``t`` with fresh random trees."""
    if rng.random() < rate:
        return random_tree(rng, max_size)
    kids = children(t)
    if not kids:
        return t
    return with_children(head(t), tuple(mutate(rng, c, rate, max_size) for c in kids))


def shapes(n: int) -> list[tuple]:
    """All ordered tree shapes with ``n`` nodes, as nested tuples of children."""
    if n == 1:
        return [()]
    out = []
    for kids in _forests(n - 1):
        out.append(kids)
    return out


def _forests(n: int) -> list[tuple]:
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        for s in shapes(first):
            for rest in _forests(n - first):
                out.append((s, *rest))
    return out


def label_shape(shape: tuple, labels: tuple[str, ...]) -> list[ATerm]:
    """Every labelling of ``shape`` with ``labels``."""
    kid_options = [label_shape(k, labels) for k in shape]
    out = []
    for lab in labels:
        for kids in itertools.product(*kid_options):
            out.append(Appl(lab, kids))
    return out


def all_trees(max_nodes: int, labels=("A", "B")) -> list[ATerm]:
    out = []
    for n in range(1, max_nodes + 1):
        for s in shapes(n):
            out.extend(label_shape(s, labels))
    return out


# -- hypothesis strategies -----------------------------------------------------

_leaves = st.one_of(
    st.integers(min_value=-2, max_value=3).map(AInt),
    st.sampled_from(LABELS).map(Appl),
    st.just(AList()),
)


def _grow(inner):
    kids = st.lists(inner, max_size=4)
    return st.one_of(
        st.tuples(st.sampled_from(LABELS), kids).map(lambda p: Appl(p[0], p[1])),
        kids.map(AList),
    )


aterms = st.recursive(_leaves, _grow, max_leaves=12)

label_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), max_size=8
)
wild_aterms = st.recursive(
    st.one_of(st.integers().map(AInt), label_text.map(Appl), st.just(AList())),
    lambda inner: st.one_of(
        st.tuples(label_text, st.lists(inner, max_size=3)).map(lambda p: Appl(p[0], p[1])),
        st.lists(inner, max_size=3).map(AList),
    ),
    max_leaves=10,
)


def small(t: ATerm, limit: int = 50) -> bool:
    return size(t) <= limit
