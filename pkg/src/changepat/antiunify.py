"""First-order antiunification (least general generalization) of aterms.

Terms generalize node by node while variant, label/value and arity agree.
Anywhere they disagree a metavariable is introduced, and the same disagreement
always maps to the same metavariable, so ``g(a, a)`` and ``g(b, b)`` give
``g(□1, □1)`` rather than ``g(□1, □2)``.
"""

from __future__ import annotations

from typing import Literal, Sequence

from .aterm import (
    AInt,
    AList,
    Appl,
    ATerm,
    MetaVar,
    children,
    head,
    metavars,
    render_aterm,
    with_children,
)
from .minilang import unparse

__all__ = [
    "Substitution",
    "IncompleteSubstitution",
    "antiunify2",
    "antiunify_n",
    "apply_substitution",
    "match_template",
    "renumber",
    "render_template",
]

Substitution = dict[int, ATerm]


class IncompleteSubstitution(KeyError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"no binding for metavariable {index}")


def _same_node(a: ATerm, b: ATerm) -> bool:
    if isinstance(a, Appl):
        return isinstance(b, Appl) and a.label == b.label and len(a.children) == len(b.children)
    if isinstance(a, AList):
        return isinstance(b, AList) and len(a.children) == len(b.children)
    if isinstance(a, AInt):
        return isinstance(b, AInt) and a.value == b.value
    return False  # metavariables never unify structurally


def _lgg(a: ATerm, b: ATerm, table: dict[tuple[ATerm, ATerm], MetaVar]) -> ATerm:
    if a == b and not isinstance(a, MetaVar):
        return a
    if _same_node(a, b):
        kids = tuple(_lgg(x, y, table) for x, y in zip(children(a), children(b)))
        return with_children(head(a), kids)
    var = table.get((a, b))
    if var is None:
        var = table[(a, b)] = MetaVar(len(table) + 1)
    return var


def renumber(tpl: ATerm) -> ATerm:
    """Renumber metavariables 1..n in first-occurrence preorder."""
    mapping = {old: new for new, old in enumerate(metavars(tpl), start=1)}
    return _rename(tpl, mapping)


def _rename(t: ATerm, mapping: dict[int, int]) -> ATerm:
    if isinstance(t, MetaVar):
        return MetaVar(mapping[t.index])
    kids = children(t)
    if not kids:
        return t
    return with_children(head(t), tuple(_rename(c, mapping) for c in kids))


def match_template(tpl: ATerm, t: ATerm) -> Substitution | None:
    """The substitution that instantiates ``tpl`` to ``t``, or None."""
    sub: Substitution = {}
    if _match(tpl, t, sub):
        return sub
    return None


def _match(tpl: ATerm, t: ATerm, sub: Substitution) -> bool:
    if isinstance(tpl, MetaVar):
        bound = sub.setdefault(tpl.index, t)
        return bound == t
    if not _same_node(tpl, t):
        return False
    return all(_match(x, y, sub) for x, y in zip(children(tpl), children(t)))


def apply_substitution(tpl: ATerm, s: Substitution) -> ATerm:
    if isinstance(tpl, MetaVar):
        if tpl.index not in s:
            raise IncompleteSubstitution(tpl.index)
        return s[tpl.index]
    kids = children(tpl)
    if not kids:
        return tpl
    return with_children(head(tpl), tuple(apply_substitution(c, s) for c in kids))


def antiunify2(a: ATerm, b: ATerm) -> tuple[ATerm, Substitution, Substitution]:
    table: dict[tuple[ATerm, ATerm], MetaVar] = {}
    tpl = renumber(_lgg(a, b, table))
    sa, sb = match_template(tpl, a), match_template(tpl, b)
    assert sa is not None and sb is not None
    return tpl, sa, sb


def antiunify_n(group: Sequence[ATerm]) -> tuple[ATerm, list[Substitution]]:
    """Generalize a whole group.

    Members are folded pairwise in order of their rendered aterm text, so the
    template does not depend on input order.  Substitutions come back in the
    caller's order.
    """
    if not group:
        raise ValueError("cannot antiunify an empty group")
    ordered = sorted(group, key=render_aterm)
    tpl = ordered[0]
    for t in ordered[1:]:
        # Accumulated metavariables never unify, so each is re-keyed by the
        # pair it forms with the next member; old indices cannot leak through.
        tpl = _lgg(tpl, t, {})
    tpl = renumber(tpl)
    subs = []
    for t in group:
        s = match_template(tpl, t)
        assert s is not None, "template does not cover a member"
        subs.append(s)
    return tpl, subs


def render_template(
    tpl: ATerm, mode: Literal["aterm", "minilang"] = "aterm", subscripts: bool = False
) -> str:
    """``aterm`` prints ``AVar k`` for holes.  ``minilang`` prints source-like
    text with ``□`` holes (``□_k`` with ``subscripts``); subtrees outside the
    MiniLang vocabulary appear as ``⟦aterm⟧``."""
    if mode == "aterm":
        return render_aterm(tpl)
    if mode == "minilang":
        return unparse(tpl, subscripts=subscripts)[0]
    raise ValueError(f"unknown template mode {mode!r}")
