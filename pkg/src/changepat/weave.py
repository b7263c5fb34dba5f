"""Weaving two edit trees into one tree of match points, mismatches and holes,
and pulling context-bearing changes out of the result."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .aterm import ATerm, head, with_children
from .diff import EditOp, EditTree

__all__ = [
    "MatchPoint",
    "Mismatch",
    "LeftHole",
    "RightHole",
    "WovenTree",
    "WeaveError",
    "ChangeKind",
    "Origin",
    "Change",
    "weave",
    "project_left",
    "project_right",
    "change_points",
    "extract_changes",
]


@dataclass(frozen=True, slots=True)
class MatchPoint:
    node: ATerm  # the shared node with its children stripped
    children: tuple[WovenTree, ...] = ()


@dataclass(frozen=True, slots=True)
class Mismatch:
    left: ATerm
    right: ATerm


@dataclass(frozen=True, slots=True)
class LeftHole:
    """Subtree present only in the right tree (an insertion)."""

    inserted: ATerm


@dataclass(frozen=True, slots=True)
class RightHole:
    """Subtree present only in the left tree (a deletion)."""

    deleted: ATerm


WovenTree = Union[MatchPoint, Mismatch, LeftHole, RightHole]


class WeaveError(RuntimeError):
    """The two edit trees do not describe one matching."""


class ChangeKind(str, enum.Enum):
    INSERTION = "insertion"
    DELETION = "deletion"
    MUTATION = "mutation"


@dataclass(frozen=True, slots=True)
class Origin:
    path: str
    old_commit: str
    new_commit: str


@dataclass(frozen=True)
class Change:
    kind: ChangeKind
    before: Optional[ATerm]
    after: Optional[ATerm]
    context_before: Optional[ATerm]
    context_after: Optional[ATerm]
    origin: Optional[Origin] = None
    ident: str = ""

    def __post_init__(self) -> None:
        if self.kind is ChangeKind.INSERTION and (self.after is None or self.before is not None):
            raise ValueError("an insertion carries only an 'after' tree")
        if self.kind is ChangeKind.DELETION and (self.before is None or self.after is not None):
            raise ValueError("a deletion carries only a 'before' tree")
        if self.kind is ChangeKind.MUTATION and (self.before is None or self.after is None):
            raise ValueError("a mutation carries both trees")


def weave(left_edit: EditTree, right_edit: EditTree) -> WovenTree:
    """Merge the two sides of one :func:`~changepat.diff.edit_trees` result.

    Keep children on each side pair up in order.  Inside the gap between two
    consecutive kept pairs, deletions on both sides are paired from the end of
    the gap into mismatches (the diagonal moves of the backtrack); whatever is
    left over at the start of the gap becomes holes.
    """
    lk, rk = left_edit.op is EditOp.KEEP, right_edit.op is EditOp.KEEP
    if not lk and not rk:
        return Mismatch(left_edit.term, right_edit.term)
    if lk != rk:
        raise WeaveError("root kept on one side only")
    lnode, rnode = head(left_edit.term), head(right_edit.term)
    if lnode != rnode:
        raise WeaveError(f"kept roots differ: {lnode!r} vs {rnode!r}")

    out: list[WovenTree] = []
    lgap: list[EditTree] = []
    rgap: list[EditTree] = []
    li = ri = 0
    lch, rch = left_edit.children, right_edit.children
    while True:
        while li < len(lch) and lch[li].op is EditOp.DELETE:
            lgap.append(lch[li])
            li += 1
        while ri < len(rch) and rch[ri].op is EditOp.DELETE:
            rgap.append(rch[ri])
            ri += 1
        _flush_gap(lgap, rgap, out)
        lgap, rgap = [], []
        if li == len(lch) and ri == len(rch):
            break
        if li == len(lch) or ri == len(rch):
            raise WeaveError("unequal numbers of kept children")
        out.append(weave(lch[li], rch[ri]))
        li += 1
        ri += 1
    return MatchPoint(lnode, tuple(out))


def _flush_gap(lgap: list[EditTree], rgap: list[EditTree], out: list[WovenTree]) -> None:
    paired = min(len(lgap), len(rgap))
    for e in lgap[: len(lgap) - paired]:
        out.append(RightHole(e.term))
    for e in rgap[: len(rgap) - paired]:
        out.append(LeftHole(e.term))
    for le, re_ in zip(lgap[len(lgap) - paired :], rgap[len(rgap) - paired :]):
        out.append(Mismatch(le.term, re_.term))


def project_left(w: WovenTree) -> Optional[ATerm]:
    if isinstance(w, MatchPoint):
        kids = [p for p in (project_left(c) for c in w.children) if p is not None]
        return with_children(w.node, kids)
    if isinstance(w, Mismatch):
        return w.left
    if isinstance(w, RightHole):
        return w.deleted
    return None


def project_right(w: WovenTree) -> Optional[ATerm]:
    if isinstance(w, MatchPoint):
        kids = [p for p in (project_right(c) for c in w.children) if p is not None]
        return with_children(w.node, kids)
    if isinstance(w, Mismatch):
        return w.right
    if isinstance(w, LeftHole):
        return w.inserted
    return None


def change_points(w: WovenTree) -> Iterator[WovenTree]:
    """Outermost holes and mismatches, in preorder."""
    if isinstance(w, MatchPoint):
        for c in w.children:
            yield from change_points(c)
    else:
        yield w


def extract_changes(w: WovenTree, profile, origin: Origin | None = None) -> list[Change]:
    """One :class:`Change` per hole or mismatch, with statement-level context.

    The context is the pair of projections of the nearest match-point ancestor
    whose label is one of ``profile.statement_labels``, or of the whole woven
    tree when there is none.
    """
    labels = frozenset(profile.statement_labels)
    changes: list[Change] = []
    _collect(w, w, labels, origin, changes)
    return changes


def _collect(w: WovenTree, anchor: WovenTree, labels, origin, out: list[Change]) -> None:
    if isinstance(w, MatchPoint):
        label = getattr(w.node, "label", None)
        if label in labels:
            anchor = w
        for c in w.children:
            _collect(c, anchor, labels, origin, out)
        return
    ctx_before, ctx_after = project_left(anchor), project_right(anchor)
    if isinstance(w, LeftHole):
        out.append(Change(ChangeKind.INSERTION, None, w.inserted, ctx_before, ctx_after, origin))
    elif isinstance(w, RightHole):
        out.append(Change(ChangeKind.DELETION, w.deleted, None, ctx_before, ctx_after, origin))
    else:
        out.append(Change(ChangeKind.MUTATION, w.left, w.right, ctx_before, ctx_after, origin))
