"""Yang-style structural differencing over aterms.

Two nodes can match only when their variant and label/value agree, and a
matched node's children are aligned with the other side's children by an
order-preserving LCS-style dynamic program:

    M[i][j] = max(M[i-1][j], M[i][j-1], M[i-1][j-1] + score(a_i, b_j))

``score`` of two roots is 0 when they differ, else ``1 + M[n][m]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .aterm import AInt, AList, Appl, ATerm, children

__all__ = ["EditOp", "EditTree", "Scorer", "match_score", "edit_trees", "keep_count"]


class EditOp(enum.Enum):
    KEEP = "keep"
    DELETE = "delete"


@dataclass(frozen=True, slots=True)
class EditTree:
    """An input subtree annotated with the edit op of its root.

    ``term`` is the original subtree, so erasing ops is just reading ``term``.
    """

    op: EditOp
    term: ATerm
    children: tuple[EditTree, ...] = ()


def _head_key(t: ATerm) -> tuple:
    if isinstance(t, Appl):
        return ("A", t.label)
    if isinstance(t, AList):
        # Lists match one another as if they shared a reserved label.
        return ("L",)
    if isinstance(t, AInt):
        return ("I", t.value)
    raise TypeError(f"cannot diff {t!r}")


class Scorer:
    """Hash-conses terms and memoizes pairwise match scores.

    Sharing one scorer across many comparisons (a whole distance matrix) lets
    repeated subtrees reuse each other's scores.
    """

    def __init__(self) -> None:
        self._ids: dict[tuple, int] = {}
        self._heads: dict[tuple, int] = {}
        self.head: list[int] = []
        self.kids: list[tuple[int, ...]] = []
        self.sizes: list[int] = []
        self._memo: dict[tuple[int, int], int] = {}

    def intern(self, t: ATerm) -> int:
        hk = _head_key(t)
        h = self._heads.setdefault(hk, len(self._heads))
        kid_ids = tuple(self.intern(c) for c in children(t))
        key = (h, kid_ids)
        node = self._ids.get(key)
        if node is None:
            node = len(self.head)
            self._ids[key] = node
            self.head.append(h)
            self.kids.append(kid_ids)
            self.sizes.append(1 + sum(self.sizes[k] for k in kid_ids))
        return node

    def score(self, x: int, y: int) -> int:
        if x == y:
            return self.sizes[x]
        if self.head[x] != self.head[y]:
            return 0
        key = (x, y) if x < y else (y, x)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        kx, ky = self.kids[x], self.kids[y]
        if not kx or not ky:
            s = 1
        else:
            s = 1 + self._table(kx, ky)[-1][-1]
        self._memo[key] = s
        return s

    def _table(self, kx: tuple[int, ...], ky: tuple[int, ...]) -> list[list[int]]:
        m = len(ky)
        prev = [0] * (m + 1)
        rows = [prev]
        for a in kx:
            row = [0] * (m + 1)
            for j in range(1, m + 1):
                best = prev[j] if prev[j] > row[j - 1] else row[j - 1]
                s = self.score(a, ky[j - 1])
                if s and prev[j - 1] + s > best:
                    best = prev[j - 1] + s
                row[j] = best
            rows.append(row)
            prev = row
        return rows

    def alignment(self, x: int, y: int) -> list[tuple[int | None, int | None]]:
        """Backtrack the children DP of a matched pair.

        Returns position pairs in order.  ``(i, j)`` with a positive score is a
        match, ``(i, j)`` with zero score is a paired deletion (diagonal move
        that gains nothing), and ``(i, None)`` / ``(None, j)`` are unpaired.
        Ties prefer diagonal, then left, then up.
        """
        kx, ky = self.kids[x], self.kids[y]
        table = self._table(kx, ky)
        i, j = len(kx), len(ky)
        steps: list[tuple[int | None, int | None]] = []
        while i > 0 and j > 0:
            s = self.score(kx[i - 1], ky[j - 1])
            if table[i][j] == table[i - 1][j - 1] + s:
                steps.append((i - 1, j - 1))
                i, j = i - 1, j - 1
            elif table[i][j] == table[i][j - 1]:
                steps.append((None, j - 1))
                j -= 1
            else:
                steps.append((i - 1, None))
                i -= 1
        while i > 0:
            steps.append((i - 1, None))
            i -= 1
        while j > 0:
            steps.append((None, j - 1))
            j -= 1
        steps.reverse()
        return steps


def match_score(a: ATerm, b: ATerm, scorer: Scorer | None = None) -> int:
    """Size of the maximum top-down, order-preserving matching of ``a`` and ``b``."""
    sc = scorer or Scorer()
    return sc.score(sc.intern(a), sc.intern(b))


def _all(op: EditOp, t: ATerm) -> EditTree:
    return EditTree(op, t, tuple(_all(op, c) for c in children(t)))


def edit_trees(a: ATerm, b: ATerm, scorer: Scorer | None = None) -> tuple[EditTree, EditTree]:
    """Keep/delete annotations for both inputs under one maximum matching."""
    sc = scorer or Scorer()
    x, y = sc.intern(a), sc.intern(b)
    return _edit(sc, a, b, x, y)


def _edit(sc: Scorer, a: ATerm, b: ATerm, x: int, y: int) -> tuple[EditTree, EditTree]:
    if sc.score(x, y) == 0:
        return _all(EditOp.DELETE, a), _all(EditOp.DELETE, b)
    ka, kb = children(a), children(b)
    left: list[EditTree | None] = [None] * len(ka)
    right: list[EditTree | None] = [None] * len(kb)
    for i, j in sc.alignment(x, y):
        if i is not None and j is not None and sc.score(sc.kids[x][i], sc.kids[y][j]):
            left[i], right[j] = _edit(sc, ka[i], kb[j], sc.kids[x][i], sc.kids[y][j])
    lt = tuple(t if t is not None else _all(EditOp.DELETE, c) for t, c in zip(left, ka))
    rt = tuple(t if t is not None else _all(EditOp.DELETE, c) for t, c in zip(right, kb))
    return EditTree(EditOp.KEEP, a, lt), EditTree(EditOp.KEEP, b, rt)


def keep_count(e: EditTree) -> int:
    n = 0
    stack = [e]
    while stack:
        node = stack.pop()
        if node.op is EditOp.KEEP:
            n += 1
        stack.extend(node.children)
    return n
