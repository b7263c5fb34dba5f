"""Normalized tree similarity, per-kind matrices and threshold grouping."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .aterm import ATerm
from .diff import Scorer
from .weave import Change, ChangeKind

__all__ = [
    "SIDE_RULES",
    "DistanceMatrix",
    "ChangeGroup",
    "delta",
    "rep_tree",
    "distance_matrix",
    "boolean_matrix",
    "sparse_boolean",
    "combined_boolean",
    "threshold_groups",
    "sweep_group_counts",
    "tau_range",
    "matrix_csv",
    "boolean_csv",
    "sweep_csv",
]

KIND_ORDER = (ChangeKind.INSERTION, ChangeKind.DELETION, ChangeKind.MUTATION)
SIDE_RULES = ("before", "after")


def delta(a: ATerm, b: ATerm, scorer: Scorer | None = None) -> float:
    """min(d(a,b), d(b,a)) / max(|a|, |b|), with d the Yang match score."""
    sc = scorer or Scorer()
    x, y = sc.intern(a), sc.intern(b)
    d = min(sc.score(x, y), sc.score(y, x))
    return d / max(sc.sizes[x], sc.sizes[y])


def rep_tree(change: Change, side_rule: str = "after") -> ATerm:
    """The statement-level tree a change is compared by.

    Insertions use the context after, deletions the context before; mutations
    use whichever side ``side_rule`` names.
    """
    if change.kind is ChangeKind.INSERTION:
        return change.context_after
    if change.kind is ChangeKind.DELETION:
        return change.context_before
    if side_rule not in SIDE_RULES:
        raise ValueError(f"side_rule must be one of {SIDE_RULES}")
    return change.context_after if side_rule == "after" else change.context_before


@dataclass(frozen=True)
class DistanceMatrix:
    kind: ChangeKind
    items: tuple[str, ...]
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class ChangeGroup:
    kind: ChangeKind
    members: tuple[int, ...]  # positions into the matrix's items
    tau: float


def _ident(change: Change, i: int) -> str:
    return change.ident or str(i)


def distance_matrix(
    changes: Sequence[Change],
    kind: ChangeKind,
    side_rule: str = "after",
    scorer: Scorer | None = None,
) -> DistanceMatrix:
    if any(c.kind is not kind for c in changes):
        raise ValueError(f"all changes must be {kind.value}s")
    sc = scorer or Scorer()
    ids = [sc.intern(rep_tree(c, side_rule)) for c in changes]
    n = len(ids)
    values = np.eye(n)
    for i in range(n):
        x = ids[i]
        for j in range(i + 1, n):
            y = ids[j]
            v = sc.score(x, y) / max(sc.sizes[x], sc.sizes[y])
            values[i, j] = values[j, i] = v
    return DistanceMatrix(kind, tuple(_ident(c, i) for i, c in enumerate(changes)), values)


def boolean_matrix(D: DistanceMatrix, tau: float) -> np.ndarray:
    """Entry true iff similarity >= tau."""
    return D.values >= tau


def sparse_boolean(
    changes: Sequence[Change], kind: ChangeKind, tau: float, side_rule: str = "after"
) -> set[tuple[int, int]]:
    """Upper-triangle true entries of the boolean matrix, without the dense matrix.

    Pairs whose size ratio already caps similarity below ``tau`` are never
    scored.
    """
    sc = Scorer()
    ids = [sc.intern(rep_tree(c, side_rule)) for c in changes if c.kind is kind]
    edges: set[tuple[int, int]] = set()
    for i, x in enumerate(ids):
        for j in range(i + 1, len(ids)):
            y = ids[j]
            big = max(sc.sizes[x], sc.sizes[y])
            if min(sc.sizes[x], sc.sizes[y]) / big < tau:
                continue
            if sc.score(x, y) / big >= tau:
                edges.add((i, j))
    return edges


def combined_boolean(changes: Sequence[Change], per_kind: dict[ChangeKind, np.ndarray]) -> np.ndarray:
    """OR of the per-kind boolean matrices, each padded to the full change index."""
    n = len(changes)
    out = np.zeros((n, n), dtype=bool)
    for kind, B in per_kind.items():
        idx = [i for i, c in enumerate(changes) if c.kind is kind]
        if idx:
            out[np.ix_(idx, idx)] |= B
    return out


def _components(B: np.ndarray) -> list[tuple[int, ...]]:
    n = B.shape[0]
    if n == 0:
        return []
    _, labels = connected_components(csr_matrix(B), directed=False)
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    return sorted((tuple(m) for m in groups.values()), key=lambda m: m[0])


def threshold_groups(D: DistanceMatrix, tau: float) -> list[ChangeGroup]:
    """Connected components of the graph whose edges have similarity >= tau."""
    return [ChangeGroup(D.kind, m, tau) for m in _components(boolean_matrix(D, tau))]


def tau_range(start: float, stop: float, step: float) -> list[float]:
    """Inclusive, rounded to kill float drift (0.1 + 0.2 style)."""
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(round((stop - start) / step))
    return [round(start + i * step, 10) for i in range(n + 1)]


def sweep_group_counts(
    changes: Sequence[Change] | dict[ChangeKind, DistanceMatrix],
    taus: Iterable[float],
    side_rule: str = "after",
) -> list[dict]:
    """Group counts per tau and kind.

    Accepts either the changes or precomputed per-kind matrices.
    """
    if isinstance(changes, dict):
        matrices = changes
    else:
        sc = Scorer()
        matrices = {}
        for kind in KIND_ORDER:
            subset = [c for c in changes if c.kind is kind]
            matrices[kind] = distance_matrix(subset, kind, side_rule, sc)
    taus = list(taus)
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise ValueError("taus must be sorted ascending")
    rows = []
    for tau in taus:
        row: dict = {"tau": tau}
        total = 0
        for kind in KIND_ORDER:
            D = matrices.get(kind)
            count = len(_components(boolean_matrix(D, tau))) if D is not None else 0
            row[kind.value] = count
            total += count
        row["total"] = total
        rows.append(row)
    return rows


# -- CSV exports --------------------------------------------------------------


def _csv(rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def matrix_csv(D: DistanceMatrix) -> str:
    rows = [["id", *D.items]]
    for name, row in zip(D.items, D.values):
        rows.append([name, *(f"{v:.6f}" for v in row)])
    return _csv(rows)


def boolean_csv(items: Sequence[str], B: np.ndarray) -> str:
    rows = [["id", *items]]
    for name, row in zip(items, B):
        rows.append([name, *("1" if v else "0" for v in row)])
    return _csv(rows)


def format_tau(tau: float) -> str:
    return f"{tau:.6f}".rstrip("0").rstrip(".") if tau else "0"


def sweep_csv(rows: Sequence[dict]) -> str:
    out = [["tau", "insertions", "deletions", "mutations", "total"]]
    for r in rows:
        out.append([format_tau(r["tau"]), r["insertion"], r["deletion"], r["mutation"], r["total"]])
    return _csv(out)
