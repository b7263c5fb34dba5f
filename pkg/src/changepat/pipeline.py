"""End-to-end run: history -> changes -> matrices -> groups -> templates -> reports."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .antiunify import Substitution, antiunify_n, render_template
from .aterm import ATerm, render_aterm
from .diff import Scorer
from .frontend import LanguageProfile, ProfileError, resolve_profile
from .similarity import (
    KIND_ORDER,
    SIDE_RULES,
    DistanceMatrix,
    boolean_csv,
    boolean_matrix,
    distance_matrix,
    format_tau,
    matrix_csv,
    rep_tree,
    sweep_csv,
    sweep_group_counts,
    tau_range,
    threshold_groups,
)
from .vcs import DEFAULT_MAX_FILE_BYTES, pair_to_changes, walk_history
from .weave import Change, ChangeKind

log = logging.getLogger(__name__)

FORMATS = frozenset({"json", "csv", "text"})


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    repo_path: str = "."
    rev_range: str = "HEAD"
    profile: str | LanguageProfile = "minilang"
    tau: float = 0.9
    tau_sweep: tuple[float, float, float] | None = None
    side_rule: str = "after"
    output_dir: str | None = None
    formats: frozenset[str] = FORMATS
    include_initial: bool = False
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES

    def validate(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must lie in [0, 1], got {self.tau}")
        if self.tau_sweep is not None:
            start, stop, step = self.tau_sweep
            if step <= 0:
                raise ConfigError("sweep step must be positive")
            if not (0.0 <= start <= stop <= 1.0):
                raise ConfigError("sweep bounds must satisfy 0 <= start <= stop <= 1")
        if self.side_rule not in SIDE_RULES:
            raise ConfigError(f"side rule must be one of {', '.join(SIDE_RULES)}")
        unknown = set(self.formats) - FORMATS
        if unknown:
            raise ConfigError(f"unknown formats: {', '.join(sorted(unknown))}")
        if self.max_file_bytes <= 0:
            raise ConfigError("max file bytes must be positive")
        try:
            resolve_profile(self.profile)
        except ProfileError as exc:
            raise ConfigError(str(exc)) from None


@dataclass
class GroupResult:
    id: str
    kind: ChangeKind
    tau: float
    members: list[int]  # indices into RunReport.changes
    template: ATerm
    substitutions: list[Substitution]
    pretty: str
    other_template: ATerm | None = None  # mutations: generalization of the other side

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class RunReport:
    tau: float
    side_rule: str
    profile: LanguageProfile
    changes: list[Change]
    matrices: dict[ChangeKind, DistanceMatrix]
    groups: list[GroupResult]
    sweep: list[dict] | None = None
    pairs: int = 0
    warnings: list[str] = field(default_factory=list)

    def group(self, group_id: str) -> GroupResult:
        for g in self.groups:
            if g.id == group_id:
                return g
        raise KeyError(group_id)

    def to_json(self) -> dict:
        out_groups = []
        for g in self.groups:
            entry = {
                "id": g.id,
                "kind": g.kind.value,
                "tau": g.tau,
                "size": g.size,
                "member_ids": [self.changes[i].ident for i in g.members],
                "member_origins": [_origin_json(self.changes[i]) for i in g.members],
                "template_aterm": render_aterm(g.template),
                "template_pretty": g.pretty,
                "substitutions": [
                    {str(k): render_aterm(v) for k, v in sorted(s.items())} for s in g.substitutions
                ],
            }
            if g.other_template is not None:
                entry["other_side_template_aterm"] = render_aterm(g.other_template)
            out_groups.append(entry)
        return {
            "tau": self.tau,
            "side_rule": self.side_rule,
            "profile": self.profile.name,
            "version_pairs": self.pairs,
            "total_changes": len(self.changes),
            "change_counts": {k.value: sum(c.kind is k for c in self.changes) for k in KIND_ORDER},
            "warnings": list(self.warnings),
            "groups": out_groups,
        }

    def patterns_text(self) -> str:
        lines = [
            f"# tau={format_tau(self.tau)} side_rule={self.side_rule} "
            f"changes={len(self.changes)} groups={len(self.groups)}"
        ]
        for g in sorted(self.groups, key=lambda g: (-g.size, g.pretty, g.id)):
            lines.append(f"{g.id}\t{g.kind.value}\t{g.size}\t{g.pretty}")
        return "\n".join(lines) + "\n"

    def write(self, output_dir: str | Path, formats: frozenset[str] = FORMATS) -> list[Path]:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []

        def put(name: str, text: str) -> None:
            path = out / name
            path.write_text(text, encoding="utf-8")
            written.append(path)

        if "json" in formats:
            put("groups.json", json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n")
        if "csv" in formats:
            for kind in KIND_ORDER:
                D = self.matrices[kind]
                put(f"matrix_{kind.value}.csv", matrix_csv(D))
                put(f"boolean_{kind.value}.csv", boolean_csv(D.items, boolean_matrix(D, self.tau)))
            if self.sweep is not None:
                put("sweep.csv", sweep_csv(self.sweep))
        if "text" in formats:
            put("patterns.txt", self.patterns_text())
        return written


def _origin_json(c: Change) -> dict:
    o = c.origin
    if o is None:
        return {"id": c.ident}
    return {"id": c.ident, "file": o.path, "old_commit": o.old_commit, "new_commit": o.new_commit}


def _pretty(tpl: ATerm, profile: LanguageProfile) -> str:
    mode = "minilang" if profile.frontend == "minilang" else "aterm"
    return render_template(tpl, mode)


def analyze(
    changes: Sequence[Change],
    tau: float = 0.9,
    side_rule: str = "after",
    profile: str | LanguageProfile = "minilang",
    sweep: Sequence[float] | None = None,
) -> RunReport:
    """Group and generalize an already-extracted change forest."""
    prof = resolve_profile(profile)
    changes = [c if c.ident else replace(c, ident=f"c{i:04d}") for i, c in enumerate(changes)]
    scorer = Scorer()
    matrices: dict[ChangeKind, DistanceMatrix] = {}
    groups: list[GroupResult] = []
    for kind in KIND_ORDER:
        index = [i for i, c in enumerate(changes) if c.kind is kind]
        D = distance_matrix([changes[i] for i in index], kind, side_rule, scorer)
        matrices[kind] = D
        found = []
        for grp in threshold_groups(D, tau):
            members = [index[p] for p in grp.members]
            trees = [rep_tree(changes[i], side_rule) for i in members]
            tpl, subs = antiunify_n(trees)
            other = None
            if kind is ChangeKind.MUTATION:
                other_side = "before" if side_rule == "after" else "after"
                other, _ = antiunify_n([rep_tree(changes[i], other_side) for i in members])
            found.append((members, tpl, subs, other, _pretty(tpl, prof)))
        found.sort(key=lambda f: (-len(f[0]), f[4], f[0][0]))
        for rank, (members, tpl, subs, other, pretty) in enumerate(found, start=1):
            gid = f"{kind.value[0].upper()}{rank}"
            groups.append(GroupResult(gid, kind, tau, members, tpl, subs, pretty, other))
    rows = sweep_group_counts(matrices, sweep) if sweep is not None else None
    return RunReport(tau, side_rule, prof, changes, matrices, groups, rows)


def run_pipeline(cfg: RunConfig) -> RunReport:
    cfg.validate()
    profile = resolve_profile(cfg.profile)
    warnings: list[str] = []
    pairs = walk_history(
        cfg.repo_path,
        cfg.rev_range,
        profile,
        include_initial=cfg.include_initial,
        max_file_bytes=cfg.max_file_bytes,
        warnings=warnings,
    )
    changes: list[Change] = []
    for pair in pairs:
        changes.extend(pair_to_changes(pair, profile, warnings))
    sweep = tau_range(*cfg.tau_sweep) if cfg.tau_sweep else None
    report = analyze(changes, cfg.tau, cfg.side_rule, profile, sweep)
    report.pairs = len(pairs)
    report.warnings = warnings
    if cfg.output_dir:
        report.write(cfg.output_dir, frozenset(cfg.formats))
    return report


def explain_group(report: RunReport | dict, group_id: str) -> str:
    """Template, member origins and bindings of one group, as text."""
    data = report.to_json() if isinstance(report, RunReport) else report
    groups = {g["id"]: g for g in data["groups"]}
    if group_id not in groups:
        valid = ", ".join(groups) or "(none)"
        raise KeyError(f"unknown group {group_id!r}; valid ids: {valid}")
    g = groups[group_id]
    lines = [
        f"group {g['id']} ({g['kind']}, {g['size']} member{'s' if g['size'] != 1 else ''}, tau={format_tau(g['tau'])})",
        f"template: {g['template_pretty']}",
        f"aterm:    {g['template_aterm']}",
    ]
    for origin, subs in zip(g["member_origins"], g["substitutions"]):
        where = origin["id"]
        if "file" in origin:
            where += f"  {origin['file']}  {origin['old_commit'][:10]}..{origin['new_commit'][:10]}"
        lines.append(f"- {where}")
        if not subs:
            lines.append("    (no bindings)")
        for k, v in subs.items():
            lines.append(f"    □{k} ↦ {v}")
    return "\n".join(lines) + "\n"
