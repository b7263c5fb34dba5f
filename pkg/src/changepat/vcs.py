"""Replaying git history into consecutive file-version pairs.

All repository access goes through :class:`Git`, which shells out to the
``git`` executable with three request shapes: list commits, list changed
paths for a commit, and read a blob.  Tests can swap in any object with the
same three methods.
"""

from __future__ import annotations

import logging
import os
import shutil
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .frontend import LanguageProfile, SourceSyntaxError, parse_source
from .diff import edit_trees
from .weave import Change, ChangeKind, Origin, extract_changes, weave

log = logging.getLogger(__name__)

__all__ = [
    "NULL_COMMIT",
    "DEFAULT_MAX_FILE_BYTES",
    "VCSError",
    "RangeError",
    "VersionPair",
    "Git",
    "walk_history",
    "pair_to_changes",
    "build_fixture_repo",
]

NULL_COMMIT = "0" * 40
DEFAULT_MAX_FILE_BYTES = 1 << 20


class VCSError(RuntimeError):
    """The repository could not be read."""


class RangeError(VCSError):
    """The revision range does not resolve."""


@dataclass(frozen=True)
class VersionPair:
    file_path: str
    old_commit: str
    new_commit: str
    old_text: str
    new_text: str


class HistorySource(Protocol):
    def commits(self, rev_range: str) -> list[tuple[str, str | None]]: ...

    def changed_paths(self, commit: str, parent: str | None) -> list[tuple[str, str]]: ...

    def read_blob(self, commit: str, path: str) -> bytes: ...


class Git:
    def __init__(self, repo_path: str | Path, executable: str = "git"):
        self.repo_path = Path(repo_path)
        self.executable = executable

    def _run(self, *args: str) -> bytes:
        cmd = [self.executable, "-C", str(self.repo_path), *args]
        try:
            proc = subprocess.run(cmd, capture_output=True, check=False)
        except OSError as exc:
            raise VCSError(f"cannot run {self.executable}: {exc}") from exc
        if proc.returncode != 0:
            err = proc.stderr.decode("utf-8", "replace").strip()
            raise VCSError(f"{' '.join(args[:2])} failed: {err}")
        return proc.stdout

    def commits(self, rev_range: str) -> list[tuple[str, str | None]]:
        """(commit, first parent) pairs, oldest first, following first parents."""
        try:
            out = self._run("rev-list", "--first-parent", "--reverse", "--parents", rev_range, "--")
        except VCSError as exc:
            if not self._is_repo():
                raise VCSError(f"{self.repo_path} is not a git repository") from None
            raise RangeError(f"invalid revision range {rev_range!r}: {exc}") from None
        result = []
        for line in out.decode().splitlines():
            parts = line.split()
            result.append((parts[0], parts[1] if len(parts) > 1 else None))
        return result

    def _is_repo(self) -> bool:
        try:
            self._run("rev-parse", "--git-dir")
        except VCSError:
            return False
        return True

    def changed_paths(self, commit: str, parent: str | None) -> list[tuple[str, str]]:
        """(status letter, path) for every path the commit touches."""
        if parent is None:
            out = self._run("diff-tree", "--root", "--no-commit-id", "--no-renames", "-r", "--name-status", "-z", commit)
        else:
            out = self._run("diff-tree", "--no-commit-id", "--no-renames", "-r", "--name-status", "-z", parent, commit)
        fields = out.decode("utf-8", "surrogateescape").split("\0")
        pairs = []
        for status, path in zip(fields[0::2], fields[1::2]):
            if status:
                pairs.append((status[0], path))
        return pairs

    def blob_size(self, commit: str, path: str) -> int:
        return int(self._run("cat-file", "-s", f"{commit}:{path}").decode().strip())

    def read_blob(self, commit: str, path: str) -> bytes:
        return self._run("cat-file", "blob", f"{commit}:{path}")


def _decode(blob: bytes) -> str | None:
    if b"\0" in blob:
        return None
    try:
        return blob.decode("utf-8")
    except UnicodeDecodeError:
        return None


def walk_history(
    repo_path: str | Path,
    rev_range: str = "HEAD",
    profile: LanguageProfile | None = None,
    *,
    include_initial: bool = False,
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES,
    source: HistorySource | None = None,
    warnings: list[str] | None = None,
) -> list[VersionPair]:
    """Consecutive (older, newer) versions of every matching file, in commit order.

    A file added after the first commit pairs empty text with its first
    version; files in a root commit only do so with ``include_initial``.
    Deleted files have no newer version and are skipped.
    """
    git = source or Git(repo_path)
    warnings = warnings if warnings is not None else []

    def warn(msg: str) -> None:
        log.warning(msg)
        warnings.append(msg)

    pairs: list[VersionPair] = []
    for commit, parent in git.commits(rev_range):
        if parent is None and not include_initial:
            continue
        for status, path in sorted(git.changed_paths(commit, parent), key=lambda sp: sp[1]):
            if profile is not None and not profile.matches(path):
                continue
            if status == "D":
                log.info("skipping deletion of %s in %s", path, commit[:10])
                continue
            size = git.blob_size(commit, path) if hasattr(git, "blob_size") else None
            if size is not None and size > max_file_bytes:
                warn(f"{path}@{commit[:10]}: {size} bytes exceeds the {max_file_bytes}-byte cap; skipped")
                continue
            new_text = _decode(git.read_blob(commit, path))
            if new_text is None:
                warn(f"{path}@{commit[:10]}: binary content; skipped")
                continue
            if size is None and len(new_text.encode()) > max_file_bytes:
                warn(f"{path}@{commit[:10]}: exceeds the {max_file_bytes}-byte cap; skipped")
                continue
            if status == "A" or parent is None:
                old_text, old_commit = "", parent or NULL_COMMIT
            else:
                old = _decode(git.read_blob(parent, path))
                if old is None:
                    warn(f"{path}@{parent[:10]}: binary content; skipped")
                    continue
                old_text, old_commit = old, parent
            if old_text == new_text:
                continue
            pairs.append(VersionPair(path, old_commit, commit, old_text, new_text))
    return pairs


def pair_to_changes(
    pair: VersionPair, profile: LanguageProfile, warnings: list[str] | None = None
) -> list[Change]:
    """Parse, diff, weave and extract.  Unparseable versions give no changes.

    The aterm format has no empty document, so a file added under the aterm
    frontend becomes a single insertion of the whole new tree.
    """
    origin = Origin(pair.file_path, pair.old_commit, pair.new_commit)
    added = profile.frontend == "aterm" and not pair.old_text.strip()
    try:
        old = None if added else parse_source(pair.old_text, profile)
        new = parse_source(pair.new_text, profile)
    except SourceSyntaxError as exc:
        msg = f"{pair.file_path}@{pair.new_commit[:10]}: unparseable version skipped ({exc})"
        log.warning(msg)
        if warnings is not None:
            warnings.append(msg)
        return []
    if old is None:
        return [Change(ChangeKind.INSERTION, None, new, None, new, origin)]
    if old == new:
        return []
    left, right = edit_trees(old, new)
    return extract_changes(weave(left, right), profile, origin)


_FIXTURE_ENV = {
    "GIT_AUTHOR_NAME": "fixture",
    "GIT_AUTHOR_EMAIL": "fixture@example.invalid",
    "GIT_COMMITTER_NAME": "fixture",
    "GIT_COMMITTER_EMAIL": "fixture@example.invalid",
    "GIT_CONFIG_GLOBAL": os.devnull,
    "GIT_CONFIG_NOSYSTEM": "1",
}


def build_fixture_repo(snapshots: str | Path, repo: str | Path) -> list[str]:
    """Turn numbered snapshot directories into a real repository.

    ``snapshots`` holds subdirectories such as ``001/``, ``002/`` ... each a
    complete copy of the tree at that commit.  Commits get fixed authors and
    dates so the resulting hashes are reproducible.  Returns the commit ids.
    """
    snapshots, repo = Path(snapshots), Path(repo)
    steps = sorted((p for p in snapshots.iterdir() if p.is_dir()), key=lambda p: p.name)
    if not steps:
        raise ValueError(f"no snapshot directories in {snapshots}")
    repo.mkdir(parents=True, exist_ok=True)

    def git(*args: str, when: int = 0) -> str:
        env = {**os.environ, **_FIXTURE_ENV}
        stamp = f"{1_600_000_000 + when * 60} +0000"
        env["GIT_AUTHOR_DATE"] = env["GIT_COMMITTER_DATE"] = stamp
        proc = subprocess.run(["git", "-C", str(repo), *args], capture_output=True, env=env)
        if proc.returncode != 0:
            raise VCSError(proc.stderr.decode("utf-8", "replace").strip())
        return proc.stdout.decode().strip()

    git("init", "-q", "-b", "main")
    commits = []
    for n, step in enumerate(steps, start=1):
        for entry in repo.iterdir():
            if entry.name == ".git":
                continue
            if entry.is_dir():
                shutil.rmtree(entry)
            else:
                entry.unlink()
        shutil.copytree(step, repo, dirs_exist_ok=True)
        git("add", "-A")
        git("commit", "-q", "--allow-empty", "-m", f"snapshot {step.name}", when=n)
        commits.append(git("rev-parse", "HEAD"))
    return commits
