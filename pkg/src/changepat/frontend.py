"""Turning source text into aterms, and the per-language knobs downstream stages need."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .aterm import ATerm, ATermSyntaxError, parse_aterm
from .minilang import MiniLangSyntaxError, parse_minilang

__all__ = [
    "LanguageProfile",
    "ProfileError",
    "MINILANG",
    "ATERM",
    "BUILTIN_PROFILES",
    "SourceSyntaxError",
    "parse_source",
    "ingest_aterm_file",
    "load_profile",
    "resolve_profile",
]

SourceSyntaxError = (MiniLangSyntaxError, ATermSyntaxError)


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class LanguageProfile:
    """Which files a frontend handles and which node labels count as statements.

    ``frontend`` selects the parser: ``"minilang"`` for the built-in language,
    ``"aterm"`` for files already serialized by some external parser.
    """

    name: str
    file_extensions: frozenset[str]
    statement_labels: frozenset[str]
    frontend: str = field(default="")

    def __post_init__(self) -> None:
        object.__setattr__(self, "file_extensions", frozenset(self.file_extensions))
        object.__setattr__(self, "statement_labels", frozenset(self.statement_labels))
        if not self.frontend:
            object.__setattr__(self, "frontend", self.name)
        if not self.statement_labels:
            raise ProfileError("statement_labels must not be empty")
        bad = [e for e in self.file_extensions if not e.startswith(".")]
        if bad:
            raise ProfileError(f"file extensions must begin with '.': {sorted(bad)}")
        if self.frontend not in ("minilang", "aterm"):
            raise ProfileError(f"unknown frontend {self.frontend!r} (expected minilang or aterm)")

    def matches(self, path: str) -> bool:
        return any(path.endswith(ext) for ext in self.file_extensions)


_STATEMENTS = frozenset(
    {"ExpStmt", "IfStmt", "ForStmt", "WhileStmt", "Return", "LocalVarDecl", "Block", "MethodDecl"}
)

MINILANG = LanguageProfile("minilang", frozenset({".mini"}), _STATEMENTS)
ATERM = LanguageProfile("aterm", frozenset({".aterm"}), _STATEMENTS)
BUILTIN_PROFILES = {p.name: p for p in (MINILANG, ATERM)}


def parse_source(text: str, profile: LanguageProfile = MINILANG) -> ATerm:
    """Parse one file version.  Raises :class:`MiniLangSyntaxError` or
    :class:`ATermSyntaxError` on bad input; callers decide whether to skip."""
    if profile.frontend == "minilang":
        return parse_minilang(text)
    return parse_aterm(text)


def ingest_aterm_file(path: str | Path) -> ATerm:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_aterm(text)
    except ATermSyntaxError as exc:
        raise exc.with_path(str(path)) from None


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.replace(",", " ").split() if v.strip()]


def load_profile(path: str | Path) -> LanguageProfile:
    """Read a ``key = value`` profile file.

    Recognized keys: ``name``, ``extensions``, ``statement_labels`` and the
    optional ``frontend``.  List values are comma- or space-separated; ``#``
    starts a comment line.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ProfileError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip()
        if key not in ("name", "extensions", "statement_labels", "frontend"):
            raise ProfileError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    missing = {"name", "extensions", "statement_labels"} - values.keys()
    if missing:
        raise ProfileError(f"{path}: missing keys {sorted(missing)}")
    return LanguageProfile(
        name=values["name"],
        file_extensions=frozenset(_split(values["extensions"])),
        statement_labels=frozenset(_split(values["statement_labels"])),
        frontend=values.get("frontend", ""),
    )


def resolve_profile(choice: str | LanguageProfile) -> LanguageProfile:
    """A built-in profile name or a path to a profile file."""
    if isinstance(choice, LanguageProfile):
        return choice
    if choice in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[choice]
    if Path(choice).is_file():
        return load_profile(choice)
    raise ProfileError(f"unknown profile {choice!r}; built-ins are {sorted(BUILTIN_PROFILES)}")
