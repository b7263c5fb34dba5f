"""Annotated terms: the language-neutral tree model every other module consumes.

Three node variants cover any abstract syntax tree:

    AAppl "Label" [child, ...]
    AList [child, ...]
    AInt 42

Templates produced by antiunification reuse the same node classes plus
:class:`MetaVar`, which serializes as ``AVar k``.  Plain :func:`parse_aterm`
rejects ``AVar``; :func:`parse_template` accepts it.

Trees are unshared and immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Appl",
    "AList",
    "AInt",
    "MetaVar",
    "ATerm",
    "ATermSyntaxError",
    "parse_aterm",
    "parse_template",
    "render_aterm",
    "size",
    "equal",
    "children",
    "head",
    "with_children",
    "preorder",
    "contains_subtree",
    "metavars",
]


@dataclass(frozen=True, slots=True)
class Appl:
    label: str
    children: tuple[ATerm, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True, slots=True)
class AList:
    children: tuple[ATerm, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True, slots=True)
class AInt:
    value: int


@dataclass(frozen=True, slots=True)
class MetaVar:
    """Template placeholder; only ever appears inside antiunification output."""

    index: int


ATerm = Union[Appl, AList, AInt, MetaVar]


class ATermSyntaxError(ValueError):
    """Malformed aterm text.

    ``offset`` is a byte offset into the UTF-8 encoding of the input.
    """

    def __init__(self, offset: int, expected: str, found: str = "", path: str | None = None):
        self.offset = offset
        self.expected = expected
        self.found = found
        self.path = path
        where = f"{path}: " if path else ""
        got = f", found {found!r}" if found else ""
        super().__init__(f"{where}byte {offset}: expected {expected}{got}")

    def with_path(self, path: str) -> ATermSyntaxError:
        return ATermSyntaxError(self.offset, self.expected, self.found, path)


# -- structural helpers -------------------------------------------------------


def children(t: ATerm) -> tuple[ATerm, ...]:
    if isinstance(t, (Appl, AList)):
        return t.children
    return ()


def head(t: ATerm) -> ATerm:
    """The node itself with its children stripped."""
    if isinstance(t, Appl):
        return Appl(t.label) if t.children else t
    if isinstance(t, AList):
        return AList() if t.children else t
    return t


def with_children(node: ATerm, kids: tuple[ATerm, ...] | list[ATerm]) -> ATerm:
    if isinstance(node, Appl):
        return Appl(node.label, tuple(kids))
    if isinstance(node, AList):
        return AList(tuple(kids))
    if kids:
        raise ValueError(f"{node!r} cannot carry children")
    return node


def size(t: ATerm) -> int:
    """Number of nodes; every Appl, AList and AInt counts once."""
    n = 0
    stack = [t]
    while stack:
        node = stack.pop()
        n += 1
        stack.extend(children(node))
    return n


def equal(a: ATerm, b: ATerm) -> bool:
    return a == b


def preorder(t: ATerm) -> Iterator[ATerm]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def contains_subtree(t: ATerm, sub: ATerm) -> bool:
    return any(node == sub for node in preorder(t))


def metavars(t: ATerm) -> list[int]:
    """Metavariable indices in first-occurrence preorder, without repeats."""
    seen: dict[int, None] = {}
    for node in preorder(t):
        if isinstance(node, MetaVar):
            seen.setdefault(node.index, None)
    return list(seen)


# -- serialization ------------------------------------------------------------


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_aterm(t: ATerm) -> str:
    """Canonical text: single spaces, ``[a, b]`` child lists, escaped labels."""
    out: list[str] = []
    _render(t, out)
    return "".join(out)


def _render(t: ATerm, out: list[str]) -> None:
    if isinstance(t, Appl):
        out.append("AAppl ")
        out.append(_quote(t.label))
        out.append(" ")
        _render_list(t.children, out)
    elif isinstance(t, AList):
        out.append("AList ")
        _render_list(t.children, out)
    elif isinstance(t, AInt):
        out.append(f"AInt {t.value}")
    elif isinstance(t, MetaVar):
        out.append(f"AVar {t.index}")
    else:
        raise TypeError(f"not an aterm: {t!r}")


def _render_list(kids: tuple[ATerm, ...], out: list[str]) -> None:
    out.append("[")
    for i, kid in enumerate(kids):
        if i:
            out.append(", ")
        _render(kid, out)
    out.append("]")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<kw>AAppl|AList|AInt|AVar)(?![A-Za-z0-9_])
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<int>-?[0-9]+)
  | (?P<punct>[\[\],])
    """,
    re.VERBOSE | re.DOTALL,
)


class _Parser:
    def __init__(self, text: str, allow_vars: bool):
        self.text = text
        self.allow_vars = allow_vars
        self.tokens: list[tuple[str, str, int]] = []
        self._tokenize()
        self.i = 0

    def _byte_offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def _tokenize(self) -> None:
        pos = 0
        text = self.text
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                found = text[pos : pos + 12]
                raise ATermSyntaxError(
                    self._byte_offset(pos), "a keyword, string, integer, '[', ']' or ','", found
                )
            kind = m.lastgroup
            if kind != "ws":
                value = m.group()
                if kind == "kw" or kind == "punct":
                    kind = value
                self.tokens.append((kind, value, pos))
            pos = m.end()
        self.tokens.append(("eof", "", len(text)))

    def _peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def _expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise ATermSyntaxError(self._byte_offset(tok[2]), what, tok[1] or "end of input")
        self.i += 1
        return tok

    def parse(self) -> ATerm:
        t = self._term()
        self._expect("eof", "end of input")
        return t

    def _term(self) -> ATerm:
        kind, value, pos = self._peek()
        if kind == "AAppl":
            self.i += 1
            label = _unquote(self._expect("str", "a quoted label")[1])
            return Appl(label, self._list())
        if kind == "AList":
            self.i += 1
            return AList(self._list())
        if kind == "AInt":
            self.i += 1
            return AInt(int(self._expect("int", "an integer")[1]))
        if kind == "AVar" and self.allow_vars:
            self.i += 1
            idx = int(self._expect("int", "a metavariable index")[1])
            if idx < 1:
                raise ATermSyntaxError(self._byte_offset(pos), "a positive metavariable index")
            return MetaVar(idx)
        expected = "AAppl, AList, AInt or AVar" if self.allow_vars else "AAppl, AList or AInt"
        raise ATermSyntaxError(self._byte_offset(pos), expected, value or "end of input")

    def _list(self) -> tuple[ATerm, ...]:
        self._expect("[", "'['")
        kids: list[ATerm] = []
        if self._peek()[0] == "]":
            self.i += 1
            return ()
        while True:
            kids.append(self._term())
            kind, value, pos = self._peek()
            if kind == ",":
                self.i += 1
                continue
            if kind == "]":
                self.i += 1
                return tuple(kids)
            raise ATermSyntaxError(self._byte_offset(pos), "',' or ']'", value or "end of input")


def _unquote(token: str) -> str:
    body = token[1:-1]
    out: list[str] = []
    it = iter(body)
    for ch in it:
        if ch == "\\":
            out.append(next(it))
        else:
            out.append(ch)
    return "".join(out)


def parse_aterm(text: str) -> ATerm:
    """Parse one aterm.  Whitespace between tokens is free-form."""
    return _Parser(text, allow_vars=False).parse()


def parse_template(text: str) -> ATerm:
    """Like :func:`parse_aterm` but also accepts ``AVar k`` metavariables."""
    return _Parser(text, allow_vars=True).parse()
