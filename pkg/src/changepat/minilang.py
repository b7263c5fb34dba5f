"""MiniLang: a small Java-like language parsed straight into aterms.

Label vocabulary follows the Java AST names where the two overlap
(``ExpStmt``, ``PostIncrement``, ``ExpName``, ``Name``, ``Ident`` ...).
Bodies of ``if``/``for``/``while`` are always an ``AList`` of statements, so
``if (x) y++;`` and ``if (x) { y++; }`` produce the same tree.

:func:`unparse` goes the other way and understands ``MetaVar`` holes, which
is how templates get printed as source-like text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .aterm import AInt, AList, Appl, ATerm, MetaVar, render_aterm

__all__ = ["MiniLangSyntaxError", "parse_minilang", "unparse", "ident", "name"]


class MiniLangSyntaxError(SyntaxError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


KEYWORDS = {
    "if", "else", "for", "while", "return", "break", "continue", "class", "new",
    "true", "false", "null", "this", "void",
    "public", "private", "protected", "static", "final",
    "int", "long", "boolean", "char", "double", "float", "byte", "short",
}  # fmt: skip
PRIMITIVES = ("int", "long", "boolean", "char", "double", "float", "byte", "short")
MODIFIERS = {"public": "Public", "private": "Private", "protected": "Protected",
             "static": "Static", "final": "Final"}  # fmt: skip

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f]+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<id>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<int>[0-9]+)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<op>\+\+|--|\+=|-=|\*=|/=|%=|==|!=|<=|>=|&&|\|\||[-+*/%<>=!.,;:?(){}\[\]])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "id", "kw", "int", "str", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise MiniLangSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "id" and value in KEYWORDS:
                kind = "kw"
            toks.append(Token(kind, value, line, pos - line_start + 1))
        nl = value.count("\n")
        if nl:
            line += nl
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


# -- node builders ------------------------------------------------------------


def ident(s: str) -> Appl:
    return Appl("Ident", (Appl(f'"{s}"'),))


def name(*parts: str) -> Appl:
    return Appl("Name", tuple(ident(p) for p in parts))


def _A(label: str, *kids: ATerm) -> Appl:
    return Appl(label, kids)


def _L(kids) -> AList:
    return AList(tuple(kids))


BINOPS = [
    # lowest precedence first
    {"||": "COr"},
    {"&&": "CAnd"},
    {"==": "Equal", "!=": "NotEq"},
    {"<": "LThan", ">": "GThan", "<=": "LThanE", ">=": "GThanE"},
    {"+": "Add", "-": "Sub"},
    {"*": "Mult", "/": "Div", "%": "Rem"},
]
ASSIGN_OPS = {"=": "EqualA", "+=": "AddA", "-=": "SubA", "*=": "MultA", "/=": "DivA", "%=": "RemA"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("op", "kw")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def fail(self, message: str):
        t = self.tok
        found = t.text or "end of input"
        raise MiniLangSyntaxError(f"{message}, found {found!r}", t.line, t.col)

    def expect_id(self) -> str:
        if self.tok.kind != "id":
            self.fail("expected an identifier")
        t = self.tok
        self.i += 1
        return t.text

    # top level
    def unit(self) -> ATerm:
        items = []
        while self.tok.kind != "eof":
            items.append(self.item())
        return _A("CompilationUnit", _L(items))

    def modifiers(self) -> AList:
        mods = []
        while self.tok.kind == "kw" and self.tok.text in MODIFIERS:
            mods.append(Appl(MODIFIERS[self.tok.text]))
            self.i += 1
        return _L(mods)

    def item(self) -> ATerm:
        start = self.i
        mods = self.modifiers()
        if self.at("class"):
            self.i += 1
            cname = self.expect_id()
            self.expect("{")
            members = []
            while not self.at("}"):
                members.append(self.member())
            self.expect("}")
            return _A("ClassDecl", mods, ident(cname), _L(members))
        if mods.children or self._looks_like_method():
            return self.method_rest(mods)
        self.i = start
        return self.statement()

    def member(self) -> ATerm:
        mods = self.modifiers()
        if self._looks_like_method():
            return self.method_rest(mods)
        typ = self.type_()
        decls = self.var_decls()
        self.expect(";")
        return _A("FieldDecl", mods, typ, decls)

    def _looks_like_method(self) -> bool:
        save = self.i
        try:
            if self.accept("void"):
                pass
            elif self.try_type() is None:
                return False
            if self.tok.kind != "id":
                return False
            self.i += 1
            return self.at("(")
        finally:
            self.i = save

    def method_rest(self, mods: AList) -> ATerm:
        rtype = Appl("Void") if self.accept("void") else self.type_()
        mname = self.expect_id()
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                ptype = self.type_()
                params.append(_A("FormalParam", ptype, ident(self.expect_id())))
                if not self.accept(","):
                    break
        self.expect(")")
        self.expect("{")
        body = self.stmts_until("}")
        return _A("MethodDecl", mods, rtype, ident(mname), _L(params), body)

    # types
    def try_type(self) -> ATerm | None:
        """Parse a type if one starts here; restores position on failure."""
        save = self.i
        t = self.tok
        if t.kind == "kw" and t.text in PRIMITIVES:
            self.i += 1
            typ: ATerm = _A("PrimType", Appl(t.text))
        elif t.kind == "id":
            parts = [self.expect_id()]
            while self.at(".") and self.peek().kind == "id":
                self.i += 1
                parts.append(self.expect_id())
            typ = _A("ClassType", name(*parts))
        else:
            return None
        while self.at("[") and self.peek().text == "]":
            self.i += 2
            typ = _A("ArrayType", typ)
        if self.tok.kind == "eof":
            self.i = save
            return None
        return typ

    def type_(self) -> ATerm:
        typ = self.try_type()
        if typ is None:
            self.fail("expected a type")
        return typ

    def _decl_start(self) -> bool:
        """True when a local variable declaration starts here (``T x`` ...)."""
        save = self.i
        try:
            return self.try_type() is not None and self.tok.kind == "id"
        finally:
            self.i = save

    def var_decls(self) -> AList:
        decls = []
        while True:
            vname = self.expect_id()
            init = [self.expr()] if self.accept("=") else []
            decls.append(_A("VarDecl", ident(vname), _L(init)))
            if not self.accept(","):
                return _L(decls)

    # statements
    def stmts_until(self, closer: str) -> AList:
        stmts = []
        while not self.at(closer):
            if self.tok.kind == "eof":
                self.fail(f"expected {closer!r}")
            stmts.append(self.statement())
        self.expect(closer)
        return _L(stmts)

    def body(self) -> AList:
        if self.accept("{"):
            return self.stmts_until("}")
        return _L([self.statement()])

    def statement(self) -> ATerm:
        t = self.tok
        if self.accept("{"):
            return _A("Block", self.stmts_until("}"))
        if self.accept(";"):
            return Appl("Empty")
        if self.accept("if"):
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.body()
            other = self.body() if self.accept("else") else _L([])
            return _A("IfStmt", cond, then, other)
        if self.accept("while"):
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return _A("WhileStmt", cond, self.body())
        if self.accept("for"):
            return self.for_rest()
        if self.accept("return"):
            val = [] if self.at(";") else [self.expr()]
            self.expect(";")
            return _A("Return", _L(val))
        if self.accept("break"):
            self.expect(";")
            return Appl("Break")
        if self.accept("continue"):
            self.expect(";")
            return Appl("Continue")
        if t.kind == "kw" and t.text in ("class", *MODIFIERS):
            self.fail("declaration not allowed here")
        if self._decl_start():
            stmt = self.local_decl()
            self.expect(";")
            return stmt
        e = self.expr()
        self.expect(";")
        return _A("ExpStmt", e)

    def local_decl(self) -> ATerm:
        typ = self.type_()
        return _A("LocalVarDecl", typ, self.var_decls())

    def for_rest(self) -> ATerm:
        self.expect("(")
        save = self.i
        typ = self.try_type()
        if typ is not None and self.tok.kind == "id" and self.peek().text == ":":
            var = ident(self.expect_id())
            self.expect(":")
            coll = self.expr()
            self.expect(")")
            header = _A("EnhancedFor", typ, var, coll)
            return _A("ForStmt", header, self.body())
        self.i = save
        if self.at(";"):
            init = _L([])
        elif self._decl_start():
            init = _L([self.local_decl()])
        else:
            init = self.expr_list(";")
        self.expect(";")
        cond = _L([] if self.at(";") else [self.expr()])
        self.expect(";")
        update = _L([]) if self.at(")") else self.expr_list(")")
        self.expect(")")
        header = _A("BasicFor", init, cond, update)
        return _A("ForStmt", header, self.body())

    def expr_list(self, closer: str) -> AList:
        items = [self.expr()]
        while self.accept(","):
            items.append(self.expr())
        return _L(items)

    # expressions
    def expr(self) -> ATerm:
        lhs = self.conditional()
        t = self.tok
        if t.kind == "op" and t.text in ASSIGN_OPS:
            target = self._lhs(lhs)
            self.i += 1
            rhs = self.expr()
            return _A("Assign", target, Appl(ASSIGN_OPS[t.text]), rhs)
        return lhs

    def _lhs(self, e: ATerm) -> ATerm:
        if isinstance(e, Appl):
            if e.label == "ExpName":
                return _A("NameLhs", *e.children)
            if e.label == "FieldAccess":
                return _A("FieldLhs", *e.children)
            if e.label == "ArrayAccess":
                return _A("ArrayLhs", *e.children)
        self.fail("invalid assignment target")

    def conditional(self) -> ATerm:
        c = self.binary(0)
        if self.accept("?"):
            a = self.expr()
            self.expect(":")
            b = self.conditional()
            return _A("Cond", c, a, b)
        return c

    def binary(self, level: int) -> ATerm:
        if level == len(BINOPS):
            return self.unary()
        ops = BINOPS[level]
        lhs = self.binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in ops:
            op = ops[self.tok.text]
            self.i += 1
            rhs = self.binary(level + 1)
            lhs = _A("BinOp", lhs, Appl(op), rhs)
        return lhs

    def unary(self) -> ATerm:
        t = self.tok
        if t.kind == "op":
            prefix = {"!": "PreNot", "-": "PreMinus", "+": "PrePlus",
                      "++": "PreIncrement", "--": "PreDecrement"}.get(t.text)  # fmt: skip
            if prefix:
                self.i += 1
                return _A(prefix, self.unary())
            if t.text == "(":
                cast = self._try_cast()
                if cast is not None:
                    return cast
        return self.postfix()

    def _try_cast(self) -> ATerm | None:
        save = self.i
        self.i += 1
        typ = self.try_type()
        if typ is not None and self.accept(")"):
            nxt = self.tok
            primitive = isinstance(typ, Appl) and typ.label == "PrimType"
            starts_operand = nxt.kind in ("id", "int", "str") or nxt.text in ("(", "!", "this", "new", "true", "false", "null")
            if primitive or starts_operand:
                return _A("Cast", typ, self.unary())
        self.i = save
        return None

    def args(self) -> AList:
        self.expect("(")
        items = []
        if not self.at(")"):
            items.append(self.expr())
            while self.accept(","):
                items.append(self.expr())
        self.expect(")")
        return _L(items)

    def postfix(self) -> ATerm:
        e = self.primary()
        while True:
            if self.at(".") and self.peek().kind == "id":
                self.i += 1
                member = self.expect_id()
                if self.at("("):
                    e = _A("PrimaryMethodInv", e, ident(member), self.args())
                else:
                    e = _A("FieldAccess", e, ident(member))
            elif self.accept("["):
                idx = self.expr()
                self.expect("]")
                e = _A("ArrayAccess", e, idx)
            elif self.accept("++"):
                e = _A("PostIncrement", e)
            elif self.accept("--"):
                e = _A("PostDecrement", e)
            else:
                return e

    def primary(self) -> ATerm:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return _A("Lit", _A("Int", AInt(int(t.text))))
        if t.kind == "str":
            self.i += 1
            return _A("Lit", _A("String", Appl(t.text)))
        if t.kind == "kw":
            if t.text in ("true", "false"):
                self.i += 1
                return _A("Lit", _A("Boolean", Appl(t.text)))
            if t.text == "null":
                self.i += 1
                return _A("Lit", Appl("Null"))
            if t.text == "this":
                self.i += 1
                return Appl("This")
            if t.text == "new":
                self.i += 1
                typ = self.type_()
                if self.accept("["):
                    n = self.expr()
                    self.expect("]")
                    return _A("ArrayCreate", typ, n)
                return _A("InstanceCreation", typ, self.args())
        if t.kind == "id":
            parts = [self.expect_id()]
            while self.at(".") and self.peek().kind == "id":
                self.i += 1
                parts.append(self.expect_id())
            if self.at("("):
                return _A("MethodInv", name(*parts), self.args())
            return _A("ExpName", name(*parts))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.fail("expected an expression")


def parse_minilang(text: str) -> ATerm:
    """Parse a MiniLang compilation unit into an aterm rooted at ``CompilationUnit``."""
    return _Parser(text).unit()


# -- unparsing ----------------------------------------------------------------

HOLE = "□"

_BIN_SYMBOL = {op: sym for level in BINOPS for sym, op in level.items()}
_BIN_PREC = {op: prec for prec, level in enumerate(BINOPS, start=1) for op in level.values()}
_ASSIGN_SYMBOL = {v: k for k, v in ASSIGN_OPS.items()}
_PREFIX = {"PreNot": "!", "PreMinus": "-", "PrePlus": "+", "PreIncrement": "++", "PreDecrement": "--"}
_POSTFIX = {"PostIncrement": "++", "PostDecrement": "--"}
_MODIFIER_WORD = {v: k for k, v in MODIFIERS.items()}


class _Unknown(Exception):
    pass


class _Unparser:
    def __init__(self, subscripts: bool):
        self.subscripts = subscripts
        self.fallbacks = 0

    def hole(self, t: MetaVar) -> str:
        return f"{HOLE}_{t.index}" if self.subscripts else HOLE

    def node(self, t: ATerm, fn) -> str:
        """Render with ``fn``; an unexpected shape falls back to flagged aterm text."""
        if isinstance(t, MetaVar):
            return self.hole(t)
        try:
            return fn(t)
        except _Unknown:
            self.fallbacks += 1
            return f"⟦{render_aterm(t)}⟧"

    # generic shape checks
    @staticmethod
    def _appl(t: ATerm, label: str | None = None, arity: int | None = None) -> Appl:
        if not isinstance(t, Appl) or (label is not None and t.label != label):
            raise _Unknown
        if arity is not None and len(t.children) != arity:
            raise _Unknown
        return t

    @staticmethod
    def _list(t: ATerm) -> AList:
        if not isinstance(t, AList):
            raise _Unknown
        return t

    def seq(self, t: ATerm, fn, sep: str) -> str:
        if isinstance(t, MetaVar):
            return self.hole(t)
        return sep.join(self.node(c, fn) for c in self._list(t).children)

    # pieces
    def ident_(self, t: ATerm) -> str:
        a = self._appl(t, "Ident", 1)
        leaf = a.children[0]
        if isinstance(leaf, MetaVar):
            return self.hole(leaf)
        leaf = self._appl(leaf, None, 0)
        if len(leaf.label) >= 2 and leaf.label[0] == leaf.label[-1] == '"':
            return leaf.label[1:-1]
        raise _Unknown

    def name_(self, t: ATerm) -> str:
        a = self._appl(t, "Name")
        if not a.children:
            raise _Unknown
        return ".".join(self.node(c, self.ident_) for c in a.children)

    def type_(self, t: ATerm) -> str:
        a = self._appl(t)
        if a.label == "PrimType" and len(a.children) == 1:
            leaf = a.children[0]
            return self.hole(leaf) if isinstance(leaf, MetaVar) else self._appl(leaf, None, 0).label
        if a.label == "ClassType" and len(a.children) == 1:
            return self.node(a.children[0], self.name_)
        if a.label == "ArrayType" and len(a.children) == 1:
            return self.node(a.children[0], self.type_) + "[]"
        if a.label == "Void" and not a.children:
            return "void"
        raise _Unknown

    def op_(self, t: ATerm, table: dict[str, str]) -> str:
        if isinstance(t, MetaVar):
            return self.hole(t)
        a = self._appl(t, None, 0)
        if a.label not in table:
            raise _Unknown
        return table[a.label]

    def expr(self, t: ATerm, prec: int = 0) -> str:
        return self.node(t, lambda x: self._expr(x, prec))

    def _expr(self, t: ATerm, prec: int) -> str:
        a = self._appl(t)
        lab, k = a.label, a.children
        if lab == "Lit" and len(k) == 1:
            return self.node(k[0], self._lit)
        if lab == "ExpName" and len(k) == 1:
            return self.node(k[0], self.name_)
        if lab == "This" and not k:
            return "this"
        if lab == "MethodInv" and len(k) == 2:
            return f"{self.node(k[0], self.name_)}({self.seq(k[1], self.expr, ', ')})"
        if lab == "PrimaryMethodInv" and len(k) == 3:
            return f"{self.expr(k[0], 99)}.{self.node(k[1], self.ident_)}({self.seq(k[2], self.expr, ', ')})"
        if lab == "FieldAccess" and len(k) == 2:
            return f"{self.expr(k[0], 99)}.{self.node(k[1], self.ident_)}"
        if lab == "ArrayAccess" and len(k) == 2:
            return f"{self.expr(k[0], 99)}[{self.expr(k[1])}]"
        if lab in _POSTFIX and len(k) == 1:
            return self.expr(k[0], 99) + _POSTFIX[lab]
        if lab in _PREFIX and len(k) == 1:
            return _PREFIX[lab] + self.expr(k[0], 90)
        if lab == "Cast" and len(k) == 2:
            return self._wrap(f"({self.node(k[0], self.type_)}) {self.expr(k[1], 90)}", 90, prec)
        if lab == "BinOp" and len(k) == 3:
            p = _BIN_PREC.get(getattr(k[1], "label", None), 1)
            text = f"{self.expr(k[0], p)} {self.op_(k[1], _BIN_SYMBOL)} {self.expr(k[2], p + 1)}"
            return self._wrap(text, p, prec)
        if lab == "Cond" and len(k) == 3:
            text = f"{self.expr(k[0], 1)} ? {self.expr(k[1])} : {self.expr(k[2])}"
            return self._wrap(text, 0, prec)
        if lab == "Assign" and len(k) == 3:
            text = f"{self.node(k[0], self._lhs)} {self.op_(k[1], _ASSIGN_SYMBOL)} {self.expr(k[2])}"
            return self._wrap(text, 0, prec)
        if lab == "InstanceCreation" and len(k) == 2:
            return f"new {self.node(k[0], self.type_)}({self.seq(k[1], self.expr, ', ')})"
        if lab == "ArrayCreate" and len(k) == 2:
            return f"new {self.node(k[0], self.type_)}[{self.expr(k[1])}]"
        raise _Unknown

    @staticmethod
    def _wrap(text: str, own: int, outer: int) -> str:
        return f"({text})" if own < outer else text

    def _lit(self, t: ATerm) -> str:
        a = self._appl(t)
        if a.label == "Null" and not a.children:
            return "null"
        if len(a.children) != 1:
            raise _Unknown
        v = a.children[0]
        if isinstance(v, MetaVar):
            return self.hole(v)
        if a.label == "Int" and isinstance(v, AInt):
            return str(v.value)
        if a.label in ("String", "Boolean"):
            return self._appl(v, None, 0).label
        raise _Unknown

    def _lhs(self, t: ATerm) -> str:
        a = self._appl(t)
        if a.label == "NameLhs" and len(a.children) == 1:
            return self.node(a.children[0], self.name_)
        if a.label == "FieldLhs" and len(a.children) == 2:
            return self._expr(Appl("FieldAccess", a.children), 0)
        if a.label == "ArrayLhs" and len(a.children) == 2:
            return self._expr(Appl("ArrayAccess", a.children), 0)
        raise _Unknown

    def var_decl(self, t: ATerm) -> str:
        a = self._appl(t, "VarDecl", 2)
        text = self.node(a.children[0], self.ident_)
        init = a.children[1]
        if isinstance(init, MetaVar):
            return f"{text} = {self.hole(init)}"
        init = self._list(init)
        if len(init.children) > 1:
            raise _Unknown
        if init.children:
            text += f" = {self.expr(init.children[0])}"
        return text

    def block(self, t: ATerm) -> str:
        inner = self.seq(t, self.stmt, " ")
        return f"{{ {inner} }}" if inner else "{ }"

    def stmt(self, t: ATerm) -> str:
        a = self._appl(t)
        lab, k = a.label, a.children
        if lab == "ExpStmt" and len(k) == 1:
            return self.expr(k[0]) + ";"
        if lab == "LocalVarDecl" and len(k) == 2:
            return f"{self.node(k[0], self.type_)} {self.seq(k[1], self.var_decl, ', ')};"
        if lab == "Block" and len(k) == 1:
            return self.block(k[0])
        if lab == "Empty" and not k:
            return ";"
        if lab == "Break" and not k:
            return "break;"
        if lab == "Continue" and not k:
            return "continue;"
        if lab == "Return" and len(k) == 1:
            val = self.seq(k[0], self.expr, ", ")
            return f"return {val};" if val else "return;"
        if lab == "IfStmt" and len(k) == 3:
            text = f"if ({self.expr(k[0])}) {self.block(k[1])}"
            if not (isinstance(k[2], AList) and not k[2].children):
                text += f" else {self.block(k[2])}"
            return text
        if lab == "WhileStmt" and len(k) == 2:
            return f"while ({self.expr(k[0])}) {self.block(k[1])}"
        if lab == "ForStmt" and len(k) == 2:
            return f"for ({self.node(k[0], self.for_header)}) {self.block(k[1])}"
        if lab == "MethodDecl" and len(k) == 5:
            mods = self.seq(k[0], lambda m: self.op_(m, _MODIFIER_WORD), " ")
            sig = f"{self.node(k[1], self.type_)} {self.node(k[2], self.ident_)}({self.seq(k[3], self.param, ', ')})"
            return f"{mods + ' ' if mods else ''}{sig} {self.block(k[4])}"
        if lab == "ClassDecl" and len(k) == 3:
            mods = self.seq(k[0], lambda m: self.op_(m, _MODIFIER_WORD), " ")
            return f"{mods + ' ' if mods else ''}class {self.node(k[1], self.ident_)} {self.block(k[2])}"
        if lab == "FieldDecl" and len(k) == 3:
            mods = self.seq(k[0], lambda m: self.op_(m, _MODIFIER_WORD), " ")
            return f"{mods + ' ' if mods else ''}{self.node(k[1], self.type_)} {self.seq(k[2], self.var_decl, ', ')};"
        if lab == "CompilationUnit" and len(k) == 1:
            return self.seq(k[0], self.stmt, " ")
        raise _Unknown

    def param(self, t: ATerm) -> str:
        a = self._appl(t, "FormalParam", 2)
        return f"{self.node(a.children[0], self.type_)} {self.node(a.children[1], self.ident_)}"

    def for_header(self, t: ATerm) -> str:
        a = self._appl(t)
        k = a.children
        if a.label == "BasicFor" and len(k) == 3:
            init = self.seq(k[0], self._for_init, ", ")
            cond = self.seq(k[1], self.expr, ", ")
            update = self.seq(k[2], self.expr, ", ")
            return f"{init} ; {cond} ; {update}"
        if a.label == "EnhancedFor" and len(k) == 3:
            return f"{self.node(k[0], self.type_)} {self.node(k[1], self.ident_)} : {self.expr(k[2])}"
        raise _Unknown

    def _for_init(self, t: ATerm) -> str:
        if isinstance(t, Appl) and t.label == "LocalVarDecl":
            return self.stmt(t)[:-1]
        return self._expr(t, 0)


def unparse(t: ATerm, subscripts: bool = False) -> tuple[str, int]:
    """Render a (possibly templated) tree as one line of MiniLang.

    Returns the text and the number of subtrees that had to fall back to
    ``⟦aterm⟧`` notation because their shape is not MiniLang.
    """
    u = _Unparser(subscripts)
    if isinstance(t, MetaVar):
        return u.hole(t), 0
    text = u.node(t, _render_any(u))
    return text, u.fallbacks


def _render_any(u: _Unparser):
    def fn(t: ATerm) -> str:
        try:
            return u.stmt(t)
        except _Unknown:
            pass
        try:
            return u._expr(t, 0)
        except _Unknown:
            pass
        if isinstance(t, AList):
            return u.block(t)
        raise _Unknown

    return fn
