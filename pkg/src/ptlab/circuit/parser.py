"""Lexer, recursive-descent parser and type checker for ``.ptc`` circuit files.

Grammar (``#`` starts a comment, whitespace is insignificant)::

    file   := decl*
    decl   := 'system' NAME '=' type
            | 'box' NAME ':' type '->' type '=' (matrix | 'kraus' '[' matrix (',' matrix)* ']')
            | 'main' '=' expr
    type   := 'one' | factor ('*' factor)*
    factor := NAME | 'classical' '(' INT ')' | 'quantum' '(' INT ')'
    expr   := par ('.' par)*            -- g . f : f acts first
    par    := unit ('*' unit)*
    unit   := '(' expr ')' | 'one' | NAME
            | ('id' | 'disc' | 'cup' | 'cap' | 'copy') '(' type ')'
            | 'swap' '(' type ',' type ')' | 'spider' '(' type ',' INT ',' INT ')'
            | 'trace' '(' expr ',' INT ')'  -- INT counts atoms from 1
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..systems import Classical, Quantum, SystemType
from . import ast

KEYWORDS = {"system", "box", "main", "kraus", "one", "classical", "quantum",
            "id", "disc", "cup", "cap", "copy", "swap", "spider", "trace"}


class CircuitError(Exception):
    def __init__(self, message: str, pos=None):
        self.pos = pos
        self.message = message
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + message)


class LexError(CircuitError):
    pass


class ParseError(CircuitError):
    pass


class UnknownName(CircuitError):
    pass


class CircuitTypeError(CircuitError):
    pass


class ShapeError(CircuitError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str       # NAME, NUM, IMAG, OP, EOF
    text: str
    pos: tuple


_NUM = r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)"
    rf"|(?P<imag>{_NUM}i(?![A-Za-z0-9_]))|(?P<num>{_NUM})"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>->|[()\[\],=:*.+\-])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        pos = (line, i - line_start + 1)
        if m is None:
            raise LexError(f"unexpected character {text[i]!r}", pos)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "imag":
            tokens.append(Token("IMAG", chunk[:-1], pos))
        elif kind == "num":
            tokens.append(Token("NUM", chunk, pos))
        elif kind == "name":
            tokens.append(Token("NAME", chunk, pos))
        elif kind == "op":
            tokens.append(Token("OP", chunk, pos))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = i + chunk.rindex("\n") + 1
        i = m.end()
    tokens.append(Token("EOF", "", (line, i - line_start + 1)))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("OP", "NAME") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}",
                             self.tok.pos)
        return self.advance()

    def name(self) -> Token:
        t = self.tok
        if t.kind != "NAME" or t.text in KEYWORDS:
            raise ParseError(f"expected a name, found {t.text or 'end of input'!r}", t.pos)
        return self.advance()

    def integer(self) -> int:
        t = self.tok
        if t.kind != "NUM" or not t.text.isdigit():
            raise ParseError(f"expected an integer, found {t.text!r}", t.pos)
        self.advance()
        return int(t.text)

    # declarations

    def file(self) -> ast.CircuitFile:
        decls = []
        while self.tok.kind != "EOF":
            decls.append(self.decl())
        return ast.CircuitFile(tuple(decls))

    def decl(self):
        t = self.tok
        if self.at("system"):
            self.advance()
            n = self.name()
            self.expect("=")
            return ast.SystemDecl(n.text, self.type_expr(), pos=t.pos)
        if self.at("box"):
            self.advance()
            n = self.name()
            self.expect(":")
            dom = self.type_expr()
            self.expect("->")
            cod = self.type_expr()
            self.expect("=")
            if self.at("kraus"):
                self.advance()
                self.expect("[")
                ops = [self.matrix()]
                while self.at(","):
                    self.advance()
                    ops.append(self.matrix())
                self.expect("]")
                return ast.BoxDecl(n.text, dom, cod, kraus=tuple(ops), pos=t.pos)
            return ast.BoxDecl(n.text, dom, cod, matrix=self.matrix(), pos=t.pos)
        if self.at("main"):
            self.advance()
            self.expect("=")
            return ast.MainDecl(self.expr(), pos=t.pos)
        raise ParseError(f"expected 'system', 'box' or 'main', found {t.text!r}", t.pos)

    def type_expr(self) -> ast.TypeExpr:
        pos = self.tok.pos
        if self.at("one"):
            self.advance()
            return ast.TypeExpr((), pos=pos)
        items = [self.type_factor()]
        while self.at("*"):
            self.advance()
            items.append(self.type_factor())
        return ast.TypeExpr(tuple(items), pos=pos)

    def type_factor(self):
        if self.at("classical") or self.at("quantum"):
            kind = self.advance().text
            self.expect("(")
            size = self.integer()
            self.expect(")")
            return ast.AtomLit(kind, size)
        return self.name().text

    # matrices

    def matrix(self) -> tuple:
        self.expect("[")
        rows = [self.row()]
        while self.at(","):
            self.advance()
            rows.append(self.row())
        self.expect("]")
        return tuple(rows)

    def row(self) -> tuple:
        self.expect("[")
        vals = [self.number()]
        while self.at(","):
            self.advance()
            vals.append(self.number())
        self.expect("]")
        return tuple(vals)

    def _signed_part(self):
        """One real or imaginary literal with optional sign; returns (value, is_imag)."""
        sign = 1.0
        if self.at("-") or self.at("+"):
            sign = -1.0 if self.advance().text == "-" else 1.0
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            return sign * float(t.text), False
        if t.kind == "IMAG":
            self.advance()
            return sign * float(t.text), True
        if t.kind == "NAME" and t.text == "i":
            self.advance()
            return sign, True
        raise ParseError(f"expected a number, found {t.text!r}", t.pos)

    def number(self) -> complex:
        v, imag = self._signed_part()
        if imag:
            return complex(0.0, v)
        if self.at("+") or self.at("-"):
            pos = self.tok.pos
            w, imag2 = self._signed_part()
            if not imag2:
                raise ParseError("expected an imaginary part like '0.5i'", pos)
            return complex(v, w)
        return complex(v, 0.0)

    # expressions

    def expr(self):
        left = self.par()
        while self.at("."):
            pos = self.advance().pos
            right = self.par()
            left = ast.Seq(left, right, pos=pos)
        return left

    def par(self):
        left = self.unit()
        while self.at("*"):
            pos = self.advance().pos
            right = self.unit()
            left = ast.Par(left, right, pos=pos)
        return left

    def unit(self):
        t = self.tok
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("one"):
            self.advance()
            return ast.One(pos=t.pos)
        simple = {"id": ast.Id, "disc": ast.Disc, "cup": ast.Cup, "cap": ast.Cap, "copy": ast.Copy}
        if t.kind == "NAME" and t.text in simple:
            self.advance()
            self.expect("(")
            ty = self.type_expr()
            self.expect(")")
            return simple[t.text](ty, pos=t.pos)
        if self.at("swap"):
            self.advance()
            self.expect("(")
            a = self.type_expr()
            self.expect(",")
            b = self.type_expr()
            self.expect(")")
            return ast.Swap(a, b, pos=t.pos)
        if self.at("spider"):
            self.advance()
            self.expect("(")
            a = self.type_expr()
            self.expect(",")
            m_in = self.integer()
            self.expect(",")
            m_out = self.integer()
            self.expect(")")
            return ast.Spider(a, m_in, m_out, pos=t.pos)
        if self.at("trace"):
            self.advance()
            self.expect("(")
            body = self.expr()
            self.expect(",")
            k = self.integer()
            self.expect(")")
            return ast.Trace(body, k, pos=t.pos)
        return ast.Prim(self.name().text, pos=t.pos)


# --- type checking --------------------------------------------------------

class Scope:
    """Resolved systems and box signatures of a file."""

    def __init__(self, file: ast.CircuitFile):
        self.systems: dict[str, SystemType] = {}
        self.boxes: dict[str, ast.BoxDecl] = {}
        self.signatures: dict[str, tuple] = {}
        seen = set()
        for d in file.decls:
            if isinstance(d, ast.MainDecl):
                if "main" in seen:
                    raise ParseError("duplicate main declaration", d.pos)
                seen.add("main")
                continue
            if d.name in seen:
                raise ParseError(f"duplicate name {d.name!r}", d.pos)
            seen.add(d.name)
            if isinstance(d, ast.SystemDecl):
                self.systems[d.name] = self.resolve(d.type)
            else:
                dom, cod = self.resolve(d.dom), self.resolve(d.cod)
                _check_box_shape(d, dom, cod)
                self.boxes[d.name] = d
                self.signatures[d.name] = (dom, cod)

    def resolve(self, t: ast.TypeExpr) -> SystemType:
        factors = []
        for item in t.items:
            if isinstance(item, ast.AtomLit):
                if item.size < 1:
                    raise CircuitTypeError(f"{item.kind} system needs size >= 1", t.pos)
                factors.append(Classical(item.size) if item.kind == "classical"
                               else Quantum(item.size))
            elif item in self.systems:
                factors.extend(self.systems[item].factors)
            else:
                raise UnknownName(f"unknown system {item!r}", t.pos)
        return SystemType(tuple(factors))

    def atom(self, t: ast.TypeExpr, classical: bool = False):
        s = self.resolve(t)
        if len(s) != 1:
            raise CircuitTypeError(f"expected a single atom, got {s}", t.pos)
        if classical and not isinstance(s[0], Classical):
            raise CircuitTypeError(f"expected a classical atom, got {s}", t.pos)
        return s[0]


def _check_box_shape(d: ast.BoxDecl, dom: SystemType, cod: SystemType):
    if d.matrix is not None:
        rows, cols = cod.carrier_dim, dom.carrier_dim
        mats = [d.matrix]
    else:
        hd = 1
        for a in dom:
            hd *= a.hilbert_dim
        hc = 1
        for a in cod:
            hc *= a.hilbert_dim
        rows, cols = hc, hd
        mats = d.kraus
    for m in mats:
        widths = {len(r) for r in m}
        if len(widths) != 1:
            raise ShapeError(f"box {d.name!r}: ragged matrix", d.pos)
        shape = (len(m), widths.pop())
        if shape != (rows, cols):
            raise ShapeError(
                f"box {d.name!r}: matrix is {shape[0]}x{shape[1]}, {dom} -> {cod} "
                f"needs {rows}x{cols}", d.pos)


def infer(expr, scope: Scope) -> tuple:
    """``(dom, cod)`` of an expression, raising on ill-typed composites."""
    E = SystemType
    if isinstance(expr, ast.One):
        return E(), E()
    if isinstance(expr, ast.Prim):
        if expr.name not in scope.signatures:
            raise UnknownName(f"unknown box {expr.name!r}", expr.pos)
        return scope.signatures[expr.name]
    if isinstance(expr, ast.Id):
        s = scope.resolve(expr.type)
        return s, s
    if isinstance(expr, ast.Disc):
        return scope.resolve(expr.type), E()
    if isinstance(expr, ast.Cup):
        a = scope.atom(expr.atom)
        return E(), E((a, a))
    if isinstance(expr, ast.Cap):
        a = scope.atom(expr.atom)
        return E((a, a)), E()
    if isinstance(expr, ast.Copy):
        a = scope.atom(expr.atom, classical=True)
        return E((a,)), E((a, a))
    if isinstance(expr, ast.Spider):
        a = scope.atom(expr.atom, classical=True)
        if expr.m_in == 0 and expr.m_out == 0:
            raise CircuitTypeError("spider needs at least one leg", expr.pos)
        return E((a,) * expr.m_in), E((a,) * expr.m_out)
    if isinstance(expr, ast.Swap):
        a, b = scope.resolve(expr.left), scope.resolve(expr.right)
        return a * b, b * a
    if isinstance(expr, ast.Trace):
        dom, cod = infer(expr.body, scope)
        k = expr.index - 1
        if not (0 <= k < len(dom) and k < len(cod)) or dom[k] != cod[k]:
            raise CircuitTypeError(f"cannot loop atom {expr.index} of {dom} -> {cod}", expr.pos)
        return (E(dom.factors[:k] + dom.factors[k + 1:]),
                E(cod.factors[:k] + cod.factors[k + 1:]))
    if isinstance(expr, ast.Seq):
        gd, gc = infer(expr.after, scope)
        fd, fc = infer(expr.before, scope)
        if fc != gd:
            raise CircuitTypeError(f"type mismatch: {fc} fed into {gd}", expr.pos)
        return fd, gc
    if isinstance(expr, ast.Par):
        ld, lc = infer(expr.left, scope)
        rd, rc = infer(expr.right, scope)
        return ld * rd, lc * rc
    raise TypeError(f"unknown expression {expr!r}")


def check(file: ast.CircuitFile) -> Scope:
    scope = Scope(file)
    main = file.main
    if main is not None:
        infer(main.expr, scope)
    return scope


def parse(text: str) -> ast.CircuitFile:
    """Parse and type-check a circuit file."""
    file = Parser(text).file()
    check(file)
    return file
