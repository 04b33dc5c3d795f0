"""Canonical text form of circuit files."""
from __future__ import annotations

from . import ast


def format_real(x: float) -> str:
    s = format(x, ".17g")
    if s in ("inf", "-inf", "nan"):
        raise ValueError(f"non-finite entry {x}")
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def format_number(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return format_real(z.real)
    im = format_real(abs(z.imag))
    sign = "-" if z.imag < 0 else "+"
    if z.real == 0:
        return f"{'-' if z.imag < 0 else ''}{im}i"
    return f"{format_real(z.real)}{sign}{im}i"


def format_matrix(m) -> str:
    return "[" + ", ".join("[" + ", ".join(format_number(v) for v in row) + "]" for row in m) + "]"


def format_type(t: ast.TypeExpr) -> str:
    if not t.items:
        return "one"
    return " * ".join(i if isinstance(i, str) else f"{i.kind}({i.size})" for i in t.items)


def format_expr(e) -> str:
    if isinstance(e, ast.One):
        return "one"
    if isinstance(e, ast.Prim):
        return e.name
    for cls, kw in ((ast.Id, "id"), (ast.Disc, "disc")):
        if isinstance(e, cls):
            return f"{kw}({format_type(e.type)})"
    for cls, kw in ((ast.Cup, "cup"), (ast.Cap, "cap"), (ast.Copy, "copy")):
        if isinstance(e, cls):
            return f"{kw}({format_type(e.atom)})"
    if isinstance(e, ast.Spider):
        return f"spider({format_type(e.atom)}, {e.m_in}, {e.m_out})"
    if isinstance(e, ast.Swap):
        return f"swap({format_type(e.left)}, {format_type(e.right)})"
    if isinstance(e, ast.Trace):
        return f"trace({format_expr(e.body)}, {e.index})"
    if isinstance(e, ast.Seq):
        right = format_expr(e.before)
        if isinstance(e.before, ast.Seq):
            right = f"({right})"
        return f"{format_expr(e.after)} . {right}"
    if isinstance(e, ast.Par):
        left, right = format_expr(e.left), format_expr(e.right)
        if isinstance(e.left, ast.Seq):
            left = f"({left})"
        if isinstance(e.right, (ast.Seq, ast.Par)):
            right = f"({right})"
        return f"{left} * {right}"
    raise TypeError(f"unknown expression {e!r}")


def format_decl(d) -> str:
    if isinstance(d, ast.SystemDecl):
        return f"system {d.name} = {format_type(d.type)}"
    if isinstance(d, ast.BoxDecl):
        head = f"box {d.name} : {format_type(d.dom)} -> {format_type(d.cod)} = "
        if d.kraus is not None:
            return head + "kraus [" + ", ".join(format_matrix(m) for m in d.kraus) + "]"
        return head + format_matrix(d.matrix)
    if isinstance(d, ast.MainDecl):
        return f"main = {format_expr(d.expr)}"
    raise TypeError(f"unknown declaration {d!r}")


def pretty_print(file: ast.CircuitFile) -> str:
    return "".join(format_decl(d) + "\n" for d in file.decls)
