"""Abstract syntax of ``.ptc`` circuit files.

Source positions are carried for error reporting but excluded from equality,
so two files are structurally equal when they differ only in layout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

Pos = Optional[Tuple[int, int]]


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class AtomLit:
    kind: str          # "classical" | "quantum"
    size: int


@dataclass(frozen=True)
class TypeExpr:
    items: tuple = ()  # system names (str) and AtomLit, tensored in order
    pos: Pos = _pos()


@dataclass(frozen=True)
class One:
    pos: Pos = _pos()


@dataclass(frozen=True)
class Prim:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Id:
    type: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Disc:
    type: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Cup:
    atom: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Cap:
    atom: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Copy:
    atom: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Spider:
    atom: TypeExpr
    m_in: int
    m_out: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Swap:
    left: TypeExpr
    right: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Trace:
    body: "Expr"
    index: int         # 1-based atom index
    pos: Pos = _pos()


@dataclass(frozen=True)
class Seq:
    """``after . before``: ``before`` acts first."""

    after: "Expr"
    before: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Par:
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


Expr = Union[One, Prim, Id, Disc, Cup, Cap, Copy, Spider, Swap, Trace, Seq, Par]


@dataclass(frozen=True)
class SystemDecl:
    name: str
    type: TypeExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoxDecl:
    name: str
    dom: TypeExpr
    cod: TypeExpr
    matrix: Optional[tuple] = None    # rows of complex entries
    kraus: Optional[tuple] = None     # tuple of matrices
    pos: Pos = _pos()


@dataclass(frozen=True)
class MainDecl:
    expr: Expr
    pos: Pos = _pos()


Decl = Union[SystemDecl, BoxDecl, MainDecl]


@dataclass(frozen=True)
class CircuitFile:
    decls: tuple = ()

    @property
    def main(self) -> Optional[MainDecl]:
        for d in self.decls:
            if isinstance(d, MainDecl):
                return d
        return None
