"""Structural evaluation of circuit files into processes."""
from __future__ import annotations

import numpy as np

from .. import process as pm
from ..process import Process
from ..systems import SystemType
from . import ast
from .parser import CircuitError, Scope, check


def box_process(decl: ast.BoxDecl, scope: Scope) -> Process:
    dom, cod = scope.signatures[decl.name]
    if decl.kraus is not None:
        ops = [np.array(m, dtype=complex) for m in decl.kraus]
        return pm.from_kraus(ops, dom, cod)
    return Process(dom, cod, np.array(decl.matrix, dtype=complex))


class Evaluator:
    def __init__(self, file: ast.CircuitFile):
        self.scope = check(file)
        self.boxes = {name: box_process(d, self.scope) for name, d in self.scope.boxes.items()}

    def __call__(self, e) -> Process:
        s = self.scope
        if isinstance(e, ast.One):
            return pm.number(1)
        if isinstance(e, ast.Prim):
            return self.boxes[e.name]
        if isinstance(e, ast.Id):
            return pm.identity(s.resolve(e.type))
        if isinstance(e, ast.Disc):
            return pm.discard(s.resolve(e.type))
        if isinstance(e, ast.Cup):
            return pm.cup(s.atom(e.atom))
        if isinstance(e, ast.Cap):
            return pm.cap(s.atom(e.atom))
        if isinstance(e, ast.Copy):
            return pm.copy(s.atom(e.atom, classical=True))
        if isinstance(e, ast.Spider):
            return pm.spider(s.atom(e.atom, classical=True), e.m_in, e.m_out)
        if isinstance(e, ast.Swap):
            return pm.swap(s.resolve(e.left), s.resolve(e.right))
        if isinstance(e, ast.Trace):
            return pm.trace_loop(self(e.body), e.index - 1)
        if isinstance(e, ast.Seq):
            return pm.compose_seq(self(e.after), self(e.before))
        if isinstance(e, ast.Par):
            return pm.compose_par(self(e.left), self(e.right))
        raise TypeError(f"unknown expression {e!r}")


def evaluate(file: ast.CircuitFile, expr=None) -> Process:
    """Evaluate ``expr`` (default: the main declaration) in the scope of ``file``."""
    if expr is None:
        main = file.main
        if main is None:
            raise CircuitError("file has no main declaration")
        expr = main.expr
    return Evaluator(file)(expr)


def box(file: ast.CircuitFile, name: str) -> Process:
    """A declared box as a process."""
    ev = Evaluator(file)
    if name not in ev.boxes:
        raise CircuitError(f"no box named {name!r}")
    return ev.boxes[name]


def system(file: ast.CircuitFile, name: str) -> SystemType:
    return Evaluator(file).scope.systems[name]
