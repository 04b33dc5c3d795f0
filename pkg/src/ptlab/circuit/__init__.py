"""The ``.ptc`` circuit language: parsing, evaluation and printing."""
from .ast import CircuitFile
from .evaluator import box, evaluate, system
from .parser import (CircuitError, CircuitTypeError, LexError, ParseError, ShapeError,
                     UnknownName, parse)
from .printer import pretty_print

__all__ = ["CircuitFile", "CircuitError", "CircuitTypeError", "LexError", "ParseError",
           "ShapeError", "UnknownName", "parse", "evaluate", "box", "system", "pretty_print"]
