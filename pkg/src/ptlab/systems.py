"""System types: ordered lists of classical and quantum atoms."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Union


@dataclass(frozen=True)
class Classical:
    """An ``n``-state classical system; carried by probability vectors of length n."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"classical system needs n >= 1, got {self.n}")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def hilbert_dim(self) -> int:
        return self.n

    def __mul__(self, other):
        return SystemType((self,)) * other

    def __str__(self):
        return f"classical({self.n})"


@dataclass(frozen=True)
class Quantum:
    """A ``d``-dimensional quantum system; carried by row-major vectorized d x d operators."""

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"quantum system needs d >= 1, got {self.d}")

    @property
    def dim(self) -> int:
        return self.d * self.d

    @property
    def hilbert_dim(self) -> int:
        return self.d

    def __mul__(self, other):
        return SystemType((self,)) * other

    def __str__(self):
        return f"quantum({self.d})"


Atom = Union[Classical, Quantum]


@dataclass(frozen=True)
class SystemType:
    factors: tuple = ()

    def __post_init__(self):
        factors = tuple(self.factors)
        for f in factors:
            if not isinstance(f, (Classical, Quantum)):
                raise TypeError(f"not an atom: {f!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def carrier_dim(self) -> int:
        return prod(a.dim for a in self.factors)

    @property
    def dims(self) -> tuple:
        """Carrier dimension of each atom."""
        return tuple(a.dim for a in self.factors)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def is_classical(self) -> bool:
        return all(isinstance(a, Classical) for a in self.factors)

    @property
    def is_quantum(self) -> bool:
        return all(isinstance(a, Quantum) for a in self.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SystemType(self.factors[item])
        return self.factors[item]

    def __mul__(self, other):
        return SystemType(self.factors + as_system(other).factors)

    def __rmul__(self, other):
        return as_system(other) * self

    def __str__(self):
        if not self.factors:
            return "one"
        return " * ".join(str(a) for a in self.factors)


TRIVIAL = SystemType()


def as_system(x) -> SystemType:
    """Accept an atom, a system type or an iterable of atoms."""
    if isinstance(x, SystemType):
        return x
    if isinstance(x, (Classical, Quantum)):
        return SystemType((x,))
    if isinstance(x, Iterable):
        return SystemType(tuple(x))
    raise TypeError(f"cannot interpret {x!r} as a system type")


def single_atom(x) -> Atom:
    s = as_system(x)
    if len(s) != 1:
        raise ValueError(f"expected a single atom, got {s}")
    return s.factors[0]
