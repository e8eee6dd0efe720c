"""Finite carriers: label sets, tabulated functions, exact rational payoffs.

Everything here is symbolic and exact.  Product carriers get canonical pair
labels ``(x,y)`` and n-ary products associate to the left, so any composite
carrier has a single deterministic presentation and table equality is
decidable.  Payoff values are ``fractions.Fraction`` throughout; floats never
enter the game-theoretic side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product as iter_product
from typing import Iterable, Mapping, Sequence

from .errors import CompositionError, SizeCapError
from .lens_core import Base

UNIT_LABEL = "•"

DEFAULT_ENUM_CAP = 10**6

# Exact rational payoffs.  Fraction already normalises to lowest terms with a
# positive denominator, which is all the canonicity we need.
Payoff = Fraction


@dataclass(frozen=True)
class FinSet:
    """An ordered finite set of distinct string labels.  May be empty."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        pos: dict[str, int] = {}
        for i, label in enumerate(labels):
            if not isinstance(label, str):
                raise CompositionError(f"labels must be strings, got {label!r}")
            if label in pos:
                raise CompositionError(f"duplicate label {label!r} in finite set")
            pos[label] = i
        object.__setattr__(self, "_pos", pos)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._pos

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise CompositionError(f"label {label!r} is not in {self}") from None

    def __str__(self) -> str:
        inner = ",".join(self.labels[:6])
        if len(self.labels) > 6:
            inner += f",…[{len(self.labels)} labels]"
        return "{" + inner + "}"


UNIT_SET = FinSet((UNIT_LABEL,))


def pair_label(x: str, y: str) -> str:
    return f"({x},{y})"


@lru_cache(maxsize=None)
def finset_product(a: FinSet, b: FinSet) -> FinSet:
    """Product set with pair labels, first factor varying slowest."""
    return FinSet(tuple(pair_label(x, y) for x in a.labels for y in b.labels))


def split_pair(a: FinSet, b: FinSet, label: str) -> tuple[str, str]:
    """Invert ``pair_label`` by position in the product set (no string parsing)."""
    i, j = divmod(finset_product(a, b).index(label), len(b))
    return a.labels[i], b.labels[j]


def tuple_label(parts: Sequence[str]) -> str:
    """Left-associated rendering of an n-tuple of labels."""
    if not parts:
        return UNIT_LABEL
    return reduce(pair_label, parts)


def finset_tuple_product(sets: Sequence[FinSet]) -> FinSet:
    """Left-associated n-ary product; the empty product is the unit set."""
    if not sets:
        return UNIT_SET
    return reduce(finset_product, sets)


def split_tuple(sets: Sequence[FinSet], label: str) -> tuple[str, ...]:
    """Decompose a left-associated product label into its components."""
    if not sets:
        return ()
    if len(sets) == 1:
        sets[0].index(label)
        return (label,)
    head = finset_tuple_product(sets[:-1])
    x, y = split_pair(head, sets[-1], label)
    return split_tuple(sets[:-1], x) + (y,)


@dataclass(frozen=True)
class FinFn:
    """A total function between finite sets, stored as a lookup table."""

    dom: FinSet
    cod: FinSet
    table: Mapping[str, str]

    def __post_init__(self):
        table = dict(self.table)
        object.__setattr__(self, "table", table)
        if set(table) != set(self.dom.labels):
            missing = sorted(set(self.dom.labels) - set(table))
            extra = sorted(set(table) - set(self.dom.labels))
            raise CompositionError(
                f"table does not match domain {self.dom}: "
                f"missing {missing[:4]}, extra {extra[:4]}"
            )
        for x, y in table.items():
            if y not in self.cod:
                raise CompositionError(
                    f"image {y!r} of {x!r} is not in codomain {self.cod}"
                )

    def __call__(self, label: str) -> str:
        return self.table[label]


def fn_identity(a: FinSet) -> FinFn:
    return FinFn(a, a, {x: x for x in a.labels})


def fn_compose(f: FinFn, g: FinFn) -> FinFn:
    """Composite table ``x ↦ g(f(x))``."""
    if f.cod != g.dom:
        raise CompositionError(
            f"cannot compose: codomain {f.cod} of the first function "
            f"differs from domain {g.dom} of the second"
        )
    return FinFn(f.dom, g.cod, {x: g.table[y] for x, y in f.table.items()})


def fn_product(f: FinFn, g: FinFn) -> FinFn:
    """Componentwise action on the product of domains."""
    dom = finset_product(f.dom, g.dom)
    cod = finset_product(f.cod, g.cod)
    table = {
        pair_label(x, y): pair_label(f.table[x], g.table[y])
        for x in f.dom.labels
        for y in g.dom.labels
    }
    return FinFn(dom, cod, table)


def enumerate_functions(
    dom: FinSet, cod: FinSet, max_size: int = DEFAULT_ENUM_CAP
) -> list[FinFn]:
    """All total functions ``dom → cod`` in lexicographic order.

    Order is by the image tuple with the earliest domain label most
    significant, matching the label order of the left-associated product
    ``cod^|dom|``.
    """
    count = len(cod) ** len(dom)
    if count > max_size:
        raise SizeCapError(
            f"{count} functions {dom} → {cod} exceeds the cap of {max_size}",
            count=count,
        )
    return [
        FinFn(dom, cod, dict(zip(dom.labels, images)))
        for images in iter_product(cod.labels, repeat=len(dom))
    ]


# -- payoff helpers -----------------------------------------------------


def payoff_label(value: Fraction | int | str) -> str:
    """Canonical label of a rational payoff, e.g. ``3`` or ``-1/2``."""
    return str(Fraction(value))


def parse_payoff(label: str) -> Fraction:
    return Fraction(label)


def payoff_grid(values: Iterable[Fraction | int | str]) -> FinSet:
    """The finite carrier of a set of payoff values, sorted ascending."""
    distinct = sorted({Fraction(v) for v in values})
    return FinSet(tuple(payoff_label(v) for v in distinct))


# -- the Base instantiation ---------------------------------------------


class FiniteBase(Base):
    """Carriers are :class:`FinSet`, morphisms are :class:`FinFn` tables."""

    name = "finite"

    def unit(self) -> FinSet:
        return UNIT_SET

    def pair(self, a: FinSet, b: FinSet) -> FinSet:
        return finset_product(a, b)

    def contains(self, c: FinSet, x) -> bool:
        return isinstance(x, str) and x in c

    def describe(self, c: FinSet) -> str:
        return str(c)

    def identity(self, c: FinSet) -> FinFn:
        return fn_identity(c)

    def morphism(self, dom: FinSet, cod: FinSet, fn) -> FinFn:
        return FinFn(dom, cod, {x: fn(x) for x in dom.labels})

    def compose(self, f: FinFn, g: FinFn) -> FinFn:
        return fn_compose(f, g)

    def product(self, f: FinFn, g: FinFn) -> FinFn:
        return fn_product(f, g)

    def dom_of(self, f: FinFn) -> FinSet:
        return f.dom

    def cod_of(self, f: FinFn) -> FinSet:
        return f.cod

    def apply(self, f: FinFn, x: str) -> str:
        return f.table[x]

    def unit_elem(self) -> str:
        return UNIT_LABEL

    def pair_elem(self, a: FinSet, b: FinSet, x: str, y: str) -> str:
        return pair_label(x, y)

    def split_elem(self, a: FinSet, b: FinSet, xy: str) -> tuple[str, str]:
        return split_pair(a, b, xy)

    def elements(self, c: FinSet):
        return c.labels

    def mor_equal(self, f: FinFn, g: FinFn) -> bool:
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table


FINITE = FiniteBase()
