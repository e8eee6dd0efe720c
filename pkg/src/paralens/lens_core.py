"""Bidirectional lenses over an abstract cartesian base.

A lens between boundary objects ``⟨A, A'⟩ → ⟨B, B'⟩`` is a forward map
``get : A → B`` together with a backward map ``put : A × B' → A'`` that may
consult the forward input.  The base category is abstracted behind
:class:`Base` so the same combinators drive both the finite (tabulated) and
the smooth (procedural) instantiations.

Composition threads the forward pass into the backward pass:

    (l1 ; l2).get = l1.get ; l2.get
    (l1 ; l2).put(x, z) = l1.put(x, l2.put(l1.get(x), z))

The tensor acts componentwise on pairs.  States are lenses out of the unit
boundary (they pick a point), costates are lenses into it (their put is an
ordinary map out of the forward carrier).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable

from .errors import CompositionError, UnsupportedOperationError

Carrier = Any
Mor = Any
Elem = Any


class Base(ABC):
    """A cartesian base: carriers, total morphisms and pairing of both."""

    name: str = "base"

    # -- carriers -------------------------------------------------------

    @abstractmethod
    def unit(self) -> Carrier:
        """The terminal carrier (single inhabitant)."""

    @abstractmethod
    def pair(self, a: Carrier, b: Carrier) -> Carrier:
        """Binary product of carriers."""

    def carrier_eq(self, a: Carrier, b: Carrier) -> bool:
        return a == b

    @abstractmethod
    def contains(self, c: Carrier, x: Elem) -> bool:
        """Whether ``x`` is an inhabitant of carrier ``c``."""

    @abstractmethod
    def describe(self, c: Carrier) -> str:
        """Short rendering of a carrier for error messages."""

    # -- morphisms ------------------------------------------------------

    @abstractmethod
    def identity(self, c: Carrier) -> Mor:
        ...

    @abstractmethod
    def morphism(self, dom: Carrier, cod: Carrier, fn: Callable[[Elem], Elem]) -> Mor:
        """Build a base morphism from an element-level function.

        Tabulates on finite carriers, wraps the callable on smooth ones.
        """

    @abstractmethod
    def compose(self, f: Mor, g: Mor) -> Mor:
        ...

    @abstractmethod
    def product(self, f: Mor, g: Mor) -> Mor:
        """Componentwise action on paired carriers."""

    @abstractmethod
    def dom_of(self, f: Mor) -> Carrier:
        ...

    @abstractmethod
    def cod_of(self, f: Mor) -> Carrier:
        ...

    def apply(self, f: Mor, x: Elem) -> Elem:
        return f(x)

    # -- elements -------------------------------------------------------

    @abstractmethod
    def unit_elem(self) -> Elem:
        ...

    @abstractmethod
    def pair_elem(self, a: Carrier, b: Carrier, x: Elem, y: Elem) -> Elem:
        ...

    @abstractmethod
    def split_elem(self, a: Carrier, b: Carrier, xy: Elem) -> tuple[Elem, Elem]:
        ...

    # -- only meaningful on enumerable bases ----------------------------

    def elements(self, c: Carrier):
        raise UnsupportedOperationError(
            f"cannot enumerate elements on the {self.name} base"
        )

    def mor_equal(self, f: Mor, g: Mor) -> bool:
        raise UnsupportedOperationError(
            f"pointwise morphism equality is not decidable on the {self.name} base"
        )


@dataclass(frozen=True)
class LensObj:
    """A boundary object: forward carrier and backward carrier."""

    fwd: Carrier
    bwd: Carrier


@dataclass(frozen=True)
class Lens:
    """A morphism of boundary objects: ``get`` forward, ``put`` backward.

    ``get : src.fwd → dst.fwd`` and ``put : src.fwd × dst.bwd → src.bwd``.
    """

    base: Base
    src: LensObj
    dst: LensObj
    get: Mor
    put: Mor

    def __post_init__(self):
        b = self.base
        checks = (
            (b.dom_of(self.get), self.src.fwd, "get domain"),
            (b.cod_of(self.get), self.dst.fwd, "get codomain"),
            (b.dom_of(self.put), b.pair(self.src.fwd, self.dst.bwd), "put domain"),
            (b.cod_of(self.put), self.src.bwd, "put codomain"),
        )
        for actual, expected, what in checks:
            if not b.carrier_eq(actual, expected):
                raise CompositionError(
                    f"{what} is {b.describe(actual)}, expected {b.describe(expected)}"
                )


def unit_obj(base: Base) -> LensObj:
    """The monoidal unit boundary ⟨1, 1⟩."""
    return LensObj(base.unit(), base.unit())


def obj_pair(base: Base, a: LensObj, b: LensObj) -> LensObj:
    """Componentwise pairing of boundary objects."""
    return LensObj(base.pair(a.fwd, b.fwd), base.pair(a.bwd, b.bwd))


def describe_obj(base: Base, a: LensObj) -> str:
    return f"⟨{base.describe(a.fwd)}, {base.describe(a.bwd)}⟩"


def lens_id(base: Base, a: LensObj) -> Lens:
    """Identity lens: get is the identity, put projects the backward value."""
    put = base.morphism(
        base.pair(a.fwd, a.bwd),
        a.bwd,
        lambda xz: base.split_elem(a.fwd, a.bwd, xz)[1],
    )
    return Lens(base, a, a, base.identity(a.fwd), put)


def lens_compose(l1: Lens, l2: Lens) -> Lens:
    """Sequential composition.  The backward pass replays l1's forward leg."""
    base = l1.base
    if base is not l2.base:
        raise CompositionError("cannot compose lenses over different bases")
    if l1.dst != l2.src:
        raise CompositionError(
            f"cannot compose: first lens ends at {describe_obj(base, l1.dst)}, "
            f"second starts at {describe_obj(base, l2.src)}"
        )
    src, mid, dst = l1.src, l1.dst, l2.dst
    get = base.compose(l1.get, l2.get)

    def put_fn(xz):
        x, z = base.split_elem(src.fwd, dst.bwd, xz)
        y = base.apply(l1.get, x)
        s = base.apply(l2.put, base.pair_elem(mid.fwd, dst.bwd, y, z))
        return base.apply(l1.put, base.pair_elem(src.fwd, mid.bwd, x, s))

    put = base.morphism(base.pair(src.fwd, dst.bwd), src.bwd, put_fn)
    return Lens(base, src, dst, get, put)


def lens_tensor(l1: Lens, l2: Lens) -> Lens:
    """Parallel composition: componentwise on paired boundaries."""
    base = l1.base
    if base is not l2.base:
        raise CompositionError("cannot tensor lenses over different bases")
    src = obj_pair(base, l1.src, l2.src)
    dst = obj_pair(base, l1.dst, l2.dst)
    get = base.product(l1.get, l2.get)
    fwd_pair = src.fwd
    bwd_pair = dst.bwd

    def put_fn(xz):
        xs, zs = base.split_elem(fwd_pair, bwd_pair, xz)
        x1, x2 = base.split_elem(l1.src.fwd, l2.src.fwd, xs)
        z1, z2 = base.split_elem(l1.dst.bwd, l2.dst.bwd, zs)
        s1 = base.apply(l1.put, base.pair_elem(l1.src.fwd, l1.dst.bwd, x1, z1))
        s2 = base.apply(l2.put, base.pair_elem(l2.src.fwd, l2.dst.bwd, x2, z2))
        return base.pair_elem(l1.src.bwd, l2.src.bwd, s1, s2)

    put = base.morphism(base.pair(fwd_pair, bwd_pair), src.bwd, put_fn)
    return Lens(base, src, dst, get, put)


def make_state(base: Base, a: LensObj, point: Elem) -> Lens:
    """The state of ``a`` that picks ``point``: a lens out of the unit boundary."""
    if not base.contains(a.fwd, point):
        raise CompositionError(
            f"state point {point!r} is not an element of {base.describe(a.fwd)}"
        )
    unit_c = base.unit()
    get = base.morphism(unit_c, a.fwd, lambda _: point)
    put = base.morphism(
        base.pair(unit_c, a.bwd), unit_c, lambda _: base.unit_elem()
    )
    return Lens(base, unit_obj(base), a, get, put)


def make_costate(base: Base, a: LensObj, f: Mor) -> Lens:
    """The costate of ``a`` whose backward leg is the base morphism ``f : a.fwd → a.bwd``."""
    if not base.carrier_eq(base.dom_of(f), a.fwd) or not base.carrier_eq(
        base.cod_of(f), a.bwd
    ):
        raise CompositionError(
            f"costate map has type {base.describe(base.dom_of(f))} → "
            f"{base.describe(base.cod_of(f))}, expected {base.describe(a.fwd)} → "
            f"{base.describe(a.bwd)}"
        )
    unit_c = base.unit()
    get = base.morphism(a.fwd, unit_c, lambda _: base.unit_elem())
    put = base.morphism(
        base.pair(a.fwd, unit_c),
        a.bwd,
        lambda xz: base.apply(f, base.split_elem(a.fwd, unit_c, xz)[0]),
    )
    return Lens(base, a, unit_obj(base), get, put)


def costate_fn(l: Lens) -> Mor:
    """Recover the underlying map ``src.fwd → src.bwd`` of a costate."""
    base = l.base
    if l.dst != unit_obj(base):
        raise CompositionError("costate_fn expects a lens into the unit boundary")
    unit_c = base.unit()

    def fn(x):
        return base.apply(l.put, base.pair_elem(l.src.fwd, unit_c, x, base.unit_elem()))

    return base.morphism(l.src.fwd, l.src.bwd, fn)


def lens_equal(l1: Lens, l2: Lens) -> bool:
    """Pointwise table equality.  Only decidable on enumerable bases."""
    base = l1.base
    if base is not l2.base:
        return False
    if l1.src != l2.src or l1.dst != l2.dst:
        raise CompositionError(
            f"lens_equal needs equal boundaries, got "
            f"{describe_obj(base, l1.src)} → {describe_obj(base, l1.dst)} vs "
            f"{describe_obj(base, l2.src)} → {describe_obj(base, l2.dst)}"
        )
    return base.mor_equal(l1.get, l2.get) and base.mor_equal(l1.put, l2.put)


# -- structural (relabelling) lenses ------------------------------------
#
# A relabelling lens is a bijective rewiring: its get is a bijection of the
# forward carriers and its put ignores the forward input, applying the
# reverse bijection to the backward value.


def relabel_lens(
    base: Base,
    src: LensObj,
    dst: LensObj,
    fwd_fn: Callable[[Elem], Elem],
    bwd_fn: Callable[[Elem], Elem],
) -> Lens:
    get = base.morphism(src.fwd, dst.fwd, fwd_fn)
    put = base.morphism(
        base.pair(src.fwd, dst.bwd),
        src.bwd,
        lambda xz: bwd_fn(base.split_elem(src.fwd, dst.bwd, xz)[1]),
    )
    return Lens(base, src, dst, get, put)


def lens_lunit(base: Base, a: LensObj) -> Lens:
    """⟨1,1⟩ ⊗ a → a."""
    unit_c = base.unit()
    return relabel_lens(
        base,
        obj_pair(base, unit_obj(base), a),
        a,
        lambda x: base.split_elem(unit_c, a.fwd, x)[1],
        lambda b: base.pair_elem(unit_c, a.bwd, base.unit_elem(), b),
    )


def lens_lunit_inv(base: Base, a: LensObj) -> Lens:
    """a → ⟨1,1⟩ ⊗ a."""
    unit_c = base.unit()
    return relabel_lens(
        base,
        a,
        obj_pair(base, unit_obj(base), a),
        lambda x: base.pair_elem(unit_c, a.fwd, base.unit_elem(), x),
        lambda b: base.split_elem(unit_c, a.bwd, b)[1],
    )


def lens_runit(base: Base, a: LensObj) -> Lens:
    """a ⊗ ⟨1,1⟩ → a."""
    unit_c = base.unit()
    return relabel_lens(
        base,
        obj_pair(base, a, unit_obj(base)),
        a,
        lambda x: base.split_elem(a.fwd, unit_c, x)[0],
        lambda b: base.pair_elem(a.bwd, unit_c, b, base.unit_elem()),
    )


def lens_runit_inv(base: Base, a: LensObj) -> Lens:
    """a → a ⊗ ⟨1,1⟩."""
    unit_c = base.unit()
    return relabel_lens(
        base,
        a,
        obj_pair(base, a, unit_obj(base)),
        lambda x: base.pair_elem(a.fwd, unit_c, x, base.unit_elem()),
        lambda b: base.split_elem(a.bwd, unit_c, b)[0],
    )


def lens_swap(base: Base, a: LensObj, b: LensObj) -> Lens:
    """a ⊗ b → b ⊗ a."""

    def fwd(x):
        u, v = base.split_elem(a.fwd, b.fwd, x)
        return base.pair_elem(b.fwd, a.fwd, v, u)

    def bwd(z):
        u, v = base.split_elem(b.bwd, a.bwd, z)
        return base.pair_elem(a.bwd, b.bwd, v, u)

    return relabel_lens(base, obj_pair(base, a, b), obj_pair(base, b, a), fwd, bwd)


def lens_assoc(base: Base, a: LensObj, b: LensObj, c: LensObj) -> Lens:
    """(a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)."""

    def fwd(x):
        uv, w = base.split_elem(base.pair(a.fwd, b.fwd), c.fwd, x)
        u, v = base.split_elem(a.fwd, b.fwd, uv)
        return base.pair_elem(
            a.fwd, base.pair(b.fwd, c.fwd), u, base.pair_elem(b.fwd, c.fwd, v, w)
        )

    def bwd(z):
        u, vw = base.split_elem(a.bwd, base.pair(b.bwd, c.bwd), z)
        v, w = base.split_elem(b.bwd, c.bwd, vw)
        return base.pair_elem(
            base.pair(a.bwd, b.bwd), c.bwd, base.pair_elem(a.bwd, b.bwd, u, v), w
        )

    return relabel_lens(
        base,
        obj_pair(base, obj_pair(base, a, b), c),
        obj_pair(base, a, obj_pair(base, b, c)),
        fwd,
        bwd,
    )


def lens_assoc_inv(base: Base, a: LensObj, b: LensObj, c: LensObj) -> Lens:
    """a ⊗ (b ⊗ c) → (a ⊗ b) ⊗ c."""

    def fwd(x):
        u, vw = base.split_elem(a.fwd, base.pair(b.fwd, c.fwd), x)
        v, w = base.split_elem(b.fwd, c.fwd, vw)
        return base.pair_elem(
            base.pair(a.fwd, b.fwd), c.fwd, base.pair_elem(a.fwd, b.fwd, u, v), w
        )

    def bwd(z):
        uv, w = base.split_elem(base.pair(a.bwd, b.bwd), c.bwd, z)
        u, v = base.split_elem(a.bwd, b.bwd, uv)
        return base.pair_elem(
            a.bwd, base.pair(b.bwd, c.bwd), u, base.pair_elem(b.bwd, c.bwd, v, w)
        )

    return relabel_lens(
        base,
        obj_pair(base, a, obj_pair(base, b, c)),
        obj_pair(base, obj_pair(base, a, b), c),
        fwd,
        bwd,
    )


def lens_interchange(base: Base, a: LensObj, b: LensObj, c: LensObj, d: LensObj) -> Lens:
    """(a ⊗ b) ⊗ (c ⊗ d) → (a ⊗ c) ⊗ (b ⊗ d), swapping the middle factors."""

    def fwd(x):
        ab, cd = base.split_elem(
            base.pair(a.fwd, b.fwd), base.pair(c.fwd, d.fwd), x
        )
        u, v = base.split_elem(a.fwd, b.fwd, ab)
        w, t = base.split_elem(c.fwd, d.fwd, cd)
        return base.pair_elem(
            base.pair(a.fwd, c.fwd),
            base.pair(b.fwd, d.fwd),
            base.pair_elem(a.fwd, c.fwd, u, w),
            base.pair_elem(b.fwd, d.fwd, v, t),
        )

    def bwd(z):
        ac, bd = base.split_elem(
            base.pair(a.bwd, c.bwd), base.pair(b.bwd, d.bwd), z
        )
        u, w = base.split_elem(a.bwd, c.bwd, ac)
        v, t = base.split_elem(b.bwd, d.bwd, bd)
        return base.pair_elem(
            base.pair(a.bwd, b.bwd),
            base.pair(c.bwd, d.bwd),
            base.pair_elem(a.bwd, b.bwd, u, v),
            base.pair_elem(c.bwd, d.bwd, w, t),
        )

    src = obj_pair(base, obj_pair(base, a, b), obj_pair(base, c, d))
    dst = obj_pair(base, obj_pair(base, a, c), obj_pair(base, b, d))
    return relabel_lens(base, src, dst, fwd, bwd)
