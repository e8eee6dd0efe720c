"""Parametrised lenses: lenses with a parameter port spliced onto the boundary.

A parametrised lens from ``src`` to ``dst`` with parameter port ``⟨P, P'⟩``
is carried by an ordinary lens

    ⟨P × src.fwd, P' × src.bwd⟩  →  dst

with the parameter always the left factor.  Sequential composition
accumulates parameter ports with the *second* factor's parameters leftmost,
and the tensor interleaves them, so the parameter carrier of a composite is
a tree.  ``param_shape`` records that tree; :func:`flatten_params` rewrites
a composite to a single left-associated parameter leaf (dropping unit
leaves) without changing behaviour, which is what solvers and optimisers
want to talk to.

All structural rewiring is done with honest relabelling lenses from
``lens_core``; nothing here peeks inside a base element except through the
base's own pair/split operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

from .errors import CompositionError
from .lens_core import (
    Base,
    Carrier,
    Elem,
    Lens,
    LensObj,
    lens_assoc,
    lens_compose,
    lens_id,
    lens_interchange,
    lens_lunit,
    lens_tensor,
    make_costate,
    obj_pair,
    describe_obj,
    relabel_lens,
    unit_obj,
)


@dataclass(frozen=True)
class ParamObj:
    """A parameter port: forward carrier of parameters, backward carrier of feedback."""

    fwd: Carrier
    bwd: Carrier

    def as_obj(self) -> LensObj:
        return LensObj(self.fwd, self.bwd)


def unit_param(base: Base) -> ParamObj:
    return ParamObj(base.unit(), base.unit())


def is_unit_param(base: Base, p: ParamObj) -> bool:
    u = base.unit()
    return base.carrier_eq(p.fwd, u) and base.carrier_eq(p.bwd, u)


@dataclass(frozen=True)
class ShapeLeaf:
    obj: ParamObj


@dataclass(frozen=True)
class ShapePair:
    left: "ParamShape"
    right: "ParamShape"


ParamShape = Union[ShapeLeaf, ShapePair]


def shape_obj(base: Base, shape: ParamShape) -> ParamObj:
    """Fold a shape tree back into the parameter port it describes."""
    if isinstance(shape, ShapeLeaf):
        return shape.obj
    left = shape_obj(base, shape.left)
    right = shape_obj(base, shape.right)
    return ParamObj(base.pair(left.fwd, right.fwd), base.pair(left.bwd, right.bwd))


def shape_leaves(shape: ParamShape) -> list[ParamObj]:
    if isinstance(shape, ShapeLeaf):
        return [shape.obj]
    return shape_leaves(shape.left) + shape_leaves(shape.right)


@dataclass(frozen=True)
class ParaLens:
    """A lens with a parameter port.

    ``carrier`` is the underlying lens
    ``⟨params.fwd × src.fwd, params.bwd × src.bwd⟩ → dst`` and
    ``param_shape`` records how ``params`` was assembled.
    """

    base: Base
    params: ParamObj
    src: LensObj
    dst: LensObj
    carrier: Lens
    param_shape: ParamShape

    def __post_init__(self):
        base = self.base
        expected_src = LensObj(
            base.pair(self.params.fwd, self.src.fwd),
            base.pair(self.params.bwd, self.src.bwd),
        )
        if self.carrier.src != expected_src or self.carrier.dst != self.dst:
            raise CompositionError(
                f"carrier has boundary {describe_obj(base, self.carrier.src)} → "
                f"{describe_obj(base, self.carrier.dst)}, expected "
                f"{describe_obj(base, expected_src)} → {describe_obj(base, self.dst)}"
            )
        folded = shape_obj(base, self.param_shape)
        if folded != self.params:
            raise CompositionError(
                "param_shape folds to a different parameter port than params"
            )


def embed_trivial(l: Lens) -> ParaLens:
    """View a plain lens as parametrised by the unit port."""
    base = l.base
    carrier = lens_compose(lens_lunit(base, l.src), l)
    params = unit_param(base)
    return ParaLens(base, params, l.src, l.dst, carrier, ShapeLeaf(params))


def para_compose(p1: ParaLens, p2: ParaLens) -> ParaLens:
    """Sequential composition; the second factor's parameters end up leftmost."""
    base = p1.base
    if base is not p2.base:
        raise CompositionError("cannot compose parametrised lenses over different bases")
    if p1.dst != p2.src:
        raise CompositionError(
            f"cannot compose: first ends at {describe_obj(base, p1.dst)}, "
            f"second starts at {describe_obj(base, p2.src)}"
        )
    q2, q1 = p2.params, p1.params
    params = ParamObj(base.pair(q2.fwd, q1.fwd), base.pair(q2.bwd, q1.bwd))
    reassoc = lens_assoc(base, q2.as_obj(), q1.as_obj(), p1.src)
    step = lens_tensor(lens_id(base, q2.as_obj()), p1.carrier)
    carrier = lens_compose(lens_compose(reassoc, step), p2.carrier)
    shape = ShapePair(p2.param_shape, p1.param_shape)
    return ParaLens(base, params, p1.src, p2.dst, carrier, shape)


def para_tensor(p1: ParaLens, p2: ParaLens) -> ParaLens:
    """Parallel composition; parameter ports pair up in order."""
    base = p1.base
    if base is not p2.base:
        raise CompositionError("cannot tensor parametrised lenses over different bases")
    params = ParamObj(
        base.pair(p1.params.fwd, p2.params.fwd),
        base.pair(p1.params.bwd, p2.params.bwd),
    )
    interleave = lens_interchange(
        base, p1.params.as_obj(), p2.params.as_obj(), p1.src, p2.src
    )
    carrier = lens_compose(interleave, lens_tensor(p1.carrier, p2.carrier))
    shape = ShapePair(p1.param_shape, p2.param_shape)
    src = obj_pair(base, p1.src, p2.src)
    dst = obj_pair(base, p1.dst, p2.dst)
    return ParaLens(base, params, src, dst, carrier, shape)


def reparametrise(p: ParaLens, r: Lens) -> ParaLens:
    """Precompose a lens on the parameter port.

    ``r`` must end at ``p``'s parameter port; the result is parametrised by
    ``r``'s source.  This is how optimisers attach: a gradient-update lens on
    the weight port turns backward feedback into updated weights.
    """
    base = p.base
    if r.base is not base:
        raise CompositionError("reparametrising lens lives over a different base")
    expected = p.params.as_obj()
    if r.dst != expected:
        raise CompositionError(
            f"reparametrising lens ends at {describe_obj(base, r.dst)}, "
            f"expected the parameter port {describe_obj(base, expected)}"
        )
    carrier = lens_compose(lens_tensor(r, lens_id(base, p.src)), p.carrier)
    params = ParamObj(r.src.fwd, r.src.bwd)
    return ParaLens(base, params, p.src, p.dst, carrier, ShapeLeaf(params))


# -- left-associated element packing ------------------------------------


def join_left_assoc(base: Base, carriers: Sequence[Carrier], elems: Sequence[Elem]) -> Elem:
    """Pack elements of ``carriers`` into the left-associated product element."""
    if len(carriers) != len(elems):
        raise CompositionError("join_left_assoc: carrier/element count mismatch")
    if not carriers:
        return base.unit_elem()
    acc_c, acc_e = carriers[0], elems[0]
    for c, e in zip(carriers[1:], elems[1:]):
        acc_e = base.pair_elem(acc_c, c, acc_e, e)
        acc_c = base.pair(acc_c, c)
    return acc_e


def split_left_assoc(base: Base, carriers: Sequence[Carrier], elem: Elem) -> list[Elem]:
    """Unpack a left-associated product element into its components."""
    if not carriers:
        return []
    if len(carriers) == 1:
        return [elem]
    head = reduce(base.pair, carriers[:-1])
    x, y = base.split_elem(head, carriers[-1], elem)
    return split_left_assoc(base, carriers[:-1], x) + [y]


def _pack_shape(base, shape, elems_iter, side):
    """Rebuild the nested element of a shape tree from flat leaf elements."""
    if isinstance(shape, ShapeLeaf):
        if is_unit_param(base, shape.obj):
            return base.unit_elem()
        return next(elems_iter)
    left_obj = shape_obj(base, shape.left)
    right_obj = shape_obj(base, shape.right)
    lc = left_obj.fwd if side == "fwd" else left_obj.bwd
    rc = right_obj.fwd if side == "fwd" else right_obj.bwd
    le = _pack_shape(base, shape.left, elems_iter, side)
    re = _pack_shape(base, shape.right, elems_iter, side)
    return base.pair_elem(lc, rc, le, re)


def _unpack_shape(base, shape, elem, side, out):
    """Collect the non-unit leaf elements of a nested shape element, in order."""
    if isinstance(shape, ShapeLeaf):
        if not is_unit_param(base, shape.obj):
            out.append(elem)
        return
    left_obj = shape_obj(base, shape.left)
    right_obj = shape_obj(base, shape.right)
    lc = left_obj.fwd if side == "fwd" else left_obj.bwd
    rc = right_obj.fwd if side == "fwd" else right_obj.bwd
    le, re = base.split_elem(lc, rc, elem)
    _unpack_shape(base, shape.left, le, side, out)
    _unpack_shape(base, shape.right, re, side, out)


def flatten_params(p: ParaLens) -> ParaLens:
    """Collapse the parameter tree to one left-associated leaf.

    Unit leaves (from ``embed_trivial``) are dropped; the remaining leaves
    keep their left-to-right order.  Behaviour is unchanged: the carrier is
    rewritten through the bijective relabelling between the two layouts.
    Lenses whose shape is already a single leaf are returned as-is.
    """
    base = p.base
    if isinstance(p.param_shape, ShapeLeaf):
        return p
    leaves = [obj for obj in shape_leaves(p.param_shape) if not is_unit_param(base, obj)]
    if not leaves:
        flat = unit_param(base)
    elif len(leaves) == 1:
        flat = leaves[0]
    else:
        flat = ParamObj(
            reduce(base.pair, (l.fwd for l in leaves)),
            reduce(base.pair, (l.bwd for l in leaves)),
        )

    fwd_carriers = [l.fwd for l in leaves]
    bwd_carriers = [l.bwd for l in leaves]
    shape = p.param_shape

    def fwd_fn(flat_elem):
        parts = split_left_assoc(base, fwd_carriers, flat_elem)
        return _pack_shape(base, shape, iter(parts), "fwd")

    def bwd_fn(nested_elem):
        parts: list = []
        _unpack_shape(base, shape, nested_elem, "bwd", parts)
        return join_left_assoc(base, bwd_carriers, parts)

    wiring = relabel_lens(base, flat.as_obj(), p.params.as_obj(), fwd_fn, bwd_fn)
    return reparametrise(p, wiring)


def para_costate_solution_input(p: ParaLens) -> Lens:
    """The costate on the parameter port induced by a scalar.

    A scalar (both boundaries trivial) is nothing but data on its parameter
    port: feeding it the unit state and unit costate leaves the map that
    sends each parameter value to its backward feedback.  On finite carriers
    this is the payoff table a selection relation consumes.
    """
    base = p.base
    unit = unit_obj(base)
    if p.src != unit or p.dst != unit:
        raise CompositionError(
            f"not a scalar: boundary is {describe_obj(base, p.src)} → "
            f"{describe_obj(base, p.dst)}"
        )
    unit_c = base.unit()
    pfwd, pbwd = p.params.fwd, p.params.bwd
    carrier_fwd = base.pair(pfwd, unit_c)

    def fn(w):
        x = base.pair_elem(pfwd, unit_c, w, base.unit_elem())
        xz = base.pair_elem(carrier_fwd, unit_c, x, base.unit_elem())
        out = base.apply(p.carrier.put, xz)
        fb, _ = base.split_elem(pbwd, unit_c, out)
        return fb

    return make_costate(base, p.params.as_obj(), base.morphism(pfwd, pbwd, fn))
