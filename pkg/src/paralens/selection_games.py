"""Selection relations and compositional games on finite carriers.

A selection relation over a parameter port ⟨moves, rewards⟩ says which
(move, reward-function) pairs an agent is willing to settle on; argmax is
the canonical example.  Relations push forward along lenses, and two
relations combine into a product where each factor optimises against the
other's choice held fixed, which is exactly the Nash condition.

A game is a parametrised scalar (both boundaries trivial) together with a
selection relation on its parameter port.  The scalar induces a reward
function on the port; the solution set is the set of parameter states the
relation accepts against it.  Normal-form games are built compositionally:
one decision per player, tensored, closed with the payoff table as a
costate.  A brute-force deviation check provides an independent oracle.

All payoff arithmetic is exact (rational labels), so ties and indifference
are decided without tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product as iter_product
from typing import Callable, Mapping, Sequence

from .errors import CompositionError, SizeCapError
from .finite_base import (
    DEFAULT_ENUM_CAP,
    FINITE,
    FinFn,
    FinSet,
    UNIT_SET,
    enumerate_functions,
    finset_product,
    finset_tuple_product,
    pair_label,
    parse_payoff,
    payoff_grid,
    payoff_label,
    split_pair,
    split_tuple,
    tuple_label,
)
from .lens_core import (
    Lens,
    LensObj,
    costate_fn,
    lens_compose,
    lens_id,
    lens_runit_inv,
    lens_tensor,
    make_costate,
    make_state,
    relabel_lens,
    unit_obj,
)
from .para_optic import (
    ParaLens,
    ParamObj,
    ShapeLeaf,
    embed_trivial,
    flatten_params,
    join_left_assoc,
    para_compose,
    para_costate_solution_input,
    para_tensor,
    reparametrise,
)


@dataclass(frozen=True)
class SelectionRelation:
    """A predicate over (state of obj.fwd, reward function obj.fwd → obj.bwd)."""

    obj: ParamObj
    accepts: Callable[[str, FinFn], bool]


def argmax_rel(moves: FinSet, rewards: FinSet) -> SelectionRelation:
    """Accepts a move iff no other move earns a strictly larger reward."""
    if len(moves) == 0:
        raise CompositionError("argmax over the empty move set is undefined")

    def accepts(x: str, k: FinFn) -> bool:
        vx = parse_payoff(k(x))
        return all(vx >= parse_payoff(k(y)) for y in moves.labels)

    return SelectionRelation(ParamObj(moves, rewards), accepts)


def total_rel(obj: ParamObj) -> SelectionRelation:
    """The relation that accepts everything (an indifferent agent)."""
    return SelectionRelation(obj, lambda x, k: True)


def nash_product(eps: SelectionRelation, delta: SelectionRelation) -> SelectionRelation:
    """Both factors accept, each against the other's component held fixed.

    The joint reward function is restricted for each factor by freezing the
    other factor's move and projecting onto the factor's own reward carrier.
    """
    em, er = eps.obj.fwd, eps.obj.bwd
    dm, dr = delta.obj.fwd, delta.obj.bwd
    obj = ParamObj(finset_product(em, dm), finset_product(er, dr))

    def accepts(xy: str, k: FinFn) -> bool:
        x, y = split_pair(em, dm, xy)
        k_y = FinFn(
            em, er, {a: split_pair(er, dr, k(pair_label(a, y)))[0] for a in em.labels}
        )
        k_x = FinFn(
            dm, dr, {b: split_pair(er, dr, k(pair_label(x, b)))[1] for b in dm.labels}
        )
        return eps.accepts(x, k_y) and delta.accepts(y, k_x)

    return SelectionRelation(obj, accepts)


def _threaded_costate(f: Lens, k: FinFn) -> FinFn:
    """The reward function seen upstream of ``f``: forward out, reward back."""
    src, dst = f.src, f.dst
    table = {}
    for x in src.fwd.labels:
        y = FINITE.apply(f.get, x)
        table[x] = FINITE.apply(f.put, pair_label(x, k(y)))
    return FinFn(src.fwd, src.bwd, table)


def sel_pushforward(
    f: Lens, eps: SelectionRelation, max_size: int = DEFAULT_ENUM_CAP
) -> SelectionRelation:
    """Transport a relation along a lens.

    The image relation accepts (y, k) iff some state x with get(x) = y is
    accepted by ``eps`` against the reward function threaded back through
    ``f``.
    """
    if f.base is not FINITE:
        raise CompositionError("relations only push forward over the finite base")
    if f.src != eps.obj.as_obj():
        raise CompositionError(
            "lens source does not match the relation's parameter port"
        )
    states = f.src.fwd.labels
    if len(states) > max_size:
        raise SizeCapError(
            f"{len(states)} source states exceed the cap of {max_size}",
            count=len(states),
        )

    def accepts(y: str, k: FinFn) -> bool:
        fk = _threaded_costate(f, k)
        return any(
            FINITE.apply(f.get, x) == y and eps.accepts(x, fk) for x in states
        )

    return SelectionRelation(ParamObj(f.dst.fwd, f.dst.bwd), accepts)


def is_sel_morphism(
    f: Lens,
    eps: SelectionRelation,
    delta: SelectionRelation,
    max_size: int = DEFAULT_ENUM_CAP,
) -> bool:
    """Whether ``f`` carries ``eps`` into ``delta``.

    Checked by enumeration: for every state h and every reward function k on
    the target, acceptance of h upstream must imply acceptance of get(h)
    downstream.
    """
    if f.src != eps.obj.as_obj() or f.dst != delta.obj.as_obj():
        raise CompositionError("lens boundaries do not match the two relations")
    costates = enumerate_functions(f.dst.fwd, f.dst.bwd, max_size)
    for k in costates:
        fk = _threaded_costate(f, k)
        for h in f.src.fwd.labels:
            if eps.accepts(h, fk) and not delta.accepts(FINITE.apply(f.get, h), k):
                return False
    return True


def relations_equal(
    r1: SelectionRelation, r2: SelectionRelation, max_size: int = DEFAULT_ENUM_CAP
) -> bool:
    """Extensional equality over all states and all reward functions."""
    if r1.obj != r2.obj:
        raise CompositionError("relations live on different parameter ports")
    for k in enumerate_functions(r1.obj.fwd, r1.obj.bwd, max_size):
        for x in r1.obj.fwd.labels:
            if r1.accepts(x, k) != r2.accepts(x, k):
                return False
    return True


def relation_subset(
    r1: SelectionRelation, r2: SelectionRelation, max_size: int = DEFAULT_ENUM_CAP
) -> bool:
    """Whether everything ``r1`` accepts is accepted by ``r2``."""
    if r1.obj != r2.obj:
        raise CompositionError("relations live on different parameter ports")
    for k in enumerate_functions(r1.obj.fwd, r1.obj.bwd, max_size):
        for x in r1.obj.fwd.labels:
            if r1.accepts(x, k) and not r2.accepts(x, k):
                return False
    return True


# -- decisions and games ------------------------------------------------


def decision(
    observations: FinSet,
    moves: FinSet,
    rewards: FinSet,
    max_size: int = DEFAULT_ENUM_CAP,
) -> ParaLens:
    """A single agent: strategies are functions from observations to moves.

    Forward play applies the strategy to the observation; backward, the
    received reward is forwarded to the parameter port unchanged and
    nothing flows further upstream.
    """
    strategies = enumerate_functions(observations, moves, max_size)
    omega = finset_tuple_product([moves] * len(observations))
    dom = finset_product(omega, observations)
    get = FinFn(
        dom,
        moves,
        {
            pair_label(w, x): strategies[omega.index(w)](x)
            for w in omega.labels
            for x in observations.labels
        },
    )
    cod = finset_product(rewards, UNIT_SET)
    put = FinFn(
        finset_product(dom, rewards),
        cod,
        {
            pair_label(wx, r): pair_label(r, UNIT_SET.labels[0])
            for wx in dom.labels
            for r in rewards.labels
        },
    )
    carrier = Lens(
        FINITE,
        LensObj(dom, cod),
        LensObj(moves, rewards),
        get,
        put,
    )
    params = ParamObj(omega, rewards)
    return ParaLens(
        FINITE,
        params,
        LensObj(observations, UNIT_SET),
        LensObj(moves, rewards),
        carrier,
        ShapeLeaf(params),
    )


@dataclass(frozen=True)
class OpenGame:
    """A parametrised scalar (or open lens) paired with a selection relation."""

    lens: ParaLens
    sel: SelectionRelation


def open_game(lens: ParaLens, sel: SelectionRelation) -> OpenGame:
    """Normalise the parameter port and check it matches the relation."""
    flat = flatten_params(lens)
    if flat.params != sel.obj:
        raise CompositionError(
            "selection relation does not live on the game's parameter port"
        )
    return OpenGame(flat, sel)


def context(game: OpenGame, h: str, k: FinFn) -> FinFn:
    """The reward function the players face in the context (h, k).

    Built by lens composition: introduce the unit on the right of the
    parameter port, tensor with the state h, feed the carrier, close with
    the costate k.  Equals ω ↦ coplay(ω, h, k(play(ω, h))).
    """
    lens = game.lens
    pobj = lens.params.as_obj()
    composite = lens_compose(
        lens_compose(
            lens_compose(
                lens_runit_inv(FINITE, pobj),
                lens_tensor(lens_id(FINITE, pobj), make_state(FINITE, lens.src, h)),
            ),
            lens.carrier,
        ),
        make_costate(FINITE, lens.dst, k),
    )
    return costate_fn(composite)


def equilibria(game: OpenGame, h: str, k: FinFn) -> tuple[str, ...]:
    """Parameter states the selection relation accepts in the context (h, k)."""
    reward = context(game, h, k)
    return tuple(
        w for w in game.lens.params.fwd.labels if game.sel.accepts(w, reward)
    )


def solution_set(game: OpenGame) -> tuple[str, ...]:
    """Equilibria of a closed game (both boundaries trivial)."""
    lens = game.lens
    if lens.src != unit_obj(FINITE) or lens.dst != unit_obj(FINITE):
        raise CompositionError(
            "solution_set needs a closed game with trivial boundaries"
        )
    reward = costate_fn(para_costate_solution_input(lens))
    return tuple(
        w for w in lens.params.fwd.labels if game.sel.accepts(w, reward)
    )


# -- normal-form games --------------------------------------------------


@dataclass(frozen=True)
class NormalFormGame:
    """Strategy sets plus an exact payoff table over the profile product.

    ``payoff`` maps each profile label to a tuple label over the per-player
    reward grids; ``grids`` records the factorisation of its codomain.
    """

    players: tuple[FinSet, ...]
    grids: tuple[FinSet, ...]
    payoff: FinFn


def normal_form_game(
    players: Sequence[FinSet],
    table: Mapping[tuple[str, ...], Sequence[Fraction | int | str]],
) -> NormalFormGame:
    players = tuple(players)
    if not players:
        raise CompositionError("a game needs at least one player")
    n = len(players)
    values: dict[tuple[str, ...], tuple[Fraction, ...]] = {}
    for prof, vals in table.items():
        prof = tuple(prof)
        vals = tuple(Fraction(v) for v in vals)
        if len(vals) != n:
            raise CompositionError(
                f"profile {prof} has {len(vals)} payoffs for {n} players"
            )
        values[prof] = vals
    profiles = list(iter_product(*[p.labels for p in players]))
    missing = [p for p in profiles if p not in values]
    if missing or len(values) != len(profiles):
        extra = sorted(set(values) - set(profiles))
        raise CompositionError(
            f"payoff table does not match the profile product: "
            f"missing {missing[:4]}, unknown {extra[:4]}"
        )
    grids = tuple(
        payoff_grid([values[p][i] for p in profiles]) for i in range(n)
    )
    payoff = FinFn(
        finset_tuple_product(players),
        finset_tuple_product(grids),
        {
            tuple_label(p): tuple_label([payoff_label(v) for v in values[p]])
            for p in profiles
        },
    )
    return NormalFormGame(players, grids, payoff)


def profile_values(g: NormalFormGame, prof: Sequence[str]) -> tuple[Fraction, ...]:
    """Decode the payoff tuple of one profile."""
    label = g.payoff(tuple_label(tuple(prof)))
    return tuple(parse_payoff(p) for p in split_tuple(g.grids, label))


def brute_force_nash(
    g: NormalFormGame, max_size: int = DEFAULT_ENUM_CAP
) -> tuple[str, ...]:
    """Independent oracle: profiles with no strictly improving unilateral deviation."""
    count = 1
    for p in g.players:
        count *= len(p)
    if count > max_size:
        raise SizeCapError(
            f"{count} profiles exceed the cap of {max_size}", count=count
        )
    out = []
    for prof in iter_product(*[p.labels for p in g.players]):
        vals = profile_values(g, prof)
        stable = True
        for i, player in enumerate(g.players):
            for dev in player.labels:
                if dev == prof[i]:
                    continue
                alt = prof[:i] + (dev,) + prof[i + 1 :]
                if profile_values(g, alt)[i] > vals[i]:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            out.append(tuple_label(prof))
    return tuple(out)


def brute_force_hicks(g: NormalFormGame) -> tuple[str, ...]:
    """Profiles maximising the summed payoff, by direct enumeration."""
    profiles = list(iter_product(*[p.labels for p in g.players]))
    totals = {p: sum(profile_values(g, p)) for p in profiles}
    best = max(totals.values())
    return tuple(tuple_label(p) for p in profiles if totals[p] == best)


def game_scalar(g: NormalFormGame, max_size: int = DEFAULT_ENUM_CAP) -> ParaLens:
    """The closed compositional form: decisions, tensored, payoff as costate.

    The parameter port of the result is the profile product with the grid
    product as feedback, one leaf per player in player order.
    """
    parts = [
        decision(UNIT_SET, player, grid, max_size)
        for player, grid in zip(g.players, g.grids)
    ]
    tensored = reduce(para_tensor, parts)
    n = len(g.players)
    unit_sets = [UNIT_SET] * n
    closer = relabel_lens(
        FINITE,
        unit_obj(FINITE),
        tensored.src,
        lambda _: join_left_assoc(FINITE, unit_sets, [UNIT_SET.labels[0]] * n),
        lambda _: UNIT_SET.labels[0],
    )
    payoffs = make_costate(FINITE, tensored.dst, g.payoff)
    closed = para_compose(
        para_compose(embed_trivial(closer), tensored), embed_trivial(payoffs)
    )
    return flatten_params(closed)


def _player_relations(g: NormalFormGame, tags: Sequence[str]) -> SelectionRelation:
    rels = []
    for player, grid, tag in zip(g.players, g.grids, tags):
        if tag == "argmax":
            rels.append(argmax_rel(player, grid))
        elif tag == "total":
            rels.append(total_rel(ParamObj(player, grid)))
        else:
            raise CompositionError(f"unknown selection tag {tag!r}")
    return reduce(nash_product, rels)


def compositional_game(
    g: NormalFormGame,
    selection: str | Sequence[str] = "argmax_each",
    max_size: int = DEFAULT_ENUM_CAP,
) -> OpenGame:
    """Assemble the open game for a normal-form game and a selection policy."""
    scalar = game_scalar(g, max_size)
    if selection == "argmax_each":
        sel = _player_relations(g, ["argmax"] * len(g.players))
    elif isinstance(selection, str):
        raise CompositionError(f"unknown selection {selection!r}")
    else:
        if len(selection) != len(g.players):
            raise CompositionError("one selection tag per player required")
        sel = _player_relations(g, list(selection))
    return open_game(scalar, sel)


def sum_of_payoffs_lens(g: NormalFormGame) -> Lens:
    """Collapse the grid product to the grid of possible payoff sums.

    Identity forward; backward maps each payoff tuple to its total.  The
    sum grid is closed under every combination of per-player values, so the
    table is total.
    """
    omega = finset_tuple_product(g.players)
    prod = finset_tuple_product(g.grids)
    combos = iter_product(*[[parse_payoff(l) for l in grid.labels] for grid in g.grids])
    sums = payoff_grid([sum(c) for c in combos])

    def put_fn(wr: str) -> str:
        _, r = split_pair(omega, prod, wr)
        return payoff_label(sum(parse_payoff(p) for p in split_tuple(g.grids, r)))

    return Lens(
        FINITE,
        LensObj(omega, sums),
        LensObj(omega, prod),
        FINITE.identity(omega),
        FINITE.morphism(finset_product(omega, prod), sums, put_fn),
    )


def hicks_games(
    g: NormalFormGame,
    max_size: int = DEFAULT_ENUM_CAP,
    max_states: int = DEFAULT_ENUM_CAP,
) -> tuple[OpenGame, OpenGame]:
    """The two equivalent forms of joint-total maximisation.

    Route one reparametrises the scalar by the sum-of-payoffs lens and runs
    argmax over profiles; route two leaves the scalar alone and pushes that
    argmax forward along the same lens.  Their solution sets coincide.
    """
    scalar = game_scalar(g, max_size)
    collapse = sum_of_payoffs_lens(g)
    joint = argmax_rel(finset_tuple_product(g.players), collapse.src.bwd)
    route_reparam = open_game(reparametrise(scalar, collapse), joint)
    route_pushed = open_game(scalar, sel_pushforward(collapse, joint, max_states))
    return route_reparam, route_pushed
