import random

import pytest

from paralens.errors import CompositionError, SizeCapError
from paralens.finite_base import (
    UNIT_LABEL,
    UNIT_SET,
    FinFn,
    FinSet,
    enumerate_functions,
    finset_product,
    finset_tuple_product,
    fn_compose,
    fn_identity,
    fn_product,
    pair_label,
    parse_payoff,
    payoff_grid,
    payoff_label,
    split_pair,
    split_tuple,
    tuple_label,
)
from fractions import Fraction


def test_finset_basics():
    s = FinSet(("a", "b", "c"))
    assert len(s) == 3
    assert list(s) == ["a", "b", "c"]
    assert "b" in s and "z" not in s
    assert s.index("c") == 2


def test_finset_rejects_duplicates_and_nonstrings():
    with pytest.raises(CompositionError):
        FinSet(("a", "a"))
    with pytest.raises(CompositionError):
        FinSet(("a", 3))


def test_unit_set():
    assert UNIT_SET.labels == (UNIT_LABEL,)
    assert UNIT_LABEL == "•"


def test_product_order_first_factor_slowest():
    p = finset_product(FinSet(("a", "b")), FinSet(("x", "y")))
    assert p.labels == ("(a,x)", "(a,y)", "(b,x)", "(b,y)")


def test_split_pair_round_trip():
    a, b = FinSet(("a", "b", "c")), FinSet(("x", "y"))
    for la in a.labels:
        for lb in b.labels:
            assert split_pair(a, b, pair_label(la, lb)) == (la, lb)


def test_split_pair_is_positional_not_textual():
    # labels that themselves contain commas and parens must not confuse it
    inner = finset_product(FinSet(("a", "b")), FinSet(("x", "y")))
    outer = finset_product(inner, inner)
    for li in inner.labels:
        for lj in inner.labels:
            assert split_pair(inner, inner, pair_label(li, lj)) == (li, lj)
    assert len(outer) == 16


def test_tuple_label_left_associated():
    assert tuple_label([]) == UNIT_LABEL
    assert tuple_label(["a"]) == "a"
    assert tuple_label(["a", "b"]) == "(a,b)"
    assert tuple_label(["a", "b", "c"]) == "((a,b),c)"


def test_tuple_product_and_split():
    sets = [FinSet(("a", "b")), FinSet(("x", "y")), FinSet(("0", "1"))]
    prod = finset_tuple_product(sets)
    assert len(prod) == 8
    for la in sets[0].labels:
        for lb in sets[1].labels:
            for lc in sets[2].labels:
                lbl = tuple_label([la, lb, lc])
                assert lbl in prod
                assert split_tuple(sets, lbl) == (la, lb, lc)
    assert finset_tuple_product([]) is UNIT_SET
    assert finset_tuple_product([sets[0]]) == sets[0]


def test_finfn_validates_table():
    dom, cod = FinSet(("a", "b")), FinSet(("x",))
    FinFn(dom, cod, {"a": "x", "b": "x"})
    with pytest.raises(CompositionError):
        FinFn(dom, cod, {"a": "x"})
    with pytest.raises(CompositionError):
        FinFn(dom, cod, {"a": "x", "b": "zzz"})
    with pytest.raises(CompositionError):
        FinFn(dom, cod, {"a": "x", "b": "x", "c": "x"})


def test_fn_compose_and_identity():
    rng = random.Random(20)
    for _ in range(50):
        sizes = [rng.randint(1, 4) for _ in range(4)]
        sets = [
            FinSet(tuple(f"v{i}_{j}" for j in range(n))) for i, n in enumerate(sizes)
        ]
        f = FinFn(sets[0], sets[1], {x: rng.choice(sets[1].labels) for x in sets[0].labels})
        g = FinFn(sets[1], sets[2], {x: rng.choice(sets[2].labels) for x in sets[1].labels})
        h = FinFn(sets[2], sets[3], {x: rng.choice(sets[3].labels) for x in sets[2].labels})
        assert fn_compose(fn_compose(f, g), h) == fn_compose(f, fn_compose(g, h))
        assert fn_compose(fn_identity(sets[0]), f) == f
        assert fn_compose(f, fn_identity(sets[1])) == f


def test_fn_compose_rejects_mismatch():
    f = FinFn(FinSet(("a",)), FinSet(("x",)), {"a": "x"})
    g = FinFn(FinSet(("y",)), FinSet(("z",)), {"y": "z"})
    with pytest.raises(CompositionError):
        fn_compose(f, g)


def test_fn_product_componentwise():
    f = FinFn(FinSet(("a", "b")), FinSet(("x", "y")), {"a": "x", "b": "y"})
    g = FinFn(FinSet(("0",)), FinSet(("p", "q")), {"0": "q"})
    fg = fn_product(f, g)
    assert fg(pair_label("a", "0")) == pair_label("x", "q")
    assert fg(pair_label("b", "0")) == pair_label("y", "q")


def test_enumerate_functions_order_and_count():
    dom, cod = FinSet(("p", "q")), FinSet(("0", "1"))
    fns = enumerate_functions(dom, cod)
    assert len(fns) == 4
    tables = [f.table for f in fns]
    # earliest domain label varies slowest
    assert tables == [
        {"p": "0", "q": "0"},
        {"p": "0", "q": "1"},
        {"p": "1", "q": "0"},
        {"p": "1", "q": "1"},
    ]


def test_enumerate_functions_cap():
    dom = FinSet(tuple(f"d{i}" for i in range(5)))
    cod = FinSet(tuple(f"c{i}" for i in range(4)))
    with pytest.raises(SizeCapError) as exc:
        enumerate_functions(dom, cod, max_size=100)
    assert exc.value.count == 4**5


def test_payoff_labels():
    assert payoff_label(Fraction(3, 2)) == "3/2"
    assert payoff_label(2) == "2"
    assert payoff_label(Fraction(-1)) == "-1"
    assert parse_payoff("3/2") == Fraction(3, 2)
    assert parse_payoff("-7") == Fraction(-7)


def test_payoff_grid_sorted_and_deduplicated():
    g = payoff_grid([Fraction(2), Fraction(1), Fraction(3, 2), Fraction(1)])
    assert g.labels == ("1", "3/2", "2")
    g2 = payoff_grid([Fraction(-1), Fraction(0), Fraction(1)])
    assert g2.labels == ("-1", "0", "1")
