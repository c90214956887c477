from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from smallmaps import hf
from smallmaps.hf import EMPTY, Ext, HFSet, Int


def test_examples():
    assert hf.pair(EMPTY, EMPTY) == hf.singleton(EMPTY)
    three = hf.succ(hf.succ(hf.succ(EMPTY)))
    assert hf.show(three) == "{{},{{}},{{},{{}}}}"
    assert three is hf.ordinal(3)
    assert hf.union_of(hf.hf("{{{}},{{{}}}}")) is hf.hf("{{},{{}}}")


def test_interning_and_order():
    a = HFSet.make([EMPTY, hf.singleton(EMPTY)])
    b = HFSet.make([hf.singleton(EMPTY), EMPTY, EMPTY])
    assert a is b and len(a) == 2
    assert hf.rank(EMPTY) == 0 and hf.rank(a) == 2
    V = hf.universe(4)
    assert list(V) == sorted(V, key=lambda s: (s.rank, len(s), [c.key for c in s.children]))


def test_universe_sizes_against_tree_oracle():
    sizes = [len(hf.universe(n)) for n in range(5)]
    assert sizes == [0, 1, 2, 4, 16]
    for n in range(5):
        assert hf.universe(n) == hf.universe_by_trees(n)


def test_universe_is_transitive():
    for n in range(5):
        V = set(hf.universe(n))
        assert all(c in V for v in V for c in v.children)


def test_int_ext_inverse_and_eps():
    for v in hf.universe(4):
        assert Int(Ext(v)) is v
        assert not hf.eps(v, v)
    s = frozenset({EMPTY, hf.singleton(EMPTY)})
    assert Ext(Int(s)) == s
    assert hf.eps(EMPTY, hf.singleton(EMPTY))


def test_kuratowski_pairs():
    V = hf.universe(3)
    for x, y in itertools.product(V, repeat=2):
        assert hf.unpair(hf.kpair(x, y)) == (x, y)
    table = {EMPTY: hf.singleton(EMPTY), hf.singleton(EMPTY): EMPTY}
    assert hf.decode_function(hf.encode_function(table)) == table
    with pytest.raises(ValueError):
        hf.unpair(hf.hf("{{},{{}},{{{}}}}"))


@pytest.mark.parametrize("text,pos", [("{", 1), ("{{}", 3), ("{}}", 2), ("x", 0)])
def test_literal_errors_carry_position(text, pos):
    with pytest.raises(SyntaxError, match=f"position {pos}"):
        hf.hf(text)


def test_transitive_closure():
    x = hf.ordinal(3)
    assert hf.transitive(x)
    assert hf.transitive_closure(x) == frozenset(hf.ordinal(i) for i in range(3))


sets = st.sampled_from(hf.universe(4))


@settings(max_examples=80, deadline=None)
@given(sets, sets)
def test_union_and_pair_laws(x, y):
    u = hf.union2(x, y)
    assert u.members == x.members | y.members
    p = hf.pair(x, y)
    assert x in p and y in p and len(p) == (1 if x is y else 2)
    assert hf.show(hf.hf(hf.show(x))) == hf.show(x)
