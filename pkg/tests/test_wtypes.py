from __future__ import annotations

import itertools

import pytest

from smallmaps import core
from smallmaps.represent import pi_k
from smallmaps.wtypes import (PolySig, bisim_test, bisimilar, canonical_hf, check_collection_span,
                              check_tree, collection_span, decompose, fold, lambek_bijective,
                              least_subalgebra, nno_signature, p_pi_quotient, poly_apply, sup,
                              transitive_closure, wtype_count, wtype_enum, wtype_via_span)


def naive_count(sizes, depth):
    """Oracle: t(0) = #nullary labels, t(d+1) = sum over labels of t(d)^arity."""
    t = sum(1 for s in sizes if s == 0)
    for _ in range(depth):
        t = sum(t ** s for s in sizes)
    return t


@pytest.mark.parametrize("sizes", [[0, 2], [0, 1, 2], [1, 2], [0, 1], [0, 0, 3]])
def test_enumeration_counts(sizes):
    sig = PolySig.from_sizes(sizes)
    for d in range(3):
        trees = wtype_enum(sig, d)
        assert len(trees) == naive_count(sizes, d) == wtype_count(sig, d)
        assert len(set(trees)) == len(trees)
        assert all(check_tree(sig, w) and w.height <= d for w in trees)


def test_frozen_counts():
    assert [wtype_count(PolySig.from_sizes([0, 2]), d) for d in range(4)] == [1, 2, 5, 26]
    assert [wtype_count(PolySig.from_sizes([0, 1, 2]), d) for d in range(4)] == [1, 3, 13, 183]


def test_poly_apply_size():
    sig = PolySig.from_sizes([0, 1, 2])
    assert len(poly_apply(sig, core.std(3))) == 1 + 3 + 9


def test_lambek_and_least_subalgebra():
    sig = PolySig.from_sizes([0, 2])
    assert lambek_bijective(sig, 2)
    assert least_subalgebra(sig, 3) == set(wtype_enum(sig, 3))
    w = wtype_enum(sig, 2)[-1]
    a, kids = decompose(w)
    assert sup(a, kids) is w


def test_nno_linear_trees_and_recursion():
    sig = nno_signature()
    for d in range(6):
        trees = wtype_enum(sig, d)
        assert len(trees) == d + 1
        assert all(len(w.children) <= 1 for w in trees)
    zero, succ = sig.A.elements
    mod3 = lambda a, vals: 0 if a == zero else (vals[0] + 1) % 3
    for w in wtype_enum(sig, 8):
        assert fold(sig, mod3, w) == w.height % 3


def test_transitive_closure_sizes():
    sig = nno_signature()
    w = wtype_enum(sig, 4)[-1]
    tc, strict = transitive_closure(w)
    assert len(tc) == 5 and len(strict) == 4


def test_bisimulation_table_is_unique_solution():
    sig = PolySig.from_sizes([0, 2])
    trees = wtype_enum(sig, 2)
    for w, w2 in itertools.product(trees, repeat=2):
        t = bisim_test(w, w2)
        assert t.verify()
        assert bisim_test(w, w2, seed=7).values == t.values
        assert t.top(w, w2) == (canonical_hf(w) is canonical_hf(w2))


def test_labelled_bisimulation_is_equality_for_injective_labels():
    sig = PolySig.from_sizes([0, 2])
    ident = (lambda a: a, lambda b: b)
    trees = wtype_enum(sig, 2)
    for w, w2 in itertools.product(trees, repeat=2):
        assert bisimilar(w, w2, ident) == (w is w2)


def test_collection_span_and_reduction():
    f = core.map_with_profile([0, 1, 2])
    span = collection_span(f, pi_k(2))
    ok, _ = check_collection_span(span, extra=1)
    assert ok
    q = wtype_via_span(span, 2)
    assert q.in_bijection and q.counts == (13, 13)
    assert wtype_via_span(span, 2, method="bisim").counts == (13, 13)


def test_p_pi_quotient():
    q = p_pi_quotient(core.std(2), pi_k(2))
    assert (len(q.carrier), len(q.quotient)) == (7, 4)
    assert q.coincides
