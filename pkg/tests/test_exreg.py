from __future__ import annotations

import itertools

import pytest

from smallmaps import core, exreg
from smallmaps.checks import PASS, check_axioms, DISPLAY_AXIOMS
from smallmaps.classes import MapClass
from smallmaps.core import Scope, std
from smallmaps.exreg import (CompletionInstance, ExMor, ExObj, SBar, check_functional_relation, embed_y,
                             functional_relations_bruteforce, heyting_forall_ex, homs, partitions)

BELL = [1, 1, 2, 5]  # set partitions of 0..3 points


def test_partition_counts():
    assert [len(partitions(std(n))) for n in range(4)] == BELL


def test_hom_counts_are_class_maps():
    objs = [P for n in range(3) for P in partitions(std(n))]
    for A, B in itertools.product(objs, repeat=2):
        brute = functional_relations_bruteforce(A, B)
        assert len(brute) == len(B.blocks) ** len(A.blocks)
        assert {m.rel for m in homs(A, B)} == set(brute)


def test_functional_relation_clauses():
    A = embed_y(std(2))
    B = embed_y(std(2))
    assert check_functional_relation({(0, 0), (1, 1)}, A, B).ok
    assert check_functional_relation({(0, 0)}, A, B).clause == "totality"
    assert check_functional_relation({(0, 0), (0, 1), (1, 1)}, A, B).clause == "functionality"


def test_yoneda_subobjects_and_homs():
    for n in range(4):
        X = embed_y(std(n))
        assert len(exreg.saturated_subsets(X)) == 2 ** n
        for m in range(3):
            assert len(homs(X, embed_y(std(m)))) == m ** n


def test_cover_mono_iso():
    X = std(2)
    A = ExObj.from_relation(X, {(0, 0), (1, 1), (0, 1), (1, 0)})
    e = ExMor(embed_y(X), A, frozenset({(0, 0), (1, 1)}))
    assert exreg.is_cover(e) and not exreg.is_mono(e)
    assert exreg.is_iso(exreg.identity(A))


def test_pullback_is_universal_count():
    X = ExObj.from_relation(std(3), {(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)})
    Y = embed_y(std(1))
    f = exreg.bang(X)
    P, _, _ = exreg.pullback(f, exreg.identity(Y))
    assert len(P.blocks) == len(X.blocks)


def test_heyting_forall_agrees_with_direct():
    objs = [P for n in range(3) for P in partitions(std(n))]
    for A, B in itertools.product(objs, repeat=2):
        for g in homs(A, B):
            for S in exreg.saturated_subsets(A):
                assert heyting_forall_ex(g, S).agrees


def test_sbar_and_separation():
    sbar = SBar(MapClass.fiber_bound(2))
    X = ExObj.from_relation(std(3), {(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)})
    verdict = exreg.sbar_member(exreg.bang(X), sbar)
    assert verdict.ok and verdict.square is not None
    three = embed_y(std(3))
    assert not exreg.sbar_member(exreg.bang(three), sbar).ok
    assert exreg.is_separated(X, sbar)


def test_quotients_are_effective():
    A = embed_y(std(3))
    for P in partitions(std(3)):
        eq = P.rel
        Q, e = exreg.quotient(A, eq)
        assert exreg.kernel_pair(e) == eq
        assert exreg.stably_exact(A, eq, max_size=1)
    with pytest.raises(ValueError):
        exreg.quotient(A, {(0, 1)})
    with pytest.raises(ValueError, match="reflexive"):
        ExObj.from_relation(std(2), {(0, 1), (1, 0)})


def test_completion_report_all_clauses_pass():
    reports = exreg.completion_report(Scope(2), MapClass.fiber_bound(2))
    assert [r.axiom for r in reports] == ["full-faithful", "covering", "subobject-bijective",
                                          "sbar-covered", "bounded-quotients", "idempotence"]
    assert all(r.status == PASS for r in reports)


def test_axioms_hold_in_completion():
    inst = CompletionInstance(MapClass.fiber_bound(2), max_size=2)
    reports = check_axioms(MapClass.fiber_bound(2), which=DISPLAY_AXIOMS, instance=inst)
    assert all(r.status == PASS for r in reports), [(r.axiom, r.status) for r in reports]


def test_structural_laws():
    assert exreg.composition_laws(2)
    assert exreg.kernel_pair_round_trip(3)
    assert exreg.exponential_preserved(std(2), std(2))
    assert exreg.power_transfer(std(2), MapClass.fiber_bound(2))
