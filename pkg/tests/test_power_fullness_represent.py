from __future__ import annotations

import itertools
import math

import pytest

from smallmaps import core
from smallmaps.checks import FAIL, PASS
from smallmaps.classes import MapClass
from smallmaps.core import FinMap, Scope, std
from smallmaps.fullness import check_fullness, minimal_mvs, mvs_enumerate
from smallmaps.power import admissible_subsets, omega_b, power_class, slice_power_map
from smallmaps.represent import (Representation, check_representation, check_universal, pi_k,
                                 representation_witness, universal_small_map)


# -- power classes ---------------------------------------------------------------

@pytest.mark.parametrize("n,k", [(0, 2), (2, 2), (3, 2), (3, 1), (3, 3)])
def test_power_class_size(n, k):
    P = power_class(std(n), MapClass.fiber_bound(k))
    assert len(P.object) == sum(math.comb(n, r) for r in range(k + 1))


def test_power_class_universal_property():
    assert power_class(std(3), MapClass.fiber_bound(2)).verify_universal(2)
    assert power_class(std(2), MapClass.all_maps()).verify_universal(2)


def test_power_class_monad():
    P = power_class(std(3), MapClass.all_maps())
    assert P.unit(1) == frozenset({1})
    assert P.mult(frozenset({frozenset({0}), frozenset({1, 2})})) == frozenset({0, 1, 2})
    bounded = power_class(std(3), MapClass.fiber_bound(2))
    with pytest.raises(ValueError):
        bounded.mult(frozenset({frozenset({0}), frozenset({1, 2})}))


def test_classify_round_trip():
    P = power_class(std(2), MapClass.fiber_bound(2))
    Y = std(3)
    prod, _, _ = core.product(std(2), Y)
    R = core.Subobject(prod, frozenset({(0, 0), (1, 0), (1, 2)}))
    rho = P.classify(R, Y)
    assert P.pulled_family(rho) == R


def test_omega_b_has_two_truth_values():
    assert len(omega_b(MapClass.monos()).object) == 2
    assert admissible_subsets(std(2), MapClass.isos()) == [frozenset({0}), frozenset({1})]


def test_slice_power_map_fibres():
    f = core.map_with_profile([2, 1])
    sp = slice_power_map(f, MapClass.all_maps())
    assert sorted(len(sp.fiber(x)) for x in f.cod) == [2, 4]


# -- multi-valued sections and fullness -------------------------------------------

def test_minimal_mvs_are_transversals():
    for sizes in [(1,), (2, 1), (2, 2), (3, 1), (0, 1)]:
        phi = core.map_with_profile(sizes)
        mins = minimal_mvs(phi)
        assert len(mins) == math.prod(sizes)
        # brute-force oracle on raw subsets
        dom = phi.dom.elements
        onto = [set(c) for r in range(len(dom) + 1) for c in itertools.combinations(dom, r)
                if {phi(b) for b in c} == set(phi.cod.elements)]
        assert len(mvs_enumerate(phi)) == len(onto)


def test_fullness_pass_and_obstruction():
    phi = core.map_with_profile([2, 1])
    r = check_fullness(phi, core.identity(std(2)), MapClass.all_maps())
    assert r.status == PASS and r.checked > 0
    r = check_fullness(core.map_with_profile([2, 2]), core.bang(std(2)), MapClass.fiber_bound(2))
    assert r.status == FAIL and r.counterexample["minimal_mvs_count"] == 4


# -- representations ----------------------------------------------------------------

def test_pi_k_represents_fiber_bound():
    for k in (1, 2):
        assert check_representation(pi_k(k), MapClass.fiber_bound(k), Scope(3)).status == PASS


def test_too_small_representation_fails():
    r = check_representation(pi_k(1), MapClass.fiber_bound(2), Scope(3))
    assert r.status == FAIL


def test_identity_on_one_represents_isos():
    rep = Representation(core.identity(core.ONE))
    assert check_representation(rep, MapClass.isos(), Scope(3)).status == PASS


def test_witness_count_matches_surjection_oracle():
    f = core.map_with_profile([2, 1])
    w = representation_witness(f, pi_k(2))
    # B = {(x, u, s)}: surjections E_u ->> Y_x; |Y| = 2 gets 2 from u = 2, |Y| = 1 gets 1 + 1
    assert len(w.left.left.cod) == 2 + 2
    assert core.is_pullback(w.right)


def test_universal_small_map():
    # frozen: u = 0 gives 1 triple, u = 1 gives 2, u = 2 gives the 2 bijections onto the diagonal
    u = universal_small_map(pi_k(2))
    assert len(u.U) == 5
    assert sorted(len(u.fiber(x)) for x in u.U) == [0, 1, 1, 2, 2]
    assert check_universal(u, MapClass.fiber_bound(2), Scope(3)).status == PASS
