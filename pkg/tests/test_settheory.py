from __future__ import annotations

import itertools

import pytest

from smallmaps import core, hf
from smallmaps.checks import FAIL, PASS
from smallmaps.classes import MapClass
from smallmaps.fullness import minimal_mvs
from smallmaps.hf import EMPTY, HFSet
from smallmaps.represent import pi_k
from smallmaps.settheory import (AXIOM_NAMES, INDUCTION_BATTERY, SEPARATION_BATTERY, COLLECTION_BATTERY,
                                 ParamError, build_v, build_v_by_trees, check_axiom, fullness_set,
                                 least_subalgebra, mvs_bruteforce, run_battery, verify_full_set)
from smallmaps.wtypes import PolySig, canonical_hf, wtype_enum

S = hf.hf


def test_battery_sizes():
    assert (len(SEPARATION_BATTERY), len(COLLECTION_BATTERY), len(INDUCTION_BATTERY)) == (10, 5, 5)


def test_worked_examples():
    r = check_axiom("bounded-separation", 3, {"phi": "eps(x, b)", "a": "{{},{{}}}", "env": {"b": "{{}}"}})
    assert r.verdict == PASS and r.witness is S("{{}}")
    for a in hf.universe(3):
        assert check_axiom("strong-collection", 3, {"phi": "eq(y, x)", "a": a}).witness is a
    r = check_axiom("power-set", 4, {"x": "{{}}"})
    assert r.witness is S("{{},{{}}}") and len(r.witness) == 2


def test_plain_axioms_over_v3():
    for name in ("extensionality", "empty", "pairing", "union"):
        assert check_axiom(name, 3).verdict == PASS, name
    assert check_axiom("empty", 3).witness is EMPTY


def test_infinity_structured_failure():
    for n in (1, 3, 4):
        r = check_axiom("infinity", n)
        assert r.verdict == FAIL
        assert r.counterexample["inductive_sets_in_V_n"] == 0
        assert r.counterexample["successor_chain"] == [hf.ordinal(i) for i in range(n)]
        assert r.counterexample["chain_escapes_at"] is hf.ordinal(n)


def test_set_induction_detects_false_conclusion():
    # "x is empty" is not inductive: the hypothesis fails at {0}
    r = check_axiom("set-induction", 3, {"phi": "not exists z in x . z = z"})
    assert r.verdict == PASS and "vacuously" in r.note


def test_separation_rejects_unbounded_formula():
    with pytest.raises(ParamError):
        check_axiom("bounded-separation", 3, {"phi": "exists y . eps(x, y)", "a": "{}"})
    r = check_axiom("full-separation", 3, {"phi": "exists y . eps(y, x)", "a": "{{},{{}}}"})
    assert r.verdict == PASS and r.witness is S("{{{}}}")


def test_ill_typed_params():
    with pytest.raises(ParamError):
        check_axiom("power-set", 3, {"x": "{{{}}}"})  # rank 2 > n - 2
    with pytest.raises(ParamError):
        check_axiom("bounded-separation", 3, {"phi": "eps(x, b)", "a": "{}"})  # b has no value
    with pytest.raises(ParamError):
        check_axiom("no-such-axiom", 3)
    with pytest.raises(ParamError):
        check_axiom("fullness", 3, {"f": "{{}}"})
    assert "fullness" in AXIOM_NAMES


def test_power_set_for_all_rank_two_sets():
    for x in hf.universe(3):
        r = check_axiom("power-set", 4, {"x": x})
        assert r.verdict == PASS and len(r.witness) == 2 ** len(x)


# -- building V --------------------------------------------------------------------

def test_build_v_matches_tree_oracle():
    for k, depth in [(2, 2), (2, 3), (1, 3), (3, 2)]:
        assert build_v(pi_k(k), depth) == build_v_by_trees(pi_k(k), depth)
    assert build_v(pi_k(2), 2) == list(hf.universe(3))
    assert build_v(pi_k(4), 3) == list(hf.universe(4))


def test_canonical_collapse_commutes_with_int():
    sig = PolySig(pi_k(2).pi)
    for w in wtype_enum(sig, 3):
        assert hf.Ext(canonical_hf(w)) == frozenset(canonical_hf(c) for _, c in w.children)


def test_no_proper_subalgebra():
    for n in range(5):
        assert least_subalgebra(n) == frozenset(hf.universe(n))


# -- fullness at set level --------------------------------------------------------------

def test_fullness_examples():
    x, y, z = (hf.ordinal(i) for i in range(3))
    f = hf.encode_function({x: hf.ordinal(0), y: hf.ordinal(0), z: hf.ordinal(1)})
    assert fullness_set(f) is HFSet.make([HFSet.make([x, z]), HFSet.make([y, z])])
    assert fullness_set(EMPTY, EMPTY) is hf.singleton(EMPTY)
    b = [hf.ordinal(i) for i in range(3)]
    f1 = hf.encode_function({e: EMPTY for e in b})
    assert fullness_set(f1) is HFSet.make(hf.singleton(e) for e in b)


def test_fullness_set_against_bruteforce_small():
    pts = [hf.ordinal(i) for i in range(3)]
    for na, nb in itertools.product(range(3), repeat=2):
        a, B = HFSet.make(pts[:na]), pts[:nb]
        for values in itertools.product(pts[:na], repeat=nb):
            f = hf.encode_function(dict(zip(B, values)))
            z = fullness_set(f, a)
            ok, _ = verify_full_set(f, z, a)
            assert ok
            mvss = mvs_bruteforce(f, a)
            minimal = {m for m in mvss if not any(o.members < m.members for o in mvss)}
            assert set(z.children) == minimal


def test_fullness_agrees_with_map_level_mvss():
    # transport phi: B -> A of finite sets across the HF encoding
    for sizes in [(2, 1), (1, 1), (3,), (2, 2)]:
        phi = core.map_with_profile(sizes)
        enc = {e: hf.ordinal(i) for i, e in enumerate(phi.dom.elements)}
        cod = {a: hf.ordinal(i) for i, a in enumerate(phi.cod.elements)}
        f = hf.encode_function({enc[e]: cod[phi(e)] for e in phi.dom})
        via_maps = {HFSet.make(enc[e] for e in m.carrier) for m in minimal_mvs(phi)}
        assert set(fullness_set(f, HFSet.make(cod.values())).children) == via_maps


def test_reports_serialise():
    import json
    for r in run_battery(2):
        json.dumps(r.to_json())
    json.dumps(check_axiom("infinity", 3).to_json())
