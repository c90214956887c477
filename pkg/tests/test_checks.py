"""The axiom checker against an independent brute-force oracle.

The oracle works on raw tuples (a map n -> m is a tuple of images) and
decides each axiom directly from fibre sizes, sharing no code with the
checker.
"""
from __future__ import annotations

import itertools

import pytest

from smallmaps.checks import (FAIL, INCONCLUSIVE, OUT_OF_SCOPE, PASS, SMALL_MAP_AXIOMS, AxiomReport,
                              FinSetInstance, SliceInstance, check_axioms, is_display_class, scov,
                              scov_comparison, to_jsonable)
from smallmaps.classes import MapClass
from smallmaps.core import Scope, std

N = 3
SIZES = range(N + 1)


def raw_maps(n, m):
    return itertools.product(range(m), repeat=n)


def fib(f, m):
    return [sum(1 for v in f if v == y) for y in range(m)]


def surj(f, m):
    return set(f) == set(range(m))


def oracle(pred) -> dict:
    out = {}
    all_maps = [(n, m, f) for n in SIZES for m in SIZES for f in raw_maps(n, m)]
    inS = lambda f, m: pred(fib(f, m))
    out["A1"] = all(pred([fib(f, k)[p[b]] for b in range(j)])
                    for n, k, f in all_maps if inS(f, k) for j in SIZES for p in raw_maps(j, k))
    out["A2"] = all(inS(f, k) or not pred([fib(f, k)[p[b]] for b in range(j)])
                    for n, k, f in all_maps for j in SIZES for p in raw_maps(j, k) if surj(p, k))
    members = [fib(f, m) for n, m, f in all_maps if inS(f, m)]
    out["A3"] = all(pred(a + b) for a in members for b in members)
    out["A4"] = pred([0]) and pred([2])
    out["A5"] = all(pred([sum(fib(f, m)[y] for y in range(m) if g[y] == z) for z in range(k)])
                    for n, m, f in all_maps if inS(f, m) for k in SIZES for g in raw_maps(m, k) if inS(g, k))
    out["A6"] = all(inS(g, k) or not pred([sum(fib(f, m)[y] for y in range(m) if g[y] == z) for z in range(k)])
                    for n, m, f in all_maps if surj(f, m) for k in SIZES for g in raw_maps(m, k))
    a8 = True
    for n, m, f in all_maps:
        if not inS(f, m):
            continue
        for r in range(n + 1):
            for M in itertools.combinations(range(n), r):
                if not pred([1] * len(M) + [0] * (n - len(M))):
                    continue
                A = [y for y in range(m) if all(x in M for x in range(n) if f[x] == y)]
                a8 &= pred([1] * len(A) + [0] * (m - len(A)))
    out["A8"] = a8
    out["A9"] = all(pred([1] * n + [0] * (n * n - n)) for n in SIZES)
    return out


CLASSES = {
    "fiber:1": (MapClass.fiber_bound(1), lambda s: all(v <= 1 for v in s)),
    "fiber:2": (MapClass.fiber_bound(2), lambda s: all(v <= 2 for v in s)),
    "monos": (MapClass.monos(), lambda s: all(v <= 1 for v in s)),
    "isos": (MapClass.isos(), lambda s: all(v == 1 for v in s)),
    "all": (MapClass.all_maps(), lambda s: True),
}


@pytest.mark.parametrize("name", sorted(CLASSES))
def test_verdicts_match_oracle(name):
    cls, pred = CLASSES[name]
    expected = oracle(pred)
    reports = {r.axiom: r for r in check_axioms(cls, Scope(N))}
    for axiom, ok in expected.items():
        assert reports[axiom].status == (PASS if ok else FAIL), axiom
    # a transversal of a cover always exists in finite sets
    assert reports["A7"].status == PASS


def test_frozen_failure_sets():
    # frozen from the oracle above
    def failing(cls):
        return sorted(r.axiom for r in check_axioms(cls, Scope(N)) if r.status == FAIL)
    assert failing(MapClass.fiber_bound(2)) == ["A5"]
    assert failing(MapClass.isos()) == ["A4", "A9"]
    assert failing(MapClass.monos()) == ["A4"]
    assert failing(MapClass.all_maps()) == []


def test_fail_carries_counterexample():
    with pytest.raises(ValueError):
        AxiomReport("A1", FAIL)
    (r,) = check_axioms(MapClass.fiber_bound(2), Scope(N), ("A5",))
    assert r.counterexample["composite"]


def test_zero_timeout_is_inconclusive_not_wrong():
    reports = check_axioms(MapClass.all_maps(), Scope(N), timeout=0.0)
    assert {r.status for r in reports} <= {PASS, INCONCLUSIVE}
    assert any(r.status == INCONCLUSIVE for r in reports)


def test_extra_axioms_on_all_maps():
    reports = {r.axiom: r.status for r in check_axioms(MapClass.all_maps(), Scope(N),
                                                       ("M", "PE", "PS", "PiE", "PiS", "WE", "NS", "F"))}
    assert reports["WE"] == OUT_OF_SCOPE
    assert all(v == PASS for k, v in reports.items() if k != "WE")


def test_bounded_class_fails_ns():
    (r,) = check_axioms(MapClass.fiber_bound(2), Scope(N), ("NS",))
    assert r.status == FAIL


def test_slice_instance_runs_same_checks():
    inst = SliceInstance(MapClass.fiber_bound(2), std(2), max_size=2)
    reports = check_axioms(MapClass.fiber_bound(2), which=("A1", "A3", "A9"), instance=inst)
    assert all(r.status == PASS for r in reports)


def test_display_and_scov():
    ok, _ = is_display_class(MapClass.all_maps(), Scope(N))
    assert ok
    res = scov(MapClass.isos(), Scope(N))
    assert not res.is_display
    rows = scov_comparison(MapClass.fiber_bound(2), Scope(N))
    assert all(r["in_class"] == r["covered"] for r in rows)
    assert all((r["witness"] is not None) == r["covered"] for r in rows)


def test_reports_serialise():
    import json
    for r in check_axioms(MapClass.isos(), Scope(2)):
        json.dumps(r.to_json())
    json.dumps(to_jsonable({"a": (1, frozenset({2}))}))
