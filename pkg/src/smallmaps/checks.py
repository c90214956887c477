"""Exhaustive, scope-bounded verification of the axioms on a class of maps.

The checkers are written against a small "instance" protocol so the same code
runs on finite sets, on slices of finite sets, and on the exact completion
(see `exreg.CompletionInstance`).  An instance supplies the objects in scope,
the maps between them, the categorical structure the axioms mention, and the
membership predicate of the class under test.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from . import core
from .classes import Inconclusive, MapClass, find_covering
from .core import FinMap, FinObj, Scope

PASS, FAIL, INCONCLUSIVE, OUT_OF_SCOPE = "pass", "fail", "inconclusive", "out-of-scope"

SMALL_MAP_AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9")
DISPLAY_AXIOMS = ("A1", "A3", "A4", "A5", "A7", "A8", "A9", "A10")
LOCAL_AXIOMS = ("L1", "L2", "L3")
EXTRA_AXIOMS = ("M", "PE", "PS", "PiE", "PiS", "WE", "WS", "NE", "NS", "F")
ALL_AXIOMS = SMALL_MAP_AXIOMS + ("A10",) + LOCAL_AXIOMS + EXTRA_AXIOMS


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    status: str
    counterexample: object = None
    witness: object = None
    note: str = ""
    checked: int = 0

    def __post_init__(self):
        if self.status == FAIL and self.counterexample is None:
            raise ValueError("a failing report must carry a counterexample")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {
            "id": self.axiom,
            "status": self.status,
            "counterexample": to_jsonable(self.counterexample),
            "witness": to_jsonable(self.witness),
            "note": self.note,
            "checked": self.checked,
        }


def to_jsonable(x):
    """Best-effort structural serialisation for reports."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, FinObj):
        return [to_jsonable(e) for e in x.elements]
    if isinstance(x, FinMap):
        return {"dom": to_jsonable(x.dom), "cod": to_jsonable(x.cod),
                "table": [[to_jsonable(a), to_jsonable(b)] for a, b in x.graph]}
    if isinstance(x, core.Square):
        return {k: to_jsonable(getattr(x, k)) for k in ("top", "bottom", "left", "right")}
    if isinstance(x, core.Subobject):
        return {"ambient": to_jsonable(x.ambient), "carrier": [to_jsonable(e) for e in x.elements]}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, frozenset):
        return [to_jsonable(e) for e in core.canonical(x)]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(e) for e in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return repr(x)


# -- instances ----------------------------------------------------------------

class FinSetInstance:
    """Finite sets with one object per cardinality up to the scope bound."""

    name = "FinSet"

    def __init__(self, cls: MapClass, scope: Scope = Scope()):
        self.cls = cls
        self.scope = scope
        self._objects = scope.objects()
        self._maps = list(scope.maps())

    def objects(self):
        return self._objects

    def maps(self):
        return self._maps

    dom = staticmethod(lambda m: m.dom)
    cod = staticmethod(lambda m: m.cod)
    compose = staticmethod(core.compose)
    identity = staticmethod(core.identity)
    diagonal = staticmethod(core.diagonal)
    sum_map = staticmethod(core.sum_maps)

    def pullback(self, f, p):
        P, pf, pp = core.pullback(f, p)
        return P, pf, pp

    def is_cover(self, m):
        return m.is_surjective()

    def is_mono(self, m):
        return m.is_injective()

    def member(self, m):
        return self.cls.contains(m)

    def finiteness_maps(self):
        two = core.sums(core.ONE, core.ONE)
        return [("0->1", core.from_empty(core.ONE)), ("1->1", core.identity(core.ONE)),
                ("1+1->1", two.copair(core.identity(core.ONE), core.identity(core.ONE)))]

    def subobjects(self, Y):
        return [S.inclusion() for S in core.all_subobjects(Y)]

    def forall(self, f, m):
        S = core.Subobject(f.dom, frozenset(m.images))
        return core.forall(f, S).inclusion()

    def section(self, p):
        if not p.is_surjective():
            return None
        return FinMap.from_fn(p.cod, p.dom, lambda x: p.fiber(x)[0])

    def equal(self, a, b):
        return a == b

    def show(self, m):
        return m


@dataclass(frozen=True)
class SliceMap:
    src: FinMap
    tgt: FinMap
    under: FinMap


class SliceInstance:
    """The slice of finite sets over a fixed object, reusing the same checkers."""

    name = "FinSet/X"

    def __init__(self, cls: MapClass, base: FinObj, max_size: int = 2):
        self.cls = cls
        self.base = base
        self._objects = [f for n in range(max_size + 1) for f in core.all_maps(core.std(n), base)]
        self._maps = [SliceMap(a, b, u) for a in self._objects for b in self._objects
                      for u in core.all_maps(a.dom, b.dom) if core.compose(b, u) == a]

    def objects(self):
        return self._objects

    def maps(self):
        return self._maps

    dom = staticmethod(lambda m: m.src)
    cod = staticmethod(lambda m: m.tgt)

    def compose(self, g, f):
        return SliceMap(f.src, g.tgt, core.compose(g.under, f.under))

    def identity(self, a):
        return SliceMap(a, a, core.identity(a.dom))

    def pullback(self, f, p):
        P, pf, pp = core.pullback(f.under, p.under)
        over = core.compose(f.tgt, core.compose(f.under, pf))
        return over, SliceMap(over, f.src, pf), SliceMap(over, p.src, pp)

    def is_cover(self, m):
        return m.under.is_surjective()

    def is_mono(self, m):
        return m.under.is_injective()

    def member(self, m):
        return self.cls.contains(m.under)

    def sum_map(self, f, g):
        def summed(a, b):
            s = core.sums(a.dom, b.dom)
            return s.copair(a, b)
        return SliceMap(summed(f.src, g.src), summed(f.tgt, g.tgt), core.sum_maps(f.under, g.under))

    def finiteness_maps(self):
        X = self.base
        one = core.identity(X)
        zero = core.from_empty(X)
        s = core.sums(X, X)
        two = s.copair(one, one)
        return [("0->1", SliceMap(zero, one, zero)), ("1->1", SliceMap(one, one, core.identity(X))),
                ("1+1->1", SliceMap(two, one, two))]

    def diagonal(self, a):
        P, p1, _ = core.pullback(a, a)
        over = core.compose(a, p1)
        return SliceMap(a, over, FinMap.from_fn(a.dom, P, lambda x: (x, x)))

    def subobjects(self, a):
        out = []
        for S in core.all_subobjects(a.dom):
            inc = S.inclusion()
            out.append(SliceMap(core.compose(a, inc), a, inc))
        return out

    def forall(self, f, m):
        S = core.Subobject(f.under.dom, frozenset(m.under.images))
        inc = core.forall(f.under, S).inclusion()
        return SliceMap(core.compose(f.tgt, inc), f.tgt, inc)

    def section(self, p):
        if not p.under.is_surjective():
            return None
        s = FinMap.from_fn(p.under.cod, p.under.dom, lambda x: p.under.fiber(x)[0])
        return SliceMap(p.tgt, p.src, s)

    def equal(self, a, b):
        return a == b

    def show(self, m):
        return {"over": m.src, "map": m.under}


# -- the checker ------------------------------------------------------------

class _Budget:
    def __init__(self, timeout: Optional[float]):
        self.deadline = None if timeout is None else time.monotonic() + timeout

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


class _Universal:
    """Collects the outcome of a universally quantified check."""

    def __init__(self, axiom: str, budget: _Budget):
        self.axiom = axiom
        self.budget = budget
        self.count = 0
        self.counterexample = None
        self.undecided = None
        self.timed_out = False

    def member(self, inst, m) -> Optional[bool]:
        try:
            return inst.member(m)
        except Inconclusive as exc:
            if self.undecided is None:
                self.undecided = str(exc)
            return None

    def tick(self) -> bool:
        self.count += 1
        if self.count % 256 == 0 and self.budget.expired():
            self.timed_out = True
            return False
        return self.counterexample is None

    def fail(self, example) -> None:
        if self.counterexample is None:
            self.counterexample = example

    def report(self, witness=None, note="") -> AxiomReport:
        if self.counterexample is not None:
            return AxiomReport(self.axiom, FAIL, self.counterexample, None, note, self.count)
        if self.timed_out:
            return AxiomReport(self.axiom, INCONCLUSIVE, None, witness, "soft timeout reached", self.count)
        if self.undecided is not None:
            return AxiomReport(self.axiom, INCONCLUSIVE, None, witness, self.undecided, self.count)
        return AxiomReport(self.axiom, PASS, None, witness, note, self.count)


def _by_cod(inst):
    out = {}
    for m in inst.maps():
        out.setdefault(inst.cod(m), []).append(m)
    return out


def _by_dom(inst):
    out = {}
    for m in inst.maps():
        out.setdefault(inst.dom(m), []).append(m)
    return out


def _pullback_stability(inst, u: _Universal):
    into = _by_cod(inst)
    for f in inst.maps():
        if u.member(inst, f) is not True:
            continue
        for p in into.get(inst.cod(f), []):
            if not u.tick():
                return
            _, _, g = inst.pullback(f, p)
            if u.member(inst, g) is False:
                u.fail({"f": inst.show(f), "p": inst.show(p), "pullback": inst.show(g)})


def _descent(inst, u: _Universal):
    into = _by_cod(inst)
    for f in inst.maps():
        for p in into.get(inst.cod(f), []):
            if not inst.is_cover(p):
                continue
            if not u.tick():
                return
            _, _, g = inst.pullback(f, p)
            if u.member(inst, g) is True and u.member(inst, f) is False:
                u.fail({"f": inst.show(f), "cover": inst.show(p), "pullback": inst.show(g)})


def _sums(inst, u: _Universal):
    members = [f for f in inst.maps() if u.member(inst, f) is True]
    for f, g in itertools.product(members, repeat=2):
        if not u.tick():
            return
        s = inst.sum_map(f, g)
        if u.member(inst, s) is False:
            u.fail({"f": inst.show(f), "g": inst.show(g), "sum": inst.show(s)})


def _finiteness(inst, u: _Universal):
    missing = []
    for label, m in inst.finiteness_maps():
        u.tick()
        if u.member(inst, m) is False:
            missing.append(label)
    if missing:
        u.fail({"maps": missing})


def _composition(inst, u: _Universal):
    out_of = _by_dom(inst)
    for f in inst.maps():
        if u.member(inst, f) is not True:
            continue
        for g in out_of.get(inst.cod(f), []):
            if u.member(inst, g) is not True:
                continue
            if not u.tick():
                return
            gf = inst.compose(g, f)
            if u.member(inst, gf) is False:
                u.fail({"f": inst.show(f), "g": inst.show(g), "composite": inst.show(gf)})


def _quotients(inst, u: _Universal):
    out_of = _by_dom(inst)
    for f in inst.maps():
        if not inst.is_cover(f):
            continue
        for g in out_of.get(inst.cod(f), []):
            if not u.tick():
                return
            h = inst.compose(g, f)
            if u.member(inst, h) is True and u.member(inst, g) is False:
                u.fail({"cover": inst.show(f), "g": inst.show(g), "composite": inst.show(h)})


def _images(inst, u: _Universal):
    out_of = _by_dom(inst)
    for e in inst.maps():
        if not inst.is_cover(e):
            continue
        for m in out_of.get(inst.cod(e), []):
            if not inst.is_mono(m):
                continue
            if not u.tick():
                return
            f = inst.compose(m, e)
            if u.member(inst, f) is True and u.member(inst, m) is False:
                u.fail({"cover": inst.show(e), "mono": inst.show(m), "composite": inst.show(f)})


def _local_fullness(inst, u: _Universal):
    into = _by_cod(inst)
    for g in inst.maps():
        if u.member(inst, g) is not True:
            continue
        for f in into.get(inst.dom(g), []):
            if not u.tick():
                return
            a, b = u.member(inst, f), u.member(inst, inst.compose(g, f))
            if a is not None and b is not None and a != b:
                u.fail({"g": inst.show(g), "f": inst.show(f), "f_in_class": a, "gf_in_class": b})


def _collection(inst, u: _Universal):
    """Transversal witness: a section s of the cover gives the identity square."""
    out_of = _by_dom(inst)
    witness = None
    for p in inst.maps():
        if not inst.is_cover(p):
            continue
        for f in out_of.get(inst.cod(p), []):
            if u.member(inst, f) is not True:
                continue
            if not u.tick():
                return None
            s = inst.section(p)
            ok = s is not None and inst.equal(inst.compose(p, s), inst.identity(inst.cod(p)))
            if not ok:
                # no transversal: this is not evidence of failure, only of
                # our search being too weak
                u.undecided = u.undecided or f"no section found for cover {inst.show(p)!r}"
                continue
            if witness is None:
                witness = {"cover": inst.show(p), "f": inst.show(f), "Z->Y": inst.show(s),
                           "g": inst.show(f), "h": "identity"}
    return witness


def _heyting(inst, u: _Universal):
    for f in inst.maps():
        if u.member(inst, f) is not True:
            continue
        for m in inst.subobjects(inst.dom(f)):
            if u.member(inst, m) is not True:
                continue
            if not u.tick():
                return
            a = inst.forall(f, m)
            if u.member(inst, a) is False:
                u.fail({"f": inst.show(f), "bounded": inst.show(m), "forall": inst.show(a)})


def _diagonals(inst, u: _Universal):
    for X in inst.objects():
        u.tick()
        d = inst.diagonal(X)
        if u.member(inst, d) is False:
            u.fail({"diagonal": inst.show(d)})


_GENERIC = {
    "A1": _pullback_stability, "L1": _pullback_stability,
    "A2": _descent,
    "A3": _sums, "L2": _sums,
    "A4": _finiteness,
    "A5": _composition,
    "A6": _quotients,
    "A8": _heyting,
    "A9": _diagonals,
    "A10": _images,
    "L3": _local_fullness,
}


def check_axioms(cls: MapClass, scope: Scope = Scope(), which: Iterable[str] = SMALL_MAP_AXIOMS,
                 instance=None, timeout: Optional[float] = None) -> list[AxiomReport]:
    """Decide the requested axioms over every diagram in scope.

    `instance` defaults to finite sets with the given class; pass a slice or
    completion instance to run the same checks there.
    """
    inst = instance if instance is not None else FinSetInstance(cls, scope)
    reports = []
    for axiom in which:
        budget = _Budget(timeout)
        u = _Universal(axiom, budget)
        if axiom in _GENERIC:
            _GENERIC[axiom](inst, u)
            reports.append(u.report())
        elif axiom == "A7":
            witness = _collection(inst, u)
            reports.append(u.report(witness, "transversal witnesses (sections of covers)"))
        elif not isinstance(inst, FinSetInstance):
            reports.append(AxiomReport(axiom, OUT_OF_SCOPE, note=f"{axiom} is only checked on finite sets"))
        else:
            reports.append(_extra(axiom, cls, inst, u))
    return reports


# -- the axioms beyond A1-A10 ---------------------------------------------------

def _local_required(axiom: str, cls: MapClass) -> Optional[AxiomReport]:
    if not cls.is_local:
        return AxiomReport(axiom, OUT_OF_SCOPE,
                           note=f"{axiom} is decided only for fibrewise classes, not {cls}")
    return None


def _extra(axiom: str, cls: MapClass, inst: FinSetInstance, u: _Universal) -> AxiomReport:
    if axiom == "M":
        for m in inst.maps():
            if not m.is_injective():
                continue
            u.tick()
            if u.member(inst, m) is False:
                u.fail({"mono": m})
        return u.report()

    if axiom == "PE":
        if (r := _local_required(axiom, cls)) is not None:
            return r
        from .power import power_class
        witness = None
        for X in inst.objects():
            u.tick()
            pc = power_class(X, cls)
            if not pc.verify_universal(max_index=2):
                u.fail({"X": X, "reason": "classifying square is not a pullback"})
            witness = witness or {"X": X, "P(X)": pc.object}
        return u.report(witness, "power class = admissible subsets")

    if axiom == "PS":
        if (r := _local_required(axiom, cls)) is not None:
            return r
        from .power import slice_power_map
        for f in inst.maps():
            if u.member(inst, f) is not True:
                continue
            u.tick()
            pf = slice_power_map(f, cls)
            if u.member(inst, pf) is False:
                u.fail({"f": f, "power_over_X": pf})
        return u.report()

    if axiom == "PiE":
        # every map of finite sets is exponentiable; confirm the adjunction
        # |Hom_Y(f*h, g)| = |Hom_X(h, Pi_f g)| on small test objects
        witness = None
        small = [m for m in inst.maps() if len(m.dom) <= 2]
        for f in small:
            if u.member(inst, f) is not True:
                continue
            for g in small:
                if g.cod != f.dom:
                    continue
                for h in small:
                    if h.cod != f.cod:
                        continue
                    u.tick()
                    if not _pi_adjunction(f, g, h):
                        u.fail({"f": f, "g": g, "h": h})
                    witness = witness or {"f": f, "Pi_f(g)": core.pi(f, g)}
        return u.report(witness, "dependent products computed fibrewise")

    if axiom == "PiS":
        if (r := _local_required(axiom, cls)) is not None:
            return r
        for f in inst.maps():
            if u.member(inst, f) is not True:
                continue
            for g in inst.maps():
                if g.cod != f.dom or u.member(inst, g) is not True:
                    continue
                u.tick()
                p = core.pi(f, g)
                if u.member(inst, p) is False:
                    u.fail({"f": f, "g": g, "Pi_f(g)": p})
        return u.report()

    if axiom in ("WE", "WS"):
        return AxiomReport(axiom, OUT_OF_SCOPE,
                           note="W-types of finite sets are infinite in general; see the wtypes truncations")

    if axiom == "NE":
        return AxiomReport(axiom, OUT_OF_SCOPE, note="finite sets have no natural numbers object; "
                           "only truncations N_d are available")

    if axiom == "NS":
        loc = cls.local()
        if loc is not None and loc.sizes is None:
            return AxiomReport(axiom, PASS, witness={"N_truncated": inst.scope.max_size + 1},
                               note="holds at scope truncation: every truncation N_d -> 1 is in the class")
        if loc is not None:
            d = loc.bound + 1
            return AxiomReport(axiom, FAIL, counterexample={"N_truncated": d, "fiber": d},
                               note="fails absolutely: N -> 1 has an infinite fibre, "
                                    f"already the truncation of size {d} is excluded")
        return AxiomReport(axiom, OUT_OF_SCOPE, note=f"NS is decided only for fibrewise classes, not {cls}")

    if axiom == "F":
        if (r := _local_required(axiom, cls)) is not None:
            return r
        from .fullness import check_fullness
        witness = None
        small = [m for m in inst.maps() if len(m.dom) <= 2 and len(m.cod) <= 2]
        for a in small:
            if u.member(inst, a) is not True:
                continue
            for phi in small:
                if phi.cod != a.dom or u.member(inst, phi) is not True:
                    continue
                u.tick()
                r = check_fullness(phi, a, cls, max_z=1)
                if r.status == FAIL:
                    u.fail({"phi": phi, "over": a, "reason": r.note})
                elif r.status == INCONCLUSIVE:
                    u.undecided = u.undecided or r.note
                witness = witness or r.witness
        return u.report(witness, "canonical witness: minimal mvss, checked generically for |Z| <= 1")

    raise ValueError(f"unknown axiom {axiom!r}")


def _pi_adjunction(f: FinMap, g: FinMap, h: FinMap) -> bool:
    """Count both sides of f* -| Pi_f for the given test objects."""
    P, _, ph = core.pullback(f, h)
    fh = FinMap.from_fn(P, f.dom, lambda e: e[0])  # f*(h) over Y

    def over_maps(a: FinMap, b: FinMap) -> int:
        total = 1
        for y in a.cod:
            total *= len(b.fiber(y)) ** len(a.fiber(y))
        return total

    pig = core.pi(f, g)
    return over_maps(fh, g) == over_maps(h, pig)


# -- display axioms and the covered class ------------------------------------

def is_display_class(cls: MapClass, scope: Scope = Scope()) -> tuple[bool, list[AxiomReport]]:
    reports = check_axioms(cls, scope, DISPLAY_AXIOMS)
    return all(r.passed for r in reports), reports


class NotDisplayClass(ValueError):
    def __init__(self, reports):
        failing = [r.axiom for r in reports if not r.passed]
        super().__init__(f"class fails the display axioms {failing}")
        self.reports = reports


@dataclass(frozen=True)
class ScovResult:
    cls: MapClass
    display_reports: tuple
    is_display: bool


def scov(cls: MapClass, scope: Scope = Scope(), strict: bool = False) -> ScovResult:
    """Covered(cls), together with the display-axiom verdict on the input.

    With strict=True the computation refuses inputs that are not display
    classes on the scope.
    """
    ok, reports = is_display_class(cls, scope)
    if strict and not ok:
        raise NotDisplayClass(reports)
    return ScovResult(MapClass.covered(cls), tuple(reports), ok)


def scov_comparison(cls: MapClass, scope: Scope = Scope()) -> list[dict]:
    """For every map in scope: membership in cls and in its cover-closure, with
    an explicit witness square for every covered map."""
    rows = []
    covered = MapClass.covered(cls)
    for f in scope.maps():
        square = find_covering(f, cls, cls.budget)
        rows.append({"map": f, "in_class": cls.contains(f), "covered": covered.contains(f),
                     "witness": square})
    return rows
