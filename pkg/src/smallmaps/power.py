"""Power class objects for fibrewise classes: subsets of admissible size."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from . import core
from .classes import MapClass
from .core import FinMap, FinObj, Subobject


def admissible_subsets(X: FinObj, cls: MapClass) -> list[frozenset]:
    loc = cls.local()
    if loc is None:
        raise ValueError(f"power classes are implemented for fibrewise classes only, not {cls}")
    out = []
    for r in range(len(X) + 1):
        if loc.admits(r):
            out.extend(frozenset(c) for c in itertools.combinations(X.elements, r))
    return out


@dataclass(frozen=True)
class PowerClass:
    X: FinObj
    cls: MapClass
    object: FinObj
    memb: Subobject  # of X x P(X)

    @cached_property
    def memb_projection(self) -> FinMap:
        """The family  memb -> P(X); it belongs to the class by construction."""
        M = core.obj(self.memb.elements)
        return FinMap.from_fn(M, self.object, lambda p: p[1])

    def classify(self, R: Subobject, Y: FinObj) -> FinMap:
        """The unique rho: Y -> P(X) whose pullback of memb along id x rho is R."""
        prod, _, _ = core.product(self.X, Y)
        if R.ambient != prod:
            raise ValueError("family must be a subobject of X x Y")
        fam = FinMap.from_fn(core.obj(R.elements), Y, lambda p: p[1])
        if not self.cls.contains(fam):
            raise ValueError("family is not displayed: R -> Y is not in the class")
        return FinMap.from_fn(Y, self.object, lambda y: frozenset(x for x, yy in R.carrier if yy == y))

    def pulled_family(self, rho: FinMap) -> Subobject:
        prod, _, _ = core.product(self.X, rho.dom)
        return Subobject(prod, frozenset((x, y) for x, y in prod if (x, rho(y)) in self.memb.carrier))

    def unit(self, x) -> frozenset:
        s = frozenset({x})
        if s not in self.object:
            raise ValueError("singletons are not admissible in this class")
        return s

    def unit_map(self) -> FinMap:
        return FinMap.from_fn(self.X, self.object, self.unit)

    def mult(self, family: frozenset) -> frozenset:
        """Union of a small set of small sets; partial when the union is too large."""
        u = frozenset().union(*family) if family else frozenset()
        if u not in self.object:
            raise ValueError(f"union of {len(family)} admissible sets has {len(u)} elements, "
                             f"which {self.cls} does not admit")
        return u

    def image(self, f: FinMap) -> FinMap:
        """P(f): direct image P(X) -> P(Y)."""
        if f.dom != self.X:
            raise ValueError("map does not start at X")
        target = power_class(f.cod, self.cls)
        return FinMap.from_fn(self.object, target.object, lambda s: frozenset(f(x) for x in s))

    def verify_universal(self, max_index: int = 2) -> bool:
        """classify is inverse to pulling back memb, for every displayed family
        indexed by a set of size <= max_index."""
        for n in range(max_index + 1):
            Y = core.std(n)
            for rho in core.all_maps(Y, self.object):
                R = self.pulled_family(rho)
                if self.classify(R, Y) != rho:
                    return False
            prod, _, _ = core.product(self.X, Y)
            for R in core.all_subobjects(prod):
                fam = FinMap.from_fn(core.obj(R.elements), Y, lambda p: p[1])
                if not self.cls.contains(fam):
                    continue
                rho = self.classify(R, Y)
                if self.pulled_family(rho) != R:
                    return False
                # uniqueness: no other rho gives R
                hits = [r for r in core.all_maps(Y, self.object) if self.pulled_family(r) == R]
                if hits != [rho]:
                    return False
        return True


def power_class(X: FinObj, cls: MapClass) -> PowerClass:
    P = core.obj(admissible_subsets(X, cls), name=f"P({X.name or len(X)})")
    prod, _, _ = core.product(X, P)
    memb = Subobject(prod, frozenset((x, s) for x, s in prod if x in s))
    return PowerClass(X, cls, P, memb)


def omega_b(cls: MapClass) -> PowerClass:
    """P(1); for any class admitting 0- and 1-element fibres this is the 2-element Omega_b."""
    return power_class(core.ONE, cls)


def slice_power_map(f: FinMap, cls: MapClass) -> FinMap:
    """The power class of f: Y -> X computed in the slice over X, as a map to X."""
    elems = []
    for x in f.cod:
        fib = core.obj(f.fiber(x))
        elems.extend((x, s) for s in admissible_subsets(fib, cls))
    P = core.obj(elems)
    return FinMap.from_fn(P, f.cod, lambda e: e[0])
