"""Polynomial functors, well-founded trees and bisimulation.

W-types of finite signatures are infinite in general, so everything here is
materialised up to an explicit height bound.  Trees are hash-consed: two
structurally equal trees are the same Python object.
"""
from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import core
from .core import FinMap, FinObj, sort_key
from .hf import HFSet, Int


# -- signatures -----------------------------------------------------------------

@dataclass(frozen=True)
class PolySig:
    f: FinMap  # B -> A

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> PolySig:
        return cls(core.map_with_profile(sizes))

    @property
    def A(self) -> FinObj:
        return self.f.cod

    @property
    def B(self) -> FinObj:
        return self.f.dom

    @cached_property
    def fibers(self) -> dict:
        return dict(self.f.fibers)

    def arity(self, a) -> int:
        return len(self.fibers[a])

    @property
    def sizes(self) -> tuple:
        return tuple(len(self.fibers[a]) for a in self.A)


def poly_apply(sig: PolySig, X: FinObj) -> FinObj:
    """P_f(X) = sum over a of X^{B_a}; elements (a, values along the sorted fibre)."""
    return core.obj((a, vals) for a in sig.A
                    for vals in itertools.product(X.elements, repeat=sig.arity(a)))


# -- trees ----------------------------------------------------------------------

class WTree:
    """sup_a(t): a label and a child for every b in the fibre over a."""

    __slots__ = ("label", "children", "height", "key", "__weakref__")

    _table: dict = {}
    _lock = threading.Lock()

    def __new__(cls, *a, **kw):
        raise TypeError("use sup(label, children)")

    @classmethod
    def _intern(cls, label, children: tuple) -> WTree:
        k = (label, children)
        found = cls._table.get(k)
        if found is not None:
            return found
        with cls._lock:
            found = cls._table.get(k)
            if found is not None:
                return found
            t = object.__new__(cls)
            t.label = label
            t.children = children
            t.height = 1 + max((c.height for _, c in children), default=-1)
            t.key = (t.height, sort_key(label), tuple((sort_key(b), c.key) for b, c in children))
            cls._table[k] = t
            return t

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __lt__(self, other):
        return self.key < other.key

    def sort_key(self):
        return self.key

    def child(self, b) -> WTree:
        for bb, c in self.children:
            if bb == b:
                return c
        raise KeyError(b)

    @property
    def child_map(self) -> dict:
        return dict(self.children)

    def __repr__(self) -> str:
        if not self.children:
            return f"sup({self.label!r})"
        inner = ", ".join(f"{b!r}: {c!r}" for b, c in self.children)
        return f"sup({self.label!r}; {inner})"


def sup(label, children: Mapping | Iterable = ()) -> WTree:
    items = children.items() if isinstance(children, Mapping) else children
    return WTree._intern(label, tuple(sorted(items, key=lambda bc: sort_key(bc[0]))))


def check_tree(sig: PolySig, w: WTree) -> bool:
    """Children are total on the fibre over the label, recursively."""
    if w.label not in sig.fibers:
        return False
    if tuple(b for b, _ in w.children) != sig.fibers[w.label]:
        return False
    return all(check_tree(sig, c) for _, c in w.children)


def wtype_enum(sig: PolySig, depth: int) -> list[WTree]:
    """All trees of height <= depth, in canonical order."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    level = [sup(a) for a in sig.A if sig.arity(a) == 0]
    for _ in range(depth):
        nxt = []
        for a in sig.A:
            fib = sig.fibers[a]
            for kids in itertools.product(level, repeat=len(fib)):
                nxt.append(sup(a, zip(fib, kids)))
        level = nxt
    return sorted(level, key=lambda t: t.key)


def wtype_count(sig: PolySig, depth: int) -> int:
    """t(0) = #leaves, t(d+1) = sum_a t(d)^|B_a|."""
    t = sum(1 for a in sig.A if sig.arity(a) == 0)
    for _ in range(depth):
        t = sum(t ** sig.arity(a) for a in sig.A)
    return t


def nno_signature() -> PolySig:
    """The left sum inclusion 1 -> 1 + 1: zero has no children, succ has one."""
    s = core.sums(core.ONE, core.ONE)
    return PolySig(FinMap.from_fn(core.ONE, s.obj, lambda _: (1, 0)))


# -- recursion --------------------------------------------------------------------

def transitive_closure(w: WTree) -> tuple[frozenset, frozenset]:
    seen, stack = set(), [w]
    while stack:
        v = stack.pop()
        if v not in seen:
            seen.add(v)
            stack.extend(c for _, c in v.children)
    tc = frozenset(seen)
    return tc, tc - {w}


def _as_algebra(sig: PolySig, algebra) -> Callable:
    if isinstance(algebra, FinMap):
        return lambda a, vals: algebra((a, vals))
    return algebra


def attempt(sig: PolySig, algebra, w: WTree) -> dict:
    """The unique g: tc(w) -> X with g(sup_a t) = m(a, (g(t b))_b)."""
    m = _as_algebra(sig, algebra)
    tc, _ = transitive_closure(w)
    g = {}
    for v in sorted(tc, key=lambda t: t.key):  # children before parents
        g[v] = m(v.label, tuple(g[c] for _, c in v.children))
    return g


def fold(sig: PolySig, algebra, w: WTree):
    return attempt(sig, algebra, w)[w]


def decompose(w: WTree) -> tuple:
    """The inverse of sup: (a, t)."""
    return w.label, w.child_map


def lambek_bijective(sig: PolySig, depth: int) -> bool:
    """sup: P_f(trees of height <= d) -> trees of height <= d+1 is a bijection."""
    lower = wtype_enum(sig, depth)
    upper = set(wtype_enum(sig, depth + 1))
    images = set()
    count = 0
    for a in sig.A:
        fib = sig.fibers[a]
        for kids in itertools.product(lower, repeat=len(fib)):
            count += 1
            images.add(sup(a, zip(fib, kids)))
    return count == len(images) == len(upper) and images == upper


def least_subalgebra(sig: PolySig, depth: int) -> set:
    """Least subset of the height-<=depth trees closed under sup from within."""
    universe = set(wtype_enum(sig, depth))
    S = set()
    while True:
        added = {w for w in universe if w not in S and all(c in S for _, c in w.children)}
        if not added:
            return S
        S |= added


# -- bisimulation ----------------------------------------------------------------

@dataclass
class BisimTable:
    rows: tuple
    cols: tuple
    values: dict
    labels: Optional[tuple] = None

    def top(self, w, w2) -> bool:
        return self.values[(w, w2)]

    def equation(self, v, v2) -> bool:
        """Right-hand side of the defining equality at (v, v2)."""
        if self.labels is None:
            kids = [c for _, c in v.children]
            kids2 = [c for _, c in v2.children]
            forth = all(any(self.values[(c, c2)] for c2 in kids2) for c in kids)
            back = all(any(self.values[(c, c2)] for c in kids) for c2 in kids2)
            return forth and back
        p, q = self.labels
        if p(v.label) != p(v2.label):
            return False
        return all(self.values[(c, c2)] for b, c in v.children for b2, c2 in v2.children if q(b) == q(b2))

    def verify(self) -> bool:
        return all(self.values[(v, v2)] == self.equation(v, v2) for v in self.rows for v2 in self.cols)


def _labels(labels) -> Optional[tuple]:
    if labels is None:
        return None
    p, q = labels
    as_fn = lambda m: m if callable(m) and not isinstance(m, FinMap) else (lambda x: m(x))
    if isinstance(p, Mapping):
        p = p.__getitem__
    if isinstance(q, Mapping):
        q = q.__getitem__
    return as_fn(p), as_fn(q)


def bisim_test(w: WTree, w2: WTree, labels=None, seed: Optional[int] = None) -> BisimTable:
    """The unique Omega_b-valued table on tc(w) x tc(w2).

    With labels=(p, q) this is the labelled test
        g = [p a = p a'] and AND_{b,b'} ([q b = q b'] -> g(t b, t' b'));
    without, the plain test
        g = AND_e OR_e' g(t e, t' e') and AND_e' OR_e g(t e, t' e').
    `seed` evaluates the entries in a shuffled order; by well-foundedness the
    result does not depend on it.
    """
    rows = tuple(sorted(transitive_closure(w)[0], key=lambda t: t.key))
    cols = tuple(sorted(transitive_closure(w2)[0], key=lambda t: t.key))
    table = BisimTable(rows, cols, {}, _labels(labels))
    pairs = [(v, v2) for v in rows for v2 in cols]
    if seed is None:
        # children have smaller keys, so row-major order on sorted closures works
        pairs.sort(key=lambda vv: (max(vv[0].height, vv[1].height),))
        for v, v2 in pairs:
            table.values[(v, v2)] = table.equation(v, v2)
        return table
    random.Random(seed).shuffle(pairs)
    values = table.values

    def get(v, v2):
        if (v, v2) not in values:
            for _, c in v.children:
                for _, c2 in v2.children:
                    get(c, c2)
            values[(v, v2)] = table.equation(v, v2)
        return values[(v, v2)]

    for v, v2 in pairs:
        get(v, v2)
    return table


def bisimilar(w: WTree, w2: WTree, labels=None) -> bool:
    return bisim_test(w, w2, labels).top(w, w2)


_CANON: dict = {}


def canonical_hf(w: WTree) -> HFSet:
    """Collapse a tree to the hereditarily finite set of its children's collapses."""
    found = _CANON.get(w)
    if found is None:
        found = Int(canonical_hf(c) for _, c in w.children)
        _CANON[w] = found
    return found


# -- collection spans and W-types via spans ---------------------------------------

@dataclass(frozen=True)
class CollectionSpan:
    g: FinMap  # B -> A
    q: FinMap  # B -> Y
    p: FinMap  # A -> X
    f: FinMap  # Y -> X

    @property
    def square(self) -> core.Square:
        return core.Square(top=self.q, bottom=self.p, left=self.g, right=self.f)


def collection_span(f: FinMap, rep) -> CollectionSpan:
    """A = sum_{x,u} {h : E_u ->> Y_x}; fibre over (x,u,h) is E_u; q(x,u,h,e) = h(e)."""
    from .represent import surjection_tables

    elems = []
    for x in f.cod:
        for u in rep.U:
            for h in surjection_tables(rep.fiber(u), f.fiber(x)):
                elems.append((x, u, h))
    A = core.obj(elems)
    B = core.obj((a, e) for a in A for e in rep.fiber(a[1]))
    g = FinMap.from_fn(B, A, lambda be: be[0])
    q = FinMap.from_fn(B, f.dom, lambda be: be[0][2][rep.fiber(be[0][1]).index(be[1])])
    p = FinMap.from_fn(A, f.cod, lambda a: a[0])
    return CollectionSpan(g, q, p, f)


def check_collection_span(span: CollectionSpan, extra: int = 1) -> tuple[bool, object]:
    """For every fibre B_a and every cover s: T ->> B_a (|T| <= |B_a| + extra),
    some a' over the same point has a cover B_a' ->> B_a over Y factoring through s."""
    g, q, p = span.g, span.q, span.p
    for a in g.cod:
        Ba = g.fiber(a)
        for n in range(len(Ba), len(Ba) + extra + 1):
            T = core.std(n)
            for s in core.surjections(T, core.obj(Ba)):
                if not _refined(span, a, s):
                    return False, {"a": a, "cover": s}
    return True, None


def _refined(span: CollectionSpan, a, s: FinMap) -> bool:
    g, q, p = span.g, span.q, span.p
    Ba = g.fiber(a)
    for a2 in g.cod:
        if p(a2) != p(a):
            continue
        Ba2 = g.fiber(a2)
        for vals in itertools.product(Ba, repeat=len(Ba2)):
            c = dict(zip(Ba2, vals))
            if set(vals) != set(Ba) or any(q(c[b]) != q(b) for b in Ba2):
                continue
            # factoring through s: every value needs a preimage under s
            if all(s.fiber(v) for v in vals):
                return True
    return False


def span_decode(span: CollectionSpan, w: WTree, memo: dict) -> Optional[WTree]:
    """The W_f tree represented by w, or None when w is not reflexive."""
    if w in memo:
        return memo[w]
    kids = {}
    result = None
    ok = True
    for b, c in w.children:
        d = span_decode(span, c, memo)
        if d is None:
            ok = False
            break
        y = span.q(b)
        if y in kids and kids[y] is not d:
            ok = False
            break
        kids[y] = d
    if ok:
        x = span.p(w.label)
        if set(kids) == set(span.f.fiber(x)):
            result = sup(x, kids)
    memo[w] = result
    return result


@dataclass
class SpanQuotient:
    reflexive: list          # reflexive W_g trees
    classes: dict            # W_f tree -> list of W_g representatives
    direct: list             # wtype_enum(f, depth)

    @property
    def in_bijection(self) -> bool:
        return sorted(self.classes, key=lambda t: t.key) == self.direct

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.classes), len(self.direct)


def wtype_via_span(span: CollectionSpan, depth: int, method: str = "decode") -> SpanQuotient:
    """W_f at height <= depth as the reflexive W_g trees modulo the labelled bisimulation."""
    if not core.is_covering_square(span.square).ok:
        raise ValueError("span square is not covering")
    ok, bad = check_collection_span(span, extra=0)
    if not ok:
        raise ValueError(f"not a collection span: {bad}")
    gsig = PolySig(span.g)
    trees = wtype_enum(gsig, depth)
    memo: dict = {}
    labels = (span.p, span.q)
    if method == "decode":
        refl = [w for w in trees if span_decode(span, w, memo) is not None]
        classes: dict = {}
        for w in refl:
            classes.setdefault(span_decode(span, w, memo), []).append(w)
    elif method == "bisim":
        refl = [w for w in trees if bisimilar(w, w, labels)]
        reps: list = []
        groups: list = []
        for w in refl:
            for i, r in enumerate(reps):
                if bisimilar(w, r, labels):
                    groups[i].append(w)
                    break
            else:
                reps.append(w)
                groups.append([w])
        classes = {span_decode(span, grp[0], memo): grp for grp in groups}
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpanQuotient(refl, classes, wtype_enum(PolySig(span.f), depth))


# -- the generic power class quotient --------------------------------------------

@dataclass
class PPiQuotient:
    carrier: FinObj      # P_pi(X) = {(u, t : E_u -> X)}
    quotient: FinObj     # classes under equality of images, named by the image
    tau: FinMap          # P_pi(X) -> power class of X
    power: FinObj

    @property
    def coincides(self) -> bool:
        return set(self.quotient.elements) == set(self.power.elements) and self.tau.is_surjective()


def p_pi_quotient(X: FinObj, rep, cls=None) -> PPiQuotient:
    from .classes import MapClass
    from .power import power_class

    if cls is None:
        cls = MapClass.fiber_bound(max((len(rep.fiber(u)) for u in rep.U), default=0))
    carrier = core.obj((u, t) for u in rep.U for t in itertools.product(X.elements, repeat=len(rep.fiber(u))))
    quotient = core.obj({frozenset(t) for _, t in carrier})
    power = power_class(X, cls).object
    tau = FinMap.from_fn(carrier, power, lambda ut: frozenset(ut[1]))
    return PPiQuotient(carrier, quotient, tau, power)
