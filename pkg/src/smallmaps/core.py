"""Finite sets as a positive Heyting category.

Objects are canonically ordered finite sets of hashable atoms, morphisms are
tabulated total functions.  Everything is immutable; limits are chosen
(pullback carriers are literal pairs, sums are tagged) so constructions are
strictly functorial within a session.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple


def sort_key(x) -> tuple:
    """Total order on the atoms we allow: ints, strings, tuples, frozensets."""
    if isinstance(x, int):
        return (0, int(x))
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(e) for e in x))
    if isinstance(x, frozenset):
        return (3, len(x), tuple(sorted(sort_key(e) for e in x)))
    key = getattr(x, "sort_key", None)
    if key is not None:
        return (4, key())
    raise TypeError(f"unsupported atom {x!r}")


def canonical(elements: Iterable) -> tuple:
    return tuple(sorted(elements, key=sort_key))


@dataclass(frozen=True)
class FinObj:
    elements: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        elems = tuple(self.elements)
        if len(set(elems)) != len(elems):
            raise ValueError(f"duplicate elements in {elems!r}")
        object.__setattr__(self, "elements", canonical(elems))

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        label = f"{self.name}=" if self.name else ""
        return f"{label}{{{', '.join(map(repr, self.elements))}}}"


def obj(elements: Iterable, name: str = "") -> FinObj:
    return FinObj(tuple(elements), name)


def std(n: int) -> FinObj:
    """The standard n-element object {0, ..., n-1}."""
    return FinObj(tuple(range(n)), str(n))


EMPTY = std(0)
ONE = std(1)


@dataclass(frozen=True)
class FinMap:
    dom: FinObj
    cod: FinObj
    images: tuple  # aligned with dom.elements

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != len(self.dom):
            raise ValueError("table is not total on the domain")
        for y in images:
            if y not in self.cod:
                raise ValueError(f"value {y!r} is not in the codomain")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_fn(cls, dom: FinObj, cod: FinObj, fn: Callable) -> FinMap:
        return cls(dom, cod, tuple(fn(x) for x in dom.elements))

    @classmethod
    def from_dict(cls, dom: FinObj, cod: FinObj, table: dict) -> FinMap:
        missing = [x for x in dom if x not in table]
        if missing:
            raise ValueError(f"table is not total: missing {missing!r}")
        return cls(dom, cod, tuple(table[x] for x in dom.elements))

    def __call__(self, x):
        return self.images[self.dom.index[x]]

    @property
    def graph(self) -> tuple:
        return tuple(zip(self.dom.elements, self.images))

    @cached_property
    def fibers(self) -> dict:
        out = {y: [] for y in self.cod}
        for x, y in zip(self.dom.elements, self.images):
            out[y].append(x)
        return {y: tuple(xs) for y, xs in out.items()}

    def fiber(self, y) -> tuple:
        return self.fibers[y]

    @property
    def profile(self) -> tuple:
        """Sorted fiber sizes; two maps are isomorphic arrows iff profiles agree."""
        return tuple(sorted(len(xs) for xs in self.fibers.values()))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return len(set(self.images)) == len(self.cod)

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        pairs = ", ".join(f"{x!r}->{y!r}" for x, y in self.graph)
        return f"FinMap({self.dom!r} -> {self.cod!r}: {pairs})"


def identity(X: FinObj) -> FinMap:
    return FinMap(X, X, X.elements)


def compose(g: FinMap, f: FinMap) -> FinMap:
    """g after f."""
    if f.cod != g.dom:
        raise ValueError("maps are not composable")
    return FinMap(f.dom, g.cod, tuple(g(y) for y in f.images))


def bang(X: FinObj) -> FinMap:
    return FinMap(X, ONE, (0,) * len(X))


def from_empty(X: FinObj) -> FinMap:
    return FinMap(EMPTY, X, ())


def inclusion(sub: Iterable, X: FinObj) -> FinMap:
    S = obj(sub)
    return FinMap(S, X, S.elements)


def all_maps(X: FinObj, Y: FinObj) -> Iterator[FinMap]:
    for images in itertools.product(Y.elements, repeat=len(X)):
        yield FinMap(X, Y, images)


def surjections(X: FinObj, Y: FinObj) -> Iterator[FinMap]:
    return (f for f in all_maps(X, Y) if f.is_surjective())


def map_with_profile(sizes: Iterable[int]) -> FinMap:
    """A map onto {0..n-1} whose fiber over i has sizes[i] elements."""
    sizes = list(sizes)
    dom = obj((i, j) for i, s in enumerate(sizes) for j in range(s))
    return FinMap.from_fn(dom, std(len(sizes)), lambda e: e[0])


# -- limits -----------------------------------------------------------------

def product(X: FinObj, Y: FinObj) -> tuple[FinObj, FinMap, FinMap]:
    P = obj(itertools.product(X.elements, Y.elements))
    return P, FinMap.from_fn(P, X, lambda p: p[0]), FinMap.from_fn(P, Y, lambda p: p[1])


def pullback(f: FinMap, g: FinMap) -> tuple[FinObj, FinMap, FinMap]:
    """P = {(b, c) : f(b) = g(c)} with its two projections."""
    if f.cod != g.cod:
        raise ValueError("pullback of maps with different codomains")
    P = obj((b, c) for b in f.dom for c in g.fiber(f(b)))
    return P, FinMap.from_fn(P, f.dom, lambda p: p[0]), FinMap.from_fn(P, g.dom, lambda p: p[1])


def pair_into(P: FinObj, u: FinMap, v: FinMap) -> FinMap:
    """The map <u, v> into a chosen pullback/product carrier P of pairs."""
    if u.dom != v.dom:
        raise ValueError("pairing maps with different domains")
    return FinMap.from_fn(u.dom, P, lambda a: (u(a), v(a)))


def diagonal(X: FinObj) -> FinMap:
    P, _, _ = product(X, X)
    return FinMap.from_fn(X, P, lambda x: (x, x))


def image_factor(f: FinMap) -> tuple[FinMap, FinMap]:
    """(cover, mono) with mono's domain the range of f as a subset of f.cod."""
    im = obj(set(f.images))
    return FinMap(f.dom, im, f.images), FinMap(im, f.cod, im.elements)


# -- sums -------------------------------------------------------------------

class Sum(NamedTuple):
    obj: FinObj
    inl: FinMap
    inr: FinMap

    def copair(self, f: FinMap, g: FinMap) -> FinMap:
        if f.dom != self.inl.dom or g.dom != self.inr.dom:
            raise ValueError("copairing maps with the wrong domains")
        if f.cod != g.cod:
            raise ValueError("copairing maps with different codomains")
        return FinMap.from_fn(self.obj, f.cod, lambda t: f(t[1]) if t[0] == 0 else g(t[1]))


def sums(X: FinObj, Y: FinObj) -> Sum:
    S = obj([(0, x) for x in X] + [(1, y) for y in Y])
    return Sum(S, FinMap.from_fn(X, S, lambda x: (0, x)), FinMap.from_fn(Y, S, lambda y: (1, y)))


def sum_maps(f: FinMap, g: FinMap) -> FinMap:
    src, tgt = sums(f.dom, g.dom), sums(f.cod, g.cod)
    return src.copair(compose(tgt.inl, f), compose(tgt.inr, g))


def codiagonal(X: FinObj) -> FinMap:
    s = sums(X, X)
    return s.copair(identity(X), identity(X))


# -- subobjects -------------------------------------------------------------

@dataclass(frozen=True)
class Subobject:
    ambient: FinObj
    carrier: frozenset

    def __post_init__(self):
        carrier = frozenset(self.carrier)
        if not carrier <= set(self.ambient.elements):
            raise ValueError("carrier is not contained in the ambient object")
        object.__setattr__(self, "carrier", carrier)

    @property
    def elements(self) -> tuple:
        return canonical(self.carrier)

    def inclusion(self) -> FinMap:
        return inclusion(self.carrier, self.ambient)

    def __le__(self, other: Subobject) -> bool:
        _same_ambient(self, other)
        return self.carrier <= other.carrier

    def __contains__(self, x) -> bool:
        return x in self.carrier

    def __len__(self) -> int:
        return len(self.carrier)

    def __repr__(self) -> str:
        return f"Sub({', '.join(map(repr, self.elements))} in {self.ambient!r})"


def _same_ambient(*subs: Subobject) -> None:
    if len({s.ambient for s in subs}) > 1:
        raise ValueError("subobjects of different objects")


def top(X: FinObj) -> Subobject:
    return Subobject(X, frozenset(X.elements))


def bottom(X: FinObj) -> Subobject:
    return Subobject(X, frozenset())


def meet(S: Subobject, T: Subobject) -> Subobject:
    _same_ambient(S, T)
    return Subobject(S.ambient, S.carrier & T.carrier)


def join(S: Subobject, T: Subobject) -> Subobject:
    _same_ambient(S, T)
    return Subobject(S.ambient, S.carrier | T.carrier)


def implication(S: Subobject, T: Subobject) -> Subobject:
    _same_ambient(S, T)
    return Subobject(S.ambient, frozenset(x for x in S.ambient if x not in S.carrier or x in T.carrier))


def all_subobjects(X: FinObj) -> list[Subobject]:
    out = []
    for r in range(len(X) + 1):
        out.extend(Subobject(X, frozenset(c)) for c in itertools.combinations(X.elements, r))
    return out


def pull(f: FinMap, S: Subobject) -> Subobject:
    if S.ambient != f.cod:
        raise ValueError("subobject does not live over the codomain")
    return Subobject(f.dom, frozenset(x for x in f.dom if f(x) in S.carrier))


def exists(f: FinMap, S: Subobject) -> Subobject:
    if S.ambient != f.dom:
        raise ValueError("subobject does not live over the domain")
    return Subobject(f.cod, frozenset(f(x) for x in S.carrier))


def forall(f: FinMap, S: Subobject) -> Subobject:
    if S.ambient != f.dom:
        raise ValueError("subobject does not live over the domain")
    return Subobject(f.cod, frozenset(y for y in f.cod if set(f.fiber(y)) <= S.carrier))


@dataclass(frozen=True)
class SubOps:
    """Heyting structure on Sub(X) together with the quantifiers along f: Y -> X."""

    X: FinObj
    f: FinMap

    @property
    def top(self) -> Subobject:
        return top(self.X)

    @property
    def bottom(self) -> Subobject:
        return bottom(self.X)

    meet = staticmethod(meet)
    join = staticmethod(join)
    implication = staticmethod(implication)

    def pull_f(self, S: Subobject) -> Subobject:
        return pull(self.f, S)

    def exists_f(self, S: Subobject) -> Subobject:
        return exists(self.f, S)

    def forall_f(self, S: Subobject) -> Subobject:
        return forall(self.f, S)


def sub_ops(X: FinObj, f: FinMap) -> SubOps:
    if f.cod != X:
        raise ValueError("f must land in X")
    return SubOps(X, f)


# -- squares ----------------------------------------------------------------

@dataclass(frozen=True)
class Square:
    """A commuting square

        A --top--> B
        |          |
       left      right
        v          v
        C -bottom-> D
    """

    top: FinMap
    bottom: FinMap
    left: FinMap
    right: FinMap

    def __post_init__(self):
        if (self.top.dom != self.left.dom or self.top.cod != self.right.dom
                or self.left.cod != self.bottom.dom or self.bottom.cod != self.right.cod):
            raise ValueError("square edges do not match up")
        if compose(self.right, self.top) != compose(self.bottom, self.left):
            raise ValueError("square does not commute")


class Verdict(NamedTuple):
    ok: bool
    quasi_pullback: bool
    witness: object = None


def comparison(s: Square) -> tuple[FinObj, FinMap]:
    P, _, _ = pullback(s.bottom, s.right)
    return P, pair_into(P, s.left, s.top)


def is_covering_square(s: Square) -> Verdict:
    """Quasi-pullback: A -> C x_D B is onto.  Covering: also bottom onto.

    On failure the witness is an element of the pullback that is not hit, or
    an element of D missed by the bottom map.
    """
    P, cmp = comparison(s)
    hit = set(cmp.images)
    for p in P:
        if p not in hit:
            return Verdict(False, False, p)
    missed = [d for d in s.bottom.cod if not s.bottom.fiber(d)]
    if missed:
        return Verdict(False, True, missed[0])
    return Verdict(True, True, None)


def is_pullback(s: Square) -> bool:
    _, cmp = comparison(s)
    return cmp.is_iso()


def identity_square(f: FinMap) -> Square:
    return Square(identity(f.dom), identity(f.cod), f, f)


def pullback_square(f: FinMap, g: FinMap) -> Square:
    """The chosen pullback of f: B -> A along g: C -> A, with f on the right."""
    P, pf, pg = pullback(f, g)
    return Square(top=pf, bottom=g, left=pg, right=f)


# -- exponentials and dependent products -------------------------------------

def pi(f: FinMap, g: FinMap) -> FinMap:
    """Pi_f(g) -> f.cod for f: Y -> X and g: Z -> Y.

    The fibre over x is the set of sections of g over f^{-1}(x); a section is
    stored as the tuple of its values along the sorted fibre.
    """
    if g.cod != f.dom:
        raise ValueError("g must live over the domain of f")
    elems = []
    for x in f.cod:
        fiber = f.fiber(x)
        for values in itertools.product(*(g.fiber(y) for y in fiber)):
            elems.append((x, values))
    P = obj(elems)
    return FinMap.from_fn(P, f.cod, lambda e: e[0])


def pi_eval(f: FinMap, g: FinMap) -> FinMap:
    """Evaluation f*(Pi_f g) -> Z over Y."""
    p = pi(f, g)
    P, _, _ = pullback(p, f)
    return FinMap.from_fn(P, g.dom, lambda e: e[0][1][f.fiber(e[0][0]).index(e[1])])


def exponential(X: FinObj, A: FinObj) -> FinObj:
    """X^A as Pi along A -> 1 of the projection A x X -> A."""
    P, pa, _ = product(A, X)
    return pi(bang(A), pa).dom


def as_function(section: tuple, A: FinObj) -> dict:
    """Decode an element of exponential(X, A) into a dict A -> X."""
    _, values = section
    return {a: v[1] for a, v in zip(A.elements, values)}


# -- truth values -----------------------------------------------------------

@dataclass(frozen=True)
class TruthObj:
    obj: FinObj = FinObj((False, True), "Omega_b")
    top: bool = True
    bottom: bool = False


OMEGA = TruthObj()


def eq_classifier(X: FinObj) -> FinMap:
    P, _, _ = product(X, X)
    return FinMap.from_fn(P, OMEGA.obj, lambda p: p[0] == p[1])


def classified(chi: FinMap) -> Subobject:
    return pull(chi, Subobject(OMEGA.obj, frozenset({OMEGA.top})))


# -- scope ------------------------------------------------------------------

@dataclass(frozen=True)
class Scope:
    """Enumeration bound for exhaustive checks: one object per cardinality."""

    max_size: int = 3

    def objects(self) -> list[FinObj]:
        return [std(n) for n in range(self.max_size + 1)]

    def maps(self) -> Iterator[FinMap]:
        for X in self.objects():
            for Y in self.objects():
                yield from all_maps(X, Y)


def atoms_of(X: FinObj) -> tuple[Hashable, ...]:
    return X.elements
