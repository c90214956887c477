"""Representations of classes of maps and the universal small map."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import core
from .checks import FAIL, PASS, AxiomReport
from .classes import MapClass
from .core import FinMap, FinObj, Scope, Square, is_covering_square, is_pullback


@dataclass(frozen=True)
class Representation:
    pi: FinMap  # E -> U

    @property
    def E(self) -> FinObj:
        return self.pi.dom

    @property
    def U(self) -> FinObj:
        return self.pi.cod

    def fiber(self, u) -> tuple:
        return self.pi.fiber(u)


def pi_k(k: int) -> Representation:
    """U = {0..k}, the fibre over m has m elements."""
    E = core.obj((m, j) for m in range(k + 1) for j in range(m))
    return Representation(FinMap.from_fn(E, core.std(k + 1), lambda e: e[0]))


def surjection_tables(src: tuple, tgt: tuple):
    """All surjections src ->> tgt as value tuples aligned with src."""
    for values in itertools.product(tgt, repeat=len(src)):
        if set(values) == set(tgt):
            yield values


@dataclass(frozen=True)
class RepresentationWitness:
    left: Square   # covering square: A -> Y over B -> X
    right: Square  # pullback square: A -> E over B -> U


def representation_witness(f: FinMap, rep: Representation):
    """B = {(x, u, s) : s a surjection E_u ->> Y_x}; A = B x_U E.

    Returns the witness, or None when some x receives no surjection (B -> X
    is then not a cover)."""
    elems = []
    for x in f.cod:
        Yx = f.fiber(x)
        for u in rep.U:
            for s in surjection_tables(rep.fiber(u), Yx):
                elems.append((x, u, s))
    B = core.obj(elems)
    bx = FinMap.from_fn(B, f.cod, lambda b: b[0])
    bu = FinMap.from_fn(B, rep.U, lambda b: b[1])
    if not bx.is_surjective():
        return None
    A, a_to_b, a_to_e = core.pullback(bu, rep.pi)
    # pullback(bu, pi) has carrier pairs (b, e)
    a_to_y = FinMap.from_fn(A, f.dom, lambda p: p[0][2][rep.fiber(p[0][1]).index(p[1])])
    left = Square(top=a_to_y, bottom=bx, left=a_to_b, right=f)
    right = Square(top=a_to_e, bottom=bu, left=a_to_b, right=rep.pi)
    return RepresentationWitness(left, right)


def check_representation(rep: Representation, cls: MapClass, scope: Scope = Scope()) -> AxiomReport:
    if not cls.contains(rep.pi):
        return AxiomReport("representation", FAIL, counterexample={"pi": rep.pi, "reason": "pi is not in the class"})
    count, sample = 0, None
    for f in scope.maps():
        if not cls.contains(f):
            continue
        count += 1
        w = representation_witness(f, rep)
        if w is None:
            return AxiomReport("representation", FAIL, counterexample={"f": f, "reason": "some fibre of f is "
                               "not the image of any fibre of pi"}, checked=count)
        if not is_covering_square(w.left).ok or not is_pullback(w.right):
            return AxiomReport("representation", FAIL, counterexample={"f": f, "reason": "witness squares invalid"},
                               checked=count)
        sample = sample or {"f": f, "left": w.left, "right": w.right}
    return AxiomReport("representation", PASS, witness=sample, checked=count)


# -- universal small map --------------------------------------------------------

def _equivalence_closed(pairs: frozenset, carrier: tuple) -> bool:
    rel = set(pairs)
    if any((x, x) not in rel for x in carrier):
        return False
    if any((y, x) not in rel for x, y in rel):
        return False
    return all((x, z) in rel for x, y in rel for y2, z in rel if y == y2)


def _classes(pairs: frozenset, carrier: tuple) -> tuple:
    blocks = []
    for x in carrier:
        block = tuple(y for y in carrier if (x, y) in pairs)
        if block not in blocks:
            blocks.append(block)
    return tuple(blocks)


def universal_small_map(rep: Representation, cls: MapClass | None = None) -> Representation:
    """pi': E' -> U' with U' = {(u, v, p : E_v -> E_u x E_u) : Im(p) an equivalence
    relation} and fibre E_u / Im(p) over (u, v, p)."""
    triples, fiber_elems = [], []
    for u in rep.U:
        Eu = rep.fiber(u)
        square = [(a, b) for a in Eu for b in Eu]
        for v in rep.U:
            Ev = rep.fiber(v)
            for p in itertools.product(square, repeat=len(Ev)):
                im = frozenset(p)
                if _equivalence_closed(im, Eu):
                    t = (u, v, p)
                    triples.append(t)
                    fiber_elems.extend((t, block) for block in _classes(im, Eu))
    U2 = core.obj(triples)
    E2 = core.obj(fiber_elems)
    pi2 = FinMap.from_fn(E2, U2, lambda e: e[0])
    if cls is not None and not cls.contains(pi2):
        raise ValueError("the universal small map does not lie in the class")
    return Representation(pi2)


def strict_pullback_witness(f: FinMap, rep: Representation):
    """B = {(x, u', sigma) : sigma a bijection E'_{u'} ~ Y_x}; both squares pullbacks."""
    elems = []
    for x in f.cod:
        Yx = f.fiber(x)
        for u in rep.U:
            Eu = rep.fiber(u)
            if len(Eu) != len(Yx):
                continue
            for perm in itertools.permutations(Yx):
                elems.append((x, u, perm))
    B = core.obj(elems)
    bx = FinMap.from_fn(B, f.cod, lambda b: b[0])
    bu = FinMap.from_fn(B, rep.U, lambda b: b[1])
    if not bx.is_surjective():
        return None
    A, a_to_b, a_to_e = core.pullback(bu, rep.pi)
    a_to_y = FinMap.from_fn(A, f.dom, lambda p: p[0][2][rep.fiber(p[0][1]).index(p[1])])
    left = Square(top=a_to_y, bottom=bx, left=a_to_b, right=f)
    right = Square(top=a_to_e, bottom=bu, left=a_to_b, right=rep.pi)
    return RepresentationWitness(left, right)


def check_universal(rep2: Representation, cls: MapClass, scope: Scope) -> AxiomReport:
    count, sample = 0, None
    for f in scope.maps():
        if not cls.contains(f):
            continue
        count += 1
        w = strict_pullback_witness(f, rep2)
        if w is None or not is_pullback(w.left) or not is_pullback(w.right) or not w.left.bottom.is_surjective():
            return AxiomReport("universal", FAIL, counterexample={"f": f}, checked=count)
        sample = sample or {"f": f, "left": w.left, "right": w.right}
    return AxiomReport("universal", PASS, witness=sample, checked=count)
