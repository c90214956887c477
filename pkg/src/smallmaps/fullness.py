"""Multi-valued sections and the fullness axiom over finite sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import core
from .checks import FAIL, INCONCLUSIVE, PASS, AxiomReport
from .classes import MapClass
from .core import FinMap, FinObj, Subobject


def mvs_enumerate(phi: FinMap) -> list[Subobject]:
    """All P <= B whose composite P -> A is onto, ordered by size then canonically."""
    A = set(phi.cod.elements)
    out = []
    for S in core.all_subobjects(phi.dom):
        if {phi(b) for b in S.carrier} == A:
            out.append(S)
    return out


def minimal_mvs(phi: FinMap) -> list[Subobject]:
    all_mvs = mvs_enumerate(phi)
    return [P for P in all_mvs if not any(Q.carrier < P.carrier for Q in all_mvs)]


def _restrict(phi: FinMap, a: FinMap, x) -> FinMap:
    """phi restricted to the part lying over x in X."""
    A_x = core.obj(a.fiber(x))
    B_x = core.obj(b for b in phi.dom if phi(b) in A_x)
    return FinMap.from_fn(B_x, A_x, phi)


@dataclass(frozen=True)
class FullnessWitness:
    q: FinMap  # cover X' -> X
    y: FinMap  # Y -> X'
    P: dict    # element of Y -> carrier of its mvs (a subset of B)

    def to_json(self):
        from .checks import to_jsonable
        return {"q": to_jsonable(self.q), "y": to_jsonable(self.y),
                "P": {repr(k): to_jsonable(v) for k, v in self.P.items()}}


def _displayed(P: frozenset, phi_x: FinMap, cls: MapClass) -> bool:
    sub = FinMap.from_fn(core.obj(P), phi_x.cod, phi_x)
    return cls.contains(sub)


def canonical_witness(phi: FinMap, a: FinMap, cls: MapClass) -> FullnessWitness:
    X = a.cod
    elems, P = [], {}
    for x in X:
        for i, m in enumerate(minimal_mvs(_restrict(phi, a, x))):
            elems.append((x, i))
            P[(x, i)] = m.carrier
    Y = core.obj(elems)
    return FullnessWitness(core.identity(X), FinMap.from_fn(Y, X, lambda e: e[0]), P)


def _generic(phi: FinMap, a: FinMap, cls: MapClass, w: FullnessWitness, max_z: int) -> tuple[int, object]:
    """Check the generic property against every z: Z -> X' with |Z| <= max_z
    and every displayed mvs Q over Z.  Returns (cases checked, failure or None)."""
    Xp = w.y.cod
    restricted = {x: _restrict(phi, a, x) for x in a.cod}
    mvss = {x: [m.carrier for m in mvs_enumerate(restricted[x])
                if _displayed(m.carrier, restricted[x], cls)] for x in a.cod}
    checked = 0
    for n in range(max_z + 1):
        Z = core.std(n)
        for z in core.all_maps(Z, Xp):
            xs = [w.q(z(v)) for v in Z]
            for Q in itertools.product(*(mvss[x] for x in xs)):
                checked += 1
                # U = {(v, m) : y(m) = z(v), P_m <= Q_v}, k and l the projections
                U = [(v, m) for v, Qv in zip(Z, Q) for m in w.y.fiber(z(v)) if w.P[m] <= Qv]
                covered = {v for v, _ in U}
                if covered != set(Z.elements):
                    missing = next(v for v in Z if v not in covered)
                    return checked, {"z": z, "Q": dict(zip(Z, Q)), "uncovered": missing}
    return checked, None


def check_fullness(phi: FinMap, a: FinMap, cls: MapClass, max_z: int = 2) -> AxiomReport:
    """Fullness for phi: B -> A over X (a: A -> X) with the canonical generic family."""
    if a.dom != phi.cod:
        raise ValueError("phi must land in the domain of the structure map A -> X")
    if not cls.contains(phi) or not cls.contains(a):
        raise ValueError("fullness is only asked of maps in the class")
    w = canonical_witness(phi, a, cls)
    if not w.y.dom.elements and any(a.fiber(x) for x in a.cod):
        note = "no mvs exists over some point; the generic condition is vacuous with Y empty there"
    else:
        note = ""
    if not cls.contains(w.y):
        # any generic family needs, over each point of X', one element per
        # minimal mvs (take Z = 1 and Q each minimal mvs in turn)
        worst = max(a.cod, key=lambda x: len(w.y.fiber(x)))
        need = len(w.y.fiber(worst))
        return AxiomReport("F", FAIL, counterexample={
            "point": worst, "minimal_mvs_count": need,
            "reason": f"every generic family has at least {need} members over this point, "
                      f"but {cls} does not admit such a fibre"})
    for m, carrier in w.P.items():
        x = m[0]
        if not _displayed(carrier, _restrict(phi, a, x), cls):
            return AxiomReport("F", INCONCLUSIVE, witness=w,
                               note="canonical family is not displayed; no other search implemented")
    checked, failure = _generic(phi, a, cls, w, max_z)
    if failure is not None:
        return AxiomReport("F", FAIL, counterexample=failure, witness=w, checked=checked)
    return AxiomReport("F", PASS, witness=w, checked=checked,
                       note=(note + f" generic property verified for all |Z| <= {max_z}").strip())
