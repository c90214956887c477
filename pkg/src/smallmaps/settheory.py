"""The universe of hereditarily finite sets as a model of set theory.

V is built by collapsing well-founded trees along bisimulation; the axiom
checkers decide individual axiom instances in the truncation V_n.  Unbounded
quantifiers range over V_n only, and every report records that bound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import hf
from .checks import FAIL, PASS, to_jsonable
from .formula import (And, Eps, Exists, Forall, Formula, Implies, Var, evaluate,
                      free_vars, is_bounded, parse_formula, show)
from .hf import EMPTY, HFSet, Int
from .wtypes import PolySig, canonical_hf, wtype_enum


class ParamError(ValueError):
    """Parameters of the wrong shape for the requested axiom."""


@dataclass(frozen=True)
class AxiomInstanceReport:
    axiom: str
    n: int
    params: dict = field(default_factory=dict)
    verdict: str = PASS
    witness: object = None
    counterexample: object = None
    note: str = ""

    def __post_init__(self):
        if self.verdict == FAIL and self.counterexample is None:
            raise ValueError("a failing report must carry a counterexample")
        if self.verdict == PASS and self.witness is None:
            raise ValueError("a passing report must carry a witness")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        return {
            "id": self.axiom,
            "status": self.verdict,
            "rank_bound": self.n,
            "params": to_jsonable(self.params),
            "witness": to_jsonable(self.witness),
            "counterexample": to_jsonable(self.counterexample),
            "note": self.note,
        }


# -- building V -------------------------------------------------------------------

def _levels_to_sets(sizes: list[int], depth: int) -> list[HFSet]:
    level: list[HFSet] = [EMPTY] if 0 in sizes else []
    for _ in range(depth):
        found = set()
        for m in set(sizes):
            if m == 0:
                found.add(EMPTY)
                continue
            # images of maps from an m-element fibre: nonempty subsets of size <= m
            for r in range(1, min(m, len(level)) + 1):
                found.update(HFSet.make(c) for c in itertools.combinations(level, r))
        level = sorted(found, key=lambda s: s.key)
    return level


def build_v(rep, depth: int) -> list[HFSet]:
    """Canonical sets of all trees of height <= depth over rep.pi, built level by
    level: a node over u contributes the image of a map from its fibre."""
    sizes = [len(rep.fiber(u)) for u in rep.U]
    return _levels_to_sets(sizes, depth)


def build_v_by_trees(rep, depth: int) -> list[HFSet]:
    """Oracle for `build_v`: enumerate raw trees, then collapse them."""
    trees = wtype_enum(PolySig(rep.pi), depth)
    return sorted({canonical_hf(w) for w in trees}, key=lambda s: s.key)


def universe(n: int) -> tuple:
    return hf.universe(n)


def least_subalgebra(n: int) -> frozenset:
    """Least S <= V_n with Int(alpha) in S whenever alpha <= S and Int(alpha) in V_n."""
    S: set = set()
    while True:
        elems = sorted(S, key=lambda s: s.key)
        grown = set(S)
        for r in range(len(elems) + 1):
            for combo in itertools.combinations(elems, r):
                x = HFSet.from_sorted(combo)
                if x.rank < n:
                    grown.add(x)
        if grown == S:
            return frozenset(S)
        S = grown


# -- parameters ---------------------------------------------------------------------

def _as_set(value, name: str) -> HFSet:
    if isinstance(value, HFSet):
        return value
    if isinstance(value, str):
        try:
            return hf.hf(value)
        except SyntaxError as exc:
            raise ParamError(f"{name}: {exc}") from None
    raise ParamError(f"{name} must be a set, got {type(value).__name__}")


def _as_formula(value, name: str = "phi") -> Formula:
    if isinstance(value, str):
        return parse_formula(value)
    if isinstance(value, (And, Eps, Exists, Forall, Implies)) or hasattr(value, "__dataclass_fields__"):
        return value
    raise ParamError(f"{name} must be a formula")


def _env(params: Mapping, n: int) -> dict:
    env = {k: _as_set(v, k) for k, v in dict(params.get("env", {})).items()}
    for k, v in env.items():
        if v.rank >= n:
            raise ParamError(f"parameter {k} has rank {v.rank}, outside V_{n}")
    return env


def _fresh(phi: Formula, base: str, taken=()) -> str:
    names = _all_vars(phi) | set(taken)
    name = base
    while name in names:
        name += "'"
    return name


def _all_vars(phi) -> set:
    out = set()

    def walk(p):
        for f in getattr(p, "__dataclass_fields__", {}):
            v = getattr(p, f)
            if isinstance(v, Var):
                out.add(v.name)
            elif isinstance(v, str) and f == "var":
                out.add(v)
            elif hasattr(v, "__dataclass_fields__"):
                walk(v)
    walk(phi)
    return out


def _need_vars(phi: Formula, allowed: set, axiom: str):
    extra = free_vars(phi) - allowed
    if extra:
        raise ParamError(f"{axiom}: formula has free variable(s) {sorted(extra)} without a value")


# -- axiom instances ----------------------------------------------------------------

_EXT = parse_formula("forall z in a . eps(z, b) and forall z in b . eps(z, a) -> a = b")


def _extensionality(n, params):
    V = hf.universe(n)
    checked = 0
    for a in V:
        for b in V:
            checked += 1
            if not evaluate(_EXT, {"a": a, "b": b}, n):
                return dict(verdict=FAIL, counterexample={"a": a, "b": b})
    return dict(verdict=PASS, witness={"pairs_checked": checked})


def _empty(n, params):
    phi = parse_formula("forall y . not eps(y, e)")
    for e in hf.universe(n):
        if evaluate(phi, {"e": e}, n):
            return dict(verdict=PASS, witness=e)
    return dict(verdict=FAIL, counterexample={"reason": "V_0 has no elements"})


def _pairing(n, params):
    # the pair of two rank n-1 sets has rank n: it exists in V_{n+1}, not V_n
    phi = parse_formula("eps(x, z) and eps(y, z)")
    V = hf.universe(n)
    outside = 0
    for x in V:
        for y in V:
            z = hf.pair(x, y)
            if not evaluate(phi, {"x": x, "y": y, "z": z}, n + 1):
                return dict(verdict=FAIL, counterexample={"x": x, "y": y})
            outside += z.rank >= n
    return dict(verdict=PASS, witness={"pairs_checked": len(V) ** 2, "witnesses_outside_bound": outside},
                note=f"the pair witness lies in V_{n + 1}; {outside} pairs need it")


def _union(n, params):
    phi = parse_formula("forall y in x . forall w in y . eps(w, z)")
    for x in hf.universe(n):
        z = hf.union_of(x)
        if z.rank >= n or not evaluate(phi, {"x": x, "z": z}, n):
            return dict(verdict=FAIL, counterexample={"x": x})
    return dict(verdict=PASS, witness={"sets_checked": len(hf.universe(n))})


def _set_induction(n, params):
    phi = _as_formula(params.get("phi"))
    var = params.get("var", "x")
    env = _env(params, n)
    _need_vars(phi, set(env) | {var}, "set-induction")
    V = hf.universe(n)
    holds = {a for a in V if evaluate(phi, {**env, var: a}, n)}
    for a in V:
        if a not in holds and all(c in holds for c in a.children):
            # the hypothesis fails at a: the instance holds vacuously
            return dict(verdict=PASS, witness={"hypothesis_fails_at": a},
                        note="induction hypothesis fails, instance holds vacuously")
    missing = [a for a in V if a not in holds]
    if missing:
        return dict(verdict=FAIL, counterexample={"not_phi": missing[0]})
    return dict(verdict=PASS, witness={"phi_holds_on": len(V)})


def _separation(n, params, bounded_only: bool):
    axiom = "bounded-separation" if bounded_only else "full-separation"
    phi = _as_formula(params.get("phi"))
    if bounded_only and not is_bounded(phi):
        raise ParamError("bounded-separation needs a bounded formula")
    var = params.get("var", "x")
    a = _as_set(params.get("a"), "a")
    if a.rank >= n:
        raise ParamError(f"a has rank {a.rank}, outside V_{n}")
    env = _env(params, n)
    _need_vars(phi, set(env) | {var}, axiom)
    s = HFSet.make(x for x in a.children if evaluate(phi, {**env, var: x}, n))
    sv, av = _fresh(phi, "s", env), _fresh(phi, "a", env)
    x = Var(var)
    inside = And(Eps(x, Var(av)), phi)
    spec = Forall(var, None, And(Implies(Eps(x, Var(sv)), inside), Implies(inside, Eps(x, Var(sv)))))
    if not evaluate(spec, {**env, sv: s, av: a}, n):
        return dict(verdict=FAIL, counterexample={"a": a, "candidate": s})
    return dict(verdict=PASS, witness=s)


def _strong_collection(n, params):
    phi = _as_formula(params.get("phi"))
    xv, yv = params.get("var", "x"), params.get("var2", "y")
    a = _as_set(params.get("a"), "a")
    if a.rank >= n:
        raise ParamError(f"a has rank {a.rank}, outside V_{n}")
    env = _env(params, n)
    _need_vars(phi, set(env) | {xv, yv}, "strong-collection")
    V = hf.universe(n)
    chosen = []
    for x in a.children:
        least = next((y for y in V if evaluate(phi, {**env, xv: x, yv: y}, n)), None)
        if least is None:
            return dict(verdict=PASS, witness={"no_y_for": x},
                        note="hypothesis fails in V_n, instance holds vacuously")
        chosen.append(least)
    b = HFSet.make(chosen)
    av, bv = _fresh(phi, "a", env), _fresh(phi, "b", env)
    both = And(Forall(xv, Var(av), Exists(yv, Var(bv), phi)),
               Forall(yv, Var(bv), Exists(xv, Var(av), phi)))
    # b collects elements of V_n, so it lies in V_{n+1}
    if not evaluate(both, {**env, av: a, bv: b}, max(n, b.rank + 1)):
        return dict(verdict=FAIL, counterexample={"a": a, "candidate": b})
    note = f"bounding set lies in V_{n + 1}" if b.rank >= n else ""
    return dict(verdict=PASS, witness=b, note=note)


def _infinity(n, params):
    # an inductive set would contain every finite ordinal; none fits in V_n
    V = hf.universe(n)
    inductive = [I for I in V if EMPTY in I.members and all(hf.succ(x) in I.members for x in I.children)]
    chain = []
    k = EMPTY
    while k.rank < n:
        chain.append(k)
        k = hf.succ(k)
    if inductive:  # impossible for finite sets; kept as a genuine check
        return dict(verdict=PASS, witness=inductive[0])
    return dict(verdict=FAIL, counterexample={
        "inductive_sets_in_V_n": 0,
        "sets_checked": len(V),
        "successor_chain": chain,
        "chain_escapes_at": k,
    }, note="holds in no finite truncation: the successor chain leaves V_n")


def _power_set(n, params):
    x = _as_set(params.get("x"), "x")
    if x.rank > n - 2:
        raise ParamError(f"power-set needs rank(x) <= {n - 2} in V_{n}, got {x.rank}")
    subsets = [HFSet.from_sorted(c) for r in range(len(x) + 1)
               for c in itertools.combinations(x.children, r)]
    p = HFSet.make(subsets)
    phi = parse_formula("forall z . ((forall w in z . eps(w, x)) -> eps(z, p))")
    if not evaluate(phi, {"x": x, "p": p}, n) or not all(hf.subset(z, x) for z in p.children):
        return dict(verdict=FAIL, counterexample={"x": x, "candidate": p})
    return dict(verdict=PASS, witness=p)


def _fullness(n, params):
    f = _as_set(params.get("f"), "f")
    a = _as_set(params["a"], "a") if params.get("a") is not None else None
    z = fullness_set(f, a)
    ok, bad = verify_full_set(f, z, a)
    if not ok:
        return dict(verdict=FAIL, counterexample={"f": f, "z": z, "uncovered": bad})
    return dict(verdict=PASS, witness=z)


_AXIOMS = {
    "extensionality": _extensionality,
    "empty": _empty,
    "pairing": _pairing,
    "union": _union,
    "set-induction": _set_induction,
    "bounded-separation": lambda n, p: _separation(n, p, True),
    "full-separation": lambda n, p: _separation(n, p, False),
    "strong-collection": _strong_collection,
    "infinity": _infinity,
    "power-set": _power_set,
    "fullness": _fullness,
}
AXIOM_NAMES = tuple(_AXIOMS)


def check_axiom(name: str, n: int, params: Optional[Mapping] = None) -> AxiomInstanceReport:
    """Decide one axiom instance over V_n."""
    if name not in _AXIOMS:
        raise ParamError(f"unknown axiom {name!r}; expected one of {', '.join(AXIOM_NAMES)}")
    if n < 1:
        raise ParamError("rank bound must be at least 1")
    params = dict(params or {})
    out = _AXIOMS[name](n, params)
    shown = {k: (show(v) if hasattr(v, "__dataclass_fields__") else v) for k, v in params.items()}
    return AxiomInstanceReport(axiom=name, n=n, params=shown, **out)


# -- fullness at set level ------------------------------------------------------------

def _function_parts(f: HFSet, a: Optional[HFSet]) -> tuple[dict, HFSet]:
    try:
        table = hf.decode_function(f)
    except ValueError as exc:
        raise ParamError(f"f is not a function encoding: {exc}") from None
    if a is None:
        a = HFSet.make(table.values())
    elif not all(y in a.members for y in table.values()):
        raise ParamError("f takes values outside a")
    return table, a


def fullness_set(f: HFSet, a: Optional[HFSet] = None) -> HFSet:
    """The inclusion-minimal mvss of f : b -> a.  A minimal subset of b mapping
    onto a picks exactly one point in each fibre, so these are the transversals.
    The codomain defaults to the image of f."""
    table, a = _function_parts(f, a)
    fibres = [[x for x, y in table.items() if y is t] for t in a.children]
    return HFSet.make(HFSet.make(choice) for choice in itertools.product(*fibres))


def mvs_bruteforce(f: HFSet, a: Optional[HFSet] = None) -> list[HFSet]:
    table, a = _function_parts(f, a)
    dom = sorted(table, key=lambda s: s.key)
    out = []
    for r in range(len(dom) + 1):
        for c in itertools.combinations(dom, r):
            if {table[x] for x in c} == set(a.children):
                out.append(HFSet.from_sorted(c))
    return out


def verify_full_set(f: HFSet, z: HFSet, a: Optional[HFSet] = None) -> tuple[bool, object]:
    """z consists of mvss and every mvs contains a member of z (brute force)."""
    mvss = mvs_bruteforce(f, a)
    members = set(mvss)
    for c in z.children:
        if c not in members:
            return False, {"not_an_mvs": c}
    for x in mvss:
        if not any(hf.subset(c, x) for c in z.children):
            return False, x
    return True, None


# -- formula batteries ------------------------------------------------------------------

SEPARATION_BATTERY = (
    "eps(x, b)",
    "not eps(x, b)",
    "x = b",
    "exists z in x . z = z",
    "forall z in x . eps(z, b)",
    "eps(b, x)",
    "forall z in x . forall w in z . eps(w, x)",
    "exists z in b . eps(x, z)",
    "(eps(x, b) or x = b) -> exists z in x . eps(z, b)",
    "not exists z in x . exists w in z . w = w",
)

COLLECTION_BATTERY = (
    "y = x",
    "eps(x, y)",
    "forall z in x . eps(z, y)",
    "eps(y, x) or forall z in x . not z = z",
    "not y = x",
)

INDUCTION_BATTERY = (
    "not eps(x, x)",
    "forall z in x . not eps(x, z)",
    "exists z in x . z = z -> exists z in x . forall w in z . not eps(w, x)",
    "forall z in x . forall w in z . not w = x",
    "x = x",
)


def run_battery(n: int = 3) -> list[AxiomInstanceReport]:
    """The fixed battery: the plain axioms and every scheme instance over V_n."""
    V = hf.universe(n)
    reports = [check_axiom(name, n) for name in ("extensionality", "empty", "pairing", "union")]
    for text in SEPARATION_BATTERY:
        for a in V:
            for b in V:
                reports.append(check_axiom("bounded-separation", n, {"phi": text, "a": a, "env": {"b": b}}))
    for text in COLLECTION_BATTERY:
        for a in V:
            reports.append(check_axiom("strong-collection", n, {"phi": text, "a": a}))
    for text in INDUCTION_BATTERY:
        reports.append(check_axiom("set-induction", n, {"phi": text}))
    return reports
