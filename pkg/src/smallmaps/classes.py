"""Classes of maps between finite sets.

Every class shipped here is invariant under isomorphism of arrows, so
membership is decided from the fibre-size profile of a map.  Covered classes
are decided in closed form where that is possible and otherwise by a bounded
search for a covering square; when the bound is hit we raise `Inconclusive`
rather than guess.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .core import FinMap, FinObj, Square, compose, is_covering_square, obj, std


class Inconclusive(Exception):
    """A bounded search ran out of budget without deciding the question."""


@dataclass(frozen=True)
class Local:
    """A fibrewise condition: every fibre size must lie in K.

    K is given by `zero` (whether empty fibres are allowed) and `sizes`, the
    admissible positive sizes, or None for "every positive size".
    """

    zero: bool
    sizes: Optional[frozenset]

    def admits(self, n: int) -> bool:
        if n == 0:
            return self.zero
        return self.sizes is None or n in self.sizes

    @property
    def bound(self) -> Optional[int]:
        if self.sizes is None:
            return None
        return max(self.sizes, default=0)

    def covered(self) -> Local:
        # a fibre is covered by some admissible fibre iff it is no larger than
        # the largest admissible size (and empty fibres need empty covers)
        if self.sizes is None:
            return self
        return Local(self.zero, frozenset(range(1, self.bound + 1)))


@dataclass(frozen=True)
class MapClass:
    kind: str
    param: tuple = ()
    base: Optional[MapClass] = None
    budget: int = 6

    # -- construction ------------------------------------------------------

    @classmethod
    def all_maps(cls) -> MapClass:
        return cls("all")

    @classmethod
    def fiber_bound(cls, k: int) -> MapClass:
        if k < 0:
            raise ValueError("fibre bound must be non-negative")
        return cls("fiber", (k,))

    @classmethod
    def monos(cls) -> MapClass:
        return cls("monos")

    @classmethod
    def isos(cls) -> MapClass:
        return cls("isos")

    @classmethod
    def proj_fiber(cls, sizes: Iterable[int]) -> MapClass:
        sizes = tuple(sorted(set(sizes)))
        if not sizes or min(sizes) < 0:
            raise ValueError("projfiber needs a non-empty set of sizes")
        return cls("projfiber", sizes)

    @classmethod
    def extensional(cls, maps: Iterable[FinMap]) -> MapClass:
        profiles = tuple(sorted({tuple(f.profile) for f in maps}))
        return cls("extensional", profiles)

    @classmethod
    def covered(cls, base: MapClass, budget: Optional[int] = None) -> MapClass:
        return cls("covered", (), base, base.budget if budget is None else budget)

    def with_budget(self, budget: int) -> MapClass:
        return MapClass(self.kind, self.param, self.base, budget)

    # -- structure ---------------------------------------------------------

    def local(self) -> Optional[Local]:
        if self.kind == "all":
            return Local(True, None)
        if self.kind == "fiber":
            return Local(True, frozenset(range(1, self.param[0] + 1)))
        if self.kind == "monos":
            return Local(True, frozenset({1}))
        if self.kind == "isos":
            return Local(False, frozenset({1}))
        if self.kind == "covered":
            inner = self.base.local()
            return None if inner is None else inner.covered()
        return None

    @property
    def is_local(self) -> bool:
        return self.local() is not None

    def fiber_bound_value(self) -> Optional[int]:
        loc = self.local()
        return None if loc is None else loc.bound

    def __str__(self) -> str:
        if self.kind == "fiber":
            return f"fiber:{self.param[0]}"
        if self.kind == "projfiber":
            return "projfiber:" + ",".join(map(str, self.param))
        if self.kind == "extensional":
            return "extensional[" + ";".join(",".join(map(str, p)) for p in self.param) + "]"
        if self.kind == "covered":
            return f"covered({self.base})"
        return self.kind

    # -- membership --------------------------------------------------------

    def admits_profile(self, profile: tuple) -> bool:
        """Decide membership for a map with the given multiset of fibre sizes."""
        profile = tuple(sorted(profile))
        loc = self.local()
        if loc is not None:
            return all(loc.admits(n) for n in profile)
        if self.kind == "projfiber":
            return len(set(profile)) <= 1 and (not profile or profile[0] in self.param)
        if self.kind == "extensional":
            return profile in self.param
        if self.kind == "covered":
            return covering_profile(profile, self.base, self.budget) is not None
        raise ValueError(f"unknown class kind {self.kind!r}")

    def contains(self, f: FinMap) -> bool:
        return self.admits_profile(f.profile)

    __contains__ = contains


# -- covering search ----------------------------------------------------------

def _compatible(z: int, y: int) -> bool:
    """Can a fibre of size z be mapped onto a fibre of size y?"""
    return z == 0 if y == 0 else z >= y


def _assign(target: tuple, cover: tuple) -> Optional[tuple]:
    """A surjective assignment of cover fibres onto target fibres.

    Returns h with h[i] = index into `target` such that each target index is
    hit and each cover fibre is compatible with its image, or None.
    """
    if not target:
        return () if not cover else None
    options = [[j for j, y in enumerate(target) if _compatible(z, y)] for z in cover]
    if any(not o for o in options):
        return None
    # match the target first (a target fibre of size y needs a distinct cover
    # fibre), then send the remaining cover fibres anywhere compatible
    order = sorted(range(len(target)), key=lambda j: -target[j])
    used: dict[int, int] = {}

    def match(pos: int) -> bool:
        if pos == len(order):
            return True
        j = order[pos]
        for i, opts in enumerate(options):
            if i not in used and j in opts:
                used[i] = j
                if match(pos + 1):
                    return True
                del used[i]
        return False

    if not match(0):
        return None
    return tuple(used.get(i, options[i][0]) for i in range(len(cover)))


def _candidate_profiles(base: MapClass, budget: int, target: tuple) -> Iterator[tuple]:
    if base.kind == "extensional":
        yield from base.param
        return
    if base.kind == "projfiber":
        for s in base.param:
            yield (s,) * max(len(target), 0)
        return
    top = max(budget, max(target, default=0))
    for n in range(len(target), budget + 1 if budget >= len(target) else len(target) + 1):
        for prof in itertools.combinations_with_replacement(range(top + 1), n):
            if base.admits_profile(prof):
                yield prof


def covering_profile(profile: tuple, base: MapClass, budget: int = 6) -> Optional[tuple]:
    """A profile of a `base` member covering maps of the given profile, and the assignment.

    Returns (cover_profile, assignment) or None when no witness exists.  Raises
    Inconclusive when the answer depends on objects beyond the budget.
    """
    profile = tuple(sorted(profile))
    loc = base.local()
    if loc is not None:
        if not all(loc.covered().admits(n) for n in profile):
            return None
        cover = []
        for y in profile:
            if y == 0:
                cover.append(0)
            elif loc.sizes is None or y in loc.sizes:
                cover.append(y)
            else:
                cover.append(min(s for s in loc.sizes if s >= y))
        return tuple(cover), tuple(range(len(profile)))
    if base.kind in ("projfiber", "extensional"):
        for cand in _candidate_profiles(base, budget, profile):
            h = _assign(profile, cand)
            if h is not None:
                return tuple(cand), h
        return None
    for cand in _candidate_profiles(base, budget, profile):
        h = _assign(profile, cand)
        if h is not None:
            return tuple(cand), h
    raise Inconclusive(f"no covering by {base} within budget {budget} for profile {profile}")


def find_covering(f: FinMap, base: MapClass, budget: int = 6) -> Optional[Square]:
    """An explicit covering square with a `base` member on the left and f on the right."""
    found = covering_profile(f.profile, base, budget)
    if found is None:
        return None
    cover_profile, assignment = found
    # the profile is sorted, so re-index it along f's codomain
    xs = sorted(f.cod.elements, key=lambda x: len(f.fiber(x)))
    B = std(len(cover_profile))
    Z = obj((b, j) for b, n in enumerate(cover_profile) for j in range(n))
    g = FinMap.from_fn(Z, B, lambda e: e[0])
    h = FinMap.from_fn(B, f.cod, lambda b: xs[assignment[b]])

    def top(e):
        b, j = e
        fiber = f.fiber(h(b))
        return fiber[min(j, len(fiber) - 1)]

    t = FinMap.from_fn(Z, f.dom, top)
    square = Square(top=t, bottom=h, left=g, right=f)
    verdict = is_covering_square(square)
    if not verdict.ok or not base.contains(g):
        raise AssertionError(f"constructed square is not a valid covering witness: {verdict}")
    return square


def covered_by(f: FinMap, base: MapClass, budget: int = 6) -> bool:
    return find_covering(f, base, budget) is not None


# -- parsing ----------------------------------------------------------------

_FIBER = re.compile(r"^fiber:(\d+)$")
_PROJ = re.compile(r"^projfiber:(\d+(?:,\d+)*)$")


def parse_class(text: str) -> MapClass:
    """Parse `fiber:<k>`, `monos`, `isos`, `all`, `projfiber:1,2`, `covered(<class>)`."""
    s = text.strip()
    if s == "all":
        return MapClass.all_maps()
    if s == "monos":
        return MapClass.monos()
    if s == "isos":
        return MapClass.isos()
    if m := _FIBER.match(s):
        return MapClass.fiber_bound(int(m.group(1)))
    if m := _PROJ.match(s):
        return MapClass.proj_fiber(int(v) for v in m.group(1).split(","))
    if s.startswith("covered(") and s.endswith(")"):
        return MapClass.covered(parse_class(s[len("covered("):-1]))
    raise ValueError(f"unknown class specification {text!r}")
