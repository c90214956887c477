"""Hereditarily finite sets, hash-consed.

Every HFSet is interned, so structural equality is object identity and
hashing is by id.  Children are kept sorted under the total order
(rank, number of children, children lexicographically).
"""
from __future__ import annotations

import itertools
import threading
from typing import Iterable, Iterator


class HFSet:
    __slots__ = ("children", "rank", "key", "_members", "__weakref__")

    _table: dict = {}
    _lock = threading.Lock()

    def __new__(cls, *a, **kw):
        raise TypeError("use HFSet.make / Int to build sets")

    @classmethod
    def _intern(cls, children: tuple) -> HFSet:
        # children must be sorted and duplicate-free
        found = cls._table.get(children)
        if found is not None:
            return found
        with cls._lock:
            found = cls._table.get(children)
            if found is not None:
                return found
            s = object.__new__(cls)
            s.children = children
            s.rank = 1 + max((c.rank for c in children), default=-1)
            s.key = (s.rank, len(children), tuple(c.key for c in children))
            s._members = None
            cls._table[children] = s
            return s

    @classmethod
    def make(cls, elements: Iterable[HFSet]) -> HFSet:
        uniq = {id(e): e for e in elements}
        return cls._intern(tuple(sorted(uniq.values(), key=lambda e: e.key)))

    @classmethod
    def from_sorted(cls, elements: tuple) -> HFSet:
        """Trusted constructor: `elements` is already sorted and duplicate-free."""
        return cls._intern(tuple(elements))

    # identity semantics: interning makes these structural
    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __lt__(self, other: HFSet) -> bool:
        return self.key < other.key

    def __le__(self, other: HFSet) -> bool:
        return self.key <= other.key

    def sort_key(self):
        return self.key

    @property
    def members(self) -> frozenset:
        if self._members is None:
            self._members = frozenset(self.children)
        return self._members

    def __contains__(self, x: HFSet) -> bool:
        return x in self.members

    def __iter__(self) -> Iterator[HFSet]:
        return iter(self.children)

    def __len__(self) -> int:
        return len(self.children)

    def __repr__(self) -> str:
        return show(self)

    def __reduce__(self):
        return (HFSet.make, (list(self.children),))


def show(x: HFSet) -> str:
    return "{" + ",".join(show(c) for c in x.children) + "}"


EMPTY = HFSet.from_sorted(())


def empty() -> HFSet:
    return EMPTY


def Int(elements: Iterable[HFSet]) -> HFSet:
    return HFSet.make(elements)


def Ext(v: HFSet) -> frozenset:
    return v.members


def eps(x: HFSet, y: HFSet) -> bool:
    return x in y.members


def singleton(x: HFSet) -> HFSet:
    return HFSet.from_sorted((x,))


def pair(x: HFSet, y: HFSet) -> HFSet:
    return HFSet.make((x, y))


def union_of(x: HFSet) -> HFSet:
    return HFSet.make(z for y in x.children for z in y.children)


def union2(x: HFSet, y: HFSet) -> HFSet:
    return HFSet.make(itertools.chain(x.children, y.children))


def succ(x: HFSet) -> HFSet:
    return HFSet.make(x.children + (x,))


def rank(x: HFSet) -> int:
    return x.rank


def ordinal(n: int) -> HFSet:
    x = EMPTY
    for _ in range(n):
        x = succ(x)
    return x


def subset(x: HFSet, y: HFSet) -> bool:
    return x.members <= y.members


def kpair(x: HFSet, y: HFSet) -> HFSet:
    """Kuratowski pair {{x}, {x, y}}."""
    return pair(singleton(x), pair(x, y))


def unpair(p: HFSet) -> tuple[HFSet, HFSet]:
    kids = p.children
    if len(kids) == 1:
        (only,) = kids
        if len(only) != 1:
            raise ValueError("not a Kuratowski pair")
        return only.children[0], only.children[0]
    if len(kids) != 2:
        raise ValueError("not a Kuratowski pair")
    small, big = sorted(kids, key=len)
    if len(small) != 1 or len(big) != 2 or small.children[0] not in big:
        raise ValueError("not a Kuratowski pair")
    x = small.children[0]
    y = big.children[0] if big.children[1] is x else big.children[1]
    return x, y


def encode_function(table: dict) -> HFSet:
    return HFSet.make(kpair(x, y) for x, y in table.items())


def decode_function(f: HFSet) -> dict:
    out = {}
    for p in f.children:
        x, y = unpair(p)
        if x in out and out[x] is not y:
            raise ValueError("relation is not single-valued")
        out[x] = y
    return out


def transitive(x: HFSet) -> bool:
    return all(c.members <= x.members for c in x.children)


def transitive_closure(x: HFSet) -> frozenset:
    seen, stack = set(), list(x.children)
    while stack:
        y = stack.pop()
        if y not in seen:
            seen.add(y)
            stack.extend(y.children)
    return frozenset(seen)


# -- parsing the brace notation -------------------------------------------------

def parse_literal(text: str, start: int = 0) -> tuple[HFSet, int]:
    """Parse `{...}` at text[start:]; returns the set and the index after it."""
    i = start

    def skip(i):
        while i < len(text) and text[i].isspace():
            i += 1
        return i

    def parse(i):
        i = skip(i)
        if i >= len(text) or text[i] != "{":
            raise SyntaxError(f"expected '{{' at position {i}")
        i = skip(i + 1)
        kids = []
        if i < len(text) and text[i] == "}":
            return EMPTY, i + 1
        while True:
            child, i = parse(i)
            kids.append(child)
            i = skip(i)
            if i < len(text) and text[i] == ",":
                i += 1
                continue
            if i < len(text) and text[i] == "}":
                return HFSet.make(kids), i + 1
            raise SyntaxError(f"expected ',' or '}}' at position {i}")

    return parse(i)


def hf(text: str) -> HFSet:
    x, end = parse_literal(text)
    if text[end:].strip():
        raise SyntaxError(f"trailing input at position {end}")
    return x


# -- universes ------------------------------------------------------------------

_UNIVERSES: list[tuple] = [()]
_ULOCK = threading.Lock()


def universe(n: int) -> tuple:
    """V_n, the sets of rank < n, in canonical order.  V_0 = {}, V_{i+1} = P(V_i)."""
    if n < 0:
        raise ValueError("rank bound must be non-negative")
    with _ULOCK:
        while len(_UNIVERSES) <= n:
            prev = _UNIVERSES[-1]
            nxt = []
            # combinations of a sorted list are sorted; group by size keeps
            # the (rank, size, lexicographic) order within each rank
            for r in range(len(prev) + 1):
                for combo in itertools.combinations(prev, r):
                    nxt.append(HFSet.from_sorted(combo))
            nxt.sort(key=lambda s: s.key)
            _UNIVERSES.append(tuple(nxt))
        return _UNIVERSES[n]


def universe_by_trees(n: int) -> tuple:
    """Oracle for `universe`: all sets of rank < n via raw nested tuples."""
    level = [()]  # raw trees as sorted tuples of raw trees
    if n == 0:
        return ()
    for _ in range(n - 1):
        nxt = set()
        for r in range(len(level) + 1):
            for combo in itertools.combinations(level, r):
                nxt.add(tuple(sorted(combo)))
        level = sorted(nxt)

    def build(t):
        return HFSet.make(build(c) for c in t)

    return tuple(sorted((build(t) for t in level), key=lambda s: s.key))
