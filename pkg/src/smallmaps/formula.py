"""Formulas of set theory with epsilon: parsing, printing and evaluation on V_n.

Grammar (loosest binding first):

    phi   ::= disj [ '->' phi ]                       (right associative)
    disj  ::= conj { 'or' conj }
    conj  ::= unary { 'and' unary }
    unary ::= 'not' unary
            | ('forall' | 'exists') var [ 'in' term ] '.' unary
            | 'eps' '(' term ',' term ')' | 'eq' '(' term ',' term ')'
            | term '=' term
            | '(' phi ')'
    term  ::= var | brace literal such as {} or {{},{{}}}

A quantifier binds as tightly as `not`: its body extends over one unary
formula, so `forall z in a . eps(z,b) and psi` is a conjunction.  Write
parentheses to quantify over a compound body.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from . import hf
from .hf import HFSet


class FormulaSyntaxError(SyntaxError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnboundVariable(NameError):
    pass


class RankError(ValueError):
    pass


# -- syntax -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    value: HFSet


Term = Union[Var, Lit]


@dataclass(frozen=True)
class Eps:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    bound: Optional[Term]
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    bound: Optional[Term]
    body: "Formula"


Formula = Union[Eps, Eq, Not, And, Or, Implies, Forall, Exists]

KEYWORDS = {"and", "or", "not", "forall", "exists", "in", "eps", "eq"}
_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_']*)|([(),.=])|(\{))")


def _tokens(text: str) -> list[tuple[str, object, int]]:
    out, i = [], 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            out.append(("end", None, i))
            return out
        if text[i] == "{":
            try:
                lit, j = hf.parse_literal(text, i)
            except SyntaxError as exc:
                raise FormulaSyntaxError(f"bad set literal ({exc})", i) from None
            out.append(("lit", lit, i))
            i = j
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        pos = m.start(m.lastindex)
        if m.group(1):
            out.append(("->", "->", pos))
        elif m.group(2):
            word = m.group(2)
            out.append((word if word in KEYWORDS else "ident", word, pos))
        else:
            out.append((m.group(3), m.group(3), pos))
        i = m.end()


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    @property
    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str):
        tok = self.toks[self.i]
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek[0] == "->":
            self.take("->")
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek[0] == "or":
            self.take("or")
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek[0] == "and":
            self.take("and")
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind = self.peek[0]
        if kind == "not":
            self.take("not")
            return Not(self.unary())
        if kind in ("forall", "exists"):
            self.take(kind)
            var = self.take("ident")[1]
            bound = None
            if self.peek[0] == "in":
                self.take("in")
                bound = self.term()
            self.take(".")
            body = self.unary()
            return (Forall if kind == "forall" else Exists)(var, bound, body)
        if kind in ("eps", "eq"):
            self.take(kind)
            self.take("(")
            left = self.term()
            self.take(",")
            right = self.term()
            self.take(")")
            return (Eps if kind == "eps" else Eq)(left, right)
        if kind == "(":
            self.take("(")
            inner = self.formula()
            self.take(")")
            return inner
        if kind in ("ident", "lit"):
            left = self.term()
            self.take("=")
            return Eq(left, self.term())
        tok = self.peek
        got = "end of input" if tok[0] == "end" else repr(tok[1])
        raise FormulaSyntaxError(f"expected a formula, found {got}", tok[2])

    def term(self) -> Term:
        kind, val, pos = self.peek
        if kind == "ident":
            self.i += 1
            return Var(val)
        if kind == "lit":
            self.i += 1
            return Lit(val)
        got = "end of input" if kind == "end" else repr(val)
        raise FormulaSyntaxError(f"expected a variable or set literal, found {got}", pos)


def parse_formula(text: str, free: Optional[set] = None) -> Formula:
    """Parse; with `free` given, every free variable must be listed there."""
    p = _Parser(text)
    phi = p.formula()
    p.take("end")
    if free is not None:
        extra = free_vars(phi) - set(free)
        if extra:
            raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(extra))}")
    return phi


# -- structure -----------------------------------------------------------------

def _term_vars(t: Optional[Term]) -> set:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(phi: Formula) -> set:
    if isinstance(phi, (Eps, Eq)):
        return _term_vars(phi.left) | _term_vars(phi.right)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return (free_vars(phi.body) - {phi.var}) | _term_vars(phi.bound)
    raise TypeError(phi)


def is_bounded(phi: Formula) -> bool:
    """Every quantifier is of the form forall/exists x in t."""
    if isinstance(phi, (Eps, Eq)):
        return True
    if isinstance(phi, Not):
        return is_bounded(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return is_bounded(phi.left) and is_bounded(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return phi.bound is not None and is_bounded(phi.body)
    raise TypeError(phi)


def literals(phi: Formula) -> list[HFSet]:
    def term(t):
        return [t.value] if isinstance(t, Lit) else []
    if isinstance(phi, (Eps, Eq)):
        return term(phi.left) + term(phi.right)
    if isinstance(phi, Not):
        return literals(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return literals(phi.left) + literals(phi.right)
    return (term(phi.bound) if phi.bound is not None else []) + literals(phi.body)


def _show_term(t: Term) -> str:
    return t.name if isinstance(t, Var) else hf.show(t.value)


def show(phi: Formula) -> str:
    """Printer; parse_formula(show(phi)) == phi."""
    if isinstance(phi, Eps):
        return f"eps({_show_term(phi.left)}, {_show_term(phi.right)})"
    if isinstance(phi, Eq):
        return f"{_show_term(phi.left)} = {_show_term(phi.right)}"
    if isinstance(phi, Not):
        return f"not {show(phi.body)}"
    if isinstance(phi, And):
        return f"({show(phi.left)} and {show(phi.right)})"
    if isinstance(phi, Or):
        return f"({show(phi.left)} or {show(phi.right)})"
    if isinstance(phi, Implies):
        return f"({show(phi.left)} -> {show(phi.right)})"
    q = "forall" if isinstance(phi, Forall) else "exists"
    bound = f" in {_show_term(phi.bound)}" if phi.bound is not None else ""
    return f"{q} {phi.var}{bound} . {show(phi.body)}"


# -- semantics -------------------------------------------------------------------

def _value(t: Term, env: Mapping) -> HFSet:
    if isinstance(t, Lit):
        return t.value
    try:
        return env[t.name]
    except KeyError:
        raise UnboundVariable(f"unbound variable {t.name!r}") from None


def evaluate(phi: Formula, env: Mapping[str, HFSet], n: int) -> bool:
    """Tarskian truth in V_n: bounded quantifiers range over the elements of
    their bound, unbounded ones over V_n."""
    for lit in literals(phi):
        if lit.rank >= n:
            raise RankError(f"literal {hf.show(lit)} has rank {lit.rank}, not below the bound {n}")
    for name, v in env.items():
        if v.rank >= n:
            raise RankError(f"value of {name} has rank {v.rank}, not below the bound {n}")
    missing = free_vars(phi) - set(env)
    if missing:
        raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(missing))}")
    V = hf.universe(n)
    return _eval(phi, dict(env), V)


def _eval(phi: Formula, env: dict, V: tuple) -> bool:
    if isinstance(phi, Eps):
        return hf.eps(_value(phi.left, env), _value(phi.right, env))
    if isinstance(phi, Eq):
        return _value(phi.left, env) is _value(phi.right, env)
    if isinstance(phi, Not):
        return not _eval(phi.body, env, V)
    if isinstance(phi, And):
        return _eval(phi.left, env, V) and _eval(phi.right, env, V)
    if isinstance(phi, Or):
        return _eval(phi.left, env, V) or _eval(phi.right, env, V)
    if isinstance(phi, Implies):
        return (not _eval(phi.left, env, V)) or _eval(phi.right, env, V)
    domain = V if phi.bound is None else _value(phi.bound, env).children
    saved = env.get(phi.var, _MISSING)
    try:
        test = all if isinstance(phi, Forall) else any
        def each(v):
            env[phi.var] = v
            return _eval(phi.body, env, V)
        return test(each(v) for v in domain)
    finally:
        if saved is _MISSING:
            env.pop(phi.var, None)
        else:
            env[phi.var] = saved


_MISSING = object()


def eval_text(text: str, env: Optional[Mapping] = None, n: int = 3) -> bool:
    return evaluate(parse_formula(text), env or {}, n)
