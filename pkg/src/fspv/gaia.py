"""Gaia role liveness expressions and their translation to FSP-lite processes.

Operators: ``x.y`` sequence, ``x|y`` choice, postfix ``x*`` and ``x+``,
``[x]`` option, parentheses.  Names starting with an uppercase letter refer
to other definitions of the same role; lowercase names are activities.

The translation builds the position (Glushkov) automaton of the inlined
expression, determinises it by subset construction and prints every DFA
state as a local process.  Accepting states offer an ``END`` alternative.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Union

from .errors import CyclicRef, GaiaSyntaxError, UnresolvedRef
from .lts import label_key
from .syntax import tree as fsp


@dataclass(frozen=True)
class Atom:
    name: str  # lowercased activity


@dataclass(frozen=True)
class Seq:
    items: tuple["LivenessExpr", ...]


@dataclass(frozen=True)
class Choice:
    items: tuple["LivenessExpr", ...]


@dataclass(frozen=True)
class Star:
    expr: "LivenessExpr"


@dataclass(frozen=True)
class Plus:
    expr: "LivenessExpr"


@dataclass(frozen=True)
class Opt:
    expr: "LivenessExpr"


@dataclass(frozen=True)
class Ref:
    name: str


LivenessExpr = Union[Atom, Seq, Choice, Star, Plus, Opt, Ref]


@dataclass
class RoleLiveness:
    role: str
    definitions: dict[str, LivenessExpr]
    # lowercase activity -> spelling in the source
    activities: dict[str, str]

    @property
    def entry(self) -> str:
        return next(iter(self.definitions))


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
                    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\|\||[.|*+()\[\]=!])")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - start + 1
        if m is None:
            raise GaiaSyntaxError(f"unsupported character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind in ("name", "op"):
            out.append((kind, m.group(), line, col))
        pos = m.end()
    out.append(("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str, bang_as_choice: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.bang = bang_as_choice
        self.activities: dict[str, str] = {}

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg: str):
        _, _, line, col = self.tok
        return GaiaSyntaxError(msg, line, col)

    def eat(self, text: str) -> None:
        if self.tok[1] != text or self.tok[0] == "eof":
            raise self.error(f"expected {text!r}, found {self.tok[1] or 'end of input'!r}")
        self.i += 1

    def at_definition(self) -> bool:
        return self.tok[0] == "name" and self.toks[self.i + 1][1] == "="

    def parse(self) -> dict[str, LivenessExpr]:
        defs: dict[str, LivenessExpr] = {}
        if self.tok[0] == "eof":
            raise self.error("expected a definition")
        while self.tok[0] != "eof":
            kind, name, _, _ = self.tok
            if kind != "name" or not name[0].isupper():
                raise self.error(f"expected a definition name, found {name or 'end of input'!r}")
            if name in defs:
                raise self.error(f"{name} is defined twice")
            self.i += 1
            self.eat("=")
            defs[name] = self.choice()
            if self.tok[0] != "eof" and not self.at_definition():
                raise self.error(f"unexpected {self.tok[1]!r}")
        return defs

    def choice(self) -> LivenessExpr:
        items = [self.seq()]
        while True:
            op = self.tok[1] if self.tok[0] == "op" else None
            if op == "|":
                self.i += 1
            elif op == "!":
                if not self.bang:
                    raise self.error("unsupported operator '!' (enable bang-as-choice to read it as '|')")
                self.i += 1
            elif op == "||":
                raise self.error("unsupported operator '||' (interleaving)")
            else:
                break
            items.append(self.seq())
        return items[0] if len(items) == 1 else Choice(tuple(items))

    def seq(self) -> LivenessExpr:
        items = [self.postfix()]
        while self.tok[1] == "." and self.tok[0] == "op":
            self.i += 1
            items.append(self.postfix())
        return items[0] if len(items) == 1 else Seq(tuple(items))

    def postfix(self) -> LivenessExpr:
        e = self.primary()
        while self.tok[0] == "op" and self.tok[1] in ("*", "+"):
            e = Star(e) if self.tok[1] == "*" else Plus(e)
            self.i += 1
        return e

    def primary(self) -> LivenessExpr:
        kind, text, _, _ = self.tok
        if kind == "name":
            self.i += 1
            if text[0].isupper():
                return Ref(text)
            low = text.lower()
            self.activities.setdefault(low, text)
            return Atom(low)
        if text == "(":
            self.i += 1
            e = self.choice()
            self.eat(")")
            return e
        if text == "[":
            self.i += 1
            e = self.choice()
            self.eat("]")
            return Opt(e)
        raise self.error(f"expected an activity, reference, '(' or '[', found {text or 'end of input'!r}")


def _refs(e: LivenessExpr):
    if isinstance(e, Ref):
        yield e.name
    elif isinstance(e, (Seq, Choice)):
        for x in e.items:
            yield from _refs(x)
    elif isinstance(e, (Star, Plus, Opt)):
        yield from _refs(e.expr)


def parse_liveness(text: str, bang_as_choice: bool = False, role: str = "") -> RoleLiveness:
    """Parse ``Name = expr`` definitions; the first one is the role's entry.

    ``!`` is rejected unless ``bang_as_choice`` is set, in which case it is
    read as choice.
    """
    p = _Parser(text, bang_as_choice)
    defs = p.parse()
    for name, e in defs.items():
        for r in _refs(e):
            if r not in defs:
                raise UnresolvedRef(r)
    state: dict[str, int] = {}

    def visit(name: str) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            raise CyclicRef(name)
        state[name] = 1
        for r in _refs(defs[name]):
            visit(r)
        state[name] = 2

    for name in defs:
        visit(name)
    return RoleLiveness(role or next(iter(defs)), defs, p.activities)


def inline(role: RoleLiveness, name: str) -> LivenessExpr:
    """Definition ``name`` with every reference replaced by its body."""
    def sub(e: LivenessExpr) -> LivenessExpr:
        if isinstance(e, Ref):
            return sub(role.definitions[e.name])
        if isinstance(e, Seq):
            return Seq(tuple(sub(x) for x in e.items))
        if isinstance(e, Choice):
            return Choice(tuple(sub(x) for x in e.items))
        if isinstance(e, Star):
            return Star(sub(e.expr))
        if isinstance(e, Plus):
            return Plus(sub(e.expr))
        if isinstance(e, Opt):
            return Opt(sub(e.expr))
        return e
    return sub(role.definitions[name])


# -- automaton construction ----------------------------------------------------

@dataclass
class Dfa:
    transitions: list[dict[str, int]]
    accepting: set[int]


def _glushkov(e: LivenessExpr):
    """Positions, nullable, first and last sets and the follow relation of ``e``."""
    labels: list[str] = []
    follow: dict[int, set[int]] = {}

    def walk(e) -> tuple[bool, set[int], set[int]]:
        if isinstance(e, Atom):
            p = len(labels)
            labels.append(e.name)
            follow[p] = set()
            return False, {p}, {p}
        if isinstance(e, Seq):
            nullable, first, last = walk(e.items[0])
            for item in e.items[1:]:
                n2, f2, l2 = walk(item)
                for x in last:
                    follow[x] |= f2
                first = first | f2 if nullable else first
                last = l2 | last if n2 else l2
                nullable = nullable and n2
            return nullable, first, last
        if isinstance(e, Choice):
            parts = [walk(x) for x in e.items]
            return (any(p[0] for p in parts), set().union(*(p[1] for p in parts)),
                    set().union(*(p[2] for p in parts)))
        if isinstance(e, (Star, Plus)):
            nullable, first, last = walk(e.expr)
            for x in last:
                follow[x] |= first
            return (True if isinstance(e, Star) else nullable), first, last
        if isinstance(e, Opt):
            _, first, last = walk(e.expr)
            return True, first, last
        raise TypeError(f"unexpected liveness node {e!r}")

    nullable, first, last = walk(e)
    return labels, nullable, first, last, follow


def to_dfa(e: LivenessExpr) -> Dfa:
    """Glushkov automaton of ``e`` followed by subset construction.

    DFA states are numbered breadth-first, visiting labels in sorted order.
    """
    labels, nullable, first, last, follow = _glushkov(e)
    start = -1  # the Glushkov initial state

    def succ(q: int) -> set[int]:
        return first if q == start else follow[q]

    def accepting(subset) -> bool:
        return any((q == start and nullable) or q in last for q in subset)

    init = frozenset([start])
    index = {init: 0}
    order = [init]
    transitions: list[dict[str, int]] = []
    queue = deque([init])
    while queue:
        subset = queue.popleft()
        by_label: dict[str, set[int]] = {}
        for q in subset:
            for p in succ(q):
                by_label.setdefault(labels[p], set()).add(p)
        out = {}
        for lab in sorted(by_label, key=label_key):
            target = frozenset(by_label[lab])
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
            out[lab] = index[target]
        transitions.append(out)
    return Dfa(transitions, {i for i, s in enumerate(order) if accepting(s)})


def dfa_to_process(name: str, dfa: Dfa) -> fsp.ProcessDef:
    def local_name(i: int) -> str:
        return name if i == 0 else f"{name}_{i}"

    locals_ = []
    for i, out in enumerate(dfa.transitions):
        branches = [fsp.Branch(None, (fsp.ActionLabel((lab,)),), fsp.Ref(local_name(t))) for lab, t in out.items()]
        if i in dfa.accepting:
            if not branches:
                locals_.append(fsp.LocalDef(local_name(i), (), fsp.End()))
                continue
            branches.append(fsp.Branch(None, (), fsp.End()))
        if not branches:
            locals_.append(fsp.LocalDef(local_name(i), (), fsp.Stop()))
            continue
        locals_.append(fsp.LocalDef(local_name(i), (), fsp.Choice(tuple(branches))))
    return fsp.ProcessDef(name, tuple(locals_))


def to_fsp(role: RoleLiveness) -> fsp.Spec:
    """One FSP-lite process per role definition (entry first), references inlined."""
    processes = tuple(dfa_to_process(name, to_dfa(inline(role, name))) for name in role.definitions)
    return fsp.Spec(processes=processes)


def activity_map(role: RoleLiveness) -> dict[str, str]:
    """FSP label -> activity name as written in the role schema."""
    return dict(sorted(role.activities.items()))
