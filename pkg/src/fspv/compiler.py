"""Expansion of FSP-lite process definitions into labelled transition systems.

A state is identified by a syntactic position (a choice, or the remainder of
an action sequence) together with the values of only those variables that
position still mentions.  Branches whose continuations ignore a bound index
therefore share a state: ``readSign[s:R] -> movetonext -> P`` yields one
intermediate state, not one per value of ``s``.
"""

from __future__ import annotations

import os
from collections import deque
from typing import Iterator, Optional

from .errors import ArityMismatch, FspError, RangeIndexOutOfBounds, StateLimitExceeded, UnresolvedReference
from .lts import ERROR, Lts, from_edges, label_key
from .syntax.evaluate import eval_expr, free_names
from .syntax.tree import (
    ActionElem, ActionLabel, Binding, Branch, Choice, End, Error, Index, Interval, LabelSet,
    LocalDef, ProcExpr, RangeRef, RangeSpec, Ref, Spec, Stop,
)

DEFAULT_LIMIT = 1 << 20


def default_limit() -> int:
    """State cap, overridable with the ``FSPV_LIMIT`` environment variable."""
    value = os.environ.get("FSPV_LIMIT")
    return int(value) if value else DEFAULT_LIMIT


_STOP = ("STOP",)
_END = ("END",)


class _Compiler:
    def __init__(self, spec: Spec):
        self.spec = spec
        self.consts = spec.constants
        self.defs = {p.name: p for p in spec.processes}
        self._fv: dict[tuple, frozenset[str]] = {}

    # -- scoping --------------------------------------------------------------

    def lookup(self, defname: str, name: str) -> tuple[str, LocalDef]:
        for local in self.defs[defname].locals:
            if local.name == name:
                return defname, local
        if name in self.defs:
            return name, self.defs[name].entry
        raise UnresolvedReference(name)

    def range_bounds(self, r: RangeSpec, env: dict[str, int]) -> tuple[int, int]:
        if isinstance(r, RangeRef):
            if r.name not in self.spec.ranges:
                raise UnresolvedReference(r.name)
            return self.spec.ranges[r.name]
        return int(eval_expr(r.lo, env, self.consts)), int(eval_expr(r.hi, env, self.consts))

    # -- free variables -------------------------------------------------------

    def fv_proc(self, p: ProcExpr) -> frozenset[str]:
        if isinstance(p, Ref):
            return frozenset().union(*(free_names(a) for a in p.args)) if p.args else frozenset()
        if isinstance(p, Choice):
            key = ("choice", id(p))
            if key not in self._fv:
                names: set[str] = set()
                for b in p.branches:
                    if b.guard is not None:
                        names |= free_names(b.guard)
                    names |= self.fv_seq(b, 0)
                self._fv[key] = frozenset(names)
            return self._fv[key]
        return frozenset()

    def fv_seq(self, b: Branch, k: int) -> frozenset[str]:
        key = ("seq", id(b), k)
        if key not in self._fv:
            if k == len(b.actions):
                result = self.fv_proc(b.continuation)
            else:
                free, bound = _label_vars(b.actions[k])
                result = frozenset(free | (self.fv_seq(b, k + 1) - bound))
            self._fv[key] = result
        return self._fv[key]

    # -- state keys -----------------------------------------------------------

    def resolve(self, defname: str, p: ProcExpr, env: dict[str, int], seen: Optional[set] = None):
        """Follow references until reaching a choice, STOP, END or ERROR."""
        if isinstance(p, Stop):
            return _STOP
        if isinstance(p, End):
            return _END
        if isinstance(p, Error):
            return ERROR
        if isinstance(p, Choice):
            return ("choice", defname, id(p), _restrict(env, self.fv_proc(p)))
        values = [int(eval_expr(a, env, self.consts)) for a in p.args]
        target_def, local = self.lookup(defname, p.name)
        if len(values) != len(local.params):
            raise ArityMismatch(local.name, len(local.params), len(values))
        new_env = {}
        for prm, v in zip(local.params, values):
            lo, hi = self.range_bounds(prm.range, new_env)
            if not lo <= v <= hi:
                raise RangeIndexOutOfBounds(local.name, v)
            new_env[prm.var] = v
        marker = (target_def, local.name, tuple(values))
        seen = set() if seen is None else seen
        if marker in seen:
            raise FspError(f"{local.name} is defined only in terms of itself")
        seen.add(marker)
        return self.resolve(target_def, local.body, new_env, seen)

    def seq_key(self, defname: str, b: Branch, k: int, env: dict[str, int]):
        if k == len(b.actions):
            return self.resolve(defname, b.continuation, env)
        return ("seq", defname, id(b), k, _restrict(env, self.fv_seq(b, k)))

    # -- expansion ------------------------------------------------------------

    def expand(self, key) -> tuple[list[tuple[str, object]], bool]:
        """Outgoing ``(label, target_key)`` pairs and whether the state may terminate."""
        if key in (_STOP, _END):
            return [], key == _END
        if key[0] == "choice":
            _, defname, _, env_items = key
            choice = self._choices[key[2]]
            env = dict(env_items)
            edges: list[tuple[str, object]] = []
            can_end = False
            for b in choice.branches:
                if b.guard is not None and not eval_expr(b.guard, env, self.consts):
                    continue
                if not b.actions:
                    can_end = True
                    continue
                edges.extend(self.expand_seq(defname, b, 0, env))
            return edges, can_end
        _, defname, bid, k, env_items = key
        b = self._branches[bid]
        return list(self.expand_seq(defname, b, k, dict(env_items))), False

    def expand_seq(self, defname: str, b: Branch, k: int, env: dict[str, int]):
        for label, env2 in self.labels(b.actions[k], env):
            yield label, self.seq_key(defname, b, k + 1, env2)

    def labels(self, elem: ActionElem, env: dict[str, int]) -> Iterator[tuple[str, dict[str, int]]]:
        if isinstance(elem, LabelSet):
            for lab in elem.labels:
                for text, _ in self.labels(lab, env):
                    yield text, env
            return
        yield from self._label_parts(elem.parts, 0, [], env)

    def _label_parts(self, parts, i, acc, env):
        if i == len(parts):
            yield ".".join(acc), env
            return
        part = parts[i]
        if isinstance(part, str):
            yield from self._label_parts(parts, i + 1, acc + [part], env)
        elif isinstance(part, Index):
            value = int(eval_expr(part.expr, env, self.consts))
            yield from self._label_parts(parts, i + 1, acc + [str(value)], env)
        else:
            lo, hi = self.range_bounds(part.range, env)
            for v in range(lo, hi + 1):
                yield from self._label_parts(parts, i + 1, acc + [str(v)], {**env, part.var: v})

    # -- driver ---------------------------------------------------------------

    def compile(self, name: str, limit: int) -> Lts:
        if name not in self.defs:
            raise UnresolvedReference(name)
        self._choices: dict[int, Choice] = {}
        self._branches: dict[int, Branch] = {}
        for pdef in self.spec.processes:
            for local in pdef.locals:
                _collect_choices(local.body, self._choices, self._branches)
        entry = self.defs[name].entry
        if entry.params:
            raise FspError(f"entry process {entry.name} must not take parameters")
        start = self.resolve(name, entry.body, {})
        if start == ERROR:
            raise FspError(f"{name} is ERROR and has no states")
        index = {start: 0}
        order = [start]
        edges: list[list[tuple[str, int]]] = []
        ends, stops = set(), set()
        queue = deque([start])
        while queue:
            key = queue.popleft()
            state = index[key]
            out, can_end = self.expand(key)
            if can_end:
                ends.add(state)
            if key == _STOP:
                stops.add(state)
            out.sort(key=lambda e: label_key(e[0]))
            resolved = []
            for label, target in out:
                if target == ERROR:
                    resolved.append((label, ERROR))
                    continue
                if target not in index:
                    if len(index) >= limit:
                        raise StateLimitExceeded(limit)
                    index[target] = len(order)
                    order.append(target)
                    queue.append(target)
                resolved.append((label, index[target]))
            edges.append(resolved)
        return from_edges(name, edges, ends, stops)


def _restrict(env: dict[str, int], names: frozenset[str]) -> tuple[tuple[str, int], ...]:
    return tuple(sorted((n, env[n]) for n in names if n in env))


def _label_vars(elem: ActionElem) -> tuple[set[str], set[str]]:
    """Free and newly bound variables of one action element."""
    free: set[str] = set()
    bound: set[str] = set()
    labels = elem.labels if isinstance(elem, LabelSet) else (elem,)
    for lab in labels:
        for part in lab.parts:
            if isinstance(part, Index):
                free |= free_names(part.expr) - bound
            elif isinstance(part, Binding):
                if isinstance(part.range, Interval):
                    free |= (free_names(part.range.lo) | free_names(part.range.hi)) - bound
                bound.add(part.var)
    return free, bound


def _collect_choices(p: ProcExpr, choices: dict[int, Choice], branches: dict[int, Branch]) -> None:
    if isinstance(p, Choice):
        choices[id(p)] = p
        for b in p.branches:
            branches[id(b)] = b
            _collect_choices(b.continuation, choices, branches)


def compile_process(spec: Spec, name: str, limit: Optional[int] = None) -> Lts:
    """Expand top-level process ``name`` of ``spec`` into an :class:`Lts`.

    States are numbered in breadth-first order, visiting each state's
    transitions in label order.  Raises :class:`StateLimitExceeded` rather
    than returning a truncated system.
    """
    return _Compiler(spec).compile(name, default_limit() if limit is None else limit)
