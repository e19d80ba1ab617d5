"""Safety, deadlock and progress checks over an :class:`~fspv.lts.Lts`.

All searches are breadth-first from state 0 and scan each state's transitions
in label order, so every reported trace is a shortest one and, among those,
the lexicographically smallest label sequence.
"""

from __future__ import annotations

import time
import warnings
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional

from .errors import UnknownProgressLabel
from .lts import ERROR, Lts

Trace = list[str]


@dataclass
class Violation:
    kind: str  # safety | deadlock | progress
    subject: str
    trace: Trace
    cycle: Optional[Trace] = None
    note: Optional[str] = None


@dataclass
class Stats:
    states: int
    transitions: int
    alphabet: int
    elapsed_ms: float = 0.0


@dataclass
class Report:
    target: str
    stats: Stats
    violations: list[Violation] = field(default_factory=list)
    terminal_sets: int = 0
    warnings: list[str] = field(default_factory=list)

    @property
    def result(self) -> str:
        return "FAIL" if self.violations else "PASS"


class _Bfs:
    """Breadth-first tree over the reachable part of ``lts``."""

    def __init__(self, lts: Lts, allowed: Optional[set[int]] = None, root: int = 0):
        self.lts = lts
        self.parent: dict[int, tuple[int, int]] = {}
        self.order: list[int] = [root]
        seen = {root}
        queue = deque([root])
        while queue:
            s = queue.popleft()
            for l, t in lts.transitions[s]:
                if t == ERROR or t in seen or (allowed is not None and t not in allowed):
                    continue
                seen.add(t)
                self.parent[t] = (s, l)
                self.order.append(t)
                queue.append(t)

    def path(self, state: int) -> Trace:
        labels = []
        while state in self.parent:
            state, l = self.parent[state]
            labels.append(self.lts.alphabet[l])
        return labels[::-1]


def reachable(lts: Lts) -> list[int]:
    return _Bfs(lts).order


def check_safety(lts: Lts, subject: str = "ERROR") -> Optional[Violation]:
    """Shortest trace that reaches ERROR, or None."""
    bfs = _Bfs(lts)
    for s in bfs.order:
        for l, t in lts.transitions[s]:
            if t == ERROR:
                return Violation("safety", subject, bfs.path(s) + [lts.alphabet[l]])
    return None


def check_deadlock(lts: Lts) -> Optional[Violation]:
    """Shortest trace to a reachable state with no transitions that is not an end state."""
    bfs = _Bfs(lts)
    for s in bfs.order:
        if not lts.transitions[s] and s not in lts.end_states:
            note = "terminal-STOP" if s in lts.stop_states else None
            return Violation("deadlock", "DEADLOCK", bfs.path(s), note=note)
    return None


def strongly_connected_components(lts: Lts, states: Iterable[int]) -> list[list[int]]:
    """Tarjan's algorithm (iterative) restricted to ``states``; ERROR edges ignored."""
    states = list(states)
    inside = set(states)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    trans = lts.transitions
    for root in states:
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, i = work[-1]
            ts = trans[v]
            while i < len(ts):
                w = ts[i][1]
                i += 1
                if w == ERROR or w not in inside:
                    continue
                if w not in index:
                    work[-1] = (v, i)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    sccs.append(comp)
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
    return sccs


def terminal_sets(lts: Lts) -> list[tuple[frozenset[int], frozenset[str]]]:
    """Bottom strongly connected components of the reachable graph.

    Each comes with the labels of its internal transitions.  A dead non-end
    state is a terminal set with no labels; a dead end state (successful
    termination) is not a terminal set.
    """
    states = reachable(lts)
    comp_of: dict[int, int] = {}
    sccs = strongly_connected_components(lts, states)
    for i, comp in enumerate(sccs):
        for s in comp:
            comp_of[s] = i
    result = []
    for i, comp in enumerate(sccs):
        labels = set()
        bottom = True
        for s in comp:
            for l, t in lts.transitions[s]:
                if t == ERROR:
                    continue
                if comp_of[t] != i:
                    bottom = False
                    break
                labels.add(lts.alphabet[l])
            if not bottom:
                break
        if not bottom:
            continue
        if len(comp) == 1 and not lts.transitions[comp[0]] and comp[0] in lts.end_states:
            continue
        result.append((frozenset(comp), frozenset(labels)))
    result.sort(key=lambda ts: min(ts[0]))
    return result


def _cycle(lts: Lts, members: frozenset[int], entry: int) -> Trace:
    """Shortest cycle from ``entry`` back to itself inside ``members``."""
    bfs = _Bfs(lts, allowed=set(members), root=entry)
    for s in bfs.order:
        for l, t in lts.transitions[s]:
            if t == entry:
                return bfs.path(s) + [lts.alphabet[l]]
    return []


def check_progress(lts: Lts, progress: Sequence[tuple[str, Iterable[str]]],
                   sets: Optional[list[tuple[frozenset[int], frozenset[str]]]] = None) -> list[Violation]:
    """Check each ``(name, labels)`` progress property against the terminal sets.

    A property fails when some terminal set has none of its labels.  The
    violation holds the shortest trace into the first such set reached and
    the shortest cycle inside it from that entry state (empty for a dead
    state).
    """
    sets = terminal_sets(lts) if sets is None else sets
    alphabet = set(lts.alphabet)
    bfs = None
    violations = []
    for name, labels in progress:
        labels = set(labels)
        for lab in sorted(labels - alphabet):
            warnings.warn(UnknownProgressLabel(f"progress {name}: {lab!r} is not in the alphabet"))
        bad = [members for members, internal in sets if not internal & labels]
        if not bad:
            continue
        bfs = bfs or _Bfs(lts)
        owner = {s: members for members in bad for s in members}
        entry = next(s for s in bfs.order if s in owner)
        violations.append(Violation("progress", name, bfs.path(entry), _cycle(lts, owner[entry], entry)))
    return violations


def run_all(lts: Lts, progress: Sequence[tuple[str, Iterable[str]]] = (), safety_subject: str = "ERROR",
            started: Optional[float] = None) -> Report:
    """Run every check on ``lts`` and collect the outcome in a :class:`Report`.

    Warnings raised during the checks are recorded in the report as well as
    propagated.
    """
    started = time.perf_counter() if started is None else started
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        violations = []
        found = check_safety(lts, safety_subject)
        if found:
            violations.append(found)
        found = check_deadlock(lts)
        if found:
            violations.append(found)
        sets = terminal_sets(lts)
        violations += check_progress(lts, progress, sets)
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    stats = Stats(lts.num_states, lts.num_transitions, len(lts.alphabet),
                  round((time.perf_counter() - started) * 1000, 3))
    return Report(lts.name, stats, violations, len(sets), [str(w.message) for w in caught])
