"""Finite labelled transition systems and their serialisations.

States are integers ``0..num_states-1`` with ``0`` initial.  Transitions are
stored per source state as ``(label_index, target)`` pairs, sorted, where
``target`` may be the :data:`ERROR` sentinel.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import NondeterministicProperty

ERROR = -1

_INT = re.compile(r"-?[0-9]+")

LabelKey = tuple[tuple[int, Union[int, str]], ...]


@lru_cache(maxsize=None)
def label_key(label: str) -> LabelKey:
    """Sort key for canonical labels: componentwise, integers numerically and before words."""
    if not label:
        return ()
    return tuple((0, int(c)) if _INT.fullmatch(c) else (1, c) for c in label.split("."))


def sort_labels(labels: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(labels), key=label_key))


@dataclass(frozen=True)
class Lts:
    name: str
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[tuple[int, int], ...], ...]
    end_states: frozenset[int] = frozenset()
    # states where every underlying process sits in STOP; used to annotate deadlocks
    stop_states: frozenset[int] = frozenset()

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    @property
    def num_transitions(self) -> int:
        return sum(len(t) for t in self.transitions)

    @property
    def initial(self) -> int:
        return 0

    def has_error(self) -> bool:
        return any(t == ERROR for ts in self.transitions for _, t in ts)

    def edges(self, state: int) -> list[tuple[str, int]]:
        """Outgoing transitions of ``state`` as ``(label, target)`` pairs."""
        return [(self.alphabet[l], t) for l, t in self.transitions[state]]

    def enabled(self, state: int) -> list[str]:
        seen: list[str] = []
        for l, _ in self.transitions[state]:
            lab = self.alphabet[l]
            if not seen or seen[-1] != lab:
                seen.append(lab)
        return seen

    def step(self, state: int, label: str) -> list[int]:
        return [t for l, t in self.transitions[state] if self.alphabet[l] == label]

    def renamed(self, name: str) -> "Lts":
        return Lts(name, self.alphabet, self.transitions, self.end_states, self.stop_states)


def from_edges(
    name: str,
    edges: Sequence[Iterable[tuple[str, int]]],
    end_states: Iterable[int] = (),
    stop_states: Iterable[int] = (),
) -> Lts:
    """Build an :class:`Lts` from per-state ``(label, target)`` lists.

    The alphabet becomes exactly the set of labels used; duplicates are dropped
    and each state's list is sorted by ``(label, target)``.
    """
    edges = [list(e) for e in edges]
    alphabet = sort_labels(l for e in edges for l, _ in e)
    index = {l: i for i, l in enumerate(alphabet)}
    transitions = tuple(tuple(sorted({(index[l], t) for l, t in e})) for e in edges)
    return Lts(name, alphabet, transitions, frozenset(end_states), frozenset(stop_states))


def alphabet_of(lts: Lts) -> list[str]:
    return list(lts.alphabet)


def check_deterministic(lts: Lts) -> None:
    for s, ts in enumerate(lts.transitions):
        for (l1, _), (l2, _) in zip(ts, ts[1:]):
            if l1 == l2:
                raise NondeterministicProperty(s, lts.alphabet[l1])


def make_property(lts: Lts) -> Lts:
    """Complete a deterministic property automaton with transitions to ERROR.

    Every non-end state gets an ERROR transition for each alphabet label it
    does not already enable.
    """
    check_deterministic(lts)
    n = len(lts.alphabet)
    completed = []
    for s, ts in enumerate(lts.transitions):
        if s in lts.end_states:
            completed.append(ts)
            continue
        have = {l for l, _ in ts}
        extra = [(l, ERROR) for l in range(n) if l not in have]
        completed.append(tuple(sorted(ts + tuple(extra))))
    return Lts(lts.name, lts.alphabet, tuple(completed), lts.end_states, lts.stop_states)


def to_aut(lts: Lts) -> str:
    """Aldebaran text: ``des (0, T, S)`` then ``(from, "label", to)`` lines.

    ERROR, when targeted, is written as the extra last state ``S-1``.
    """
    n = lts.num_states
    states = n + 1 if lts.has_error() else n
    lines = [f"des (0, {lts.num_transitions}, {states})"]
    for s, ts in enumerate(lts.transitions):
        for l, t in ts:
            lines.append(f'({s}, "{lts.alphabet[l]}", {n if t == ERROR else t})')
    return "\n".join(lines) + "\n"


def to_dot(lts: Lts) -> str:
    n = lts.num_states
    out = [f'digraph "{lts.name}" {{', "  rankdir=LR;", "  node [shape=circle];"]
    for s in range(n):
        attrs = [f'label="{s}"']
        if s == 0:
            attrs.append("shape=doublecircle")
        if s in lts.end_states:
            attrs.append("style=filled")
        out.append(f"  {s} [{', '.join(attrs)}];")
    if lts.has_error():
        out.append(f'  {n} [label="ERROR", shape=square];')
    for s, ts in enumerate(lts.transitions):
        for l, t in ts:
            out.append(f'  {s} -> {n if t == ERROR else t} [label="{lts.alphabet[l]}"];')
    out.append("}")
    return "\n".join(out) + "\n"
