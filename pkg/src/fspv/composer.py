"""Parallel composition with synchronisation on shared labels.

A composed transition on label ``l`` moves every part whose alphabet contains
``l`` (all of them must be able to) while the other parts stay put.  Only
states reachable from the initial tuple are materialised.
"""

from __future__ import annotations

import itertools
import warnings
from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

from .compiler import compile_process, default_limit
from .errors import FspError, StateLimitExceeded, UnknownOldLabel, UnresolvedReference
from .lts import ERROR, Lts, from_edges, make_property, sort_labels
from .syntax.evaluate import eval_expr
from .syntax.tree import ActionLabel, Binding, Index, Spec


def apply_prefix(lts: Lts, prefix: str) -> Lts:
    """Qualify every label with ``prefix`` (``c.1`` turns ``a`` into ``c.1.a``)."""
    # a common prefix does not change the relative order of labels
    alphabet = tuple(f"{prefix}.{l}" for l in lts.alphabet)
    return Lts(lts.name, alphabet, lts.transitions, lts.end_states, lts.stop_states)


def _relabel_one(label: str, pairs: Sequence[tuple[str, str]]) -> str:
    for new, old in pairs:
        if label == old:
            return new
        if label.startswith(old + "."):
            return new + label[len(old):]
    return label


def relabel_matches(lts: Lts, old: str) -> bool:
    return any(l == old or l.startswith(old + ".") for l in lts.alphabet)


def apply_relabel(lts: Lts, pairs: Sequence[tuple[str, str]], warn: bool = True) -> Lts:
    """Rename labels per ``(new, old)`` pairs; ``old`` also renames ``old.*`` labels.

    Transitions that end up on the same label are merged.  A pair whose old
    label is absent triggers an :class:`UnknownOldLabel` warning.
    """
    pairs = list(pairs)
    if warn:
        for new, old in pairs:
            if not relabel_matches(lts, old):
                warnings.warn(UnknownOldLabel(f"relabel {new}/{old}: {old!r} not in the alphabet of {lts.name}"))
    renamed = [_relabel_one(l, pairs) for l in lts.alphabet]
    edges = [[(renamed[l], t) for l, t in ts] for ts in lts.transitions]
    return from_edges(lts.name, edges, lts.end_states, lts.stop_states)


@dataclass
class CompositionSpec:
    """Parts to compose, each with an optional prefix, plus relabel pairs applied to every part."""
    parts: list[tuple[Lts, Optional[str]]]
    relabels: list[tuple[str, str]] = field(default_factory=list)
    name: str = "||"

    def prepared(self) -> list[Lts]:
        ready = [apply_prefix(l, p) if p else l for l, p in self.parts]
        for new, old in self.relabels:
            if not any(relabel_matches(l, old) for l in ready):
                warnings.warn(UnknownOldLabel(f"relabel {new}/{old}: {old!r} is not used by any component"))
        if self.relabels:
            ready = [apply_relabel(l, self.relabels, warn=False) for l in ready]
        return ready


def compose(parts: Union[CompositionSpec, Sequence[Lts]], limit: Optional[int] = None,
            name: Optional[str] = None) -> Lts:
    """Reachable parallel composition of ``parts``.

    Composed states are numbered breadth-first, visiting transitions in label
    order, so identical inputs give identical output.  If any moving part
    reaches ERROR the composed target is ERROR.
    """
    if isinstance(parts, CompositionSpec):
        name = name or parts.name
        parts = parts.prepared()
    parts = list(parts)
    if not parts:
        raise ValueError("compose needs at least one part")
    name = name or "||".join(p.name for p in parts)
    limit = default_limit() if limit is None else limit

    alphabet = sort_labels(l for p in parts for l in p.alphabet)
    gindex = {l: i for i, l in enumerate(alphabet)}
    owners: list[list[int]] = [[] for _ in alphabet]
    for pi, p in enumerate(parts):
        for l in p.alphabet:
            owners[gindex[l]].append(pi)

    strides = []
    acc = 1
    for p in parts:
        strides.append(acc)
        acc *= p.num_states

    # per part/state: solo moves as (label, code delta | None for ERROR) and
    # shared labels as label -> targets
    solo: list[list[list[tuple[int, Optional[int]]]]] = []
    shared: list[list[dict[int, list[int]]]] = []
    for pi, p in enumerate(parts):
        stride = strides[pi]
        gl_of = [gindex[l] for l in p.alphabet]
        solo_p, shared_p = [], []
        for s, ts in enumerate(p.transitions):
            moves, sync = [], {}
            for l, t in ts:
                g = gl_of[l]
                if len(owners[g]) == 1:
                    moves.append((g, None if t == ERROR else (t - s) * stride))
                else:
                    sync.setdefault(g, []).append(t)
            solo_p.append(moves)
            shared_p.append(sync)
        solo.append(solo_p)
        shared.append(shared_p)

    behaving = [i for i, p in enumerate(parts) if p.num_transitions] or list(range(len(parts)))
    n = len(parts)

    start = (0,) * n
    index = {0: 0}
    tuples = [start]
    transitions: list[tuple[tuple[int, int], ...]] = []
    ends, stops = set(), set()
    queue = deque([0])
    while queue:
        code = queue.popleft()
        idx = index[code]
        tup = tuples[idx]
        if all(tup[i] in parts[i].end_states for i in behaving):
            ends.add(idx)
        if all(tup[i] in parts[i].stop_states for i in range(n)):
            stops.add(idx)
        moves: list[tuple[int, Optional[int]]] = []
        for pi in range(n):
            s = tup[pi]
            for g, delta in solo[pi][s]:
                moves.append((g, None if delta is None else code + delta))
            for g, targets in shared[pi][s].items():
                own = owners[g]
                if own[0] != pi:
                    continue
                options = [targets]
                for q in own[1:]:
                    tq = shared[q][tup[q]].get(g)
                    if tq is None:
                        break
                    options.append(tq)
                else:
                    for combo in itertools.product(*options):
                        if ERROR in combo:
                            moves.append((g, None))
                        else:
                            moves.append((g, code + sum((t - tup[q]) * strides[q] for q, t in zip(own, combo))))
        moves.sort(key=lambda m: m[0])
        out = []
        for g, target in moves:
            if target is None:
                out.append((g, ERROR))
                continue
            j = index.get(target)
            if j is None:
                if len(tuples) >= limit:
                    raise StateLimitExceeded(limit)
                j = len(tuples)
                index[target] = j
                tuples.append(_decode(target, parts, strides))
                queue.append(target)
            out.append((g, j))
        transitions.append(tuple(sorted(set(out))))
    return Lts(name, alphabet, tuple(transitions), frozenset(ends), frozenset(stops))


def _decode(code: int, parts: Sequence[Lts], strides: Sequence[int]) -> tuple[int, ...]:
    return tuple((code // strides[i]) % parts[i].num_states for i in range(len(parts)))


def eval_label(label: ActionLabel, consts: Mapping[str, int]) -> str:
    out = []
    for part in label.parts:
        if isinstance(part, str):
            out.append(part)
        elif isinstance(part, Index):
            out.append(str(int(eval_expr(part.expr, {}, consts))))
        elif isinstance(part, Binding):
            raise FspError("index bindings are not allowed here")
    return ".".join(out)


def build_composite(spec: Spec, name: str, cache: Optional[dict[str, Lts]] = None,
                    limit: Optional[int] = None) -> Lts:
    """Build composite ``name``: expand replicated labeling, prefix, relabel, compose.

    ``cache`` maps process/composite names to already built systems and is
    filled as a side effect.  Property processes are completed with ERROR
    transitions before use.
    """
    cache = {} if cache is None else cache
    cdef = spec.composite(name)
    if cdef is None:
        raise UnresolvedReference(name)
    consts = spec.constants
    parts: list[tuple[Lts, Optional[str]]] = []
    for comp in cdef.components:
        if comp.target.args:
            raise FspError(f"component {comp.target.name} cannot take index arguments")
        lts = build_target(spec, comp.target.name, cache, limit)
        pf = comp.prefix
        if pf is None:
            parts.append((lts, None))
        elif pf.lo is None:
            parts.append((lts, pf.word))
        elif pf.hi is None:
            parts.append((lts, f"{pf.word}.{int(eval_expr(pf.lo, {}, consts))}"))
        else:
            lo, hi = int(eval_expr(pf.lo, {}, consts)), int(eval_expr(pf.hi, {}, consts))
            parts.extend((lts, f"{pf.word}.{i}") for i in range(lo, hi + 1))
    relabels = [(eval_label(new, consts), eval_label(old, consts)) for new, old in cdef.relabels]
    return compose(CompositionSpec(parts, relabels, name), limit=limit)


def build_target(spec: Spec, name: str, cache: Optional[dict[str, Lts]] = None,
                 limit: Optional[int] = None) -> Lts:
    """Compile a process (completing it if it is a property) or build a composite."""
    cache = {} if cache is None else cache
    if name in cache:
        return cache[name]
    if spec.process(name) is not None:
        lts = compile_process(spec, name, limit)
        if name in spec.properties:
            lts = make_property(lts)
    elif spec.composite(name) is not None:
        lts = build_composite(spec, name, cache, limit)
    else:
        raise UnresolvedReference(name)
    cache[name] = lts
    return lts
