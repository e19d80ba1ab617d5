"""Independent reference implementations used to produce and check goldens.

Nothing here imports fspv.  The case-study models are expanded by hand into
Python successor functions, products are built naively over the full
cartesian state space, and the analyses enumerate paths by iterative
deepening instead of a BFS tree.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional

ERR = "ERROR"


def key(label: str):
    """Labels compare part by part; numeric parts come first, in numeric order."""
    parts = []
    for p in label.split("."):
        if re.fullmatch(r"-?\d+", p):
            parts.append((0, int(p), ""))
        else:
            parts.append((1, 0, p))
    return tuple(parts)


@dataclass
class OLts:
    """Explicit LTS: ``edges[s]`` lists ``(label, target)`` with target an int or ERR."""
    edges: list[list[tuple[str, object]]]
    end: set[int] = field(default_factory=set)
    stop: set[int] = field(default_factory=set)

    @property
    def alphabet(self) -> list[str]:
        return sorted({l for es in self.edges for l, _ in es}, key=key)

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def transitions(self) -> int:
        return sum(len(es) for es in self.edges)


def explore(init: Hashable, succ: Callable[[Hashable], Iterable[tuple[str, Hashable]]],
            is_end: Callable[[Hashable], bool] = lambda s: False,
            is_stop: Callable[[Hashable], bool] = lambda s: False) -> OLts:
    """Number the reachable semantic states breadth-first, successors in label order."""
    index = {init: 0}
    order = [init]
    edges: list[list[tuple[str, object]]] = []
    q = deque([init])
    while q:
        s = q.popleft()
        out = []
        for label, t in sorted(set(succ(s)), key=lambda e: (key(e[0]), str(e[1]))):
            if t == ERR:
                out.append((label, ERR))
                continue
            if t not in index:
                index[t] = len(order)
                order.append(t)
                q.append(t)
            out.append((label, index[t]))
        edges.append(sorted(set(out), key=lambda e: (key(e[0]), -1 if e[1] == ERR else e[1])))
    return OLts(edges, {index[s] for s in order if is_end(s)}, {index[s] for s in order if is_stop(s)})


# -- hand expansions of the corpus models ---------------------------------------

def route() -> OLts:
    def succ(s):
        mode, v = s
        out = []
        if mode == "F":
            if v == 7:
                out.append(("readunloadSign", ("F", 7)))
                out.append(("waitforunloading", ("E", 7)))
            else:
                out.append((f"readSign.{v}", ("F", v)))
            if 1 <= v <= 6:
                out.append(("movetonext", ("F", v + 1)))
        else:
            if v == 1:
                out.append(("readloadSign", ("E", 1)))
                out.append(("waitforloading", ("F", 1)))
            else:
                out.append((f"readSign.{v}", ("E", v)))
            nxt = {7: 8, 8: 5, 5: 4, 4: 3, 3: 9, 9: 1}
            prev = {3: 4, 4: 5, 5: 8}
            if v in nxt:
                out.append(("movetonext", ("E", nxt[v])))
            if v in prev:
                out.append(("movetoprevious", ("E", prev[v])))
        return out
    return explore(("E", 9), succ)


def carrier() -> OLts:
    signs = [f"readSign.{i}" for i in range(1, 10)]
    table = {
        "empty": [(s, "empty_signed") for s in signs] + [("readloadSign", "empty_load")],
        "empty_signed": [("movetonext", "empty"), ("movetoprevious", "empty")],
        "empty_load": [("waitforloading", "full")],
        "full": [(s, "full_signed") for s in signs] + [("readunloadSign", "full_unload")],
        "full_signed": [("movetonext", "full")],
        "full_unload": [("waitforunloading", "empty")],
    }
    return explore("empty", lambda s: table[s])


def stock_full(max_s: int = 2) -> OLts:
    def succ(s):
        kind, st = s
        if kind == "stop":
            return []
        if kind == "send":
            return [("send", ("full", st - 1))]
        out = [(f"stockCountA.{st}", ("full", st))]
        if st > 0:
            out.append(("decrementStockA", ("send", st)))
        if st == 0:
            out.append(("stockEmptyA", ("stop", 0)))
        return out
    return explore(("full", max_s), succ, is_stop=lambda s: s[0] == "stop")


def stock_empty(max_s: int = 2) -> OLts:
    def succ(s):
        kind, st = s
        if kind == "stop":
            return []
        if kind == "recv":
            return [("incrementStockB", ("empty", st + 1))]
        out = [(f"stockCountB.{st}", ("empty", st))]
        if st < max_s:
            out.append(("receive", ("recv", st)))
        if st >= max_s:
            out.append(("stockFullB", ("stop", 0)))
        return out
    return explore(("empty", 0), succ, is_stop=lambda s: s[0] == "stop")


def noloss_stock(prefix: str = "") -> OLts:
    """The completed NOLOSS property: 4 states, every missing label goes to ERR."""
    p = f"{prefix}." if prefix else ""
    labels = [f"{p}empty.loaded", f"{p}full.moveto.1", f"{p}full.moveto.2", f"{p}full.unloaded"]
    good = {
        "idle": (labels[0], 1),
        1: (labels[1], 2),
        2: (labels[2], 3),
        3: (labels[3], "idle"),
    }

    def succ(s):
        ok_label, ok_target = good[s]
        return [(l, ok_target if l == ok_label else ERR) for l in labels]
    return explore("idle", succ)


def self_loop(label: str) -> OLts:
    return OLts([[(label, 0)]])


def relabel(lts: OLts, mapping: dict[str, str]) -> OLts:
    return OLts([sorted({(mapping.get(l, l), t) for l, t in es}, key=lambda e: (key(e[0]), str(e[1])))
                 for es in lts.edges], set(lts.end), set(lts.stop))


def prefix(lts: OLts, pre: str) -> OLts:
    return OLts([[(f"{pre}.{l}", t) for l, t in es] for es in lts.edges], set(lts.end), set(lts.stop))


# -- naive product ------------------------------------------------------------------

def full_product(parts: list[OLts]) -> tuple[dict, dict]:
    """Transitions of every tuple in the cartesian product, reachable or not."""
    alph = [set(p.alphabet) for p in parts]
    labels = sorted(set().union(*alph), key=key)
    table = {}
    for tup in itertools.product(*(range(p.n) for p in parts)):
        out = []
        for label in labels:
            options = []
            for i, p in enumerate(parts):
                if label in alph[i]:
                    moves = [t for l, t in p.edges[tup[i]] if l == label]
                    if not moves:
                        break
                    options.append([(i, t) for t in moves])
            else:
                for combo in itertools.product(*options):
                    if any(t == ERR for _, t in combo):
                        out.append((label, ERR))
                        continue
                    nxt = list(tup)
                    for i, t in combo:
                        nxt[i] = t
                    out.append((label, tuple(nxt)))
        table[tup] = out
    behaving = [i for i, p in enumerate(parts) if p.transitions] or list(range(len(parts)))
    flags = {tup: (all(tup[i] in parts[i].end for i in behaving), all(tup[i] in parts[i].stop for i in range(len(parts))))
             for tup in table}
    return table, flags


def naive_product(parts: list[OLts]) -> OLts:
    table, flags = full_product(parts)
    init = tuple(0 for _ in parts)
    # keep only tuples reachable from the initial one
    seen = {init}
    stack = [init]
    while stack:
        s = stack.pop()
        for _, t in table[s]:
            if t != ERR and t not in seen:
                seen.add(t)
                stack.append(t)
    reach = {s: table[s] for s in seen}
    return explore(init, lambda s: reach[s], lambda s: flags[s][0], lambda s: flags[s][1])


# -- analyses by path enumeration ---------------------------------------------------

def _ordered(lts: OLts, s: int):
    return sorted(lts.edges[s], key=lambda e: (key(e[0]), -1 if e[1] == ERR else e[1]))


def first_path(lts: OLts, start: int, goal: Callable[[int, list], Optional[list]],
               allowed: Optional[set] = None, max_len: Optional[int] = None,
               min_len: int = 0) -> Optional[list[str]]:
    """Smallest (length, then labels) path from ``start`` accepted by ``goal``.

    ``goal(state, path)`` returns the full label list to report or None.
    Iterative deepening: each depth enumerates paths in label order.
    """
    max_len = max_len if max_len is not None else lts.n + 1

    def dfs(s, path, depth):
        if depth == 0:
            return goal(s, path) if len(path) >= min_len else None
        for label, t in _ordered(lts, s):
            if t == ERR or (allowed is not None and t not in allowed):
                continue
            found = dfs(t, path + [label], depth - 1)
            if found is not None:
                return found
        return None

    for depth in range(max_len + 1):
        found = dfs(start, [], depth)
        if found is not None:
            return found
    return None


def reach_sets(lts: OLts) -> list[set[int]]:
    out = []
    for s in range(lts.n):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for _, t in lts.edges[u]:
                if t != ERR and t not in seen:
                    seen.add(t)
                    stack.append(t)
        out.append(seen)
    return out


def terminal_sets(lts: OLts) -> list[tuple[set[int], set[str]]]:
    reach = reach_sets(lts)
    found = []
    for s in sorted(reach[0]):
        comp = {t for t in reach[s] if s in reach[t]}
        if comp != reach[s] or any(comp == c for c, _ in found):
            continue
        if len(comp) == 1 and not lts.edges[s] and s in lts.end:
            continue
        labels = {l for u in comp for l, t in lts.edges[u] if t != ERR}
        found.append((comp, labels))
    return found


def report(lts: OLts, target: str, progress: list[tuple[str, list[str]]] = (), subject: str = "ERROR") -> dict:
    violations = []

    def to_error(s, path):
        for label, t in _ordered(lts, s):
            if t == ERR:
                return path + [label]
        return None

    trace = first_path(lts, 0, to_error)
    if trace is not None:
        violations.append({"kind": "safety", "subject": subject, "trace": trace, "cycle": None, "note": None})

    dead_end = {}

    def dead(s, path):
        if lts.edges[s] or s in lts.end:
            return None
        dead_end["s"] = s
        return path

    trace = first_path(lts, 0, dead)
    if trace is not None:
        note = "terminal-STOP" if dead_end["s"] in lts.stop else None
        violations.append({"kind": "deadlock", "subject": "DEADLOCK", "trace": trace, "cycle": None, "note": note})

    sets = terminal_sets(lts)
    warnings = []
    for name, labels in progress:
        for lab in sorted(set(labels) - set(lts.alphabet)):
            warnings.append(f"progress {name}: {lab!r} is not in the alphabet")
        bad = [comp for comp, internal in sets if not internal & set(labels)]
        if not bad:
            continue
        members = set().union(*bad)
        ends_at = {}

        def into_bad(s, path):
            if s in members:
                ends_at["s"] = s
                return path
            return None

        trace = first_path(lts, 0, into_bad)
        entry = ends_at["s"]
        comp = next(c for c in bad if entry in c)
        cycle = first_path(lts, entry, lambda s, p: p if s == entry else None, allowed=comp, min_len=1) or []
        violations.append({"kind": "progress", "subject": name, "trace": trace, "cycle": cycle, "note": None})

    return {
        "schemaVersion": "1",
        "target": target,
        "result": "FAIL" if violations else "PASS",
        "stats": {"states": lts.n, "transitions": lts.transitions, "alphabet": len(lts.alphabet), "elapsed_ms": 0.0},
        "terminal_sets": len(sets),
        "warnings": warnings,
        "violations": violations,
    }


def aut(lts: OLts) -> str:
    has_err = any(t == ERR for es in lts.edges for _, t in es)
    lines = [f"des (0, {lts.transitions}, {lts.n + (1 if has_err else 0)})"]
    for s, es in enumerate(lts.edges):
        for label, t in sorted(es, key=lambda e: (key(e[0]), -1 if e[1] == ERR else e[1])):
            lines.append(f'({s}, "{label}", {lts.n if t == ERR else t})')
    return "\n".join(lines) + "\n"


# -- Gaia language oracle -----------------------------------------------------------

def regex_language(pattern: str, alphabet: list[str], max_len: int) -> set[tuple[str, ...]]:
    """All words over ``alphabet`` up to ``max_len`` letters matched by a Python regex.

    Each letter is encoded as one character, so ``pattern`` must already use
    those characters (see :func:`encode_letters`).
    """
    compiled = re.compile(pattern)
    code = encode_letters(alphabet)
    out = set()
    for n in range(max_len + 1):
        for word in itertools.product(alphabet, repeat=n):
            if compiled.fullmatch("".join(code[a] for a in word)):
                out.add(word)
    return out


def encode_letters(alphabet: list[str]) -> dict[str, str]:
    return {a: chr(0x4E00 + i) for i, a in enumerate(alphabet)}


def complete_traces(lts: OLts, max_len: int) -> set[tuple[str, ...]]:
    """Label sequences of paths from state 0 to an end state, up to ``max_len`` labels."""
    out = set()
    frontier = {((), 0)}
    for depth in range(max_len + 1):
        nxt = set()
        for word, s in frontier:
            if s in lts.end:
                out.add(word)
            if depth < max_len:
                for label, t in lts.edges[s]:
                    if t != ERR:
                        nxt.add((word + (label,), t))
        frontier = nxt
    return out


def bounded_language(tree, max_len: int) -> set[tuple[str, ...]]:
    """Words of length <= ``max_len`` denoted by a regex written as nested tuples.

    Nodes: ``("atom", name)``, ``("seq", a, b, ...)``, ``("alt", a, b, ...)``,
    ``("star", a)``, ``("plus", a)``, ``("opt", a)``.
    """
    def cat(xs, ys):
        return {x + y for x in xs for y in ys if len(x) + len(y) <= max_len}

    def star(inner):
        out = {()}
        while True:
            grown = out | cat(out, inner)
            if grown == out:
                return out
            out = grown

    kind = tree[0]
    if kind == "atom":
        return {(tree[1],)} if max_len >= 1 else set()
    subs = [bounded_language(t, max_len) for t in tree[1:]]
    if kind == "seq":
        out = {()}
        for s in subs:
            out = cat(out, s)
        return out
    if kind == "alt":
        return set().union(*subs)
    if kind == "star":
        return star(subs[0])
    if kind == "plus":
        return cat(subs[0], star(subs[0]))
    if kind == "opt":
        return {()} | subs[0]
    raise ValueError(kind)


def tree_regex(tree, code: dict[str, str]) -> str:
    """The same tree as a Python regex over one character per activity."""
    kind = tree[0]
    if kind == "atom":
        return re.escape(code[tree[1]])
    inner = [tree_regex(t, code) for t in tree[1:]]
    if kind == "seq":
        return "(?:" + "".join(inner) + ")"
    if kind == "alt":
        return "(?:" + "|".join(inner) + ")"
    return "(?:" + inner[0] + ")" + {"star": "*", "plus": "+", "opt": "?"}[kind]


def tree_atoms(tree) -> list[str]:
    if tree[0] == "atom":
        return [tree[1]]
    return sorted({a for t in tree[1:] for a in tree_atoms(t)})
