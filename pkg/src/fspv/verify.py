"""End-to-end pipeline: build a named target of a parsed spec and check it."""

from __future__ import annotations

import time
import warnings
from typing import Optional

from .analyzer import Report, run_all
from .composer import build_target, eval_label
from .syntax.tree import Spec


def progress_sets(spec: Spec) -> list[tuple[str, list[str]]]:
    return [(p.name, [eval_label(l, spec.constants) for l in p.actions.labels]) for p in spec.progress]


def properties_used(spec: Spec, target: str) -> list[str]:
    """Property processes reachable through the composite structure of ``target``."""
    found: list[str] = []
    todo, seen = [target], set()
    while todo:
        name = todo.pop()
        if name in seen:
            continue
        seen.add(name)
        if name in spec.properties:
            found.append(name)
        comp = spec.composite(name)
        if comp is not None:
            todo.extend(c.target.name for c in comp.components)
    return sorted(found)


def verify(spec: Spec, target: str, limit: Optional[int] = None) -> Report:
    """Build ``target`` and run safety, deadlock and every progress check in ``spec``.

    Warnings from relabelling and progress checks end up in ``Report.warnings``
    and are re-emitted.
    """
    started = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        lts = build_target(spec, target, limit=limit)
        subject = ",".join(properties_used(spec, target)) or "ERROR"
        report = run_all(lts, progress_sets(spec), subject, started)
    report.warnings = [str(w.message) for w in caught]
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    return report
