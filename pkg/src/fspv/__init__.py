"""Explicit-state checking of FSP-lite models of multi-agent systems.

Typical use::

    from fspv import parse_text, verify
    report = verify(parse_text(source), "SYSTEM")
"""

from .analyzer import Report, Stats, Violation, check_deadlock, check_progress, check_safety, run_all, terminal_sets
from .compiler import compile_process
from .composer import CompositionSpec, apply_relabel, build_target, compose
from .errors import FspError, StateLimitExceeded
from .lts import ERROR, Lts, make_property, to_aut, to_dot
from .syntax import format_spec, parse_text
from .verify import verify

__all__ = [
    "ERROR", "CompositionSpec", "FspError", "Lts", "Report", "StateLimitExceeded", "Stats", "Violation",
    "apply_relabel", "build_target", "check_deadlock", "check_progress", "check_safety", "compile_process",
    "compose", "format_spec", "make_property", "parse_text", "run_all", "terminal_sets", "to_aut", "to_dot",
    "verify",
]
