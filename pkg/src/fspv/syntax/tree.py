"""Immutable syntax tree for FSP-lite.

Nodes are frozen dataclasses, so two parses of the same text compare equal.
Source positions are deliberately not stored on nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


# -- integer / boolean expressions -------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    """A bound variable (lowercase) or a constant (uppercase)."""
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # '-' or '!'
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / % == != < <= > >= && ||
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Name, Unary, Binary]


# -- ranges and action labels ------------------------------------------------

@dataclass(frozen=True)
class RangeRef:
    name: str


@dataclass(frozen=True)
class Interval:
    lo: Expr
    hi: Expr


RangeSpec = Union[RangeRef, Interval]


@dataclass(frozen=True)
class Index:
    """``[expr]`` inside an action label."""
    expr: Expr


@dataclass(frozen=True)
class Binding:
    """``[var:range]`` inside an action label; one transition per value."""
    var: str
    range: RangeSpec


LabelPart = Union[str, Index, Binding]


@dataclass(frozen=True)
class ActionLabel:
    """A possibly dotted, possibly indexed action such as ``c[1].full.moveto[part]``.

    ``parts`` interleaves words (str) with Index/Binding components; a word
    that follows another part is joined by a dot in the source text.
    """
    parts: tuple[LabelPart, ...]


@dataclass(frozen=True)
class LabelSet:
    labels: tuple[ActionLabel, ...]


ActionElem = Union[ActionLabel, LabelSet]


# -- process expressions -----------------------------------------------------

@dataclass(frozen=True)
class Stop:
    pass


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Error:
    pass


@dataclass(frozen=True)
class Ref:
    name: str
    args: tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Branch:
    """``[when (guard)] a -> b -> continuation``.

    A branch with no actions must have an ``End`` continuation; it marks the
    enclosing choice as a state where successful termination is allowed.
    """
    guard: Optional[Expr]
    actions: tuple[ActionElem, ...]
    continuation: "ProcExpr"


@dataclass(frozen=True)
class Choice:
    branches: tuple[Branch, ...]


ProcExpr = Union[Stop, End, Error, Ref, Choice]


# -- definitions -------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    var: str
    range: RangeSpec


@dataclass(frozen=True)
class LocalDef:
    name: str
    params: tuple[Param, ...]
    body: ProcExpr


@dataclass(frozen=True)
class ProcessDef:
    name: str
    locals: tuple[LocalDef, ...]

    @property
    def entry(self) -> LocalDef:
        return self.locals[0]


@dataclass(frozen=True)
class Prefix:
    """Instance labeling ``word:``, ``word[i]:`` or ``word[lo..hi]:``."""
    word: str
    lo: Optional[Expr] = None
    hi: Optional[Expr] = None


@dataclass(frozen=True)
class Component:
    prefix: Optional[Prefix]
    target: Ref


@dataclass(frozen=True)
class CompositeDef:
    name: str
    components: tuple[Component, ...]
    relabels: tuple[tuple[ActionLabel, ActionLabel], ...] = ()  # (new, old)


@dataclass(frozen=True)
class ProgressDef:
    name: str
    actions: LabelSet


@dataclass(frozen=True)
class Spec:
    constants: dict[str, int] = field(default_factory=dict)
    ranges: dict[str, tuple[int, int]] = field(default_factory=dict)
    processes: tuple[ProcessDef, ...] = ()
    composites: tuple[CompositeDef, ...] = ()
    properties: frozenset[str] = frozenset()
    progress: tuple[ProgressDef, ...] = ()

    def process(self, name: str) -> Optional[ProcessDef]:
        for p in self.processes:
            if p.name == name:
                return p
        return None

    def composite(self, name: str) -> Optional[CompositeDef]:
        for c in self.composites:
            if c.name == name:
                return c
        return None

    @property
    def targets(self) -> list[str]:
        return [p.name for p in self.processes] + [c.name for c in self.composites]
