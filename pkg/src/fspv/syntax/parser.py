"""Recursive-descent parser for FSP-lite.

Grammar (informal)::

    spec      := item*
    item      := 'const' UPPER '=' expr
               | 'range' UPPER '=' expr '..' expr
               | 'progress' UPPER '=' labelset
               | '||' UPPER '=' '(' comp ('||' comp)* ')' ['/' '{' label '/' label, ... '}'] '.'
               | ['property'] local (',' local)* '.'
    local     := UPPER ('[' var ':' range ']')* '=' proc
    proc      := STOP | END | ERROR | UPPER ('[' expr ']')* | '(' branch ('|' branch)* ')'
    branch    := ['when' '(' expr ')'] (END | action ('->' action)* '->' proc)
    action    := label | '{' label (',' label)* '}'
"""

from __future__ import annotations

from typing import Optional

from ..errors import DuplicateDefinition, EvalError, FspSyntaxError, UnresolvedReference
from .evaluate import eval_expr
from .lexer import Token, tokenize
from .tree import (
    ActionElem, ActionLabel, Binary, Binding, Branch, Choice, Component, CompositeDef, End, Error,
    Expr, Index, Interval, LabelPart, LabelSet, LocalDef, Name, Num, Param, Prefix, ProcessDef,
    ProcExpr, ProgressDef, RangeRef, RangeSpec, Ref, Spec, Stop, Unary,
)

_EQUALITY = ("==", "!=")
_RELATIONAL = ("<", "<=", ">", ">=")


class _Parser:
    def __init__(self, tokens: list[Token]):
        last = tokens[-1] if tokens else None
        eof_line = last.line if last else 1
        eof_col = last.column + len(last.text) if last else 1
        self.tokens = tokens + [Token("eof", "", eof_line, eof_col)]
        self.pos = 0
        self.guard_depth = 0
        self.constants: dict[str, int] = {}
        self.ranges: dict[str, tuple[int, int]] = {}
        self.names: set[str] = set()

    # -- token helpers --------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str, kind: Optional[str] = None) -> bool:
        t = self.tok
        return t.text == text and t.kind != "eof" and (kind is None or t.kind == kind)

    def at_kind(self, kind: str) -> bool:
        return self.tok.kind == kind

    def fail(self, expected: str, tok: Optional[Token] = None) -> FspSyntaxError:
        tok = tok or self.tok
        return FspSyntaxError(tok.line, tok.column, expected, str(tok))

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if self.at(text) and self.tok.kind in ("punct", "keyword"):
            return self.advance()
        raise self.fail(repr(text))

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.fail(what)
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text) and self.tok.kind in ("punct", "keyword"):
            self.pos += 1
            return True
        return False

    def define(self, tok: Token) -> None:
        if tok.text in self.names:
            raise DuplicateDefinition(tok.text)
        self.names.add(tok.text)

    def const_value(self, expr: Expr, tok: Token) -> int:
        try:
            return int(eval_expr(expr, {}, self.constants))
        except EvalError as exc:
            raise FspSyntaxError(tok.line, tok.column, "constant expression", str(exc)) from None

    # -- top level ------------------------------------------------------------

    def parse_spec(self) -> Spec:
        processes: list[ProcessDef] = []
        composites: list[CompositeDef] = []
        properties: set[str] = set()
        progress: list[ProgressDef] = []
        while not self.at_kind("eof"):
            if self.accept("const"):
                name = self.expect_kind("upper", "constant name")
                self.define(name)
                self.expect("=")
                start = self.tok
                self.constants[name.text] = self.const_value(self.expr(), start)
            elif self.accept("range"):
                name = self.expect_kind("upper", "range name")
                self.define(name)
                self.expect("=")
                lo_tok = self.tok
                lo = self.const_value(self.expr(), lo_tok)
                self.expect("..")
                hi = self.const_value(self.expr(), self.tok)
                if lo > hi:
                    raise FspSyntaxError(lo_tok.line, lo_tok.column, "range with lo <= hi", f"{lo}..{hi}")
                self.ranges[name.text] = (lo, hi)
            elif self.accept("progress"):
                name = self.expect_kind("upper", "progress name")
                self.define(name)
                self.expect("=")
                progress.append(ProgressDef(name.text, self.label_set()))
            elif self.at("||"):
                composites.append(self.composite())
            else:
                is_property = self.accept("property")
                pdef = self.process_def()
                processes.append(pdef)
                if is_property:
                    properties.add(pdef.name)
        spec = Spec(
            constants=dict(self.constants),
            ranges=dict(self.ranges),
            processes=tuple(processes),
            composites=tuple(composites),
            properties=frozenset(properties),
            progress=tuple(progress),
        )
        return spec

    def process_def(self) -> ProcessDef:
        head = self.tok
        if head.kind != "upper":
            raise self.fail("definition")
        self.define(head)
        local_names: set[str] = set()
        locals_: list[LocalDef] = []
        while True:
            name = self.expect_kind("upper", "process name")
            if name.text in local_names:
                raise DuplicateDefinition(name.text)
            local_names.add(name.text)
            params: list[Param] = []
            while self.accept("["):
                var = self.expect_kind("ident", "parameter variable")
                self.expect(":")
                params.append(Param(var.text, self.range_spec()))
                self.expect("]")
            self.expect("=")
            locals_.append(LocalDef(name.text, tuple(params), self.proc_expr()))
            if self.accept("."):
                break
            if not self.accept(","):
                raise self.fail("',' or '.'")
        return ProcessDef(head.text, tuple(locals_))

    def composite(self) -> CompositeDef:
        self.expect("||")
        name = self.expect_kind("upper", "composite name")
        self.define(name)
        self.expect("=")
        self.expect("(")
        components = [self.component()]
        while self.accept("||"):
            components.append(self.component())
        self.expect(")")
        relabels: list[tuple[ActionLabel, ActionLabel]] = []
        if self.accept("/"):
            self.expect("{")
            while True:
                new = self.label()
                self.expect("/")
                old = self.label()
                relabels.append((new, old))
                if self.accept("}"):
                    break
                self.expect(",")
        self.expect(".")
        return CompositeDef(name.text, tuple(components), tuple(relabels))

    def component(self) -> Component:
        prefix = None
        if self.at_kind("ident"):
            word = self.advance()
            lo = hi = None
            if self.accept("["):
                lo_tok = self.tok
                lo = self.expr()
                if self.accept(".."):
                    hi = self.expr()
                    if self.const_value(lo, lo_tok) > self.const_value(hi, lo_tok):
                        raise FspSyntaxError(lo_tok.line, lo_tok.column, "replication with lo <= hi", "empty range")
                self.expect("]")
            self.expect(":")
            prefix = Prefix(word.text, lo, hi)
        name = self.expect_kind("upper", "process reference")
        return Component(prefix, Ref(name.text, self.args()))

    def range_spec(self) -> RangeSpec:
        if self.at_kind("upper") and self.peek().text == "]":
            return RangeRef(self.advance().text)
        lo_tok = self.tok
        lo = self.expr()
        self.expect("..")
        hi = self.expr()
        try:
            bad = eval_expr(lo, {}, self.constants) > eval_expr(hi, {}, self.constants)
        except EvalError:
            bad = False
        if bad:
            raise FspSyntaxError(lo_tok.line, lo_tok.column, "range with lo <= hi", "empty range")
        return Interval(lo, hi)

    # -- process expressions --------------------------------------------------

    def args(self) -> tuple[Expr, ...]:
        args = []
        while self.accept("["):
            args.append(self.expr())
            self.expect("]")
        return tuple(args)

    def proc_expr(self) -> ProcExpr:
        if self.accept("STOP"):
            return Stop()
        if self.accept("END"):
            return End()
        if self.accept("ERROR"):
            return Error()
        if self.at_kind("upper"):
            name = self.advance()
            return Ref(name.text, self.args())
        if self.accept("("):
            branches = [self.branch()]
            while self.accept("|"):
                branches.append(self.branch())
            self.expect(")")
            return Choice(tuple(branches))
        raise self.fail("process expression")

    def branch(self) -> Branch:
        guard = None
        if self.accept("when"):
            self.expect("(")
            self.guard_depth += 1
            guard = self.expr()
            self.guard_depth -= 1
            self.expect(")")
        if self.accept("END"):
            return Branch(guard, (), End())
        actions = [self.action()]
        self.expect("->")
        while self.at_kind("ident") or self.at("{"):
            actions.append(self.action())
            self.expect("->")
        return Branch(guard, tuple(actions), self.proc_expr())

    def action(self) -> ActionElem:
        if self.at("{"):
            return self.label_set()
        return self.label(allow_binding=True)

    def label_set(self) -> LabelSet:
        self.expect("{")
        labels = [self.label()]
        while self.accept(","):
            labels.append(self.label())
        self.expect("}")
        return LabelSet(tuple(labels))

    def label(self, allow_binding: bool = False) -> ActionLabel:
        first = self.expect_kind("ident", "action label")
        parts: list[LabelPart] = [first.text]
        while True:
            if self.at(".") and self.peek().kind in ("ident", "int"):
                self.advance()
                nxt = self.advance()
                parts.append(nxt.text if nxt.kind == "ident" else Index(Num(int(nxt.text))))
            elif self.at("["):
                self.advance()
                if allow_binding and self.at_kind("ident") and self.peek().text == ":":
                    var = self.advance().text
                    self.advance()
                    parts.append(Binding(var, self.range_spec()))
                else:
                    parts.append(Index(self.expr()))
                self.expect("]")
            else:
                return ActionLabel(tuple(parts))

    # -- expressions ----------------------------------------------------------

    def expr(self) -> Expr:
        return self.disjunction()

    def disjunction(self) -> Expr:
        left = self.conjunction()
        while self.guard_depth and self.tok.kind == "punct" and self.tok.text in ("||", "|"):
            self.advance()
            left = Binary("||", left, self.conjunction())
        return left

    def conjunction(self) -> Expr:
        left = self.equality()
        while self.accept("&&"):
            left = Binary("&&", left, self.equality())
        return left

    def _binary_level(self, ops, next_level) -> Expr:
        left = next_level()
        while self.tok.kind == "punct" and self.tok.text in ops:
            op = self.advance().text
            left = Binary(op, left, next_level())
        return left

    def equality(self) -> Expr:
        return self._binary_level(_EQUALITY, self.relational)

    def relational(self) -> Expr:
        return self._binary_level(_RELATIONAL, self.additive)

    def additive(self) -> Expr:
        return self._binary_level(("+", "-"), self.multiplicative)

    def multiplicative(self) -> Expr:
        return self._binary_level(("*", "/", "%"), self.unary)

    def unary(self) -> Expr:
        if self.tok.kind == "punct" and self.tok.text in ("-", "!"):
            op = self.advance().text
            return Unary(op, self.unary())
        return self.primary()

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text))
        if t.kind in ("ident", "upper"):
            self.advance()
            return Name(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        raise self.fail("expression")


def _walk_names(expr: ProcExpr):
    """Yield ("process", name) and ("range", name) for every reference in ``expr``."""
    if isinstance(expr, Ref):
        yield "process", expr.name
    elif isinstance(expr, Choice):
        for b in expr.branches:
            for a in b.actions:
                if isinstance(a, ActionLabel):
                    for part in a.parts:
                        if isinstance(part, Binding) and isinstance(part.range, RangeRef):
                            yield "range", part.range.name
            yield from _walk_names(b.continuation)


def check_references(spec: Spec) -> None:
    """Raise UnresolvedReference for any process, composite or range name that is not defined."""
    top = {p.name for p in spec.processes}
    composites = {c.name for c in spec.composites}
    for p in spec.processes:
        local = {l.name for l in p.locals}
        for l in p.locals:
            for prm in l.params:
                if isinstance(prm.range, RangeRef) and prm.range.name not in spec.ranges:
                    raise UnresolvedReference(prm.range.name)
            for kind, name in _walk_names(l.body):
                if kind == "range" and name not in spec.ranges:
                    raise UnresolvedReference(name)
                if kind == "process" and name not in local and name not in top:
                    raise UnresolvedReference(name)
    for c in spec.composites:
        for comp in c.components:
            if comp.target.name not in top and comp.target.name not in composites:
                raise UnresolvedReference(comp.target.name)


def parse(tokens: list[Token], check: bool = True) -> Spec:
    """Parse a token list produced by :func:`tokenize` into a :class:`Spec`.

    With ``check=False`` references to undefined names are left for the
    caller to resolve (used when fragments are merged).
    """
    spec = _Parser(tokens).parse_spec()
    if check:
        check_references(spec)
    return spec


def parse_text(text: str, check: bool = True) -> Spec:
    return parse(tokenize(text), check)
