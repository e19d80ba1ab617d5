"""Canonical pretty-printer; ``parse_text(format_spec(s)) == s`` for every valid Spec."""

from __future__ import annotations

from .tree import (
    ActionElem, ActionLabel, Binary, Binding, Branch, Choice, CompositeDef, End, Error, Expr,
    Index, Interval, LabelSet, LocalDef, Name, Num, ProcessDef, ProcExpr, RangeRef, RangeSpec,
    Ref, Spec, Stop, Unary,
)

_PREC = {
    "||": 1, "&&": 2, "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5, "*": 6, "/": 6, "%": 6,
}
_UNARY_PREC = 7


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary):
        return _UNARY_PREC
    return 8


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Unary):
        inner = format_expr(e.operand)
        return f"{e.op}({inner})" if _prec(e.operand) < _UNARY_PREC else f"{e.op}{inner}"
    p = _PREC[e.op]
    left = format_expr(e.left)
    right = format_expr(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def format_range(r: RangeSpec) -> str:
    if isinstance(r, RangeRef):
        return r.name
    return f"{format_expr(r.lo)}..{format_expr(r.hi)}"


def format_label(label: ActionLabel) -> str:
    out = []
    for i, part in enumerate(label.parts):
        if isinstance(part, str):
            out.append(part if i == 0 else "." + part)
        elif isinstance(part, Index):
            out.append(f"[{format_expr(part.expr)}]")
        elif isinstance(part, Binding):
            out.append(f"[{part.var}:{format_range(part.range)}]")
    return "".join(out)


def _label_set(ls: LabelSet) -> str:
    return "{" + ", ".join(format_label(l) for l in ls.labels) + "}"


def format_action(a: ActionElem) -> str:
    return _label_set(a) if isinstance(a, LabelSet) else format_label(a)


def format_proc(p: ProcExpr, indent: str = "") -> str:
    if isinstance(p, Stop):
        return "STOP"
    if isinstance(p, End):
        return "END"
    if isinstance(p, Error):
        return "ERROR"
    if isinstance(p, Ref):
        return p.name + "".join(f"[{format_expr(a)}]" for a in p.args)
    branches = [_branch(b, indent + "    ") for b in p.branches]
    if len(branches) == 1 and "\n" not in branches[0]:
        return f"({branches[0]})"
    sep = f"\n{indent}  | "
    return f"(\n{indent}    " + sep.join(branches) + f"\n{indent})"


def _branch(b: Branch, indent: str) -> str:
    guard = f"when ({format_expr(b.guard)}) " if b.guard is not None else ""
    if not b.actions:
        return guard + "END"
    seq = " -> ".join(format_action(a) for a in b.actions)
    return f"{guard}{seq} -> {format_proc(b.continuation, indent)}"


def _local(l: LocalDef) -> str:
    params = "".join(f"[{p.var}:{format_range(p.range)}]" for p in l.params)
    return f"{l.name}{params} = {format_proc(l.body)}"


def format_process(p: ProcessDef, is_property: bool = False) -> str:
    head = "property " if is_property else ""
    return head + ",\n".join(_local(l) for l in p.locals) + "."


def format_composite(c: CompositeDef) -> str:
    parts = []
    for comp in c.components:
        prefix = ""
        if comp.prefix is not None:
            pf = comp.prefix
            if pf.lo is None:
                prefix = f"{pf.word}:"
            elif pf.hi is None:
                prefix = f"{pf.word}[{format_expr(pf.lo)}]:"
            else:
                prefix = f"{pf.word}[{format_expr(pf.lo)}..{format_expr(pf.hi)}]:"
        parts.append(prefix + format_proc(comp.target))
    text = f"||{c.name} = (" + " || ".join(parts) + ")"
    if c.relabels:
        pairs = ", ".join(f"{format_label(new)}/{format_label(old)}" for new, old in c.relabels)
        text += f"\n    /{{{pairs}}}"
    return text + "."


def format_spec(spec: Spec) -> str:
    """Render ``spec`` as canonical FSP-lite text (``&`` is written ``&&``)."""
    blocks: list[str] = []
    decls = [f"const {k} = {v}" for k, v in spec.constants.items()]
    decls += [f"range {k} = {lo}..{hi}" for k, (lo, hi) in spec.ranges.items()]
    if decls:
        blocks.append("\n".join(decls))
    blocks += [format_process(p, p.name in spec.properties) for p in spec.processes]
    blocks += [format_composite(c) for c in spec.composites]
    if spec.progress:
        blocks.append("\n".join(f"progress {p.name} = {_label_set(p.actions)}" for p in spec.progress))
    return "\n\n".join(blocks) + "\n"
