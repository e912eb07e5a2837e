"""Render a Spec back to concrete syntax.

The output reparses to a structurally identical AST, which the test
suite checks as a round-trip property.  Parentheses are inserted from
precedence (or < and < not < comparison < atom for expressions; choice
< guard < prefix for processes) rather than preserved from the input.
"""

from __future__ import annotations

from .nodes import (
    And, BoolLit, Call, ChannelDecl, Choice, Clause, Compare, DatatypeDecl,
    Diff, DotItem, EventExpr, Guarded, InlineSetType, InputItem, IntLit,
    Member, Name, NamedSetDecl, Not, Or, PatEmptySet, PatInt, PatName,
    PatWild, Prefix, ProcessDef, RangeSet, RestrictedItem, SetLit, SetUnion,
    Skip, Spec, TypeName,
)

_OR, _AND, _NOT, _CMP, _ATOM = 1, 2, 3, 4, 5

_SET_FUNC_NAMES = {Member: "member", Diff: "diff", SetUnion: "union"}


def render_expr(expr, parent_prec: int = _OR) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, SetLit):
        return "{" + ", ".join(render_expr(e) for e in expr.elems) + "}"
    if isinstance(expr, RangeSet):
        return f"{{{expr.lo}..{expr.hi}}}"
    if isinstance(expr, (Member, Diff, SetUnion)):
        name = _SET_FUNC_NAMES[type(expr)]
        first = expr.item if isinstance(expr, Member) else expr.left
        second = expr.set if isinstance(expr, Member) else expr.right
        return f"{name}({render_expr(first)}, {render_expr(second)})"
    if isinstance(expr, Compare):
        text = (f"{render_expr(expr.left, _ATOM)} {expr.op} "
                f"{render_expr(expr.right, _ATOM)}")
        return _wrap(text, _CMP, parent_prec)
    if isinstance(expr, Not):
        return _wrap(f"not {render_expr(expr.operand, _NOT)}", _NOT, parent_prec)
    if isinstance(expr, And):
        text = f"{render_expr(expr.left, _AND)} and {render_expr(expr.right, _AND + 1)}"
        return _wrap(text, _AND, parent_prec)
    if isinstance(expr, Or):
        text = f"{render_expr(expr.left, _OR)} or {render_expr(expr.right, _OR + 1)}"
        return _wrap(text, _OR, parent_prec)
    raise TypeError(f"not an expression node: {expr!r}")


def _wrap(text: str, prec: int, parent_prec: int) -> str:
    return f"({text})" if prec < parent_prec else text


def render_event(event: EventExpr) -> str:
    parts = [event.channel]
    for item in event.items:
        if isinstance(item, DotItem):
            parts.append("." + render_expr(item.expr, _ATOM))
        elif isinstance(item, InputItem):
            parts.append("?" + item.var)
        elif isinstance(item, RestrictedItem):
            parts.append(f"?{item.var}:({render_expr(item.domain)})")
        else:
            raise TypeError(f"not an event item: {item!r}")
    return "".join(parts)


def render_process(proc) -> str:
    if isinstance(proc, Skip):
        return "SKIP"
    if isinstance(proc, Call):
        if not proc.args:
            return proc.name
        return f"{proc.name}({', '.join(render_expr(a) for a in proc.args)})"
    if isinstance(proc, Prefix):
        return f"{render_event(proc.event)} -> {_render_branch(proc.cont)}"
    if isinstance(proc, Guarded):
        return f"{render_expr(proc.cond)} & {_render_branch(proc.body)}"
    if isinstance(proc, Choice):
        return " [] ".join(_render_branch(b) for b in proc.branches)
    raise TypeError(f"not a process node: {proc!r}")


def _render_branch(proc) -> str:
    """Render below a choice: nested choices need explicit grouping."""
    text = render_process(proc)
    return f"({text})" if isinstance(proc, Choice) else text


def render_pattern(pat) -> str:
    if isinstance(pat, PatWild):
        return "_"
    if isinstance(pat, PatInt):
        return str(pat.value)
    if isinstance(pat, PatName):
        return pat.ident
    if isinstance(pat, PatEmptySet):
        return "{}"
    raise TypeError(f"not a pattern node: {pat!r}")


def render_spec(spec: Spec) -> str:
    lines = []
    for dt in spec.datatypes:
        lines.append(f"datatype {dt.name} = {' | '.join(dt.constructors)}")
    for ns in spec.named_sets:
        lines.append(f"{ns.name} = {render_expr(ns.value)}")
    for ch in spec.channels:
        if ch.param_types:
            types = ".".join(
                t.name if isinstance(t, TypeName) else render_expr(t.value)
                for t in ch.param_types
            )
            lines.append(f"channel {ch.name} : {types}")
        else:
            lines.append(f"channel {ch.name}")
    for pdef in spec.processes:
        for clause in pdef.clauses:
            head = pdef.name
            if clause.patterns:
                head += f"({', '.join(render_pattern(p) for p in clause.patterns)})"
            lines.append(f"{head} = {render_process(clause.body)}")
    return "\n".join(lines) + "\n"
