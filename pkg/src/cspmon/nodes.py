"""Abstract syntax for the supported CSP subset.

All nodes are frozen dataclasses: equality and hashing are structural,
which the synthesizer relies on to memoize states by their closed form.
External choice is stored n-ary (it is associative) so that generated
models with thousands of branches stay shallow.

Runtime values are plain Python data: ``int`` for integers, ``str`` for
datatype constructors, ``frozenset`` for finite sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Value = Union[int, str, frozenset]


# --------------------------------------------------------------------------
# Expressions (values, booleans and sets share one grammar)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Name:
    """Identifier reference: a bound variable, a constructor or a named set."""

    ident: str


@dataclass(frozen=True)
class SetLit:
    elems: tuple  # tuple of Expr; () is the empty-set literal


@dataclass(frozen=True)
class RangeSet:
    lo: int
    hi: int


@dataclass(frozen=True)
class Member:
    item: "Expr"
    set: "Expr"


@dataclass(frozen=True)
class Diff:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class SetUnion:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compare:
    op: str  # "==" or "!="
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


Expr = Union[
    IntLit, BoolLit, Name, SetLit, RangeSet,
    Member, Diff, SetUnion, Compare, Not, And, Or,
]


# --------------------------------------------------------------------------
# Events
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DotItem:
    """A fully determined parameter: ``.e`` (and the output sugar ``!e``)."""

    expr: Expr


@dataclass(frozen=True)
class InputItem:
    """``?x``: binds x, or matches a single value when x names a constructor."""

    var: str


@dataclass(frozen=True)
class RestrictedItem:
    """``?x:(S)``: binds x, restricted to members of the set S."""

    var: str
    domain: Expr


EventItem = Union[DotItem, InputItem, RestrictedItem]


@dataclass(frozen=True)
class EventExpr:
    channel: str
    items: tuple  # tuple of EventItem


# --------------------------------------------------------------------------
# Processes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Prefix:
    event: EventExpr
    cont: "ProcessExpr"


@dataclass(frozen=True)
class Choice:
    """External choice over two or more branches."""

    branches: tuple  # tuple of ProcessExpr, length >= 2


@dataclass(frozen=True)
class Guarded:
    cond: Expr
    body: "ProcessExpr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple  # tuple of Expr


ProcessExpr = Union[Skip, Prefix, Choice, Guarded, Call]


# --------------------------------------------------------------------------
# Patterns (process definition heads)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PatWild:
    pass


@dataclass(frozen=True)
class PatInt:
    value: int


@dataclass(frozen=True)
class PatName:
    """A constructor literal if the name is declared, a binder otherwise."""

    ident: str


@dataclass(frozen=True)
class PatEmptySet:
    pass


Pattern = Union[PatWild, PatInt, PatName, PatEmptySet]


# --------------------------------------------------------------------------
# Declarations
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DatatypeDecl:
    name: str
    constructors: tuple  # tuple of str, non-empty


@dataclass(frozen=True)
class NamedSetDecl:
    name: str
    value: Expr  # SetLit of literals, or RangeSet


@dataclass(frozen=True)
class TypeName:
    """Reference to a datatype or named set used as a channel parameter type."""

    name: str


@dataclass(frozen=True)
class InlineSetType:
    """An inline finite integer set used as a channel parameter type."""

    value: Expr  # SetLit of IntLit, or RangeSet


TypeRef = Union[TypeName, InlineSetType]


@dataclass(frozen=True)
class ChannelDecl:
    name: str
    param_types: tuple  # tuple of TypeRef, possibly empty


@dataclass(frozen=True)
class Clause:
    patterns: tuple  # tuple of Pattern
    body: ProcessExpr


@dataclass(frozen=True)
class ProcessDef:
    name: str
    clauses: tuple  # tuple of Clause, non-empty, tried in source order

    @property
    def arity(self) -> int:
        return len(self.clauses[0].patterns)


@dataclass(frozen=True)
class Spec:
    datatypes: tuple  # tuple of DatatypeDecl
    named_sets: tuple  # tuple of NamedSetDecl
    channels: tuple  # tuple of ChannelDecl
    processes: tuple  # tuple of ProcessDef
