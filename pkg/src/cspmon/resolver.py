"""Name resolution and static checks over a parsed Spec.

``validate_spec`` is check-only: it either raises ResolveError listing
every violation found, or returns the input Spec unchanged (so it is
trivially idempotent).  ``build_symbols`` evaluates the declaration
layer (constructor order, named set values, channel parameter domains)
into lookup tables that the semantics and the alphabet enumerator use.

Identifier namespaces and how references are resolved:

  * process bodies resolve a bare name as bound variable, then
    constructor, then named set;
  * ``?x`` where x names a constructor is a literal match, not a binder
    (so ``radiation_level?Green`` matches only Green);
  * binders (input variables, clause parameters) may not shadow
    constructors or named sets, which keeps the rule above unambiguous.

Domains are ordered canonically: datatype constructors in declaration
order, integer sets ascending.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResolveError
from .nodes import (
    And, BoolLit, Call, Choice, Compare, Diff, DotItem, Guarded,
    InlineSetType, InputItem, IntLit, Member, Name, Not, Or, PatEmptySet,
    PatInt, PatName, PatWild, Prefix, ProcessDef, RangeSet, RestrictedItem,
    SetLit, SetUnion, Skip, Spec, TypeName,
)


@dataclass
class Symbols:
    """Evaluated declaration layer of a resolved Spec."""

    ctor_index: dict = field(default_factory=dict)    # constructor -> global order
    ctor_datatype: dict = field(default_factory=dict)  # constructor -> datatype name
    datatypes: dict = field(default_factory=dict)      # datatype -> ordered ctor tuple
    named_sets: dict = field(default_factory=dict)     # set name -> frozenset
    channels: dict = field(default_factory=dict)       # channel -> tuple of domain tuples
    processes: dict = field(default_factory=dict)      # process name -> ProcessDef

    def sort_values(self, values) -> tuple:
        """Canonical order: ints ascending, constructors by declaration."""
        return tuple(sorted(values, key=self._value_key))

    def _value_key(self, value):
        if isinstance(value, int):
            return (0, value)
        return (1, self.ctor_index.get(value, len(self.ctor_index)))


class _Checker:
    def __init__(self, spec: Spec) -> None:
        self.spec = spec
        self.violations = []
        self.ctors = set()
        self.set_names = set()
        self.channel_arities = {}
        self.process_arities = {}

    def report(self, message: str) -> None:
        self.violations.append(message)

    def run(self) -> None:
        self.collect_declarations()
        self.check_named_sets()
        self.check_channels()
        for pdef in self.spec.processes:
            self.check_process_def(pdef)

    # -- declaration layer ---------------------------------------------------

    def collect_declarations(self) -> None:
        dt_names = set()
        for dt in self.spec.datatypes:
            if dt.name in dt_names:
                self.report(f"duplicate datatype {dt.name!r}")
            dt_names.add(dt.name)
            seen = set()
            for ctor in dt.constructors:
                if ctor in seen:
                    self.report(f"duplicate constructor {ctor!r} in datatype {dt.name!r}")
                elif ctor in self.ctors:
                    self.report(f"constructor {ctor!r} declared by more than one datatype")
                seen.add(ctor)
                self.ctors.add(ctor)

        for ns in self.spec.named_sets:
            if ns.name in self.set_names:
                self.report(f"duplicate named set {ns.name!r}")
            self.set_names.add(ns.name)

        for ch in self.spec.channels:
            if ch.name in self.channel_arities:
                self.report(f"duplicate channel {ch.name!r}")
            self.channel_arities[ch.name] = len(ch.param_types)

        for pdef in self.spec.processes:
            self.process_arities[pdef.name] = pdef.arity

        # Names that appear in the same reference position must not collide
        # across namespaces, or lookups become ambiguous.
        type_like = {}
        for dt in self.spec.datatypes:
            type_like.setdefault(dt.name, []).append("datatype")
        for ctor in sorted(self.ctors):
            type_like.setdefault(ctor, []).append("constructor")
        for ns_name in sorted(self.set_names):
            type_like.setdefault(ns_name, []).append("named set")
        for name, kinds in type_like.items():
            if len(kinds) > 1:
                self.report(f"name {name!r} declared as both {kinds[0]} and {kinds[1]}")

        for name in sorted(set(self.channel_arities) & set(self.process_arities)):
            self.report(f"name {name!r} declared as both channel and process")

    def check_named_sets(self) -> None:
        for ns in self.spec.named_sets:
            self.check_literal_set(ns.value, f"named set {ns.name!r}")

    def check_literal_set(self, expr, where: str) -> None:
        if isinstance(expr, RangeSet):
            if expr.lo > expr.hi:
                self.report(f"{where}: empty range {expr.lo}..{expr.hi}")
            return
        if isinstance(expr, SetLit):
            kinds = set()
            for elem in expr.elems:
                if isinstance(elem, IntLit):
                    kinds.add("int")
                elif isinstance(elem, Name) and elem.ident in self.ctors:
                    kinds.add("constructor")
                elif isinstance(elem, Name):
                    self.report(f"{where}: undeclared name {elem.ident!r}")
                else:
                    self.report(f"{where}: element is not an integer or constructor literal")
            if len(kinds) > 1:
                self.report(f"{where}: mixes integers and constructors")
            return
        self.report(f"{where}: value must be a literal set or integer range")

    def check_channels(self) -> None:
        for ch in self.spec.channels:
            for i, tref in enumerate(ch.param_types):
                where = f"channel {ch.name!r} parameter {i + 1}"
                if isinstance(tref, TypeName):
                    known = ({dt.name for dt in self.spec.datatypes} | self.set_names)
                    if tref.name not in known:
                        self.report(f"{where}: undeclared type {tref.name!r}")
                elif isinstance(tref, InlineSetType):
                    self.check_literal_set(tref.value, where)

    # -- process layer ---------------------------------------------------------

    def check_process_def(self, pdef: ProcessDef) -> None:
        arity = pdef.arity
        for i, clause in enumerate(pdef.clauses):
            where = f"process {pdef.name!r} clause {i + 1}"
            if len(clause.patterns) != arity:
                self.report(f"{where}: {len(clause.patterns)} patterns where the "
                            f"first clause has {arity}")
            bound = set()
            for pat in clause.patterns:
                if isinstance(pat, PatName) and pat.ident not in self.ctors:
                    if pat.ident in self.set_names:
                        self.report(f"{where}: binder {pat.ident!r} shadows a named set")
                    elif pat.ident in bound:
                        self.report(f"{where}: binder {pat.ident!r} repeated")
                    else:
                        bound.add(pat.ident)
                elif not isinstance(pat, (PatWild, PatInt, PatName, PatEmptySet)):
                    self.report(f"{where}: unsupported pattern {pat!r}")
            self.check_process(clause.body, frozenset(bound), where)

    def check_process(self, proc, bound: frozenset, where: str) -> None:
        if isinstance(proc, Skip):
            return
        if isinstance(proc, Prefix):
            event = proc.event
            if event.channel not in self.channel_arities:
                self.report(f"{where}: undeclared channel {event.channel!r}")
            else:
                want = self.channel_arities[event.channel]
                if len(event.items) != want:
                    self.report(f"{where}: event {event.channel!r} has "
                                f"{len(event.items)} items, channel declares {want}")
            for item in event.items:
                if isinstance(item, DotItem):
                    self.check_expr(item.expr, bound, where)
                elif isinstance(item, InputItem):
                    if item.var in self.ctors:
                        pass  # literal constructor match, binds nothing
                    elif item.var in self.set_names:
                        self.report(f"{where}: input variable {item.var!r} "
                                    f"shadows a named set")
                    else:
                        bound = bound | {item.var}
                elif isinstance(item, RestrictedItem):
                    self.check_expr(item.domain, bound, where)
                    if item.var in self.ctors or item.var in self.set_names:
                        self.report(f"{where}: input variable {item.var!r} shadows "
                                    f"a declared constructor or named set")
                    else:
                        bound = bound | {item.var}
            self.check_process(proc.cont, bound, where)
        elif isinstance(proc, Guarded):
            self.check_expr(proc.cond, bound, where)
            self.check_process(proc.body, bound, where)
        elif isinstance(proc, Choice):
            for branch in proc.branches:
                self.check_process(branch, bound, where)
        elif isinstance(proc, Call):
            if proc.name not in self.process_arities:
                if proc.name in self.channel_arities:
                    self.report(f"{where}: channel {proc.name!r} used as a process "
                                f"(an event needs '->')")
                else:
                    self.report(f"{where}: undeclared process {proc.name!r}")
            elif len(proc.args) != self.process_arities[proc.name]:
                self.report(f"{where}: call to {proc.name!r} with {len(proc.args)} "
                            f"arguments, defined with {self.process_arities[proc.name]}")
            for arg in proc.args:
                self.check_expr(arg, bound, where)
        else:
            self.report(f"{where}: unsupported process form {proc!r}")

    def check_expr(self, expr, bound: frozenset, where: str) -> None:
        if isinstance(expr, (IntLit, BoolLit, RangeSet)):
            return
        if isinstance(expr, Name):
            if (expr.ident not in bound and expr.ident not in self.ctors
                    and expr.ident not in self.set_names):
                self.report(f"{where}: undeclared name {expr.ident!r}")
            return
        if isinstance(expr, SetLit):
            for elem in expr.elems:
                self.check_expr(elem, bound, where)
            return
        if isinstance(expr, Member):
            self.check_expr(expr.item, bound, where)
            self.check_expr(expr.set, bound, where)
            return
        if isinstance(expr, (Diff, SetUnion, Compare, And, Or)):
            self.check_expr(expr.left, bound, where)
            self.check_expr(expr.right, bound, where)
            return
        if isinstance(expr, Not):
            self.check_expr(expr.operand, bound, where)
            return
        self.report(f"{where}: unsupported expression form {expr!r}")


def validate_spec(spec: Spec) -> Spec:
    """Check a parsed Spec; raise ResolveError listing every violation."""
    checker = _Checker(spec)
    checker.run()
    if checker.violations:
        raise ResolveError(checker.violations)
    return spec


def _literal_set_values(expr, ctors: set):
    if isinstance(expr, RangeSet):
        return tuple(range(expr.lo, expr.hi + 1))
    values = []
    for elem in expr.elems:
        if isinstance(elem, IntLit):
            values.append(elem.value)
        else:
            values.append(elem.ident)
    return tuple(values)


def build_symbols(spec: Spec) -> Symbols:
    """Evaluate the declaration layer of a resolved Spec into lookup tables."""
    syms = Symbols()
    for dt in spec.datatypes:
        syms.datatypes[dt.name] = dt.constructors
        for ctor in dt.constructors:
            syms.ctor_index[ctor] = len(syms.ctor_index)
            syms.ctor_datatype[ctor] = dt.name

    ordered_sets = {}
    for ns in spec.named_sets:
        values = _literal_set_values(ns.value, set(syms.ctor_index))
        ordered_sets[ns.name] = syms.sort_values(set(values))
        syms.named_sets[ns.name] = frozenset(values)

    for ch in spec.channels:
        domains = []
        for tref in ch.param_types:
            if isinstance(tref, TypeName):
                if tref.name in syms.datatypes:
                    domains.append(syms.datatypes[tref.name])
                else:
                    domains.append(ordered_sets[tref.name])
            else:
                values = _literal_set_values(tref.value, set(syms.ctor_index))
                domains.append(syms.sort_values(set(values)))
        syms.channels[ch.name] = tuple(domains)

    for pdef in spec.processes:
        syms.processes[pdef.name] = pdef
    return syms
