"""Small-step semantics of the process language.

This module answers one question: given a process expression closed by
an environment, what are its initial transitions and where do they go?
The synthesizer drives it breadth-first to build the full graph.

State identity is the canonical closed form:

  * a call is (process name, argument value tuple);
  * Skip and the post-termination state are single shared states;
  * anything else is (expression node, environment restricted to the
    expression's free variables).

Recursion through calls that never reach a prefix (e.g. ``P = P``)
contributes no transitions; the guard set ``visiting`` cuts such
cycles, which computes the least fixpoint of the initials equations.
"""

from __future__ import annotations

import itertools

from .errors import EvalError
from .lts import TICK, Event
from .nodes import (
    And, BoolLit, Call, Choice, Compare, Diff, DotItem, EventExpr, Guarded,
    InputItem, IntLit, Member, Name, Not, Or, PatEmptySet, PatInt, PatName,
    PatWild, Prefix, ProcessDef, RangeSet, RestrictedItem, SetLit, SetUnion,
    Skip,
)
from .resolver import Symbols

SKIP_KEY = ("skip",)
OMEGA_KEY = ("omega",)

_EMPTY_ENV = ()


# --------------------------------------------------------------------------
# Expression evaluation
# --------------------------------------------------------------------------

def eval_expr(expr, env: dict, syms: Symbols):
    """Evaluate a closed expression to int, constructor name, bool or frozenset."""
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, BoolLit):
        return expr.value
    if isinstance(expr, Name):
        ident = expr.ident
        if ident in env:
            return env[ident]
        if ident in syms.ctor_index:
            return ident
        value = syms.named_sets.get(ident)
        if value is None:
            raise EvalError(f"unknown name {ident!r} during evaluation")
        return value
    if isinstance(expr, SetLit):
        return frozenset(eval_expr(e, env, syms) for e in expr.elems)
    if isinstance(expr, RangeSet):
        return frozenset(range(expr.lo, expr.hi + 1))
    if isinstance(expr, Member):
        return eval_expr(expr.item, env, syms) in _as_set(expr.set, env, syms)
    if isinstance(expr, Diff):
        return _as_set(expr.left, env, syms) - _as_set(expr.right, env, syms)
    if isinstance(expr, SetUnion):
        return _as_set(expr.left, env, syms) | _as_set(expr.right, env, syms)
    if isinstance(expr, Compare):
        left = eval_expr(expr.left, env, syms)
        right = eval_expr(expr.right, env, syms)
        return left == right if expr.op == "==" else left != right
    if isinstance(expr, Not):
        return not _as_bool(expr.operand, env, syms)
    if isinstance(expr, And):
        return _as_bool(expr.left, env, syms) and _as_bool(expr.right, env, syms)
    if isinstance(expr, Or):
        return _as_bool(expr.left, env, syms) or _as_bool(expr.right, env, syms)
    raise EvalError(f"cannot evaluate {expr!r}")


def _as_set(expr, env, syms) -> frozenset:
    value = eval_expr(expr, env, syms)
    if not isinstance(value, frozenset):
        raise EvalError(f"expected a set, got {value!r}")
    return value


def _as_bool(expr, env, syms) -> bool:
    value = eval_expr(expr, env, syms)
    if not isinstance(value, bool):
        raise EvalError(f"expected a boolean, got {value!r}")
    return value


# --------------------------------------------------------------------------
# Free variables (for environment restriction in state keys)
# --------------------------------------------------------------------------

_fv_cache: dict = {}


def free_vars(proc) -> frozenset:
    cached = _fv_cache.get(proc)
    if cached is None:
        cached = _free_vars(proc)
        _fv_cache[proc] = cached
    return cached


def _free_vars(proc) -> frozenset:
    if isinstance(proc, Skip):
        return frozenset()
    if isinstance(proc, Prefix):
        free = set()
        bound = set()
        for item in proc.event.items:
            if isinstance(item, DotItem):
                free |= _expr_names(item.expr) - bound
            elif isinstance(item, InputItem):
                bound.add(item.var)
            else:
                free |= _expr_names(item.domain) - bound
                bound.add(item.var)
        return frozenset(free) | (free_vars(proc.cont) - bound)
    if isinstance(proc, Guarded):
        return _expr_names(proc.cond) | free_vars(proc.body)
    if isinstance(proc, Choice):
        out = frozenset()
        for branch in proc.branches:
            out |= free_vars(branch)
        return out
    if isinstance(proc, Call):
        out = frozenset()
        for arg in proc.args:
            out |= _expr_names(arg)
        return out
    raise TypeError(f"not a process node: {proc!r}")


def _expr_names(expr) -> frozenset:
    """All names in an expression; constructors and set names are harmless."""
    if isinstance(expr, Name):
        return frozenset((expr.ident,))
    if isinstance(expr, SetLit):
        out = frozenset()
        for elem in expr.elems:
            out |= _expr_names(elem)
        return out
    if isinstance(expr, Member):
        return _expr_names(expr.item) | _expr_names(expr.set)
    if isinstance(expr, (Diff, SetUnion, Compare, And, Or)):
        return _expr_names(expr.left) | _expr_names(expr.right)
    if isinstance(expr, Not):
        return _expr_names(expr.operand)
    return frozenset()


# --------------------------------------------------------------------------
# Pattern matching
# --------------------------------------------------------------------------

def match_clause(pdef: ProcessDef, args: tuple, syms: Symbols):
    """First clause whose patterns match; returns (clause, environment)."""
    for clause in pdef.clauses:
        env = {}
        if all(_match_pattern(p, v, env, syms)
               for p, v in zip(clause.patterns, args)):
            return clause, env
    shown = ", ".join(format_value(v) for v in args)
    raise EvalError(f"no clause of process {pdef.name!r} matches ({shown})")


def _match_pattern(pat, value, env: dict, syms: Symbols) -> bool:
    if isinstance(pat, PatWild):
        return True
    if isinstance(pat, PatInt):
        return isinstance(value, int) and value == pat.value
    if isinstance(pat, PatName):
        if pat.ident in syms.ctor_index:
            return value == pat.ident
        env[pat.ident] = value
        return True
    if isinstance(pat, PatEmptySet):
        return isinstance(value, frozenset) and not value
    return False


def format_value(value) -> str:
    if isinstance(value, frozenset):
        inner = ", ".join(format_value(v) for v in sorted(
            value, key=lambda v: (0, v) if isinstance(v, int) else (1, str(v))))
        return "{" + inner + "}"
    return str(value)


# --------------------------------------------------------------------------
# Event instantiation
# --------------------------------------------------------------------------

def instantiate_event(event: EventExpr, env: dict, syms: Symbols) -> list:
    """All concrete instantiations of an event expression.

    Returns (Event, binding extension) pairs in canonical domain order.
    Items are elaborated left to right, so later items may use variables
    bound by earlier ones.
    """
    domains = syms.channels[event.channel]
    combos = [((), {})]  # (value tuple, accumulated bindings)
    for position, item in enumerate(event.items):
        domain = domains[position]
        domain_set = set(domain)
        new_combos = []
        for values, bindings in combos:
            if isinstance(item, DotItem):
                value = eval_expr(item.expr, {**env, **bindings}, syms)
                _require_in_domain(value, domain_set, event.channel, position)
                new_combos.append((values + (value,), bindings))
            elif isinstance(item, InputItem):
                if item.var in syms.ctor_index:
                    _require_in_domain(item.var, domain_set, event.channel,
                                       position)
                    new_combos.append((values + (item.var,), bindings))
                else:
                    for value in domain:
                        new_combos.append((values + (value,),
                                           {**bindings, item.var: value}))
            else:
                allowed = eval_expr(item.domain, {**env, **bindings}, syms)
                if not isinstance(allowed, frozenset):
                    raise EvalError(
                        f"restriction on {event.channel!r} is not a set")
                outside = allowed - domain_set
                if outside:
                    shown = ", ".join(sorted(format_value(v) for v in outside))
                    raise EvalError(
                        f"restriction on channel {event.channel!r} includes "
                        f"values outside its domain: {shown}")
                for value in domain:
                    if value in allowed:
                        new_combos.append((values + (value,),
                                           {**bindings, item.var: value}))
        combos = new_combos
    return [(Event(event.channel, values), bindings)
            for values, bindings in combos]


def _require_in_domain(value, domain_set, channel: str, position: int) -> None:
    if value not in domain_set:
        raise EvalError(
            f"value {format_value(value)} outside the domain of channel "
            f"{channel!r} parameter {position + 1}")


# --------------------------------------------------------------------------
# Initial transitions and state keys
# --------------------------------------------------------------------------

def state_key(proc, env: dict, syms: Symbols) -> tuple:
    """Canonical form of a closed process expression."""
    if isinstance(proc, Skip):
        return SKIP_KEY
    if isinstance(proc, Call):
        args = tuple(eval_expr(a, env, syms) for a in proc.args)
        return ("call", proc.name, args)
    free = free_vars(proc)
    closed = tuple(sorted((name, env[name]) for name in free if name in env))
    return ("expr", proc, closed)


def restricted_env(key: tuple) -> dict:
    """Environment dict back out of an ("expr", ...) state key."""
    return dict(key[2])


class InitialsEngine:
    """Computes initial transitions of closed process expressions.

    Results are memoized by (expression, restricted environment); entries
    whose computation crossed a call-cycle guard are not cached, because
    their value would then depend on the path that reached them.
    """

    def __init__(self, syms: Symbols) -> None:
        self.syms = syms
        self.cache = {}

    def of_key(self, key: tuple) -> tuple:
        """Transitions (label, successor key) of a canonical state."""
        kind = key[0]
        if kind == "omega":
            return ()
        if kind == "skip":
            return ((TICK, OMEGA_KEY),)
        if kind == "call":
            _, name, args = key
            pdef = self.syms.processes.get(name)
            if pdef is None:
                raise EvalError(f"unknown process {name!r}")
            if len(args) != pdef.arity:
                raise EvalError(
                    f"process {name!r} takes {pdef.arity} arguments, "
                    f"got {len(args)}")
            clause, env = match_clause(pdef, args, self.syms)
            return self.initials(clause.body, env, frozenset(((name, args),)))
        _, proc, closed = key
        return self.initials(proc, dict(closed), frozenset())

    def initials(self, proc, env: dict, visiting: frozenset) -> tuple:
        memo_key = (proc, tuple(sorted(
            (name, env[name]) for name in free_vars(proc) if name in env)))
        cached = self.cache.get(memo_key)
        if cached is not None:
            return cached
        result, complete = self._initials(proc, env, visiting)
        deduped = tuple(dict.fromkeys(result))
        if complete:
            self.cache[memo_key] = deduped
        return deduped

    def _initials(self, proc, env: dict, visiting: frozenset):
        """Returns (transition list, cacheable flag)."""
        if isinstance(proc, Skip):
            return [(TICK, OMEGA_KEY)], True
        if isinstance(proc, Prefix):
            out = []
            for event, bindings in instantiate_event(proc.event, env, self.syms):
                cont_env = {**env, **bindings} if bindings else env
                out.append((event, state_key(proc.cont, cont_env, self.syms)))
            return out, True
        if isinstance(proc, Guarded):
            if _as_bool(proc.cond, env, self.syms):
                return self._initials(proc.body, env, visiting)
            return [], True
        if isinstance(proc, Choice):
            out = []
            complete = True
            for branch in proc.branches:
                sub, sub_complete = self._initials(branch, env, visiting)
                out.extend(sub)
                complete = complete and sub_complete
            return out, complete
        if isinstance(proc, Call):
            pdef = self.syms.processes.get(proc.name)
            if pdef is None:
                raise EvalError(f"unknown process {proc.name!r}")
            args = tuple(eval_expr(a, env, self.syms) for a in proc.args)
            if (proc.name, args) in visiting:
                return [], False  # unguarded cycle: no contribution
            clause, call_env = match_clause(pdef, args, self.syms)
            inner_visiting = visiting | {(proc.name, args)}
            memo_key = (clause.body, tuple(sorted(
                (name, call_env[name])
                for name in free_vars(clause.body) if name in call_env)))
            cached = self.cache.get(memo_key)
            if cached is not None:
                return list(cached), True
            result, complete = self._initials(clause.body, call_env,
                                              inner_visiting)
            if complete:
                self.cache[memo_key] = tuple(dict.fromkeys(result))
            return result, complete
        raise EvalError(f"cannot take transitions of {proc!r}")
