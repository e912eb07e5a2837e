"""Recursive-descent parser for the CSP input language.

Grammar (ASCII CSP_M-style):

    spec      := statement*
    statement := "datatype" IDENT "=" IDENT ("|" IDENT)*
               | "channel" IDENT (":" type ("." type)*)?
               | IDENT "=" "{" ... "}"                      -- named set
               | IDENT ("(" pattern ("," pattern)* ")")? "=" process
    type      := IDENT | setliteral
    pattern   := "_" | INT | IDENT | "{" "}"
    process   := guarded ("[]" guarded)*
    guarded   := expr "&" guarded | prefix
    prefix    := "SKIP" | "(" process ")" | event "->" guarded | call
    event     := IDENT item*
    item      := "." atom | "!" atom | "?" IDENT (":" "(" expr ")")?
    call      := IDENT ("(" expr ("," expr)* ")")?

Expressions are boolean/set terms with precedence or < and < not <
comparison < atom.  Prefix binds tighter than external choice; a guard
covers everything up to the next choice operator.

The only genuine ambiguity is whether a statement body starting with an
identifier is an event prefix or a process call; it is resolved by one
token of lookahead (an item marker or `->` means event).  Whether a
guard opens a process expression is decided by scanning ahead at
bracket depth zero for `&` before any `->`, `[]` or statement boundary.
"""

from __future__ import annotations

from .errors import ParseError
from .lexer import Token, tokenize
from .nodes import (
    And, BoolLit, Call, ChannelDecl, Choice, Clause, Compare, DatatypeDecl,
    Diff, DotItem, EventExpr, Guarded, InlineSetType, InputItem, IntLit,
    Member, Name, NamedSetDecl, Not, Or, PatEmptySet, PatInt, PatName,
    PatWild, Prefix, ProcessDef, RangeSet, RestrictedItem, SetLit, SetUnion,
    Skip, Spec, TypeName,
)

_SET_FUNCS = {"member": Member, "diff": Diff, "union": SetUnion}

_ITEM_STARTERS = (".", "?", "!")


class Parser:
    def __init__(self, tokens: list) -> None:
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = self.pos + ahead
        if i < len(self.tokens):
            return self.tokens[i]
        return Token("EOF", "", *self._end_position())

    def _end_position(self) -> tuple:
        if self.tokens:
            last = self.tokens[-1]
            return last.line, last.col + len(last.text)
        return 1, 1

    def at(self, kind: str, ahead: int = 0) -> bool:
        return self.peek(ahead).kind == kind

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str, context: str = "") -> Token:
        tok = self.peek()
        if tok.kind != kind:
            where = f" {context}" if context else ""
            self._fail(f"expected {kind!r}{where}, found {tok.text!r}"
                       if tok.kind != "EOF"
                       else f"expected {kind!r}{where}, found end of input")
        return self.advance()

    def _fail(self, message: str):
        tok = self.peek()
        raise ParseError(tok.line, tok.col, message)

    # -- statements ---------------------------------------------------------

    def parse(self) -> Spec:
        datatypes = []
        named_sets = []
        channels = []
        clauses_by_name: dict = {}

        while not self.at("EOF"):
            if self.at("datatype"):
                datatypes.append(self.parse_datatype())
            elif self.at("channel"):
                channels.append(self.parse_channel())
            elif self.at("IDENT"):
                name, decl = self.parse_definition()
                if isinstance(decl, NamedSetDecl):
                    named_sets.append(decl)
                else:
                    clauses_by_name.setdefault(name, []).append(decl)
            else:
                self._fail(f"expected a declaration, found {self.peek().text!r}")

        processes = tuple(
            ProcessDef(name, tuple(clauses))
            for name, clauses in clauses_by_name.items()
        )
        return Spec(tuple(datatypes), tuple(named_sets), tuple(channels), processes)

    def parse_datatype(self) -> DatatypeDecl:
        self.expect("datatype")
        name = self.expect("IDENT", "after 'datatype'").text
        self.expect("=", f"in datatype {name}")
        ctors = [self.expect("IDENT", "constructor name").text]
        while self.at("|"):
            self.advance()
            ctors.append(self.expect("IDENT", "constructor name").text)
        return DatatypeDecl(name, tuple(ctors))

    def parse_channel(self) -> ChannelDecl:
        self.expect("channel")
        name = self.expect("IDENT", "after 'channel'").text
        types = []
        if self.at(":"):
            self.advance()
            types.append(self.parse_type_ref())
            while self.at("."):
                self.advance()
                types.append(self.parse_type_ref())
        return ChannelDecl(name, tuple(types))

    def parse_type_ref(self):
        if self.at("IDENT"):
            return TypeName(self.advance().text)
        if self.at("{"):
            return InlineSetType(self.parse_set_literal())
        self._fail(f"expected a type name or set, found {self.peek().text!r}")

    def parse_definition(self):
        """One IDENT-headed statement: named set or one process clause."""
        name = self.advance().text
        if self.at("("):
            self.advance()
            patterns = [self.parse_pattern()]
            while self.at(","):
                self.advance()
                patterns.append(self.parse_pattern())
            self.expect(")", f"closing the parameter list of {name}")
            self.expect("=", f"in definition of {name}")
            return name, Clause(tuple(patterns), self.parse_process())
        self.expect("=", f"in definition of {name}")
        if self.at("{"):
            return name, NamedSetDecl(name, self.parse_set_literal())
        return name, Clause((), self.parse_process())

    def parse_pattern(self):
        tok = self.peek()
        if tok.kind == "IDENT":
            self.advance()
            return PatWild() if tok.text == "_" else PatName(tok.text)
        if tok.kind == "INT":
            self.advance()
            return PatInt(int(tok.text))
        if tok.kind == "{" and self.at("}", 1):
            self.advance()
            self.advance()
            return PatEmptySet()
        self._fail(f"expected a pattern, found {tok.text!r}")

    # -- processes ----------------------------------------------------------

    def parse_process(self):
        branches = [self.parse_guarded()]
        while self.at("[]"):
            self.advance()
            branches.append(self.parse_guarded())
        if len(branches) == 1:
            return branches[0]
        return Choice(tuple(branches))

    def parse_guarded(self):
        if self._guard_ahead():
            cond = self.parse_expr()
            self.expect("&", "after guard condition")
            return Guarded(cond, self.parse_guarded())
        return self.parse_prefix()

    def _guard_ahead(self) -> bool:
        """True when a `&` guard separator opens the production at self.pos.

        Scans at bracket depth zero; `->`, `[]`, a statement boundary or a
        closing bracket of an enclosing group all mean "no guard here".
        """
        depth = 0
        for tok in self.tokens[self.pos:]:
            kind = tok.kind
            if kind in ("(", "{"):
                depth += 1
            elif kind in (")", "}"):
                if depth == 0:
                    return False
                depth -= 1
            elif depth == 0:
                if kind == "&":
                    return True
                if kind in ("->", "[]", "=", "datatype", "channel"):
                    return False
        return False

    def parse_prefix(self):
        if self.at("SKIP"):
            self.advance()
            return Skip()
        if self.at("("):
            self.advance()
            inner = self.parse_process()
            self.expect(")", "closing a process group")
            return inner
        if self.at("IDENT"):
            if self.at("(", 1):
                return self.parse_call()
            if self.peek(1).kind in _ITEM_STARTERS or self.at("->", 1):
                return self.parse_event_prefix()
            return Call(self.advance().text, ())
        self._fail(f"expected a process expression, found {self.peek().text!r}")

    def parse_call(self) -> Call:
        name = self.advance().text
        self.expect("(")
        args = [self.parse_expr()]
        while self.at(","):
            self.advance()
            args.append(self.parse_expr())
        self.expect(")", f"closing the argument list of {name}")
        return Call(name, tuple(args))

    def parse_event_prefix(self) -> Prefix:
        channel = self.advance().text
        items = []
        while self.peek().kind in _ITEM_STARTERS:
            items.append(self.parse_item())
        event = EventExpr(channel, tuple(items))
        self.expect("->", f"after event {channel}")
        return Prefix(event, self.parse_guarded())

    def parse_item(self):
        marker = self.advance()
        if marker.kind in (".", "!"):
            return DotItem(self.parse_atom())
        var = self.expect("IDENT", "after '?'").text
        if self.at(":"):
            self.advance()
            self.expect("(", "around a restriction set")
            domain = self.parse_expr()
            self.expect(")", "closing a restriction set")
            return RestrictedItem(var, domain)
        return InputItem(var)

    # -- expressions ----------------------------------------------------------

    def parse_expr(self):
        left = self.parse_and()
        while self.at("or"):
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_not()
        while self.at("and"):
            self.advance()
            left = And(left, self.parse_not())
        return left

    def parse_not(self):
        if self.at("not"):
            self.advance()
            return Not(self.parse_not())
        return self.parse_compare()

    def parse_compare(self):
        left = self.parse_atom()
        if self.peek().kind in ("==", "!="):
            op = self.advance().kind
            return Compare(op, left, self.parse_atom())
        return left

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind == "true":
            self.advance()
            return BoolLit(True)
        if tok.kind == "false":
            self.advance()
            return BoolLit(False)
        if tok.kind in _SET_FUNCS:
            self.advance()
            node = _SET_FUNCS[tok.kind]
            self.expect("(", f"after {tok.text}")
            first = self.parse_expr()
            self.expect(",", f"between {tok.text} arguments")
            second = self.parse_expr()
            self.expect(")", f"closing {tok.text}")
            return node(first, second)
        if tok.kind == "IDENT":
            self.advance()
            return Name(tok.text)
        if tok.kind == "{":
            return self.parse_set_literal()
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")", "closing a grouped expression")
            return inner
        self._fail(f"expected an expression, found {tok.text!r}")

    def parse_set_literal(self):
        self.expect("{")
        if self.at("}"):
            self.advance()
            return SetLit(())
        if self.at("INT") and self.at("..", 1):
            lo = int(self.advance().text)
            self.advance()
            hi = int(self.expect("INT", "as range upper bound").text)
            self.expect("}", "closing a range set")
            return RangeSet(lo, hi)
        elems = [self.parse_expr()]
        while self.at(","):
            self.advance()
            elems.append(self.parse_expr())
        self.expect("}", "closing a set literal")
        return SetLit(tuple(elems))


def parse_spec(source: str) -> Spec:
    """Parse source text into an unresolved Spec."""
    return Parser(tokenize(source)).parse()
