"""Tokenizer for the machine-readable CSP input language.

Turns source text into a flat token list with line/column positions.
``--`` starts a comment that runs to end of line.  Operators from the
wider CSP notation that this tool does not accept (sequential
composition, parallel composition, internal choice, inline hiding) are
recognised and rejected here with a dedicated message, so users get
"unsupported operator" instead of a confusing parse error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LexError, ParseError

KEYWORDS = {
    "datatype", "channel", "SKIP",
    "member", "diff", "union",
    "and", "or", "not", "true", "false",
}

# Operator lexemes that belong to CSP at large but are outside the
# supported subset.  Longest match first.
UNSUPPORTED = ("|||", "|~|", "||", "[|", "|]", ";", "\\")


@dataclass(frozen=True)
class Token:
    kind: str  # "IDENT", "INT", a keyword, or the operator lexeme itself
    text: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"Token({self.kind!r}, {self.text!r}, {self.line}:{self.col})"


class _Scanner:
    def __init__(self, source: str) -> None:
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.source[i] if i < len(self.source) else ""

    def advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.pos < len(self.source):
                if self.source[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def match(self, lexeme: str) -> bool:
        return self.source.startswith(lexeme, self.pos)


def tokenize(source: str) -> list:
    """Tokenize ``source``, raising LexError on characters outside the language."""
    sc = _Scanner(source)
    tokens = []

    while sc.pos < len(sc.source):
        ch = sc.peek()

        if ch in " \t\r\n":
            sc.advance()
            continue

        if sc.match("--"):
            while sc.pos < len(sc.source) and sc.peek() != "\n":
                sc.advance()
            continue

        line, col = sc.line, sc.col

        hit = next((op for op in UNSUPPORTED if sc.match(op)), None)
        if hit is not None:
            raise ParseError(line, col,
                             f"unsupported operator {hit!r}: outside the accepted CSP subset")

        if ch.isdigit() or (ch == "-" and sc.peek(1).isdigit()):
            start = sc.pos
            sc.advance()  # first digit or the minus sign
            while sc.peek().isdigit():
                sc.advance()
            tokens.append(Token("INT", sc.source[start:sc.pos], line, col))
            continue

        if ch.isalpha() or ch == "_":
            start = sc.pos
            while sc.peek().isalnum() or sc.peek() == "_":
                sc.advance()
            text = sc.source[start:sc.pos]
            kind = text if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, line, col))
            continue

        for lexeme in ("->", "..", "==", "!=", "[]"):
            if sc.match(lexeme):
                tokens.append(Token(lexeme, lexeme, line, col))
                sc.advance(2)
                break
        else:
            if ch == "[":
                raise ParseError(line, col,
                                 "unsupported operator '[': outside the accepted CSP subset")
            if ch in "?!.&=|,:(){}":
                tokens.append(Token(ch, ch, line, col))
                sc.advance()
                continue
            raise LexError(line, col, ch)

    return tokens
