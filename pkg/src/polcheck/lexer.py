"""Tokenizer shared by the element grammar and the session language."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

# Single- and double-character operator tokens, longest match first.
_SYMBOLS = ("==", "->", "(", ")", "+", "-", "*", "/", "^", ";", ",", "=", ":", "@")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", one of _SYMBOLS, or "end"
    text: str
    pos: int
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; ``#`` starts a comment to end of line."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], i, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("name", source[i:j], i, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token(sym, sym, i, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", i, line=line, column=col)
    tokens.append(Token("end", "", n, line, col))
    return tokens


class TokenStream:
    """Cursor over a token list with backtracking support."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "end":
            self.index += 1
        return tok

    def save(self) -> int:
        return self.index

    def restore(self, mark: int) -> None:
        self.index = mark

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def accept(self, kind: str) -> Token | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected {tok.kind if tok.kind != 'end' else 'end of input'}"
                + (f" {tok.text!r}" if tok.text else ""),
                tok.pos,
                expected={what or kind},
                line=tok.line,
                column=tok.column,
            )
        return self.next()

    def error(self, message: str, expected=()) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.pos, expected=expected, line=tok.line, column=tok.column)
