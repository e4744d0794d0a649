"""Reader for the command-stream syntax.

Two bracket kinds appear in grammar files: parentheses delimit plain
lists, and angle brackets delimit structures, ``<head field value field
value ...>``.  Tokens are symbols, double-quoted strings, and integers;
``;`` starts a comment running to end of line.  Symbols and strings are
distinct (the string "+" marks a morpheme boundary in a rule environment,
while the symbol + is a feature value), so quoted strings are returned as
QuotedString, a str subclass.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class SexprError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class Symbol(str):
    __slots__ = ()

    def __repr__(self) -> str:
        return str(self)


class QuotedString(str):
    __slots__ = ()

    def __repr__(self) -> str:
        return f'"{str(self)}"'


@dataclass
class Struct:
    """An angle-bracket structure: a head symbol plus named fields."""

    head: str
    fields: dict[str, object] = field(default_factory=dict)
    line: int = 0

    def get(self, name: str, default=None):
        return self.fields.get(name, default)

    def require(self, name: str):
        if name not in self.fields:
            raise SexprError(f"<{self.head}> is missing the field {name!r}", self.line, 0)
        return self.fields[name]


_DELIMITERS = "()<>"
_WHITESPACE = " \t\r\n"


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def tokens(self):
        while self.pos < len(self.text):
            line, column = self.line, self.column
            ch = self.text[self.pos]
            if ch in _WHITESPACE:
                self._advance()
                continue
            if ch == ";":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
                continue
            if ch in _DELIMITERS:
                self._advance()
                yield ch, ch, line, column
                continue
            if ch == '"':
                self._advance()
                chars = []
                while True:
                    if self.pos >= len(self.text):
                        raise SexprError("unterminated string", line, column)
                    c = self._advance()
                    if c == "\\" and self.pos < len(self.text):
                        chars.append(self._advance())
                    elif c == '"':
                        break
                    else:
                        chars.append(c)
                yield "string", QuotedString("".join(chars)), line, column
                continue
            chars = []
            while (self.pos < len(self.text)
                   and self.text[self.pos] not in _WHITESPACE + _DELIMITERS + ';"'):
                chars.append(self._advance())
            token = "".join(chars)
            try:
                yield "int", int(token), line, column
            except ValueError:
                yield "symbol", Symbol(token), line, column


class Reader:
    """Pull-parser over a command stream; read_form() returns None at EOF."""

    def __init__(self, text: str):
        self._tokens = _Tokenizer(text).tokens()
        self._pushback = None

    def _next(self):
        if self._pushback is not None:
            token, self._pushback = self._pushback, None
            return token
        return next(self._tokens, None)

    def read_form(self):
        token = self._next()
        if token is None:
            return None
        return self._parse(token)

    def _parse(self, token):
        kind, value, line, column = token
        if kind == "(":
            items = []
            while True:
                token = self._next()
                if token is None:
                    raise SexprError("unterminated list", line, column)
                if token[0] == ")":
                    return items
                items.append(self._parse(token))
        if kind == "<":
            head = self._next()
            if head is None or head[0] != "symbol":
                raise SexprError("structure must start with a head symbol", line, column)
            struct = Struct(str(head[1]), line=line)
            while True:
                token = self._next()
                if token is None:
                    raise SexprError(f"unterminated <{struct.head}>", line, column)
                if token[0] == ">":
                    return struct
                if token[0] != "symbol":
                    raise SexprError(f"expected a field name in <{struct.head}>, "
                                     f"got {token[1]!r}", token[2], token[3])
                name = str(token[1])
                value_token = self._next()
                if value_token is None or value_token[0] in ")>":
                    raise SexprError(f"field {name!r} of <{struct.head}> has no value",
                                     token[2], token[3])
                struct.fields[name] = self._parse(value_token)
        if kind in (")", ">"):
            raise SexprError(f"unexpected {value!r}", line, column)
        return value


def read_forms(text: str) -> list[tuple[object, int]]:
    """All top-level forms with the line each one starts on."""
    reader = Reader(text)
    forms = []
    while True:
        token = reader._next()
        if token is None:
            return forms
        forms.append((reader._parse(token), token[2]))
