"""Parser for the monoid description grammar.

Two equivalent forms are accepted::

    # stanza form, one per file
    family = shifted_numerical {
        threshold = 4,
        extras = {0, 2},
    }

    affine rank=3 gens=[(1,1,0),(1,0,1)]

Values are integers (optionally written as p/q fractions), tuples ``(..)``,
lists ``[..]`` and sets ``{..}``.
"""

import re
from fractions import Fraction
from typing import Any

from app.kernel import SpecError

_TOKEN = re.compile(r"\s*(?:(-?\d+/\d+|-?\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_CLOSERS = {'(': ')', '[': ']', '{': '}'}


def strip_comments(text: str) -> str:
    return '\n'.join(line.split('#', 1)[0] for line in text.splitlines())


def tokenize(text: str) -> list[tuple[str, str]]:
    """Split text into (kind, value) tokens: kind is 'num', 'name' or 'sym'."""
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        number, name, symbol = match.groups()
        if number is not None:
            tokens.append(('num', number))
        elif name is not None:
            tokens.append(('name', name))
        elif symbol is not None:
            tokens.append(('sym', symbol))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise SpecError('syntax', 'unexpected end of input')
        self.pos += 1
        return token

    def expect(self, value: str):
        kind, got = self.take()
        if got != value:
            raise SpecError('syntax', f"expected {value!r}, got {got!r}")

    def at(self, value: str) -> bool:
        token = self.peek()
        return token is not None and token[1] == value

    def value(self) -> Any:
        kind, text = self.take()
        if kind == 'num':
            if '/' in text:
                return Fraction(text)
            return int(text)
        if kind == 'sym' and text in _CLOSERS:
            items = self.sequence(_CLOSERS[text])
            if text == '(':
                return tuple(items)
            if text == '[':
                return list(items)
            return set(items)
        raise SpecError('syntax', f"unexpected token {text!r}")

    def sequence(self, closer: str) -> list[Any]:
        items: list[Any] = []
        while not self.at(closer):
            items.append(self.value())
            if self.at(','):
                self.take()
            elif not self.at(closer):
                raise SpecError('syntax', f"expected ',' or {closer!r}")
        self.take()
        return items

    def pairs(self, closer: str | None) -> dict[str, Any]:
        params: dict[str, Any] = {}
        while self.peek() is not None and not (closer and self.at(closer)):
            kind, key = self.take()
            if kind != 'name':
                raise SpecError('syntax', f"expected a parameter name, got {key!r}")
            self.expect('=')
            if key in params:
                raise SpecError(key, 'given twice')
            params[key] = self.value()
            if self.at(','):
                self.take()
        if closer:
            self.expect(closer)
        return params


def parse_spec_text(text: str) -> tuple[str, dict[str, Any]]:
    """Parse a monoid description into (family name, parameters)."""
    tokens = tokenize(strip_comments(text))
    if not tokens:
        raise SpecError('family', 'empty description')
    parser = _Parser(tokens)
    if tokens[0] == ('name', 'family') and len(tokens) > 1 and tokens[1][1] == '=':
        parser.pos = 2
        kind, family = parser.take()
        if kind != 'name':
            raise SpecError('family', f"invalid family name {family!r}")
        parser.expect('{')
        params = parser.pairs('}')
    else:
        kind, family = parser.take()
        if kind != 'name':
            raise SpecError('family', f"invalid family name {family!r}")
        params = parser.pairs(None)
    if parser.peek() is not None:
        raise SpecError('syntax', f"trailing input {parser.peek()[1]!r}")
    return family, params


def parse_value(text: str) -> Any:
    """Parse a single literal value, e.g. an element given as ``(1,0,2)``."""
    parser = _Parser(tokenize(text))
    value = parser.value()
    if parser.peek() is not None:
        raise ValueError(f"trailing input in {text!r}")
    return value


def render_value(value: Any) -> str:
    """Render a parameter value back into the grammar."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, tuple):
        return '(' + ','.join(render_value(v) for v in value) + ')'
    if isinstance(value, (set, frozenset)):
        return '{' + ','.join(render_value(v) for v in sorted(value)) + '}'
    if isinstance(value, list):
        return '[' + ','.join(render_value(v) for v in value) + ']'
    raise TypeError(f"cannot render {value!r}")
