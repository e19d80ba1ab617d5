"""Tokenizer for FSP-lite."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import UnknownCharacter

KEYWORDS = frozenset({"const", "range", "property", "progress", "when", "STOP", "END", "ERROR"})

# longest operators first
PUNCTUATION = (
    "..", "->", "||", "&&", "==", "!=", "<=", ">=",
    "|", "&", "<", ">", "=", "!", "+", "-", "*", "/", "%",
    "(", ")", "[", "]", "{", "}", ",", ".", ":",
)

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)"
    r"|(?P<nl>\n)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<punct>" + "|".join(re.escape(p) for p in PUNCTUATION) + ")"
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | upper | int | punct | keyword | eof
    text: str
    line: int
    column: int

    def __str__(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    """Split FSP-lite source into tokens, dropping whitespace and ``//`` comments.

    ``&`` is normalised to ``&&`` so guards print canonically; ``|`` and
    ``||`` are kept apart and disambiguated by the parser.
    """
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise UnknownCharacter(text[pos], line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "word":
            if value in KEYWORDS:
                tokens.append(Token("keyword", value, line, col))
            elif value[0].isupper():
                tokens.append(Token("upper", value, line, col))
            else:
                tokens.append(Token("ident", value, line, col))
        elif kind == "int":
            tokens.append(Token("int", value, line, col))
        elif kind == "punct":
            tokens.append(Token("punct", "&&" if value == "&" else value, line, col))
        pos = m.end()
    return tokens
