"""Tokenizer for the C++ and Objective-C header subsets.

Comments and preprocessor lines are blanked out (newlines kept) before
tokenizing, so token offsets index into :func:`clean_source` output and line
numbers match the original text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_COMMENT_OR_STRING = re.compile(
    r"""//[^\n]*|/\*.*?\*/|"(?:\\.|[^"\\\n])*"|'(?:\\.|[^'\\\n])*'""",
    re.DOTALL,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>@?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>\d[\w.]*)
  | (?P<string>"(?:\\.|[^"\\\n])*"|'(?:\\.|[^'\\\n])*')
  | (?P<punct>::|\.\.\.|->|&&|\|\||==|!=|<=|>=|\+\+|--|[^\sA-Za-z0-9_])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    start: int
    end: int

    def __repr__(self) -> str:
        return f"Token({self.text!r}@{self.line})"


def _blank(text: str) -> str:
    return re.sub(r"[^\n]", " ", text)


def clean_source(text: str) -> str:
    """Blank out comments and preprocessor directives, preserving offsets."""

    def strip_comment(m: re.Match) -> str:
        s = m.group(0)
        return _blank(s) if s.startswith("/") else s

    text = _COMMENT_OR_STRING.sub(strip_comment, text)
    out = []
    continuing = False
    for line in text.splitlines(keepends=True):
        body = line.rstrip("\r\n")
        if continuing or body.lstrip().startswith("#"):
            continuing = body.endswith("\\")
            out.append(_blank(body) + line[len(body):])
        else:
            out.append(line)
    return "".join(out)


def tokenize(text: str, filename: str = "<input>", clean: bool = True) -> list[Token]:
    if clean:
        text = clean_source(text)
    tokens = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the punct branch accepts any char
            raise ParseError.at(line, f"unexpected character {text[pos]!r}", filename)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(0), line, m.start(), m.end()))
        line += m.group(0).count("\n")
        pos = m.end()
    return tokens


def spaced(tokens: list[str] | tuple[str, ...]) -> str:
    """Join tokens the way the translator trace prints them: ``double x1 , objc_t & buf``."""
    return " ".join(tokens)


def squeeze(text: str) -> str:
    return " ".join(text.split())
