"""Lossless tokenizer for the C subset and for semantic-patch bodies.

Every character of the input ends up in exactly one token, so joining the
token texts gives back the original text.  Text is handled as latin-1
decoded ``str`` so that character offsets equal byte offsets.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import NamedTuple

KEYWORDS = frozenset("""
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool bool __attribute__ __global__ __device__ __host__ __shared__
    __constant__ __restrict__
""".split())

# keywords that may start a declaration
BASE_TYPES = frozenset(
    "void char short int long float double signed unsigned _Bool bool".split())
QUALIFIERS = frozenset("""
    const volatile static extern inline register restrict auto typedef
    __global__ __device__ __host__ __shared__ __constant__ __restrict__
""".split())

TRIVIA = frozenset({"whitespace", "comment"})

_PUNCT = sorted("""
    <<< >>> <<= >>= ... -> ++ -- << >> <= >= == != && || += -= *= /= %= &= |= ^= ::
    + - * / % < > = ! ~ & | ^ ? : ; , . ( ) [ ] { } # @
""".split(), key=len, reverse=True)

_SPACE = re.compile(r"[ \t\r\n\f\v]+")
_DIRECTIVE = re.compile(r"#(?:\\\r?\n|[^\n])*")
_LINE_COMMENT = re.compile(r"//[^\n]*")
_BLOCK_COMMENT = re.compile(r"/\*.*?\*/", re.S)
_STRING = re.compile(r'(?:u8|[LuU])?"(?:\\.|[^"\\\n])*"')
_CHAR = re.compile(r"(?:[LuU])?'(?:\\.|[^'\\\n])*'")
_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eEpP][+-]?\d+)?\w*", re.ASCII)
_IDENT = re.compile(r"[A-Za-z_]\w*")
_PUNCT_RE = re.compile("|".join(re.escape(p) for p in _PUNCT))
_MARKER = re.compile(r"\\[(|)&]")
_DIRECTIVE_NAME = re.compile(r"#\s*(\w*)")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int

    @property
    def trivia(self) -> bool:
        return self.kind in TRIVIA


class SourcePosition(NamedTuple):
    path: str
    offset: int
    line: int
    column: int


def decode(data) -> str:
    if isinstance(data, str):
        return data
    return bytes(data).decode("latin-1")


def encode(text: str) -> bytes:
    return text.encode("latin-1")


def to_internal(text: str) -> str:
    """Convert arbitrary unicode (e.g. plus-line text) to the latin-1 view."""
    return text.encode("utf-8").decode("latin-1")


class LineIndex:
    """Offset <-> (line, column) conversion, both 1-based."""

    def __init__(self, text: str):
        self.text = text
        self.starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def line_of(self, offset: int) -> int:
        return bisect.bisect_right(self.starts, offset)

    def position(self, offset: int, path: str = "") -> SourcePosition:
        line = self.line_of(offset)
        return SourcePosition(path, offset, line, offset - self.starts[line - 1] + 1)

    def line_start(self, offset: int) -> int:
        return self.starts[self.line_of(offset) - 1]

    def line_end(self, offset: int) -> int:
        """Offset of the newline ending the line containing ``offset`` (or EOF)."""
        nl = self.text.find("\n", offset)
        return len(self.text) if nl < 0 else nl


def directive_kind(text: str) -> str:
    m = _DIRECTIVE_NAME.match(text)
    name = m.group(1) if m else ""
    if name == "pragma":
        return "pragma"
    if name == "include":
        return "include"
    return "directive"


def lex(source, pattern: bool = False) -> list[Token]:
    """Split ``source`` into tokens, keeping whitespace and comments.

    With ``pattern=True`` the SmPL group markers ``\\(``, ``\\|``, ``\\)``
    and ``\\&`` are recognised as ``marker`` tokens.
    """
    text = decode(source)
    tokens: list[Token] = []
    pos, n = 0, len(text)
    line_start = True
    while pos < n:
        c = text[pos]
        m = _SPACE.match(text, pos)
        if m:
            kind = "whitespace"
        elif c == "#" and line_start:
            m = _DIRECTIVE.match(text, pos)
            kind = directive_kind(m.group())
        elif c == "/" and text.startswith("//", pos):
            m = _LINE_COMMENT.match(text, pos)
            kind = "comment"
        elif c == "/" and text.startswith("/*", pos):
            m = _BLOCK_COMMENT.match(text, pos)
            if m is None:
                # unterminated comment swallows the rest of the file
                tokens.append(Token("comment", text[pos:], pos, n))
                break
            kind = "comment"
        elif pattern and c == "\\" and _MARKER.match(text, pos):
            m = _MARKER.match(text, pos)
            kind = "marker"
        elif (m := _STRING.match(text, pos)) or (m := _CHAR.match(text, pos)):
            kind = "literal"
        elif "0" <= c <= "9" or (c == "." and "0" <= text[pos + 1:pos + 2] <= "9"):
            m = _NUMBER.match(text, pos)
            kind = "literal"
        elif (m := _IDENT.match(text, pos)):
            kind = "keyword" if m.group() in KEYWORDS else "identifier"
        else:
            m = _PUNCT_RE.match(text, pos)
            kind = "punctuator"
            if m is None:
                tokens.append(Token("punctuator", c, pos, pos + 1))
                pos += 1
                line_start = False
                continue
        end = m.end()
        tok = Token(kind, text[pos:end], pos, end)
        tokens.append(tok)
        if kind == "whitespace":
            if "\n" in tok.text:
                line_start = True
        elif kind != "comment" or "\n" in tok.text:
            line_start = kind == "comment" and line_start
            if kind in ("pragma", "include", "directive"):
                line_start = False
        pos = end
    return tokens


def join(tokens) -> str:
    return "".join(t.text for t in tokens)
