"""Edit planning, splicing and unified diffs."""
from __future__ import annotations

import bisect
import difflib
import re
from dataclasses import dataclass, field

from .lexer import decode, encode, lex, to_internal
from .smpl import LIST_KINDS

_TRIVIA_GAP = re.compile(r"(?:\s+|//[^\n]*|/\*.*?\*/)*", re.S)
_HUNK = re.compile(r"@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


class SubstitutionError(Exception):
    """A plus line mentions a metavariable that has no value."""


class DiffApplyError(Exception):
    pass


@dataclass(frozen=True)
class Edit:
    start: int
    end: int
    text: str
    rule: str = ""
    seq: int = 0

    @property
    def insertion(self) -> bool:
        return self.start == self.end

    def overlaps(self, other: "Edit") -> bool:
        if self.insertion and other.insertion:
            return False
        if self.insertion:
            return other.start < self.start < other.end
        if other.insertion:
            return self.start < other.start < self.end
        return self.start < other.end and other.start < self.end


def _sort_key(e: Edit):
    return (e.start, 0 if e.insertion else 1, e.seq)


@dataclass
class EditScript:
    edits: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        self.edits = sorted(self.edits, key=_sort_key)
        for a, b in zip(self.edits, self.edits[1:]):
            if a.overlaps(b) or (not a.insertion and a.end > b.start):
                raise ValueError(f"overlapping edits at {a.start}..{a.end} and {b.start}..{b.end}")

    def __add__(self, other: "EditScript") -> "EditScript":
        return EditScript(self.edits + other.edits, self.warnings + other.warnings)

    def __len__(self):
        return len(self.edits)

    def map_offset(self, offset: int) -> int:
        """Where ``offset`` of the old text lands in the edited text."""
        shift = 0
        for e in self.edits:
            if e.insertion:
                if e.start <= offset:
                    shift += len(e.text)
            elif e.end <= offset:
                shift += len(e.text) - (e.end - e.start)
            elif e.start <= offset:
                return e.start + shift
        return offset + shift


def apply(script: EditScript, source):
    """Splice the edits into ``source`` (str or bytes; the result has the same type)."""
    as_bytes = not isinstance(source, str)
    text = decode(source)
    out, pos = [], 0
    for e in script.edits:
        if e.start < pos or e.end > len(text):
            raise ValueError(f"edit {e.start}..{e.end} out of order or out of range")
        out.append(text[pos:e.start])
        out.append(e.text)
        pos = e.end
    out.append(text[pos:])
    result = "".join(out)
    return encode(result) if as_bytes else result


# -- rendering plus lines -------------------------------------------------------

def _values(rule, env) -> dict:
    values = {}
    for d in rule.metavars:
        if d.kind == "symbol":
            continue
        key = (rule.name, d.name) if d.fresh is not None else rule.key(d.name)
        values[d.name] = env.get(key)
    return values


class _Renderer:
    def __init__(self, rule, env):
        self.rule = rule
        self.values = _values(rule, env)

    def value(self, name):
        v = self.values[name]
        if v is None:
            raise SubstitutionError(f"rule {self.rule.name}: metavariable {name} is not bound")
        return v

    def line(self, content: str) -> str:
        return "".join(self.tokens(lex(to_internal(content))))

    def tokens(self, toks) -> list[str]:
        out: list[str] = []
        skip_ws = drop_comma = False
        for t in toks:
            if skip_ws and t.kind == "whitespace":
                continue
            skip_ws = False
            if drop_comma and t.text == ",":
                drop_comma = False
                skip_ws = True
                continue
            drop_comma = False
            if t.kind in ("pragma", "directive", "include"):
                out.append(self.directive(t.text))
            elif t.kind == "identifier" and t.text in self.values:
                v = self.value(t.text)
                if v.kind in LIST_KINDS and v.text == "" and v.inner is None:
                    while out and out[-1].isspace():
                        out.pop()
                    if out and out[-1] == ",":
                        out.pop()
                    else:
                        drop_comma = True
                elif v.inner is not None:
                    while out and out[-1].isspace():
                        out.pop()
                    out.append(v.inner)
                    skip_ws = True
                else:
                    out.append(v.text)
            else:
                out.append(t.text)
        return out

    def directive(self, text: str) -> str:
        m = re.match(r"#\s*\w*", text)
        if not m or not text.startswith(("#pragma", "# pragma")):
            return text
        return m.group() + "".join(self.tokens(lex(" " + text[m.end():])))[1:]

    def block(self, lines, indent: str) -> str:
        body = [l for l in lines if l.strip()]
        base = len(body[0]) - len(body[0].lstrip()) if body else 0
        out = []
        for l in lines:
            if not l.strip():
                out.append("\n")
                continue
            own = len(l) - len(l.lstrip())
            out.append(indent + " " * max(0, own - base) + self.line(l.strip()) + "\n")
        return "".join(out)

    def inline(self, lines) -> str:
        return " ".join(self.line(l.strip()) for l in lines if l.strip())


# -- planning ---------------------------------------------------------------------

class _Deletion:
    __slots__ = ("start", "end", "parts", "whole", "indent")

    def __init__(self, start, end):
        self.start, self.end = start, end
        self.parts = []
        self.whole = False
        self.indent = ""


def _indent_at(text: str, index, offset: int) -> str:
    ls = index.line_start(offset)
    line = text[ls:index.line_end(offset)]
    return line[:len(line) - len(line.lstrip(" \t"))]


def intents(rule, compiled, result, tree) -> list[Edit]:
    """Edits requested by one match: deletions for minus tokens, insertions for plus lines."""
    text, toks, index = tree.text, tree.tokens, tree.index
    active = [b for b in compiled.plus if all(pc in result.chosen for pc in b.path)]
    scopes = [(result.corr, active)]
    for (pa, pb), corr in result.extras:
        scopes.append((corr, [b for b in active if pa <= b.after < pb]))

    spans = []
    for corr, _ in scopes:
        for (pa, pb), (sa, sb) in corr:
            if sa >= sb:
                continue
            real = [i for i in range(pa, pb) if i in compiled.real]
            if real and all(i in compiled.minus for i in real):
                spans.append((toks[sa].start, toks[sb - 1].end))
    spans.sort()
    dels: list[_Deletion] = []
    for a, b in spans:
        if dels and (a <= dels[-1].end or _TRIVIA_GAP.fullmatch(text, dels[-1].end, a)):
            dels[-1].end = max(dels[-1].end, b)
        else:
            dels.append(_Deletion(a, b))

    def containing(offset):
        for d in dels:
            if d.start <= offset <= d.end:
                return d
        return None

    render = _Renderer(rule, result.env)
    inserts = []
    for seq, (corr, blocks) in enumerate(scopes):
        tokmap = {}
        for (pa, pb), (sa, sb) in corr:
            if pb == pa + 1 and pa in compiled.real and sa < sb:
                tokmap[pa] = (sa, sb)
        keys = sorted(tokmap)
        for b in blocks:
            prev = max((k for k in keys if k <= b.after), default=None)
            nxt = min((k for k in keys if k > b.after), default=None)
            order = seq * 1000 + compiled.plus.index(b)
            if prev is not None and prev in compiled.minus:
                d = containing(toks[tokmap[prev][1] - 1].end)
                if d is not None:
                    d.parts.append(b)
                    continue
            if nxt is not None and nxt in compiled.minus:
                d = containing(toks[tokmap[nxt][0]].start)
                if d is not None:
                    d.parts.append(b)
                    continue
            if prev is not None:
                last_tok = toks[tokmap[prev][1] - 1]
                pend = last_tok.end
                if nxt is not None and index.line_of(toks[tokmap[nxt][0]].start) == index.line_of(pend):
                    inserts.append(Edit(pend, pend, " " + render.inline(b.lines), rule.name, order))
                    continue
                le = index.line_end(pend)
                lead = ""
                if le < len(text):
                    at = le + 1
                else:
                    at = len(text)
                    lead = "\n"
                if last_tok.text.endswith("{"):
                    following = text[at:index.line_end(at)] if at < len(text) else ""
                    if following.strip() == "" or following.lstrip().startswith("}"):
                        indent = _indent_at(text, index, pend) + "    "
                    else:
                        indent = following[:len(following) - len(following.lstrip(" \t"))]
                else:
                    indent = _indent_at(text, index, pend)
                inserts.append(Edit(at, at, lead + render.block(b.lines, indent), rule.name, order))
            elif nxt is not None:
                start = toks[tokmap[nxt][0]].start
                at = index.line_start(start)
                inserts.append(Edit(at, at, render.block(b.lines, _indent_at(text, index, start)),
                                    rule.name, order))

    funcs = tree.funcdef_spans()
    func_starts = [fs for fs, _ in funcs]
    edits = list(inserts)
    for i, d in enumerate(dels):
        ls = index.line_start(d.start)
        prefix = text[ls:d.start]
        le = index.line_end(d.end)
        suffix = text[d.end:le]
        if not prefix.strip() and not suffix.strip():
            d.whole = True
            d.indent = prefix
            d.start = ls
            d.end = le + 1 if le < len(text) else le
            k = bisect.bisect_left(func_starts, d.start)
            if not d.parts and k < len(funcs) and funcs[k][1] <= d.end:
                m = re.match(r"[ \t]*\n", text[d.end:])
                if m:
                    d.end += m.end()
        elif not prefix.strip() and not d.parts:
            d.end += len(text[d.end:le]) - len(text[d.end:le].lstrip(" \t"))
        if d.whole:
            repl = "".join(render.block(b.lines, d.indent) for b in d.parts)
        else:
            repl = " ".join(render.inline(b.lines) for b in d.parts)
        edits.append(Edit(d.start, d.end, repl, rule.name, 100000 + i))
    return sorted(edits, key=_sort_key)


def plan_edits(results, tree=None) -> EditScript:
    """Combine the intents of all matches; a match overlapping an earlier one is dropped."""
    accepted: list[Edit] = []
    index = _OverlapIndex()
    seen = set()
    warnings = []
    for r in results:
        group = list(r.edits)
        if not group:
            continue
        sig = tuple((e.start, e.end, e.text) for e in group)
        if sig in seen:
            continue
        if any(index.hits(e) for e in group):
            warnings.append(f"{r.rule}: match at offset {r.span[0]} dropped: it overlaps an earlier match")
            continue
        seen.add(sig)
        accepted.extend(group)
        for e in group:
            index.add(e)
    return EditScript(accepted, warnings)


class _OverlapIndex:
    """Accepted edits, searchable for :meth:`Edit.overlaps` in log time."""

    def __init__(self):
        self.starts: list[int] = []     # deletions, disjoint and sorted
        self.ends: list[int] = []
        self.points: list[int] = []     # insertions

    def hits(self, e: Edit) -> bool:
        if e.insertion:
            k = bisect.bisect_left(self.starts, e.start) - 1
            return k >= 0 and self.ends[k] > e.start
        k = bisect.bisect_left(self.starts, e.end) - 1
        if k >= 0 and self.ends[k] > e.start:
            return True
        k = bisect.bisect_right(self.points, e.start)
        return k < len(self.points) and self.points[k] < e.end

    def add(self, e: Edit):
        if e.insertion:
            bisect.insort(self.points, e.start)
        else:
            k = bisect.bisect_left(self.starts, e.start)
            self.starts.insert(k, e.start)
            self.ends.insert(k, e.end)


# -- diffs ---------------------------------------------------------------------------

def split_lines(text: str) -> list[str]:
    """Lines with their terminators; only ``\\n`` ends a line, as for patch(1)."""
    lines = text.split("\n")
    out = [l + "\n" for l in lines[:-1]]
    if lines[-1]:
        out.append(lines[-1])
    return out


def emit_diff(old, new, path: str) -> str:
    """Unified diff (3 lines of context) from ``old`` to ``new``; empty if identical."""
    a = split_lines(decode(old))
    b = split_lines(decode(new))
    out = []
    for line in difflib.unified_diff(a, b, f"a/{path}", f"b/{path}", n=3):
        if line.endswith("\n"):
            out.append(line)
        else:
            out.append(line + "\n\\ No newline at end of file\n")
    return "".join(out)


def reapply_diff(old, diff: str):
    """Apply a unified diff produced by :func:`emit_diff` to ``old``."""
    as_bytes = not isinstance(old, str)
    lines = split_lines(decode(old))
    dl = split_lines(decode(diff))
    out, pos, i = [], 0, 0
    while i < len(dl) and not dl[i].startswith("@@"):
        i += 1
    while i < len(dl):
        m = _HUNK.match(dl[i])
        if not m:
            raise DiffApplyError(f"bad hunk header {dl[i]!r}")
        start, count = int(m.group(1)), int(m.group(2) or 1)
        begin = start - 1 if count else start
        if begin < pos:
            raise DiffApplyError("hunks out of order")
        out.extend(lines[pos:begin])
        pos = begin
        i += 1
        while i < len(dl) and not dl[i].startswith("@@"):
            tag, body = dl[i][0], dl[i][1:]
            if i + 1 < len(dl) and dl[i + 1].startswith("\\"):
                body = body[:-1] if body.endswith("\n") else body
                i += 1
            if tag in " -":
                if pos >= len(lines) or lines[pos] != body:
                    raise DiffApplyError(f"context mismatch at line {pos + 1}")
                if tag == " ":
                    out.append(body)
                pos += 1
            elif tag == "+":
                out.append(body)
            else:
                raise DiffApplyError(f"bad diff line {dl[i]!r}")
            i += 1
    out.extend(lines[pos:])
    result = "".join(out)
    return encode(result) if as_bytes else result
