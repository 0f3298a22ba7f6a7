"""Semantic patch (SmPL subset) reader.

A patch file is a sequence of rules.  Pattern rules carry metavariable
declarations and a body of context, ``-`` and ``+`` lines; script rules
carry a restricted, declarative Python body (dictionary tables and
``coccinelle.x = ...`` bindings) that is checked but never executed.
"""
from __future__ import annotations

import ast
import re
import textwrap
from dataclasses import dataclass, field

from . import cparser
from .lexer import lex

METAVAR_KINDS = (
    "fresh identifier", "parameter list", "statement list", "expression list",
    "type", "identifier", "function", "statement", "expression", "constant",
    "position", "symbol", "pragmainfo",
)
LIST_KINDS = frozenset({"parameter list", "statement list", "expression list"})
CONSTRUCTORS = {"make_ident": "ident", "make_type": "type", "make_pragmainfo": "pragmainfo"}

_SPATCH = re.compile(r"^#\s*spatch\b(.*)$")
_HEADER = re.compile(r"^@([^@]*)@(.*)$")
_DECL = re.compile(r"^\s*(" + "|".join(k.replace(" ", r"\s+") for k in METAVAR_KINDS) + r")\s+(.*)$", re.S)
_NAME = r"[A-Za-z_]\w*"
_QNAME = re.compile(rf"^({_NAME})(?:\.({_NAME}))?$")
_IDENT = re.compile(rf"^{_NAME}$")


class SmplSyntaxError(Exception):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.message = message
        self.line = line


class ScriptSubsetError(SmplSyntaxError):
    """A script block uses a construct outside the supported declarative subset."""


@dataclass(frozen=True)
class MetavarDecl:
    name: str
    kind: str
    rule: str | None = None                 # inherited from this rule
    regex: str | None = None
    values: tuple[str, ...] | None = None
    fresh: tuple[tuple[str, str], ...] | None = None   # ("lit", s) | ("mv", name)

    def __post_init__(self):
        if (self.fresh is not None) != (self.kind == "fresh identifier"):
            raise SmplSyntaxError(f"fresh template only allowed on fresh identifiers ({self.name})")
        if self.regex is not None:
            try:
                re.compile(self.regex)
            except re.error as exc:
                raise SmplSyntaxError(f"bad regex for {self.name}: {exc}") from None
        if self.values is not None and not self.values:
            raise SmplSyntaxError(f"empty value set for {self.name}")

    @property
    def source(self) -> str:
        return f"{self.rule}.{self.name}" if self.rule else self.name

    def format(self) -> str:
        text = f"{self.kind} {self.source}"
        if self.regex is not None:
            text += f" =~ {_quote(self.regex)}"
        if self.values is not None:
            text += " = {" + ",".join(self.values) + "}"
        if self.fresh is not None:
            text += " = " + "##".join(_quote(v) if k == "lit" else v for k, v in self.fresh)
        return text + ";"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass
class PatternRule:
    name: str
    metavars: tuple[MetavarDecl, ...] = ()
    body: str = ""
    depends: tuple[tuple[str, bool], ...] = ()     # (rule, must_have_matched)
    anonymous: bool = False
    line: int = 0
    _compiled: dict = field(default_factory=dict, repr=False, compare=False)

    def decl(self, name: str) -> MetavarDecl | None:
        for d in self.metavars:
            if d.name == name:
                return d
        return None

    def key(self, name: str) -> tuple[str, str]:
        d = self.decl(name)
        return (d.rule or self.name, name) if d else (self.name, name)

    @property
    def inherited_rules(self) -> list[str]:
        seen = []
        for d in self.metavars:
            if d.rule and d.rule not in seen:
                seen.append(d.rule)
        return seen

    @property
    def compiled(self) -> "CompiledPattern":
        return self.compile("c-ext")

    def compile(self, dialect: str) -> "CompiledPattern":
        if dialect not in self._compiled:
            self._compiled[dialect] = compile_pattern(self, dialect)
        return self._compiled[dialect]

    @property
    def modifies(self) -> bool:
        return any(l.startswith(("+", "-")) for l in self.body.split("\n"))


@dataclass
class ScriptRule:
    name: str
    kind: str                                            # "initialize" | "script"
    inputs: tuple[tuple[str, str, str], ...] = ()        # (local, rule, name)
    outputs: tuple[str, ...] = ()
    body: str = ""
    tables: dict = field(default_factory=dict)
    assignments: tuple = ()                              # (output, constructor, expr)
    depends: tuple[tuple[str, bool], ...] = ()
    anonymous: bool = False
    line: int = 0

    @property
    def inherited_rules(self) -> list[str]:
        seen = []
        for _, rule, _ in self.inputs:
            if rule not in seen:
                seen.append(rule)
        return seen


@dataclass
class RuleSet:
    rules: list
    dialect: str | None = None      # raw hint, e.g. "--c++=23"

    def __getitem__(self, name: str):
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.rules]

    @property
    def wants_extensions(self) -> bool:
        return bool(self.dialect and "c++" in self.dialect)


# -- parsing -----------------------------------------------------------------

def parse_smpl(text: str) -> RuleSet:
    """Parse semantic patch text into a :class:`RuleSet`."""
    lines = text.splitlines()
    rules = []
    dialect = None
    anon = 0
    i, n = 0, len(lines)
    while i < n:
        line = lines[i]
        m = _SPATCH.match(line)
        if m:
            dialect = m.group(1).strip() or dialect
            i += 1
            continue
        if not line.startswith("@"):
            if line.strip() and not line.strip().startswith("//"):
                raise SmplSyntaxError("text outside of any rule", i + 1)
            i += 1
            continue
        start_line = i + 1
        hm = _HEADER.match(line)
        if not hm:
            raise SmplSyntaxError("malformed rule header", start_line)
        header, rest = hm.group(1).strip(), hm.group(2)
        # metavariable declarations up to the closing @@
        decl_parts = []
        while "@@" not in rest:
            decl_parts.append(rest)
            i += 1
            if i >= n:
                raise SmplSyntaxError("missing '@@' after metavariable declarations", start_line)
            rest = lines[i]
        before, after = rest.split("@@", 1)
        decl_parts.append(before)
        if after.strip():
            raise SmplSyntaxError("unexpected text after '@@'", i + 1)
        i += 1
        body_lines = []
        while i < n and not lines[i].startswith("@"):
            sm = _SPATCH.match(lines[i])
            if sm:
                dialect = sm.group(1).strip() or dialect
                body_lines.append("")
            else:
                body_lines.append(lines[i])
            i += 1
        while body_lines and not body_lines[-1].strip():
            body_lines.pop()
        body = "\n".join(body_lines)
        decl_text = "\n".join(decl_parts)
        kind, name, depends = _parse_header(header, start_line)
        if name is None:
            name = f"__anon{anon}"
            anon += 1
            anonymous = True
        else:
            anonymous = False
        if name in (r.name for r in rules):
            raise SmplSyntaxError(f"duplicate rule name {name!r}", start_line)
        if kind == "pattern":
            rules.append(PatternRule(name, _parse_decls(decl_text, start_line), body, depends,
                                     anonymous, start_line))
        else:
            rules.append(_parse_script(kind, name, decl_text, body, depends, anonymous, start_line))
    return RuleSet(rules, dialect)


def _parse_header(header: str, line: int):
    deps = ()
    m = re.search(r"\bdepends\s+on\b(.*)$", header)
    if m:
        deps = _parse_depends(m.group(1), line)
        header = header[:m.start()].strip()
    m = re.match(r"^(initialize|finalize|script)\s*:\s*(\w+)\s*(\w*)$", header)
    if m:
        what, lang, name = m.groups()
        if lang != "python":
            raise SmplSyntaxError(f"unsupported script language {lang!r}", line)
        if what == "finalize":
            raise SmplSyntaxError("finalize rules are not supported", line)
        if what == "initialize":
            if deps:
                raise SmplSyntaxError("initialize rules cannot have dependencies", line)
            return "initialize", name or None, ()
        return "script", name or None, deps
    if header == "":
        return "pattern", None, deps
    if not _IDENT.match(header):
        raise SmplSyntaxError(f"bad rule header {header!r}", line)
    return "pattern", header, deps


def _parse_depends(text: str, line: int):
    deps = []
    for part in text.split("&&"):
        part = part.strip()
        m = re.match(rf"^(!?)\s*({_NAME})$", part)
        if not m:
            raise SmplSyntaxError(f"bad dependency {part!r}", line)
        deps.append((m.group(2), m.group(1) != "!"))
    if not deps:
        raise SmplSyntaxError("empty dependency", line)
    return tuple(deps)


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside of quotes and braces."""
    parts, buf, depth, quote = [], [], 0, False
    i = 0
    while i < len(text):
        c = text[i]
        if quote:
            buf.append(c)
            if c == "\\" and i + 1 < len(text):
                buf.append(text[i + 1])
                i += 1
            elif c == '"':
                quote = False
        elif c == '"':
            quote = True
            buf.append(c)
        elif c in "{(":
            depth += 1
            buf.append(c)
        elif c in "})":
            depth -= 1
            buf.append(c)
        elif c == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(c)
        i += 1
    parts.append("".join(buf))
    return parts


def _unquote(s: str, line: int) -> str:
    s = s.strip()
    if len(s) < 2 or s[0] != '"' or s[-1] != '"':
        raise SmplSyntaxError(f"expected string literal, got {s!r}", line)
    return ast.literal_eval(s)


def _parse_decls(text: str, first_line: int) -> tuple[MetavarDecl, ...]:
    decls = []
    pos = 0
    for stmt in _split_top(text, ";"):
        lead = len(stmt) - len(stmt.lstrip())
        line = first_line + text.count("\n", 0, pos + lead)
        pos += len(stmt) + 1
        if not stmt.strip():
            continue
        m = _DECL.match(stmt)
        if not m:
            raise SmplSyntaxError(f"bad metavariable declaration {stmt.strip()!r}", line)
        kind = " ".join(m.group(1).split())
        for entry in _split_top(m.group(2), ","):
            entry = entry.strip()
            regex = values = fresh = None
            if "=~" in entry:
                entry, pat = entry.split("=~", 1)
                regex = _unquote(pat, line)
            elif "=" in entry:
                entry, rhs = entry.split("=", 1)
                rhs = rhs.strip()
                if kind == "fresh identifier":
                    fresh = []
                    for piece in rhs.split("##"):
                        piece = piece.strip()
                        if piece.startswith('"'):
                            fresh.append(("lit", _unquote(piece, line)))
                        elif _IDENT.match(piece):
                            fresh.append(("mv", piece))
                        else:
                            raise SmplSyntaxError(f"bad fresh identifier part {piece!r}", line)
                    fresh = tuple(fresh)
                elif rhs.startswith("{") and rhs.endswith("}"):
                    values = tuple(v.strip() for v in rhs[1:-1].split(",") if v.strip())
                else:
                    raise SmplSyntaxError(f"bad constraint {rhs!r}", line)
            qm = _QNAME.match(entry.strip())
            if not qm:
                raise SmplSyntaxError(f"bad metavariable name {entry.strip()!r}", line)
            rule, name = (qm.group(1), qm.group(2)) if qm.group(2) else (None, qm.group(1))
            if kind == "fresh identifier" and fresh is None:
                raise SmplSyntaxError(f"fresh identifier {name} needs a template", line)
            try:
                decls.append(MetavarDecl(name, kind, rule, regex, values, fresh))
            except SmplSyntaxError as exc:
                raise SmplSyntaxError(exc.message, line) from None
    return tuple(decls)


# -- script rules --------------------------------------------------------------

def _parse_script(kind, name, decl_text, body, depends, anonymous, line) -> ScriptRule:
    inputs, outputs = [], []
    for stmt in _split_top(decl_text, ";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        m = re.match(rf"^({_NAME})\s*<<\s*({_NAME})\.({_NAME})$", stmt)
        if m:
            inputs.append(m.groups())
        elif _IDENT.match(stmt):
            outputs.append(stmt)
        else:
            raise SmplSyntaxError(f"bad script declaration {stmt!r}", line)
    if kind == "initialize" and (inputs or outputs):
        raise SmplSyntaxError("initialize rules take no metavariables", line)
    code = _logical_lines(body)
    try:
        tree = ast.parse(code)
    except SyntaxError as exc:
        raise ScriptSubsetError(f"script body does not parse: {exc.msg}", line + (exc.lineno or 0)) from None
    if kind == "initialize":
        tables = {}
        for stmt in tree.body:
            if not (isinstance(stmt, ast.Assign) and len(stmt.targets) == 1
                    and isinstance(stmt.targets[0], ast.Name) and isinstance(stmt.value, ast.Dict)):
                raise ScriptSubsetError("initializers may only assign dictionary literals", line)
            try:
                table = ast.literal_eval(stmt.value)
            except ValueError:
                raise ScriptSubsetError("table entries must be literals", line) from None
            if not all(isinstance(k, str) and isinstance(v, str) for k, v in table.items()):
                raise ScriptSubsetError("tables must map strings to strings", line)
            tables[stmt.targets[0].id] = table
        return ScriptRule(name, kind, body=body, tables=tables, anonymous=anonymous, line=line)
    assignments = []
    for stmt in tree.body:
        if not (isinstance(stmt, ast.Assign) and len(stmt.targets) == 1
                and isinstance(stmt.targets[0], ast.Attribute)
                and isinstance(stmt.targets[0].value, ast.Name)
                and stmt.targets[0].value.id == "coccinelle"):
            raise ScriptSubsetError("script statements must have the form 'coccinelle.x = ...'", line)
        out = stmt.targets[0].attr
        value = stmt.value
        if isinstance(value, ast.Call):
            func = value.func
            if not (isinstance(func, ast.Attribute) and isinstance(func.value, ast.Name)
                    and func.value.id == "cocci" and func.attr in CONSTRUCTORS
                    and len(value.args) == 1 and not value.keywords):
                raise ScriptSubsetError("only cocci.make_ident/make_type/make_pragmainfo calls are supported", line)
            assignments.append((out, CONSTRUCTORS[func.attr], _script_expr(value.args[0], line)))
        else:
            assignments.append((out, "string", _script_expr(value, line)))
    return ScriptRule(name, kind, tuple(inputs), tuple(outputs), body, {}, tuple(assignments),
                      depends, anonymous, line)


_CONTINUES = ("=", "\\", "(", ",", "+", "{", ":")


def _logical_lines(body: str) -> str:
    """Join the physical lines of a script body into one line per statement.

    Assignments are often broken after ``=`` or before an argument list,
    and may end with ``;``.  A line continues the current statement when
    it is indented deeper than the statement start or the previous line
    ends with an operator or opening bracket.
    """
    lines = [l for l in textwrap.dedent(body).splitlines()
             if l.strip() and not l.lstrip().startswith("//")]
    stmts = []
    indent = 0
    for l in lines:
        ind = len(l) - len(l.lstrip())
        if stmts and (ind > indent or stmts[-1].rstrip().endswith(_CONTINUES)):
            stmts[-1] = stmts[-1].rstrip().rstrip("\\") + " " + l.strip()
        else:
            stmts.append(l.strip())
            indent = ind
    return "\n".join(st.rstrip().rstrip(";") for st in stmts)


def _script_expr(node, line):
    if isinstance(node, ast.Constant) and isinstance(node.value, str):
        return ("lit", node.value)
    if isinstance(node, ast.Name):
        return ("var", node.id)
    if (isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name)
            and isinstance(node.slice, ast.Name)):
        return ("table", node.value.id, node.slice.id)
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Add):
        parts = []
        for side in (node.left, node.right):
            sub = _script_expr(side, line)
            if sub[0] == "table":
                raise ScriptSubsetError("table lookups cannot be concatenated", line)
            parts.extend(sub[1] if sub[0] == "concat" else [sub])
        return ("concat", tuple(parts))
    raise ScriptSubsetError(f"unsupported script expression {ast.dump(node)[:60]}", line)


def _script_expr_format(e) -> str:
    if e[0] == "lit":
        return repr(e[1]).replace("'", '"') if '"' not in e[1] else repr(e[1])
    if e[0] == "var":
        return e[1]
    if e[0] == "table":
        return f"{e[1]}[{e[2]}]"
    return " + ".join(_script_expr_format(p) for p in e[1])


# -- printing ------------------------------------------------------------------

def _deps_text(deps) -> str:
    if not deps:
        return ""
    return " depends on " + " && ".join(("" if ok else "!") + r for r, ok in deps)


def format_ruleset(rule_set: RuleSet) -> str:
    """Print a RuleSet back to SmPL text (round-trips through parse_smpl)."""
    out = []
    if rule_set.dialect:
        out.append(f"# spatch {rule_set.dialect}")
    for rule in rule_set.rules:
        name = "" if rule.anonymous else rule.name
        if isinstance(rule, PatternRule):
            out.append(f"@{name}{_deps_text(rule.depends)}@".replace("@ ", "@", 1))
            out.extend(d.format() for d in rule.metavars)
            out.append("@@")
            out.append(rule.body)
        elif rule.kind == "initialize":
            out.append("@initialize:python@")
            out.append("@@")
            for tname, table in rule.tables.items():
                out.append(f"{tname} = {{" + ", ".join(f"{_quote(k)}: {_quote(v)}" for k, v in table.items()) + "}")
        else:
            out.append(f"@script:python {name}{_deps_text(rule.depends)}@".replace(" @", "@"))
            out.extend(f"{local} << {r}.{n};" for local, r, n in rule.inputs)
            out.extend(f"{o};" for o in rule.outputs)
            out.append("@@")
            for o, ctor, e in rule.assignments:
                inner = _script_expr_format(e)
                if ctor == "string":
                    out.append(f"coccinelle.{o} = {inner}")
                else:
                    fn = {v: k for k, v in CONSTRUCTORS.items()}[ctor]
                    out.append(f"coccinelle.{o} = cocci.{fn}({inner})")
        out.append("")
    return "\n".join(out)


def structure(rule_set: RuleSet):
    """Comparable summary of a RuleSet, ignoring raw script text and line numbers."""
    items = []
    for r in rule_set.rules:
        if isinstance(r, PatternRule):
            items.append(("pattern", r.name, r.anonymous, r.depends, r.metavars, r.body.strip("\n")))
        else:
            items.append(("script", r.name, r.kind, r.anonymous, r.depends, r.inputs, r.outputs,
                          r.tables, r.assignments))
    return rule_set.dialect, tuple(items)


# -- pattern compilation -----------------------------------------------------------

@dataclass
class PlusBlock:
    after: int                    # index into pattern tokens; -1 = before everything
    lines: list[str]
    path: tuple                   # enclosing (group id, branch) pairs


@dataclass
class CompiledPattern:
    tokens: list
    minus: frozenset              # token indices annotated '-'
    plus: list[PlusBlock]
    kind: str                     # "expr" | "items"
    root: object                  # expression node, or list of item nodes
    paths: dict                   # token index -> (group id, branch) path
    mvtable: dict                 # local name -> (kind, key)
    real: frozenset = frozenset() # matchable tokens: no markers, no @pos


_MARKER_LINE = {"(": "\\(", "|": "\\|", ")": "\\)", "&": "\\&"}


def compile_pattern(rule: PatternRule, dialect: str = "c-ext") -> CompiledPattern:
    minus_lines, tags, plus_groups = [], [], []
    pending = None
    for lineno, line in enumerate(rule.body.split("\n")):
        if line.startswith("+"):
            if pending is None:
                pending = (lineno, [])
                plus_groups.append(pending)
            pending[1].append(line[1:])
            minus_lines.append("")
            tags.append(" ")
            continue
        pending = None
        stripped = line.strip()
        if line[:1] in _MARKER_LINE and stripped == line[:1]:
            minus_lines.append(_MARKER_LINE[stripped])
            tags.append(" ")
        elif line.startswith("-"):
            minus_lines.append(" " + line[1:])
            tags.append("-")
        else:
            minus_lines.append(line)
            tags.append(" ")
    text = "\n".join(minus_lines)
    tokens = lex(text, pattern=True)
    line_starts = [0]
    for l in minus_lines:
        line_starts.append(line_starts[-1] + len(l) + 1)

    def line_of(offset):
        lo = 0
        while lo + 1 < len(line_starts) and line_starts[lo + 1] <= offset:
            lo += 1
        return lo

    minus = set()
    paths = {}
    stack = []
    gid = 0
    token_lines = []
    for idx, tok in enumerate(tokens):
        ln = line_of(tok.start)
        token_lines.append(ln)
        if tok.trivia:
            continue
        if tags[ln] == "-":
            minus.add(idx)
        if tok.kind == "marker":
            if tok.text == "\\(":
                stack.append([gid, 0])
                gid += 1
            elif tok.text in ("\\|", "\\&"):
                if not stack:
                    raise SmplSyntaxError("group separator outside a group", rule.line)
                stack[-1][1] += 1
            elif tok.text == "\\)":
                if not stack:
                    raise SmplSyntaxError("unbalanced group close", rule.line)
                stack.pop()
        paths[idx] = tuple(tuple(x) for x in stack)
    # anchor every plus group after the last significant token preceding it
    plus = []
    for lineno, lines in plus_groups:
        after = -1
        for idx, tok in enumerate(tokens):
            if not tok.trivia and token_lines[idx] < lineno:
                after = idx
        plus.append(PlusBlock(after, lines, paths.get(after, ())))
        for l in lines:
            if "..." in l:
                raise SmplSyntaxError("plus lines cannot contain '...'", rule.line + 1 + lineno)

    mvtable = {}
    for d in rule.metavars:
        if d.kind in ("symbol", "fresh identifier"):
            continue
        kind = "identifier" if d.kind == "function" else d.kind
        mvtable[d.name] = (kind, rule.key(d.name))

    root, kind, pattern_only = _parse_pattern(tokens, mvtable, dialect, rule)
    real = frozenset(i for i, t in enumerate(tokens)
                     if not t.trivia and t.kind != "marker" and i not in pattern_only)
    return CompiledPattern(tokens, frozenset(minus & real), plus, kind, root, paths, mvtable, real)


def _parse_pattern(tokens, mvtable, dialect, rule):
    if not any(not t.trivia for t in tokens):
        return [], "items", set()
    parser = cparser.Parser(tokens, dialect, mvtable)
    try:
        node = parser.expr()
        if parser.peek() is None and not _statement_level(node):
            return node, "expr", parser.pattern_only
    except cparser.CSyntaxError:
        pass
    parser = cparser.Parser(tokens, dialect, mvtable)
    items = []
    try:
        while parser.peek() is not None:
            items.append(_pattern_item(parser))
    except cparser.CSyntaxError as exc:
        raise SmplSyntaxError(f"rule {rule.name}: pattern does not parse: {exc}", rule.line) from None
    return items, "items", parser.pattern_only


def _statement_level(node) -> bool:
    """A bare statement metavariable (or a group holding one) is not an expression."""
    if node.kind == "mv":
        return node.mvkind in ("statement", "statement list")
    if node.kind in ("disj", "conj"):
        return any(_statement_level(b) for b in node.fields["branches"])
    return False


def _pattern_item(parser):
    tok = parser.peek()
    if tok.kind in ("pragma", "include", "directive"):
        return parser.line_item()
    if parser.at("__attribute__") or (parser.looks_like_decl() and parser.mv_kind(tok) != "statement"):
        return parser.decl_or_funcdef()
    return parser.statement()


# -- validation ------------------------------------------------------------------

def validate(rule_set: RuleSet) -> list[str]:
    """Return a list of human-readable problems; empty means the rules are usable."""
    diags = []
    declared: dict[str, set[str]] = {}
    tables: set[str] = set()
    for pos, rule in enumerate(rule_set.rules):
        earlier = set(rule_set.names[:pos])
        for dep, _ in rule.depends:
            if dep == rule.name or dep not in rule_set.names:
                diags.append(f"{rule.name}: depends on unknown rule {dep!r}")
            elif dep not in earlier:
                diags.append(f"{rule.name}: dependency cycle through {dep!r} (rules must depend on earlier rules)")
        if isinstance(rule, ScriptRule):
            if rule.kind == "initialize":
                tables.update(rule.tables)
                declared[rule.name] = set()
                continue
            names = {local for local, _, _ in rule.inputs} | set(rule.outputs)
            for local, src, mv in rule.inputs:
                if src not in earlier:
                    diags.append(f"{rule.name}: input {local} refers to unknown rule {src!r}")
                elif mv not in declared.get(src, set()):
                    diags.append(f"{rule.name}: rule {src!r} declares no metavariable {mv!r}")
            for out, _, expr in rule.assignments:
                if out not in rule.outputs:
                    diags.append(f"{rule.name}: assignment to undeclared output {out!r}")
                for ref in _script_refs(expr):
                    if ref[0] == "table" and ref[1] not in tables:
                        diags.append(f"{rule.name}: unknown table {ref[1]!r}")
                    if ref[-1] not in names and ref[0] != "lit":
                        diags.append(f"{rule.name}: undeclared metavariable {ref[-1]!r}")
            declared[rule.name] = set(rule.outputs)
            continue
        for d in rule.metavars:
            if d.rule is None:
                continue
            if d.rule not in earlier:
                diags.append(f"{rule.name}: inherits from unknown rule {d.rule!r}")
            elif d.name not in declared.get(d.rule, set()):
                diags.append(f"{rule.name}: rule {d.rule!r} declares no metavariable {d.name!r}")
        names = {d.name for d in rule.metavars}
        for d in rule.metavars:
            for k, v in d.fresh or ():
                if k == "mv" and v not in names:
                    diags.append(f"{rule.name}: fresh identifier {d.name} uses undeclared {v!r}")
        for lineno, line in enumerate(rule.body.split("\n")):
            if line.startswith("+") and "..." in line:
                diags.append(f"{rule.name}: plus line {lineno + 1} contains '...'")
        if not any("..." in l for l in rule.body.split("\n") if l.startswith("+")):
            try:
                rule.compiled
            except SmplSyntaxError as exc:
                diags.append(str(exc))
        declared[rule.name] = {d.name for d in rule.metavars}
    return diags


def _script_refs(expr):
    if expr[0] == "concat":
        for p in expr[1]:
            yield from _script_refs(p)
    elif expr[0] in ("var", "table"):
        yield expr
