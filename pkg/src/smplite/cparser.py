"""Recursive-descent parser for the C-with-extensions subset.

The same parser reads target sources and the minus/context side of
semantic-patch bodies; in pattern mode it additionally understands
metavariables, ``...`` wildcards, ``\\( | \\)`` groups and ``term@pos``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .lexer import (BASE_TYPES, QUALIFIERS, LineIndex, Token, decode, encode,
                    join, lex)

DIALECTS = ("c", "c-ext")

BINARY_PREC = {
    "||": 4, "&&": 5, "|": 6, "^": 7, "&": 8,
    "==": 9, "!=": 9, "<": 10, "<=": 10, ">": 10, ">=": 10,
    "<<": 11, ">>": 11, "+": 12, "-": 12, "*": 13, "/": 13, "%": 13,
}
ASSIGN_OPS = frozenset("= += -= *= /= %= &= |= ^= <<= >>=".split())
PREFIX_OPS = frozenset("++ -- + - ! ~ * &".split())

EXPR_KINDS = frozenset("""
    ident literal unary postfix binary assign ternary call chevron subscript
    commasub member paren cast sizeof comma initlist blockcall
""".split())
STMT_KINDS = frozenset("""
    compound exprstmt decl for rangefor if while do return break continue
    empty pragma include directive
""".split())
ITEM_KINDS = STMT_KINDS | {"funcdef"}
LINE_KINDS = frozenset({"pragma", "include", "directive"})


class CSyntaxError(Exception):
    def __init__(self, message: str, offset: int = 0, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.message = message
        self.offset = offset
        self.line = line
        self.column = column


class Node:
    """A syntax-tree node spanning tokens ``[first, last)``.

    ``fields`` maps child names to a node, a list of nodes, or None, in
    source order.  ``own`` lists the significant token indices that belong
    to this node but to none of its children.
    """

    __slots__ = ("kind", "first", "last", "fields", "op", "own", "pos",
                 "name", "mvkind", "key", "tok", "gid")

    def __init__(self, kind, first, last, fields=None, op=None):
        self.kind = kind
        self.first = first
        self.last = last
        self.fields = fields or {}
        self.op = op
        self.own: list[int] = []
        self.pos = None       # position metavariable attached with @
        self.name = None      # metavariable name
        self.mvkind = None
        self.key = None
        self.tok = None       # pattern token index for mv / dots
        self.gid = None       # group id for disjunctions/conjunctions

    def children(self):
        for v in self.fields.values():
            if isinstance(v, list):
                yield from v
            elif v is not None:
                yield v

    def walk(self):
        """Preorder traversal."""
        yield self
        for c in self.children():
            yield from c.walk()

    def __repr__(self):
        extra = f" {self.op!r}" if self.op else ""
        if self.kind == "mv":
            extra = f" {self.name}:{self.mvkind}"
        return f"<{self.kind}{extra} [{self.first},{self.last})>"


@dataclass
class SyntaxTree:
    text: str
    tokens: list[Token]
    root: Node
    dialect: str = "c-ext"
    path: str = ""
    _index: LineIndex | None = field(default=None, repr=False)
    _funcdefs: list | None = field(default=None, repr=False)

    @property
    def index(self) -> LineIndex:
        if self._index is None:
            self._index = LineIndex(self.text)
        return self._index

    def span(self, node: Node) -> tuple[int, int]:
        return self.tokens[node.first].start, self.tokens[node.last - 1].end

    def node_text(self, node: Node) -> str:
        a, b = self.span(node)
        return self.text[a:b]

    def norm(self, first: int, last: int) -> tuple[str, ...]:
        """Significant token texts in ``[first, last)``: structural identity."""
        return tuple(t.text for t in self.tokens[first:last] if not t.trivia)

    def funcdef_spans(self) -> list[tuple[int, int]]:
        """Spans of top-level function definitions, in file order."""
        if self._funcdefs is None:
            items = self.root.fields.get("items", []) if self.root.kind == "tu" else []
            self._funcdefs = [self.span(n) for n in items if n.kind == "funcdef"]
        return self._funcdefs

    def identifiers(self) -> set[str]:
        return {t.text for t in self.tokens if t.kind == "identifier"}


def is_statement(node: Node) -> bool:
    return node.kind in ITEM_KINDS


class Parser:
    def __init__(self, tokens: list[Token], dialect: str = "c-ext", metavars=None):
        if dialect not in DIALECTS:
            raise ValueError(f"unknown dialect {dialect!r}")
        self.toks = tokens
        self.sig = [i for i, t in enumerate(tokens) if not t.trivia]
        self.p = 0
        self.dialect = dialect
        # pattern mode: name -> (kind, key)
        self.mv = metavars
        self.pattern = metavars is not None
        self.pattern_only: set[int] = set()
        self._gids = itertools.count()
        self._index = None

    # -- token access -------------------------------------------------
    def peek(self, k: int = 0) -> Token | None:
        i = self.p + k
        return self.toks[self.sig[i]] if i < len(self.sig) else None

    def text(self, k: int = 0) -> str | None:
        t = self.peek(k)
        return t.text if t else None

    def at(self, *texts) -> bool:
        t = self.peek()
        return t is not None and t.text in texts and t.kind in ("punctuator", "keyword", "marker")

    def advance(self) -> int:
        if self.p >= len(self.sig):
            self.error("unexpected end of input")
        i = self.sig[self.p]
        self.p += 1
        return i

    def expect(self, text: str) -> int:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message: str):
        if self.p < len(self.sig):
            tok = self.toks[self.sig[self.p]]
            found = f", found {tok.text!r}"
            offset = tok.start
        else:
            found = " at end of input"
            offset = self.toks[-1].end if self.toks else 0
        if self._index is None:
            self._index = LineIndex(join(self.toks))
        pos = self._index.position(offset)
        raise CSyntaxError(message + found, offset, pos.line, pos.column)

    def need_ext(self, what: str):
        if self.dialect != "c-ext":
            self.error(f"{what} requires the c-ext dialect")

    def mk(self, kind: str, start_p: int, fields=None, op=None) -> Node:
        first = self.sig[start_p]
        last = self.sig[self.p - 1] + 1
        node = Node(kind, first, last, fields, op)
        # children are disjoint and ordered, so one merge pass finds the gaps
        ranges = sorted((c.first, c.last) for c in node.children())
        own, k = [], 0
        for i in self.sig[start_p:self.p]:
            while k < len(ranges) and ranges[k][1] <= i:
                k += 1
            if k < len(ranges) and ranges[k][0] <= i:
                continue
            if i not in self.pattern_only:
                own.append(i)
        node.own = own
        return node

    # -- pattern helpers ----------------------------------------------
    def mv_kind(self, tok: Token | None) -> str | None:
        if not self.pattern or tok is None or tok.kind != "identifier":
            return None
        entry = self.mv.get(tok.text)
        return entry[0] if entry else None

    def mv_node(self) -> Node:
        start = self.p
        tok = self.peek()
        kind, key = self.mv[tok.text]
        i = self.advance()
        node = self.mk("mv", start)
        node.own = []
        node.name, node.mvkind, node.key, node.tok = tok.text, kind, key, i
        return node

    def maybe_pos(self, node: Node) -> Node:
        if self.pattern and self.at("@"):
            at = self.advance()
            name_tok = self.peek()
            if self.mv_kind(name_tok) != "position":
                self.error("expected position metavariable after '@'")
            i = self.advance()
            self.pattern_only.update((at, i))
            node.pos = self.mv[name_tok.text][1]
        return node

    def dots(self) -> Node:
        start = self.p
        i = self.expect("...")
        node = self.mk("dots", start)
        node.tok = i
        node.own = []
        return node

    def group(self, parse_branch) -> Node:
        start = self.p
        gid = next(self._gids)
        self.pattern_only.add(self.expect("\\("))
        branches = [parse_branch()]
        sep = None
        while self.at("\\|", "\\&"):
            s = self.text()
            if sep is not None and s != sep:
                self.error("cannot mix disjunction and conjunction in one group")
            sep = s
            self.pattern_only.add(self.advance())
            branches.append(parse_branch())
        self.pattern_only.add(self.expect("\\)"))
        node = self.mk("conj" if sep == "\\&" else "disj", start, {"branches": branches})
        node.gid = gid
        node.own = []
        return node

    # -- top level ----------------------------------------------------
    def translation_unit(self) -> Node:
        start = self.p
        items = []
        while self.peek() is not None:
            items.append(self.external())
        if not self.sig:
            return Node("tu", 0, len(self.toks), {"items": []})
        node = self.mk("tu", start, {"items": items})
        node.first, node.last = 0, len(self.toks)
        return node

    def external(self) -> Node:
        tok = self.peek()
        if tok.kind in ("pragma", "include", "directive"):
            return self.line_item()
        if self.at(";"):
            start = self.p
            self.advance()
            return self.mk("empty", start)
        return self.decl_or_funcdef()

    def line_item(self) -> Node:
        start = self.p
        kind = self.peek().kind
        self.advance()
        return self.mk(kind, start)

    def attributes(self) -> list[Node]:
        attrs = []
        while self.at("__attribute__"):
            start = self.p
            self.advance()
            self.expect("(")
            self.expect("(")
            items = []
            if not self.at(")"):
                items.append(self.assign_expr())
                while self.at(","):
                    self.advance()
                    items.append(self.assign_expr())
            self.expect(")")
            self.expect(")")
            attrs.append(self.mk("attribute", start, {"items": items}))
        return attrs

    def decl_or_funcdef(self) -> Node:
        start = self.p
        attrs = self.attributes()
        typ = self.type_spec()
        # function definition: T [*]name ( params ) {
        save = self.p
        k = 0
        while self.text(k) in ("*", "&"):
            k += 1
        nt = self.peek(k)
        if nt is not None and nt.kind == "identifier" and self.text(k + 1) == "(":
            for _ in range(k):
                self.advance()
            name = self.ident_or_mv()
            self.expect("(")
            params = self.params()
            self.expect(")")
            if self.at("{"):
                body = self.compound()
                return self.mk("funcdef", start, {"attrs": attrs, "type": typ, "name": name,
                                                  "params": params, "body": body})
            self.p = save
        if attrs:
            self.error("attributes are only supported on function definitions")
        return self.finish_decl(start, typ)

    def finish_decl(self, start: int, typ: Node, semi: bool = True) -> Node:
        decls = [self.declarator()]
        while self.at(","):
            self.advance()
            decls.append(self.declarator())
        if semi:
            self.expect(";")
        return self.mk("decl", start, {"type": typ, "declarators": decls})

    def params(self) -> list[Node]:
        params = []
        if self.at(")"):
            return params
        while True:
            if self.pattern and self.at("..."):
                params.append(self.dots())
            elif self.pattern and self.mv_kind(self.peek()) == "parameter list":
                params.append(self.mv_node())
            else:
                start = self.p
                typ = self.type_spec()
                decl = None
                if not self.at(",", ")"):
                    decl = self.declarator(allow_init=False, abstract=True)
                params.append(self.mk("param", start, {"type": typ, "declarator": decl}))
            if not self.at(","):
                return params
            self.advance()

    def starts_type(self, k: int = 0) -> bool:
        tok = self.peek(k)
        if tok is None:
            return False
        if tok.kind == "keyword":
            return tok.text in BASE_TYPES or tok.text in QUALIFIERS or tok.text in ("struct", "union", "enum")
        return self.mv_kind(tok) == "type"

    def looks_like_decl(self) -> bool:
        if self.starts_type():
            return True
        t0, t1 = self.peek(), self.peek(1)
        if t0 is None or t0.kind != "identifier" or t1 is None or self.mv_kind(t0):
            return False
        if t1.kind == "identifier":
            return True
        if t1.text in ("*", "&"):
            k = 1
            while self.text(k) in ("*", "&"):
                k += 1
            t = self.peek(k)
            return (t is not None and t.kind == "identifier"
                    and self.text(k + 1) in ("=", ";", ",", "[", ")"))
        return False

    def type_spec(self) -> Node:
        start = self.p
        if self.mv_kind(self.peek()) == "type":
            return self.mv_node()
        seen_base = False
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == "keyword" and tok.text in QUALIFIERS:
                self.advance()
            elif tok.kind == "keyword" and tok.text in BASE_TYPES:
                seen_base = True
                self.advance()
            elif tok.kind == "keyword" and tok.text in ("struct", "union", "enum"):
                self.advance()
                if self.peek() is None or self.peek().kind != "identifier":
                    self.error("expected tag name")
                self.advance()
                seen_base = True
            elif tok.kind == "identifier" and not seen_base and not self.mv_kind(tok):
                nxt = self.peek(1)
                if nxt is not None and (nxt.kind == "identifier" or nxt.text in ("*", "&", ")", ",")):
                    self.advance()
                    seen_base = True
                else:
                    break
            else:
                break
        if self.p == start:
            self.error("expected type")
        return self.mk("type", start)

    def ident_or_mv(self) -> Node:
        tok = self.peek()
        if tok is None or tok.kind != "identifier":
            self.error("expected identifier")
        if self.mv_kind(tok):
            return self.maybe_pos(self.mv_node())
        start = self.p
        self.advance()
        return self.maybe_pos(self.mk("ident", start))

    def declarator(self, allow_init: bool = True, abstract: bool = False) -> Node:
        start = self.p
        while self.at("*", "&", "const", "restrict", "__restrict__"):
            if self.at("&"):
                self.need_ext("reference declarator")
            self.advance()
        name = None
        if self.peek() is not None and self.peek().kind == "identifier":
            name = self.ident_or_mv()
        elif not abstract:
            self.error("expected declarator name")
        params = None
        if name is not None and self.at("("):
            self.advance()
            params = self.params()
            self.expect(")")
        dims = []
        while self.at("["):
            self.advance()
            dims.append(None if self.at("]") else self.assign_expr())
            self.expect("]")
        init = None
        if allow_init and self.at("="):
            self.advance()
            init = self.initializer()
        fields = {"name": name, "dims": [d for d in dims if d is not None], "init": init}
        if params is not None:
            fields["params"] = params
        return self.mk("declarator", start, fields)

    def initializer(self) -> Node:
        if self.at("{"):
            start = self.p
            self.advance()
            items = []
            while not self.at("}"):
                items.append(self.initializer())
                if not self.at(","):
                    break
                self.advance()
            self.expect("}")
            return self.mk("initlist", start, {"items": items})
        return self.assign_expr()

    # -- statements ---------------------------------------------------
    def compound(self) -> Node:
        start = self.p
        self.expect("{")
        items = []
        while not self.at("}"):
            if self.peek() is None:
                self.error("unterminated block")
            items.append(self.statement())
        self.expect("}")
        return self.mk("compound", start, {"items": items})

    def statement(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.error("expected statement")
        start = self.p
        if tok.kind in ("pragma", "include", "directive"):
            return self.line_item()
        if self.pattern:
            if self.at("..."):
                return self.dots()
            if self.at("\\("):
                return self.group(self.group_branch)
            if self.mv_kind(tok) in ("statement", "statement list"):
                return self.maybe_pos(self.mv_node())
        t = tok.text if tok.kind in ("keyword", "punctuator") else None
        if t == "{":
            return self.compound()
        if t == "for":
            return self.for_stmt()
        if t == "if":
            self.advance()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.statement()
            other = None
            if self.at("else"):
                self.advance()
                other = self.statement()
            return self.mk("if", start, {"cond": cond, "then": then, "else": other})
        if t == "while":
            self.advance()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            body = self.statement()
            return self.mk("while", start, {"cond": cond, "body": body})
        if t == "do":
            self.advance()
            body = self.statement()
            self.expect("while")
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            self.expect(";")
            return self.mk("do", start, {"body": body, "cond": cond})
        if t == "return":
            self.advance()
            value = None if self.at(";") else self.expr()
            self.expect(";")
            return self.mk("return", start, {"value": value})
        if t in ("break", "continue"):
            self.advance()
            self.expect(";")
            return self.mk(t, start)
        if t == ";":
            self.advance()
            return self.mk("empty", start)
        if self.looks_like_decl():
            typ = self.type_spec()
            return self.finish_decl(start, typ)
        value = self.expr()
        self.expect(";")
        return self.mk("exprstmt", start, {"expr": value})

    def group_branch(self) -> Node:
        """One alternative of a statement-level group.

        A bare expression (no trailing ``;``) is kept as an expression and
        later matched by containment.
        """
        tok = self.peek()
        if tok is None:
            self.error("expected group branch")
        if self.mv_kind(tok) in ("statement", "statement list"):
            return self.maybe_pos(self.mv_node())
        if (tok.kind in ("pragma", "include", "directive") or self.at("{", "for", "if", "while", "do", "return",
                                                                        "break", "continue", "...", "\\(")
                or self.looks_like_decl()):
            return self.statement()
        start = self.p
        value = self.expr()
        if self.at(";"):
            self.advance()
            return self.mk("exprstmt", start, {"expr": value})
        return value

    def for_stmt(self) -> Node:
        start = self.p
        self.expect("for")
        self.expect("(")
        init = None
        if self.pattern and self.at("..."):
            init = self.dots()
        elif self.looks_like_decl():
            dstart = self.p
            typ = self.type_spec()
            decl = self.declarator()
            if self.at(":"):
                self.need_ext("range-based for")
                self.advance()
                rng = self.expr()
                self.expect(")")
                body = self.statement()
                return self.mk("rangefor", start, {"type": typ, "declarator": decl,
                                                   "range": rng, "body": body})
            decls = [decl]
            while self.at(","):
                self.advance()
                decls.append(self.declarator())
            init = self.mk("decl", dstart, {"type": typ, "declarators": decls})
        elif not self.at(";"):
            init = self.expr()
        self.expect(";")
        cond = None if self.at(";") else self.expr()
        self.expect(";")
        step = None if self.at(")") else self.comma_expr()
        self.expect(")")
        body = self.statement()
        return self.mk("for", start, {"init": init, "cond": cond, "step": step, "body": body})

    # -- expressions --------------------------------------------------
    def expr(self) -> Node:
        return self.assign_expr()

    def comma_expr(self) -> Node:
        start = self.p
        first = self.assign_expr()
        if not self.at(","):
            return first
        items = [first]
        while self.at(","):
            self.advance()
            items.append(self.assign_expr())
        return self.mk("comma", start, {"items": items})

    def assign_expr(self) -> Node:
        start = self.p
        lhs = self.ternary()
        if self.at(*ASSIGN_OPS):
            op = self.text()
            self.advance()
            rhs = self.assign_expr()
            return self.mk("assign", start, {"lhs": lhs, "rhs": rhs}, op)
        return lhs

    def ternary(self) -> Node:
        start = self.p
        cond = self.binary(0)
        if self.at("?"):
            self.advance()
            a = self.expr()
            self.expect(":")
            b = self.ternary()
            return self.mk("ternary", start, {"cond": cond, "then": a, "else": b})
        return cond

    def binary(self, min_prec: int) -> Node:
        start = self.p
        lhs = self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "punctuator":
                return lhs
            prec = BINARY_PREC.get(tok.text)
            if prec is None or prec < min_prec:
                return lhs
            self.advance()
            rhs = self.binary(prec + 1)
            lhs = self.mk("binary", start, {"lhs": lhs, "rhs": rhs}, tok.text)

    def unary(self) -> Node:
        start = self.p
        if self.at(*PREFIX_OPS):
            op = self.text()
            self.advance()
            operand = self.unary()
            return self.mk("unary", start, {"operand": operand}, op)
        if self.at("sizeof"):
            self.advance()
            if self.at("(") and self.starts_type(1):
                self.advance()
                typ = self.type_spec()
                while self.at("*"):
                    self.advance()
                self.expect(")")
                return self.mk("sizeof", start, {"type": typ})
            operand = self.unary()
            return self.mk("sizeof", start, {"operand": operand})
        if self.at("(") and self.starts_type(1):
            self.advance()
            typ = self.type_spec()
            while self.at("*"):
                self.advance()
            self.expect(")")
            operand = self.unary()
            return self.mk("cast", start, {"type": typ, "operand": operand})
        return self.postfix()

    def args(self, closer: str) -> list[Node]:
        items = []
        if self.at(closer):
            return items
        while True:
            if self.pattern and self.mv_kind(self.peek()) == "expression list" and self.text(1) in (",", closer):
                items.append(self.mv_node())
            else:
                items.append(self.assign_expr())
            if not self.at(","):
                return items
            self.advance()

    def postfix(self) -> Node:
        start = self.p
        node = self.primary()
        while True:
            if self.at("["):
                self.advance()
                idx = [self.assign_expr()]
                while self.at(","):
                    self.need_ext("multi-index subscript")
                    self.advance()
                    idx.append(self.assign_expr())
                self.expect("]")
                if len(idx) == 1:
                    node = self.mk("subscript", start, {"base": node, "index": idx[0]})
                else:
                    node = self.mk("commasub", start, {"base": node, "indices": idx})
            elif self.at("("):
                save = self.p
                self.advance()
                try:
                    args = self.args(")")
                    self.expect(")")
                except CSyntaxError:
                    if self.dialect != "c-ext" or node.kind not in ("ident", "mv"):
                        raise
                    node = self.block_call(start, node, save)
                    continue
                node = self.mk("call", start, {"callee": node, "args": args})
            elif self.at("<<<"):
                self.need_ext("triple-chevron launch")
                self.advance()
                config = self.args(">>>")
                self.expect(">>>")
                if not self.pattern and len(config) != 4:
                    self.error("kernel launch needs exactly 4 configuration expressions")
                self.expect("(")
                args = self.args(")")
                self.expect(")")
                node = self.mk("chevron", start, {"callee": node, "config": config, "args": args})
            elif self.at(".", "->"):
                op = self.text()
                self.advance()
                member = self.ident_or_mv()
                node = self.mk("member", start, {"base": node, "member": member}, op)
            elif self.at("++", "--"):
                op = self.text()
                self.advance()
                node = self.mk("postfix", start, {"operand": node}, op)
            else:
                return node

    def block_call(self, start: int, callee: Node, save: int) -> Node:
        """``NAME(params) { ... }``: macro-wrapped lambdas such as KOKKOS_LAMBDA."""
        self.p = save
        self.expect("(")
        params = self.params()
        self.expect(")")
        body = self.compound()
        return self.mk("blockcall", start, {"callee": callee, "params": params, "body": body})

    def primary(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.error("expected expression")
        start = self.p
        if self.pattern:
            if self.at("..."):
                return self.dots()
            if self.at("\\("):
                return self.maybe_pos(self.group(self.expr))
            if self.mv_kind(tok):
                return self.maybe_pos(self.mv_node())
        if tok.kind == "identifier":
            self.advance()
            return self.maybe_pos(self.mk("ident", start))
        if tok.kind == "literal":
            self.advance()
            # adjacent string literals concatenate
            while self.peek() is not None and self.peek().kind == "literal" and self.peek().text.endswith('"') \
                    and tok.text.endswith('"'):
                self.advance()
            return self.mk("literal", start)
        if self.at("("):
            self.advance()
            inner = self.comma_expr()
            self.expect(")")
            return self.mk("paren", start, {"inner": inner})
        self.error("expected expression")


def parse(tokens, dialect: str = "c-ext", path: str = "") -> SyntaxTree:
    """Parse a token list (or raw source) into a :class:`SyntaxTree`."""
    if isinstance(tokens, (str, bytes, bytearray)):
        tokens = lex(tokens)
    parser = Parser(tokens, dialect)
    root = parser.translation_unit()
    return SyntaxTree(join(tokens), tokens, root, dialect, path)


def parse_source(source, dialect: str = "c-ext", path: str = "") -> SyntaxTree:
    return parse(lex(decode(source)), dialect, path)


def parse_fragment(source, kind: str = "expression", dialect: str = "c-ext") -> SyntaxTree:
    """Parse a lone expression or statement; the tree root is that node."""
    tokens = lex(decode(source))
    parser = Parser(tokens, dialect)
    if kind == "expression":
        node = parser.initializer() if parser.at("{") else parser.expr()
    elif kind == "statement":
        node = parser.statement()
    else:
        raise ValueError(f"unknown fragment kind {kind!r}")
    if parser.peek() is not None:
        parser.error("unexpected trailing tokens")
    return SyntaxTree(join(tokens), tokens, node, dialect)


def unparse(tree: SyntaxTree) -> bytes:
    return encode(join(tree.tokens))
