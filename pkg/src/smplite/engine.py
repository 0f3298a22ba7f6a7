"""Rule scheduling, pattern matching and binding environments."""
from __future__ import annotations

import itertools
import re
from collections.abc import Mapping
from dataclasses import dataclass, field

from . import cparser, transform
from .cparser import EXPR_KINDS, STMT_KINDS, SyntaxTree
from .lexer import KEYWORDS, SourcePosition, lex
from .smpl import LIST_KINDS, PatternRule, RuleSet, ScriptRule

_IDENT = re.compile(r"[A-Za-z_]\w*\Z")


class ScriptTableMiss(Exception):
    """A script looked up a key that its table does not contain."""


class InvalidIdentifier(Exception):
    """A script produced text that is not valid for the requested kind."""


class TransformError(Exception):
    """A rule produced output that no longer parses."""


@dataclass(frozen=True)
class BoundValue:
    kind: str
    text: str
    norm: tuple
    start: int = -1
    end: int = -1
    inner: str | None = None          # statement lists: raw text between the braces
    position: SourcePosition | None = None

    def same(self, other: "BoundValue") -> bool:
        if self.position is not None or other.position is not None:
            return (self.position is not None and other.position is not None
                    and self.position.offset == other.position.offset)
        return self.norm == other.norm

    @property
    def identity(self):
        return ("@", self.position.offset) if self.position is not None else self.norm

    def __str__(self):
        return self.text


def text_value(kind: str, text: str) -> BoundValue:
    return BoundValue(kind, text, tuple(t.text for t in lex(text) if not t.trivia))


class BindingEnv(Mapping):
    """Immutable map from ``(rule, metavariable)`` to :class:`BoundValue`."""

    __slots__ = ("_d",)

    def __init__(self, entries=()):
        self._d = dict(entries)

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __repr__(self):
        inner = ", ".join(f"{r}.{n}={v.text!r}" for (r, n), v in self._d.items())
        return f"BindingEnv({inner})"

    def lookup(self, rule: str, name: str) -> BoundValue | None:
        return self._d.get((rule, name))

    def text(self, rule: str, name: str) -> str | None:
        v = self._d.get((rule, name))
        return None if v is None else v.text

    def bind(self, key, value) -> "BindingEnv":
        d = dict(self._d)
        d[key] = value
        return BindingEnv(d)

    def merge(self, other: "BindingEnv") -> "BindingEnv | None":
        """Union of two environments, or None if they disagree on a key."""
        d = dict(self._d)
        for k, v in other._d.items():
            old = d.get(k)
            if old is None:
                d[k] = v
            elif not old.same(v):
                return None
        return BindingEnv(d)

    def signature(self):
        return tuple(sorted((k, v.identity) for k, v in self._d.items()))

    def remap(self, offset_map, tree: SyntaxTree) -> "BindingEnv":
        d = {}
        for k, v in self._d.items():
            if v.position is not None:
                new = offset_map(v.position.offset)
                pos = tree.index.position(new, v.position.path)
                v = BoundValue(v.kind, v.text, v.norm, new, new, position=pos)
            d[k] = v
        return BindingEnv(d)


@dataclass
class MatchResult:
    rule: str
    span: tuple[int, int]                 # byte offsets of the matched site
    env: BindingEnv
    edits: list = field(default_factory=list)   # transform.Edit intents
    corr: tuple = ()
    chosen: frozenset = frozenset()
    extras: tuple = ()

    @property
    def position(self):
        return self.span[0]


@dataclass
class RunResult:
    matches: list
    flags: dict
    output: str
    warnings: list
    counts: dict
    envs: dict
    stages: list = field(default_factory=list)     # (rule, EditScript)
    tree: SyntaxTree | None = None

    def __iter__(self):
        yield self.matches
        yield self.flags

    @property
    def changed(self) -> bool:
        return any(script.edits for _, script in self.stages)


# -- matching -----------------------------------------------------------------

class _State:
    __slots__ = ("env", "corr", "chosen", "extras")

    def __init__(self, env, corr=None, chosen=None, extras=None):
        self.env = env          # dict key -> BoundValue
        self.corr = corr        # cons list of ((pa, pb), (sa, sb))
        self.chosen = chosen    # cons list of (gid, branch)
        self.extras = extras    # cons list of (branch range, corr tuple)

    def add(self, prange, srange):
        return _State(self.env, ((prange, srange), self.corr), self.chosen, self.extras)

    def bind(self, key, value):
        env = dict(self.env)
        env[key] = value
        return _State(env, self.corr, self.chosen, self.extras)

    def choose(self, gid, branch):
        return _State(self.env, self.corr, ((gid, branch), self.chosen), self.extras)

    def extra(self, item):
        return _State(self.env, self.corr, self.chosen, (item, self.extras))


def _unroll(cons):
    out = []
    while cons is not None:
        out.append(cons[0])
        cons = cons[1]
    out.reverse()
    return out


def _words(text: str):
    """Words of a directive line with their offsets; continuations are blanks."""
    flat = re.sub(r"\\\r?\n", lambda m: " " * len(m.group()), text)
    m = re.match(r"#\s*\w*", flat)
    head = "#" + re.sub(r"[#\s]", "", m.group()) if m else ""
    rest = [(w.group(), w.start()) for w in re.finditer(r"\S+", flat[m.end() if m else 0:])]
    base = m.end() if m else 0
    return head, [(w, base + off) for w, off in rest]


def _is_expr_pattern(p) -> bool:
    if p.kind in EXPR_KINDS:
        return True
    if p.kind == "mv":
        return p.mvkind in ("expression", "identifier", "constant")
    if p.kind in ("disj", "conj"):
        return all(_is_expr_pattern(b) for b in p.fields["branches"])
    return False


class Matcher:
    def __init__(self, rule: PatternRule, compiled, tree: SyntaxTree):
        self.rule = rule
        self.cp = compiled
        self.ptoks = compiled.tokens
        self.tree = tree
        self.stoks = tree.tokens
        self.text = tree.text
        self.decls = {d.name: d for d in rule.metavars}

    # values
    def node_value(self, kind, s) -> BoundValue:
        a, b = self.tree.span(s)
        return BoundValue(kind, self.text[a:b], self.tree.norm(s.first, s.last), a, b)

    def list_value(self, kind, items, owner) -> BoundValue:
        if not items:
            inner = None
            if owner is not None and owner.kind == "compound" and not owner.fields["items"]:
                inner = self.text[self.stoks[owner.first].end:self.stoks[owner.last - 1].start]
            return BoundValue(kind, "", (), inner=inner)
        a = self.stoks[items[0].first].start
        b = self.stoks[items[-1].last - 1].end
        inner = None
        if owner is not None and owner.kind == "compound":
            if items[0] is owner.fields["items"][0] and items[-1] is owner.fields["items"][-1]:
                inner = self.text[self.stoks[owner.first].end:self.stoks[owner.last - 1].start]
        return BoundValue(kind, self.text[a:b], self.tree.norm(items[0].first, items[-1].last), a, b, inner)

    def position_value(self, s) -> BoundValue:
        off = self.stoks[s.first].start
        pos = self.tree.index.position(off, self.tree.path)
        return BoundValue("position", "", (off,), off, off, position=pos)

    def check_bind(self, st, key, value):
        old = st.env.get(key)
        if old is not None:
            return st if old.same(value) else None
        return st.bind(key, value)

    # nodes
    def node(self, p, s, st):
        if p is None:
            if s is None:
                yield st
            return
        if p.kind == "dots":
            yield st if s is None else st.add((p.tok, p.tok + 1), (s.first, s.last))
            return
        if s is None:
            return
        for out in self._node(p, s, st):
            if p.pos is not None:
                out = self.check_bind(out, p.pos, self.position_value(s))
                if out is None:
                    continue
            yield out

    def _node(self, p, s, st):
        k = p.kind
        if k == "disj":
            for b, br in enumerate(p.fields["branches"]):
                gen = self.node(br, s, st.choose(p.gid, b))
                first = next(gen, None)
                if first is not None:
                    yield first
                    yield from gen
                    return
            return
        if k == "conj":
            yield from self.conj(p, s, st, 0)
            return
        if k == "mv":
            yield from self.metavar(p, s, st)
            return
        if k != s.kind or p.op != s.op:
            return
        st = st.add((p.first, p.last), (s.first, s.last))
        if k in ("pragma", "directive"):
            yield from self.pragma(p, s, st)
            return
        if k == "include":
            if "".join(self.ptoks[p.first].text.split()) == "".join(self.stoks[s.first].text.split()):
                yield st
            return
        ptexts = [self.ptoks[i].text for i in p.own]
        stexts = [self.stoks[i].text for i in s.own]
        if ptexts == stexts:
            pairs = zip(p.own, s.own)
        else:
            pown = [i for i in p.own if self.ptoks[i].text != ","]
            sown = [i for i in s.own if self.stoks[i].text != ","]
            if [self.ptoks[i].text for i in pown] != [self.stoks[i].text for i in sown]:
                return
            pairs = zip(pown, sown)
        for i, j in pairs:
            st = st.add((i, i + 1), (j, j + 1))
        keys = list(p.fields)
        if k == "funcdef" and not p.fields["attrs"]:
            keys.remove("attrs")
        if set(keys) != set(s.fields) - ({"attrs"} if "attrs" not in keys else set()):
            return
        yield from self.fields(p, s, keys, 0, st)

    def fields(self, p, s, keys, i, st):
        if i == len(keys):
            yield st
            return
        pv, sv = p.fields[keys[i]], s.fields[keys[i]]
        if isinstance(pv, list):
            if not isinstance(sv, list):
                return
            for st2, _ in self.seq(pv, sv, 0, 0, st, True, s):
                yield from self.fields(p, s, keys, i + 1, st2)
        else:
            if isinstance(sv, list):
                return
            for st2 in self.node(pv, sv, st):
                yield from self.fields(p, s, keys, i + 1, st2)

    def metavar(self, p, s, st):
        kind = p.mvkind
        ok = {
            "identifier": s.kind == "ident",
            "type": s.kind == "type",
            "expression": s.kind in EXPR_KINDS,
            "constant": s.kind == "literal",
            "statement": s.kind in STMT_KINDS,
        }.get(kind)
        if kind in LIST_KINDS:
            # a list metavariable standing where a single node is expected
            value = self.list_value(kind, [s], None)
        elif not ok:
            return
        else:
            value = self.node_value(kind, s)
        decl = self.decls.get(p.name)
        if decl is not None:
            if decl.regex is not None and not re.search(decl.regex, value.text):
                return
            if decl.values is not None and value.text not in decl.values:
                return
        st = self.check_bind(st, p.key, value)
        if st is None:
            return
        yield st.add((p.tok, p.tok + 1), (s.first, s.last)).add((p.first, p.last), (s.first, s.last))

    def conj(self, p, s, st, bi):
        branches = p.fields["branches"]
        if bi == len(branches):
            yield st
            return
        br = branches[bi]
        st = st.choose(p.gid, bi)
        if s.kind in STMT_KINDS and _is_expr_pattern(br):
            gen = self.contain(br, s, st)
        else:
            gen = self.node(br, s, st)
        for st2 in gen:
            yield from self.conj(p, s, st2, bi + 1)

    def contain(self, br, s, st):
        """Bind at the first preorder occurrence; remember the others for rewriting."""
        first = None
        stack = list(reversed(list(s.children())))
        while stack:
            d = stack.pop()
            if d.kind in EXPR_KINDS:
                if first is None:
                    first = next(self.node(br, d, st), None)
                    if first is not None:
                        continue
                else:
                    base = _State(first.env, None, first.chosen, None)
                    other = next(self.node(br, d, base), None)
                    if other is not None:
                        first = first.extra(((br.first, br.last), tuple(_unroll(other.corr))))
                        continue
            stack.extend(reversed(list(d.children())))
        if first is not None:
            yield first

    def pragma(self, p, s, st):
        phead, pw = _words(self.ptoks[p.first].text)
        stext = self.stoks[s.first].text
        shead, sw = _words(stext)
        if phead != shead:
            return
        for idx, (w, _) in enumerate(pw):
            last = idx == len(pw) - 1
            entry = self.cp.mvtable.get(w)
            mvk = entry[0] if entry else None
            if w == "..." and last:
                yield st
                return
            if mvk == "pragmainfo" and last:
                rest = stext[sw[idx][1]:].strip() if idx < len(sw) else ""
                value = BoundValue("pragmainfo", rest, tuple(re.sub(r"\\\r?\n", " ", rest).split()))
                st = self.check_bind(st, entry[1], value)
                if st is not None:
                    yield st
                return
            if idx >= len(sw):
                return
            if mvk in ("identifier", "expression", "constant"):
                st = self.check_bind(st, entry[1], text_value(mvk, sw[idx][0]))
                if st is None:
                    return
            elif sw[idx][0] != w:
                return
        if len(sw) == len(pw):
            yield st

    # sequences
    def seq(self, pitems, sitems, pi, si, st, full, owner):
        if pi == len(pitems):
            if not full or si == len(sitems):
                yield st, si
            return
        p = pitems[pi]
        if p.kind == "dots":
            for k in range(si, len(sitems) + 1):
                st2 = st.add((p.tok, p.tok + 1), (sitems[si].first, sitems[k - 1].last)) if k > si else st
                yield from self.seq(pitems, sitems, pi + 1, k, st2, full, owner)
            return
        if p.kind == "mv" and p.mvkind in LIST_KINDS:
            for k in range(si, len(sitems) + 1):
                value = self.list_value(p.mvkind, sitems[si:k], owner)
                st2 = self.check_bind(st, p.key, value)
                if st2 is None:
                    continue
                if k > si:
                    rng = (sitems[si].first, sitems[k - 1].last)
                    st2 = st2.add((p.tok, p.tok + 1), rng).add((p.first, p.last), rng)
                yield from self.seq(pitems, sitems, pi + 1, k, st2, full, owner)
            return
        if si < len(sitems):
            for st2 in self.node(p, sitems[si], st):
                yield from self.seq(pitems, sitems, pi + 1, si + 1, st2, full, owner)

    # search
    def search(self, seed: dict, collect_all: bool):
        """Yield (site token range, state) for every match, leftmost-outermost."""
        root = self.cp.root
        if self.cp.kind == "expr":
            stack = [self.tree.root]
            while stack:
                n = stack.pop()
                if n.kind in EXPR_KINDS:
                    st = next(self.node(root, n, _State(seed)), None)
                    if st is not None:
                        yield (n.first, n.last), st
                        if not collect_all:
                            continue
                stack.extend(reversed(list(n.children())))
            return
        if not root:
            return
        yield from self._scan_node(self.tree.root, root, seed, collect_all)

    def _scan_list(self, items, owner, pitems, seed, collect_all):
        i = 0
        while i < len(items):
            hit = None
            for st, end in self.seq(pitems, items, 0, i, _State(seed), False, owner):
                if end > i:
                    hit = (st, end)
                    break
            if hit is not None:
                st, end = hit
                yield (items[i].first, items[end - 1].last), st
                if collect_all:
                    # context rules also report sites nested inside this one
                    for item in items[i:end]:
                        yield from self._scan_node(item, pitems, seed, collect_all)
                i = end
                continue
            yield from self._scan_node(items[i], pitems, seed, collect_all)
            i += 1

    def _scan_node(self, n, pitems, seed, collect_all):
        for name, val in n.fields.items():
            if isinstance(val, list):
                if n.kind in ("tu", "compound") and name == "items":
                    yield from self._scan_list(val, n, pitems, seed, collect_all)
                else:
                    for c in val:
                        yield from self._scan_node(c, pitems, seed, collect_all)
            elif val is not None:
                if name in ("then", "else", "body") and val.kind != "compound" and val.kind in STMT_KINDS:
                    yield from self._scan_list([val], None, pitems, seed, collect_all)
                else:
                    yield from self._scan_node(val, pitems, seed, collect_all)


def match_pattern(rule: PatternRule, tree: SyntaxTree, seeds=None, *, fresh_taken=None) -> list[MatchResult]:
    """All matches of a pattern rule on ``tree``, one search per seed environment."""
    compiled = rule.compile(tree.dialect)
    matcher = Matcher(rule, compiled, tree)
    collect_all = not rule.modifies
    results, seen = [], set()
    taken = set() if fresh_taken is None else fresh_taken
    for seed in seeds if seeds is not None else [BindingEnv()]:
        for (first, last), st in matcher.search(dict(seed), collect_all):
            corr = tuple(_unroll(st.corr))
            chosen = frozenset(_unroll(st.chosen))
            extras = tuple(_unroll(st.extras))
            env = BindingEnv(st.env)
            key = (first, last, corr, tuple(sorted(chosen)), extras, env.signature())
            if key in seen:
                continue
            seen.add(key)
            span = (tree.tokens[first].start, tree.tokens[last - 1].end)
            results.append(MatchResult(rule.name, span, env, [], corr, chosen, extras))
    results.sort(key=lambda r: r.span[0])
    for r in results:
        for d in rule.metavars:
            if d.fresh is not None:
                name = gen_fresh(d.fresh, r.env, tree, rule=rule, taken=taken)
                taken.add(name)
                r.env = r.env.bind((rule.name, d.name), text_value("identifier", name))
        if rule.modifies:
            r.edits = transform.intents(rule, compiled, r, tree)
    return results


# -- scripts and fresh names -----------------------------------------------------

def _script_value(expr, local: dict, tables: dict) -> str:
    tag = expr[0]
    if tag == "lit":
        return expr[1]
    if tag == "var":
        if expr[1] not in local:
            raise InvalidIdentifier(f"unbound script variable {expr[1]!r}")
        return local[expr[1]]
    if tag == "table":
        table = tables.get(expr[1])
        if table is None:
            raise ScriptTableMiss(f"unknown table {expr[1]!r}")
        key = local.get(expr[2])
        if key not in table:
            raise ScriptTableMiss(f"{expr[1]}[{key!r}] is not defined")
        return table[key]
    return "".join(_script_value(p, local, tables) for p in expr[1])


def _valid_type(text: str) -> bool:
    toks = [t for t in lex(text) if not t.trivia]
    return bool(toks) and all(t.kind in ("identifier", "keyword") or t.text in ("*", "&") for t in toks)


def eval_script(rule: ScriptRule, env: BindingEnv, tables: dict | None = None) -> BindingEnv:
    """Run a per-match script rule and return ``env`` extended with its outputs."""
    tables = tables or {}
    local = {}
    for name, src, mv in rule.inputs:
        value = env.lookup(src, mv)
        if value is None:
            raise InvalidIdentifier(f"{rule.name}: input {src}.{mv} is not bound")
        local[name] = value.text
    for out, ctor, expr in rule.assignments:
        text = _script_value(expr, local, tables)
        if ctor == "ident":
            if not _IDENT.match(text) or text in KEYWORDS:
                raise InvalidIdentifier(f"{rule.name}: {text!r} is not an identifier")
            kind = "identifier"
        elif ctor == "type":
            if not _valid_type(text):
                raise InvalidIdentifier(f"{rule.name}: {text!r} is not a type")
            kind = "type"
        elif ctor == "pragmainfo":
            kind = "pragmainfo"
        else:
            kind = "identifier"     # plain strings are accepted wherever identifiers are
        local[out] = text
        env = env.bind((rule.name, out), text_value(kind, text))
    return env


def gen_fresh(template, env, tree: SyntaxTree | None = None, *, rule=None, taken=()) -> str:
    """Concatenate a fresh-identifier template and make it unique in ``tree``."""
    parts = []
    for tag, val in template:
        if tag == "lit":
            parts.append(val)
            continue
        if isinstance(env, BindingEnv):
            key = rule.key(val) if rule is not None else None
            bound = env.get(key) if key else None
            if bound is None:
                bound = next((v for (r, n), v in env.items() if n == val), None)
            if bound is None:
                raise InvalidIdentifier(f"fresh identifier refers to unbound {val!r}")
            parts.append(bound.text)
        else:
            parts.append(str(env[val]))
    base = "".join(parts)
    used = set(taken)
    if tree is not None:
        used |= tree.identifiers()
    name, n = base, 0
    while name in used:
        n += 1
        name = f"{base}_{n}"
    return name


# -- scheduling ---------------------------------------------------------------------

def _seeds(rule_names, envs):
    seeds = [BindingEnv()]
    for name in rule_names:
        options = envs.get(name) or []
        if not options:
            return []
        merged = []
        for a, b in itertools.product(seeds, options):
            m = a.merge(b)
            if m is not None:
                merged.append(m)
        seeds = merged
    out, seen = [], set()
    for s in seeds:
        sig = s.signature()
        if sig not in seen:
            seen.add(sig)
            out.append(s)
    return out


def _deps_ok(depends, flags) -> bool:
    return all(flags.get(r, False) == want for r, want in depends)


def run_rules(rule_set: RuleSet, tree: SyntaxTree) -> RunResult:
    """Run every rule in file order, applying each pattern rule's edits before the next."""
    tables: dict = {}
    envs: dict = {}
    flags: dict = {}
    counts: dict = {}
    matches: list = []
    warnings: list = []
    stages: list = []
    working = tree
    for rule in rule_set.rules:
        if isinstance(rule, ScriptRule) and rule.kind == "initialize":
            tables.update(rule.tables)
            flags[rule.name] = True
            envs[rule.name] = [BindingEnv()]
            counts[rule.name] = 1
            continue
        envs[rule.name] = []
        flags[rule.name] = False
        counts[rule.name] = 0
        if not _deps_ok(rule.depends, flags):
            continue
        seeds = _seeds(rule.inherited_rules, envs)
        if isinstance(rule, ScriptRule):
            out = []
            for env in seeds:
                try:
                    out.append(eval_script(rule, env, tables))
                except (ScriptTableMiss, InvalidIdentifier) as exc:
                    warnings.append(f"{working.path or '<input>'}: {rule.name}: match dropped: {exc}")
            envs[rule.name] = out
            flags[rule.name] = bool(out)
            counts[rule.name] = len(out)
            continue
        if not seeds:
            continue
        results = match_pattern(rule, working, seeds)
        envs[rule.name] = [r.env for r in results]
        flags[rule.name] = bool(results)
        counts[rule.name] = len(results)
        matches.extend(results)
        if not rule.modifies or not results:
            continue
        script = transform.plan_edits(results, working)
        warnings.extend(f"{working.path or '<input>'}: {w}" for w in script.warnings)
        stages.append((rule.name, script))
        if not script.edits:
            continue
        new_text = transform.apply(script, working.text)
        try:
            new_tree = cparser.parse(new_text, working.dialect, working.path)
        except cparser.CSyntaxError as exc:
            raise TransformError(f"{working.path or '<input>'}: output of rule {rule.name} "
                                 f"does not parse: {exc}") from None
        for name, lst in envs.items():
            envs[name] = [e.remap(script.map_offset, new_tree) for e in lst]
        working = new_tree
    return RunResult(matches, flags, working.text, warnings, counts, envs, stages, working)


def transform_source(rule_set: RuleSet, source, dialect: str | None = None, path: str = "") -> RunResult:
    """Parse ``source`` and run ``rule_set`` on it."""
    if dialect is None:
        dialect = "c-ext" if rule_set.wants_extensions else "c"
    tree = cparser.parse_source(source, dialect, path)
    return run_rules(rule_set, tree)
