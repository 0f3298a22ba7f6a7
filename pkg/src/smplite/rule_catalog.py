"""Shipped rule files and their before/after fixtures.

Each family lives in ``catalog/<id>/`` with ``rule.cocci``, ``input.c``,
``expected.c`` and ``meta``; extra cases sit under ``cases/<name>/`` and
reuse the family rule.  ``meta`` is a ``key = value`` text file::

    dialect = c
    match.p1 = 1
    removed = 4-6
    added = 4

``removed`` and ``added`` list the 1-based line numbers of the input that
disappear and of the output that are new.  They are checked independently
of the engine by :func:`review`.
"""
from __future__ import annotations

import difflib
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .engine import RunResult, transform_source
from .lexer import decode
from .smpl import RuleSet, parse_smpl
from .transform import split_lines

ROOT = Path(__file__).with_name("catalog")


@dataclass(frozen=True)
class Fixture:
    id: str
    family: str
    rule_path: Path
    input_path: Path
    expected_path: Path
    dialect: str
    matches: dict = field(default_factory=dict)
    removed: tuple = ()
    added: tuple = ()
    experimental: bool = False
    note: str = ""

    @property
    def directory(self) -> Path:
        return self.input_path.parent

    def read_input(self) -> bytes:
        return self.input_path.read_bytes()

    def read_expected(self) -> bytes:
        return self.expected_path.read_bytes()

    def rules(self) -> RuleSet:
        return load_rules(self.rule_path)


def parse_lines(spec: str) -> tuple[int, ...]:
    """``"3, 5-7"`` -> ``(3, 5, 6, 7)``"""
    out: list[int] = []
    for part in spec.replace(" ", "").split(","):
        if not part:
            continue
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi or lo) + 1))
    return tuple(out)


def format_lines(lines) -> str:
    lines = sorted(lines)
    parts = []
    i = 0
    while i < len(lines):
        j = i
        while j + 1 < len(lines) and lines[j + 1] == lines[j] + 1:
            j += 1
        parts.append(str(lines[i]) if i == j else f"{lines[i]}-{lines[j]}")
        i = j + 1
    return ", ".join(parts)


def read_meta(path: Path) -> dict[str, str]:
    meta = {}
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}: malformed meta line {raw!r}")
        meta[key.strip()] = value.strip()
    return meta


def write_meta(path: Path, meta: dict[str, str], note: str = "") -> None:
    lines = [f"# {note}"] if note else []
    lines += [f"{k} = {v}" for k, v in meta.items()]
    path.write_text("\n".join(lines) + "\n")


@lru_cache(maxsize=None)
def load_rules(path: Path) -> RuleSet:
    return parse_smpl(Path(path).read_text(encoding="utf-8"))


def _fixture(family: str, directory: Path, rule_path: Path, case: str | None) -> Fixture:
    meta_path = directory / "meta"
    meta = read_meta(meta_path) if meta_path.exists() else {}
    note = ""
    if meta_path.exists():
        first = meta_path.read_text().splitlines()[:1]
        if first and first[0].startswith("#"):
            note = first[0].lstrip("# ").strip()
    matches = {k[6:]: int(v) for k, v in meta.items() if k.startswith("match.")}
    return Fixture(
        id=family if case is None else f"{family}/{case}",
        family=family,
        rule_path=rule_path,
        input_path=directory / "input.c",
        expected_path=directory / "expected.c",
        dialect=meta.get("dialect", "c"),
        matches=matches,
        removed=parse_lines(meta.get("removed", "")),
        added=parse_lines(meta.get("added", "")),
        experimental=meta.get("experimental", "false") == "true",
        note=note,
    )


def families(root: Path = ROOT) -> list[str]:
    return sorted(p.name for p in root.iterdir() if (p / "rule.cocci").is_file())


def load_fixtures(root: Path = ROOT, family: str | None = None) -> list[Fixture]:
    out = []
    for fam in families(root):
        if family is not None and fam != family:
            continue
        base = root / fam
        rule = base / "rule.cocci"
        out.append(_fixture(fam, base, rule, None))
        cases = base / "cases"
        if cases.is_dir():
            for d in sorted(cases.iterdir()):
                if (d / "input.c").is_file():
                    out.append(_fixture(fam, d, rule, d.name))
    return out


def get_fixture(fixture_id: str, root: Path = ROOT) -> Fixture:
    for fx in load_fixtures(root, fixture_id.split("/")[0]):
        if fx.id == fixture_id:
            return fx
    raise KeyError(fixture_id)


def run_fixture(fx: Fixture, source=None) -> RunResult:
    """Run the family rule on the fixture input (or on ``source``)."""
    data = fx.read_input() if source is None else source
    return transform_source(fx.rules(), data, fx.dialect, path=fx.input_path.name)


def changed_lines(old, new) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Line numbers removed from ``old`` and added in ``new``."""
    a = _lines(old)
    b = _lines(new)
    removed, added = [], []
    sm = difflib.SequenceMatcher(None, a, b, autojunk=False)
    for tag, i1, i2, j1, j2 in sm.get_opcodes():
        if tag != "equal":
            removed.extend(range(i1 + 1, i2 + 1))
            added.extend(range(j1 + 1, j2 + 1))
    return tuple(removed), tuple(added)


def _lines(data) -> list:
    return split_lines(decode(data))


def review(fx: Fixture) -> list[str]:
    """Problems found comparing the golden pair against the declared line changes."""
    removed, added = changed_lines(fx.read_input(), fx.read_expected())
    problems = []
    if removed != fx.removed:
        problems.append(f"{fx.id}: removed lines {format_lines(removed)!r}, "
                        f"meta declares {format_lines(fx.removed)!r}")
    if added != fx.added:
        problems.append(f"{fx.id}: added lines {format_lines(added)!r}, "
                        f"meta declares {format_lines(fx.added)!r}")
    return problems
