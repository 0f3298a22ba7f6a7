"""Command-line driver: ``smplite --sp-file rule.cocci [options] targets...``"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .cparser import CSyntaxError
from .engine import TransformError, transform_source
from .smpl import RuleSet, SmplSyntaxError, parse_smpl, validate
from .transform import emit_diff

EXTENSIONS = (".c", ".h", ".cu", ".cpp")


@dataclass(frozen=True)
class RunConfig:
    sp_file: Path
    targets: tuple
    mode: str = "diff"  # diff | in-place | dry-run
    dialect: str | None = None
    jobs: int = 1
    fail_on_parse_error: bool = False


@dataclass
class FileReport:
    path: str
    diff: str = ""
    counts: dict | None = None
    warnings: tuple = ()
    error: str | None = None
    written: bool = False


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="smplite", description="Apply a semantic patch to C sources.")
    p.add_argument("--sp-file", required=True, type=Path, help="semantic patch file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--in-place", action="store_true", help="rewrite changed files")
    mode.add_argument("--dry-run", action="store_true", help="print match counts only")
    p.add_argument("--dialect", choices=("c", "c-ext"), help="override the dialect")
    p.add_argument("--jobs", type=int, default=1, help="files processed in parallel")
    p.add_argument("--fail-on-parse-error", action="store_true",
                   help="treat unparsable files found in directories as errors")
    p.add_argument("targets", nargs="+", type=Path)
    return p


def collect(targets) -> tuple[list[Path], list[Path]]:
    """Expand targets into (explicit files, files found by walking directories)."""
    explicit, walked = [], []
    for t in targets:
        if t.is_dir():
            for root, dirs, files in os.walk(t):
                dirs.sort()
                for f in sorted(files):
                    if f.endswith(EXTENSIONS):
                        walked.append(Path(root) / f)
        elif t.is_file():
            explicit.append(t)
        else:
            raise UsageError(f"cannot read target {t}")
    return explicit, walked


def process(rule_set: RuleSet, path: Path, mode: str, dialect: str | None) -> FileReport:
    report = FileReport(str(path))
    try:
        data = path.read_bytes()
    except OSError as exc:
        report.error = f"cannot read: {exc.strerror}"
        return report
    try:
        result = transform_source(rule_set, data, dialect, path=str(path))
    except (CSyntaxError, TransformError) as exc:
        report.error = str(exc)
        return report
    report.counts = dict(result.counts)
    report.warnings = tuple(result.warnings)
    new = result.output.encode("latin-1")
    if new != data:
        report.diff = emit_diff(data, new, str(path))
        if mode == "in-place":
            path.write_bytes(new)
            report.written = True
    return report


def _process_args(args):
    return process(*args)


def run(config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        rule_set = parse_smpl(config.sp_file.read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"smplite: cannot read {config.sp_file}: {exc.strerror}", file=err)
        return 1
    except SmplSyntaxError as exc:
        print(f"smplite: {config.sp_file}: {exc}", file=err)
        return 1
    problems = validate(rule_set)
    if problems:
        for msg in problems:
            print(f"smplite: {config.sp_file}: {msg}", file=err)
        return 1
    try:
        explicit, walked = collect(config.targets)
    except UsageError as exc:
        print(f"smplite: {exc}", file=err)
        return 1

    paths = sorted(set(explicit) | set(walked))
    strict = set(explicit)
    work = [(rule_set, p, config.mode, config.dialect) for p in paths]
    if config.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(_process_args, work))
    else:
        reports = [process(*w) for w in work]

    status = 0
    for path, rep in zip(paths, reports):
        for w in rep.warnings:
            # engine warnings already carry the path
            print(f"warning: {w}", file=err)
        if rep.error is not None:
            fatal = path in strict or config.fail_on_parse_error
            label = "error" if fatal else "skipped"
            print(f"{rep.path}: {label}: {rep.error}", file=err)
            if fatal:
                status = 1
            continue
        if config.mode == "dry-run":
            counts = " ".join(f"{k}={v}" for k, v in rep.counts.items())
            print(f"{rep.path}: {counts}", file=out)
        elif config.mode == "diff":
            out.write(rep.diff)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if ns.jobs < 1:
        print("smplite: --jobs must be at least 1", file=sys.stderr)
        return 1
    mode = "in-place" if ns.in_place else "dry-run" if ns.dry_run else "diff"
    config = RunConfig(ns.sp_file, tuple(ns.targets), mode, ns.dialect,
                       ns.jobs, ns.fail_on_parse_error)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
