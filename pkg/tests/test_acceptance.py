"""Acceptance criteria 1-10, one check each.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""
import itertools
import shutil
import subprocess
import sys
import tempfile
import time
from collections import Counter
from pathlib import Path

from hypothesis import given, settings, strategies as st

from smplite import (
    CSyntaxError, emit_diff, match_pattern, parse_smpl, parse_source, reapply_diff, unparse,
)
from smplite.lexer import lex
from smplite.rule_catalog import get_fixture, load_fixtures, run_fixture

# pinned tolerances
RUNTIME_BUDGET_S = 5.0
MIN_CASES, MIN_PER_FAMILY, USE_CASES = 33, 3, 11
DOTS_ALPHABET, DOTS_MAX_LEN = "abcde", 6
PROPERTY_EXAMPLES = 300
IDEMPOTENT = ("fx_mdspan", "fx_cuda2hip", "fx_acc2omp", "fx_librsb")

FIXTURES = load_fixtures()


def use_case(family):
    # the two unroll-removal variants are one use case
    return "fx_unroll" if family.startswith("fx_unroll") else family


def output_bytes(result):
    return result.output.encode("latin-1")


# -- 1 ------------------------------------------------------------------------------

def check_1():
    per = Counter(use_case(f.family) for f in FIXTURES)
    bad = []
    t0 = time.perf_counter()
    for fx in FIXTURES:
        if output_bytes(run_fixture(fx)) != fx.read_expected():
            bad.append(fx.id)
    elapsed = time.perf_counter() - t0
    ok = (not bad and len(per) == USE_CASES and len(FIXTURES) >= MIN_CASES
          and min(per.values()) >= MIN_PER_FAMILY and elapsed < RUNTIME_BUDGET_S)
    detail = (f"{len(FIXTURES) - len(bad)}/{len(FIXTURES)} cases byte-exact, {len(per)} families, "
              f"min {min(per.values())} cases/family, {elapsed:.2f}s (< {RUNTIME_BUDGET_S}s)")
    if bad:
        detail += f"; mismatches: {', '.join(bad)}"
    return ok, detail


# -- 2 ------------------------------------------------------------------------------

def check_2():
    bad = []
    n = 0
    for fx in FIXTURES:
        for data in (fx.read_input(), fx.read_expected()):
            n += 1
            if unparse(parse_source(data, fx.dialect)) != data:
                bad.append(fx.id)
    return not bad, f"{n - len(bad)}/{n} files round-trip byte-identically" + (
        f"; failures: {bad}" if bad else "")


# -- 3 ------------------------------------------------------------------------------

def check_3():
    bad = []
    with_patch = shutil.which("patch") is not None
    for fx in FIXTURES:
        old = fx.read_input()
        new = output_bytes(run_fixture(fx))
        diff = emit_diff(old, new, "input.c")
        if reapply_diff(old, diff) != new:
            bad.append(f"{fx.id} (reapplier)")
        if with_patch and diff:
            with tempfile.TemporaryDirectory() as d:
                target = Path(d) / "input.c"
                target.write_bytes(old)
                proc = subprocess.run(["patch", "-s", "-p1", "-d", d], input=diff.encode("latin-1"),
                                      capture_output=True)
                if proc.returncode != 0 or target.read_bytes() != new:
                    bad.append(f"{fx.id} (patch)")
    tools = "in-repo reapplier" + (" and patch(1)" if with_patch else "")
    return not bad, f"{len(FIXTURES)} diffs reproduce the output via {tools}" + (
        f"; failures: {bad}" if bad else "")


# -- 4 ------------------------------------------------------------------------------

def check_4():
    true_fx = get_fixture("fx_unroll_p1r1")
    res = run_fixture(true_fx)
    out = res.output
    collapsed = (res.counts["r1"] == 1 and "#pragma omp unroll partial (4)" in out
                 and output_bytes(res) == true_fx.read_expected())
    tree = parse_source(out, "c")
    loops = [n for n in tree.root.walk() if n.kind == "for"]
    body = loops[0].fields["body"] if loops else None
    one_stmt = body is not None and body.kind == "compound" and len(body.fields["items"]) == 1
    false_fx = get_fixture("fx_unroll_p1r1/false_unroll")
    res2 = run_fixture(false_fx)
    restored = res2.counts["p1"] == 1 and res2.counts["r1"] == 0 and \
        output_bytes(res2) == false_fx.read_input()
    ok = collapsed and one_stmt and restored
    return ok, (f"true unroll: r1={res.counts['r1']}, single-statement body={one_stmt}; "
                f"false unroll: r1={res2.counts['r1']}, undo={res2.counts['undo']}, "
                f"byte-identical={restored}")


# -- 5 ------------------------------------------------------------------------------

def check_5():
    rows = []
    for case in ("fx_rawloop", "fx_rawloop/reversed_comparison", "fx_rawloop/no_break"):
        res = run_fixture(get_fixture(case))
        rows.append((case, res.flags["rl"], res.flags["ah"], res.counts["ah"]))
    ok = all(rl == ah and (n > 0) == rl for _, rl, ah, n in rows)
    ok = ok and {rl for _, rl, _, _ in rows} == {True, False}
    return ok, "; ".join(f"{c}: rl={rl} ah={ah}" for c, rl, ah, _ in rows)


# -- 6 ------------------------------------------------------------------------------

def dots_oracle(seq):
    """Enumerate every (i<j) anchor pair, then pick leftmost, shortest, non-overlapping."""
    pairs = sorted((i, j) for i in range(len(seq)) for j in range(i + 1, len(seq))
                   if seq[i] == "a" and seq[j] == "b")
    chosen, cursor = [], 0
    for i, j in pairs:
        if i >= cursor:
            chosen.append((i, j))
            cursor = j + 1
    return chosen


def check_6():
    seqs = [s for n in range(DOTS_MAX_LEN + 1)
            for s in itertools.product(DOTS_ALPHABET, repeat=n)]
    parts, first_line, line = [], [], 1
    for k, s in enumerate(seqs):
        parts.append(f"void f{k}(void)\n{{\n" + "".join(f"    {c}();\n" for c in s) + "}\n")
        first_line.append(line + 2)          # line of statement 0
        line += len(s) + 3
    tree = parse_source("".join(parts), "c")
    expected = {(k, i, j) for k, s in enumerate(seqs) for i, j in dots_oracle(s)}
    agree = True
    counts = []
    for pattern in ("@r@\n@@\na();\n...\nb();\n", "@r@\n@@\n- a();\n...\nb();\n"):
        got = set()
        for m in match_pattern(parse_smpl(pattern)["r"], tree):
            a = tree.index.line_of(m.span[0])
            b = tree.index.line_of(m.span[1] - 1)
            k = _function_of(first_line, a)
            got.add((k, a - first_line[k], b - first_line[k]))
        agree = agree and got == expected
        counts.append(len(got))
    return agree, (f"{len(seqs)} sequences (len <= {DOTS_MAX_LEN}, |alphabet| = {len(DOTS_ALPHABET)}), "
                   f"{len(expected)} oracle sites; context/minus rules found {counts[0]}/{counts[1]}, "
                   f"agreement {'100%' if agree else '< 100%'}")


def _function_of(first_line, line):
    import bisect
    return bisect.bisect_right(first_line, line) - 1


# -- 7 ------------------------------------------------------------------------------

LEAVES = st.sampled_from(["a", "b", "x", "n", "1", "2"])
EXPRS = st.recursive(
    LEAVES,
    lambda sub: st.one_of(
        st.tuples(sub, st.sampled_from(["+", "-", "*", "<"]), sub).map(lambda t: f"{t[0]} {t[1]} {t[2]}"),
        sub.map(lambda e: f"({e})"),
        st.tuples(st.sampled_from(["f", "g"]), sub).map(lambda t: f"{t[0]}({t[1]})"),
        st.tuples(sub, sub).map(lambda t: f"{t[0]}[{t[1]}]"),
    ),
    max_leaves=8,
)
EXPR_RULE = parse_smpl("@r@\nexpression E;\n@@\nh(E, E)\n")["r"]
STMT_RULE = parse_smpl("@r@\nstatement S;\n@@\nS\nS\n")["r"]


def norm(text):
    return tuple(t.text for t in lex(text) if not t.trivia)


def mutate(text, pick):
    toks = lex(text)
    leaves = [i for i, t in enumerate(toks) if t.kind in ("identifier", "literal")
              and t.text not in ("f", "g")]
    i = leaves[pick % len(leaves)]
    other = "zz" if toks[i].kind == "identifier" else "99"
    return "".join(other if k == i else t.text for k, t in enumerate(toks))


def expr_matches(e1, e2):
    tree = parse_source(f"int v = h({e1}, {e2});\n", "c")
    return match_pattern(EXPR_RULE, tree)


def stmt_matches(e1, e2):
    tree = parse_source(f"void t(void) {{\n    v = {e1};\n    v = {e2};\n}}\n", "c")
    return match_pattern(STMT_RULE, tree)


@settings(max_examples=PROPERTY_EXAMPLES, derandomize=True, deadline=None)
@given(EXPRS, EXPRS, st.booleans())
def _property_equal_or_not(e1, e2, respace):
    if respace:
        e2 = e1.replace(" ", "")
    same = norm(e1) == norm(e2)
    ms = expr_matches(e1, e2)
    assert bool(ms) == same, (e1, e2)
    if ms:
        assert norm(ms[0].env.text("r", "E")) == norm(e1)
    assert bool(stmt_matches(e1, e2)) == same, (e1, e2)


@settings(max_examples=PROPERTY_EXAMPLES, derandomize=True, deadline=None)
@given(EXPRS, st.integers(0, 50))
def _property_mutant_never_matches(e, pick):
    m = mutate(e, pick)
    assert expr_matches(e, m) == [], (e, m)
    assert stmt_matches(e, m) == [], (e, m)
    assert len(expr_matches(e, e)) == 1


def check_7():
    try:
        _property_equal_or_not()
        _property_mutant_never_matches()
    except AssertionError as exc:
        return False, f"counterexample: {exc}"
    return True, (f"{PROPERTY_EXAMPLES} random pairs and {PROPERTY_EXAMPLES} mutants "
                  "(expression and statement repetition), 0 violations")


# -- 8 ------------------------------------------------------------------------------

def check_8():
    fx = get_fixture("fx_variant/name_collision")
    src = fx.read_input().decode("latin-1")
    res = run_fixture(fx)
    before = parse_source(src, "c").identifiers()
    after = parse_source(res.output, "c")
    defined = [after.node_text(n.fields["name"]) for n in after.root.fields["items"]
               if n.kind == "funcdef"]
    new = [d for d in defined if d not in before]
    ok = ("avx512_dot_kernel" in before and "avx512_dot_kernel_1" in new
          and len(defined) == len(set(defined)))
    return ok, f"existing avx512_dot_kernel kept; clones defined: {', '.join(new)}; output re-parses"


# -- 9 ------------------------------------------------------------------------------

def check_9():
    problems, checked = [], 0
    for fx in FIXTURES:
        if fx.family not in IDEMPOTENT:
            continue
        checked += 1
        once = fx.read_expected()
        again = run_fixture(fx, once)
        if output_bytes(again) != once:
            problems.append(fx.id)
    likwid = get_fixture("fx_likwid")
    twice = output_bytes(run_fixture(likwid, likwid.read_expected()))
    documented = (likwid.directory / "expected_twice.c").read_bytes()
    likwid_ok = twice == documented and twice != likwid.read_expected()
    variant = get_fixture("fx_variant")
    variant_ok = output_bytes(run_fixture(variant, variant.read_expected())) != variant.read_expected()
    ok = not problems and likwid_ok and variant_ok
    return ok, (f"{checked - len(problems)}/{checked} cases of {', '.join(IDEMPOTENT)} are no-ops "
                f"on a second run; fx_likwid second run equals expected_twice.c: {likwid_ok}; "
                f"fx_variant changes again: {variant_ok}")


# -- 10 -----------------------------------------------------------------------------

def check_10():
    errors = []
    for fx in FIXTURES:
        out = run_fixture(fx).output
        try:
            parse_source(out, fx.dialect)
        except CSyntaxError as exc:
            errors.append(f"{fx.id}: {exc}")
    return not errors, f"{len(FIXTURES) - len(errors)}/{len(FIXTURES)} outputs re-parse" + (
        f"; {errors}" if errors else "")


CRITERIA = {
    1: ("catalog goldens", check_1),
    2: ("round-trip", check_2),
    3: ("diff fidelity", check_3),
    4: ("scheduling semantics", check_4),
    5: ("dependency gating", check_5),
    6: ("dots oracle", check_6),
    7: ("binding consistency", check_7),
    8: ("fresh-identifier uniqueness", check_8),
    9: ("idempotence matrix", check_9),
    10: ("post-transform validity", check_10),
}


def line(n, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2} {CRITERIA[n][0]}: {detail}"


def _run(n, acceptance_log):
    ok, detail = CRITERIA[n][1]()
    text = line(n, ok, detail)
    acceptance_log.append((n, text))
    print(text)
    assert ok, text


def test_criterion_01_catalog_goldens(acceptance_log):
    _run(1, acceptance_log)


def test_criterion_02_round_trip(acceptance_log):
    _run(2, acceptance_log)


def test_criterion_03_diff_fidelity(acceptance_log):
    _run(3, acceptance_log)


def test_criterion_04_scheduling(acceptance_log):
    _run(4, acceptance_log)


def test_criterion_05_dependency_gating(acceptance_log):
    _run(5, acceptance_log)


def test_criterion_06_dots_oracle(acceptance_log):
    _run(6, acceptance_log)


def test_criterion_07_binding_consistency(acceptance_log):
    _run(7, acceptance_log)


def test_criterion_08_fresh_identifiers(acceptance_log):
    _run(8, acceptance_log)


def test_criterion_09_idempotence(acceptance_log):
    _run(9, acceptance_log)


def test_criterion_10_outputs_reparse(acceptance_log):
    _run(10, acceptance_log)


if __name__ == "__main__":
    failed = 0
    for n, (_, check) in CRITERIA.items():
        ok, detail = check()
        failed += not ok
        print(line(n, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
