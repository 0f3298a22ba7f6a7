import shutil
import subprocess
import sys

import pytest

from smplite.cli import RunConfig, build_parser, collect, main, run
from smplite.rule_catalog import ROOT, get_fixture

MDSPAN = ROOT / "fx_mdspan" / "rule.cocci"


@pytest.fixture
def tree(tmp_path):
    fx = get_fixture("fx_mdspan")
    (tmp_path / "src").mkdir()
    (tmp_path / "src" / "a.c").write_bytes(fx.read_input())
    (tmp_path / "src" / "b.cpp").write_bytes(get_fixture("fx_mdspan/diagonal").read_input())
    (tmp_path / "src" / "skip.txt").write_text("a[i][j][k]")
    (tmp_path / "src" / "bad.h").write_text("int f( {\n")
    return tmp_path


def test_diff_on_stdout(tmp_path, capsys):
    fx = get_fixture("fx_mdspan")
    target = tmp_path / "input.c"
    target.write_bytes(fx.read_input())
    assert main(["--sp-file", str(MDSPAN), str(target)]) == 0
    out = capsys.readouterr().out
    assert out.startswith(f"--- a/{target}\n+++ b/{target}\n")
    assert "+                s += a[i, j, k] + b[i][j][k];" in out
    assert target.read_bytes() == fx.read_input()


def test_dry_run_table(tree, capsys):
    assert main(["--sp-file", str(MDSPAN), "--dry-run", str(tree / "src")]) == 0
    out, err = capsys.readouterr()
    assert out.splitlines() == [
        f"{tree}/src/a.c: tomultiindex=3",
        f"{tree}/src/b.cpp: tomultiindex=2",
    ]
    assert "bad.h: skipped" in err


def test_fail_on_parse_error(tree, capsys):
    code = main(["--sp-file", str(MDSPAN), "--fail-on-parse-error", "--dry-run", str(tree / "src")])
    assert code == 1
    assert "bad.h: error" in capsys.readouterr().err


def test_explicit_unparsable_file_is_an_error(tree, capsys):
    assert main(["--sp-file", str(MDSPAN), str(tree / "src" / "bad.h")]) == 1


def test_in_place_twice_is_stable(tree, capsys):
    target = tree / "src" / "a.c"
    assert main(["--sp-file", str(MDSPAN), "--in-place", str(target)]) == 0
    first = target.read_bytes()
    assert first == get_fixture("fx_mdspan").read_expected()
    assert main(["--sp-file", str(MDSPAN), "--in-place", str(target)]) == 0
    assert target.read_bytes() == first
    assert capsys.readouterr().out == ""


def test_in_place_leaves_unchanged_files_alone(tmp_path):
    target = tmp_path / "x.c"
    target.write_text("int x;\n")
    before = target.stat().st_mtime_ns
    assert main(["--sp-file", str(MDSPAN), "--in-place", str(target)]) == 0
    assert target.stat().st_mtime_ns == before


def test_jobs_output_is_sorted(tree, capsys):
    assert main(["--sp-file", str(MDSPAN), "--jobs", "1", str(tree / "src")]) == 0
    serial = capsys.readouterr().out
    assert main(["--sp-file", str(MDSPAN), "--jobs", "3", str(tree / "src")]) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel
    assert serial.index("a.c") < serial.index("b.cpp")


def test_dialect_override(tmp_path, capsys):
    target = tmp_path / "k.cu"
    target.write_text("void f() { k<<<a,b,c,d>>>(x); }\n")
    rule = ROOT / "fx_cuda2hip" / "rule.cocci"
    assert main(["--sp-file", str(rule), str(target)]) == 0
    assert "hipLaunchKernelGGL" in capsys.readouterr().out
    assert main(["--sp-file", str(rule), "--dialect", "c", str(target)]) == 1


def test_usage_errors(tmp_path, capsys):
    assert main([str(tmp_path)]) == 1                     # no --sp-file
    assert main(["--sp-file", str(MDSPAN)]) == 1          # no targets
    assert main(["--sp-file", str(tmp_path / "none.cocci"), str(tmp_path)]) == 1
    assert main(["--sp-file", str(MDSPAN), str(tmp_path / "missing.c")]) == 1
    assert main(["--sp-file", str(MDSPAN), "--jobs", "0", str(tmp_path)]) == 1
    assert main(["--sp-file", str(MDSPAN), "--in-place", "--dry-run", str(tmp_path)]) == 1


def test_bad_patch(tmp_path, capsys):
    p = tmp_path / "bad.cocci"
    p.write_text("@r@\nwidget x;\n@@\nx\n")
    assert main(["--sp-file", str(p), str(tmp_path)]) == 1
    p.write_text("@d@\ntype c.T;\n@@\n- T x;\n")
    assert main(["--sp-file", str(p), str(tmp_path)]) == 1
    assert "unknown rule 'c'" in capsys.readouterr().err


def test_collect_walks_by_extension(tree):
    explicit, walked = collect([tree / "src"])
    assert explicit == []
    assert sorted(p.name for p in walked) == ["a.c", "b.cpp", "bad.h"]


def test_run_with_config(tree):
    import io
    out, err = io.StringIO(), io.StringIO()
    cfg = RunConfig(MDSPAN, (tree / "src" / "a.c",), mode="dry-run")
    assert run(cfg, out, err) == 0
    assert out.getvalue().endswith("tomultiindex=3\n")


def test_module_entry_point(tmp_path):
    fx = get_fixture("fx_mdspan")
    target = tmp_path / "input.c"
    target.write_bytes(fx.read_input())
    proc = subprocess.run([sys.executable, "-m", "smplite", "--sp-file", str(MDSPAN), str(target)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "a[i, j, k]" in proc.stdout
