import pytest

from smplite import (
    BindingEnv, InvalidIdentifier, ScriptTableMiss, eval_script, gen_fresh,
    match_pattern, parse_smpl, parse_source, run_rules, transform_source,
)
from smplite.engine import text_value
from smplite.rule_catalog import ROOT, get_fixture, load_rules


def rules(name):
    return load_rules(ROOT / name / "rule.cocci")


def lines_of(tree, results):
    return [(tree.index.line_of(r.span[0]), tree.index.line_of(r.span[1] - 1)) for r in results]


def test_mdspan_binds_indices():
    tree = parse_source("void f() { s = a[i][j+1][k]; }", "c-ext")
    (m,) = match_pattern(rules("fx_mdspan")["tomultiindex"], tree)
    assert {n: m.env.text("tomultiindex", n) for n in "xyz"} == {"x": "i", "y": "j+1", "z": "k"}


def test_regex_is_substring_search():
    rule = rules("fx_variant").rules[0]
    assert match_pattern(rule, parse_source("void saxpy(int n) { }", "c")) == []
    assert len(match_pattern(rule, parse_source("void dot_kernel(int n) { }", "c"))) == 1
    assert len(match_pattern(rule, parse_source("void my_kernel_v2(int n) { }", "c"))) == 1


def test_constant_set_and_header_binding():
    rule = parse_smpl("""@r@
type T;
identifier i,l;
constant k={4};
statement S;
@@
for (T i=0; i+k-1 < l; i+=k) S
""")["r"]
    tree = parse_source("void f(int n) { for (int i=0; i+4-1 < n; i+=4) x(i); }", "c")
    (m,) = match_pattern(rule, tree)
    assert m.env.text("r", "T") == "int" and m.env.text("r", "l") == "n"
    tree = parse_source("void f(int n) { for (int i=0; i+2-1 < n; i+=2) x(i); }", "c")
    assert match_pattern(rule, tree) == []


def test_pragma_dots_absorb_rest_of_line():
    rule = parse_smpl("@r@\n@@\n#pragma omp ...\n")["r"]
    tree = parse_source("#pragma omp parallel for\n#pragma acc kernels\n", "c")
    assert lines_of(tree, match_pattern(rule, tree)) == [(1, 1)]


def test_pragmainfo_binds_tail():
    rule = rules("fx_acc2omp")["moa"]
    tree = parse_source("void f() {\n#pragma acc kernels copy(a)\n{ }\n}\n", "c")
    (m,) = match_pattern(rule, tree)
    assert m.env.text("moa", "pi") == "kernels copy(a)"


def test_position_metavariable():
    rule = rules("fx_cuda2hip")["cfe"]
    tree = parse_source("void f() {\n  x = g(1);\n}\n", "c-ext", path="t.cu")
    (m,) = match_pattern(rule, tree)
    pos = m.env.lookup("cfe", "p").position
    assert (pos.path, pos.line, pos.column) == ("t.cu", 2, 7)


def test_disjunction_first_branch_wins():
    rule = parse_smpl("@r@\nexpression e;\n@@\n(\n- f(e)\n+ first(e)\n|\n- f(1)\n+ second()\n)\n")["r"]
    out = transform_source(parse_smpl("@r@\nexpression e;\n@@\n(\n- f(e)\n+ first(e)\n|\n"
                                      "- f(1)\n+ second()\n)\n"), "int x = f(1);\n", "c")
    assert out.output == "int x = first(1);\n"


def test_conjunction_containment_rewrites_every_occurrence():
    rs = parse_smpl("@r@\nstatement S;\nidentifier i;\n@@\n\\( S \\&\n- i+1\n+ i\n\\)\n")
    out = transform_source(rs, "void f() { a[i+1] = b[i+1]; }\n", "c")
    assert out.output == "void f() { a[i] = b[i]; }\n"


def test_leftmost_outermost_non_overlapping():
    rs = parse_smpl("@r@\nexpression e;\n@@\n- g(e)\n+ h(e)\n")
    out = transform_source(rs, "int x = g(g(1)) + g(2);\n", "c")
    assert out.output == "int x = h(g(1)) + h(2);\n"
    assert out.counts == {"r": 2}


def test_context_rule_reports_nested_sites():
    rs = parse_smpl("@r@\nexpression e;\n@@\ng(e)\n")
    out = transform_source(rs, "int x = g(g(1));\n", "c")
    assert out.counts == {"r": 2} and not out.changed


def test_statement_dots_zero_or_more():
    rule = parse_smpl("@r@\n@@\na();\n...\nb();\n")["r"]
    for body, n in [("a(); b();", 1), ("a(); x(); y(); b();", 1), ("b(); a();", 0)]:
        tree = parse_source("void f() { " + body + " }", "c")
        assert len(match_pattern(rule, tree)) == n, body


def test_dots_monotonicity():
    tight = parse_smpl("@r@\n@@\na();\nb();\n")["r"]
    loose = parse_smpl("@r@\n@@\na();\n...\nb();\n")["r"]
    bodies = ["a(); b();", "a(); c(); b();", "c(); a(); b(); a(); d(); b();", "b(); a();"]
    for body in bodies:
        tree = parse_source("void f() { " + body + " }", "c")
        t = {r.span[0] for r in match_pattern(tight, tree)}
        l = {r.span[0] for r in match_pattern(loose, tree)}
        assert t <= l


def test_repeated_metavariable_requires_equal_terms():
    rule = parse_smpl("@r@\nexpression E;\n@@\nf(E, E)\n")["r"]
    assert len(match_pattern(rule, parse_source("int x = f(a + b, a+b);", "c"))) == 1
    assert match_pattern(rule, parse_source("int x = f(a + b, a + c);", "c")) == []


def test_symbol_matches_only_its_name():
    rule = rules("fx_mdspan")["tomultiindex"]
    tree = parse_source("void f() { s = b[i][j][k]; }", "c-ext")
    assert match_pattern(rule, tree) == []


def test_determinism():
    fx = get_fixture("fx_kokkos")
    a = fx.rules()
    r1 = transform_source(a, fx.read_input(), fx.dialect)
    r2 = transform_source(a, fx.read_input(), fx.dialect)
    assert [(m.rule, m.span) for m in r1.matches] == [(m.rule, m.span) for m in r2.matches]
    assert r1.output == r2.output


# -- scripts -------------------------------------------------------------------

def cuda_env(rule, name, value):
    return BindingEnv().bind((rule, name), text_value("identifier", value))


def test_eval_script_function_table():
    rs = rules("fx_cuda2hip")
    tables = {"C2HF": rs["__anon0"].tables["C2HF"]}
    env = eval_script(rs["cf2hf"], cuda_env("cfe", "fn", "curand_uniform_double"), tables)
    assert env.text("cf2hf", "nf") == "rocrand_uniform_double"


def test_eval_script_type_table():
    rs = rules("fx_cuda2hip")
    tables = {"C2HT": rs["__anon1"].tables["C2HT"]}
    env = BindingEnv().bind(("cte", "c_t"), text_value("type", "__half"))
    assert eval_script(rs["ct2hf"], env, tables).text("ct2hf", "h_t") == "rocblas_half"


def test_eval_script_string_concat():
    rs = rules("fx_kokkos")
    env = BindingEnv().bind(("r1", "fb"), text_value("statement", "{ y[i]+=a*x[i]; }"))
    out = eval_script(rs["r2"], env)
    assert out.text("r2", "lb") == "KOKKOS_LAMBDA(const int i){ y[i]+=a*x[i]; }"


def test_eval_script_table_miss():
    rs = rules("fx_cuda2hip")
    with pytest.raises(ScriptTableMiss):
        eval_script(rs["cf2hf"], cuda_env("cfe", "fn", "printf"), {"C2HF": {}})


def test_eval_script_invalid_identifier():
    rs = parse_smpl("@initialize:python@ @@\nT = {\"a\": \"not an ident\"}\n"
                    "@r@\nidentifier x;\n@@\nx\n"
                    "@script:python s@\nx << r.x;\ny;\n@@\ncoccinelle.y = cocci.make_ident(T[x])\n")
    with pytest.raises(InvalidIdentifier):
        eval_script(rs["s"], cuda_env("r", "x", "a"), rs["__anon0"].tables)


def test_table_miss_drops_match_with_warning():
    fx = get_fixture("fx_cuda2hip")
    res = transform_source(fx.rules(), fx.read_input(), fx.dialect, path="input.c")
    assert res.warnings == [
        "input.c: cf2hf: match dropped: C2HF['cudaStreamSynchronize'] is not defined"]
    assert res.counts["cfe"] == 2 and res.counts["cf2hf"] == res.counts["hfe"] == 1
    assert "cudaStreamSynchronize(s);" in res.output


# -- fresh names -----------------------------------------------------------------

def test_gen_fresh_examples():
    assert gen_fresh((("lit", "avx512_"), ("mv", "f")), {"f": "dot_kernel"}) == "avx512_dot_kernel"
    assert gen_fresh((("lit", "a_"), ("lit", "b_"), ("mv", "f")), {"f": "g"}) == "a_b_g"


def test_gen_fresh_avoids_collisions():
    tree = parse_source("int avx512_dot_kernel(int); int avx512_dot_kernel_1;", "c")
    name = gen_fresh((("lit", "avx512_"), ("mv", "f")), {"f": "dot_kernel"}, tree)
    assert name == "avx512_dot_kernel_2"
    assert gen_fresh((("mv", "f"),), {"f": "z"}, None, taken={"z"}) == "z_1"


# -- scheduling ------------------------------------------------------------------

UNROLLED = """void f(int *a, int n)
{
  for (int i=0; i+4-1 < n; i+=4)
  {
    a[i+0] = 0;
    a[i+1] = 0;
    a[i+2] = 0;
    a[i+3] = 0;
  }
}
"""
FALSE = UNROLLED.replace("a[i+2] = 0;", "a[i+2] = 1;")


def test_p1_then_r1_collapses_true_unroll():
    res = transform_source(rules("fx_unroll_p1r1"), UNROLLED, "c")
    assert res.counts == {"p1": 1, "r1": 1, "undo": 0}
    assert "#pragma omp unroll partial (4)" in res.output
    assert res.output.count("a[i+0] = 0;") == 1


def test_false_unroll_r1_finds_nothing():
    p1_r1 = parse_smpl(open(ROOT / "fx_unroll_p1r1" / "rule.cocci").read().split("@undo")[0])
    res = transform_source(p1_r1, FALSE, "c")
    assert res.counts == {"p1": 1, "r1": 0}
    # p1 alone leaves the incorrect intermediate program
    assert res.output.count("a[i+0]") == 4


def test_undo_restores_false_unroll():
    res = transform_source(rules("fx_unroll_p1r1"), FALSE, "c")
    assert res.counts["undo"] == 1 and res.output == FALSE


def test_depends_on_skips_rule():
    rs = rules("fx_rawloop")
    res = transform_source(rs, "bool f() { return true; }\n", "c-ext")
    assert res.flags == {"rl": False, "ah": False}
    assert res.counts["ah"] == 0 and not res.changed


def test_dependent_rule_never_reported_when_gate_closed():
    rs = parse_smpl("@a@\n@@\nnever();\n@b depends on a@\n@@\n- g();\n")
    res = transform_source(rs, "void f() { g(); }\n", "c")
    assert all(m.rule != "b" for m in res.matches) and not res.changed


def test_run_rules_returns_matches_and_flags():
    tree = parse_source("int x = g(1);\n", "c")
    matches, flags = run_rules(parse_smpl("@r@\nexpression e;\n@@\ng(e)\n"), tree)
    assert flags == {"r": True} and len(matches) == 1


def test_overlapping_edits_earlier_wins():
    rs = parse_smpl("@a@\nidentifier x;\n@@\nint x;\n"
                    "@b@\nidentifier a.x;\n@@\n- foo();\n+ bar(x);\n")
    res = transform_source(rs, "int p;\nint q;\nvoid f() {\n  foo();\n}\n", "c")
    assert "  bar(p);\n" in res.output and "bar(q)" not in res.output
    assert any("overlaps" in w for w in res.warnings)


def test_inherited_environment_positions_follow_edits():
    fx = get_fixture("fx_cuda2hip")
    res = transform_source(fx.rules(), fx.read_input(), fx.dialect)
    assert "rocrand_uniform_double(" in res.output and "rocblas_half" in res.output
