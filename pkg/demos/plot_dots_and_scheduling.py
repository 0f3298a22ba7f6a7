"""
Dots, rule order and dependencies
=================================

``...`` spans any run of statements. Rules run top to bottom, and
``depends on`` gates a rule on whether another one matched.
"""
# %%
import smplite

source = """\
void work(void)
{
    a();
    c();
    b();
    a();
    b();
}
"""
rules = smplite.parse_smpl("""\
@pair@
@@
- a();
  ...
  b();

@note depends on pair@
@@
  b();
+ done();
""")
res = smplite.transform_source(rules, source)
print(res.counts, res.flags)
print(res.output)

# %%
# Without a pair the second rule is skipped, even though b() is present.
res = smplite.transform_source(rules, source.replace("    a();\n", ""))
print(res.counts, res.flags)

# %%
# The unroll use case: mark every loop, collapse true unrolls, then
# undo the mark where no unroll was found.
from smplite.rule_catalog import get_fixture, run_fixture

for case in ("fx_unroll_p1r1", "fx_unroll_p1r1/false_unroll"):
    fx = get_fixture(case)
    out = run_fixture(fx)
    print(case, out.counts)
    print(smplite.emit_diff(fx.read_input(), out.output.encode("latin-1"), "input.c") or "(no change)\n")
