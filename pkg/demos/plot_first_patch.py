"""
A first semantic patch
======================

Rename a function call, keep its arguments, and look at the diff.
"""
# %%
import smplite

source = """\
#include <stdio.h>

int scale(int x)
{
    int y = old_api(x, 2);
    if (y > 10)
        y = old_api(y - 1, 3);
    return y;
}
"""

# %%
# The rule binds the arguments to metavariables and rewrites the call.
rules = smplite.parse_smpl("""\
@rename@
expression a, b;
@@
- old_api(a, b)
+ new_api(b, a)
""")
print(smplite.format_ruleset(rules))

# %%
result = smplite.transform_source(rules, source)
print(result.counts)
print(result.output)

# %%
# Only the touched lines show up; spacing and comments elsewhere survive.
print(smplite.emit_diff(source, result.output, "scale.c"))

# %%
# Matching alone, without edits. Each match carries its bindings.
tree = smplite.parse_source(source)
for m in smplite.match_pattern(rules["rename"], tree):
    print(m.env.text("rename", "a"), "|", m.env.text("rename", "b"))

# %%
# The lossless tree gives back the exact input.
assert smplite.unparse(tree) == source.encode("latin-1")
