"""
Translating CUDA calls with a lookup table
==========================================

A script rule maps names through a table. Calls missing from the
table are left alone and reported as warnings.
"""
# %%
from smplite import load_fixtures, run_fixture

fx = load_fixtures(family="fx_cuda2hip")
for f in fx:
    print(f.id, "-", f.note)

# %%
primary = fx[0]
print(primary.rule_path.read_text())

# %%
print(primary.read_input().decode("latin-1"))

# %%
res = run_fixture(primary)
print(res.output)
for w in res.warnings:
    print("warning:", w)

# %%
# The golden output is byte-exact.
assert res.output.encode("latin-1") == primary.read_expected()

# %%
# A second run is a no-op: every translated name is already a HIP name.
again = run_fixture(primary, primary.read_expected())
print("idempotent:", again.output.encode("latin-1") == primary.read_expected())
