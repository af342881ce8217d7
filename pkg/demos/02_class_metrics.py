# CK metrics and typed dependency edges for a handful of Java classes.
from pathlib import Path

from refactor_effort.analysis import CkMetrics, compute_all_ck, extract_dependencies
from refactor_effort.pipeline import snapshot_from_directory

root = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "ck"
snap = snapshot_from_directory(root)
print(len(snap), "classes:", ", ".join(c.fqn for c in snap))

# %% edges, multiplicities folded into count
edges = extract_dependencies(snap)
for e in edges:
    print(f"{e.from_fqn:>20} -{e.kind}-> {e.to_fqn} x{e.count}")

# %% the metric table
metrics = compute_all_ck(snap, edges)
print(f"{'class':<20}" + "".join(f"{n:>8}" for n in CkMetrics.names()))
for fqn, m in sorted(metrics.items()):
    print(f"{fqn:<20}" + "".join(f"{v:>8}" for v in m.as_tuple()))

# per-method view for the branchiest class
for meth in snap.by_fqn["shop.Discount"].methods:
    print(meth.name, meth.cyclomatic_complexity, sorted(meth.accessed_fields))
