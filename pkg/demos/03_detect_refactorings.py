# Compare two source snapshots and name the class-level refactorings between them.
from refactor_effort.analysis import parse_sources
from refactor_effort.detector import attribute_lines, detect
from refactor_effort.effort import compute_rtt
from refactor_effort.history import CommitRecord, FileChange

before = parse_sources([
    ("a/Order.java", "package a; class Order { int id; int qty; void ship() {} void cancel() {} int total() { return qty; } }"),
    ("a/Cart.java", "package a; class Cart { int n; void add() {} void drop() {} void tax() {} void fee() {} }"),
])
after = parse_sources([
    ("b/Order.java", "package b; class Order { int id; int qty; void ship() {} void cancel() {} int total() { return qty; } }"),
    ("a/Cart.java", "package a; class Cart { int n; Fees fees; void add() {} void drop() {} }"),
    ("a/Fees.java", "package a; class Fees { void tax() {} void fee() {} }"),
])

# %% a move and an extraction in one commit
ops = detect(before, after, "c0ffee")
for op in ops:
    print(op.kind, op.before_fqn, "->", op.after_fqn)

# %% lines per op, then the effort share of a 3-hour commit
commit = CommitRecord("c0ffee", "dev@example.org", 0, [], [
    FileChange("b/Order.java", 1, 1, old_path="a/Order.java"),
    FileChange("a/Cart.java", 1, 2), FileChange("a/Fees.java", 2, 0),
    FileChange("README.md", 14, 0),
], tct_hours=3.0)
attribute_lines(ops, commit)
cloc = sum(fc.churn for fc in commit.file_changes)
for op in ops:
    print(op.kind, op.touched_lines, "of", cloc, "lines ->", round(compute_rtt(3.0, op.touched_lines, cloc), 3), "h")
