# Walk a scripted repository and credit each commit with developer hours.
import tempfile
from collections import Counter

from refactor_effort.history import commit_loc, estimate_tct, walk_history
from refactor_effort.synthetic import build_synthetic_corpus

# %% a small repo with three authors and 20 planted refactorings
tmp = tempfile.mkdtemp()
corpus = build_synthetic_corpus(f"{tmp}/repo", seed=7)
commits = walk_history(corpus.path)
print(len(commits), "commits, authors:", Counter(c.author_key for c in commits))

# %% churn per commit (added + deleted lines)
for c in commits[:5]:
    print(c.commit_id[:10], c.author_key, commit_loc(c), "lines in", len(c.file_changes), "files")

# %% session heuristic: gap <= 4 h counts, otherwise a 0.5 h seed, capped at 12 h
estimate_tct(sorted(commits, key=lambda c: c.timestamp_utc))
hours = [c.tct_hours for c in commits]
print("total hours", round(sum(hours), 2), "max", max(hours), "seeded", sum(h == 0.5 for h in hours))

# a longer session gap credits more of the idle time
estimate_tct(sorted(commits, key=lambda c: c.timestamp_utc), session_gap_hours=8)
print("gap 8 h ->", round(sum(c.tct_hours for c in commits), 2))
