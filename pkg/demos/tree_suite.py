"""Random reduced words on small tree quivers all give tilting objects.

Runs a small sample by default; pass a number to change the per-quiver count.
"""
import sys
from collections import Counter

from cmtilt.catalog import tree_words
from cmtilt.linalg import Field
from cmtilt.tilting import tilting_pipeline

per_quiver = int(sys.argv[1]) if len(sys.argv) > 1 else 2
pairs = tree_words(max_vertices=4, per_quiver=per_quiver)
tally = Counter()
for Q, w in pairs:
    r = tilting_pipeline(Q, list(w), Field(2))
    tally[(r["status"], r["gldim"])] += 1
print(f"{len(pairs)} (quiver, word) pairs")
for (status, gl), n in sorted(tally.items(), key=str):
    print(f"  {status}, gldim {gl}: {n}")
