"""Load a raw edge list, clean it up, and poke at the Graph object.

Raw files are messy: comments, duplicate rows, self-loops, gaps in the
vertex numbering. prepare() runs the standard pipeline (dedupe, drop
self-loops, drop isolated vertices, reindex) and reports what it did.
"""

import tempfile
from pathlib import Path

from sparsekit.graph import load_edge_list, prepare, quadratic_form

raw = """\
# a small collaboration snapshot, exported with warts
0 1
1 0
2 2
1 2
4 7
7 4
7 9
"""

path = Path(tempfile.mkdtemp()) / "raw.txt"
path.write_text(raw, encoding="utf-8")

g = load_edge_list(path)
print(f"as parsed:     {g}")

g, rep = prepare(g)
print(f"after prepare: {g}")
print(f"  removed isolated vertices: {rep.removed_isolated}")
print(f"  vertex id remap (old -> new): {rep.id_remap}")

print("\nedges get stable ids, sorted by endpoints:")
for e in range(g.n_edges):
    print(f"  edge {e}: ({int(g.edge_u[e])}, {int(g.edge_v[e])}) w={g.edge_weight[e]}")

print("\nneighborhood of vertex 1:", [int(v) for v in g.neighbors(1)])
print("degrees:", [int(d) for d in g.degrees()])

# the Laplacian quadratic form x^T L x measures how much x varies across edges
x = [1.0, 0.0, -1.0, 0.5, 0.5, -0.5]
print("quadratic form of a test vector:", quadratic_form(g, x))
print("graph fingerprint:", g.graph_id)
