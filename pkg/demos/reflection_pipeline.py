"""The full pipeline on the long triangle word.

The word has no admissible subsequence for the triangle, so the pipeline
reflects at a sink, rebuilds the algebra for the new orientation, checks it is
Morita equivalent to the old one, and finds a tilting object there.
"""
from cmtilt.catalog import TRIANGLE_LONG
from cmtilt.coxeter import reflection_morita_check
from cmtilt.linalg import Field
from cmtilt.quiver import triangle
from cmtilt.tilting import tilting_pipeline

F = Field(2)
r = tilting_pipeline(triangle(), TRIANGLE_LONG, F)
Q2, reflections = r["target"]
print(f"reflected at {reflections}: {Q2}")
print(f"algebra after reflection: dim {r['algebra'].dim}, g = {r['g']}")
print(f"criteria for g <= 0: {r['criteria']}")
print(f"verdict: {r['status']}")
for piece, shift, mult in r["decomposition"].summary():
    print(f"  summand dim {piece.dim} x{mult}")
print(f"stable End(V'): {r['presentation'].render()}")
print(f"global dimension: {r['gldim']}")
m = reflection_morita_check(triangle(), 3, TRIANGLE_LONG, F)
print(f"Morita check: {m.ok}; graded dims of End(P) {m.graded_dims_end}")
