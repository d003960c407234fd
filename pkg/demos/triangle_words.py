"""Truncated preprojective algebras of the triangle for two reduced words.

For the short word V is tilting and its stable endomorphism algebra is the
field. For the long word V is still presilting, but a nonzero stable map
into a syzygy shows it is not tilting.
"""
from cmtilt.catalog import TRIANGLE_LONG, TRIANGLE_SHORT, triangle_long_modules, triangle_pp
from cmtilt.homology import StableHom, g_algebra, injective_resolution, render_injective_resolution, syzygy
from cmtilt.linalg import Field
from cmtilt.module import projective
from cmtilt.tilting import analyze_V

F = Field(2)
for word in (TRIANGLE_SHORT, TRIANGLE_LONG):
    A, cert = triangle_pp(word, F)
    print(f"\n== word {word}: dim {A.dim}, per vertex {A.vertex_dims()}, certificate valid {cert.valid}")
    for v in range(A.n):
        terms, res = injective_resolution(projective(A, v))
        print("  " + render_injective_resolution(f"e{A.vertices[v]}A", terms, res.complete))
    print(f"  g(A) = {g_algebra(A)}")
    r = analyze_V(A)
    print(f"  V has {len(r['decomposition'].pieces)} indecomposable summands")
    print(f"  verdict: {r['verdict'].tilting} ({r['verdict'].tilting_tag})")
    if r["presentation"] is not None:
        print(f"  stable End(V): {r['presentation'].render()}, gldim {r['gldim']}")

A, _ = triangle_pp(TRIANGLE_LONG, F)
X, Y, Z = triangle_long_modules(A)
print(f"\nstable Hom(Y, Omega X)_0 has dimension {StableHom(Y, syzygy(X)).dim}")
