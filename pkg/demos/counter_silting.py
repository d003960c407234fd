"""A 2-IG algebra whose candidate object fails to be presilting.

Builds the two-vertex algebra with a degree-1 loop, computes the second syzygy
W of U, splits it into indecomposables, and shows a nonzero stable map
W -> W[1] in degree 0.
"""
from cmtilt.catalog import counter_silting, counter_silting_X
from cmtilt.homology import StableHom, cm_cosyzygy, is_IG, syzygy
from cmtilt.linalg import Field
from cmtilt.module import decompose, loewy_report, render_loewy
from cmtilt.tilting import is_presilting, module_U

A = counter_silting(Field(2))
print(A)
ig = is_IG(A)
print(f"injective dimensions: right {ig.right}, left {ig.left}")

X = counter_silting_X(A)
print("\nthe module X (radical layers, vertex@degree):")
print(render_loewy(loewy_report(X)))
print("X[1] has dims", cm_cosyzygy(X).dims)

W = syzygy(module_U(A), 2)
print("\nsummands of the second syzygy of U:")
for piece, shift, mult in decompose(W).summary():
    print(f"  dim {piece.dim}, normalized shift {shift}, multiplicity {mult}")

st = StableHom(W, cm_cosyzygy(W))
print(f"\nstable Hom(W, W[1])_0 has dimension {st.dim}")
verdict, tag, witnesses = is_presilting(W)
print(f"presilting: {verdict} ({tag}); witness: {witnesses[0].kind} n={witnesses[0].n}")
