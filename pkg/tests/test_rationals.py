"""The worked examples rerun over Q; verdicts must match the F2 runs."""
import pytest

from cmtilt.catalog import (TRIANGLE_LONG, TRIANGLE_SHORT, counter_silting, counter_silting_X,
                            one_ig_catalog, triangle_long_modules, triangle_pp)
from cmtilt.homology import StableHom, cm_cosyzygy, g_algebra, is_IG, syzygy
from cmtilt.linalg import Field
from cmtilt.module import decompose, iso_indecomposable, projective, shift
from cmtilt.quiver import triangle
from cmtilt.tilting import exact_sequence_check, is_presilting, is_tilting, module_U, module_V, tilting_pipeline

Q = Field()
F2 = Field(2)

pytestmark = pytest.mark.slow


def _counts(M, candidates):
    pieces = [p for p, _ in decompose(M).pieces]
    return [sum(1 for p in pieces if p.dims == X.dims and iso_indecomposable(p, X) is not None)
            for X in candidates]


def test_counter_silting_over_rationals():
    A = counter_silting(Q)
    X = counter_silting_X(A)
    assert is_IG(A).d == 2
    W = syzygy(module_U(A), 2)
    assert _counts(W, [projective(A, 1), shift(X, -1), X]) == [1, 1, 2]
    assert iso_indecomposable(cm_cosyzygy(X), shift(X, 1)) is not None
    assert StableHom(W, cm_cosyzygy(W)).dim > 0
    assert is_presilting(W)[0] == "fails"


def test_triangle_words_over_rationals():
    A, cert = triangle_pp(TRIANGLE_SHORT, Q)
    assert cert.dim == 9 and g_algebra(A).value == 1
    assert is_tilting(module_V(A), A).tilting == "tilting"
    B, _ = triangle_pp(TRIANGLE_LONG, Q)
    X, Y, Z = triangle_long_modules(B)
    assert _counts(module_V(B), [X, Y, Z, projective(B, 0)]) == [5, 3, 2, 1]
    assert is_tilting(module_V(B), B).tilting == "not tilting"


@pytest.mark.parametrize("word", [TRIANGLE_SHORT, TRIANGLE_LONG])
def test_pipeline_agrees_across_fields(word):
    rq = tilting_pipeline(triangle(), word, Q)
    r2 = tilting_pipeline(triangle(), word, F2)
    assert rq["status"] == r2["status"] == "tilting"
    assert rq["gldim"] == r2["gldim"]
    assert rq["presentation"].algebra.dim == r2["presentation"].algebra.dim
    shape = lambda r: [(p.dims, s, n) for p, s, n in r["decomposition"].summary()]
    assert shape(rq) == shape(r2)


def test_catalog_verdicts_agree_across_fields():
    for Aq, A2 in zip(one_ig_catalog(Q), one_ig_catalog(F2)):
        assert Aq.name == A2.name
        assert g_algebra(Aq).value == g_algebra(A2).value
        assert exact_sequence_check(Aq)
        assert is_presilting(module_V(Aq))[0] == "holds"
        assert is_tilting(module_V(Aq), Aq).tilting == is_tilting(module_V(A2), A2).tilting
