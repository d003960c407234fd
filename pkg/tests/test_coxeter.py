import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmtilt.algebra import NotFiniteError, algebra_from_relations
from cmtilt.catalog import (TRIANGLE_LONG, TRIANGLE_SHORT, reflected_triangle_relations,
                            triangle_long_relations, triangle_pp)
from cmtilt.coxeter import (CoxeterWord, braid_class, is_reduced, random_reduced_word,
                            reflection_morita_check, reflection_transport, restrict_to_support,
                            same_algebra, truncated_pp)
from cmtilt.quiver import Quiver, linear_quiver, sink_reflection, tree_quivers, triangle


def test_roots_of_long_triangle_word():
    w = CoxeterWord(triangle(), TRIANGLE_LONG)
    assert w.roots() == [(0, 1, 0), (0, 1, 1), (1, 2, 1), (1, 1, 0), (2, 3, 2), (2, 2, 1)]
    assert w.root_height_total() == 21
    assert w.is_reduced()


def test_non_reduced_words():
    Q = triangle()
    assert not is_reduced(Q, (1, 1))
    assert CoxeterWord(Q, (2, 3, 2, 3)).first_negative() == 3
    with pytest.raises(ValueError):
        CoxeterWord(Q, (2, 3, 2, 3)).support()
    with pytest.raises(ValueError):
        CoxeterWord(Q, (4,))


def test_support_and_restriction():
    Q = linear_quiver(3)
    sub, w = restrict_to_support(Q, [1, 2])
    assert list(sub.vertices) == [1, 2] and w.entries == (1, 2)
    assert CoxeterWord(Q, [1, 2, 1]).support() == {1, 2}


def test_braid_class_of_long_word_is_reduced():
    Q = triangle()
    cls = braid_class(Q, TRIANGLE_LONG)
    assert tuple(TRIANGLE_LONG) in cls
    assert all(is_reduced(Q, w) for w in cls)
    assert len({CoxeterWord(Q, w).root_height_total() for w in cls}) == 1


def test_commutation_class_of_a3():
    cls = braid_class(linear_quiver(3), (1, 3))
    assert cls == [(1, 3), (3, 1)]


@pytest.mark.parametrize("Q,word,dim", [
    (triangle(), TRIANGLE_SHORT, 9),
    (linear_quiver(2), (2, 1), 3),
    (triangle(), TRIANGLE_LONG, 21),
])
def test_truncation_certificate(Q, word, dim, F2):
    A, cert = truncated_pp(Q, word, F2)
    assert cert.valid
    assert cert.dim == cert.root_height_total == A.dim == dim


def test_short_triangle_vertex_dims(field):
    A, _ = triangle_pp(F=field)
    assert A.vertex_dims() == [2, 5, 2]


def test_truncated_pp_rejects_bad_input(F2):
    with pytest.raises(ValueError):
        truncated_pp(triangle(), (1, 1), F2)
    cyc = Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    with pytest.raises(ValueError):
        truncated_pp(cyc, (1,), F2)


def test_truncation_cap_too_small(F2):
    with pytest.raises(NotFiniteError):
        truncated_pp(triangle(), TRIANGLE_LONG, F2, hard_cap=4)


def test_long_word_matches_presentation(field):
    A, _ = triangle_pp(TRIANGLE_LONG, field)
    Q, rels = triangle_long_relations()
    B = algebra_from_relations(Q, rels, field)
    assert same_algebra(B, A) and same_algebra(A, B)


def test_reflected_word_matches_presentation(F2):
    Q2 = sink_reflection(triangle(), 3)
    A, _ = truncated_pp(Q2, TRIANGLE_LONG, F2)
    Q, rels = reflected_triangle_relations()
    B = algebra_from_relations(Q, rels, F2)
    assert same_algebra(B, A) and same_algebra(A, B)


def test_reflection_transport_keeps_entries():
    w = reflection_transport(triangle(), 3, TRIANGLE_LONG)
    assert w.entries == tuple(TRIANGLE_LONG)
    assert {(a.source, a.target) for a in w.Q.arrows} == {(1, 2), (3, 2), (3, 1)}
    assert w.is_reduced()


def test_reflection_morita_check(F2):
    m = reflection_morita_check(triangle(), 3, TRIANGLE_LONG, F2)
    assert m.ok
    assert m.graded_dims_end == m.graded_dims_b == [7, 9, 4, 1, 0]


def test_reflection_morita_check_a2(field):
    assert reflection_morita_check(linear_quiver(2), 2, (2, 1), field).ok


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_random_reduced_words_on_trees(seed, length):
    rng = random.Random(seed)
    Q = rng.choice(tree_quivers(4))
    w = random_reduced_word(Q, length, rng)
    assert len(w) <= length and is_reduced(Q, w)
    assert all(all(c >= 0 for c in b) for b in CoxeterWord(Q, w).roots())
