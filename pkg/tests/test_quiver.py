import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmtilt.coxeter import random_reduced_word
from cmtilt.quiver import (Quiver, admissible_subsequence, admissible_subsequence_bruteforce,
                           double_quiver, find_reflection_target, is_acyclic,
                           is_admissible_sequence, linear_quiver, sink_reflection,
                           tree_quivers, tree_reflection_target, triangle,
                           underlying_graph_is_tree)


def test_acyclic():
    assert is_acyclic(triangle())
    assert not is_acyclic(Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)]))
    assert not is_acyclic(Quiver([1], [("x", 1, 1)]))


def test_double_quiver_degrees():
    D = double_quiver(linear_quiver(2))
    assert [(a.name, a.source, a.target, a.degree) for a in D.arrows] == [
        ("a1", 1, 2, 0), ("a1*", 2, 1, 1)]


def test_double_quiver_needs_acyclic():
    with pytest.raises(ValueError):
        double_quiver(Quiver([1], [("x", 1, 1)]))


def test_sink_reflection_triangle():
    Q2 = sink_reflection(triangle(), 3)
    assert {(a.source, a.target) for a in Q2.arrows} == {(1, 2), (3, 2), (3, 1)}


def test_sink_reflection_a2():
    Q2 = sink_reflection(linear_quiver(2), 2)
    assert [(a.source, a.target) for a in Q2.arrows] == [(2, 1)]


def test_sink_reflection_rejects_source():
    with pytest.raises(ValueError):
        sink_reflection(triangle(), 1)


def test_admissible_sequences():
    Q = triangle()
    assert is_admissible_sequence(Q, [1, 2, 3])
    assert not is_admissible_sequence(Q, [2, 1, 3])
    with pytest.raises(ValueError):
        is_admissible_sequence(Q, [1, 2])


def test_admissible_subsequence_positions():
    Q2 = sink_reflection(triangle(), 3)
    assert admissible_subsequence(Q2, [2, 3, 1, 3, 2, 1]) == [1, 2, 4]
    assert admissible_subsequence(triangle(), [2, 3, 1, 3, 2, 1]) is None


def test_find_reflection_target_triangle():
    Q2, refl = find_reflection_target(triangle(), [2, 3, 1, 3, 2, 1])
    assert refl == [3]
    assert {(a.source, a.target) for a in Q2.arrows} == {(1, 2), (3, 2), (3, 1)}


def test_find_reflection_target_identity_when_admissible():
    Q2, refl = find_reflection_target(linear_quiver(3), [1, 2, 3])
    assert refl == [] and Q2 == linear_quiver(3)


def test_tree_detection():
    assert underlying_graph_is_tree(linear_quiver(4))
    assert not underlying_graph_is_tree(triangle())
    assert not underlying_graph_is_tree(Quiver([1, 2, 3], [("a", 1, 2)]))


def test_tree_quiver_counts():
    # oriented trees up to isomorphism: 1, 1, 3, 8, 27
    counts = [0] * 6
    for Q in tree_quivers(5):
        counts[len(Q.vertices)] += 1
    assert counts[1:] == [1, 1, 3, 8, 27]


def test_quiver_validation():
    with pytest.raises(ValueError):
        Quiver([1, 2], [("a", 1, 3)])
    with pytest.raises(ValueError):
        Quiver([1], [("a", 1, 1), ("a", 1, 1)])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 5), st.integers(1, 9))
def test_greedy_admissibility_matches_bruteforce(seed, n, length):
    rng = random.Random(seed)
    trees = [Q for Q in tree_quivers(n) if len(Q.vertices) == n]
    Q = rng.choice(trees)
    word = [rng.choice(Q.vertices) for _ in range(length)]
    assert (admissible_subsequence(Q, word) is not None) == admissible_subsequence_bruteforce(Q, word)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tree_targets_always_exist(seed):
    rng = random.Random(seed)
    Q = rng.choice([Q for Q in tree_quivers(5) if len(Q.vertices) >= 2])
    word = random_reduced_word(Q, 12, rng)
    if set(word) != set(Q.vertices):
        return
    found = find_reflection_target(Q, word)
    assert found is not None
    assert tree_reflection_target(Q, word) is not None
