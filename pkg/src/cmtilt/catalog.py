"""Bundled worked examples and the algebra catalogs used by the property suites."""
import random

from .algebra import (NotFiniteError, algebra_from_relations, dual_bimodule, dual_numbers, path_algebra,
                      regular_bimodule, trivial_extension)
from .coxeter import random_reduced_word, truncated_pp
from .linalg import Field
from .module import module_from_literal
from .quiver import Quiver, linear_quiver, tree_quivers, triangle

TRIANGLE_SHORT = (2, 3, 1, 3)
TRIANGLE_LONG = (2, 3, 1, 3, 2, 1)


def counter_silting_quiver():
    return Quiver([1, 2], [("alpha", 1, 1, 1), ("beta", 1, 2, 0), ("gamma", 2, 1, 2)])


COUNTER_SILTING_RELATIONS = [
    [(1, ["alpha", "alpha"]), (-1, ["beta", "gamma"])],
    [(1, ["alpha", "beta"])],
    [(1, ["gamma", "beta"])],
    [(1, ["gamma", "alpha"])],
]


def counter_silting(F=None):
    """Two vertices, a degree-1 loop at 1, 1 -> 2 in degree 0 and 2 -> 1 in degree 2."""
    return algebra_from_relations(counter_silting_quiver(), COUNTER_SILTING_RELATIONS, F,
                                  name="counter-silting")


def counter_silting_X(A):
    """Tops at (0, 2) and (1, 1), both reaching the socle at (2, 1)."""
    return module_from_literal(A, {
        "dims": {"0,2": 1, "1,1": 1, "2,1": 1},
        "action": {"alpha": {"1": [[1]]}, "gamma": {"0": [[1]]}},
    })


def triangle_pp(word=TRIANGLE_SHORT, F=None):
    return truncated_pp(triangle(), list(word), F)


def triangle_long_modules(A):
    """The three small CM modules appearing in V for the long triangle word."""
    X = module_from_literal(A, {"dims": {"0,1": 1}})
    Y = module_from_literal(A, {"dims": {"0,2": 1, "1,1": 1}, "action": {"alpha*": {"0": [[1]]}}})
    Z = module_from_literal(A, {"dims": {"0,1": 1, "0,2": 1}, "action": {"alpha": {"0": [[1]]}}})
    return X, Y, Z


def reflected_triangle_relations():
    """Quiver-with-relations of Pi(sigma_3 Q)_w for the long triangle word, named as
    the reflected arrows of ``sink_reflection``."""
    al, als, de, des, ep, eps = "alpha", "alpha*", "beta'", "beta'*", "gamma'", "gamma'*"
    Q = Quiver([1, 2, 3], [(al, 1, 2, 0), (als, 2, 1, 1), (de, 3, 2, 0), (des, 2, 3, 1),
                           (ep, 3, 1, 0), (eps, 1, 3, 1)])
    rels = [
        [(1, [al, als]), (-1, [eps, ep])],
        [(1, [als, al]), (1, [des, de])],
        [(1, [ep, eps])],
        [(1, [de, des])],
        [(1, [ep, al, des])],
        [(1, [de, als, eps])],
        [(1, [al, des])],
    ]
    return Q, rels


def triangle_long_relations():
    """Quiver-with-relations of Pi(Q)_w for the long triangle word."""
    al, als, be, bes, ga, gas = "alpha", "alpha*", "beta", "beta*", "gamma", "gamma*"
    Q = Quiver([1, 2, 3], [(al, 1, 2, 0), (be, 2, 3, 0), (ga, 1, 3, 0), (als, 2, 1, 1),
                           (bes, 3, 2, 1), (gas, 3, 1, 1)])
    rels = [
        [(1, [al, als]), (1, [ga, gas])],
        [(1, [als, al]), (-1, [be, bes])],
        [(1, [gas, ga])],
        [(1, [bes, be])],
        [(1, [gas, al, be])],
        [(1, [bes, als, ga])],
        [(1, [al, be])],
    ]
    return Q, rels


def one_ig_catalog(F=None):
    """Certified-finite algebras expected to be 1-IG: truncated preprojective
    algebras over small trees and the triangle, and trivial extensions of
    hereditary algebras by A and by D A."""
    F = F or Field()
    out = []
    pp = [
        (linear_quiver(2), (2, 1)),
        (linear_quiver(2), (1, 2, 1)),
        (linear_quiver(3), (1, 2, 3)),
        (linear_quiver(3), (2, 1, 3, 2)),
        (linear_quiver(3), (3, 2, 1, 3, 2, 3)),
        (Quiver([1, 2, 3], [("a", 2, 1), ("b", 2, 3)]), (1, 3, 2, 1)),
        (Quiver([1, 2, 3, 4], [("a", 1, 2), ("b", 3, 2), ("c", 4, 2)]), (2, 1, 3, 4, 2)),
        (Quiver([1, 2, 3, 4], [("a", 1, 2), ("b", 2, 3), ("c", 3, 4)]), (2, 1, 3, 2, 4, 3, 1, 2)),
        (triangle(), TRIANGLE_SHORT),
        (triangle(), TRIANGLE_LONG),
        (triangle(), (1, 2, 3, 1)),
    ]
    for Q, w in pp:
        A, _ = truncated_pp(Q, list(w), F)
        A.name = f"Pi({_quiver_name(Q)})_s{'s'.join(map(str, w))}"
        out.append(A)
    for n in (1, 2, 3):
        Lam = path_algebra(linear_quiver(n), F)
        Lam.name = f"KA{n}"
        out.append(trivial_extension(Lam, regular_bimodule(Lam), name=f"KA{n}+KA{n}"))
        out.append(trivial_extension(Lam, dual_bimodule(Lam), name=f"KA{n}+D(KA{n})"))
    Lam = path_algebra(Quiver([1, 2, 3], [("a", 2, 1), ("b", 2, 3)]), F)
    out.append(trivial_extension(Lam, dual_bimodule(Lam), name="KD3+D(KD3)"))
    return out


def _quiver_name(Q):
    return ",".join(f"{a.source}{a.target}" for a in Q.arrows) or "pt"


def tree_words(max_vertices=5, per_quiver=20, max_length=8, seed=0):
    """(Q, w) pairs: every tree quiver up to the given size with random reduced words."""
    rng = random.Random(seed)
    out = []
    for Q in tree_quivers(max_vertices):
        seen = set()
        tries = 0
        while len([w for q, w in out if q is Q]) < per_quiver and tries < 20 * per_quiver:
            tries += 1
            w = tuple(random_reduced_word(Q, rng.randint(1, max_length), rng))
            if w in seen and tries < 10 * per_quiver:
                continue
            seen.add(w)
            out.append((Q, w))
    return out


def _mini_quivers():
    yield Quiver([1], [("x", 1, 1, 1)]), lambda k: [[(1, ["x"] * k)]]
    yield Quiver([1], [("x", 1, 1, 1), ("y", 1, 1, 1)]), lambda k: (
        [[(1, ["x", "x"])], [(1, ["y", "y"])], [(1, ["x", "y"]), (1, ["y", "x"])]] if k == 2 else
        [[(1, ["x", "x"])], [(1, ["y", "y"])], [(1, ["y", "x"])]])
    yield Quiver([1], [("x", 1, 1, 1), ("y", 1, 1, 2)]), lambda k: [
        [(1, ["x", "x"])], [(1, ["y", "y"])], [(1, ["x", "y"])], [(1, ["y", "x"])]]
    yield Quiver([1, 2], [("a", 1, 2, 0)]), lambda k: []
    yield Quiver([1, 2], [("a", 1, 2, 0), ("b", 1, 2, 1)]), lambda k: []
    yield Quiver([1, 2], [("a", 1, 2, 0), ("b", 2, 1, 1)]), lambda k: [
        [(1, ["a", "b"] * (k // 2) + ["a"] * (k % 2))], [(1, ["b", "a"] * (k // 2) + ["b"] * (k % 2))]]
    yield Quiver([1, 2], [("a", 1, 2, 1), ("b", 2, 1, 1)]), lambda k: [
        [(1, ["a", "b"] * (k // 2) + ["a"] * (k % 2))], [(1, ["b", "a"] * (k // 2) + ["b"] * (k % 2))]]
    yield Quiver([1, 2, 3], [("a", 1, 2, 0), ("b", 2, 3, 1)]), lambda k: [[(1, ["a", "b"])]] if k == 2 else []
    yield Quiver([1, 2, 3], [("a", 1, 2, 1), ("b", 2, 3, 0), ("c", 3, 1, 1)]), lambda k: [
        [(1, ["a", "b"])], [(1, ["b", "c"])], [(1, ["c", "a"])]]
    yield Quiver([1, 2], [("x", 1, 1, 1), ("a", 1, 2, 0)]), lambda k: [[(1, ["x"] * k)], [(1, ["x", "a"])]]


def f2_mini_catalog(max_dim=8):
    """Small graded algebras over F_2 for the brute-force Ext oracle."""
    F = Field(2)
    D = dual_numbers(F)
    D.name = "K[x]/(x^2)"
    out = [counter_silting(F), D]
    seen = set()
    for q, (Q, rels) in enumerate(_mini_quivers()):
        for k in (2, 3, 4):
            try:
                A = algebra_from_relations(Q, rels(k), F, cap=12)
            except NotFiniteError:
                continue
            key = (q, tuple(A.graded_dims()), tuple(A.vertex_dims()))
            if A.dim <= max_dim and key not in seen:
                seen.add(key)
                A.name = f"mini{q}[{_quiver_name(Q)}]/{k}"
                out.append(A)
    return out
