"""Finite-dimensional non-negatively graded basic algebras.

An algebra is stored through its right regular representation: for every
vertex v a prefix-closed list of paths (tuples of arrow indices) forming a basis
of e_v A, and for every arrow a the matrix of right multiplication by a on e_v A.
Paths compose left to right, so e_v A is spanned by the paths starting at v.
"""
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .linalg import Field, IncrementalBasis, row_space
from .quiver import Quiver


class Arr(NamedTuple):
    name: str
    source: int
    target: int
    degree: int


class NotFiniteError(ValueError):
    pass


class GradedAlgebra:
    def __init__(self, F, vertices, arrows, words, right, name=None, check=True):
        self.F = F
        self.vertices = tuple(vertices)
        self.arrows = tuple(Arr(*a) for a in arrows)
        self.words = [list(map(tuple, ws)) for ws in words]
        self.right = right
        self.name = name or "A"
        self._cache = {}
        n = len(self.vertices)
        self.windex = [{w: j for j, w in enumerate(ws)} for ws in self.words]
        self.wtarget, self.wdeg, self.parent = [], [], []
        for v in range(n):
            ts, ds, ps = [], [], []
            for w in self.words[v]:
                t, d = v, 0
                for a in w:
                    if self.arrows[a].source != t:
                        raise ValueError(f"path {self.path_label(w)} is not composable")
                    t, d = self.arrows[a].target, d + self.arrows[a].degree
                ts.append(t)
                ds.append(d)
                ps.append(self.windex[v][w[:-1]] if w else -1)
            self.wtarget.append(ts)
            self.wdeg.append(ds)
            self.parent.append(ps)
        if check:
            self._check_shape()

    # basic data

    @property
    def n(self):
        return len(self.vertices)

    def vdim(self, v):
        return len(self.words[v])

    @property
    def dim(self):
        return sum(len(w) for w in self.words)

    @property
    def ell(self):
        return max((d for ds in self.wdeg for d in ds), default=0)

    def graded_dims(self):
        out = [0] * (self.ell + 1)
        for ds in self.wdeg:
            for d in ds:
                out[d] += 1
        return out

    def vertex_dims(self):
        return [len(w) for w in self.words]

    def path_label(self, w, v=None):
        if not w:
            return f"e{self.vertices[v]}" if v is not None else "e"
        return "".join(self.arrows[a].name if len(self.arrows[a].name) == 1
                       else f"({self.arrows[a].name})" for a in w)

    def basis_labels(self):
        return [(self.vertices[v], self.path_label(w, v), self.vertices[self.wtarget[v][j]], self.wdeg[v][j])
                for v in range(self.n) for j, w in enumerate(self.words[v])]

    def arrow_index(self, name):
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise KeyError(name)

    def vertex_index(self, label):
        for k, v in enumerate(self.vertices):
            if v == label or str(v) == str(label):
                return k
        raise KeyError(label)

    def __repr__(self):
        return f"GradedAlgebra({self.name}, dim={self.dim}, ell={self.ell}, vertices={list(self.vertices)})"

    def _check_shape(self):
        for v in range(self.n):
            if not self.words[v] or self.words[v][0] != ():
                raise ValueError("the first basis path of e_v A must be e_v")
            for j, w in enumerate(self.words[v]):
                if w and w[:-1] not in self.windex[v]:
                    raise ValueError("basis paths must be prefix closed")
        for k, a in enumerate(self.arrows):
            if (k,) not in self.windex[a.source]:
                raise ValueError(f"arrow {a.name} is not a basis element")

    # multiplication

    def act(self, v, vec, a):
        return self.F.mm(self.right[v][a], vec)

    def act_word(self, v, vec, word):
        for a in word:
            vec = self.F.mm(self.right[v][a], vec)
        return vec

    def unit_vector(self, v, j):
        e = self.F.zeros(self.vdim(v))
        e[j] = self.F(1)
        return e

    def product(self, v, j, u, k):
        """words[v][j] * words[u][k] as a vector in e_v A."""
        if self.wtarget[v][j] != u:
            return self.F.zeros(self.vdim(v))
        return self.act_word(v, self.unit_vector(v, j), self.words[u][k])

    def left_matrix(self, a):
        """Left multiplication by arrow a, as a map e_{t(a)}A -> e_{s(a)}A."""
        key = ("left", a)
        if key not in self._cache:
            s, t = self.arrows[a].source, self.arrows[a].target
            m = self.F.zeros(self.vdim(s), self.vdim(t))
            m[:, 0] = self.unit_vector(s, self.windex[s][(a,)])
            for j in range(1, self.vdim(t)):
                w = self.words[t][j]
                m[:, j] = self.act(s, m[:, self.parent[t][j]], w[-1])
            self._cache[key] = m
        return self._cache[key]

    def left_multiplier(self, v, j):
        """Left multiplication by words[v][j]: e_{t}A -> e_vA, t its target."""
        t = self.wtarget[v][j]
        m = self.F.zeros(self.vdim(v), self.vdim(t))
        m[:, 0] = self.unit_vector(v, j)
        for k in range(1, self.vdim(t)):
            m[:, k] = self.act(v, m[:, self.parent[t][k]], self.words[t][k][-1])
        return m

    def self_check(self):
        """Associativity on basis triples: left multiplication by every basis
        element commutes with right multiplication by every arrow."""
        F = self.F
        for u in range(self.n):
            for j in range(self.vdim(u)):
                t = self.wtarget[u][j]
                phi = self.left_multiplier(u, j)
                for a, arr in enumerate(self.arrows):
                    lhs = F.mm(self.right[u][a], phi)
                    rhs = F.mm(phi, self.right[t][a])
                    if not F.is_zero(F.red(lhs - rhs)):
                        raise ValueError(f"associativity fails for {self.path_label(self.words[u][j], u)}"
                                         f" and arrow {arr.name}")
        for v in range(self.n):
            for a, arr in enumerate(self.arrows):
                m = self.right[v][a]
                for j in range(self.vdim(v)):
                    col = np.flatnonzero(m[:, j] != 0)
                    for i in col:
                        if (self.wtarget[v][j] != arr.source or self.wtarget[v][i] != arr.target
                                or self.wdeg[v][i] != self.wdeg[v][j] + arr.degree):
                            raise ValueError("right action does not respect the grading")
        return True

    # derived algebras

    def op(self):
        if "op" not in self._cache:
            B = opposite(self)
            B._cache["op"] = self
            self._cache["op"] = B
        return self._cache["op"]

    def degree_zero(self):
        if "A0" not in self._cache:
            keep = [k for k, a in enumerate(self.arrows) if a.degree == 0]
            ren = {k: i for i, k in enumerate(keep)}
            words, right = [], []
            for v in range(self.n):
                idx = [j for j in range(self.vdim(v)) if self.wdeg[v][j] == 0]
                words.append([tuple(ren[a] for a in self.words[v][j]) for j in idx])
                right.append({ren[a]: self.right[v][a][np.ix_(idx, idx)] for a in keep})
            arrows = [self.arrows[k] for k in keep]
            self._cache["A0"] = GradedAlgebra(self.F, self.vertices, arrows, words, right,
                                              name=self.name + "_0")
        return self._cache["A0"]

    def radical(self):
        """Basis of the Jacobson radical: every basis path of positive length."""
        return [(v, j) for v in range(self.n) for j in range(1, self.vdim(v))]

    def structure_dump(self):
        """Deterministic text listing of basis and products with arrows."""
        F = self.F
        lines = [f"algebra {self.name} over {F.name}: dim {self.dim}, top degree {self.ell}"]
        for v in range(self.n):
            for j, w in enumerate(self.words[v]):
                lines.append(f"  [{self.vertices[v]}:{j}] {self.path_label(w, v)} -> "
                             f"{self.vertices[self.wtarget[v][j]]} deg {self.wdeg[v][j]}")
        for v in range(self.n):
            for a, arr in enumerate(self.arrows):
                m = self.right[v][a]
                for j in range(self.vdim(v)):
                    if self.wtarget[v][j] != arr.source:
                        continue
                    terms = [f"{F.to_str(m[i, j])}*{self.path_label(self.words[v][i], v)}"
                             for i in np.flatnonzero(m[:, j] != 0)]
                    lhs = self.path_label(self.words[v][j], v)
                    lines.append(f"  {lhs} . {arr.name} = {' + '.join(terms) or '0'}")
        return "\n".join(lines)


# -- generic construction: monomial basis inside an ambient representation ------


def _monomialize(F, n, arrows, ambient, start, ops, seed=None):
    """Choose prefix-closed path bases.

    For every vertex v, ``ops[v][a]`` is right multiplication by arrow a on an
    ambient space of dimension ``ambient[v]`` containing e_v (vector ``start[v]``);
    ``seed[v]`` spans a subspace to quotient out. Returns (words, right, vecs).
    """
    words, right, vecs_all = [], [], []
    for v in range(n):
        basis = IncrementalBasis(F, ambient[v])
        nseed = 0
        for s in (seed[v] if seed else []):
            if basis.add(s):
                nseed += 1
        ws, vecs, targets = [], [], []
        if basis.add(start[v]):
            ws.append(())
            vecs.append(start[v])
            targets.append(v)
        i = 0
        while i < len(ws):
            for a, arr in enumerate(arrows):
                if arr.source != targets[i]:
                    continue
                u = F.mm(ops[v][a], vecs[i])
                if basis.add(u):
                    ws.append(ws[i] + (a,))
                    vecs.append(u)
                    targets.append(arr.target)
            i += 1
        if nseed + len(ws) != ambient[v]:
            raise ValueError("arrows do not generate the algebra")
        r = {}
        for a in range(len(arrows)):
            m = F.zeros(len(ws), len(ws))
            for j in range(len(ws)):
                if targets[j] != arrows[a].source:
                    continue
                c = basis.coords(F.mm(ops[v][a], vecs[j]))
                m[:, j] = c[nseed:]
            r[a] = m
        words.append(ws)
        right.append(r)
        vecs_all.append(vecs)
    return words, right, vecs_all


def _drop_empty(F, vertices, arrows, words, right, name, check=True):
    """Remove vertices whose idempotent vanished and arrows that are not basis paths."""
    keepv = [v for v in range(len(vertices)) if words[v]]
    keepa = [a for a, arr in enumerate(arrows)
             if arr.source in keepv and (a,) in set(words[arr.source])]
    rv = {v: i for i, v in enumerate(keepv)}
    ra = {a: i for i, a in enumerate(keepa)}
    new_words, new_right = [], []
    for v in keepv:
        if any(a not in ra for w in words[v] for a in w):
            raise ValueError("a basis path uses a dropped arrow")
        new_words.append([tuple(ra[a] for a in w) for w in words[v]])
        new_right.append({ra[a]: right[v][a] for a in keepa})
    new_arrows = [Arr(arrows[a].name, rv[arrows[a].source], rv[arrows[a].target], arrows[a].degree)
                  for a in keepa]
    return GradedAlgebra(F, [vertices[v] for v in keepv], new_arrows, new_words, new_right,
                         name=name, check=check)


def quotient_algebra(B, ideal, name=None):
    """B / I for a two-sided ideal I given by spanning vectors ``ideal[v]`` of e_v I."""
    F = B.F
    # decide first which arrows survive, so bases only use surviving arrows
    alive = []
    for a, arr in enumerate(B.arrows):
        s = arr.source
        basis = IncrementalBasis(F, B.vdim(s))
        for x in ideal[s]:
            basis.add(x)
        basis.add(B.unit_vector(s, 0))
        for b in alive:
            if B.arrows[b].source == s:
                basis.add(B.unit_vector(s, B.windex[s][(b,)]))
        if basis.add(B.unit_vector(s, B.windex[s][(a,)])):
            alive.append(a)
    arrows = [B.arrows[a] for a in alive]
    ops = [{i: B.right[v][a] for i, a in enumerate(alive)} for v in range(B.n)]
    start = [B.unit_vector(v, 0) for v in range(B.n)]
    words, right, _ = _monomialize(F, B.n, arrows, [B.vdim(v) for v in range(B.n)], start, ops,
                                   seed=ideal)
    return _drop_empty(F, B.vertices, arrows, words, right, name or B.name)


# -- quivers with relations ------------------------------------------------------


def _parse_coef(F, c):
    if isinstance(c, str):
        return F(Fraction(c.strip()))
    return F(c)


def _resolve_relations(Q, relations, F):
    idx = {a.name: k for k, a in enumerate(Q.arrows)}
    out = []
    for r, rel in enumerate(relations):
        terms = []
        key = None
        for t in rel:
            if isinstance(t, dict):
                coef, path = t.get("coef", 1), t["path"]
            else:
                coef, path = t
            if isinstance(path, str):
                path = [path]
            for nm in path:
                if nm not in idx:
                    raise ValueError(f"relation {r}: unknown arrow {nm!r}")
            p = tuple(idx[nm] for nm in path)
            if len(p) < 2:
                raise ValueError(f"relation {r}: paths must have length at least 2")
            for x, y in zip(p, p[1:]):
                if Q.arrows[x].target != Q.arrows[y].source:
                    raise ValueError(f"relation {r}: path {'.'.join(path)} is not composable")
            s, t_ = Q.index(Q.arrows[p[0]].source), Q.index(Q.arrows[p[-1]].target)
            deg = sum(Q.arrows[a].degree for a in p)
            if key is None:
                key = (s, t_, deg)
            elif key != (s, t_, deg):
                raise ValueError(f"relation {r} is not homogeneous")
            c = _parse_coef(F, coef)
            if c != 0:
                terms.append((c, p))
        if terms:
            out.append((key[0], terms))
    return out


def _quiver_arrows(Q):
    return [Arr(a.name, Q.index(a.source), Q.index(a.target), a.degree) for a in Q.arrows]


def _layered(F, n, arrows, relations, cap, truncate=False):
    """Path-length layered normal forms for relations that are each length homogeneous.

    Returns (words, right, finite) where ``finite`` says some layer <= cap vanished.
    In truncate mode, layer cap+1 is declared zero.
    """
    words, right = [], []
    finite = True
    for v in range(n):
        ws, tg = [()], [v]
        sparse = {}            # (j, a) -> {i: coef}
        layers = [[0]]
        depth = 0
        while True:
            depth += 1
            prev = layers[-1]
            cands = [(j, a) for j in prev for a, arr in enumerate(arrows) if arr.source == tg[j]]
            if not cands:
                layers.append([])
                break
            if depth > cap:
                if not truncate:
                    finite = False
                for c in cands:
                    sparse[c] = {}
                break
            col = {c: k for k, c in enumerate(cands)}
            m = len(cands)
            rows = []
            for x, terms in relations:
                lens = {len(p) for _, p in terms}
                if max(lens) > depth:
                    continue
                L = lens.pop()
                src_layer = layers[depth - L]
                for j0 in src_layer:
                    if tg[j0] != x:
                        continue
                    row = F.zeros(m)
                    for c, p in terms:
                        cur = {j0: F(1)}
                        for a in p[:-1]:
                            nxt = {}
                            for j, cj in cur.items():
                                for i, ci in sparse.get((j, a), {}).items():
                                    nxt[i] = F.red(nxt.get(i, F(0)) + cj * ci)
                            cur = {i: x_ for i, x_ in nxt.items() if x_ != 0}
                        for j, cj in cur.items():
                            k = col[(j, p[-1])]
                            row[k] = F.red(row[k] + c * cj)
                    if not F.is_zero(row):
                        rows.append(row)
            # pivot on later candidates so the earliest ones become normal forms
            if rows:
                R, piv = row_space([r[::-1] for r in rows], F, m)
                piv_c = [m - 1 - p for p in piv]
            else:
                R, piv_c = F.zeros(0, m), []
            pset = set(piv_c)
            layer = []
            for k, (j, a) in enumerate(cands):
                if k not in pset:
                    sparse[(j, a)] = {len(ws): F(1)}
                    layer.append(len(ws))
                    ws.append(ws[j] + (a,))
                    tg.append(arrows[a].target)
            basis_of = {k: ws_i for k, ws_i in zip([k for k in range(m) if k not in pset], layer)}
            for r_i, pc in enumerate(piv_c):
                rrow = R[r_i][::-1]
                expr = {}
                for k in range(m):
                    if k != pc and rrow[k] != 0:
                        expr[basis_of[k]] = F.red(-rrow[k])
                sparse[cands[pc]] = expr
            layers.append(layer)
            if not layer:
                break
        nv = len(ws)
        r = {}
        for a, arr in enumerate(arrows):
            mat = F.zeros(nv, nv)
            for j in range(nv):
                for i, c in sparse.get((j, a), {}).items():
                    mat[i, j] = c
            r[a] = mat
        words.append(ws)
        right.append(r)
    return words, right, finite


def algebra_from_relations(Q, relations, F=None, cap=24, name=None):
    """K Q / (relations) for a graded quiver Q, certified finite-dimensional.

    ``relations`` is a list of linear combinations, each a list of
    (coefficient, [arrow names]) pairs or {"coef", "path"} dicts.
    """
    F = F or Field()
    arrows = _quiver_arrows(Q)
    rels = _resolve_relations(Q, relations, F)
    mixed = any(len({len(p) for _, p in terms}) > 1 for _, terms in rels)
    if not mixed:
        words, right, finite = _layered(F, len(Q.vertices), arrows, rels, cap)
        if not finite:
            raise NotFiniteError(f"not finite-dimensional at cap {cap}")
        A = GradedAlgebra(F, Q.vertices, arrows, words, right, name=name)
        A.self_check()
        return A
    return _mixed_relations(Q, arrows, rels, F, cap, name)


def _mixed_relations(Q, arrows, rels, F, cap, name):
    # Free algebra truncated at L, ideal closed under the right action; valid when
    # the ideal contains all long paths, which the certificate checks.
    start = max(len(p) for _, terms in rels for _, p in terms) + 1
    for L in range(start, cap + 1):
        words, right, _ = _layered(F, len(Q.vertices), arrows, [], L, truncate=True)
        B = GradedAlgebra(F, Q.vertices, arrows, words, right, check=False)
        ideal = []
        for v in range(B.n):
            basis = IncrementalBasis(F, B.vdim(v))
            gens = []
            for x, terms in rels:
                for j in range(B.vdim(v)):
                    if B.wtarget[v][j] != x:
                        continue
                    vec = F.zeros(B.vdim(v))
                    for c, p in terms:
                        vec = F.red(vec + c * B.act_word(v, B.unit_vector(v, j), p))
                    if basis.add(vec):
                        gens.append(vec)
            k = 0
            while k < len(gens):
                for a in range(len(arrows)):
                    u = B.act(v, gens[k], a)
                    if basis.add(u):
                        gens.append(u)
                k += 1
            ideal.append(gens)
        top = all(basis_contains(F, B.vdim(v), ideal[v], B.unit_vector(v, j))
                  for v in range(B.n) for j in range(B.vdim(v)) if len(B.words[v][j]) == L)
        if top:
            A = quotient_algebra(B, ideal, name)
            A.self_check()
            return A
    raise NotFiniteError(f"not finite-dimensional at cap {cap}")


def basis_contains(F, n, vecs, v):
    b = IncrementalBasis(F, n)
    for x in vecs:
        b.add(x)
    return b.coords(v) is not None


def path_algebra(Q, F=None, cap=24):
    return algebra_from_relations(Q, [], F, cap)


# -- structure constants ---------------------------------------------------------


def from_structure(F, vertices, elems, idem, mult, labels=None, name=None, arrow_hint=None):
    """Algebra from a vertex-pure basis.

    ``elems[i] = (source, target, degree)`` with vertex indices, ``idem[v]`` the
    element index of e_v, ``mult(i, j)`` the product as {k: coef}. The radical
    must be spanned by the non-idempotent elements. Returns the algebra and, for
    each of its arrows, the element index it came from.
    """
    n = len(vertices)
    labels = labels or [str(i) for i in range(len(elems))]
    local = [[i for i, e in enumerate(elems) if e[0] == v] for v in range(n)]
    pos = {}
    for v in range(n):
        for k, i in enumerate(local[v]):
            pos[i] = k
    idset = set(idem)
    rad = [i for i in range(len(elems)) if i not in idset]

    def vec(v, d):
        x = F.zeros(len(local[v]))
        for k, c in d.items():
            x[pos[k]] = F.red(x[pos[k]] + F(c))
        return x

    # arrows: radical elements spanning rad / rad^2
    chosen = []
    for v in range(n):
        basis = IncrementalBasis(F, len(local[v]))
        for i in local[v]:
            if i in idset:
                continue
            for j in rad:
                if elems[i][1] == elems[j][0]:
                    basis.add(vec(v, mult(i, j)))
        cand = [i for i in local[v] if i not in idset]
        cand.sort(key=lambda i: (elems[i][2], arrow_hint(i) if arrow_hint else 0, i))
        for i in cand:
            if basis.add(vec(v, {i: 1})):
                chosen.append(i)
    chosen.sort(key=lambda i: (elems[i][0], elems[i][1], elems[i][2], i))
    arrows = [Arr(labels[i], elems[i][0], elems[i][1], elems[i][2]) for i in chosen]
    ops = []
    for v in range(n):
        r = {}
        for a, i in enumerate(chosen):
            m = F.zeros(len(local[v]), len(local[v]))
            for k, j in enumerate(local[v]):
                if elems[j][1] == elems[i][0]:
                    m[:, k] = vec(v, mult(j, i))
            r[a] = m
        ops.append(r)
    start = [vec(v, {idem[v]: 1}) for v in range(n)]
    words, right, vecs = _monomialize(F, n, arrows, [len(l) for l in local], start, ops)
    A = GradedAlgebra(F, vertices, arrows, words, right, name=name)
    A._cache["origin_vectors"] = (local, vecs)
    return A, chosen


def _word_mult(A):
    """mult(i, j) on the flat basis of A, flat index = offset[v] + j."""
    off, flat = [], []
    k = 0
    for v in range(A.n):
        off.append(k)
        for j in range(A.vdim(v)):
            flat.append((v, j))
        k += A.vdim(v)

    def mult(i, j):
        v, a = flat[i]
        u, b = flat[j]
        x = A.product(v, a, u, b)
        return {off[v] + t: x[t] for t in np.flatnonzero(x != 0)}

    elems = [(v, A.wtarget[v][j], A.wdeg[v][j]) for v, j in flat]
    return elems, flat, off, mult


def opposite(A):
    elems, flat, off, mult = _word_mult(A)
    op_elems = [(t, s, d) for s, t, d in elems]
    idem = [off[v] for v in range(A.n)]
    labels = [A.arrows[A.words[v][j][0]].name if len(A.words[v][j]) == 1 else A.path_label(A.words[v][j], v)
              for v, j in flat]
    B, _ = from_structure(A.F, A.vertices, op_elems, idem, lambda i, j: mult(j, i), labels,
                          name=A.name + "^op")
    return B


class Bimodule:
    """A bimodule over (left algebra, right algebra) with a vertex-pure basis.

    ``elems[c] = (source, target, degree)``; ``left[a]`` is the matrix of
    c -> a.c for each arrow a of the left algebra, ``right[a]`` of c -> c.a.
    """

    def __init__(self, left_alg, right_alg, elems, left, right, labels=None):
        self.L, self.R = left_alg, right_alg
        self.elems = list(elems)
        self.left, self.right = left, right
        self.labels = labels or [str(i) for i in range(len(elems))]
        self.F = left_alg.F

    @property
    def dim(self):
        return len(self.elems)

    def left_word(self, vec, v, word):
        """(path from vertex v) . vec"""
        for a in reversed(word):
            vec = self.F.mm(self.left[a], vec)
        mask = self.F.zeros(self.dim)
        for c, e in enumerate(self.elems):
            if e[0] == v:
                mask[c] = vec[c]
        return mask if not word else vec

    def right_word(self, vec, v, word):
        if not word:
            out = self.F.zeros(self.dim)
            for c, e in enumerate(self.elems):
                if e[1] == v:
                    out[c] = vec[c]
            return out
        for a in word:
            vec = self.F.mm(self.right[a], vec)
        return vec

    def check(self):
        """(x.c).y = x.(c.y) on arrows x, y."""
        F = self.F
        for a in self.left:
            for b in self.right:
                lhs = F.mm(self.right[b], self.left[a])
                rhs = F.mm(self.left[a], self.right[b])
                if not F.is_zero(F.red(lhs - rhs)):
                    return False
        return True


def regular_bimodule(A, shift=1):
    """A as an A-A bimodule placed in degree ``shift``."""
    elems, flat, off, mult = _word_mult(A)
    F = A.F
    N = len(elems)
    left, right = {}, {}
    for a, arr in enumerate(A.arrows):
        ia = off[arr.source] + A.windex[arr.source][(a,)]
        lm, rm = F.zeros(N, N), F.zeros(N, N)
        for j in range(N):
            for k, c in mult(ia, j).items():
                lm[k, j] = c
            for k, c in mult(j, ia).items():
                rm[k, j] = c
        left[a], right[a] = lm, rm
    return Bimodule(A, A, [(s, t, shift) for s, t, _ in elems], left, right,
                    [A.path_label(A.words[v][j], v) for v, j in flat])


def dual_bimodule(A, shift=1):
    """D A = Hom_K(A, K) as an A-A bimodule placed in degree ``shift``."""
    R = regular_bimodule(A, shift)
    left = {a: m.T.copy() for a, m in R.right.items()}
    right = {a: m.T.copy() for a, m in R.left.items()}
    return Bimodule(A, A, [(t, s, shift) for s, t, _ in R.elems], left, right,
                    [f"D{lab}" for lab in R.labels])


def trivial_extension(Lam, C, name=None):
    """Lambda + C with C in degree 1 and C.C = 0."""
    if Lam.ell != 0:
        raise ValueError("the base algebra must be concentrated in degree 0")
    F = Lam.F
    elems, flat, off, mult = _word_mult(Lam)
    nl = len(elems)
    all_elems = elems + [(s, t, 1) for s, t, _ in C.elems]
    labels = [Lam.path_label(Lam.words[v][j], v) for v, j in flat] + list(C.labels)
    idem = [off[v] for v in range(Lam.n)]

    def m(i, j):
        if i < nl and j < nl:
            return mult(i, j)
        if i >= nl and j >= nl:
            return {}
        if i < nl:
            v, w = flat[i]
            x = F.zeros(C.dim)
            x[j - nl] = F(1)
            y = C.left_word(x, v, Lam.words[v][w])
        else:
            v, w = flat[j]
            x = F.zeros(C.dim)
            x[i - nl] = F(1)
            y = C.right_word(x, v, Lam.words[v][w])
        return {nl + k: y[k] for k in np.flatnonzero(y != 0)}

    A, chosen = from_structure(F, Lam.vertices, all_elems, idem, m, labels,
                               name=name or f"T({Lam.name})")
    A._cache["te_parts"] = (nl, chosen)
    return A


def beilinson(A):
    """The upper triangular Beilinson algebra and the lower triangular bimodule.

    Vertices are pairs (p, v) with 0 <= p < ell. The entry (p, q) of the
    algebra holds A_{q-p}; the bimodule entry (p, q), q <= p, holds A_{ell+q-p}.
    """
    ell = A.ell
    if ell < 1:
        raise ValueError("the Beilinson construction needs ell >= 1")
    F = A.F
    verts = [(p, v) for p in range(ell) for v in range(A.n)]
    vid = {x: i for i, x in enumerate(verts)}
    nab, delta = [], []
    for p in range(ell):
        for q in range(ell):
            for v in range(A.n):
                for j in range(A.vdim(v)):
                    d = A.wdeg[v][j]
                    if q >= p and d == q - p:
                        nab.append((p, q, v, j))
                    if q <= p and d == ell + q - p:
                        delta.append((p, q, v, j))
    nidx = {x: i for i, x in enumerate(nab)}
    didx = {x: i for i, x in enumerate(delta)}

    def prod(x, y, target):
        p, q, v, j = x
        q2, r, u, k = y
        if q != q2 or A.wtarget[v][j] != u:
            return {}
        vec = A.product(v, j, u, k)
        out = {}
        for t in np.flatnonzero(vec != 0):
            key = (p, r, v, int(t))
            if key in target:
                out[target[key]] = vec[t]
        return out

    elems = [(vid[(p, v)], vid[(q, A.wtarget[v][j])], 0) for p, q, v, j in nab]
    idem = [nidx[(p, p, v, 0)] for p, v in verts]
    labels = [f"{A.path_label(A.words[v][j], v)}@{p}{q}" for p, q, v, j in nab]
    N, chosen = from_structure(F, verts, elems, idem, lambda i, j: prod(nab[i], nab[j], nidx),
                               labels, name=f"nabla({A.name})")
    D = len(delta)
    left, right = {}, {}
    for a, i in enumerate(chosen):
        lm, rm = F.zeros(D, D), F.zeros(D, D)
        for c in range(D):
            for k, x in prod(nab[i], delta[c], didx).items():
                lm[k, c] = x
            for k, x in prod(delta[c], nab[i], didx).items():
                rm[k, c] = x
        left[a], right[a] = lm, rm
    C = Bimodule(N, N, [(vid[(p, v)], vid[(q, A.wtarget[v][j])], 1) for p, q, v, j in delta],
                 left, right, [f"{A.path_label(A.words[v][j], v)}@{p}{q}" for p, q, v, j in delta])
    C.origin = delta
    N._cache["beilinson_origin"] = [nab[i] for i in chosen]
    return N, C


def quasi_veronese(A):
    """The quasi-Veronese algebra: trivial extension of the Beilinson algebra.

    Each arrow remembers the (p, q, v, j) entry it came from, which is what the
    qv functor on modules needs.
    """
    N, C = beilinson(A)
    B = trivial_extension(N, C, name=f"{A.name}^[{A.ell}]")
    nl, chosen = B._cache["te_parts"]
    origin = []
    elems, flat, off, _ = _word_mult(N)
    n_origin = N._cache["beilinson_origin"]
    for i in chosen:
        if i < nl:
            v, j = flat[i]
            w = N.words[v][j]
            if len(w) != 1:
                raise AssertionError("arrow of the quasi-Veronese algebra is not an arrow of nabla")
            origin.append(n_origin[w[0]])
        else:
            origin.append(C.origin[i - nl])
    B._cache["qv_origin"] = origin
    B._cache["qv_base"] = A
    return B


def field_algebra(F=None):
    return algebra_from_relations(Quiver([1]), [], F)


def dual_numbers(F=None, degree=1):
    Q = Quiver([1], [("x", 1, 1, degree)])
    return algebra_from_relations(Q, [[(1, ["x", "x"])]], F)
