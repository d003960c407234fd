"""Coxeter words over a quiver and the truncated preprojective algebras Pi(Q)_w."""
from collections import deque
from typing import NamedTuple

import numpy as np

from .algebra import Arr, GradedAlgebra, NotFiniteError, _layered, quotient_algebra
from .linalg import Field, IncrementalBasis, column_basis
from .quiver import double_quiver, is_acyclic, sink_reflection

HARD_CAP = 64


class CoxeterWord:
    """A word (i_1, ..., i_r) in the simple reflections of the Weyl group of |Q|."""

    def __init__(self, Q, entries):
        self.Q = Q
        self.entries = tuple(entries)
        for x in self.entries:
            if x not in Q.vertices:
                raise ValueError(f"{x} is not a vertex")
        self._roots = None

    def __repr__(self):
        return "s" + "s".join(map(str, self.entries)) if self.entries else "e"

    def __len__(self):
        return len(self.entries)

    def reflect(self, i, x):
        """s_i applied to a root-lattice vector x (dict vertex -> coefficient)."""
        Q = self.Q
        pair = sum(x.get(j, 0) * Q.edge_count(i, j) for j in Q.vertices if j != i)
        y = dict(x)
        y[i] = pair - x.get(i, 0)
        return y

    def roots(self):
        """beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k}) as integer vectors."""
        if self._roots is None:
            out = []
            for k, i in enumerate(self.entries):
                x = {i: 1}
                for j in reversed(self.entries[:k]):
                    x = self.reflect(j, x)
                out.append(tuple(x.get(v, 0) for v in self.Q.vertices))
            self._roots = out
        return self._roots

    def first_negative(self):
        """Index of the first non-positive root, or None for a reduced word."""
        for k, b in enumerate(self.roots()):
            if any(c < 0 for c in b):
                return k
        return None

    def is_reduced(self):
        return self.first_negative() is None

    def support(self):
        if not self.is_reduced():
            raise ValueError("word is not reduced")
        return set(self.entries)

    def root_height_total(self):
        return sum(sum(b) for b in self.roots())


def is_reduced(Q, word):
    return CoxeterWord(Q, word).is_reduced()


def braid_class(Q, word, limit=2000):
    """All words reachable by commutation and braid moves."""
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    while queue and len(seen) < limit:
        w = queue.popleft()
        for k in range(len(w) - 1):
            i, j = w[k], w[k + 1]
            if i != j and Q.edge_count(i, j) == 0:
                nxt = w[:k] + (j, i) + w[k + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for k in range(len(w) - 2):
            i, j, i2 = w[k], w[k + 1], w[k + 2]
            if i == i2 and i != j and Q.edge_count(i, j) == 1:
                nxt = w[:k] + (j, i, j) + w[k + 3:]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted(seen)


def random_reduced_word(Q, length, rng):
    """A reduced word built letter by letter; shorter if no letter extends it."""
    word = []
    for _ in range(length):
        letters = list(Q.vertices)
        rng.shuffle(letters)
        for x in letters:
            if CoxeterWord(Q, word + [x]).is_reduced():
                word.append(x)
                break
        else:
            break
    return word


# -- Pi(Q)_w ---------------------------------------------------------------------


class TruncationCertificate(NamedTuple):
    cap: int
    dim: int
    dim_below_cap: int
    root_height_total: int
    top_layer_in_ideal: bool

    @property
    def valid(self):
        return self.top_layer_in_ideal and self.dim == self.dim_below_cap == self.root_height_total


def _preprojective_relations(Qbar, arrows):
    """rho_x = sum_{s(a)=x} a a* - sum_{t(a)=x} a* a, for each vertex x."""
    name_idx = {a.name: k for k, a in enumerate(arrows)}
    rels = []
    for x in range(len(Qbar.vertices)):
        terms = []
        for k, a in enumerate(arrows):
            if a.degree != 0:
                continue
            star = name_idx[a.name + "*"]
            if a.source == x:
                terms.append((1, (k, star)))
            if a.target == x:
                terms.append((-1, (star, k)))
        if terms:
            rels.append((x, terms))
    return rels


def truncated_preprojective(Q, L, F):
    """Pi(Q) modulo paths of length > L."""
    Qbar = double_quiver(Q)
    arrows = [Arr(a.name, Qbar.index(a.source), Qbar.index(a.target), a.degree) for a in Qbar.arrows]
    rels = [(x, [(F(c), p) for c, p in terms]) for x, terms in _preprojective_relations(Qbar, arrows)]
    words, right, _ = _layered(F, len(Q.vertices), arrows, rels, L, truncate=True)
    return GradedAlgebra(F, Q.vertices, arrows, words, right, name=f"Pi<={L}", check=False)


def ideal_of_word(B, word_idx):
    """Per-vertex column bases of e_j I_w inside e_j B, for I_w = I_{i_1} ... I_{i_r}."""
    F = B.F
    X = [F.eye(B.vdim(j)) for j in range(B.n)]
    for i in reversed(word_idx):
        cols = [F.mm(B.left_matrix(a), X[arr.target])
                for a, arr in enumerate(B.arrows) if arr.source == i and X[arr.target].shape[1]]
        if cols:
            X[i] = column_basis(np.concatenate(cols, axis=1), F)[0]
        else:
            X[i] = F.zeros(B.vdim(i), 0)
    return X


def truncated_pp(Q, word, F=None, start_cap=None, hard_cap=HARD_CAP):
    """(Pi(Q)_w, TruncationCertificate), raising when no truncation certifies."""
    F = F or Field()
    w = word if isinstance(word, CoxeterWord) else CoxeterWord(Q, word)
    if not is_acyclic(Q):
        raise ValueError("quiver must be acyclic")
    k = w.first_negative()
    if k is not None:
        raise ValueError(f"word is not reduced (root {k + 1} is negative)")
    oracle = w.root_height_total()
    L = start_cap or max(2, 2 * len(w))
    idx = [Q.index(x) for x in w.entries]
    last = None
    while L <= hard_cap:
        B = truncated_preprojective(Q, L, F)
        X = ideal_of_word(B, idx)
        inside = True
        for j in range(B.n):
            basis = IncrementalBasis(F, B.vdim(j))
            for c in range(X[j].shape[1]):
                basis.add(X[j][:, c])
            for t, wd in enumerate(B.words[j]):
                if len(wd) == L and not basis.contains(B.unit_vector(j, t)):
                    inside = False
        dim = sum(B.vdim(j) - X[j].shape[1] for j in range(B.n))
        # dimension of B / (I_w + paths of length >= L)
        below = 0
        for j in range(B.n):
            basis = IncrementalBasis(F, B.vdim(j))
            for c in range(X[j].shape[1]):
                basis.add(X[j][:, c])
            for t, wd in enumerate(B.words[j]):
                if len(wd) >= L:
                    basis.add(B.unit_vector(j, t))
            below += B.vdim(j) - len(basis)
        cert = TruncationCertificate(L, dim, below, oracle, inside)
        last = cert
        if inside:
            if not cert.valid:
                raise NotFiniteError(f"truncation stabilized at dimension {dim} but the root-height "
                                     f"total is {oracle}")
            ideal = [[X[j][:, c] for c in range(X[j].shape[1])] for j in range(B.n)]
            A = quotient_algebra(B, ideal, name=f"Pi({w})")
            A.self_check()
            A._cache["pp"] = (Q, w)
            return A, cert
        L *= 2
    raise NotFiniteError(f"truncation not certified by cap {hard_cap}: {last}")


def restrict_to_support(Q, word):
    w = word if isinstance(word, CoxeterWord) else CoxeterWord(Q, word)
    sub = Q.full_subquiver(w.support())
    return sub, CoxeterWord(sub, w.entries)


def reflection_transport(Q, i, word):
    entries = word.entries if isinstance(word, CoxeterWord) else tuple(word)
    return CoxeterWord(sink_reflection(Q, i), entries)


# -- algebra maps given on arrows -------------------------------------------------


def _vertex_map(B, A):
    return {v: A.vertex_index(B.vertices[v]) for v in range(B.n)}


def arrow_map_images(B, A, images, vertex_map=None):
    """Images of all basis paths of B under the arrow assignment ``images``:
    B arrow index -> (coefficient, A arrow index) or None for zero."""
    F = A.F
    vm = vertex_map or _vertex_map(B, A)
    out = []
    for v in range(B.n):
        u = vm[v]
        imgs = []
        for w in B.words[v]:
            x = A.unit_vector(u, 0)
            for a in w:
                im = images[a]
                if im is None:
                    x = F.zeros(A.vdim(u))
                    break
                c, b = im
                x = F.red(A.act(u, x, b) * c)
            imgs.append(x)
        out.append(imgs)
    return out


def check_algebra_iso(B, A, images, vertex_map=None):
    """Whether the arrow assignment extends to an algebra isomorphism B -> A:
    images of basis paths form bases and respect multiplication by arrows.
    Vertices are matched by label unless ``vertex_map`` (B index -> A index) is given."""
    F = A.F
    if vertex_map is None and sorted(map(str, B.vertices)) != sorted(map(str, A.vertices)):
        return False
    if B.dim != A.dim or B.n != A.n:
        return False
    vm = vertex_map or _vertex_map(B, A)
    imgs = arrow_map_images(B, A, images, vm)
    for v in range(B.n):
        u = vm[v]
        basis = IncrementalBasis(F, A.vdim(u))
        if not all(basis.add(x) for x in imgs[v]):
            return False
        for j in range(B.vdim(v)):
            for a, arr in enumerate(B.arrows):
                if arr.source != B.wtarget[v][j]:
                    continue
                im = images[a]
                lhs = F.zeros(A.vdim(u)) if im is None else F.red(A.act(u, imgs[v][j], im[1]) * im[0])
                col = B.right[v][a][:, j]
                rhs = F.zeros(A.vdim(u))
                for i in np.flatnonzero(col != 0):
                    rhs = F.red(rhs + col[i] * imgs[v][i])
                if not F.is_zero(F.red(lhs - rhs)):
                    return False
    return True


def identity_arrow_images(B, A):
    names = {arr.name: k for k, arr in enumerate(A.arrows)}
    return [(A.F(1), names[arr.name]) if arr.name in names else None for arr in B.arrows]


def same_algebra(B, A):
    """Graded isomorphism matching arrows by name (degrees must agree)."""
    for arr in B.arrows:
        try:
            if A.arrows[A.arrow_index(arr.name)].degree != arr.degree:
                return False
        except KeyError:
            return False
    return check_algebra_iso(B, A, identity_arrow_images(B, A))


class MoritaWitness(NamedTuple):
    ok: bool
    images: dict            # B arrow name -> (coefficient, A arrow name)
    graded_dims_end: list   # dim Hom(P, P(k))_0 for k = 0..
    graded_dims_b: list


def reflection_morita_check(Q, i, word, F=None):
    """Pi(sigma_i Q)_w is isomorphic to End_A(e_i A(1) + (1-e_i)A) for A = Pi(Q)_w.

    The isomorphism sends a reflected arrow a' to -a*, (a')* to a and fixes the rest.
    It is checked to be an algebra isomorphism onto A, to shift degrees exactly as
    the endomorphism ring of P does, and the graded dimensions of End(P) computed
    from Hom spaces are compared with those of B."""
    from .module import dsum, hom_dim, projective, shift
    F = F or Field()
    A, _ = truncated_pp(Q, word, F)
    Q2 = sink_reflection(Q, i)
    B, _ = truncated_pp(Q2, word, F)
    reflected = {a.name for a in Q.arrows if a.target == i}
    names = {arr.name: k for k, arr in enumerate(A.arrows)}
    images, shown = [], {}
    for arr in B.arrows:
        nm = arr.name
        if nm.endswith("'*") and nm[:-2] in reflected:
            c, tgt = 1, nm[:-2]
        elif nm.endswith("'") and nm[:-1] in reflected:
            c, tgt = -1, nm[:-1] + "*"
        else:
            c, tgt = 1, nm
        if tgt not in names:
            images.append(None)
            continue
        images.append((F(c), names[tgt]))
        shown[nm] = (c, tgt)
    ok = check_algebra_iso(B, A, images)
    ii = A.vertex_index(i) if any(str(v) == str(i) for v in A.vertices) else None
    if ok:
        # degree bookkeeping: an element of e_s A e_t has degree deg_A + [t = i] - [s = i] in End(P)
        vm = _vertex_map(B, A)
        imgs = arrow_map_images(B, A, images)
        for v in range(B.n):
            u = vm[v]
            for j in range(B.vdim(v)):
                x = imgs[v][j]
                degs = {A.wdeg[u][k] for k in np.flatnonzero(x != 0)}
                t = vm[B.wtarget[v][j]]
                shift_ = (t == ii) - (u == ii)
                if degs != {B.wdeg[v][j] - shift_}:
                    ok = False
    parts = [shift(projective(A, v), 1) if v == ii else projective(A, v) for v in range(A.n)]
    P = dsum(*parts)
    lo = -A.ell - 1
    end_dims = {k: hom_dim(P, shift(P, k)) for k in range(lo, A.ell + 2)}
    end_dims = [end_dims.get(k, 0) for k in range(0, max(A.ell, B.ell) + 2)]
    b_dims = B.graded_dims() + [0] * (len(end_dims) - len(B.graded_dims()))
    neg = sum(hom_dim(P, shift(P, k)) for k in range(lo, 0))
    if end_dims != b_dims or neg:
        ok = False
    return MoritaWitness(ok, shown, end_dims, b_dims)
