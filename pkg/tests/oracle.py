"""Brute-force graded Ext over F_2, independent of the main engine's resolutions.

Only the algebra's basis paths and right-multiplication tables are shared. Modules
are flat F_2 vector spaces with homogeneous basis vectors; covers take greedy
(not necessarily minimal) generating sets; Ext comes from ranks of the Hom
cochain complex. All elimination is plain numpy mod 2."""
import numpy as np


def _rref_rank(m):
    m = m.copy() % 2
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        if r == rows:
            break
    return m, r


def rank2(m):
    if m.size == 0:
        return 0
    return _rref_rank(m.astype(np.uint8))[1]


def nullspace2(m):
    """Columns spanning {x : m x = 0}."""
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.uint8)
    red, r = _rref_rank(m.astype(np.uint8))
    pivots = []
    for i in range(r):
        pivots.append(int(np.flatnonzero(red[i])[0]))
    free = [c for c in range(cols) if c not in pivots]
    out = np.zeros((cols, len(free)), dtype=np.uint8)
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, p in enumerate(pivots):
            out[p, k] = red[i, f]
    return out


class Span:
    def __init__(self, n):
        self.n = n
        self.rows = {}

    def reduce(self, v):
        v = v.copy() % 2
        for p, row in self.rows.items():
            if v[p]:
                v ^= row
        return v

    def add(self, v):
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if not len(nz):
            return False
        p = int(nz[0])
        for q in self.rows:
            if self.rows[q][p]:
                self.rows[q] ^= v
        self.rows[p] = v
        return True

    def contains(self, v):
        return not self.reduce(v).any()


class Rep:
    """F_2 module: ``basis[k] = (degree, vertex)`` and full action matrices."""

    def __init__(self, A, basis, act):
        self.A, self.basis, self.act = A, basis, act

    @property
    def dim(self):
        return len(self.basis)

    def slice(self, key):
        return [k for k, b in enumerate(self.basis) if b == key]

    def times_path(self, x, path):
        for a in path:
            x = self.act[a] @ x % 2
        return x


def rep_from_module(M):
    A = M.A
    basis, offs = [], {}
    for key, n in M.dims.items():
        offs[key] = len(basis)
        basis += [key] * n
    N = len(basis)
    act = {}
    for a, arr in enumerate(A.arrows):
        m = np.zeros((N, N), dtype=np.uint8)
        for (d, v), n in M.dims.items():
            if v != arr.source:
                continue
            tgt = (d + arr.degree, arr.target)
            if tgt not in offs:
                continue
            blk = np.array([[int(x) for x in row] for row in M.block(a, d)], dtype=np.uint8).reshape(
                M.d(tgt), n)
            m[offs[tgt]:offs[tgt] + M.d(tgt), offs[(d, v)]:offs[(d, v)] + n] = blk % 2
        act[a] = m
    return Rep(A, basis, act)


class Free:
    """sum_g e_{v_g} A(-d_g) with basis (generator, basis path)."""

    def __init__(self, A, gens):
        self.A, self.gens = A, gens
        self.offs, basis = [], []
        for d, v in gens:
            self.offs.append(len(basis))
            basis += [(d + A.wdeg[v][j], A.wtarget[v][j]) for j in range(A.vdim(v))]
        N = len(basis)
        act = {}
        for a in range(len(A.arrows)):
            m = np.zeros((N, N), dtype=np.uint8)
            for g, (d, v) in enumerate(gens):
                o, n = self.offs[g], A.vdim(v)
                blk = np.array([[int(x) for x in row] for row in A.right[v][a]], dtype=np.uint8)
                m[o:o + n, o:o + n] = blk.reshape(n, n) % 2
            act[a] = m
        self.rep = Rep(A, basis, act)

    def map_to(self, target, images):
        """Matrix of the map sending generator g to ``images[g]`` in ``target``."""
        A = self.A
        m = np.zeros((target.dim, self.rep.dim), dtype=np.uint8)
        for g, (d, v) in enumerate(self.gens):
            for j, w in enumerate(A.words[v]):
                m[:, self.offs[g] + j] = target.times_path(images[g], w)
        return m


def _generated(rep, vectors):
    span = Span(rep.dim)
    todo = list(vectors)
    while todo:
        x = todo.pop()
        if span.add(x):
            todo += [rep.act[a] @ x % 2 for a in rep.act]
    return span


def greedy_cover(rep, vectors):
    """Generators chosen from homogeneous ``vectors`` in degree order until they
    generate the submodule spanned by all of them."""
    chosen, keys = [], []
    span = Span(rep.dim)
    order = sorted(range(len(vectors)), key=lambda k: vectors[k][0])
    for k in order:
        key, x = vectors[k]
        if span.contains(x):
            continue
        chosen.append(x)
        keys.append(key)
        span = _generated(rep, chosen)
    return keys, chosen


def _homogeneous_kernel(P, m):
    out = []
    for key in sorted(set(P.rep.basis)):
        idx = P.rep.slice(key)
        K = nullspace2(m[:, idx])
        for c in range(K.shape[1]):
            x = np.zeros(P.rep.dim, dtype=np.uint8)
            x[idx] = K[:, c]
            out.append((key, x))
    return out


def resolve(M, length):
    """[(Free P_k, matrix P_k -> P_{k-1} or -> M)] for k = 0..length."""
    rep = rep_from_module(M)
    vectors = []
    for k, key in enumerate(rep.basis):
        x = np.zeros(rep.dim, dtype=np.uint8)
        x[k] = 1
        vectors.append((key, x))
    out = []
    target = rep
    for _ in range(length + 1):
        keys, images = greedy_cover(target, vectors)
        P = Free(M.A, keys)
        m = P.map_to(target, images) if keys else np.zeros((target.dim, 0), dtype=np.uint8)
        out.append((P, m))
        if not keys:
            break
        vectors = _homogeneous_kernel(P, m)
        target = P.rep
    return out


def _cochain(P, N, i):
    """Hom(P, N(i))_0 coordinates: one block per generator, N_{d+i, v}."""
    return [N.slice((d + i, v)) for d, v in P.gens]


def _delta(P, Pn, m, N, i):
    """Matrix of phi -> phi o m from Hom(P, N(i))_0 to Hom(Pn, N(i))_0."""
    A = P.A
    src, dst = _cochain(P, N, i), _cochain(Pn, N, i)
    cols = sum(len(s) for s in src)
    rows = sum(len(t) for t in dst)
    out = np.zeros((rows, cols), dtype=np.uint8)
    c = 0
    for h, (d, v) in enumerate(P.gens):
        for b in src[h]:
            nb = np.zeros(N.dim, dtype=np.uint8)
            nb[b] = 1
            r = 0
            for g, t in enumerate(dst):
                col = m[:, Pn.offs[g]]
                val = np.zeros(N.dim, dtype=np.uint8)
                for j, w in enumerate(A.words[v]):
                    if col[P.offs[h] + j]:
                        val ^= N.times_path(nb, w)
                out[r:r + len(t), c] = val[t]
                r += len(t)
            c += 1
    return out


def ext_dims(M, Nmod, n):
    """{i: dim Ext^n(M, N)_i} for the nonzero degrees."""
    if M.is_zero() or Nmod.is_zero():
        return {}
    N = rep_from_module(Nmod)
    res = resolve(M, n + 1)
    if len(res) <= n:
        return {}
    Pn = res[n][0]
    nd = [d for d, _ in N.basis]
    degs = range(min(nd) - max((d for d, _ in Pn.gens), default=0),
                 max(nd) - min((d for d, _ in Pn.gens), default=0) + 1) if Pn.gens else []
    out = {}
    for i in degs:
        dim_n = sum(len(s) for s in _cochain(Pn, N, i))
        if not dim_n:
            continue
        r_out = rank2(_delta(Pn, res[n + 1][0], res[n + 1][1], N, i)) if n + 1 < len(res) else 0
        r_in = rank2(_delta(res[n - 1][0], Pn, res[n][1], N, i)) if n >= 1 else 0
        dim = dim_n - r_out - r_in
        if dim:
            out[i] = dim
    return out
