"""Graded right modules as graded quiver representations.

A module stores a dimension for every slice (degree, vertex) and, for every
arrow a of degree k and degree d, the matrix M(a)_d : M_{d,s(a)} -> M_{d+k,t(a)}
acting on column vectors.
"""
import numpy as np

from .linalg import IncrementalBasis, column_basis, kernel_matrix, solve_matrix, rank


class DecompositionUndecided(RuntimeError):
    pass


class GradedModule:
    def __init__(self, A, dims, act=None, name=None, check=False):
        self.A = A
        self.F = A.F
        self.dims = {k: int(n) for k, n in sorted(dims.items()) if n > 0}
        self.act = {}
        for (a, d), m in (act or {}).items():
            arr = A.arrows[a]
            src, dst = (d, arr.source), (d + arr.degree, arr.target)
            if src in self.dims and dst in self.dims:
                if m.shape != (self.dims[dst], self.dims[src]):
                    raise ValueError(f"action block of {arr.name} in degree {d} has shape {m.shape}")
                if not self.F.is_zero(m):
                    self.act[(a, d)] = m
        self.name = name
        self._cache = {}
        if check:
            check_relations(self)

    def __repr__(self):
        nm = f"{self.name}: " if self.name else ""
        return f"GradedModule({nm}dim={self.dim}, support={self.support()})"

    @property
    def keys(self):
        return list(self.dims)

    @property
    def dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return not self.dims

    def d(self, key):
        return self.dims.get(key, 0)

    def support(self):
        if not self.dims:
            return None
        ds = [k[0] for k in self.dims]
        return (min(ds), max(ds))

    def block(self, a, d):
        arr = self.A.arrows[a]
        m = self.act.get((a, d))
        if m is not None:
            return m
        return self.F.zeros(self.d((d + arr.degree, arr.target)), self.d((d, arr.source)))

    def dim_vector(self):
        """{(vertex label, degree): dim}"""
        return {(self.A.vertices[v], d): n for (d, v), n in self.dims.items()}

    def word_images(self, d, v):
        """Matrices x -> x.w on M_{d,v} for every basis path w of e_v A."""
        key = ("words", d, v)
        if key not in self._cache:
            A, F = self.A, self.F
            n = self.d((d, v))
            out = [F.eye(n)]
            for j in range(1, A.vdim(v)):
                w = A.words[v][j]
                p = A.parent[v][j]
                out.append(F.mm(self.block(w[-1], d + A.wdeg[v][p]), out[p]))
            self._cache[key] = out
        return self._cache[key]

    def shift(self, n):
        return shift(self, n)


class GradedMap:
    """Degree-0 homomorphism; ``mats[key]`` is the block M_key -> N_key."""

    def __init__(self, src, dst, mats=None):
        self.src, self.dst = src, dst
        F = src.F
        self.mats = {}
        for k in src.dims:
            if k in dst.dims:
                m = (mats or {}).get(k)
                self.mats[k] = m if m is not None else F.zeros(dst.dims[k], src.dims[k])

    def block(self, k):
        if k in self.mats:
            return self.mats[k]
        return self.src.F.zeros(self.dst.d(k), self.src.d(k))

    def __matmul__(self, other):
        """self o other"""
        F = self.src.F
        return GradedMap(other.src, self.dst,
                         {k: F.mm(self.block(k), other.block(k)) for k in other.src.dims})

    def __add__(self, other):
        F = self.src.F
        return GradedMap(self.src, self.dst, {k: F.red(m + other.block(k)) for k, m in self.mats.items()})

    def scale(self, c):
        F = self.src.F
        return GradedMap(self.src, self.dst, {k: F.red(m * c) for k, m in self.mats.items()})

    def vector(self):
        F = self.src.F
        parts = [m.reshape(-1) for _, m in sorted(self.mats.items())]
        return np.concatenate(parts) if parts else F.zeros(0)

    def is_zero(self):
        return all(self.src.F.is_zero(m) for m in self.mats.values())

    def is_iso(self):
        if self.src.dims != self.dst.dims:
            return False
        return all(rank(m, self.src.F) == m.shape[0] for m in self.mats.values())

    def is_injective(self):
        return all(rank(self.block(k), self.src.F) == n for k, n in self.src.dims.items())

    def is_surjective(self):
        return all(rank(self.block(k), self.src.F) == n for k, n in self.dst.dims.items())

    def inverse(self):
        F = self.src.F
        inv = {}
        for k, m in self.mats.items():
            inv[k] = solve_matrix(m, F.eye(m.shape[0]), F)
        return GradedMap(self.dst, self.src, inv)

    def check(self):
        """Commutes with every arrow."""
        F = self.src.F
        A = self.src.A
        for (d, v) in self.src.dims:
            for a, arr in enumerate(A.arrows):
                if arr.source != v:
                    continue
                t = (d + arr.degree, arr.target)
                lhs = F.mm(self.dst.block(a, d), self.block((d, v)))
                rhs = F.mm(self.block(t), self.src.block(a, d))
                if not F.is_zero(F.red(lhs - rhs)):
                    return False
        return True

    def kernel(self):
        F = self.src.F
        return submodule(self.src, {k: kernel_matrix(self.block(k), F) for k in self.src.dims})

    def image(self):
        return submodule(self.dst, {k: self.block(k) for k in self.dst.dims})


def identity_map(M):
    return GradedMap(M, M, {k: M.F.eye(n) for k, n in M.dims.items()})


def zero_module(A):
    return GradedModule(A, {})


# -- constructions ---------------------------------------------------------------


def shift(M, n):
    """M(n), with M(n)_i = M_{i+n}."""
    if n == 0:
        return M
    return GradedModule(M.A, {(d - n, v): k for (d, v), k in M.dims.items()},
                        {(a, d - n): m for (a, d), m in M.act.items()})


def shift_map(f, n):
    return GradedMap(shift(f.src, n), shift(f.dst, n),
                     {(d - n, v): m for (d, v), m in f.mats.items()})


def direct_sum(mods):
    """Direct sum with inclusion and projection maps."""
    mods = list(mods)
    if not mods:
        raise ValueError("empty direct sum")
    A, F = mods[0].A, mods[0].F
    dims, offs = {}, []
    for M in mods:
        off = {}
        for k, n in M.dims.items():
            off[k] = dims.get(k, 0)
            dims[k] = dims.get(k, 0) + n
        offs.append(off)
    S = GradedModule(A, dims)
    act = {}
    for (d, v) in S.dims:
        for a, arr in enumerate(A.arrows):
            if arr.source != v:
                continue
            t = (d + arr.degree, arr.target)
            if t not in S.dims:
                continue
            m = F.zeros(S.dims[t], S.dims[(d, v)])
            for M, off in zip(mods, offs):
                blk = M.act.get((a, d))
                if blk is not None:
                    m[off[t]:off[t] + blk.shape[0], off[(d, v)]:off[(d, v)] + blk.shape[1]] = blk
            act[(a, d)] = m
    S = GradedModule(A, dims, act)
    incl, proj = [], []
    for M, off in zip(mods, offs):
        im, pm = {}, {}
        for k, n in M.dims.items():
            e = F.zeros(S.dims[k], n)
            e[off[k]:off[k] + n] = F.eye(n)
            im[k] = e
            pm[k] = e.T.copy()
        incl.append(GradedMap(M, S, im))
        proj.append(GradedMap(S, M, pm))
    return S, incl, proj


def dsum(*mods):
    mods = [m for m in mods if m is not None]
    if len(mods) == 1:
        return mods[0]
    return direct_sum(mods)[0]


def _echelon_spaces(M, spaces):
    F = M.F
    out = {}
    for k, n in M.dims.items():
        S = spaces.get(k)
        if S is None or S.shape[1] == 0:
            out[k] = (F.zeros(n, 0), [])
        else:
            out[k] = column_basis(S, F)
    return out


def submodule(M, spaces):
    """Submodule from per-slice spanning columns (must be closed under the action).

    Returns the module and its inclusion map."""
    F = M.F
    ech = _echelon_spaces(M, spaces)
    dims = {k: b.shape[1] for k, (b, _) in ech.items()}
    act = {}
    for (a, d), m in M.act.items():
        arr = M.A.arrows[a]
        s, t = (d, arr.source), (d + arr.degree, arr.target)
        bs, _ = ech[s]
        bt, pt = ech[t]
        if bs.shape[1] and bt.shape[1]:
            img = F.mm(m, bs)
            coords = img[pt]
            if not F.is_zero(F.red(F.mm(bt, coords) - img)):
                raise ValueError("subspaces are not closed under the action")
            act[(a, d)] = coords
        elif bs.shape[1] and not F.is_zero(F.mm(m, bs)):
            raise ValueError("subspaces are not closed under the action")
    N = GradedModule(M.A, dims, act)
    return N, GradedMap(N, M, {k: b for k, (b, _) in ech.items() if b.shape[1]})


def quotient(M, spaces):
    """Quotient by a submodule given by per-slice spanning columns; returns (Q, projection)."""
    F = M.F
    ech = _echelon_spaces(M, spaces)
    proj, comp = {}, {}
    for k, n in M.dims.items():
        b, piv = ech[k]
        keep = [i for i in range(n) if i not in set(piv)]
        # reduce modulo the subspace, then read the non-pivot coordinates
        red = F.eye(n)
        if piv:
            sel = F.zeros(len(piv), n)
            for r, p in enumerate(piv):
                sel[r, p] = F(1)
            red = F.red(red - F.mm(b, sel))
        proj[k] = red[keep]
        c = F.zeros(n, len(keep))
        for r, i in enumerate(keep):
            c[i, r] = F(1)
        comp[k] = c
    dims = {k: p.shape[0] for k, p in proj.items()}
    act = {}
    for (a, d), m in M.act.items():
        arr = M.A.arrows[a]
        s, t = (d, arr.source), (d + arr.degree, arr.target)
        if dims.get(s) and dims.get(t):
            act[(a, d)] = F.mm(proj[t], F.mm(m, comp[s]))
    Q = GradedModule(M.A, dims, act)
    return Q, GradedMap(M, Q, {k: p for k, p in proj.items() if p.shape[0]})


def generated_spaces(M, gens):
    """Per-slice spans of the submodule generated by {key: columns}."""
    F = M.F
    spaces = {}
    todo = []
    for k, g in gens.items():
        if g.shape[1]:
            spaces[k] = IncrementalBasis(F, M.dims[k])
            todo.append(k)
            for c in range(g.shape[1]):
                spaces[k].add(g[:, c])
    vecs = {k: [spaces[k].rows[i] for i in range(len(spaces[k]))] for k in spaces}
    queue = [(k, v) for k in vecs for v in vecs[k]]
    while queue:
        (d, vx), x = queue.pop()
        for a, arr in enumerate(M.A.arrows):
            if arr.source != vx:
                continue
            t = (d + arr.degree, arr.target)
            if t not in M.dims:
                continue
            y = F.mm(M.block(a, d), x)
            if F.is_zero(y):
                continue
            sp = spaces.setdefault(t, IncrementalBasis(F, M.dims[t]))
            if sp.add(y):
                queue.append((t, y))
    out = {}
    for k, sp in spaces.items():
        if len(sp):
            out[k] = np.array(sp.rows).T.copy()
    return out


def truncate_geq(M, n):
    return submodule(M, {k: M.F.eye(m) for k, m in M.dims.items() if k[0] >= n})[0]


def truncate_lt(M, n):
    return quotient(M, {k: M.F.eye(m) for k, m in M.dims.items() if k[0] >= n})[0]


def radical_spaces(M):
    """Columns spanning (MJ)_key for every slice."""
    out = {}
    for (a, d), m in M.act.items():
        arr = M.A.arrows[a]
        t = (d + arr.degree, arr.target)
        out.setdefault(t, []).append(m)
    return {k: np.concatenate(ms, axis=1) for k, ms in out.items()}


def top_generators(M):
    """[(degree, vertex, vector)] mapping onto a basis of the top M/MJ."""
    F = M.F
    rad = radical_spaces(M)
    gens = []
    for (d, v), n in M.dims.items():
        basis = IncrementalBasis(F, n)
        if (d, v) in rad:
            r = rad[(d, v)]
            for c in range(r.shape[1]):
                basis.add(r[:, c])
        for i in range(n):
            e = F.zeros(n)
            e[i] = F(1)
            if basis.add(e):
                gens.append((d, v, e))
    return gens


def check_relations(M):
    """Raise unless the algebra's relations act as zero.

    For each vertex v and basis path w with w.a = sum c_i w_i in e_v A, every
    x in M e_v must satisfy x.(w a) = sum c_i x.w_i."""
    A, F = M.A, M.F
    for (d, v), n in M.dims.items():
        imgs = M.word_images(d, v)
        for j, w in enumerate(A.words[v]):
            dj = d + A.wdeg[v][j]
            for a, arr in enumerate(A.arrows):
                if arr.source != A.wtarget[v][j]:
                    continue
                lhs = F.mm(M.block(a, dj), imgs[j])
                col = A.right[v][a][:, j]
                rhs = F.zeros(*lhs.shape)
                for i in np.flatnonzero(col != 0):
                    rhs = F.red(rhs + col[i] * imgs[i])
                if not F.is_zero(F.red(lhs - rhs)):
                    raise ValueError(f"relation violated at path {A.path_label(w, v)}.{arr.name}"
                                     f" in degree {d}")
    return True


def module_from_literal(A, doc):
    """Module from {"dims": {"deg,vertex": n}, "action": {arrow: {deg: matrix rows}}}."""
    F = A.F
    dims = {}
    for key, n in doc["dims"].items():
        d, v = (key if isinstance(key, (tuple, list)) else key.split(","))
        dims[(int(d), A.vertex_index(v.strip() if isinstance(v, str) else v))] = int(n)
    act = {}
    for name, per in doc.get("action", {}).items():
        a = A.arrow_index(name)
        for d, rows in per.items():
            act[(a, int(d))] = F.array(rows) if len(rows) else None
    M = GradedModule(A, dims, {k: v for k, v in act.items() if v is not None})
    check_relations(M)
    return M


def simple(A, v, degree=0):
    return GradedModule(A, {(degree, v): 1})


def projective(A, v, degree=0):
    """e_v A(-degree): generated in the given degree."""
    key = ("proj", v)
    if key not in A._cache:
        F = A.F
        slices = {}
        for j in range(A.vdim(v)):
            slices.setdefault((A.wdeg[v][j], A.wtarget[v][j]), []).append(j)
        pos = {}
        for k, js in slices.items():
            for i, j in enumerate(js):
                pos[j] = (k, i)
        act = {}
        for a, arr in enumerate(A.arrows):
            m = A.right[v][a]
            for j in range(A.vdim(v)):
                if A.wtarget[v][j] != arr.source:
                    continue
                (d, s), i = pos[j]
                t = (d + arr.degree, arr.target)
                for r in np.flatnonzero(m[:, j] != 0):
                    _, ir = pos[int(r)]
                    blk = act.setdefault((a, d), F.zeros(len(slices[t]), len(slices[(d, s)])))
                    blk[ir, i] = m[r, j]
        P = GradedModule(A, {k: len(js) for k, js in slices.items()}, act)
        P._cache["proj_pos"] = pos
        A._cache[key] = P
    return shift(A._cache[key], -degree)


def regular_module(A, degree=0):
    return dsum(*[projective(A, v, degree) for v in range(A.n)])


def injective(A, v, degree=0):
    """I_v(degree) = D(A e_v)(degree); its socle sits in degree -degree."""
    B = A.op()
    return shift(dual(projective(B, v)), degree)


# -- Hom -------------------------------------------------------------------------


class FreeModule:
    """Direct sum of e_v A(-d) over generators [(d, v)] with explicit coordinates."""

    def __init__(self, A, gens):
        self.A = A
        self.gens = list(gens)
        F = A.F
        slices = {}
        for g, (d, v) in enumerate(self.gens):
            for j in range(A.vdim(v)):
                key = (d + A.wdeg[v][j], A.wtarget[v][j])
                slices.setdefault(key, []).append((g, j))
        self.slices = dict(sorted(slices.items()))
        self.pos = {}
        for k, lst in self.slices.items():
            for i, gj in enumerate(lst):
                self.pos[gj] = (k, i)
        act = {}
        for g, (d0, v) in enumerate(self.gens):
            for a, arr in enumerate(A.arrows):
                m = A.right[v][a]
                for j in range(A.vdim(v)):
                    if A.wtarget[v][j] != arr.source:
                        continue
                    k, i = self.pos[(g, j)]
                    t = (k[0] + arr.degree, arr.target)
                    for r in np.flatnonzero(m[:, j] != 0):
                        _, ir = self.pos[(g, int(r))]
                        blk = act.setdefault((a, k[0]), F.zeros(len(self.slices[t]), len(self.slices[k])))
                        blk[ir, i] = m[r, j]
        self.module = GradedModule(A, {k: len(l) for k, l in self.slices.items()}, act)

    def generator_vector(self, g):
        d, v = self.gens[g]
        k, i = self.pos[(g, 0)]
        e = self.A.F.zeros(len(self.slices[k]))
        e[i] = self.A.F(1)
        return k, e

    def eval_matrix(self, elements, N):
        """Matrix of phi -> (phi(x) for x in elements), phi in Hom(self, N)_0 given by
        generator values; columns ordered by generators, rows by elements."""
        F = self.A.F
        col_off, c = [], 0
        for (d, v) in self.gens:
            col_off.append(c)
            c += N.d((d, v))
        row_blocks = []
        for (k, x) in elements:
            blk = F.zeros(N.d(k), c)
            if N.d(k):
                for i in np.flatnonzero(x != 0):
                    g, j = self.slices[k][i]
                    d, v = self.gens[g]
                    n = N.d((d, v))
                    if n:
                        W = N.word_images(d, v)[j]
                        blk[:, col_off[g]:col_off[g] + n] = F.red(blk[:, col_off[g]:col_off[g] + n] + x[i] * W)
            row_blocks.append(blk)
        if not row_blocks:
            return F.zeros(0, c)
        return np.concatenate(row_blocks, axis=0)

    def map_from_values(self, N, values):
        """The map self -> N sending generator g to values[g] in N_{gens[g]}."""
        F = self.A.F
        mats = {}
        for k, lst in self.slices.items():
            if not N.d(k):
                continue
            m = F.zeros(N.d(k), len(lst))
            for i, (g, j) in enumerate(lst):
                d, v = self.gens[g]
                if N.d((d, v)):
                    m[:, i] = F.mm(N.word_images(d, v)[j], values[g])
            mats[k] = m
        return GradedMap(self.module, N, mats)


def cover_data(M):
    """Minimal projective cover: (FreeModule P, map P -> M, generator vectors)."""
    if "cover" not in M._cache:
        gens = top_generators(M)
        P = FreeModule(M.A, [(d, v) for d, v, _ in gens])
        pi = P.map_from_values(M, [x for _, _, x in gens])
        M._cache["cover"] = (P, pi)
    return M._cache["cover"]


def presentation(M):
    """(P, pi, section, relations): relations are elements of P generating ker pi."""
    if "presentation" not in M._cache:
        F = M.F
        P, pi = cover_data(M)
        K, incl = pi.kernel()
        rels = []
        for d, v, x in top_generators(K):
            rels.append(((d, v), F.mm(incl.block((d, v)), x)))
        section = {}
        for k, n in M.dims.items():
            s = solve_matrix(pi.block(k), F.eye(n), F)
            if s is None:
                raise AssertionError("projective cover is not surjective")
            section[k] = s
        M._cache["presentation"] = (P, pi, section, rels)
    return M._cache["presentation"]


class HomSpace:
    """Basis of Hom(X, Y)_0, stored as generator values on a presentation of X."""

    def __init__(self, X, Y):
        if X.A is not Y.A:
            raise ValueError("modules over different algebras")
        self.X, self.Y = X, Y
        F = X.F
        P, pi, section, rels = presentation(X)
        self.P, self.section = P, section
        E = P.eval_matrix(rels, Y)
        self.K = kernel_matrix(E, F)
        self.sizes = [Y.d(g) for g in P.gens]
        self._maps = None

    @property
    def dim(self):
        return self.K.shape[1]

    def map(self, coeffs):
        F = self.X.F
        vec = F.red(F.mm(self.K, coeffs)) if self.K.shape[1] else F.zeros(self.K.shape[0])
        values, c = [], 0
        for n in self.sizes:
            values.append(vec[c:c + n])
            c += n
        f = self.P.map_from_values(self.Y, values)
        mats = {k: F.mm(f.block(k), self.section[k]) for k in self.X.dims if k in self.Y.dims}
        return GradedMap(self.X, self.Y, mats)

    def maps(self):
        if self._maps is None:
            F = self.X.F
            self._maps = []
            for t in range(self.dim):
                e = F.zeros(self.dim)
                e[t] = F(1)
                self._maps.append(self.map(e))
        return self._maps


def hom0(X, Y):
    """Basis of Hom(X, Y)_0 as a list of GradedMaps."""
    return HomSpace(X, Y).maps()


def hom_dim(X, Y):
    if X.is_zero() or Y.is_zero():
        return 0
    return HomSpace(X, Y).dim


# -- duality ---------------------------------------------------------------------


def op_arrow_map(A):
    """Index in A of the arrow matching each arrow of A.op()."""
    B = A.op()
    key = "op_arrows"
    if key not in A._cache:
        names = {arr.name: k for k, arr in enumerate(A.arrows)}
        A._cache[key] = [names[arr.name] for arr in B.arrows]
    return A._cache[key]


def dual(M):
    """D(M) = Hom_K(M, K) over the opposite algebra, with D(M)_i = (M_{-i})*."""
    A = M.A
    B = A.op()
    amap = op_arrow_map(A)
    dims = {(-d, v): n for (d, v), n in M.dims.items()}
    act = {}
    for b, arr in enumerate(B.arrows):
        a = amap[b]
        k = A.arrows[a].degree
        for (d, v) in M.dims:
            if v != A.arrows[a].source:
                continue
            m = M.act.get((a, d))
            if m is not None:
                # a^op maps D(M)_{-(d+k)} at t(a) to D(M)_{-d} at s(a)
                act[(b, -(d + k))] = m.T.copy()
    return GradedModule(B, dims, act)


def dual_map(f):
    return GradedMap(dual(f.dst), dual(f.src), {(-d, v): m.T.copy() for (d, v), m in f.mats.items()})


# -- endomorphisms, decomposition, isomorphism ------------------------------------


def _block_ops(f):
    return {k: m for k, m in f.mats.items()}


def _char_factors(f):
    """Irreducible factors (as coefficient tuples) of the characteristic polynomial of f."""
    F = f.src.F
    facs = {}
    for k, m in f.mats.items():
        for coeffs, e in F.charpoly_factors(m):
            key = tuple(coeffs)
            facs[key] = facs.get(key, 0) + e
    return facs


def _fitting_split(M, f, poly):
    """Submodules ker p(f)^N and the complementary generalized eigenspace."""
    F = M.F
    ker, rest = {}, {}
    for k, m in f.mats.items():
        n = m.shape[0]
        pm = F.poly_at(poly, m)
        pw = pm
        for _ in range(max(1, n.bit_length())):
            pw = F.mm(pw, pw)
        ker[k] = kernel_matrix(pw, F)
        rest[k] = pw
    return ker, rest


def _is_local(E, M):
    """Certify End_0(M) local with residue field K: each basis element is
    lambda + nilpotent and the nilpotent parts span a nilpotent subalgebra."""
    F = M.F
    nil = []
    for f in E:
        facs = _char_factors(f)
        if len(facs) != 1:
            return False, f
        (coeffs,) = facs
        if len(coeffs) != 2:
            return None, f
        lam = F.red(-coeffs[0] * F.inv(coeffs[1]))
        nil.append(f + identity_map(M).scale(F.red(-lam)))
    # nilpotent parts must span a subalgebra in which every product chain dies
    vecs = [g.vector() for g in nil]
    basis = IncrementalBasis(F, len(identity_map(M).vector()))
    for v in vecs:
        basis.add(v)
    layer = [g for g in nil if not g.is_zero()]
    for _ in range(M.dim + 1):
        if not layer:
            return True, None
        nxt = []
        for g in layer:
            for h in nil:
                p = g @ h
                if p.is_zero():
                    continue
                if basis.coords(p.vector()) is None:
                    return False, None
                nxt.append(p)
        # reduce the next layer to a spanning set
        lb = IncrementalBasis(F, len(identity_map(M).vector()))
        layer = [p for p in nxt if lb.add(p.vector())]
    return False, None


def decompose_pieces(M, seed=0, max_tries=64):
    """Indecomposable summands as (piece, inclusion into M)."""
    if M.is_zero():
        return []
    rng = np.random.default_rng(seed)
    F = M.F
    stack = [(M, identity_map(M))]
    out = []
    while stack:
        N, inc = stack.pop()
        E = hom0(N, N)
        split = None
        local, witness = _is_local(E, N)
        if local:
            out.append((N, inc))
            continue
        candidates = list(E)
        if witness is not None:
            candidates.insert(0, witness)
        tries = 0
        while split is None and tries < max_tries + len(E):
            if candidates:
                f = candidates.pop(0)
            else:
                coeffs = [F.random_scalar(rng) for _ in E]
                f = E[0].scale(coeffs[0])
                for c, g in zip(coeffs[1:], E[1:]):
                    f = f + g.scale(c)
                tries += 1
            facs = _char_factors(f)
            if len(facs) > 1:
                split = (f, list(facs)[0])
        if split is None:
            if local is None:
                raise DecompositionUndecided("endomorphism ring is not split over the base field")
            raise DecompositionUndecided("no splitting endomorphism found")
        f, poly = split
        ker, img = _fitting_split(N, f, list(poly))
        A1, i1 = submodule(N, ker)
        A2, i2 = submodule(N, img)
        if A1.is_zero() or A2.is_zero() or A1.dim + A2.dim != N.dim:
            raise AssertionError("Fitting decomposition failed")
        stack.append((A2, inc @ i2))
        stack.append((A1, inc @ i1))
    return out


def normalize_shift(M):
    """(M shifted to minimal degree 0, the shift s with M = result(-s))."""
    if M.is_zero():
        return M, 0
    lo = M.support()[0]
    return shift(M, lo), lo


class Decomposition:
    """Indecomposable summands grouped into isomorphism classes up to shift.

    ``classes`` is a list of (normalized piece, [shift offsets]); an offset s
    means the summand is piece(-s), i.e. generated starting in degree s."""

    def __init__(self, module, pieces, classes):
        self.module = module
        self.pieces = pieces
        self.classes = classes

    def summary(self):
        """[(piece, n, multiplicity)] meaning piece(n), in a field-independent order."""
        out = []
        for piece, offs in self.classes:
            for s in sorted(set(offs)):
                out.append((piece, -s, offs.count(s)))
        return sorted(out, key=lambda r: (r[0].dim, sorted(r[0].dims.items()), r[1]))

    def witness(self):
        """Explicit isomorphism from the direct sum of the pieces onto the module."""
        S, incl, _ = direct_sum([p for p, _ in self.pieces])
        mats = {}
        for k in S.dims:
            mats[k] = np.concatenate([inc.block(k) for _, inc in self.pieces if k in _.dims], axis=1)
        return GradedMap(S, self.module, mats)


def decompose(M, seed=0):
    pieces = decompose_pieces(M, seed)
    classes = []
    for N, _ in pieces:
        Nn, s = normalize_shift(N)
        for entry in classes:
            if entry[0].dims == Nn.dims and iso_indecomposable(entry[0], Nn):
                entry[1].append(s)
                break
        else:
            classes.append((Nn, [s]))
    return Decomposition(M, pieces, classes)


def iso_indecomposable(M, N):
    """For M with local endomorphism ring: M is isomorphic to N iff some composite
    N -> M -> N... rather M -> N -> M of basis maps is invertible."""
    if M.dims != N.dims:
        return None
    H1, H2 = hom0(M, N), hom0(N, M)
    for f in H1:
        if f.is_iso():
            return f
    for f in H1:
        for g in H2:
            if (g @ f).is_iso():
                return f
    return None


def iso_test(M, N, seed=0, tries=24):
    """(True, isomorphism M -> N) or (False, None)."""
    if M.A is not N.A or M.dims != N.dims:
        return False, None
    if M.is_zero():
        return True, GradedMap(M, N)
    F = M.F
    H = hom0(M, N)
    if not H:
        return False, None
    for f in H:
        if f.is_iso():
            return True, f
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        f = H[0].scale(F.random_scalar(rng))
        for g in H[1:]:
            f = f + g.scale(F.random_scalar(rng))
        if f.is_iso():
            return True, f
    # fall back on comparing Krull-Schmidt decompositions
    dm, dn = decompose(M, seed), decompose(N, seed)
    right = [p for p, _ in dn.pieces]
    for p, _ in dm.pieces:
        k = next((k for k, q in enumerate(right)
                  if p.dims == q.dims and iso_indecomposable(p, q) is not None), None)
        if k is None:
            return False, None
        right.pop(k)
    return True, _assemble_iso(dm, dn, seed)


def _assemble_iso(dm, dn, seed):
    right = list(dn.pieces)
    blocks = []
    for p, ip in dm.pieces:
        for k, (q, iq) in enumerate(right):
            f = iso_indecomposable(p, q) if p.dims == q.dims else None
            if f is not None:
                blocks.append((ip, f, iq))
                right.pop(k)
                break
    # M -> N: sum over summands of iq o f o (projection onto p)
    inv = dm.witness().inverse()
    S, _, projs = direct_sum([p for p, _ in dm.pieces])
    total = None
    for (ip, f, iq), pr in zip(blocks, projs):
        term = iq @ f @ pr @ inv
        total = term if total is None else total + term
    return total


def loewy_report(M):
    """Radical layers as a list of {(vertex label, degree): multiplicity}."""
    F = M.F
    cur = {k: F.eye(n) for k, n in M.dims.items()}
    layers = []
    while cur:
        nxt = {}
        for (d, v), S in cur.items():
            for a, arr in enumerate(M.A.arrows):
                if arr.source != v:
                    continue
                t = (d + arr.degree, arr.target)
                if t in M.dims:
                    img = F.mm(M.block(a, d), S)
                    if not F.is_zero(img):
                        nxt.setdefault(t, []).append(img)
        nxt = {k: column_basis(np.concatenate(ms, axis=1), F)[0] for k, ms in nxt.items()}
        nxt = {k: m for k, m in nxt.items() if m.shape[1]}
        layer = {}
        for k, S in cur.items():
            diff = S.shape[1] - (nxt[k].shape[1] if k in nxt else 0)
            if diff:
                layer[(M.A.vertices[k[1]], k[0])] = diff
        layers.append(layer)
        cur = nxt
    return layers


def render_loewy(layers):
    lines = []
    for i, layer in enumerate(layers):
        cells = " ".join(f"{v}@{d}" + (f"x{m}" if m > 1 else "") for (v, d), m in sorted(layer.items(), key=str))
        lines.append(f"  L{i}: {cells}")
    return "\n".join(lines)


def qv_module(B, M):
    """The quasi-Veronese functor: module over A to module over A^[ell].

    qv(M)_i at vertex (p, v) is M_{i*ell+p} e_v."""
    A = B._cache["qv_base"]
    if M.A is not A:
        raise ValueError("module is not over the base algebra")
    ell = A.ell
    origin = B._cache["qv_origin"]
    vid = {x: i for i, x in enumerate(B.vertices)}
    dims = {}
    for (d, v), n in M.dims.items():
        i, p = divmod(d, ell)
        dims[(i, vid[(p, v)])] = n
    act = {}
    for b, (p, q, v, j) in enumerate(origin):
        arr = B.arrows[b]
        for (i, x) in list(dims):
            if x != arr.source:
                continue
            d = i * ell + p
            if (d, v) not in M.dims:
                continue
            W = M.word_images(d, v)[j]
            if W.size and not M.F.is_zero(W):
                act[(b, i)] = W
    return GradedModule(B, dims, act)
