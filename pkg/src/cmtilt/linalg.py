"""Exact linear algebra over the rationals and small prime fields.

Matrices are numpy arrays: int64 for F_p, object arrays of ``flint.fmpq`` for Q.
Echelon forms are canonical (reduced row echelon), so every basis handed out
by this module is deterministic.
"""
from fractions import Fraction

import flint
import numpy as np


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """The rationals (``p=None``) or the prime field F_p with p < 2**16."""

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p >= 1 << 16:
                # keeps int64 matrix products free of overflow
                raise ValueError("prime fields are limited to p < 65536")
        self.p = p
        self.dtype = object if p is None else np.int64

    @classmethod
    def parse(cls, spec):
        if isinstance(spec, Field):
            return spec
        if spec is None or spec in ("Q", "QQ", "rationals"):
            return cls()
        if isinstance(spec, dict) and "Fp" in spec:
            return cls(spec["Fp"])
        if isinstance(spec, int):
            return cls(spec)
        s = str(spec).strip()
        for prefix in ("GF(", "F_", "Fp", "F"):
            if s.startswith(prefix):
                return cls(int(s[len(prefix):].rstrip(")")))
        raise ValueError(f"unknown field {spec!r}")

    @property
    def name(self):
        return "Q" if self.p is None else f"F{self.p}"

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    # scalars

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, (int, np.integer)):
                return flint.fmpq(int(x))
            return flint.fmpq(int(x.p), int(x.q))
        if isinstance(x, Fraction):
            return x.numerator % self.p * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, flint.fmpq):
            return int(x.p) % self.p * pow(int(x.q), -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / self(x)
        return pow(int(x), -1, self.p)

    def to_str(self, x):
        return str(x if self.p is None else int(x))

    # matrices

    def zeros(self, r, c=None):
        shape = (r,) if c is None else (r, c)
        if self.p is None:
            return np.full(shape, flint.fmpq(0), dtype=object)
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self(1)
        return m

    def array(self, rows, shape=None):
        if self.p is None:
            a = np.array([[self(x) for x in row] for row in rows], dtype=object)
        else:
            a = np.array([[int(x) % self.p for x in row] for row in rows], dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        elif a.size == 0:
            a = self.zeros(len(rows), 0)
        return a

    def vector(self, xs):
        v = self.zeros(len(xs))
        for i, x in enumerate(xs):
            v[i] = self(x)
        return v

    def red(self, m):
        if self.p is None:
            return m
        return m % self.p

    def mm(self, a, b):
        if a.shape[-1] == 0 or (a.ndim == 2 and a.shape[0] == 0) or b.shape[-1] == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return self.zeros(*shape) if shape else self(0)
        if self.p is None:
            return a.dot(b)
        return (a @ b) % self.p

    def is_zero(self, m):
        if m.size == 0:
            return True
        return not np.any(m != 0)

    def rref(self, m):
        """Reduced row echelon form and pivot columns."""
        rows, cols = m.shape
        if rows == 0 or cols == 0:
            return self.zeros(rows, cols), []
        if self.p is None:
            fm = flint.fmpq_mat(rows, cols, [self(x) for x in m.flat])
            r, rank = fm.rref()
            ent = r.entries()
            out = np.empty((rows, cols), dtype=object)
            out.flat[:] = ent
            piv = []
            for i in range(rank):
                row = out[i]
                piv.append(next(j for j in range(cols) if row[j] != 0))
            return out, piv
        return _rref_mod(m % self.p, self.p)

    def charpoly_factors(self, m):
        """Factorisation of the characteristic polynomial as [(coeffs low->high, exp)]."""
        n = m.shape[0]
        if n == 0:
            return []
        if self.p is None:
            poly = flint.fmpq_mat(n, n, [self(x) for x in m.flat]).charpoly()
            _, facs = poly.factor()
            return [([self(c) for c in f.coeffs()], e) for f, e in facs]
        poly = flint.nmod_mat(n, n, [int(x) for x in m.flat], self.p).charpoly()
        _, facs = poly.factor()
        return [([int(c) for c in f.coeffs()], e) for f, e in facs]

    def poly_at(self, coeffs, m):
        n = m.shape[0]
        out = self.zeros(n, n)
        for c in reversed(coeffs):
            out = self.red(self.mm(out, m) + self.eye(n) * c)
        return out

    def random_scalar(self, rng):
        if self.p is None:
            return self(int(rng.integers(-3, 4)))
        return int(rng.integers(0, self.p))


def _rref_mod(m, p):
    r = m.copy()
    rows, cols = r.shape
    piv = []
    i = 0
    for c in range(cols):
        if i == rows:
            break
        nz = np.flatnonzero(r[i:, c])
        if nz.size == 0:
            continue
        k = i + nz[0]
        if k != i:
            r[[i, k]] = r[[k, i]]
        r[i] = r[i] * pow(int(r[i, c]), -1, p) % p
        col = r[:, c].copy()
        col[i] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            r[hit] = (r[hit] - np.outer(col[hit], r[i])) % p
        piv.append(c)
        i += 1
    return r, piv


# -- the operations every other module reduces to -------------------------------


def rank(m, F):
    return len(F.rref(m)[1])


def kernel_matrix(m, F):
    """Columns form a basis of the right null space."""
    rows, cols = m.shape
    r, piv = F.rref(m)
    free = [j for j in range(cols) if j not in set(piv)]
    k = F.zeros(cols, len(free))
    for t, j in enumerate(free):
        k[j, t] = F(1)
    if piv and free:
        k[np.array(piv)[:, None], np.arange(len(free))[None, :]] = F.red(-r[: len(piv)][:, free])
    return k


def kernel_basis(m, F):
    k = kernel_matrix(m, F)
    return [k[:, t].copy() for t in range(k.shape[1])]


def solve_matrix(m, b, F):
    """Some X with m X = b (b a matrix), or None when inconsistent."""
    if m.shape[0] != b.shape[0]:
        raise ValueError("dimension mismatch")
    rows, cols = m.shape
    nb = b.shape[1]
    if rows == 0:
        return F.zeros(cols, nb)
    aug = np.concatenate([m, b], axis=1)
    r, piv = F.rref(aug)
    if any(c >= cols for c in piv):
        return None
    x = F.zeros(cols, nb)
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x


def solve(m, b, F):
    """Some x with m x = b, or the string "inconsistent"."""
    x = solve_matrix(m, b.reshape(-1, 1), F)
    if x is None:
        return "inconsistent"
    return x[:, 0]


def row_space(vectors, F, n):
    """RREF basis (as rows) and pivots of the span of the given vectors."""
    if not len(vectors):
        return F.zeros(0, n), []
    r, piv = F.rref(np.array(vectors).reshape(len(vectors), n))
    return r[: len(piv)], piv


def column_basis(m, F):
    """Reduced column-echelon basis of the column space: identity at pivot rows."""
    r, piv = F.rref(m.T.copy())
    return r[: len(piv)].T.copy(), piv


def quotient_basis(U, W, F):
    """Vectors of U completing span(W) to a basis of span(U)."""
    U = [np.asarray(u) for u in U]
    W = [np.asarray(w) for w in W]
    if not U:
        if any(not F.is_zero(w) for w in W):
            raise ValueError("span(W) is not contained in span(U)")
        return []
    n = U[0].shape[0]
    ru = rank(np.array(U).reshape(len(U), n), F)
    if W and rank(np.array(U + W).reshape(len(U) + len(W), n), F) != ru:
        raise ValueError("span(W) is not contained in span(U)")
    basis = IncrementalBasis(F, n)
    for w in W:
        basis.add(w)
    return [u for u in U if basis.add(u)]


def complement_std(m, F):
    """Standard basis indices completing the row space of m to the whole space."""
    _, piv = F.rref(m)
    piv = set(piv)
    return [j for j in range(m.shape[1]) if j not in piv]


class IncrementalBasis:
    """Span of vectors added one at a time, kept in RREF.

    ``coords`` expresses a vector in terms of the accepted vectors.
    """

    def __init__(self, F, n):
        self.F = F
        self.n = n
        self.rows = F.zeros(0, n)
        self.trans = F.zeros(0, 0)
        self.piv = []
        self.count = 0

    def __len__(self):
        return self.count

    def _reduce(self, v):
        F = self.F
        if not self.piv:
            return v.copy(), F.zeros(0)
        c = v[self.piv]
        res = F.red(v - F.mm(c, self.rows))
        return res, c

    def contains(self, v):
        return self.F.is_zero(self._reduce(v)[0])

    def add(self, v):
        """Insert v; True when it enlarged the span."""
        F = self.F
        res, c = self._reduce(v)
        nz = np.flatnonzero(res != 0)
        if nz.size == 0:
            return False
        p = int(nz[0])
        inv = F.inv(res[p])
        new_row = F.red(res * inv)
        k = self.count
        # transformation row: new_row = inv*(e_k - c . trans)
        t = F.zeros(k + 1)
        t[k] = F(1)
        if k:
            t[:k] = F.red(-F.mm(c, self.trans))
        t = F.red(t * inv)
        trans = F.zeros(len(self.piv) + 1, k + 1)
        trans[: len(self.piv), :k] = self.trans
        trans[-1] = t
        rows = np.concatenate([self.rows, new_row.reshape(1, -1)], axis=0)
        col = rows[:-1, p].copy()
        hit = np.flatnonzero(col != 0)
        if hit.size:
            rows[hit] = F.red(rows[hit] - np.outer(col[hit], new_row))
            trans[hit] = F.red(trans[hit] - np.outer(col[hit], t))
        self.rows, self.trans = rows, trans
        self.piv.append(p)
        self.count += 1
        return True

    def coords(self, v):
        """Coefficients on the accepted vectors, or None if v is outside the span."""
        res, c = self._reduce(v)
        if not self.F.is_zero(res):
            return None
        if not self.piv:
            return self.F.zeros(self.count)
        return self.F.red(self.F.mm(c, self.trans))

