"""The modules U and V, presilting and tilting checks in the stable category of
graded CM modules, and the endomorphism algebra of the tilting candidate."""
from string import ascii_lowercase
from typing import NamedTuple

import numpy as np

from .algebra import algebra_from_relations, from_structure
from .coxeter import CoxeterWord, restrict_to_support, same_algebra, truncated_pp
from .homology import (DEFAULT_CAP, StableHom, ext, g_algebra, g_le_zero_criteria, gldim, is_IG,
                       projective_resolution, syzygy)
from .linalg import Field, IncrementalBasis, kernel_matrix
from .module import (GradedMap, decompose, dsum, identity_map, iso_indecomposable,
                     iso_test, quotient, regular_module, shift, submodule, zero_module)
from .quiver import Quiver, find_reflection_target

SHIFT_CAP = 40
PERIOD_CAP = 12


def _canonical_sequence(A):
    """(Q, V -> Q, Q -> U) for Q = sum_{i=1}^{ell} A(i)."""
    R = regular_module(A)
    if A.ell == 0:
        Z = zero_module(A)
        return Z, GradedMap(Z, Z), GradedMap(Z, Z)
    Qm = dsum(*[shift(R, i) for i in range(1, A.ell + 1)])
    spaces = {k: A.F.eye(n) for k, n in Qm.dims.items() if k[0] >= 0}
    V, incl = submodule(Qm, spaces)
    U, proj = quotient(Qm, spaces)
    return Qm, incl, proj


def module_U(A):
    return _canonical_sequence(A)[2].dst


def module_V(A):
    return _canonical_sequence(A)[1].src


def exact_sequence_check(A):
    """0 -> V -> sum A(i) -> U -> 0 is exact, and Omega(U) is isomorphic to V."""
    Qm, incl, proj = _canonical_sequence(A)
    V, U = incl.src, proj.dst
    if not (incl.is_injective() and proj.is_surjective() and (proj @ incl).is_zero()):
        return False
    for k, n in Qm.dims.items():
        if V.d(k) + U.d(k) != n:
            return False
    W = syzygy(U)
    return iso_test(W, V)[0]


# -- verdicts ------------------------------------------------------------------


class Witness(NamedTuple):
    kind: str          # "ext" (Ext^n(W, W)_0) or "stable" (stable Hom(W, Omega^n W)_0)
    n: int
    shift: int
    dim: int
    map: object        # a GradedMap representing a nonzero class, when available


class TiltingVerdict(NamedTuple):
    presilting: str            # holds | fails | inconclusive
    presilting_tag: str
    tilting: str               # tilting | not tilting | inconclusive | pretilting candidate
    tilting_tag: str
    witnesses: list
    gldim_degree_zero: object

    def summary(self):
        return {"presilting": self.presilting, "presilting_tag": self.presilting_tag,
                "tilting": self.tilting, "tilting_tag": self.tilting_tag,
                "witnesses": [f"{w.kind} n={w.n} shift={w.shift} dim={w.dim}" for w in self.witnesses]}


def _find_period(history, cur, ell):
    """(m, j) with cur isomorphic to history[m](j), searching the allowed window."""
    if cur.is_zero():
        return None
    lo = cur.support()[0]
    for m in range(len(history) - 1, -1, -1):
        prev = history[m]
        if prev.is_zero() or prev.dim != cur.dim:
            continue
        j = prev.support()[0] - lo
        if abs(j) > 2 * ell + 2:
            continue
        cand = shift(prev, j)
        if cand.dims == cur.dims and iso_test(cand, cur)[0]:
            return m, j
    return None


def is_presilting(W, cap=SHIFT_CAP):
    """Ext^n(W, W)_0 = 0 for all n > 0, with a termination proof tag.

    Returns (verdict, tag, witnesses)."""
    if W.is_zero():
        return "holds", "zero module", []
    A = W.A
    top = W.support()[1]
    res = projective_resolution(W, cap=cap + 1)
    history = [W]
    for n in range(1, cap + 1):
        if n >= len(res.terms):
            return "holds", f"resolution ends at {len(res.terms) - 1}", []
        gens = [d for d, _ in res.terms[n].gens]
        if min(gens) > top:
            return "holds", f"degree gap at n={n}", []
        d = ext(W, W, n, res, degrees=[0]).get(0, 0)
        if d:
            Wn1 = res.syzygies[n]
            st = StableHom(Wn1, W)
            reps = st.representatives()
            return "fails", f"Ext^{n} nonzero", [Witness("ext", n, 0, d, reps[0] if reps else None)]
        cur = res.syzygies[n]
        found = _find_period(history, cur, A.ell)
        history.append(cur)
        if found is not None:
            m, j = found
            # Omega^{m+t+q(n-m)} W = Omega^{m+t} W (qj); the remaining groups are
            # Ext^1(Omega^{k-1} W, W(-qj))_0 for m < k <= n, q >= 1
            if j == 0 and m < n:
                return "holds", f"periodic: Omega^{n} W = Omega^{m} W", []
            if j != 0:
                ok = True
                for k in range(max(m, 1), n + 1):
                    src = res.syzygies[k - 1]
                    r1 = projective_resolution(src, length=2)
                    vals = ext(src, W, 1, r1)
                    for i, dim in vals.items():
                        if i % j == 0 and -i // j >= 1 and dim:
                            ok = False
                if ok:
                    return "holds", f"periodic: Omega^{n} W = Omega^{m} W({j})", []
    return "inconclusive", f"cap {cap} reached", []


def negative_shift_check(W, cap=SHIFT_CAP):
    """stable Hom(W, Omega^n W)_0 = 0 for all n > 0. Returns (verdict, tag, witnesses)."""
    if W.is_zero():
        return "holds", "zero module", []
    A = W.A
    top = W.support()[1]
    history = [W]
    cur = W
    for n in range(1, cap + 1):
        cur = syzygy(cur)
        if cur.is_zero():
            return "holds", f"Omega^{n} W = 0", []
        if cur.support()[0] > top:
            return "holds", f"degree gap at n={n}", []
        st = StableHom(W, cur)
        if st.dim:
            rep = st.representatives()[0]
            return "fails", f"stable Hom(W, Omega^{n} W) nonzero", [Witness("stable", n, 0, st.dim, rep)]
        found = _find_period(history[1:], cur, A.ell) if len(history) > 1 else None
        history.append(cur)
        if found is not None:
            m, j = found
            m += 1
            # Omega^{m+t+q(n-m)} W = Omega^{m+t} W (qj)
            if j == 0:
                return "holds", f"periodic: Omega^{n} W = Omega^{m} W", []
            ok = True
            for k in range(m, n):
                Wk = history[k]
                q = 1
                while True:
                    T = shift(Wk, q * j)
                    lo, hi = T.support()
                    wlo, whi = W.support()
                    if (j < 0 and lo > whi) or (j > 0 and hi < wlo):
                        break
                    if StableHom(W, T).dim:
                        ok = False
                        break
                    q += 1
                    if q > 4 * (A.ell + 2) + W.dim:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return "holds", f"periodic: Omega^{n} W = Omega^{m} W({j})", []
            return "inconclusive", "periodic with nonvanishing remainder", []
    return "inconclusive", f"cap {cap} reached", []


def is_tilting(W, A=None, cap=SHIFT_CAP):
    A = A or W.A
    pre, pre_tag, wit = is_presilting(W, cap)
    gl0 = gldim(A.degree_zero())
    if pre == "fails":
        return TiltingVerdict(pre, pre_tag, "not tilting", "not presilting", wit, gl0)
    neg, neg_tag, wit2 = negative_shift_check(W, cap)
    if neg == "fails":
        return TiltingVerdict(pre, pre_tag, "not tilting", neg_tag, wit2, gl0)
    if pre == "inconclusive" or neg == "inconclusive":
        return TiltingVerdict(pre, pre_tag, "inconclusive", neg_tag, [], gl0)
    if gl0 is None:
        return TiltingVerdict(pre, pre_tag, "pretilting candidate", neg_tag, [], gl0)
    return TiltingVerdict(pre, pre_tag, "tilting", neg_tag, [], gl0)


# -- the stable endomorphism algebra ------------------------------------------------


def is_projective_module(M):
    return not M.is_zero() and syzygy(M).is_zero()


def basic_nonprojective_summands(W, seed=0):
    """One representative per isomorphism class of non-projective indecomposable summand,
    with multiplicities."""
    reps = []
    for piece, _ in decompose(W, seed).pieces:
        if is_projective_module(piece):
            continue
        for entry in reps:
            if entry[0].dims == piece.dims and iso_indecomposable(entry[0], piece) is not None:
                entry[1] += 1
                break
        else:
            reps.append([piece, 1])
    return sorted(((p, m) for p, m in reps), key=lambda r: (r[0].dim, sorted(r[0].dims.items())))


class _StableClasses:
    """Coordinates of maps T_k -> T_l in the stable quotient."""

    def __init__(self, X, Y):
        self.st = StableHom(X, Y)
        self.F = X.F

    def values(self, f):
        st, F = self.st, self.F
        P = st.hom.P
        from .module import presentation
        _, pi, _, _ = presentation(st.X)
        vals = []
        for g, (d, v) in enumerate(P.gens):
            k, e = P.generator_vector(g)
            if st.Y.d(k):
                vals.append(F.mm(f.block(k), F.mm(pi.block(k), e)))
        return np.concatenate(vals) if vals else F.zeros(0)


class AlgebraPresentation(NamedTuple):
    quiver: Quiver
    relations: list            # [[(coef, [arrow names])]]
    algebra: object            # the computed basic algebra (None for the zero algebra)
    verified: bool
    summands: list             # the basic summands, in vertex order

    def render(self):
        if self.algebra is None:
            return "zero algebra"
        arrs = ", ".join(f"{a.name}: {a.source}->{a.target}" for a in self.quiver.arrows) or "no arrows"
        rels = "; ".join(" + ".join(f"{c}*{'.'.join(p)}" for c, p in r) for r in self.relations) or "none"
        return f"vertices {list(self.quiver.vertices)}; arrows {arrs}; relations {rels}"


def stable_endomorphism_algebra(T):
    """Stable End_0 of a basic sum of non-projective indecomposables T = [T_1, ..., T_k],
    as a GradedAlgebra concentrated in degree 0. Product x.y = y o x."""
    if not T:
        return None, []
    F = T[0].F
    k = len(T)
    classes = {(a, b): _StableClasses(T[a], T[b]) for a in range(k) for b in range(k)}
    elems, maps, idem = [], [], []
    spans = {}
    for a in range(k):
        for b in range(k):
            cl = classes[(a, b)]
            basis = IncrementalBasis(F, cl.st.values_dim)
            for c in range(cl.st.proj_span.shape[1]):
                basis.add(cl.st.proj_span[:, c])
            nproj = len(basis)
            chosen = []
            cands = []
            if a == b:
                cands.append(identity_map(T[a]))
            for f in cl.st.representatives():
                if a == b:
                    f = _radical_part(f)
                cands.append(f)
            for f in cands:
                if basis.add(cl.values(f)):
                    chosen.append(f)
            spans[(a, b)] = (basis, nproj, len(elems))
            for t, f in enumerate(chosen):
                if a == b and t == 0:
                    idem.append(len(elems))
                elems.append((a, b, 0))
                maps.append(f)

    def mult(i, j):
        a, b, _ = elems[i]
        b2, c, _ = elems[j]
        if b != b2:
            return {}
        comp = maps[j] @ maps[i]
        basis, nproj, off = spans[(a, c)]
        co = basis.coords(classes[(a, c)].values(comp))
        if co is None:
            raise AssertionError("composite outside the Hom space")
        return {off + t: co[nproj + t] for t in range(len(co) - nproj) if co[nproj + t] != 0}

    labels = [f"m{i}" for i in range(len(elems))]
    G, chosen = from_structure(F, [f"T{a + 1}" for a in range(k)], elems, idem, mult, labels,
                               name="Gamma")
    return G, maps


def _radical_part(f):
    """f - lambda for the unique eigenvalue of an endomorphism of an indecomposable."""
    F = f.src.F
    facs = {}
    for m in f.mats.values():
        for coeffs, e in F.charpoly_factors(m):
            facs[tuple(coeffs)] = e
    if len(facs) != 1:
        raise AssertionError("endomorphism of an indecomposable with two eigenvalues")
    (coeffs,) = facs
    if len(coeffs) != 2:
        raise AssertionError("residue field is not the base field")
    lam = F.red(-coeffs[0] * F.inv(coeffs[1]))
    return f + identity_map(f.src).scale(F.red(-lam))


def _rename_arrows(G):
    from .algebra import GradedAlgebra
    names = list(ascii_lowercase) + [f"x{i}" for i in range(len(G.arrows))]
    arrows = [(names[k], a.source, a.target, a.degree) for k, a in enumerate(G.arrows)]
    H = GradedAlgebra(G.F, G.vertices, arrows, G.words, G.right, name=G.name)
    return H


def presentation_relations(G):
    """Minimal generators of the kernel I of K Q_G -> G, i.e. a basis of I / (JI + IJ),
    as (coef, [names]) combinations. Paths longer than the Loewy length lie in JI."""
    F = G.F
    LL = max((len(w) for ws in G.words for w in ws), default=0) + 1
    data = []
    for s in range(G.n):
        paths, tg, frontier = [()], [s], [0]
        for _ in range(LL):
            nxt = []
            for j in frontier:
                for a, arr in enumerate(G.arrows):
                    if arr.source == tg[j]:
                        nxt.append(len(paths))
                        paths.append(paths[j] + (a,))
                        tg.append(arr.target)
            frontier = nxt
        idx = [j for j, p in enumerate(paths) if len(p) >= 2]
        pos = {paths[j]: t for t, j in enumerate(idx)}
        if idx:
            imgs = np.stack([G.act_word(s, G.unit_vector(s, 0), paths[j]) for j in idx], axis=1)
            K = kernel_matrix(imgs, F)
        else:
            K = F.zeros(0, 0)
        data.append((idx, pos, [paths[j] for j in idx], K))
    rels = []
    for s in range(G.n):
        idx, pos, plist, K = data[s]
        if not K.shape[1]:
            continue
        sub = IncrementalBasis(F, len(idx))
        for c in range(K.shape[1]):
            r = K[:, c]
            for a in range(len(G.arrows)):
                v = F.zeros(len(idx))
                for t in np.flatnonzero(r != 0):
                    p = plist[t] + (a,)
                    if p in pos:
                        v[pos[p]] = F.red(v[pos[p]] + r[t])
                sub.add(v)
        for a, arr in enumerate(G.arrows):
            if arr.source != s:
                continue
            _, _, plist2, K2 = data[arr.target]
            for c in range(K2.shape[1]):
                r = K2[:, c]
                v = F.zeros(len(idx))
                for t in np.flatnonzero(r != 0):
                    p = (a,) + plist2[t]
                    if p in pos:
                        v[pos[p]] = F.red(v[pos[p]] + r[t])
                sub.add(v)
        for c in range(K.shape[1]):
            r = K[:, c]
            if sub.add(r):
                rels.append([(F.to_str(r[t]), [G.arrows[a].name for a in plist[t]])
                             for t in np.flatnonzero(r != 0)])
    return rels


def stable_endomorphism_presentation(W, seed=0):
    reps = basic_nonprojective_summands(W, seed)
    T = [p for p, _ in reps]
    if not T:
        return AlgebraPresentation(Quiver([]), [], None, True, [])
    G, _ = stable_endomorphism_algebra(T)
    G = _rename_arrows(G)
    rels = presentation_relations(G)
    Q = Quiver(G.vertices, [(a.name, G.vertices[a.source], G.vertices[a.target], 0) for a in G.arrows])
    H = algebra_from_relations(Q, [[(c, p) for c, p in r] for r in rels], G.F)
    ok = same_algebra(H, G)
    return AlgebraPresentation(Q, rels, G, ok, T)


def endomorphism_gldim(presentation, cap=DEFAULT_CAP):
    """gldim of the presented endomorphism algebra (finite for a tilting object)."""
    if presentation.algebra is None:
        return 0
    return gldim(presentation.algebra, cap)


# -- pipeline ------------------------------------------------------------------------


def analyze_V(A, cap=SHIFT_CAP, seed=0):
    """Decomposition of V, the tilting verdict and the stable endomorphism algebra."""
    V = module_V(A)
    dec = decompose(V, seed)
    verdict = is_tilting(V, A, cap)
    pres = gl = None
    if verdict.tilting in ("tilting", "pretilting candidate"):
        pres = stable_endomorphism_presentation(V, seed)
        gl = endomorphism_gldim(pres)
    return {"V": V, "decomposition": dec, "verdict": verdict, "presentation": pres, "gldim": gl}


def tilting_pipeline(Q, word, F=None, cap=SHIFT_CAP, seed=0):
    """Restrict to the support, reflect at sinks until the word contains an
    admissible sequence, then analyze V over Pi(Q')_w."""
    F = F or Field()
    w = word if isinstance(word, CoxeterWord) else CoxeterWord(Q, word)
    k = w.first_negative()
    if k is not None:
        raise ValueError(f"word is not reduced (root {k + 1} is negative)")
    Qs, ws = restrict_to_support(Q, w)
    target = find_reflection_target(Qs, ws.entries)
    report = {"restricted": Qs, "word": ws, "target": target}
    if target is None:
        report["status"] = "no reflection target found"
        return report
    Q2, refl = target
    A2, cert = truncated_pp(Q2, ws.entries, F)
    report.update(algebra=A2, certificate=cert, ig=is_IG(A2), criteria=g_le_zero_criteria(A2),
                  g=g_algebra(A2))
    report.update(analyze_V(A2, cap, seed))
    v = report["verdict"].tilting
    report["status"] = "tilting" if v == "tilting" else v
    return report
