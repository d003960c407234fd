"""Command-line interface: analyze a quiver with relations, run the truncated
preprojective pipeline on a Coxeter word, or run the bundled corpus."""
import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra import NotFiniteError, algebra_from_relations
from .coxeter import CoxeterWord, reflection_morita_check, restrict_to_support
from .homology import (DEFAULT_CAP, NEG_INF, alpha_two_condition, asid_numbers, g_algebra,
                       g_invariant, g_le_zero_criteria, gldim, injective_resolution, is_CM, is_IG,
                       render_injective_resolution, syzygy)
from .linalg import Field
from .module import (DecompositionUndecided, decompose, loewy_report, module_from_literal,
                     projective, render_loewy)
from .quiver import Quiver, admissible_subsequence, sink_reflection
from .tilting import (SHIFT_CAP, is_projective_module, is_tilting, module_U, module_V,
                      stable_endomorphism_presentation, tilting_pipeline, endomorphism_gldim)

FIELD_ENV = "CMTILT_FIELD"
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(ValueError):
    pass


# -- input documents -------------------------------------------------------------------


def resolve_field(flag=None, doc=None):
    spec = flag or (doc or {}).get("field") or os.environ.get(FIELD_ENV) or "Q"
    try:
        return Field.parse(spec)
    except ValueError as e:
        raise InputError(f"field: {e}") from None


def parse_quiver(doc, graded=True):
    q = doc.get("quiver")
    if not isinstance(q, dict):
        raise InputError("quiver: missing or not an object")
    verts = q.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise InputError("quiver.vertices: expected a nonempty list")
    arrows = []
    for k, a in enumerate(q.get("arrows", [])):
        where = f"quiver.arrows[{k}]"
        if not isinstance(a, dict):
            raise InputError(f"{where}: expected an object")
        for key in ("name", "from", "to"):
            if key not in a:
                raise InputError(f"{where}: missing '{key}'")
        deg = a.get("degree", 0)
        if not isinstance(deg, int) or deg < 0:
            raise InputError(f"{where}.degree: expected a non-negative integer")
        if not graded and deg:
            raise InputError(f"{where}.degree: Coxeter-word input takes an ungraded quiver")
        arrows.append((a["name"], a["from"], a["to"], deg))
    try:
        return Quiver(verts, arrows)
    except ValueError as e:
        raise InputError(f"quiver: {e}") from None


def parse_relations(doc, Q, F=None):
    rels = doc.get("relations", [])
    if not isinstance(rels, list):
        raise InputError("relations: expected a list")
    names = {a.name for a in Q.arrows}
    out = []
    for i, rel in enumerate(rels):
        if not isinstance(rel, list) or not rel:
            raise InputError(f"relations[{i}]: expected a nonempty list of terms")
        terms = []
        for j, t in enumerate(rel):
            where = f"relations[{i}][{j}]"
            if not isinstance(t, dict) or "path" not in t:
                raise InputError(f"{where}: expected {{coef, path}}")
            path = t["path"]
            if not isinstance(path, list) or not path:
                raise InputError(f"{where}.path: expected a nonempty list of arrow names")
            for k, nm in enumerate(path):
                if nm not in names:
                    raise InputError(f"{where}.path[{k}]: unknown arrow {nm!r}")
            coef = str(t.get("coef", "1"))
            try:
                c = Fraction(coef)
            except (ValueError, ZeroDivisionError):
                raise InputError(f"{where}.coef: not a rational number: {coef!r}") from None
            if F is not None and F.p is not None and c.denominator % F.p == 0:
                raise InputError(f"{where}.coef: denominator of {coef} vanishes in {F.name}")
            terms.append((coef, list(path)))
        out.append(terms)
    return out


def load_document(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    return doc


# -- report pieces ---------------------------------------------------------------------


def _g_str(g):
    return str(g)


def describe_module(M):
    """Compact (vertex@degree) listing of the dimension vector."""
    A = M.A
    return " ".join(f"{A.vertices[v]}@{d}" + (f"x{n}" if n > 1 else "")
                    for (d, v), n in sorted(M.dims.items()))


def algebra_summary(A):
    return {
        "name": A.name,
        "vertices": [str(v) for v in A.vertices],
        "arrows": [{"name": a.name, "from": str(A.vertices[a.source]), "to": str(A.vertices[a.target]),
                    "degree": a.degree} for a in A.arrows],
        "dim": A.dim,
        "graded_dims": A.graded_dims(),
        "vertex_dims": A.vertex_dims(),
        "top_degree": A.ell,
        "radical_dim": len(A.radical()),
    }


def decomposition_report(M, seed):
    rows = []
    for piece, n, mult in decompose(M, seed).summary():
        rows.append({"summand": describe_module(piece), "shift": n, "multiplicity": mult,
                     "projective": is_projective_module(piece)})
    return rows


def ig_report(A, cap):
    ig = is_IG(A, cap)
    return ig, {"is_ig": ig.is_ig, "d": ig.d, "idim_right": ig.right, "idim_left": ig.left}


def tilting_report(W, A, cap, shift_cap, seed):
    verdict = is_tilting(W, A, shift_cap)
    out = {"verdict": verdict.summary(),
           "gldim_degree_zero": verdict.gldim_degree_zero}
    if verdict.tilting in ("tilting", "pretilting candidate"):
        pres = stable_endomorphism_presentation(W, seed)
        out["gamma"] = {
            "presentation": pres.render(),
            "dim": pres.algebra.dim if pres.algebra is not None else 0,
            "verified": pres.verified,
            "summands": [describe_module(T) for T in pres.summands],
            "gldim": _or_cap(endomorphism_gldim(pres, cap)),
        }
    return verdict, out


def _or_cap(x):
    return "exceeds cap" if x is None else x


def analyze_algebra(A, cap=DEFAULT_CAP, shift_cap=SHIFT_CAP, seed=0, modules=None):
    """Full report for a graded algebra given by a quiver with relations."""
    report = {"field": A.F.name, "algebra": algebra_summary(A)}
    inconclusive = []
    ig, report["ig"] = ig_report(A, cap)
    g, gop = g_algebra(A, cap), g_algebra(A.op(), cap)
    report["g"], report["g_op"] = _g_str(g), _g_str(gop)
    if not (g.exact and gop.exact):
        inconclusive.append("g")
    A0 = A.degree_zero()
    report["gldim_degree_zero"] = _or_cap(gldim(A0, cap))
    report["loewy"] = {f"e{v}A": [s.strip() for s in render_loewy(loewy_report(projective(A, A.vertex_index(v)))).splitlines()]
                       for v in A.vertices}
    inj = {}
    for v in A.vertices:
        terms, res = injective_resolution(projective(A, A.vertex_index(v)), cap=cap)
        inj[f"e{v}A"] = render_injective_resolution(f"e{v}A", terms, res.complete)
    report["injective_resolutions"] = inj
    if not ig.is_ig:
        report["status"] = "not IG within cap"
        return report, ["ig"] + inconclusive
    if A.ell >= 1:
        try:
            report["asid"] = list(asid_numbers(A, cap))
        except ValueError:
            report["asid"] = None
        if A.ell == 1 and report["asid"] and report["asid"][0] == 2:
            report["alpha_two_vertices"] = alpha_two_condition(A)
    if ig.d == 1:
        c = g_le_zero_criteria(A, cap)
        report["criteria"] = {"a": c.a, "b": c.b, "c": c.c, "consistent": c.consistent}
    d = max(ig.d, 1)
    U = module_U(A)
    W = syzygy(U, d)
    report["U"] = describe_module(U)
    report["W"] = {"name": "V" if d == 1 else f"Omega^{d}(U)", "dims": describe_module(W)}
    try:
        report["decomposition"] = decomposition_report(W, seed)
        verdict, tr = tilting_report(W, A, cap, shift_cap, seed)
    except DecompositionUndecided as e:
        report["status"] = f"decomposition undecided: {e}"
        return report, inconclusive + ["decomposition"]
    report.update(tr)
    if verdict.tilting == "inconclusive":
        inconclusive.append("tilting")
    report["modules"] = {}
    for name, M in (modules or {}).items():
        report["modules"][name] = {
            "dims": describe_module(M),
            "cm": is_CM(M, ig.d),
            "g": _g_str(g_invariant(M, cap)),
            "loewy": [s.strip() for s in render_loewy(loewy_report(M)).splitlines()],
            "decomposition": decomposition_report(M, seed),
        }
    report["status"] = verdict.tilting
    return report, inconclusive


def analyze_word(Q, word, F, cap=DEFAULT_CAP, shift_cap=SHIFT_CAP, seed=0):
    """Report for the truncated preprojective pipeline on (Q, w)."""
    w = CoxeterWord(Q, word)
    k = w.first_negative()
    if k is not None:
        raise InputError(f"coxeter_word: not reduced (root {k + 1} is negative)")
    report = {"field": F.name, "input_quiver": repr(Q), "word": str(w), "reduced": True,
              "support": sorted(map(str, w.support()))}
    Qs, ws = restrict_to_support(Q, w)
    report["restricted_quiver"] = repr(Qs)
    direct = tilting_pipeline_direct(Qs, ws.entries, F, shift_cap, seed)
    rep = tilting_pipeline(Qs, ws.entries, F, shift_cap, seed)
    if rep["target"] is None:
        report["status"] = "no reflection target found"
        report["direct"] = direct
        return report, []
    Q2, refl = rep["target"]
    report["reflections"] = [str(i) for i in refl]
    checks, cur = [], Qs
    for i in refl:
        m = reflection_morita_check(cur, i, ws.entries, F)
        checks.append({"sink": str(i), "ok": m.ok, "graded_dims_end": m.graded_dims_end})
        cur = sink_reflection(cur, i)
    report["morita_checks"] = checks
    report["target_quiver"] = repr(Q2)
    report["admissible_positions"] = admissible_subsequence(Q2, ws.entries)
    if refl:
        report["direct"] = direct
    A = rep["algebra"]
    cert = rep["certificate"]
    report["algebra"] = algebra_summary(A)
    report["certificate"] = {"cap": cert.cap, "dim": cert.dim, "root_height_total": cert.root_height_total,
                             "valid": cert.valid}
    report["ig"] = {"is_ig": rep["ig"].is_ig, "d": rep["ig"].d}
    report["g"] = _g_str(rep["g"])
    c = rep["criteria"]
    report["criteria"] = {"precondition": c.precondition, "a": c.a, "b": c.b, "c": c.c,
                          "consistent": c.consistent}
    report["decomposition"] = decomposition_report(rep["V"], seed)
    report["verdict"] = rep["verdict"].summary()
    pres = rep["presentation"]
    if pres is not None:
        report["gamma"] = {"presentation": pres.render(),
                           "dim": pres.algebra.dim if pres.algebra is not None else 0,
                           "verified": pres.verified,
                           "summands": [describe_module(T) for T in pres.summands],
                           "gldim": _or_cap(rep["gldim"])}
    report["status"] = rep["status"]
    bad = ["tilting"] if rep["status"] == "inconclusive" else []
    return report, bad


def tilting_pipeline_direct(Q, word, F, shift_cap, seed):
    """V over Pi(Q)_w itself, before any reflection."""
    from .coxeter import truncated_pp
    A, _ = truncated_pp(Q, list(word), F)
    V = module_V(A)
    verdict = is_tilting(V, A, shift_cap)
    return {"g": _g_str(g_algebra(A)), "decomposition": decomposition_report(V, seed),
            "verdict": verdict.summary()}


# -- rendering -------------------------------------------------------------------------


def render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _scalar(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def emit(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    return render_text(report)


# -- commands --------------------------------------------------------------------------


def cmd_algebra_analyze(path, field=None, cap=None, seed=None):
    doc = load_document(path)
    F = resolve_field(field, doc)
    Q = parse_quiver(doc)
    rels = parse_relations(doc, Q, F)
    caps = _caps(cap, doc)
    try:
        A = algebra_from_relations(Q, rels, F, name=doc.get("name") or Path(path).stem)
    except NotFiniteError as e:
        raise InputError(f"relations: {e}") from None
    except (KeyError, ValueError) as e:
        raise InputError(f"relations: {e}") from None
    modules = {}
    for name, lit in (doc.get("modules") or {}).items():
        try:
            modules[name] = module_from_literal(A, lit)
        except (KeyError, ValueError) as e:
            raise InputError(f"modules.{name}: {e}") from None
    return analyze_algebra(A, caps[0], caps[1], _seed(seed, doc), modules)


def cmd_ppalg(path, field=None, cap=None, seed=None):
    doc = load_document(path)
    F = resolve_field(field, doc)
    Q = parse_quiver(doc, graded=False)
    word = doc.get("coxeter_word")
    if not isinstance(word, list) or not all(isinstance(x, (int, str)) for x in word):
        raise InputError("coxeter_word: expected a list of vertices")
    try:
        CoxeterWord(Q, word)
    except ValueError as e:
        raise InputError(f"coxeter_word: {e}") from None
    caps = _caps(cap, doc)
    return analyze_word(Q, word, F, caps[0], caps[1], _seed(seed, doc))


def _caps(cap, doc):
    cap = cap if cap is not None else doc.get("cap")
    if cap is None:
        return DEFAULT_CAP, SHIFT_CAP
    return int(cap), int(cap)


def _seed(seed, doc):
    return seed if seed is not None else int(doc.get("seed", 0))


def run_document(path, field=None, cap=None, seed=None):
    """(report, inconclusive parts) for an input document of either form."""
    doc = load_document(path)
    if "coxeter_word" in doc:
        return cmd_ppalg(path, field, cap, seed)
    return cmd_algebra_analyze(path, field, cap, seed)


# -- corpus ----------------------------------------------------------------------------


def corpus_dir():
    return Path(str(resources.files("cmtilt") / "corpus"))


def corpus_entries():
    docs = sorted(p.name for p in corpus_dir().glob("*.json"))
    return [("doc", d) for d in docs] + [("property", name) for name in sorted(PROPERTY_CHECKS)]


def _golden_path(doc, field):
    return corpus_dir() / "golden" / f"{Path(doc).stem}.{field}.json"


def _run_entry(args):
    kind, name, field, cap, update = args
    try:
        if kind == "property":
            ok, detail = PROPERTY_CHECKS[name](Field.parse(field), cap)
            return name, ok, detail
        report, bad = run_document(str(corpus_dir() / name), field, cap, None)
        if bad:
            return name, "inconclusive", ", ".join(bad)
        gp = _golden_path(name, field)
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        if update:
            gp.write_text(text)
            return name, "pass", "golden written"
        if not gp.exists():
            return name, "fail", f"no golden file {gp.name}"
        if gp.read_text() != text:
            return name, "fail", f"report differs from {gp.name}"
        return name, "pass", report.get("status", "")
    except InputError as e:
        return name, "fail", str(e)


def cmd_corpus(field=None, cap=None, jobs=None, update=False):
    F = resolve_field(field)
    entries = [(k, n, F.name, cap, update) for k, n in corpus_entries()]
    if jobs == 1:
        results = [_run_entry(e) for e in entries]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_entry, entries))
    return results


def _catalog_property(check):
    def run(F, cap):
        from .catalog import one_ig_catalog
        bad = []
        for A in one_ig_catalog(F):
            res = check(A, cap)
            if res == "inconclusive":
                return "inconclusive", A.name
            if not res:
                bad.append(A.name)
        return ("fail", ", ".join(bad)) if bad else ("pass", "")
    return run


def _prop_exact(A, cap):
    from .tilting import exact_sequence_check
    return exact_sequence_check(A)


def _prop_presilting(A, cap):
    from .tilting import is_presilting
    verdict, _, _ = is_presilting(module_V(A), cap or SHIFT_CAP)
    return "inconclusive" if verdict == "inconclusive" else verdict == "holds"


def _prop_g_bounds(A, cap):
    ig = is_IG(A, cap or DEFAULT_CAP)
    if not ig.is_ig:
        return "inconclusive"
    g = g_algebra(A, cap or DEFAULT_CAP)
    return g.exact and (g.value == NEG_INF or -A.ell <= g.value <= ig.d * A.ell)


def _tree_property(F, cap):
    from .catalog import tree_words
    for Q, w in tree_words(max_vertices=4, per_quiver=3, max_length=6, seed=1):
        rep = tilting_pipeline(Q, list(w), F, cap or SHIFT_CAP)
        if rep["status"] == "inconclusive":
            return "inconclusive", f"{Q} {w}"
        if rep["status"] != "tilting" or rep["gldim"] is None:
            return "fail", f"{Q} {w}: {rep['status']}"
    return "pass", ""


PROPERTY_CHECKS = {
    "exact-sequence": _catalog_property(_prop_exact),
    "presilting-1ig": _catalog_property(_prop_presilting),
    "g-bounds": _catalog_property(_prop_g_bounds),
    "tree-pipeline": _tree_property,
}


# -- entry point -----------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="cmtilt", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp (e.g. F2); default from $%s or Q" % FIELD_ENV)
    common.add_argument("--cap", type=int, help="resolution and shift search cap")
    common.add_argument("--seed", type=int, help="seed for randomized decomposition")
    common.add_argument("--emit", choices=("json", "text"), default="text")
    sub = p.add_subparsers(dest="command", required=True)
    alg = sub.add_parser("algebra", help="quiver-with-relations input")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    an = alg_sub.add_parser("analyze", parents=[common], help="full analysis of the algebra")
    an.add_argument("input")
    pp = sub.add_parser("ppalg", parents=[common], help="truncated preprojective pipeline")
    pp.add_argument("input")
    co = sub.add_parser("corpus", parents=[common], help="run the bundled examples")
    co.add_argument("--jobs", type=int, default=None)
    co.add_argument("--update-golden", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "corpus":
            results = cmd_corpus(args.field, args.cap, args.jobs, args.update_golden)
            for name, status, detail in results:
                print(f"{status:12s} {name}" + (f"  ({detail})" if detail else ""))
            statuses = {s for _, s, _ in results}
            print(f"{sum(s == 'pass' for _, s, _ in results)}/{len(results)} passed")
            if "fail" in statuses:
                return EXIT_ERROR
            return EXIT_INCONCLUSIVE if "inconclusive" in statuses else EXIT_OK
        if args.command == "ppalg":
            report, bad = cmd_ppalg(args.input, args.field, args.cap, args.seed)
        else:
            report, bad = cmd_algebra_analyze(args.input, args.field, args.cap, args.seed)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    print(emit(report, args.emit))
    return EXIT_INCONCLUSIVE if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
