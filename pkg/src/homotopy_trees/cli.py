"""Command-line entry point: ``python3 -m homotopy_trees <group> <command>``.

Exit status is 0 on success, 1 when a verification fails (the witness is
printed), and 2 on usage or input errors.  ``--json`` switches any command
to machine output.  ``HOMOTOPY_TREES_THREADS`` sets the number of worker
processes used by ``verify all``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import ainf, cones, ombas, polytopes
from . import evaluator as ev
from .chains import Chain, GradedComplex, Verdict, chain_to_dict, d_squared_is_zero, homology, is_point_homology
from .trees import (
    enumerate_binary_trees,
    enumerate_cbrt,
    enumerate_gauged_trees,
    enumerate_stable_trees,
    gauged_tamari_path_independent,
    parse_gauged,
    parse_word,
    tamari_path_independent,
    to_text,
    tree_to_dict,
)

THREADS_ENV = "HOMOTOPY_TREES_THREADS"


class UsageError(Exception):
    pass


def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, indent=1, default=str))
    else:
        print(text)


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed rational {s!r}; expected p/q") from None


def _rationals(s: str) -> list[Fraction]:
    return [_rational(x) for x in s.split(",") if x.strip()] if s.strip() else []


def _tree(s: str):
    try:
        return parse_word(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _gauged(s: str):
    try:
        return parse_gauged(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _bounded(n: int, lo: int, hi: int, what: str) -> int:
    if not lo <= n <= hi:
        raise UsageError(f"{what} must lie in [{lo}, {hi}], got {n}")
    return n


def _verdict(args, v: Verdict) -> int:
    data = {"ok": v.ok, "name": v.name, "detail": v.detail, "witness": None if v.witness is None else repr(v.witness)}
    _emit(args, v.line(), data)
    return 0 if v.ok else 1


def _chain_text(x: Chain, fmt=None) -> str:
    if not x:
        return "0"
    fmt = fmt or to_text
    parts = []
    for k, c in x.sorted_items():
        coeff = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(("- " if c < 0 else "+ ") + coeff + fmt(k))
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


# trees -----------------------------------------------------------------------

_ENUM = {
    "stable": (enumerate_stable_trees, 2),
    "binary": (enumerate_binary_trees, 2),
    "gauged": (enumerate_gauged_trees, 1),
    "gauged-binary": (enumerate_cbrt, 1),
    "broken": (ombas.broken_trees, 2),
}


def cmd_trees_enum(args) -> int:
    fn, lo = _ENUM[args.kind]
    n = _bounded(args.n, lo, 8, "-n")
    items = fn(n)
    text = "\n".join(to_text(x) for x in items)
    _emit(args, f"{text}\n# {len(items)} trees", {"count": len(items), "trees": [tree_to_dict(x) for x in items]})
    return 0


# ombas -----------------------------------------------------------------------

def cmd_ombas_diff(args) -> int:
    if (args.tree is None) == (args.gauged is None):
        raise UsageError("give exactly one of --tree or --gauged")
    if args.tree is not None:
        t = _tree(args.tree)
        x = ombas.diff_ombas(t)
    else:
        x = ombas.diff_gauged(_gauged(args.gauged))
    _emit(args, _chain_text(x), chain_to_dict(x))
    return 0


def dsq_operad(max_arity: int) -> Verdict:
    gens = [t for n in range(2, max_arity + 1) for t in enumerate_stable_trees(n)]
    return d_squared_is_zero(ombas.diff_ombas, gens, name=f"d^2 = 0 on stable trees, arity <= {max_arity}")


def dsq_bimodule(max_arity: int) -> Verdict:
    gens = [g for n in range(1, max_arity + 1) for g in enumerate_gauged_trees(n)]
    return d_squared_is_zero(ombas.diff_ombas_morph, gens, name=f"d^2 = 0 on gauged trees, arity <= {max_arity}")


def cmd_ombas_dsq(args) -> int:
    n = _bounded(args.max_arity, 1, 7, "--max-arity")
    return _verdict(args, dsq_bimodule(n) if args.morph else dsq_operad(n))


# ainf ------------------------------------------------------------------------

def cmd_ainf_diff(args) -> int:
    n = _bounded(args.n, 1 if args.morph else 2, 9, "-n")
    x = ainf.ainf_morph_diff(n, args.convention) if args.morph else ainf.ainf_diff(n, args.convention)
    _emit(args, ainf.format_chain(x), chain_to_dict(x))
    return 0


def cmd_ainf_convert(args) -> int:
    n = _bounded(args.max_arity, 2, 8, "--max-arity")
    for k in range(2, n + 1):
        for morph in (False, True):
            v = ainf.convert_convention(k, morphism=morph)
            if not v:
                return _verdict(args, v)
    return _verdict(args, Verdict(True, "convention twist A -> B", detail=f"arity <= {n}"))


def cmd_ainf_chainmap(args) -> int:
    n = _bounded(args.max_arity, 1, 7, "--max-arity")
    v = ainf.check_chain_map_psi(n) if args.morph else ainf.check_chain_map_phi(n)
    return _verdict(args, v)


# polytopes -------------------------------------------------------------------

def _polytope(args):
    ws = _rationals(args.weights) if args.weights else polytopes.unit_weights(_bounded(args.n or 0, 1, 7, "-n"))
    kind = {"assoc": "assoc", "K": "assoc", "multi": "multipl", "multipl": "multipl", "J": "multipl"}[args.kind]
    try:
        return polytopes.build(kind, ws)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_poly_build(args) -> int:
    p = _polytope(args)
    if args.json:
        print(polytopes.to_json(p))
    else:
        print(polytopes.to_text(p))
    return 0


def cmd_poly_vertices(args) -> int:
    p = _polytope(args)
    vs = polytopes.vertices(p)
    _emit(args, " ".join(polytopes.format_vertex(v) for v in vs), [[str(c) for c in v] for v in vs])
    return 0


def cmd_poly_boundary(args) -> int:
    p = _polytope(args)
    x = polytopes.cellular_boundary(p)
    _emit(args, ainf.format_chain(x), chain_to_dict(x))
    return 0


# cones -----------------------------------------------------------------------

def cmd_cones_check(args) -> int:
    n = _bounded(args.max_arity, 1, 5, "--max-arity")
    for v in (cones.check_dimensions(n), cones.check_strata(n), cones.check_partition(n, args.samples, args.seed)):
        code = _verdict(args, v)
        if code:
            return code
    return 0


def cmd_cones_classify(args) -> int:
    t = _tree(args.tree)
    lam = _rational(args.lam)
    lengths = _rationals(args.lengths)
    try:
        tg, on = cones.classify_point(t, lam, lengths)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    label = to_text(tg)
    _emit(args, f"{label}{' (on a gauge wall)' if on else ''}", {"cell": label, "tree": tree_to_dict(tg), "on": on})
    return 0


# evaluator -------------------------------------------------------------------

def cmd_eval_check(args) -> int:
    try:
        inst = ev.load_instance(args.instance)
    except OSError as exc:
        raise UsageError(f"cannot read {args.instance}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid instance file {args.instance}: {exc}") from None
    n = args.max_arity or inst.max_arity
    if isinstance(inst, ev.MorphismInstance):
        v = ev.check_twisted_ombas_morphism(inst, n)
    elif isinstance(inst, ev.AInfInstance):
        v = ev.check_ainf_algebra(inst, args.convention, n)
    else:
        v = ev.check_twisted_ombas_algebra(inst, n)
    return _verdict(args, v)


# verify all ------------------------------------------------------------------

def _check_homology_operad(n):
    for k in range(2, n + 1):
        basis = {}
        for x in ombas.broken_trees(k):
            basis.setdefault(ombas.degree(x), []).append(x)
        h = homology(GradedComplex.from_differential(basis, ombas.diff_ombas))
        if not is_point_homology(h):
            return Verdict(False, "homology of broken stable trees", witness=(k, h))
    return Verdict(True, "homology of broken stable trees", detail=f"H = Z in degree 0, arity <= {n}")


def _check_homology_bimodule(n):
    for k in range(1, n + 1):
        basis = {}
        for x in ombas.broken_gauged_trees(k):
            basis.setdefault(x.degree, []).append(x)
        h = homology(GradedComplex.from_differential(basis, ombas.diff_ombas_morph))
        if not is_point_homology(h):
            return Verdict(False, "homology of broken gauged trees", witness=(k, h))
    return Verdict(True, "homology of broken gauged trees", detail=f"H = Z in degree 0, arity <= {n}")


def _check_polytope_counts(n):
    from math import comb

    for k in range(2, n + 1):
        p = polytopes.loday(polytopes.unit_weights(k))
        nv, nf = len(polytopes.vertices(p)), len(polytopes.facets(p))
        catalan = comb(2 * (k - 1), k - 1) // k
        want_f = k * (k - 1) // 2 - 1 if k > 2 else 0
        if (nv, nf) != (catalan, want_f):
            return Verdict(False, "associahedron counts", witness=(k, nv, nf))
    j3 = polytopes.forcey_loday(polytopes.unit_weights(3))
    if (len(polytopes.vertices(j3)), len(polytopes.facets(j3))) != (6, 6):
        return Verdict(False, "multiplihedron counts", witness=3)
    return Verdict(True, "polytope counts", detail=f"K_k for k <= {n}, J_3")


def _check_geometric_signs(n_k, n_j):
    for kind, top in (("assoc", n_k), ("multipl", n_j)):
        for k in range(1 if kind == "multipl" else 2, top + 1):
            v = polytopes.check_signs(kind, k)
            if not v:
                return v
    return Verdict(True, "geometric facet signs", detail=f"K_k k <= {n_k}, J_k k <= {n_j}")


def _check_orientations(n_plain, n_gauged):
    for k in range(2, n_plain + 1):
        if not tamari_path_independent(k):
            return Verdict(False, "orientation coherence", witness=("binary", k))
    for k in range(1, n_gauged + 1):
        if not gauged_tamari_path_independent(k):
            return Verdict(False, "orientation coherence", witness=("gauged", k))
    return Verdict(True, "orientation coherence", detail=f"binary <= {n_plain}, gauged binary <= {n_gauged}")


def _check_conventions(n):
    for k in range(2, n + 1):
        for morph in (False, True):
            v = ainf.convert_convention(k, morphism=morph)
            if not v:
                return v
    import random

    rng = random.Random(0)
    for _ in range(5):
        v = ev.check_convention_equivalence(ev.random_ainf_instance(rng, min(n, 4)), min(n, 4))
        if not v:
            return v
    return Verdict(True, "convention equivalence", detail=f"symbolic arity <= {n}, 5 random instances")


def _check_cones(n):
    for v in (cones.check_dimensions(n), cones.check_strata(n), cones.check_partition(n)):
        if not v:
            return v
    return Verdict(True, "cone cross-checks", detail=f"arity <= {n}")


def _check_evaluator(n):
    m = ev.trivial_module(3)
    mult = {(i, j): {(i + j) % 3: 1} for i in range(3) for j in range(3)}
    v = ev.check_twisted_ombas_algebra(ev.associative_instance(m, mult, n), n)
    if not v:
        return v
    return ev.mutation_smoke_test(20)


def _chain_maps(n_phi, n_psi):
    for v in (ainf.check_chain_map_phi(n_phi), ainf.check_chain_map_psi(n_psi)):
        if not v:
            return v
    return Verdict(True, "comparison maps are chain maps", detail=f"phi arity <= {n_phi}, psi arity <= {n_psi}")


def suite(max_arity: int) -> list[tuple]:
    """The acceptance checks, each capped at the arity it is meant to reach."""
    n = max_arity
    return [
        ("1", dsq_operad, (min(n, 6),)),
        ("2", dsq_bimodule, (min(n, 4),)),
        ("3", _chain_maps, (min(n, 6), min(n, 4))),
        ("4", _check_homology_operad, (min(n, 6),)),
        ("4b", _check_homology_bimodule, (min(n, 4),)),
        ("5", _check_polytope_counts, (min(n, 6),)),
        ("6", _check_geometric_signs, (min(n, 6), min(n, 5))),
        ("7", _check_orientations, (min(n, 5), min(n, 4))),
        ("8", _check_conventions, (min(n, 5),)),
        ("9", _check_cones, (min(n, 4),)),
        ("10", _check_evaluator, (min(n, 5),)),
    ]


def _run_check(item):
    tag, fn, params = item
    t0 = time.perf_counter()
    v = fn(*params)
    return tag, v, time.perf_counter() - t0


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def cmd_verify_all(args) -> int:
    n = _bounded(args.max_arity, 2, 6, "--max-arity")
    items = suite(n)
    workers = _workers()
    results = []
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_check, items))
    else:
        for item in items:
            tag, v, dt = _run_check(item)
            results.append((tag, v, dt))
            if not v:
                break
    order = {tag: i for i, (tag, _, _) in enumerate(items)}
    results.sort(key=lambda r: order[r[0]])
    failed = [r for r in results if not r[1]]
    lines = [f"[{tag:>3}] {v.line()} ({dt:.2f}s)" for tag, v, dt in results]
    lines.append("all checks passed" if not failed else f"{len(failed)} check(s) failed")
    data = {
        "ok": not failed,
        "checks": [{"id": tag, "ok": v.ok, "name": v.name, "detail": v.detail, "witness": None if v.witness is None else repr(v.witness), "seconds": round(dt, 3)} for tag, v, dt in results],
    }
    _emit(args, "\n".join(lines), data)
    return 1 if failed else 0


# parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # let "--lam -1/2" through as a value, not an option
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="homotopy-trees", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("trees", help="tree enumeration").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("enum", parents=[common])
    c.add_argument("--kind", choices=sorted(_ENUM), default="stable")
    c.add_argument("-n", type=int, required=True)
    c.set_defaults(func=cmd_trees_enum)

    g = groups.add_parser("ombas", help="tree differentials").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("diff", parents=[common])
    c.add_argument("--tree", help="tree word, e.g. '(ab)c'")
    c.add_argument("--gauged", help="gauged tree, e.g. '(ab)c:BA'")
    c.set_defaults(func=cmd_ombas_diff)
    c = g.add_parser("dsq", parents=[common])
    c.add_argument("--max-arity", type=int, default=5)
    c.add_argument("--morph", action="store_true")
    c.set_defaults(func=cmd_ombas_dsq)

    g = groups.add_parser("ainf", help="A-infinity equations").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("diff", parents=[common])
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--convention", choices=("A", "B"), default="B")
    c.add_argument("--morph", action="store_true")
    c.set_defaults(func=cmd_ainf_diff)
    c = g.add_parser("convert", parents=[common])
    c.add_argument("--max-arity", type=int, default=5)
    c.set_defaults(func=cmd_ainf_convert)
    c = g.add_parser("chainmap", parents=[common])
    c.add_argument("--max-arity", type=int, default=5)
    c.add_argument("--morph", action="store_true")
    c.set_defaults(func=cmd_ainf_chainmap)

    g = groups.add_parser("poly", help="polytope realizations").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("build", cmd_poly_build), ("vertices", cmd_poly_vertices), ("boundary", cmd_poly_boundary)):
        c = g.add_parser(name, parents=[common])
        c.add_argument("--kind", choices=("assoc", "multi", "multipl", "K", "J"), default="assoc")
        src = c.add_mutually_exclusive_group(required=True)
        src.add_argument("-w", "--weights", help="comma-separated positive rationals")
        src.add_argument("-n", type=int, help="arity, unit weights")
        c.set_defaults(func=fn)

    g = groups.add_parser("cones", help="gauge cone decomposition").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("check", parents=[common])
    c.add_argument("--max-arity", type=int, default=4)
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_cones_check)
    c = g.add_parser("classify", parents=[common])
    c.add_argument("--tree", required=True)
    c.add_argument("--lam", required=True, help="gauge position, p/q")
    c.add_argument("--lengths", required=True, help="comma-separated edge lengths, p/q")
    c.set_defaults(func=cmd_cones_classify)

    g = groups.add_parser("eval", help="concrete instances").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("check", parents=[common])
    c.add_argument("instance", help="instance JSON file")
    c.add_argument("--max-arity", type=int)
    c.add_argument("--convention", choices=("A", "B"), default="B")
    c.set_defaults(func=cmd_eval_check)

    g = groups.add_parser("verify", help="acceptance suite").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("all", parents=[common])
    c.add_argument("--max-arity", type=int, default=4)
    c.set_defaults(func=cmd_verify_all)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
