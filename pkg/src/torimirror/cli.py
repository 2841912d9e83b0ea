"""Command-line entry point.

Exit codes: 0 success or affirmative answer, 1 negative answer or failed
invariant, 2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import jsonio
from .bundle import (
    CocycleError,
    NotHolomorphic,
    check_cocycle,
    commutant_dimension,
    compare_bundles,
    is_holomorphic,
    make_unitary_set,
    pullback_unitary_set,
    rank_data,
    standard_unitary_set,
)
from .exactmat import as_int_matrix, det, identity, matmul, snf
from .jsonio import InputError
from .lagrangian import compare_branes, is_brane
from .mirror import BIJECTION, apply_functor, inverse_representative, make_family, naive_map, verify_bijection
from .torus import DEFAULT_TOL, InvalidTorus

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


def resolve_tol(args) -> float | None:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("HMS_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise InputError(f"HMS_TOL={env!r} is not a number")
    return None


def _emit(text: str, out) -> None:
    if out:
        jsonio.write_text(out, text)
    else:
        sys.stdout.write(text)


def _load(path, kind: str) -> dict:
    got, payload = jsonio.read_object(path)
    if got != kind:
        raise InputError(f"{path}: expected a {kind} file, got {got}")
    return payload


def _torus(path, tol):
    return jsonio.torus_from_json(_load(path, "torus"), tol)


def _fmt(v) -> str:
    return "[" + ", ".join("%.12g" % x for x in np.asarray(v, dtype=float)) + "]"


def cmd_snf(args, tol) -> int:
    doc = jsonio.read_json(args.matrix)
    if isinstance(doc, dict):
        doc = doc.get("payload", doc).get("A")
    try:
        A = as_int_matrix(doc)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{args.matrix}: {exc}") from exc
    cert = snf(A)
    ok = (
        matmul(matmul(cert.left, A), cert.right) == cert.diagonal()
        and abs(det(cert.left)) == 1
        and abs(det(cert.right)) == 1
        and matmul(cert.left, cert.left_inv) == identity(len(A))
    )
    _emit(jsonio.canonical_dumps(jsonio.certificate_to_json(cert)), args.output)
    if not ok:
        print("certificate recheck failed", file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_mkbundle(args, tol) -> int:
    payload = _load(args.spec, "bundle")
    E = jsonio.bundle_from_json(payload, tol or DEFAULT_TOL)
    _emit(jsonio.canonical_dumps(jsonio.envelope("bundle", jsonio.bundle_to_json(E))), args.output)
    return EXIT_OK


def cmd_check(args, tol) -> int:
    kind, payload = jsonio.read_object(args.object)
    torus = _torus(args.torus, tol)
    tol = torus.tol
    rank = rank_data(payload["r"], payload["A"])
    results = {}
    if kind == "bundle":
        if "U" in payload:
            uset = make_unitary_set(
                [jsonio.cmatrix_from_json(m) for m in payload["U"]["V"]],
                [jsonio.cmatrix_from_json(m) for m in payload["U"]["U"]],
                tol,
            )
        else:
            uset = pullback_unitary_set(standard_unitary_set(rank), rank)
        results["order matches rank"] = uset.order == rank.rprime
        results["cocycle"] = results["order matches rank"] and check_cocycle(uset, rank.r, rank.A, tol)
        print(f"commutant_dimension: {commutant_dimension(uset)}")
    elif kind != "brane":
        raise InputError(f"check expects a bundle or brane file, got {kind}")
    results["holomorphic (AT symmetric)"] = is_holomorphic(rank.A, torus, tol)
    results["brane (omega A, B A symmetric)"] = is_brane(rank.A, torus, tol)
    print(f"rank r' = {rank.rprime}, elementary divisors {list(rank.cert.diag)}")
    for name, ok in results.items():
        print(f"{name}: {'ok' if ok else 'FAILED'}")
    return EXIT_OK if all(results.values()) else EXIT_NEGATIVE


def cmd_iso(args, tol) -> int:
    ka, pa = jsonio.read_object(args.first)
    kb, pb = jsonio.read_object(args.second)
    if ka != kb or ka not in ("bundle", "brane"):
        raise InputError(f"cannot compare a {ka} with a {kb}")
    torus = _torus(args.torus, tol)
    if ka == "bundle":
        res = compare_bundles(jsonio.bundle_from_json(pa, torus.tol), jsonio.bundle_from_json(pb, torus.tol), torus)
        print("isomorphic" if res.isomorphic else "not-isomorphic")
        print(f"reason: {res.reason}")
        if res.alpha is not None:
            print(f"alpha: {_fmt(res.alpha)}")
            print(f"beta: {_fmt(res.beta)}")
            print(f"left*alpha/(2 pi r): {_fmt(res.alpha_coords)}")
            print(f"right^t*beta/(2 pi r): {_fmt(res.beta_coords)}")
    else:
        La, Lb = jsonio.brane_from_json(pa), jsonio.brane_from_json(pb)
        for L in (La, Lb):
            if not is_brane(L.A, torus):
                print("brane condition failed: omega A or B A is not symmetric", file=sys.stderr)
                return EXIT_NEGATIVE
        res = compare_branes(La, Lb, torus.tol)
        print("isomorphic" if res.isomorphic else "not-isomorphic")
        print(f"reason: {res.reason}")
        if res.p_coords is not None:
            print(f"left*(p-p')/(2 pi r): {_fmt(res.p_coords)}")
            print(f"right^t*(q-q')/(2 pi r): {_fmt(res.q_coords)}")
        if res.holonomy_witness is not None:
            print(f"holonomy witness N: {_fmt(res.holonomy_witness)}")
    return EXIT_OK if res.isomorphic else EXIT_NEGATIVE


def _mirror(args, tol, mapper) -> int:
    torus = _torus(args.torus, tol)
    E = jsonio.bundle_from_json(_load(args.bundle, "bundle"), torus.tol)
    L = mapper(E, torus)
    _emit(jsonio.canonical_dumps(jsonio.envelope("brane", jsonio.brane_to_json(L))), args.output)
    if getattr(args, "figure", None):
        from .figures import plot_multisection

        plot_multisection(L, args.figure)
    return EXIT_OK


def cmd_mirror(args, tol) -> int:
    return _mirror(args, tol, apply_functor)


def cmd_naive_mirror(args, tol) -> int:
    return _mirror(args, tol, naive_map)


def cmd_invert(args, tol) -> int:
    L = jsonio.brane_from_json(_load(args.brane, "brane"))
    if args.torus:
        torus = _torus(args.torus, tol)
        if not is_brane(L.A, torus):
            print("brane condition failed: omega A or B A is not symmetric", file=sys.stderr)
            return EXIT_NEGATIVE
    E = inverse_representative(L)
    _emit(jsonio.canonical_dumps(jsonio.envelope("bundle", jsonio.bundle_to_json(E))), args.output)
    return EXIT_OK


def cmd_verify_bijection(args, tol) -> int:
    payload = _load(args.family, "family")
    torus = jsonio.torus_from_json(payload["torus"], tol)
    family = make_family(
        torus,
        [(p["r"], p["A"]) for p in payload["pairs"]],
        jsonio.parse_rational(payload["grid_step_pi"]),
        [jsonio.parse_rational(t) for t in payload.get("twists_pi", [0])],
        payload.get("twist_direction", 0),
    )
    report = verify_bijection(family, naive=args.naive).to_json()
    _emit(jsonio.canonical_dumps(report), args.output)
    if args.figure:
        from .figures import plot_class_map

        plot_class_map(report, args.figure)
    if report["verdict"] != BIJECTION:
        print(f"verdict: {report['verdict']}", file=sys.stderr)
        for w in report["witnesses"][:5]:
            print(f"witness: {w}", file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torimirror", description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=None, help="numerical tolerance (default 1e-9, env HMS_TOL)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("snf", help="Smith normal form certificate of an integer matrix")
    sp.add_argument("matrix")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_snf)

    sp = sub.add_parser("mkbundle", help="materialize the standard transition matrices of a bundle file")
    sp.add_argument("spec")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_mkbundle)

    sp = sub.add_parser("check", help="cocycle, holomorphicity and brane conditions")
    sp.add_argument("object")
    sp.add_argument("torus")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("iso", help="isomorphism test for two bundles or two branes")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("torus")
    sp.set_defaults(func=cmd_iso)

    for name, func, helptext in (
        ("mirror", cmd_mirror, "image of a bundle under the mirror map"),
        ("naive-mirror", cmd_naive_mirror, "image under the map that forgets the transition matrices"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("bundle")
        sp.add_argument("torus")
        sp.add_argument("-o", "--output")
        sp.add_argument("--figure", help="write a multi-section plot of the image brane")
        sp.set_defaults(func=func)

    sp = sub.add_parser("invert", help="bundle representative mapping onto a brane")
    sp.add_argument("brane")
    sp.add_argument("--torus")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("verify-bijection", help="classify a finite family on both sides")
    sp.add_argument("family")
    sp.add_argument("-o", "--output")
    sp.add_argument("--naive", action="store_true", help="use the naive map instead of the mirror map")
    sp.add_argument("--figure", help="write the class-map incidence plot")
    sp.set_defaults(func=cmd_verify_bijection)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = resolve_tol(args)
        return args.func(args, tol)
    except (InputError, InvalidTorus, ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, (NotHolomorphic, CocycleError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NEGATIVE
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
