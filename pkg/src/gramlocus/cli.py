"""Command-line interface.

One executable with subcommands for every operation in the package.
Exit codes: 0 success, 1 input or validation error, 2 verification failure
or violations found.  Tensor input defaults to stdin so commands pipe:

    gramlocus vertex --n 3 --k 2 | gramlocus gram
"""
from __future__ import annotations

import argparse
import io
import os
import sys
from typing import Optional, Sequence

from . import experiments, hosvd, jsonio, locus, sos, tri_invariants
from .flatten import GramTuple, gram_det_general, gram_tuple
from .tensor import BinaryTensor, GeneralTensor, vertex_tensor

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_tensor(path: Optional[str]) -> BinaryTensor | GeneralTensor:
    if path is None:
        return jsonio.load_tensor(sys.stdin)
    with open(path, "r", encoding="utf-8") as handle:
        return jsonio.load_tensor(handle)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")


def _parse_point(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ValueError(f"--d expects comma-separated numbers, got {text!r}") from exc
    if len(values) < 2:
        raise ValueError("--d needs at least two coordinates")
    return values


def _cmd_gram(args) -> int:
    t = _read_tensor(args.input)
    if isinstance(t, BinaryTensor):
        g = gram_tuple(t)
        doc = {"d": list(g.dets), "t": g.trace}
    else:
        dets = [gram_det_general(t, i) for i in range(1, t.order + 1)]
        doc = {"d": dets, "t": float(t.entries @ t.entries)}
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def _cmd_svals(args) -> int:
    t = _read_tensor(args.input)
    if not isinstance(t, BinaryTensor):
        raise ValueError("svals requires a binary (all dims 2) tensor")
    pairs = hosvd.singular_pairs(gram_tuple(t))
    doc = [{"sigma_max": p.sigma_max, "sigma_min": p.sigma_min} for p in pairs]
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def _cmd_member(args) -> int:
    d = _parse_point(args.d)
    mode = args.mode
    if mode is None:
        mode = "n3" if len(d) == 3 else ("conjecture" if len(d) >= 4 else "hull")
    if mode == "n3":
        m = locus.locus_membership_n3(d, tol=args.tol)
    elif mode == "conjecture":
        m = locus.locus_membership_conjecture(d, tol=args.tol)
    else:
        m = locus.hull_membership(d, tol=args.tol)
    nonneg = all(x >= 0.0 for x in d)
    doc = {"status": m.status, "region": m.region,
           "q1": locus.q1(d), "q2": locus.q2(d) if nonneg else None}
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def _cmd_sos(args) -> int:
    try:
        cert = sos.build_certificate(args.n, args.pivot, verify=args.verify)
    except sos.CertificateError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _emit(jsonio.dumps(sos.certificate_to_json(cert)), args.out)
    return EXIT_OK


def _cmd_hyperdet(args) -> int:
    t = _read_tensor(args.input)
    if not isinstance(t, BinaryTensor):
        raise ValueError("hyperdet requires a binary 2x2x2 tensor")
    vec = tri_invariants.invariant_vector(t)
    doc = {"hyperdet": vec.hyperdet,
           "invariant_vector": {"d1": vec.d1, "d2": vec.d2, "d3": vec.d3,
                                "t": vec.trace, "hyperdet": vec.hyperdet}}
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def _cmd_equiv(args) -> int:
    with open(args.a, "r", encoding="utf-8") as handle:
        a = jsonio.load_tensor(handle)
    with open(args.b, "r", encoding="utf-8") as handle:
        b = jsonio.load_tensor(handle)
    if not isinstance(a, BinaryTensor) or not isinstance(b, BinaryTensor):
        raise ValueError("equiv requires binary 2x2x2 tensors")
    result = tri_invariants.equiv_search(a, b, grid=args.grid,
                                         threshold=args.threshold)
    if result is None:
        doc = {"found": False}
    else:
        doc = {"found": True, "residual": result.residual,
               "transform": [{"angle": angle, "reflect": reflect}
                             for angle, reflect in result.transform.factors]}
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    report = experiments.fuzz(args.n, args.mode, args.samples, args.seed,
                              threads=args.threads)
    _emit(jsonio.dumps(report.to_json()), args.out)
    return EXIT_FAILED if report.violations > 0 else EXIT_OK


def _cmd_surface(args) -> int:
    points = experiments.surface_grid(args.res, coords=args.coords)
    buffer = io.StringIO()
    experiments.write_surface_csv(points, args.coords, buffer)
    _emit(buffer.getvalue(), args.out)
    if args.plot is not None:
        from . import plots

        plots.render_surface(points, args.coords, args.plot)
    return EXIT_OK


def _cmd_vertex(args) -> int:
    t = vertex_tensor(args.n, args.k)
    _emit(jsonio.dumps(jsonio.tensor_to_json(t)), args.out)
    return EXIT_OK


def _cmd_examples(args) -> int:
    report = experiments.boundary_examples_report()
    _emit(jsonio.dumps(report), args.out)
    return EXIT_OK if report["all_passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gramlocus",
                     description="Gram determinants of binary tensor flattenings: "
                                 "certificates, membership, invariants, experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gram", help="principal Gram determinants of a tensor")
    p.add_argument("--input", help="tensor JSON file (default stdin)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_gram)

    p = sub.add_parser("svals", help="singular value pairs of each flattening")
    p.add_argument("--input", help="tensor JSON file (default stdin)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_svals)

    p = sub.add_parser("member", help="membership of a determinant tuple")
    p.add_argument("--d", required=True,
                   help="comma-separated tuple, e.g. 0.125,0.125,0.2071")
    p.add_argument("--tol", type=float, default=locus.DEFAULT_TOL)
    p.add_argument("--mode", choices=("n3", "conjecture", "hull"),
                   help="default: n3 for 3 coordinates, conjecture for more")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("sos", help="sum-of-squares certificate for a facet")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pivot", type=int, required=True)
    p.add_argument("--verify", action="store_true",
                   help="re-expand with exact integers; exit 2 on mismatch")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_sos)

    p = sub.add_parser("hyperdet", help="2x2x2 hyperdeterminant and invariants")
    p.add_argument("--input", help="tensor JSON file (default stdin)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_hyperdet)

    p = sub.add_parser("equiv",
                       help="search an orthogonal transform taking --b to --a")
    p.add_argument("--a", required=True, help="target tensor JSON file")
    p.add_argument("--b", required=True, help="source tensor JSON file")
    p.add_argument("--grid", type=int, default=24, help="angle grid per slot")
    p.add_argument("--threshold", type=float, default=1e-6,
                   help="residual above this reports not found")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("fuzz", help="random-sample predicate violation counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=experiments.FUZZ_MODES, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_fuzz)

    p = sub.add_parser("surface", help="point cloud of the separating surface")
    p.add_argument("--res", type=int, required=True, help="grid resolution")
    p.add_argument("--coords", choices=("det", "sigma"), default="det")
    p.add_argument("--out", help="CSV output file (default stdout)")
    p.add_argument("--plot",
                   help="also render a 3-D scatter figure to this file")
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("vertex", help="unit tensor hitting a polytope vertex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True,
                   help="number of quarter coordinates, 2 <= k <= n")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_vertex)

    p = sub.add_parser("examples",
                       help="recompute the worked boundary examples and check them")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_examples)

    return parser


def run(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
