"""Command line front end.

Subcommands: ``spectrum``, ``resolvent``, ``verify``, ``oracle-compare``,
``example-pde``, and ``serve``.  The CLI is a thin client of the shared
operation layer: it parses arguments and files, calls the same handlers the
HTTP service exposes (in process by default, over HTTP with ``--url``), and
writes the returned documents.  Exit codes: 0 success, 1 validation or usage
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import api, reporting
from .errors import (ConvergenceError, MultipointError, PointSpectrumError,
                     SingularMatrixError, ValidationError)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="multipoint",
                     description="spectra and resolvents of coupled i d/dt + A operators")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="point spectrum report for a problem file")
    sp.add_argument("--problem", required=True, help="problem JSON file")
    sp.add_argument("--window", nargs=2, type=float, required=True,
                    metavar=("LO", "HI"))
    sp.add_argument("--norm-probe", default=None,
                    help="comma-separated Im(lambda) values for resolvent-norm probes")
    sp.add_argument("--out", default=None, help="write the report JSON here")
    sp.add_argument("--csv", default=None, help="write an eigenvalue CSV table here")
    sp.add_argument("--url", default=None, help="send the request to a running service")

    rp = sub.add_parser("resolvent", help="apply the resolvent to sampled data")
    rp.add_argument("--problem", required=True)
    rp.add_argument("--lambda", dest="lam", nargs=2, type=float, required=True,
                    metavar=("RE", "IM"))
    rp.add_argument("--f", action="append", required=True, metavar="FILE",
                    help="function sample JSON file; repeat per interval")
    rp.add_argument("--out", default=None)
    rp.add_argument("--url", default=None)

    vp = sub.add_parser("verify", help="boundary-map round trips and Green defects")
    vp.add_argument("--problem", required=True)
    vp.add_argument("--pairs", type=int, default=100)
    vp.add_argument("--seed", type=int, default=20260810)
    vp.add_argument("--out", default=None)
    vp.add_argument("--url", default=None)

    op = sub.add_parser("oracle-compare",
                        help="cross-validate the spectrum against the RK4 determinant sweep")
    op.add_argument("--problem", required=True)
    op.add_argument("--window", nargs=2, type=float, required=True)
    op.add_argument("--tol", type=float, default=None,
                    help="match tolerance; defaults to the problem's quadrature_rtol")
    op.add_argument("--samples", type=int, default=4001)
    op.add_argument("--rk4-steps", type=int, default=2048)
    op.add_argument("--refine-tol", type=float, default=1e-9)
    op.add_argument("--out", default=None)
    op.add_argument("--url", default=None)

    ep = sub.add_parser("example-pde",
                        help="mode-truncated report for the sign-flipping model PDE")
    ep.add_argument("--modes", type=int, required=True)
    ep.add_argument("--psi", type=float, default=0.0)
    ep.add_argument("--phi", type=float, default=0.0)
    ep.add_argument("--window", nargs=2, type=float, required=True)
    ep.add_argument("--norm-probe", default=None)
    ep.add_argument("--out", default=None)
    ep.add_argument("--csv", default=None)
    ep.add_argument("--url", default=None)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    return parser


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _parse_probe_list(text: str | None) -> list[float]:
    if not text:
        return []
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad --norm-probe list {text!r}") from exc


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _post(url: str, endpoint: str, payload: dict) -> dict:
    import httpx

    response = httpx.post(url.rstrip("/") + endpoint, json=payload, timeout=600.0)
    if response.status_code != 200:
        raise ValidationError(f"service returned {response.status_code}: {response.text}")
    return response.json()


def _csv_from_report_dict(doc: dict) -> str:
    lines = ["lambda,theta,branch_n,mode_j,ode_residual,bc_residual"]
    for e in doc["entries"]:
        lines.append(",".join([
            reporting.format_float(e["lambda"]), reporting.format_float(e["theta"]),
            str(e["branch_n"]), str(e["mode_j"]),
            reporting.format_float(e["ode_residual"]),
            reporting.format_float(e["bc_residual"]),
        ]))
    return "\n".join(lines) + "\n"


def _run_spectrum(args) -> int:
    probes = _parse_probe_list(args.norm_probe)
    if args.url:
        doc = _post(args.url, "/spectrum", {
            "problem": _read_json(args.problem),
            "window": list(args.window), "norm_probe": probes})
    else:
        doc = api.spectrum_report(_read_json(args.problem), tuple(args.window), probes)
    _emit(reporting.json_dumps(doc), args.out)
    if args.csv:
        _emit(_csv_from_report_dict(doc), args.csv)
    return EXIT_OK


def _run_resolvent(args) -> int:
    lam = complex(args.lam[0], args.lam[1])
    f_docs = [_read_json(path) for path in args.f]
    if args.url:
        doc = _post(args.url, "/resolvent", {
            "problem": _read_json(args.problem),
            "lam": list(args.lam), "f": f_docs})
    else:
        doc = api.resolvent_solution(_read_json(args.problem), lam, f_docs)
    _emit(reporting.json_dumps(doc), args.out)
    return EXIT_OK


def _run_verify(args) -> int:
    if args.url:
        doc = _post(args.url, "/verify", {
            "problem": _read_json(args.problem),
            "pairs": args.pairs, "seed": args.seed})
    else:
        doc = api.verify_boundary_triplets(_read_json(args.problem),
                                           pairs=args.pairs, seed=args.seed)
    _emit(reporting.json_dumps(doc), args.out)
    return EXIT_OK if doc["pass"] else EXIT_NUMERICAL


def _run_oracle_compare(args) -> int:
    if args.url:
        doc = _post(args.url, "/oracle-compare", {
            "problem": _read_json(args.problem), "window": list(args.window),
            "tol": args.tol, "samples": args.samples,
            "rk4_steps": args.rk4_steps, "refine_tol": args.refine_tol})
    else:
        doc = api.oracle_compare(
            _read_json(args.problem), tuple(args.window), tol=args.tol,
            samples=args.samples, rk4_steps=args.rk4_steps,
            refine_tol=args.refine_tol)
    _emit(reporting.json_dumps(doc), args.out)
    return EXIT_OK if doc["pass"] else EXIT_NUMERICAL


def _run_example_pde(args) -> int:
    probes = _parse_probe_list(args.norm_probe)
    if args.url:
        doc = _post(args.url, "/example-pde", {
            "modes": args.modes, "psi": args.psi, "phi": args.phi,
            "window": list(args.window), "norm_probe": probes})
    else:
        doc = api.example_pde_report(args.modes, args.psi, args.phi,
                                     tuple(args.window), probes)
    _emit(reporting.json_dumps(doc), args.out)
    if args.csv:
        _emit(_csv_from_report_dict(doc), args.csv)
    return EXIT_OK


def _run_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_RUNNERS = {
    "spectrum": _run_spectrum,
    "resolvent": _run_resolvent,
    "verify": _run_verify,
    "oracle-compare": _run_oracle_compare,
    "example-pde": _run_example_pde,
    "serve": _run_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    try:
        return _RUNNERS[args.command](args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except (ConvergenceError, SingularMatrixError, PointSpectrumError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except MultipointError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
