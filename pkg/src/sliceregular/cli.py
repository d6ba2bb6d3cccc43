"""Command line client for the compute service.

Each invocation performs one request: the payload is assembled from
``--input`` (a JSON file or ``-`` for stdin) plus the option flags,
validated against the service's request models, executed (in-process by
default, or against a remote server with ``--url``), and the response is
printed as JSON on standard output.

Exit codes: 0 success, 1 validation error, 2 mathematical error (pole
evaluation, zero division and the like), 3 verification failure.
Diagnostics go to standard error as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import pydantic

from .errors import InputError, VerificationError
from .service import models as m
from .service import ops

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MATH = 2
EXIT_VERIFICATION = 3

_COMMANDS = {
    "eval": (m.EvalRequest, ops.op_eval),
    "star": (m.StarRequest, ops.op_star),
    "divisor": (m.DivisorRequest, ops.op_divisor),
    "construct": (m.ConstructRequest, ops.op_construct),
    "factor": (m.FactorRequest, ops.op_factor),
    "laurent": (m.LaurentRequest, ops.op_laurent),
    "roots": (m.RootsRequest, ops.op_roots),
    "isssa-demo": (m.IsssaRequest, ops.op_isssa),
    "verify": (m.VerifyRequest, ops.op_verify),
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which is reserved for
    # mathematical errors here; flag problems are validation errors
    def error(self, message):
        _emit_error("validation", message)
        raise SystemExit(EXIT_VALIDATION)


def _emit_error(kind: str, message: str, detail=None) -> None:
    body = {"error": kind, "message": message}
    if detail is not None:
        body["detail"] = detail
    print(json.dumps(body), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sliceregular",
        description="Quaternionic slice-function engine (thin client over the compute service)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="JSON payload file, or - for stdin")
        p.add_argument("--point", help="evaluation point as JSON [w, x, y, z]")
        p.add_argument("--truncation", type=int, default=None,
                       help="retained series order for inexact inputs (default 64)")
        p.add_argument("--tolerance", type=float, default=None,
                       help="check tolerance where applicable (default 1e-9)")
        p.add_argument("--genus", type=int, default=None,
                       help="convergence-factor order for construct (default 0)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for any randomized sampling")
        p.add_argument("--url", default=None,
                       help="base URL of a remote service; default runs in-process")

    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} operation")
        common(p)
        if name == "laurent":
            p.add_argument("--n-min", type=int, default=None)
            p.add_argument("--n-max", type=int, default=None)
        if name == "roots":
            p.add_argument("--ell", type=int, default=None)
        if name == "isssa-demo":
            p.add_argument("--d", type=int, default=None)
            p.add_argument("--ell", type=int, default=None)
            p.add_argument("--n-factors", type=int, default=None)
        if name == "verify":
            p.add_argument("--suite", default=None, help="suite name or 'all'")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_input(path: Optional[str]) -> dict:
    if path is None:
        return {}
    raw = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    data = json.loads(raw)
    if not isinstance(data, dict):
        raise InputError("the input payload must be a JSON object")
    return data


def _assemble_payload(args: argparse.Namespace) -> dict:
    payload = _load_input(args.input)
    if getattr(args, "point", None) is not None:
        payload["point"] = json.loads(args.point)
    flag_fields = {
        "truncation": "truncation",
        "tolerance": "tolerance",
        "genus": "genus",
        "seed": "seed",
        "suite": "suite",
        "ell": "ell",
        "d": "d",
        "n_factors": "n_factors",
        "n_min": "n_min",
        "n_max": "n_max",
    }
    for attr, key in flag_fields.items():
        value = getattr(args, attr, None)
        if value is not None:
            payload[key] = value
    # defaulted flags the request models do not carry themselves
    if args.command == "eval" and "truncation" not in payload:
        payload["truncation"] = 64
    return payload


def _emit(data: dict) -> None:
    print(json.dumps(data, indent=2))


def _run_remote(url: str, command: str, payload: dict) -> int:
    import httpx

    response = httpx.post(f"{url.rstrip('/')}/api/{command}", json=payload, timeout=300.0)
    if response.status_code >= 400:
        try:
            body = response.json()
        except ValueError:
            body = {"error": "validation", "message": response.text}
        _emit_error(body.get("error", "validation"), body.get("message", ""),
                    body.get("detail"))
        return EXIT_MATH if body.get("error") == "math" else EXIT_VALIDATION
    data = response.json()
    _emit(data)
    if command == "verify" and not data.get("passed", False):
        return EXIT_VERIFICATION
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    request_model, op = _COMMANDS[args.command]
    try:
        payload = _assemble_payload(args)
    except (json.JSONDecodeError, OSError, InputError) as exc:
        _emit_error("validation", str(exc))
        return EXIT_VALIDATION

    if args.url:
        return _run_remote(args.url, args.command, payload)

    try:
        request = request_model.model_validate(payload)
    except pydantic.ValidationError as exc:
        _emit_error("validation", "invalid request payload", json.loads(exc.json()))
        return EXIT_VALIDATION

    try:
        response = op(request)
    except VerificationError as exc:
        _emit_error("verification", str(exc), exc.witness)
        return EXIT_VERIFICATION
    except InputError as exc:
        _emit_error("validation", str(exc))
        return EXIT_VALIDATION
    except ArithmeticError as exc:
        _emit_error("math", str(exc))
        return EXIT_MATH

    data = json.loads(response.model_dump_json(exclude_none=True))
    _emit(data)
    if args.command == "verify" and not data["passed"]:
        return EXIT_VERIFICATION
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
