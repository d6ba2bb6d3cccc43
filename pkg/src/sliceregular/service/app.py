"""FastAPI application exposing the engine as a JSON compute service.

Every endpoint is stateless and pure, so the service scales to any number
of concurrent clients.  Domain failures map to structured error bodies:
precondition violations come back as 422 validation errors and
mathematically undefined requests (pole evaluation, zero division) as
400 with ``"error": "math"``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..errors import InputError
from . import models as m
from . import ops


def create_app() -> FastAPI:
    app = FastAPI(
        title="sliceregular",
        description="Quaternionic slice-function engine: star products, "
        "spherical divisors, Weierstrass-type products, characters and valuations.",
        version="0.1.0",
    )

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        # strip offending input values: they may not be JSON-encodable
        detail = [
            {"type": e.get("type"), "loc": list(e.get("loc", ())), "msg": e.get("msg")}
            for e in exc.errors()
        ]
        return JSONResponse(
            status_code=422,
            content={"error": "validation", "message": "invalid request payload",
                     "detail": detail},
        )

    @app.exception_handler(InputError)
    async def _input_handler(request: Request, exc: InputError):
        return JSONResponse(
            status_code=422,
            content={"error": "validation", "message": str(exc)},
        )

    @app.exception_handler(ArithmeticError)
    async def _math_handler(request: Request, exc: ArithmeticError):
        return JSONResponse(
            status_code=400,
            content={"error": "math", "message": str(exc)},
        )

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/eval", response_model_exclude_none=True, response_model=m.EvalResponse)
    def eval_endpoint(req: m.EvalRequest):
        return ops.op_eval(req)

    @app.post("/api/star", response_model_exclude_none=True, response_model=m.StarResponse)
    def star_endpoint(req: m.StarRequest):
        return ops.op_star(req)

    @app.post("/api/divisor", response_model_exclude_none=True, response_model=m.DivisorResponse)
    def divisor_endpoint(req: m.DivisorRequest):
        return ops.op_divisor(req)

    @app.post("/api/construct", response_model_exclude_none=True, response_model=m.ConstructResponse)
    def construct_endpoint(req: m.ConstructRequest):
        return ops.op_construct(req)

    @app.post("/api/factor", response_model_exclude_none=True, response_model=m.FactorResponse)
    def factor_endpoint(req: m.FactorRequest):
        return ops.op_factor(req)

    @app.post("/api/laurent", response_model_exclude_none=True, response_model=m.LaurentResponse)
    def laurent_endpoint(req: m.LaurentRequest):
        return ops.op_laurent(req)

    @app.post("/api/roots", response_model_exclude_none=True, response_model=m.RootsResponse)
    def roots_endpoint(req: m.RootsRequest):
        return ops.op_roots(req)

    @app.post("/api/isssa-demo", response_model_exclude_none=True, response_model=m.IsssaResponse)
    def isssa_endpoint(req: m.IsssaRequest):
        return ops.op_isssa(req)

    @app.post("/api/verify", response_model_exclude_none=True, response_model=m.VerifyResponse)
    def verify_endpoint(req: m.VerifyRequest):
        return ops.op_verify(req)

    return app


app = create_app()
