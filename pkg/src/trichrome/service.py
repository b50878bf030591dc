"""HTTP service exposing the toolkit: evaluate, compare, rewrite, translate,
search, and the verification suites.

Diagrams and scripts travel as DSL source text in both directions; matrices
come back as row-major lists of entry strings (exact ring elements or complex
doubles, depending on the requested mode).

Failed requests return status 422 with ``detail = {"kind", "message"}`` where
``kind`` is one of

* ``parse``       -- the source text does not lex/parse,
* ``validation``  -- a well-formed diagram breaks a structural invariant, a
                     flavour constraint, or an evaluation-mode constraint,
* ``script``      -- a rewrite script fails to replay (no match, ambiguous
                     match, or a step that is not semantics-preserving),
* ``usage``       -- a bad parameter (unknown suite, flavour, or target).

Run standalone with ``uvicorn trichrome.service:app`` or through the
``trichrome serve`` command; the command line otherwise drives this app
in-process without a socket.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .diagram import Diagram, DiagramError, Flavour
from .dsl import ParseError, parse_diagram, parse_script, print_diagram, print_script
from .functors import translate_S, translate_T
from .interp import EvalError, Matrix, equal_up_to_scalar, eval_float, evaluate
from .rules import ScriptError, ScriptStep, bounded_search, load_library, run_script
from .verify import run_suite

app = FastAPI(title="trichrome", version=__version__)


def _fail(kind: str, message: str) -> HTTPException:
    return HTTPException(status_code=422, detail={"kind": kind, "message": message})


def _parse(source: str, label: str) -> Diagram:
    try:
        return parse_diagram(source)
    except ParseError as exc:
        raise _fail("parse", f"{label}: {exc}") from exc
    except DiagramError as exc:
        raise _fail("validation", f"{label}: {exc}") from exc


def _flavour(name: str) -> Flavour:
    try:
        return Flavour(name)
    except ValueError as exc:
        raise _fail("usage", f"unknown flavour {name!r}") from exc


def _matrix(d: Diagram, float_mode: bool) -> Matrix:
    try:
        return eval_float(d) if float_mode else evaluate(d)
    except EvalError as exc:
        raise _fail("validation", str(exc)) from exc


# ---------------------------------------------------------------------------
# request / response models
# ---------------------------------------------------------------------------


class HealthResponse(BaseModel):
    status: str
    version: str


class EvalRequest(BaseModel):
    source: str
    float_mode: bool = False


class EvalResponse(BaseModel):
    rows: int
    cols: int
    exact: bool
    entries: list[list[str]]


class EqualRequest(BaseModel):
    left: str
    right: str
    float_mode: bool = False
    tol: float | None = None


class EqualResponse(BaseModel):
    equal: bool


class RewriteRequest(BaseModel):
    source: str
    script: str
    verify: bool = True
    tol: float = 1e-9


class RewriteResponse(BaseModel):
    result: str
    steps: list[str]


class TranslateRequest(BaseModel):
    source: str
    to: str


class TranslateResponse(BaseModel):
    result: str


class SearchRequest(BaseModel):
    left: str
    right: str
    depth: int = 6
    max_states: int = 30000
    flavour: str | None = None


class SearchResponse(BaseModel):
    found: bool
    script: str | None = None


class VerifyRequest(BaseModel):
    suite: str
    flavours: list[str] | None = None
    max_arity: int | None = None


class CheckItem(BaseModel):
    label: str
    ok: bool
    detail: str = ""


class VerifyResponse(BaseModel):
    suite: str
    ok: bool
    passed: int
    total: int
    report: str
    checks: list[CheckItem]


# ---------------------------------------------------------------------------
# endpoints
# ---------------------------------------------------------------------------


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/eval", response_model=EvalResponse)
def eval_diagram(req: EvalRequest) -> EvalResponse:
    m = _matrix(_parse(req.source, "diagram"), req.float_mode)
    rows, cols = m.shape
    return EvalResponse(rows=rows, cols=cols, exact=m.exact, entries=m.entry_texts())


@app.post("/equal", response_model=EqualResponse)
def equal_diagrams(req: EqualRequest) -> EqualResponse:
    left = _matrix(_parse(req.left, "left"), req.float_mode)
    right = _matrix(_parse(req.right, "right"), req.float_mode)
    return EqualResponse(equal=equal_up_to_scalar(left, right, req.tol))


@app.post("/rewrite", response_model=RewriteResponse)
def rewrite_diagram(req: RewriteRequest) -> RewriteResponse:
    host = _parse(req.source, "diagram")
    try:
        steps = parse_script(req.script)
    except ParseError as exc:
        raise _fail("parse", f"script: {exc}") from exc
    library = load_library(host.flavour)
    try:
        result = run_script(host, steps, library, verify=req.verify, tol=req.tol)
    except ScriptError as exc:
        raise _fail("script", str(exc)) from exc
    applied = [
        ScriptStep(rec.step.rule, rec.match.anchor).render() for rec in result.records
    ]
    return RewriteResponse(result=print_diagram(result.final), steps=applied)


@app.post("/translate", response_model=TranslateResponse)
def translate_diagram(req: TranslateRequest) -> TranslateResponse:
    d = _parse(req.source, "diagram")
    target = _flavour(req.to)
    if target is Flavour.RG:
        raise _fail("usage", "translation targets are rgb and rgplus")
    try:
        if target is Flavour.RGB:
            if d.flavour is Flavour.RGB:
                raise _fail("validation", "diagram is already three-colour")
            out = translate_T(d)
        else:
            if d.flavour is Flavour.RGPLUS:
                raise _fail("validation", "diagram is already in flavour rgplus")
            out = translate_S(d if d.flavour is Flavour.RGB else translate_T(d))
    except DiagramError as exc:
        raise _fail("validation", str(exc)) from exc
    return TranslateResponse(result=print_diagram(out))


@app.post("/search", response_model=SearchResponse)
def search_path(req: SearchRequest) -> SearchResponse:
    left = _parse(req.left, "left")
    right = _parse(req.right, "right")
    if left.flavour is not right.flavour:
        raise _fail(
            "validation",
            f"flavour mismatch: {left.flavour.value} vs {right.flavour.value}",
        )
    if req.flavour is not None and left.flavour is not _flavour(req.flavour):
        raise _fail(
            "validation",
            f"diagrams have flavour {left.flavour.value}, expected {req.flavour}",
        )
    library = load_library(left.flavour)
    steps = bounded_search(
        left, right, library, max_depth=req.depth, max_states=req.max_states
    )
    if steps is None:
        return SearchResponse(found=False)
    return SearchResponse(found=True, script=print_script(steps))


@app.post("/verify", response_model=VerifyResponse)
def verify_suite(req: VerifyRequest) -> VerifyResponse:
    flavours = (
        tuple(_flavour(v) for v in req.flavours) if req.flavours is not None else None
    )
    try:
        report = run_suite(req.suite, flavours=flavours, max_arity=req.max_arity)
    except ValueError as exc:
        raise _fail("usage", str(exc)) from exc
    return VerifyResponse(
        suite=report.suite,
        ok=report.ok,
        passed=report.passed,
        total=len(report.checks),
        report=report.render(),
        checks=[
            CheckItem(label=c.label, ok=c.ok, detail=c.detail) for c in report.checks
        ],
    )
