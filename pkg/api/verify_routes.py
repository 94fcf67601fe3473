"""
Verification blueprint: the CLI reports over HTTP.

Routes (prefix /api):
  GET  /relators, /named, /chain?kind=&n=, /tn?n=, /orbit?kind=&depth=&levels=
  POST /eval  {"word": "...", "at": "3/8", "convention": "default"}
  POST /root  {"n": K, "of_chain": M | "word": W, "seed": S | "value": V}

A failed verification is still a 200 with report.pass = false; bad input is a 400.
"""

import logging

from flask import Blueprint, request

from api.routes import error_response, success_response
from config.settings import (
    MATERIALIZE_MAX_LEVEL,
    MAX_WORD_EXPONENT,
    MAX_WORD_TOKENS,
    ORBIT_LEVELS,
    WORD_CONVENTION,
)
from services import verification
from services.errors import TBarError
from services.words import parse_runs

logger = logging.getLogger(__name__)

verify_api = Blueprint("verify_api", __name__)

MAX_CHAIN_LEVELS = 10
MAX_ORBIT_DEPTH = 8
MAX_ROOT_DEGREE = 64


class BadRequest(TBarError):
    pass


def _int_param(source, name, default=None, minimum=None, maximum=None):
    raw = source.get(name, default)
    if raw is None:
        raise BadRequest(f"{name} is required")
    if isinstance(raw, bool):
        raise BadRequest(f"{name} must be an integer, got {raw!r}")
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise BadRequest(f"{name} must be an integer, got {raw!r}") from None
    if minimum is not None and value < minimum:
        raise BadRequest(f"{name} must be at least {minimum}")
    if maximum is not None and value > maximum:
        raise BadRequest(f"{name} must be at most {maximum}")
    return value


def _json_body():
    payload = request.get_json(silent=True)
    if payload is None:
        payload = {}
    if not isinstance(payload, dict):
        raise BadRequest("request body must be a JSON object")
    return payload


def _word_param(source, name):
    """A word string within the HTTP size limits, or None when absent."""
    word = source.get(name)
    if word is None:
        return None
    if not isinstance(word, str):
        raise BadRequest(f"{name} must be a string")
    if len(word.split()) > MAX_WORD_TOKENS:
        raise BadRequest(f"{name} has more than {MAX_WORD_TOKENS} tokens")
    if any(abs(k) > MAX_WORD_EXPONENT for _, k in parse_runs(word)):
        raise BadRequest(f"{name} has an exponent above {MAX_WORD_EXPONENT}")
    return word


def _handle(fn):
    """Run a report builder and wrap its result in the response envelope."""
    try:
        return success_response(fn())
    except TBarError as e:
        return error_response(str(e), e.status_code)
    except Exception:
        logger.exception("Verification: unexpected error")
        return error_response("Internal server error", 500)


@verify_api.route("/relators", methods=["GET"])
def get_relators():
    convention = request.args.get("convention", WORD_CONVENTION)
    return _handle(lambda: verification.relators(convention=convention).to_dict())


@verify_api.route("/named", methods=["GET"])
def get_named():
    convention = request.args.get("convention", WORD_CONVENTION)
    return _handle(lambda: verification.named(convention).to_dict())


@verify_api.route("/chain", methods=["GET"])
def get_chain():
    def build():
        kind = request.args.get("kind", "standard")
        n = _int_param(request.args, "n", minimum=1, maximum=MAX_CHAIN_LEVELS)
        c, report = verification.chain(kind, n)
        data = report.to_dict()
        if request.args.get("emit") in ("1", "true"):
            data["chain"] = c.to_dict(MATERIALIZE_MAX_LEVEL)
        return data

    return _handle(build)


@verify_api.route("/tn", methods=["GET"])
def get_tn():
    def build():
        n = _int_param(request.args, "n", minimum=3, maximum=MAX_CHAIN_LEVELS)
        return verification.tn(n, request.args.get("convention", WORD_CONVENTION)).to_dict()

    return _handle(build)


@verify_api.route("/orbit", methods=["GET"])
def get_orbit():
    def build():
        kind = request.args.get("kind", "exotic")
        depth = _int_param(request.args, "depth", default=4, minimum=0, maximum=MAX_ORBIT_DEPTH)
        levels = _int_param(request.args, "levels", default=ORBIT_LEVELS, minimum=1, maximum=MATERIALIZE_MAX_LEVEL)
        points, report = verification.orbit(kind, depth, levels)
        return {"report": report.to_dict(), "size": len(points)}

    return _handle(build)


@verify_api.route("/eval", methods=["POST"])
def post_eval():
    def build():
        payload = _json_body()
        word = _word_param(payload, "word")
        at = payload.get("at")
        if word is None or at is None:
            raise BadRequest("word (string) and at (dyadic string) are required")
        value, element = verification.evaluate_at(word, str(at), payload.get("convention", WORD_CONVENTION))
        return {"value": str(value), "element": element.to_dict()}

    return _handle(build)


@verify_api.route("/root", methods=["POST"])
def post_root():
    def build():
        payload = _json_body()
        n = _int_param(payload, "n", minimum=2, maximum=MAX_ROOT_DEGREE)
        if "seed" in payload and "value" in payload:
            raise BadRequest("seed and value are mutually exclusive")
        if payload.get("of_chain") is not None and payload.get("word") is not None:
            raise BadRequest("of_chain and word are mutually exclusive")
        word = _word_param(payload, "word")
        seed = _int_param(payload, "seed", default=0, minimum=0)
        of_chain = payload.get("of_chain")
        if of_chain is not None:
            of_chain = _int_param(payload, "of_chain", minimum=1, maximum=MATERIALIZE_MAX_LEVEL)
        value = payload.get("value")
        element, report = verification.root(
            n, seed=seed, value=str(value) if value is not None else None, of_chain=of_chain,
            word=word,
        )
        return {"report": report.to_dict(), "element": element.to_dict()}

    return _handle(build)
