"""Report builders shared by the command line and the HTTP API."""
from __future__ import annotations

import logging
from math import factorial
from typing import Optional, Tuple, Union

from config.settings import (
    CENTER_SEARCH_BOUND,
    COMMUTE_MAX_LEVEL,
    MATERIALIZE_MAX_LEVEL,
    ORDER_CHECK_MAX_LEVEL,
    ORBIT_LEVELS,
    ORBIT_MAX_POINTS,
    PRODUCT_FORM_MAX_N,
    WORD_CONVENTION,
)
from models.report import VerificationReport
from services import qembed, words
from services.dyadic import ZERO, Dyadic
from services.errors import ChainError, RootError
from services.roots import center_exponent, nth_root, nth_root_with_value
from services.tbar import Z, TBarElement, commutes, compose, invert, power

logger = logging.getLogger(__name__)


def relators(inject_fault: bool = False, convention: str = WORD_CONVENTION) -> VerificationReport:
    return words.relator_report(convention, inject_fault=inject_fault)


def named(convention: str = WORD_CONVENTION) -> VerificationReport:
    return words.named_report(convention)


def calibrate() -> VerificationReport:
    return words.calibration_report()


def tn(n: int, convention: str = WORD_CONVENTION) -> VerificationReport:
    if n < 3:
        raise ChainError(f"t_n is defined for n >= 3, got {n}")
    return words.tn_report(n, convention)


def build_chain(kind: str, n: int, seed: int = 0) -> qembed.Chain:
    if kind == qembed.STANDARD:
        return qembed.standard_chain(n) if seed == 0 else qembed.seeded_chain(n, seed)
    if kind == qembed.EXOTIC:
        return qembed.exotic_chain(n)
    raise ChainError(f"unknown chain kind {kind!r}; use 'standard' or 'exotic'")


def chain(kind: str, n: int, inject_fault: bool = False) -> Tuple[qembed.Chain, VerificationReport]:
    c = build_chain(kind, n)
    if inject_fault:
        if c.length < 2:
            raise ChainError("fault injection replaces s_2, so the chain needs at least two levels")
        c = c.with_level(2, Z)
    report = qembed.verify_chain(
        c,
        materialize_max_level=MATERIALIZE_MAX_LEVEL,
        order_check_max_level=ORDER_CHECK_MAX_LEVEL,
        commute_max_level=COMMUTE_MAX_LEVEL,
    )
    return c, report


def chain_words(
    n: int,
    compare_geometric: bool = False,
    both_forms: bool = False,
    convention: str = WORD_CONVENTION,
) -> VerificationReport:
    """Checks on the words s_1..s_n."""
    if n < 1:
        raise ChainError(f"n must be at least 1, got {n}")
    report = VerificationReport(f"chain words s_1..s_{n}")
    geometric = qembed.standard_chain(n) if compare_geometric else None
    previous: Optional[TBarElement] = None
    for k in range(1, n + 1):
        s = words.evaluate(words.s_expr(k, "closed", PRODUCT_FORM_MAX_N), convention)
        if previous is None:
            report.check("s_1 = z", s == Z)
        else:
            report.check(f"word s_{k}^{k} = s_{k - 1}", power(s, k) == previous, f"{s.breakpoint_count()} breakpoints")
        if geometric is not None:
            report.check(f"word s_{k} = geometric s_{k}", s == geometric.element(k))
        if both_forms and 4 <= k <= PRODUCT_FORM_MAX_N:
            product = words.evaluate(words.s_expr(k, "product", PRODUCT_FORM_MAX_N), convention)
            report.check(f"product form of s_{k} = closed form", product == s)
        previous = s
    return report


def _root_base(of_chain: Optional[int], word: Optional[str], convention: str) -> Tuple[TBarElement, int, bool]:
    """(g, m, whether g^m = z still needs checking)."""
    if word is not None:
        g = words.evaluate(word, convention)
        m = center_exponent(g, CENTER_SEARCH_BOUND)
        if m is None:
            m_inv = center_exponent(invert(g), CENTER_SEARCH_BOUND)
            if m_inv is None:
                raise RootError(f"no power g^m with |m| <= {CENTER_SEARCH_BOUND} equals z")
            m = -m_inv
        return g, m, False
    if of_chain is not None:
        if of_chain < 1:
            raise ChainError(f"chain level must be at least 1, got {of_chain}")
        c = qembed.standard_chain(of_chain)
        return c.element(of_chain), factorial(of_chain), of_chain <= ORDER_CHECK_MAX_LEVEL
    return Z, 1, True


def root(
    n: int,
    seed: int = 0,
    value: Union[Dyadic, str, None] = None,
    of_chain: Optional[int] = None,
    word: Optional[str] = None,
    inject_fault: bool = False,
    convention: str = WORD_CONVENTION,
) -> Tuple[TBarElement, VerificationReport]:
    g, m, check_order = _root_base(of_chain, word, convention)
    if value is not None:
        value = Dyadic.coerce(value)
        f = nth_root_with_value(g, n, m, value, check_order=check_order)
    else:
        f = nth_root(g, n, m, seed, check_order=check_order)
    target = compose(g, Z) if inject_fault else g
    report = VerificationReport(f"{n}th root with g^{m} = z")
    report.check(f"f^{n} = g", power(f, n) == target, f"{f.breakpoint_count()} breakpoints")
    report.check("f commutes with z", commutes(f, Z))
    if value is not None:
        report.check(f"f(0) = {value}", f.eval(ZERO) == value)
    logger.info("Root n=%s m=%s f(0)=%s", n, m, f.eval(ZERO))
    return f, report


def orbit(kind: str, depth: int, levels: int = ORBIT_LEVELS) -> Tuple[list, VerificationReport]:
    if not 1 <= levels <= MATERIALIZE_MAX_LEVEL:
        raise ChainError(f"orbit levels must be between 1 and {MATERIALIZE_MAX_LEVEL}, got {levels}")
    c = build_chain(kind, levels)
    points = qembed.orbit_sample(c, depth, levels, max_points=ORBIT_MAX_POINTS)
    return sorted(points), qembed.orbit_report(c, depth, levels, points)


def evaluate_at(word: str, at: Union[Dyadic, str], convention: str = WORD_CONVENTION) -> Tuple[Dyadic, TBarElement]:
    element = words.evaluate(word, convention)
    return element.eval(Dyadic.coerce(at)), element
