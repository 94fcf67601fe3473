"""Chains s_1 = z, s_n^n = s_{n-1}: copies of the rationals inside T-bar.

Levels above the first are kept as lazily defined roots of the previous level,
so deep chains cost only their germs until someone asks for a full element.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Dict, List, Optional, Set, Union

from models.report import VerificationReport
from services.dyadic import HALF, ZERO, Dyadic
from services.errors import ChainError
from services.plmap import PLMap
from services.roots import RootElement, lazy_root, verify_root_locally
from services.tbar import Z, TBarElement, commutes, invert, is_power_of_z, power

logger = logging.getLogger(__name__)

STANDARD = "standard"
EXOTIC = "exotic"
CUSTOM = "custom-seeded"

Level = Union[TBarElement, RootElement]


def d(n: int) -> Dyadic:
    """d_1 = 1, d_n = d_{n-1} / 2^(n-1), so d_n = 2^(-n(n-1)/2)."""
    if n < 1:
        raise ChainError(f"d_n is defined for n >= 1, got {n}")
    return Dyadic(1, n * (n - 1) // 2)


def exotic_value(n: int) -> Dyadic:
    """s_n(0) = 1/2 + 2^-n on the exotic chain."""
    return HALF + Dyadic(1, n)


@dataclass
class Chain:
    kind: str
    levels: List[Level] = field(default_factory=list)
    seed: int = 0

    @property
    def length(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> Level:
        if not 1 <= n <= self.length:
            raise ChainError(f"chain has levels 1..{self.length}, asked for {n}")
        return self.levels[n - 1]

    def element(self, n: int) -> TBarElement:
        """s_n as a full element; expands lazily defined levels."""
        lvl = self.level(n)
        return lvl.materialize() if isinstance(lvl, RootElement) else lvl

    def with_level(self, n: int, element: Level) -> "Chain":
        levels = list(self.levels)
        levels[n - 1] = element
        return Chain(self.kind, levels, self.seed)

    def to_dict(self, materialize_max_level: int = 7) -> Dict[str, Any]:
        elements = []
        for n in range(1, self.length + 1):
            lvl = self.level(n)
            if isinstance(lvl, RootElement) and n > materialize_max_level:
                elements.append({"type": "root", "of_level": n - 1, "germ": lvl.germ.to_dict()})
            else:
                elements.append(self.element(n).to_dict())
        return {"kind": self.kind, "elements": elements}


def _build(kind: str, n_levels: int, seed: int = 0) -> Chain:
    if n_levels < 1:
        raise ChainError(f"a chain needs at least one level, got {n_levels}")
    levels: List[Level] = [Z]
    for n in range(2, n_levels + 1):
        prev = levels[-1]
        if kind == EXOTIC:
            levels.append(lazy_root(prev, n, value=exotic_value(n)))
        else:
            levels.append(lazy_root(prev, n, seed))
        logger.info("Built %s chain level %s", kind, n)
    return Chain(kind, levels, seed)


def standard_chain(n_levels: int) -> Chain:
    return _build(STANDARD, n_levels)


def exotic_chain(n_levels: int) -> Chain:
    return _build(EXOTIC, n_levels)


def seeded_chain(n_levels: int, seed: int) -> Chain:
    """Same recursion as the standard chain with a non-default piece choice."""
    return _build(STANDARD if seed == 0 else CUSTOM, n_levels, seed)


def standard_clauses(s: Level, n: int) -> List[tuple]:
    """s_n = x + d_n on [0, d_n] and 2x on [d_n, d_{n-1}/2]."""
    dn = d(n)
    head = s.restrict(ZERO, dn)
    out = [(f"s_{n} = x + {dn} on [0, {dn}]", head == PLMap([(ZERO, dn), (dn, dn + dn)]))]
    if n >= 3:
        upper = d(n - 1).mul_pow2(-1)
        body = s.restrict(dn, upper)
        out.append((f"s_{n} = 2x on [{dn}, {upper}]", body == PLMap([(dn, dn + dn), (upper, upper + upper)])))
    return out


def _step_check(c: Chain, n: int, materialize_max_level: int) -> tuple:
    lvl, prev = c.level(n), c.level(n - 1)
    if n > materialize_max_level and isinstance(lvl, RootElement) and lvl.base is prev and lvl.n == n:
        ok = verify_root_locally(prev, lvl.germ)
        return ok, f"local check on [0, {lvl.germ.top}]"
    current = c.element(n)
    ok = power(current, n) == c.element(n - 1)
    return ok, f"materialized, {current.breakpoint_count()} breakpoints"


def verify_chain(
    c: Chain,
    materialize_max_level: int = 7,
    order_check_max_level: int = 6,
    commute_max_level: int = 4,
) -> VerificationReport:
    """Check s_1 = z, every step s_n^n = s_{n-1}, and that each level reaches the center."""
    report = VerificationReport(f"{c.kind} chain with {c.length} levels")
    s1 = c.level(1)
    report.check("s_1 = z", isinstance(s1, TBarElement) and s1 == Z)
    report.check("s_1 has infinite order", is_power_of_z(c.element(1)) == 1, "s_1 = z^1")

    steps_ok = True
    for n in range(2, c.length + 1):
        ok, detail = _step_check(c, n, materialize_max_level)
        report.check(f"s_{n}^{n} = s_{n - 1}", ok, detail)
        steps_ok = steps_ok and ok
        if not ok:
            logger.warning("Chain step failed at level %s", n)

    for n in range(2, c.length + 1):
        lvl = c.level(n)
        report.check(f"s_{n} has positive displacement", lvl.displacement_sign() == 1)
        if c.kind == STANDARD:
            value = lvl.eval(ZERO)
            report.check(f"s_{n}(0) = d_{n}", value == d(n), str(value))
            for name, ok in standard_clauses(lvl, n):
                report.check(name, ok)
        elif c.kind == EXOTIC:
            value = lvl.eval(ZERO)
            report.check(f"s_{n}(0) = 1/2 + 2^-{n}", value == exotic_value(n), str(value))

    for n in range(1, c.length + 1):
        if n <= order_check_max_level:
            report.check(f"s_{n}^{n}! = z", power(c.element(n), factorial(n)) == Z, "recomputed")
        else:
            report.check(f"s_{n}^{n}! = z", steps_ok, "telescoped from the verified steps")

    top = min(c.length, commute_max_level)
    for i in range(1, top + 1):
        for j in range(i + 1, top + 1):
            report.check(f"s_{i} and s_{j} commute", commutes(c.element(i), c.element(j)))
    return report


def orbit_sample(c: Chain, depth: int, levels: int = 4, max_points: Optional[int] = None) -> Set[Dyadic]:
    """Images of 0 under words of length <= depth in s_1..s_levels and their inverses."""
    if depth < 0:
        raise ChainError(f"depth must be non-negative, got {depth}")
    gens: List[TBarElement] = []
    for n in range(1, min(levels, c.length) + 1):
        e = c.element(n)
        gens.extend((e, invert(e)))
    seen: Set[Dyadic] = {ZERO}
    frontier = [ZERO]
    for _ in range(depth):
        fresh = {g.eval(x) for x in frontier for g in gens} - seen
        seen |= fresh
        if max_points is not None and len(seen) > max_points:
            raise ChainError(f"orbit sample passed {max_points} points; lower depth or levels")
        frontier = sorted(fresh)
    return seen


def orbit_violations(points: Set[Dyadic], lo: Dyadic = ZERO, hi: Dyadic = HALF) -> List[Dyadic]:
    """Points whose fractional part lies in (lo, hi]."""
    out = []
    for x in sorted(points):
        frac = x - x.floor()
        if lo < frac <= hi:
            out.append(x)
    return out


def orbit_report(c: Chain, depth: int, levels: int = 4, points: Optional[Set[Dyadic]] = None) -> VerificationReport:
    if points is None:
        points = orbit_sample(c, depth, levels)
    report = VerificationReport(f"orbit of 0 under levels 1..{min(levels, c.length)}, depth {depth}")
    if c.kind == EXOTIC:
        bad = orbit_violations(points)
        detail = f"{len(points)} points" + (f", first offender {bad[0]}" if bad else "")
        report.check("orbit avoids (0, 1/2] mod 1", not bad, detail)
    else:
        reached = [n for n in range(2, min(levels, c.length) + 1) if d(n) in points]
        expected = list(range(2, min(levels, c.length) + 1)) if depth >= 1 else []
        report.check("orbit contains d_n for every sampled level", reached == expected,
                     ", ".join(f"d_{n}" for n in reached) or "none needed")
    return report

