"""nth roots of fixed-point-free elements.

Given g with g(0) > 0, choose dyadics 0 = p_0 < p_1 < ... < p_n = g(0) and
Thompson-like pieces f_i: [p_{i-1}, p_i] -> [p_i, p_{i+1}] for i < n. The closing
piece f_n = g f_1^-1 ... f_{n-1}^-1 maps [p_{n-1}, p_n] onto [p_n, g(p_1)]. The
glued map on [0, g(0)] (the germ) extends to the whole line by
f = g^k f g^-k on [g^k(0), g^{k+1}(0)], and then f^n = g. When g^m = z the root
also satisfies f^{mn} = z, so it commutes with z and lies in T-bar.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from services.dyadic import ONE, ZERO, Dyadic
from services.errors import ElementError, PLMapError, RootError
from services.plmap import Interval, PLMap, canonical_map, compose, concat
from services.tbar import Z, LineMap, TBarElement, invert, power

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChoiceSeed:
    seed: int = 0

    def __post_init__(self):
        if self.seed < 0:
            raise RootError(f"choice seed must be non-negative, got {self.seed}")


SeedLike = Union[ChoiceSeed, int]


def _seed(choice: SeedLike) -> int:
    return choice.seed if isinstance(choice, ChoiceSeed) else ChoiceSeed(choice).seed


@dataclass(frozen=True)
class RootGerm:
    n: int
    partition: Tuple[Dyadic, ...]
    pieces: Tuple[PLMap, ...] = field(repr=False)

    @property
    def top(self) -> Dyadic:
        """p_n, which equals g(0)."""
        return self.partition[-1]

    @cached_property
    def glued(self) -> PLMap:
        """The root on [0, g(0)]."""
        return concat(self.pieces)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "partition": [str(p) for p in self.partition],
            "pieces": [piece.to_dict() for piece in self.pieces],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "RootGerm":
        try:
            return cls(
                n=int(payload["n"]),
                partition=tuple(Dyadic.coerce(p) for p in payload["partition"]),
                pieces=tuple(PLMap.from_dict(piece) for piece in payload["pieces"]),
            )
        except (KeyError, TypeError) as exc:
            raise RootError(f"malformed root germ JSON: {exc}") from exc


def default_partition(top: Dyadic, n: int) -> List[Dyadic]:
    """p_i = g(0) * 2^(i - n); reproduces the x + d_n and 2x clauses of the standard chain."""
    return [ZERO] + [top.mul_pow2(i - n) for i in range(1, n + 1)]


def prescribed_partition(top: Dyadic, n: int, value: Dyadic) -> List[Dyadic]:
    """Partition with p_1 = value and p_2..p_{n-1} spread between value and top.

    p_i = value + (top - value) * (2^(i-1) - 1) / (2^(n-1) - 1), rounded down to the
    grid of spacing 2^-(max(exp(value), exp(top)) + n).
    """
    if not ZERO < value < top:
        raise RootError(f"prescribed value {value} must lie strictly between 0 and g(0) = {top}")
    grid = max(value.exponent, top.exponent) + n
    v_int = value.mul_pow2(grid).numerator
    c_int = top.mul_pow2(grid).numerator
    den = (1 << (n - 1)) - 1
    partition = [ZERO, value]
    for i in range(2, n):
        partition.append(Dyadic(v_int + ((c_int - v_int) * ((1 << (i - 1)) - 1)) // den, grid))
    partition.append(top)
    if any(not a < b for a, b in zip(partition, partition[1:])):
        raise RootError(f"could not place a strictly increasing partition through {value}")
    return partition


def root_germ(
    g: LineMap,
    n: int,
    choice: SeedLike = 0,
    partition: Optional[Sequence[Dyadic]] = None,
) -> RootGerm:
    """Germ of an nth root of a fixed-point-free g with positive displacement."""
    if n < 2:
        raise RootError(f"root degree must be at least 2, got {n}")
    sign = g.displacement_sign()
    if sign == 0:
        raise RootError("element has a fixed point, so it has no root of this kind")
    if sign < 0:
        raise RootError("element moves points left; take the root of its inverse instead")
    seed = _seed(choice)
    top = g.eval(ZERO)
    p = list(partition) if partition is not None else default_partition(top, n)
    if len(p) != n + 1 or p[0] != ZERO or p[-1] != top:
        raise RootError(f"partition must run from 0 to g(0) = {top} in {n} steps")
    if any(not a < b for a, b in zip(p, p[1:])):
        raise RootError("partition must be strictly increasing")

    pieces: List[PLMap] = [
        canonical_map(Interval(p[i - 1], p[i]), Interval(p[i], p[i + 1]), seed) for i in range(1, n)
    ]
    closing = pieces[-1].invert()
    for piece in reversed(pieces[:-1]):
        closing = compose(piece.invert(), closing)
    closing = compose(g.restrict(ZERO, p[1]), closing)
    pieces.append(closing)
    logger.debug("Root germ n=%s seed=%s partition=%s", n, seed, [str(x) for x in p])
    return RootGerm(n=n, partition=tuple(p), pieces=tuple(pieces))


def germ_consistent(g: LineMap, germ: RootGerm) -> bool:
    """f_n o ... o f_1 reproduces g on [0, p_1]."""
    h = germ.pieces[0]
    for piece in germ.pieces[1:]:
        h = compose(piece, h)
    return h == g.restrict(ZERO, germ.partition[1])


def verify_root_locally(g: LineMap, germ: RootGerm) -> bool:
    """Exact check that f^n == g on [0, g(0)], using only germ data.

    The extension f = g^k f g^-k commutes with g by construction, so agreement
    on this fundamental interval of g is agreement on the whole line.
    """
    p, f, n = germ.partition, germ.pieces, germ.n
    if not germ_consistent(g, germ):
        return False
    segments = [g.restrict(p[j - 1], p[j]) for j in range(1, n + 1)]
    # f near [g(0), g(p_{n-1})] is g f_j g^-1
    conjugated = [compose(segments[j], compose(f[j - 1], segments[j - 1].invert())) for j in range(1, n)]
    for i in range(1, n + 1):
        h = f[i - 1]
        for j in range(i, n):
            h = compose(f[j], h)
        for j in range(1, i):
            h = compose(conjugated[j - 1], h)
        if h != segments[i - 1]:
            logger.warning("Root check failed on [%s, %s]", p[i - 1], p[i])
            return False
    return True


def eval_root(g: LineMap, germ: RootGerm, x: Union[Dyadic, int, str]) -> Dyadic:
    """Value of the germ-extended root at any point of the line."""
    x = Dyadic.coerce(x)
    top = germ.top
    if ZERO <= x <= top:
        return germ.glued.eval(x)
    base = g.materialize() if isinstance(g, RootElement) else g
    inverse = invert(base)
    y, k = x, 0
    while y > top:
        y = inverse.eval(y)
        k += 1
    while y < ZERO:
        y = base.eval(y)
        k -= 1
    value = germ.glued.eval(y)
    step = base if k > 0 else inverse
    for _ in range(abs(k)):
        value = step.eval(value)
    return value


def materialize_root(g: TBarElement, germ: RootGerm) -> TBarElement:
    """Expand the germ-defined root to its fundamental map on [0, 1]."""
    h = germ.glued
    pieces = [h]
    lo, hi = ZERO, germ.top
    while hi < ONE:
        g_here = g.restrict(lo, hi)
        g_next = g.restrict(h.ys[0], h.ys[-1])
        h = compose(g_next, compose(h, g_here.invert()))
        lo, hi = g_here.ys[0], g_here.ys[-1]
        pieces.append(h)
    if hi != ONE:
        raise RootError(f"orbit of 0 under the base skips 1 (reached {hi}); no power of it equals z")
    try:
        element = TBarElement(concat(pieces))
    except (ElementError, PLMapError) as exc:
        raise RootError(f"root does not commute with z: {exc}") from exc
    logger.info("Materialized root n=%s over %s intervals, %s breakpoints",
                germ.n, len(pieces), element.breakpoint_count())
    return element


class RootElement:
    """An element defined as the germ-extended nth root of a base element.

    Values on [0, g(0)] come straight from the germ; everything else goes
    through :meth:`materialize`, which is cached.
    """

    def __init__(self, base: LineMap, germ: RootGerm):
        self.base = base
        self.germ = germ
        self._materialized: Optional[TBarElement] = None

    @property
    def n(self) -> int:
        return self.germ.n

    def eval(self, x: Union[Dyadic, int, str]) -> Dyadic:
        return eval_root(self.base, self.germ, x)

    def restrict(self, lo: Dyadic, hi: Dyadic) -> PLMap:
        if ZERO <= lo and hi <= self.germ.top:
            return self.germ.glued.restrict(lo, hi)
        return self.materialize().restrict(lo, hi)

    def displacement_sign(self) -> int:
        glued = self.germ.glued
        return 1 if all((y - x).sign() > 0 for x, y in glued.breakpoints) else 0

    def materialize(self) -> TBarElement:
        if self._materialized is None:
            base = self.base.materialize() if isinstance(self.base, RootElement) else self.base
            self._materialized = materialize_root(base, self.germ)
        return self._materialized

    def is_materialized(self) -> bool:
        return self._materialized is not None

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "root", "germ": self.germ.to_dict()}


def _check_order(g: TBarElement, m: int) -> None:
    if m == 0:
        raise RootError("m must be non-zero")
    if power(g, m) != Z:
        logger.warning("Root request rejected: g^%s is not z", m)
        raise RootError(f"g^{m} is not z")


def lazy_root(
    g: LineMap,
    n: int,
    choice: SeedLike = 0,
    value: Optional[Dyadic] = None,
) -> RootElement:
    """Root of a positive g without expanding it; ``value`` prescribes f(0)."""
    partition = None
    if value is not None:
        partition = prescribed_partition(g.eval(ZERO), n, Dyadic.coerce(value))
    germ = root_germ(g, n, choice if value is None else 0, partition=partition)
    return RootElement(g, germ)


def nth_root(g: TBarElement, n: int, m: int, choice: SeedLike = 0, check_order: bool = True) -> TBarElement:
    """An f in T-bar with f^n == g, where g^m == z."""
    if n < 2:
        raise RootError(f"root degree must be at least 2, got {n}")
    if check_order:
        _check_order(g, m)
    if m < 0:
        return invert(nth_root(invert(g), n, -m, choice, check_order=False))
    return lazy_root(g, n, choice).materialize()


def nth_root_with_value(
    g: TBarElement, n: int, m: int, v: Union[Dyadic, int, str], check_order: bool = True
) -> TBarElement:
    """Like :func:`nth_root` but with f(0) == v prescribed."""
    if n < 2:
        raise RootError(f"root degree must be at least 2, got {n}")
    if check_order:
        _check_order(g, m)
    if m < 0:
        raise RootError("prescribed-value roots need g^m == z with m > 0")
    return lazy_root(g, n, value=Dyadic.coerce(v)).materialize()


def center_exponent(g: TBarElement, bound: int = 64) -> Optional[int]:
    """Smallest 1 <= m <= bound with g^m == z, else None."""
    current = g
    for m in range(1, bound + 1):
        if current == Z:
            return m
        current = current * g
    return None
