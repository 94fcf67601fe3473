"""Elements of T-bar: PL_2 homeomorphisms of the line commuting with z(x) = x + 1.

An element is stored by its fundamental map, the restriction to [0, 1], with
anchor samples at 0 and 1 always present. Periodicity f(x + k) = f(x) + k
determines it everywhere, so equality is structural equality of canonical
fundamentals.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Any, Dict, Iterable, List, Optional, Protocol, Tuple, Union

from services.dyadic import ONE, ZERO, Dyadic
from services.errors import ElementError, PLMapError
from services.plmap import PLMap, Point, compose as compose_maps

DyadicLike = Union[Dyadic, int, str]


class LineMap(Protocol):
    """What root extraction needs from an element it takes roots of."""

    def eval(self, x: DyadicLike) -> Dyadic: ...

    def restrict(self, lo: Dyadic, hi: Dyadic) -> PLMap: ...

    def displacement_sign(self) -> int: ...


class TBarElement:
    __slots__ = ("_fundamental",)

    def __init__(self, fundamental: PLMap):
        if fundamental.xs[0] != ZERO or fundamental.xs[-1] != ONE:
            raise ElementError(f"fundamental map must have domain [0, 1], got {fundamental.domain}")
        if fundamental.ys[-1] != fundamental.ys[0] + 1:
            raise ElementError(
                f"f(1) must equal f(0) + 1 to commute with z, got f(0) = {fundamental.ys[0]}, "
                f"f(1) = {fundamental.ys[-1]}"
            )
        self._fundamental = fundamental

    @classmethod
    def from_fundamental(cls, m: PLMap) -> "TBarElement":
        return cls(m)

    @classmethod
    def from_table(cls, points: Iterable[Tuple[DyadicLike, DyadicLike]]) -> "TBarElement":
        """Build from breakpoints on [0, 1]; slope and monotonicity errors become ElementError."""
        try:
            fundamental = PLMap(points)
        except PLMapError as exc:
            raise ElementError(str(exc)) from exc
        return cls(fundamental)

    @classmethod
    def from_window(cls, window: PLMap) -> "TBarElement":
        """Rebuild an element from its restriction to any window [u, u + 1]."""
        xs, ys = window.xs, window.ys
        u = xs[0]
        if xs[-1] != u + 1 or ys[-1] != ys[0] + 1:
            raise ElementError("window must map a unit interval onto a unit interval")
        t = u.floor()
        if u == t:
            return cls(PLMap._from_points((x - t, y - t) for x, y in zip(xs, ys)))
        offset = u - t
        head: List[Point] = []
        tail: List[Point] = []
        for x, y in zip(xs, ys):
            shifted = x - t
            if shifted < 1:
                tail.append((shifted, y - t))
            elif shifted - 1 > ZERO and shifted - 1 < offset:
                head.append((shifted - 1, y - t - 1))
        y0 = window.eval(Dyadic(t + 1)) - (t + 1)
        points: List[Point] = [(ZERO, y0), *head, *tail, (ONE, y0 + 1)]
        return cls(PLMap._from_points(points))

    @classmethod
    def identity(cls) -> "TBarElement":
        return cls.translation(ZERO)

    @classmethod
    def translation(cls, by: DyadicLike) -> "TBarElement":
        by = Dyadic.coerce(by)
        return cls(PLMap._from_lists([ZERO, ONE], [by, by + 1], [0]))

    # -- accessors ----------------------------------------------------------

    @property
    def fundamental(self) -> PLMap:
        return self._fundamental

    @property
    def breakpoints(self) -> List[Point]:
        return self._fundamental.breakpoints

    def breakpoint_count(self) -> int:
        return len(self._fundamental)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: DyadicLike) -> Dyadic:
        return self.eval(x)

    def eval(self, x: DyadicLike) -> Dyadic:
        x = Dyadic.coerce(x)
        k = x.floor()
        return self._fundamental.eval(x - k) + k

    def restrict(self, lo: DyadicLike, hi: DyadicLike) -> PLMap:
        """The periodic extension restricted to [lo, hi]."""
        lo, hi = Dyadic.coerce(lo), Dyadic.coerce(hi)
        if not lo < hi:
            raise ElementError(f"empty interval [{lo}, {hi}]")
        xs, ys = self._fundamental.xs, self._fundamental.ys
        last = len(xs) - 1
        points: List[Point] = [(lo, self.eval(lo))]
        for j in range(lo.floor(), hi.floor() + 1):
            i0 = bisect_right(xs, lo - j)
            i1 = min(bisect_left(xs, hi - j), last)
            points.extend((xs[t] + j, ys[t] + j) for t in range(i0, i1))
        points.append((hi, self.eval(hi)))
        return PLMap._from_points(points)

    # -- group structure ----------------------------------------------------

    def __mul__(self, other: "TBarElement") -> "TBarElement":
        if not isinstance(other, TBarElement):
            return NotImplemented
        return compose(self, other)

    def __invert__(self) -> "TBarElement":
        return invert(self)

    def __pow__(self, k: int) -> "TBarElement":
        return power(self, k)

    def is_identity(self) -> bool:
        return is_power_of_z(self) == 0

    def displacement_sign(self) -> int:
        """+1 if f(x) > x everywhere, -1 if f(x) < x everywhere, 0 if f has a fixed point."""
        displacements = [y - x for x, y in self._fundamental.breakpoints]
        if all(d.sign() > 0 for d in displacements):
            return 1
        if all(d.sign() < 0 for d in displacements):
            return -1
        return 0

    def check(self) -> None:
        self._fundamental.check()
        TBarElement(self._fundamental)

    # -- equality / serialization -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TBarElement):
            return NotImplemented
        return self._fundamental == other._fundamental

    def __hash__(self) -> int:
        return hash(self._fundamental)

    def __repr__(self) -> str:
        return f"TBarElement({self._fundamental!r})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "tbar",
            "breakpoints": [[str(x), str(y)] for x, y in self._fundamental.breakpoints],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "TBarElement":
        if not isinstance(payload, dict) or payload.get("type") != "tbar":
            raise ElementError("element JSON must have type 'tbar'")
        points = payload.get("breakpoints")
        if not isinstance(points, list):
            raise ElementError("element JSON needs a 'breakpoints' list")
        return cls.from_table(points)


Z = TBarElement.translation(1)
IDENTITY = TBarElement.identity()


def from_fundamental(m: PLMap) -> TBarElement:
    return TBarElement.from_fundamental(m)


def eval(e: TBarElement, x: DyadicLike) -> Dyadic:  # noqa: A001
    return e.eval(x)


def compose(e1: TBarElement, e2: TBarElement) -> TBarElement:
    """e1 after e2."""
    inner = e2.fundamental
    v = inner.ys[0]
    outer = e1.restrict(v, v + 1)
    return TBarElement(compose_maps(outer, inner))


def invert(e: TBarElement) -> TBarElement:
    return TBarElement.from_window(e.fundamental.invert())


def power(e: TBarElement, k: int) -> TBarElement:
    if k < 0:
        return power(invert(e), -k)
    result = IDENTITY
    base = e
    while k:
        if k & 1:
            result = compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def equals(e1: TBarElement, e2: TBarElement) -> bool:
    return e1 == e2


def is_identity(e: TBarElement) -> bool:
    return e.is_identity()


def is_power_of_z(e: TBarElement) -> Optional[int]:
    """n when e == z**n (n = 0 for the identity), else None."""
    m = e.fundamental
    if not m.is_linear() or m.slopes[0] != 0:
        return None
    shift = m.ys[0]
    return shift.floor() if shift.is_integer() else None


def displacement_sign(e: TBarElement) -> int:
    return e.displacement_sign()


def fixed_point_free(e: TBarElement) -> bool:
    return e.displacement_sign() != 0


def commutes(e1: TBarElement, e2: TBarElement) -> bool:
    return compose(e1, e2) == compose(e2, e1)
