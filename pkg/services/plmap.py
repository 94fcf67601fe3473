"""Thompson-like maps: piecewise-linear homeomorphisms between dyadic intervals.

A :class:`PLMap` is stored as its breakpoint list (x_i, y_i). Every segment has a
power-of-two slope and the list is kept canonical: no interior breakpoint lies
on the line through its neighbours, while both endpoint samples are always
kept. Two maps are equal iff their canonical breakpoint lists are identical.

Composition is always "f after g" (x -> f(g(x))); every group product in the
toolkit goes through :func:`compose`.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

from services.dyadic import Dyadic, slope_exponent
from services.errors import PLMapError

Point = Tuple[Dyadic, Dyadic]


@dataclass(frozen=True)
class Interval:
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        object.__setattr__(self, "lo", Dyadic.coerce(self.lo))
        object.__setattr__(self, "hi", Dyadic.coerce(self.hi))
        if not self.lo < self.hi:
            raise PLMapError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Dyadic:
        return self.hi - self.lo

    def __contains__(self, x: Dyadic) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> List[str]:
        return [str(self.lo), str(self.hi)]

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


class PLMap:
    """An orientation-preserving PL homeomorphism with power-of-two slopes."""

    __slots__ = ("_xs", "_ys", "_ks")

    def __init__(self, points: Iterable[Tuple[Any, Any]]):
        xs, ys, ks = _assemble((Dyadic.coerce(x), Dyadic.coerce(y)) for x, y in points)
        self._xs = xs
        self._ys = ys
        self._ks = ks

    @classmethod
    def _from_points(cls, points: Iterable[Point]) -> "PLMap":
        xs, ys, ks = _assemble(points)
        obj = object.__new__(cls)
        obj._xs, obj._ys, obj._ks = xs, ys, ks
        return obj

    @classmethod
    def _from_lists(cls, xs: List[Dyadic], ys: List[Dyadic], ks: List[int]) -> "PLMap":
        obj = object.__new__(cls)
        obj._xs, obj._ys, obj._ks = xs, ys, ks
        return obj

    @classmethod
    def identity(cls, interval: Interval) -> "PLMap":
        return cls._from_lists([interval.lo, interval.hi], [interval.lo, interval.hi], [0])

    @classmethod
    def translation(cls, interval: Interval, by: Dyadic) -> "PLMap":
        return cls._from_lists([interval.lo, interval.hi], [interval.lo + by, interval.hi + by], [0])

    # -- accessors ----------------------------------------------------------

    @property
    def domain(self) -> Interval:
        return Interval(self._xs[0], self._xs[-1])

    @property
    def range(self) -> Interval:
        return Interval(self._ys[0], self._ys[-1])

    @property
    def breakpoints(self) -> List[Point]:
        return list(zip(self._xs, self._ys))

    @property
    def slopes(self) -> List[int]:
        """Exponents k_i: segment i has slope 2**k_i."""
        return list(self._ks)

    @property
    def xs(self) -> Sequence[Dyadic]:
        return self._xs

    @property
    def ys(self) -> Sequence[Dyadic]:
        return self._ys

    def __len__(self) -> int:
        return len(self._xs)

    def is_linear(self) -> bool:
        return len(self._ks) == 1

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: Union[Dyadic, int, str]) -> Dyadic:
        return self.eval(x)

    def eval(self, x: Union[Dyadic, int, str]) -> Dyadic:
        x = Dyadic.coerce(x)
        xs = self._xs
        if x < xs[0] or x > xs[-1]:
            raise PLMapError(f"{x} is outside the domain {self.domain}")
        i = min(bisect_right(xs, x) - 1, len(self._ks) - 1)
        return self._ys[i] + (x - xs[i]).mul_pow2(self._ks[i])

    def restrict(self, lo: Dyadic, hi: Dyadic) -> "PLMap":
        xs = self._xs
        if not (xs[0] <= lo < hi <= xs[-1]):
            raise PLMapError(f"[{lo}, {hi}] is not a subinterval of {self.domain}")
        i = bisect_right(xs, lo)
        j = bisect_left(xs, hi)
        points = [(lo, self.eval(lo))]
        points.extend(zip(xs[i:j], self._ys[i:j]))
        points.append((hi, self.eval(hi)))
        return PLMap._from_points(points)

    # -- group-like operations ---------------------------------------------

    def invert(self) -> "PLMap":
        return PLMap._from_lists(list(self._ys), list(self._xs), [-k for k in self._ks])

    def check(self) -> None:
        """Re-validate every invariant; raises PLMapError."""
        xs, ys, ks = _assemble(zip(self._xs, self._ys))
        if xs != self._xs or ys != self._ys or ks != self._ks:
            raise PLMapError("breakpoint list is not canonical")

    # -- equality / serialization -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self._xs == other._xs and self._ys == other._ys

    def __hash__(self) -> int:
        return hash((tuple(self._xs), tuple(self._ys)))

    def __repr__(self) -> str:
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self._xs, self._ys))
        return f"PLMap([{pts}])"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.to_json(),
            "breakpoints": [[str(x), str(y)] for x, y in zip(self._xs, self._ys)],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "PLMap":
        if not isinstance(payload, dict) or "breakpoints" not in payload:
            raise PLMapError("PLMap JSON needs a 'breakpoints' list")
        pl = cls((x, y) for x, y in payload["breakpoints"])
        domain = payload.get("domain")
        if domain is not None and [Dyadic.coerce(d) for d in domain] != [pl._xs[0], pl._xs[-1]]:
            raise PLMapError("declared domain does not match the breakpoints")
        return pl


def _assemble(points: Iterable[Point]) -> Tuple[List[Dyadic], List[Dyadic], List[int]]:
    """Validate points and drop interior breakpoints with equal slopes on both sides."""
    xs: List[Dyadic] = []
    ys: List[Dyadic] = []
    ks: List[int] = []
    for x, y in points:
        if xs:
            dx = x - xs[-1]
            dy = y - ys[-1]
            if dx.sign() <= 0:
                raise PLMapError(f"breakpoints must increase strictly in x (at x = {x})")
            if dy.sign() <= 0:
                raise PLMapError(f"map must be strictly increasing (at x = {x})")
            k = slope_exponent(dx, dy)
            if k is None:
                raise PLMapError(f"slope {dy}/{dx} on [{xs[-1]}, {x}] is not a power of two")
            if ks and ks[-1] == k:
                xs[-1] = x
                ys[-1] = y
                continue
            ks.append(k)
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise PLMapError("a map needs at least two breakpoints")
    return xs, ys, ks


def eval(f: PLMap, x: Dyadic) -> Dyadic:  # noqa: A001
    return f.eval(x)


def compose(f: PLMap, g: PLMap) -> PLMap:
    """Return f after g; the range of g must equal the domain of f."""
    gx, gy, gk = g._xs, g._ys, g._ks
    fx, fy, fk = f._xs, f._ys, f._ks
    if gy[0] != fx[0] or gy[-1] != fx[-1]:
        raise PLMapError(f"cannot compose: range {g.range} does not match domain {f.domain}")
    out: List[Point] = []
    i = j = 0
    n_g, n_f = len(gy), len(fx)
    while i < n_g and j < n_f:
        c = gy[i]._cmp(fx[j])
        if c == 0:
            out.append((gx[i], fy[j]))
            i += 1
            j += 1
        elif c < 0:
            out.append((gx[i], fy[j - 1] + (gy[i] - fx[j - 1]).mul_pow2(fk[j - 1])))
            i += 1
        else:
            out.append((gx[i - 1] + (fx[j] - gy[i - 1]).mul_pow2(-gk[i - 1]), fy[j]))
            j += 1
    return PLMap._from_points(out)


def invert(f: PLMap) -> PLMap:
    return f.invert()


def concat(pieces: Sequence[PLMap]) -> PLMap:
    """Glue maps on abutting intervals into one map on their union."""
    if not pieces:
        raise PLMapError("nothing to concatenate")
    points: List[Point] = list(zip(pieces[0]._xs, pieces[0]._ys))
    for piece in pieces[1:]:
        end_x, end_y = points[-1]
        if piece._xs[0] != end_x:
            raise PLMapError(f"gap between pieces at x = {end_x}")
        if piece._ys[0] != end_y:
            raise PLMapError(f"pieces disagree at x = {end_x}: {end_y} vs {piece._ys[0]}")
        points.extend(zip(piece._xs[1:], piece._ys[1:]))
    return PLMap._from_points(points)


def _binary_pieces(length: Dyadic) -> List[Dyadic]:
    """Powers of two summing to ``length``, largest first."""
    n, e = length.numerator, length.exponent
    return [Dyadic(1 << bit, e) for bit in range(n.bit_length() - 1, -1, -1) if n >> bit & 1]


def _split_at(pieces: List[Dyadic], index: int) -> None:
    half = pieces[index].mul_pow2(-1)
    pieces[index:index + 1] = [half, half]


def canonical_map(src: Interval, dst: Interval, choice: int = 0) -> PLMap:
    """A Thompson-like homeomorphism src -> dst.

    Seed 0: split both lengths into their binary expansions (largest piece
    first), halve the largest piece of the shorter partition until the counts
    agree, and map piece i linearly onto piece i. A seed s > 0 additionally
    halves the leftmost source piece and the rightmost target piece s + 1 times
    each, so the slope at the left endpoint grows with s and distinct seeds give
    distinct maps.
    """
    if choice < 0:
        raise PLMapError(f"choice seed must be non-negative, got {choice}")
    left = _binary_pieces(src.length)
    right = _binary_pieces(dst.length)
    while len(left) != len(right):
        shorter = left if len(left) < len(right) else right
        _split_at(shorter, shorter.index(max(shorter)))
    if choice:
        for _ in range(choice + 1):
            _split_at(left, 0)
            _split_at(right, len(right) - 1)
    points: List[Point] = [(src.lo, dst.lo)]
    x, y = src.lo, dst.lo
    for a, b in zip(left, right):
        x, y = x + a, y + b
        points.append((x, y))
    return PLMap._from_points(points)
