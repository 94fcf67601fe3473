"""Words in the generators a, b and their action on the line.

Text grammar: whitespace-separated tokens ``a``, ``b``, ``A``, ``B`` (upper case
is the inverse), each optionally followed by ``^k``. Words are kept freely
reduced. Long words such as the chain words s_n are built as :class:`Expr`
trees and evaluated structurally, since their flattenings grow factorially.

Convention: under ``Convention.DEFAULT`` the word ``x y`` acts as x after y,
so the rightmost letter is applied first.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

from config.settings import PRODUCT_FORM_MAX_N
from models.report import VerificationReport
from services.dyadic import ONE, ZERO, Dyadic
from services.errors import WordError
from services.plmap import PLMap
from services.qembed import d
from services.tbar import IDENTITY, Z, TBarElement, compose, invert, power

logger = logging.getLogger(__name__)

GENERATORS = ("a", "b")
Letter = Tuple[str, int]

_TOKEN_RE = re.compile(r"\A(?P<gen>[abAB])(?:\^(?P<exp>[-+]?\d+))?\Z")

# Restrictions to [0, 1] of the two generators.
A_TABLE = [("0", "1/2"), ("3/4", "7/8"), ("7/8", "1"), ("1", "3/2")]
B_TABLE = [("0", "1/2"), ("1/2", "3/4"), ("3/4", "1"), ("1", "3/2")]
A_ELEMENT = TBarElement.from_table(A_TABLE)
B_ELEMENT = TBarElement.from_table(B_TABLE)
_ELEMENTS = {"a": A_ELEMENT, "b": B_ELEMENT}

R_TABLE = [("0", "0"), ("1/4", "1/4"), ("1/2", "3/8"), ("5/8", "5/8"), ("1", "1")]


class Convention(str, Enum):
    DEFAULT = "default"
    FLIPPED = "flipped"

    @classmethod
    def coerce(cls, value: Union["Convention", str]) -> "Convention":
        try:
            return cls(value)
        except ValueError:
            raise WordError(f"unknown convention {value!r}; use 'default' or 'flipped'") from None


class Word:
    """A freely reduced word; letters are (generator, +1 or -1)."""

    __slots__ = ("_letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self._letters: Tuple[Letter, ...] = reduce_letters(letters)

    @classmethod
    def _reduced(cls, letters: Tuple[Letter, ...]) -> "Word":
        obj = object.__new__(cls)
        obj._letters = letters
        return obj

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return self._letters

    def __len__(self) -> int:
        return len(self._letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self._letters)

    def is_identity(self) -> bool:
        return not self._letters

    def syllables(self) -> List[Letter]:
        """Maximal runs as (generator, signed length)."""
        out: List[Letter] = []
        for gen, sign in self._letters:
            if out and out[-1][0] == gen:
                out[-1] = (gen, out[-1][1] + sign)
            else:
                out.append((gen, sign))
        return out

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert_word(self)

    def __pow__(self, k: int) -> "Word":
        return power_word(self, k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self._letters == other._letters

    def __hash__(self) -> int:
        return hash(self._letters)

    def tokens(self) -> List[str]:
        return [gen if sign > 0 else gen.upper() for gen, sign in self._letters]

    def __str__(self) -> str:
        return " ".join(self.tokens())

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def to_json(self) -> List[str]:
        return self.tokens()

    @classmethod
    def from_json(cls, tokens: Sequence[str]) -> "Word":
        if not isinstance(tokens, (list, tuple)):
            raise WordError("word JSON must be a list of tokens")
        return parse(" ".join(str(t) for t in tokens))


def reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for gen, sign in letters:
        if gen not in GENERATORS or sign not in (1, -1):
            raise WordError(f"invalid letter {(gen, sign)!r}")
        if stack and stack[-1][0] == gen and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((gen, sign))
    return tuple(stack)


def parse_runs(text: str) -> List[Letter]:
    """Freely reduced runs (generator, signed exponent) of a word, without expanding x^k."""
    runs: List[Letter] = []
    for token in text.split():
        match = _TOKEN_RE.match(token)
        if not match:
            raise WordError(f"bad token {token!r} in word {text!r}")
        gen = match.group("gen")
        k = int(match.group("exp") or 1)
        if gen.isupper():
            gen, k = gen.lower(), -k
        if runs and runs[-1][0] == gen:
            k += runs.pop()[1]
        if k:
            runs.append((gen, k))
    return runs


def parse(text: str) -> Word:
    letters: List[Letter] = []
    for gen, k in parse_runs(text):
        letters.extend([(gen, 1 if k > 0 else -1)] * abs(k))
    return Word._reduced(tuple(letters))


def reduce(w: Word) -> Word:  # noqa: A001
    return Word(w.letters)


def multiply(*words: Word) -> Word:
    letters: List[Letter] = []
    for w in words:
        letters.extend(w.letters)
    return Word(letters)


def invert_word(w: Word) -> Word:
    return Word._reduced(tuple((gen, -sign) for gen, sign in reversed(w.letters)))


def power_word(w: Word, k: int) -> Word:
    if k < 0:
        return power_word(invert_word(w), -k)
    return Word(w.letters * k)


def conjugate(x: Word, y: Word) -> Word:
    """x conjugated by y: y^-1 x y."""
    return multiply(invert_word(y), x, y)


def commutator(x: Word, y: Word) -> Word:
    """[x, y] = x y x^-1 y^-1."""
    return multiply(x, y, invert_word(x), invert_word(y))


# -- expression trees --------------------------------------------------------


class Expr:
    """A word kept as a tree; hashing is by identity so trees can key caches."""

    def flatten(self) -> Word:
        return _flatten(self, {})

    def evaluate(self, convention: Union[Convention, str] = Convention.DEFAULT) -> TBarElement:
        return _evaluate_expr(self, Convention.coerce(convention))

    def __mul__(self, other: "Expr") -> "Expr":
        return Product((self, other))

    def __invert__(self) -> "Expr":
        return Inverse(self)

    def __pow__(self, k: int) -> "Expr":
        return Power(self, k)


@dataclass(frozen=True, eq=False)
class Atom(Expr):
    word: Word


@dataclass(frozen=True, eq=False)
class Product(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True, eq=False)
class Power(Expr):
    base: Expr
    k: int


@dataclass(frozen=True, eq=False)
class Inverse(Expr):
    base: Expr


@dataclass(frozen=True, eq=False)
class Conjugate(Expr):
    """x conjugated by y, y^-1 x y."""

    x: Expr
    y: Expr


@dataclass(frozen=True, eq=False)
class Commutator(Expr):
    x: Expr
    y: Expr


def atom(text: str) -> Atom:
    return Atom(parse(text))


def _flatten(e: Expr, memo: Dict[int, Word]) -> Word:
    key = id(e)
    if key in memo:
        return memo[key]
    if isinstance(e, Atom):
        w = e.word
    elif isinstance(e, Product):
        w = multiply(*(_flatten(f, memo) for f in e.factors))
    elif isinstance(e, Power):
        w = power_word(_flatten(e.base, memo), e.k)
    elif isinstance(e, Inverse):
        w = invert_word(_flatten(e.base, memo))
    elif isinstance(e, Conjugate):
        w = conjugate(_flatten(e.x, memo), _flatten(e.y, memo))
    elif isinstance(e, Commutator):
        w = commutator(_flatten(e.x, memo), _flatten(e.y, memo))
    else:
        raise WordError(f"unknown expression node {type(e).__name__}")
    memo[key] = w
    return w


def _times(u: TBarElement, v: TBarElement, convention: Convention) -> TBarElement:
    """The element of the word uv."""
    return compose(u, v) if convention is Convention.DEFAULT else compose(v, u)


@lru_cache(maxsize=None)
def _evaluate_expr(e: Expr, convention: Convention) -> TBarElement:
    if isinstance(e, Atom):
        return evaluate(e.word, convention)
    if isinstance(e, Product):
        result = IDENTITY
        for factor in e.factors:
            result = _times(result, _evaluate_expr(factor, convention), convention)
        return result
    if isinstance(e, Power):
        return power(_evaluate_expr(e.base, convention), e.k)
    if isinstance(e, Inverse):
        return invert(_evaluate_expr(e.base, convention))
    x = _evaluate_expr(e.x, convention)
    y = _evaluate_expr(e.y, convention)
    if isinstance(e, Conjugate):
        return _times(_times(invert(y), x, convention), y, convention)
    if isinstance(e, Commutator):
        return _times(_times(x, y, convention), _times(invert(x), invert(y), convention), convention)
    raise WordError(f"unknown expression node {type(e).__name__}")


@lru_cache(maxsize=1024)
def _generator_power(gen: str, k: int) -> TBarElement:
    return power(_ELEMENTS[gen], k)


def evaluate(
    w: Union[Word, Expr, str], convention: Union[Convention, str] = Convention.DEFAULT
) -> TBarElement:
    """The element of T-bar a word acts as."""
    convention = Convention.coerce(convention)
    if isinstance(w, Expr):
        return _evaluate_expr(w, convention)
    runs = parse_runs(w) if isinstance(w, str) else w.syllables()
    result = IDENTITY
    for gen, k in runs:
        result = _times(result, _generator_power(gen, k), convention)
    return result


# -- relators ----------------------------------------------------------------

def relator_words(inject_fault: bool = False) -> List[Tuple[str, Word, Word]]:
    """(name, lhs, rhs) for the four defining relations of T-bar."""
    bab = parse("b a b")
    out = [
        ("a^4 = b^3", parse("a^4"), parse("b^3")),
        ("(ba)^5 = b^9", parse("b a") ** 5, parse("b^9")),
        ("[bab, a^2 b a b a^2] = 1", commutator(bab, parse("a^2 b a b a^2")), Word()),
        ("[bab, a^2 b^2 a^2 b a b a^2 b a^2] = 1",
         commutator(bab, parse("a^2 b^2 a^2 b a b a^2 b a^2")), Word()),
    ]
    if inject_fault:
        out[0] = ("a^5 = b^3", parse("a^5"), parse("b^3"))
    return out


def relator_report(
    convention: Union[Convention, str] = Convention.DEFAULT, inject_fault: bool = False
) -> VerificationReport:
    report = VerificationReport("Relators of T-bar")
    for name, lhs, rhs in relator_words(inject_fault):
        report.check(name, evaluate(lhs, convention) == evaluate(rhs, convention), f"{len(lhs)} vs {len(rhs)} letters")
    b3 = evaluate("b^3", convention)
    report.check("b^3 = z", b3 == Z, f"b^3 = {b3.fundamental}")
    report.check("a^4 = z", evaluate("a^4", convention) == Z)
    return report


# -- named elements and the chain words --------------------------------------

NAMED_WORDS = {
    "p": "A b",
    "q": "A b a a B",
    "r": "B a b a a B A B A b A b",
}


def named(which: str) -> Word:
    try:
        return parse(NAMED_WORDS[which])
    except KeyError:
        raise WordError(f"unknown named element {which!r}; choose from p, q, r") from None


def _linear(x0: Dyadic, y0: Dyadic, x1: Dyadic, y1: Dyadic) -> PLMap:
    return PLMap([(x0, y0), (x1, y1)])


def named_checks(convention: Union[Convention, str] = Convention.DEFAULT) -> List[Tuple[str, bool, str]]:
    half, three_eighths = Dyadic(1, 1), Dyadic(3, 3)
    p = evaluate(named("p"), convention)
    q = evaluate(named("q"), convention)
    r = evaluate(named("r"), convention)
    p_head = p.restrict(ZERO, half)
    q_head = q.restrict(ZERO, three_eighths)
    return [
        ("p is the identity on [0, 1/2]", p_head == _linear(ZERO, ZERO, half, half), str(p_head)),
        ("q maps [0, 3/8] linearly onto [0, 3/4]",
         q_head == _linear(ZERO, ZERO, three_eighths, Dyadic(3, 2)), str(q_head)),
        ("r matches its table", r == TBarElement.from_table(R_TABLE), str(r.fundamental)),
    ]


def named_report(convention: Union[Convention, str] = Convention.DEFAULT) -> VerificationReport:
    report = VerificationReport("Named elements p, q, r")
    for name, ok, detail in named_checks(convention):
        report.check(name, ok, detail)
    return report


@lru_cache(maxsize=None)
def t_expr(n: int) -> Expr:
    """t_3 = b^2 a (ab)^-2 b; t_n = (t_{n-1} < q^{n-2}) (r < p^{n-4} q^{n(n-3)/2})."""
    if n < 3:
        raise WordError(f"t_n is defined for n >= 3, got {n}")
    if n == 3:
        return atom("b b a B A B A b")
    p, q, r = (Atom(named(x)) for x in "pqr")
    return Product((
        Conjugate(t_expr(n - 1), Power(q, n - 2)),
        Conjugate(r, Product((Power(p, n - 4), Power(q, n * (n - 3) // 2)))),
    ))


def t_word(n: int) -> Word:
    return t_expr(n).flatten()


S_BASE_WORDS = {
    1: "b b b",
    2: "b a a B",
    3: "B a b A A b a b A B",
}


@lru_cache(maxsize=None)
def s_expr(n: int, form: str = "closed", product_max_n: int = PRODUCT_FORM_MAX_N) -> Expr:
    """The word for s_n.

    closed:  [t_n, t_n < s_{n-1}] s_1 (s_{n-1}^-1 t_n)^((n-1)!)
    product: [t_n, t_n < s_{n-1}] (t_n < s_{n-1}^(1-(n-1)!)) ... (t_n < s_{n-1}^-1) t_n
    """
    if form not in ("closed", "product"):
        raise WordError(f"unknown form {form!r}; use 'closed' or 'product'")
    if n < 1:
        raise WordError(f"s_n is defined for n >= 1, got {n}")
    if n in S_BASE_WORDS:
        return atom(S_BASE_WORDS[n])
    if form == "product" and n > product_max_n:
        raise WordError(f"product form has (n-1)! factors; supported up to n = {product_max_n}")
    t = t_expr(n)
    prev = s_expr(n - 1, form, product_max_n)
    correction = Commutator(t, Conjugate(t, prev))
    count = factorial(n - 1)
    if form == "closed":
        return Product((correction, s_expr(1), Power(Product((Inverse(prev), t)), count)))
    factors: List[Expr] = [correction]
    factors.extend(Conjugate(t, Power(prev, -j)) for j in range(count - 1, 0, -1))
    factors.append(t)
    return Product(tuple(factors))


def s_word(n: int, form: str = "closed", product_max_n: int = PRODUCT_FORM_MAX_N) -> Word:
    return s_expr(n, form, product_max_n).flatten()


def t_clauses(element: TBarElement, n: int) -> List[Tuple[str, bool, str]]:
    """The four-part description of t_n on [0, 1]."""
    big, small = d(n - 1), d(n)
    half_big, half_small = big.mul_pow2(-1), small.mul_pow2(-1)
    end = big + small
    expected = [
        (f"left half of [0, {big}] onto [0, {big}]", ZERO, half_big, _linear(ZERO, ZERO, half_big, big)),
        (f"right half of [0, {big}] onto [{big}, {big + half_small}]", half_big, big,
         _linear(half_big, big, big, big + half_small)),
        (f"[{big}, {end}] onto its right half", big, end, _linear(big, big + half_small, end, end)),
        (f"identity on [{end}, 1]", end, ONE, _linear(end, end, ONE, ONE)),
    ]
    out = []
    for name, lo, hi, want in expected:
        got = element.restrict(lo, hi)
        out.append((f"t_{n}: {name}", got == want, f"{len(got)} breakpoints"))
    return out


def tn_report(n_max: int, convention: Union[Convention, str] = Convention.DEFAULT, n_min: int = 3) -> VerificationReport:
    report = VerificationReport(f"t_n clauses for {n_min} <= n <= {n_max}")
    for n in range(max(n_min, 3), n_max + 1):
        for name, ok, detail in t_clauses(evaluate(t_expr(n), convention), n):
            report.check(name, ok, detail)
    return report


def calibration_checks(convention: Union[Convention, str]) -> List[Tuple[str, bool, str]]:
    checks = named_checks(convention)
    for n in (3, 4, 5):
        checks.extend(t_clauses(evaluate(t_expr(n), convention), n))
    return checks


def calibrate_convention() -> Convention:
    """The product convention under which p, q, r and t_3..t_5 behave as described."""
    matching = [c for c in Convention if all(ok for _, ok, _ in calibration_checks(c))]
    if len(matching) != 1:
        raise WordError(f"calibration is ambiguous: {[c.value for c in matching]} satisfy every clause")
    logger.info("Calibrated word convention: %s", matching[0].value)
    return matching[0]


def calibration_report() -> VerificationReport:
    report = VerificationReport("Word convention calibration")
    passing = []
    outcomes = []
    for convention in Convention:
        failed = [name for name, ok, _ in calibration_checks(convention) if not ok]
        if failed:
            outcomes.append(f"{convention.value}: {len(failed)} clauses fail, first '{failed[0]}'")
        else:
            outcomes.append(f"{convention.value}: all clauses hold")
            passing.append(convention)
    report.check("exactly one convention fits", len(passing) == 1, "; ".join(outcomes))
    report.check("default convention is the calibrated one", passing == [Convention.DEFAULT],
                 "x y acts as x after y")
    return report
