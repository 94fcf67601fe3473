import os
import sys

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from services.dyadic import HALF, ONE, ZERO, Dyadic
from services.errors import RootError
from services.plmap import PLMap
from services.roots import (
    ChoiceSeed, RootElement, RootGerm, center_exponent, eval_root, germ_consistent, lazy_root,
    nth_root, nth_root_with_value, prescribed_partition, root_germ, verify_root_locally,
)
from services.tbar import IDENTITY, Z, TBarElement, invert, power
from services.words import A_ELEMENT as A, B_ELEMENT as B

D = Dyadic.parse
S2 = TBarElement.translation(HALF)


def test_root_germ_of_z():
    germ = root_germ(Z, 2, 0)
    assert germ.partition == (ZERO, HALF, ONE)
    assert germ.pieces[0] == PLMap([("0", "1/2"), ("1/2", "1")])
    assert germ.pieces[1] == PLMap([("1/2", "1"), ("1", "3/2")])
    assert germ_consistent(Z, germ)


def test_root_germ_of_s2_matches_hand_computation():
    germ = root_germ(S2, 3, 0)
    assert germ.partition == (ZERO, D("1/8"), D("1/4"), HALF)
    f1, f2, f3 = germ.pieces
    assert f1 == PLMap([("0", "1/8"), ("1/8", "1/4")])
    assert f2 == PLMap([("1/8", "1/4"), ("1/4", "1/2")])
    assert f3 == PLMap([("1/4", "1/2"), ("1/2", "5/8")])
    assert verify_root_locally(S2, germ)


def test_root_germ_rejects_bad_input():
    with pytest.raises(RootError):
        root_germ(IDENTITY, 2, 0)
    with pytest.raises(RootError):
        root_germ(Z, 1, 0)
    with pytest.raises(RootError):
        root_germ(invert(Z), 2, 0)
    with pytest.raises(RootError):
        ChoiceSeed(-1)


def test_eval_root():
    germ = root_germ(Z, 2, 0)
    assert eval_root(Z, germ, D("5/4")) == D("7/4")
    assert eval_root(Z, germ, ZERO) == HALF
    assert eval_root(Z, germ, ONE) == D("3/2")
    assert eval_root(Z, germ, D("-7/4")) == D("-5/4")


def test_nth_root_examples():
    half = nth_root(Z, 2, 1, 0)
    assert half == S2
    assert power(half, 2) == Z
    s3 = nth_root(S2, 3, 2, 0)
    assert s3.eval(ZERO) == D("1/8")
    assert power(s3, 3) == S2
    with pytest.raises(RootError):
        nth_root(A, 2, 1, 0)


def test_nth_root_of_negative_displacement():
    f = nth_root(invert(Z), 3, -1)
    assert power(f, 3) == invert(Z)


def test_root_of_a_generator():
    # a^4 = z, so a has roots of every degree
    f = nth_root(A, 3, 4, 0)
    assert power(f, 3) == A
    assert f.eval(ZERO) == D("1/8")


def test_nth_root_with_value():
    f = nth_root_with_value(Z, 2, 1, D("3/4"))
    assert f.eval(ZERO) == D("3/4")
    assert power(f, 2) == Z
    assert nth_root_with_value(Z, 2, 1, HALF) == nth_root(Z, 2, 1, 0)
    with pytest.raises(RootError):
        nth_root_with_value(Z, 2, 1, D("3/2"))
    with pytest.raises(RootError):
        nth_root_with_value(Z, 2, 1, ZERO)


def test_prescribed_partition_is_strictly_increasing():
    for n in range(2, 9):
        for v in ("1/1024", "1/2", "1023/1024"):
            p = prescribed_partition(ONE, n, D(v))
            assert p[0] == ZERO and p[1] == D(v) and p[-1] == ONE
            assert all(a < b for a, b in zip(p, p[1:]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_seeds_give_distinct_roots(n):
    roots = [nth_root(Z, n, 1, seed) for seed in range(4)]
    for f in roots:
        assert power(f, n) == Z
    assert len(set(roots)) == 4


def test_lazy_root_agrees_with_materialized():
    lazy = lazy_root(S2, 3)
    assert isinstance(lazy, RootElement)
    assert not lazy.is_materialized()
    assert lazy.eval(ZERO) == D("1/8")
    full = lazy.materialize()
    assert lazy.is_materialized()
    assert full == nth_root(S2, 3, 2)
    assert lazy.displacement_sign() == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(-2 * 4096, 2 * 4096))
def test_eval_root_matches_materialized_element(k):
    x = Dyadic(k, 12)
    germ = root_germ(S2, 3, 1)
    full = nth_root(S2, 3, 2, 1)
    assert eval_root(S2, germ, x) == full.eval(x)


def test_germ_json():
    germ = root_germ(S2, 3, 0)
    payload = germ.to_dict()
    assert payload["n"] == 3
    assert payload["partition"] == ["0", "1/8", "1/4", "1/2"]
    assert RootGerm.from_dict(payload) == germ


def test_center_exponent():
    assert center_exponent(Z) == 1
    assert center_exponent(B) == 3
    assert center_exponent(A) == 4
    assert center_exponent(IDENTITY, bound=8) is None
    assert center_exponent(S2) == 2
