import os
import sys

import pytest

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from services import verification
from services.dyadic import HALF, ZERO, Dyadic
from services.errors import ChainError
from services.plmap import PLMap
from services.qembed import (
    STANDARD, Chain, d, exotic_chain, exotic_value, orbit_report, orbit_sample, orbit_violations,
    seeded_chain, standard_chain, standard_clauses, verify_chain,
)
from services.roots import RootElement
from services.tbar import Z, commutes, power

D = Dyadic.parse


@pytest.fixture(scope="module")
def standard10():
    return standard_chain(10)


@pytest.fixture(scope="module")
def exotic8():
    return exotic_chain(8)


def test_d():
    assert d(1) == 1
    assert d(2) == HALF
    assert d(3) == D("1/8")
    assert d(4) == D("1/64")
    with pytest.raises(ChainError):
        d(0)


def test_standard_chain_small_levels():
    c = standard_chain(3)
    assert c.element(1) == Z
    assert c.element(2).breakpoints == [(ZERO, HALF), (Dyadic(1), D("3/2"))]
    s3 = c.element(3)
    assert s3.restrict(ZERO, HALF) == PLMap([("0", "1/8"), ("1/8", "1/4"), ("1/4", "1/2"), ("1/2", "5/8")])
    assert power(s3, 3) == c.element(2)


def test_deep_levels_stay_lazy(standard10):
    top = standard10.level(10)
    assert isinstance(top, RootElement)
    assert top.eval(ZERO) == d(10)
    assert not top.is_materialized()


def test_standard_values_and_clauses(standard10):
    for n in range(2, 11):
        s = standard10.level(n)
        assert s.eval(ZERO) == d(n)
        for name, ok in standard_clauses(s, n):
            assert ok, name


def test_verify_standard_chain(standard10):
    report = verify_chain(standard10)
    assert report.passed, report.first_failure()
    details = {c.name: c.detail for c in report.checks}
    assert details["s_10^10 = s_9"].startswith("local check")
    assert details["s_7^7 = s_6"].startswith("materialized")
    assert details["s_8^8! = z"].startswith("telescoped")


def test_verify_detects_replaced_level():
    report = verify_chain(standard_chain(4).with_level(2, Z))
    assert not report.passed
    assert report.first_failure().name == "s_2^2 = s_1"


def test_single_level_chain_passes():
    assert verify_chain(Chain(STANDARD, [Z])).passed
    assert exotic_chain(1).levels == [Z]


def test_levels_commute():
    c = standard_chain(5)
    for i in range(1, 6):
        for j in range(i + 1, 6):
            assert commutes(c.element(i), c.element(j))


def test_exotic_chain(exotic8):
    assert exotic8.element(2).eval(ZERO) == D("3/4")
    assert exotic8.element(3).eval(ZERO) == D("5/8")
    assert power(exotic8.element(3), 3) == exotic8.element(2)
    for n in range(2, 9):
        assert exotic8.level(n).eval(ZERO) == exotic_value(n)


def test_verify_exotic_chain(exotic8):
    report = verify_chain(exotic8, materialize_max_level=5, order_check_max_level=5)
    assert report.passed, report.first_failure()
    assert {c.name for c in report.checks} >= {f"s_{n}(0) = 1/2 + 2^-{n}" for n in range(2, 9)}


def test_seeded_chain_differs_from_standard():
    custom = seeded_chain(3, 2)
    plain = standard_chain(3)
    assert custom.element(2) != plain.element(2)
    assert power(custom.element(3), 3) == custom.element(2)
    assert verify_chain(custom).passed


def test_orbit_sample_basics(standard10):
    assert orbit_sample(standard10, 0) == {ZERO}
    sample = orbit_sample(standard10, 1)
    assert d(2) in sample and d(3) in sample
    with pytest.raises(ChainError):
        orbit_sample(standard10, -1)


def test_exotic_orbit_avoids_left_half(exotic8):
    sample = orbit_sample(exotic8, 6, levels=4)
    assert len(sample) > 100
    assert orbit_violations(sample) == []
    assert orbit_report(exotic8, 3).passed


def test_standard_orbit_enters_left_half(standard10):
    assert orbit_violations(orbit_sample(standard10, 1)) != []


def test_chain_json_uses_germs_past_materialize_level():
    payload = standard_chain(4).to_dict(materialize_max_level=3)
    assert payload["kind"] == "standard"
    assert payload["elements"][0] == Z.to_dict()
    assert payload["elements"][3]["type"] == "root"
    assert payload["elements"][3]["of_level"] == 3
    assert payload["elements"][3]["germ"]["n"] == 4


def test_orbit_sample_refuses_oversized_samples(exotic8):
    with pytest.raises(ChainError):
        orbit_sample(exotic8, 6, levels=4, max_points=100)
    assert len(orbit_sample(exotic8, 1, levels=4, max_points=50)) <= 50


def test_orbit_builder_refuses_unmaterialized_levels():
    with pytest.raises(ChainError):
        verification.orbit("standard", 1, levels=8)
    points, report = verification.orbit("exotic", 2, levels=3)
    assert report.passed and len(points) > 1
