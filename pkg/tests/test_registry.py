import math

import pytest

from qjacobi import registry as reg
from qjacobi.exceptions import DomainError

REF = {"q": 0.5, "a": 0.3, "b": 0.4, "c": -0.2}


def test_grid_sizes():
    assert len(reg.default_grid("little")) == 27
    assert len(reg.default_grid("big")) == 81
    assert len(reg.default_grid("scalar")) == 9
    assert reg.default_grid("big") == reg.default_grid("big")


def test_grid_from_values_keeps_needed_keys():
    pts = reg.grid_from_values({"q": [0.5], "a": [0.3, 0.4], "b": [0.2], "c": [-0.1, -0.2]}, "little")
    assert pts == [{"q": 0.5, "a": 0.3, "b": 0.2}, {"q": 0.5, "a": 0.4, "b": 0.2}]
    assert len(reg.grid_from_values({"q": [0.5], "a": [0.3], "b": [0.2], "c": [-0.1, -0.2]}, "big")) == 2


def test_make_params():
    assert reg.make_params("scalar", {"q": 0.5, "a": 0.3}) == (0.5, 0.3, 0.0)
    assert reg.make_params("little", REF).as_dict() == {"q": 0.5, "a": 0.3, "b": 0.4}
    with pytest.raises(DomainError):
        reg.make_params("big", {"q": 0.5, "a": 0.3, "b": 0.4})
    with pytest.raises(DomainError):
        reg.make_params("big", dict(REF, c=0.3))


def test_unknown_id():
    with pytest.raises(KeyError):
        reg.run_check("orth-9.99", REF)


@pytest.mark.parametrize("identity_id", reg.IDS)
def test_every_check_passes_at_reference_point(identity_id):
    reports = reg.run_check(identity_id, REF)
    assert reports
    for r in reports:
        assert r.passed, (r.identity_id, r.residual, r.detail)
        assert r.wall_ms == 0.0
        d = r.to_dict()
        assert d["identity_id"].split("/")[0] == identity_id


def test_tolerance_override_can_fail_a_check():
    r, = reg.run_check("sum-A.1", REF, reg.CheckOptions(tolerance=1e-30))
    assert not r.passed and r.tolerance == 1e-30
    r, = reg.run_check("sum-A.1", REF)
    assert r.tolerance == reg.REGISTRY["sum-A.1"].default_tol


def test_timing_is_opt_in():
    r, = reg.run_check("sum-A.1", REF, reg.CheckOptions(timing=True))
    assert r.wall_ms >= 0.0


def test_single_index_options():
    r, = reg.run_check("special-7.1", REF, reg.CheckOptions(n=4))
    assert r.params["n"] == 4
    vanish, rec = reg.run_check("eta-A.8", {"q": 0.5, "a": 0.3}, reg.CheckOptions(k=5))
    assert vanish.params["k"] == 5 and vanish.passed and rec.passed


def test_truncation_grows_near_aq_one():
    # weights decay like (aq)^n; 200 points do not reach the tail bound at aq = 0.891
    r, = reg.run_check("orth-4.8", {"q": 0.3, "a": 2.97, "b": 0.2}, reg.CheckOptions(truncation=50))
    assert r.passed and r.terms_used > 50


def test_racah_limit_fails_honestly_at_q07():
    # the q-Racah gap is O(q^N) and still above 1e-8 at N=40 for q = 0.7
    r, = reg.run_check("limit-racah-8.10", {"q": 0.7, "a": 0.2, "b": 0.2, "c": -2.0})
    assert not r.passed and r.residual > 1e-8


def test_c0_limit_preasymptotic_point_reported():
    r, = reg.run_check("limit-c0", {"q": 0.3, "a": 0.2, "b": 0.2})
    assert not r.passed
    assert math.isinf(r.tolerance)


@pytest.mark.slow
@pytest.mark.parametrize("identity_id", ["sum-A.1", "sum-A.6", "qbinom-4.9", "complete-7.14", "gen-9.4"])
def test_grid_wide_sums(identity_id):
    kind = reg.REGISTRY[identity_id].kind
    for point in reg.default_grid(kind):
        for r in reg.run_check(identity_id, point):
            assert r.passed, (point, r.residual)
