import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slithyp.errors import InvalidParameter
from slithyp.conformal import fit_map
from slithyp.domains import make_comb
from slithyp.reports import (
    COMB_COLUMNS,
    LOCALIZATION_COLUMNS,
    PETERSEN_COLUMNS,
    comb_localization_report,
    comb_report,
    petersen_lower_sum,
    petersen_report,
)

LN2 = math.log(2)


def T_closed(n, y):
    # the lower sum is a geometric series: (9/8) 3^n - 5/8 - (n+1) ln2 / 2
    return 2 ** (n + 2) * abs(y) - (1.125 * 3 ** n - 0.625 - (n + 1) * LN2 / 2)


@pytest.fixture(scope="module")
def pet():
    return petersen_report(1.0, 0.0, 60)


def test_petersen_rows_match_the_closed_form(pet):
    T = pet.column("T_n")
    for n in range(61):
        assert T[n] == pytest.approx(T_closed(n, 1.0), rel=1e-12, abs=1e-9)
    assert T[3] == pytest.approx(3.636294, abs=1e-6)
    assert T[4] == pytest.approx(-24.767132, abs=1e-6)
    assert pet.summary["n_M"] == 4
    assert pet.column("certified")[:5] == [False, False, False, False, True]


def test_petersen_deep_rows(pet):
    T = pet.column("T_n")
    assert T[10] < -1e4
    assert T[60] < -1e28
    assert all(b < a for a, b in zip(T[4:], T[5:]))
    assert pet.summary["strictly_decreasing_from"] <= 4
    # log y_n = -n ln2 - 3^n stays finite where y_n itself underflows
    assert pet.column("log_y_n")[60] == pytest.approx(-60 * LN2 - 3.0 ** 60, rel=1e-15)


def test_petersen_on_the_axis():
    r = petersen_report(0.0, 0.0, 5)
    assert r.column("T_n")[1] == pytest.approx(-2.06, abs=5e-3)
    assert r.column("T_n")[1] == pytest.approx(-(9 / 8) * 3 + LN2 + 5 / 8, rel=1e-14)
    assert r.summary["n_M"] == 0


def test_petersen_columns_are_stable(pet):
    assert pet.columns == PETERSEN_COLUMNS
    assert pet.to_dict()["schema"] == "slithyp.petersen-report/1"
    assert pet.to_csv().splitlines()[0] == ",".join(PETERSEN_COLUMNS)


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-5, 5))
def test_n_M_is_non_increasing_in_M(M1, M2, y):
    lo, hi = sorted((M1, M2))
    a = petersen_report(y, lo, 60).summary["n_M"]
    b = petersen_report(y, hi, 60).summary["n_M"]
    assert a is not None and b is not None and b <= a


@given(st.integers(0, 60))
def test_lower_sum_closed_form(n):
    assert petersen_lower_sum(n) == pytest.approx(1.125 * 3 ** n - 0.625 - (n + 1) * LN2 / 2, rel=1e-13, abs=1e-12)


def test_petersen_invalid():
    for args in [(1.0, 0.0, 61), (1.0, 0.0, -1), (math.nan, 0.0, 5), (1.0, math.inf, 5)]:
        with pytest.raises(InvalidParameter):
            petersen_report(*args)


@pytest.fixture(scope="module")
def comb():
    return comb_report(0.5, 0.02, 0.5, 0.0, 20)


def test_comb_lower_column(comb):
    assert comb.columns == COMB_COLUMNS
    n = comb.column("n")
    lower = comb.column("lower")
    assert lower[n.index(5)] == pytest.approx(0.48 / (8 * 2 ** -7), rel=1e-15)
    assert lower[n.index(5)] == pytest.approx(7.68, rel=1e-15)


def test_comb_upper_is_the_sum_of_its_parts(comb):
    for r in comb.rows:
        row = dict(zip(comb.columns, r))
        assert row["upper"] == pytest.approx(row["two_h_over_eps"] + row["asinh_term"] + row["residual"], rel=1e-15)
        assert row["two_h_over_eps"] == pytest.approx(0.04 / row["eps_n"], rel=1e-15)
        assert row["asinh_term"] == pytest.approx(math.asinh(1.0 / row["eps_n"]), rel=1e-15)
        assert row["verdict"] == (row["lower"] > row["upper"])


def test_comb_eventual_contradiction(comb):
    s = comb.summary
    assert s["n_star"] is not None and s["n_star"] < 20
    assert all(comb.column("verdict")[s["n_star"] - 1:])
    assert s["limit_lower"] == pytest.approx(0.06) and s["limit_upper"] == pytest.approx(0.04)
    assert s["limit_contradiction"] and s["h_below_threshold"]
    assert s["threshold"] == pytest.approx(0.5 / 17)


def test_comb_eps_asinh_decreases(comb):
    e = comb.column("eps_asinh")
    assert all(b < a for a, b in zip(e, e[1:]))
    assert e[-1] < 1e-4


def test_comb_warns_above_threshold():
    with pytest.warns(UserWarning, match="k/17"):
        r = comb_report(0.5, 0.1, 0.5, 0.0, 4)
    assert not r.summary["limit_contradiction"] and not r.summary["h_below_threshold"]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        comb_report(0.5, 0.02, 0.5, 0.0, 2)


def test_comb_invalid():
    for args in [(0.5, 0.6, 0.5, 0.0, 5), (0.5, 0.0, 0.5, 0.0, 5), (0.5, 0.02, 1.0, 0.0, 5),
                 (0.5, 0.02, 0.5, 0.0, 0), (0.5, 0.02, 0.5, math.nan, 5)]:
        with pytest.raises(InvalidParameter):
            comb_report(*args)


def test_comb_localization_on_the_fitted_comb(comb4_map):
    r = comb_localization_report(comb4_map, k=0.5, h=0.02)
    assert r.columns == LOCALIZATION_COLUMNS
    assert r.column("n") == [1, 2, 3]
    for row in r.rows:
        x = dict(zip(r.columns, row))
        assert x["eps_n"] == 2.0 ** -(x["n"] + 2)
        assert x["c_n"] == 2.0 ** -(x["n"] + 1) + x["eps_n"]
        # the strip bound used by the comb argument: (k - h)/(4 eps) from 1/dist < 1/eps
        assert x["k_strip"] >= 0.48 / (4 * x["eps_n"])
        assert x["k_gap"] <= x["k_strip"]
        assert x["good_box"] and x["localized"]
    # the geodesic hugs the middle of the gap more tightly as the gap narrows
    t = [abs(v) for v in r.column("theta_over_eps")]
    assert t[0] > t[1] > t[2]
    assert r.summary["n_good_box"] == 1 and r.summary["n_localized"] == 1
    assert r.summary["label"] == "experimental (truncation N=4)"


def test_comb_localization_invalid(comb4_map):
    with pytest.raises(InvalidParameter):
        comb_localization_report(comb4_map, k=0.01, h=0.02)
    with pytest.raises(InvalidParameter):
        comb_localization_report(comb4_map, r=0.7)
    with pytest.raises(InvalidParameter):
        comb_localization_report(fit_map(make_comb(N=2), 64, 0.5 + 0.1j))
