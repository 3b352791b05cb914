"""Tests for the closed-form bias factors of the standard estimator."""

import math

import pytest

from dasf_retrieval.analysis.bias import bias_curve, bias_factors, dasf_prime_analytic, dc_model
from dasf_retrieval.errors import ConfigurationError, NumericalError
from dasf_retrieval.models.canopy import SIForwardParams
from dasf_retrieval.models.estimates import DcModelCoefficients


def test_no_dry_matter_deviation():
    bf = bias_factors(1.7, 1.7, 0.05, 0.9)
    assert bf.A == 1.0
    assert bf.C == 0.0
    assert bf.dc == 0.0


def test_worked_example():
    bf = bias_factors(1.0, 2.0, 0.05, 0.9)
    assert bf.A == pytest.approx(0.9512, abs=1e-4)
    assert bf.C == pytest.approx(0.5131, abs=1e-4)
    assert bf.D == pytest.approx(0.9512, abs=1e-4)
    assert bf.dc == pytest.approx(0.488, abs=1e-3)
    assert bf.q == 0.0


@pytest.mark.parametrize("t_c,t_m", [(1.0, 2.0), (0.8, 3.0), (2.0, 1.0), (1.5, 0.5)])
def test_dc_sign_follows_dry_matter_excess(t_c, t_m):
    bf = bias_factors(t_c, t_m, 0.05, 0.9)
    assert math.copysign(1.0, bf.dc) == math.copysign(1.0, t_m - t_c)


def test_invalid_inputs():
    with pytest.raises(ConfigurationError):
        bias_factors(0.0, 1.0, 0.05, 0.9)
    with pytest.raises(ConfigurationError):
        bias_factors(1.0, 1.0, 0.05, 1.0)


def test_unbiased_limit():
    params = SIForwardParams(0.4, 0.6)
    assert dasf_prime_analytic(params, bias_factors(1.0, 1.0, 0.05, 0.9)) == pytest.approx(params.dasf)


def test_biased_dasf():
    params = SIForwardParams(0.4, 0.6)
    assert dasf_prime_analytic(params, bias_factors(1.0, 2.0, 0.05, 0.9)) == pytest.approx(0.438, abs=1e-3)


def test_nonpositive_denominator():
    params = SIForwardParams(0.1, 0.9)
    with pytest.raises(NumericalError):
        dasf_prime_analytic(params, bias_factors(3.0, 0.5, 0.05, 0.9))


def test_bias_curve_rows():
    params = SIForwardParams(0.4, 0.6)
    rows = bias_curve(1.0, [0.5, 1.0, 2.0, 3.0], 0.05, 0.9, params)
    assert [row["t_m"] for row in rows] == [0.5, 1.0, 2.0, 3.0]
    assert rows[1]["ratio"] == pytest.approx(1.0)
    # more dry matter, larger underestimate
    ratios = [row["ratio"] for row in rows]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_dc_model_overflow():
    with pytest.raises(NumericalError):
        dc_model(1.5, 0.0, DcModelCoefficients(1000.0, 0.0, 0.0, 0.0))
