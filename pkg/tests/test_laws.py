import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptcontrol.exceptions import DomainError
from ptcontrol.laws import (
    FixedTimeParams,
    Horizon,
    PredefParams,
    closed_form_state,
    eval_corrected_law,
    eval_fixed_time_law,
    eval_original_law,
    integration_constant,
)

# frozen from 40-digit mpmath evaluation of -2(e^x - 1)/e^x at x = -5 and x = 5
U_ORIG_MINUS5 = 294.826318205153206842
U_PLUS5 = -1.986524106001829066
LN_1_25 = 0.22314355131420975577

P2 = PredefParams.make(2.0, 0.0, 1.0)
FT = FixedTimeParams(1.0, 1.0, 0.5, 2.0)

states = st.floats(-50, 50, allow_nan=False)
etas = st.floats(1.01, 6.0)
horizons = st.tuples(st.floats(-5, 5), st.floats(0.1, 10)).map(lambda a: Horizon(a[0], a[0] + a[1]))


def mp_law(x, eta=2, t=0.0, tf=1.0):
    with mpmath.workdps(60):
        x = mpmath.mpf(x)
        return float(-eta * mpmath.expm1(x) / (mpmath.exp(x) * (mpmath.mpf(tf) - mpmath.mpf(t))))


class TestTypes:
    def test_horizon_rejects_reversed(self):
        with pytest.raises(ValueError):
            Horizon(1.0, 1.0)
        with pytest.raises(ValueError):
            Horizon(2.0, 1.0)

    def test_duration(self):
        assert Horizon(-1.0, 2.5).duration() == 3.5

    @pytest.mark.parametrize("eta", [1.0, 0.5, -2.0, math.nan, math.inf])
    def test_eta_must_exceed_one(self, eta):
        with pytest.raises(ValueError):
            PredefParams(eta, Horizon(0.0, 1.0))

    @pytest.mark.parametrize("k1,k2,alpha,beta", [
        (0, 1, 0.5, 2), (1, 0, 0.5, 2), (1, 1, 0, 2), (1, 1, 1, 2), (1, 1, 0.5, 1),
    ])
    def test_fixed_time_constraints(self, k1, k2, alpha, beta):
        with pytest.raises(ValueError):
            FixedTimeParams(k1, k2, alpha, beta)


class TestOriginalLaw:
    def test_zero_at_origin(self):
        assert math.copysign(1.0, eval_original_law(0.0, 0.0, P2)) == 1.0
        assert eval_original_law(0.0, 0.0, P2) == 0.0

    def test_blowup_value(self):
        assert eval_original_law(0.0, -5.0, P2) == pytest.approx(U_ORIG_MINUS5, rel=1e-14)

    def test_positive_state(self):
        assert eval_original_law(0.0, 5.0, P2) == pytest.approx(U_PLUS5, rel=1e-14)

    @pytest.mark.parametrize("t", [1.0, 1.5])
    def test_singular_at_tf(self, t):
        with pytest.raises(DomainError):
            eval_original_law(t, 0.3, P2)

    @given(x=states, t=st.floats(0, 0.99))
    def test_matches_high_precision(self, x, t):
        want = mp_law(x, 2, t)
        assert eval_original_law(t, x, P2) == pytest.approx(want, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("x", np.arange(-3.0, -12.0, -0.5))
    def test_grows_exponentially(self, x):
        u, u_next = abs(eval_original_law(0.0, x, P2)), abs(eval_original_law(0.0, x - 1, P2))
        assert u_next > math.e * u * (1 - 1e-6)

    @pytest.mark.parametrize("x", [-1.0, -4.0, -5.0, -6.0, -10.0, -20.0])
    def test_growth_ratio_exact(self, x):
        # u(x - 1)/u(x) = e + (e - 1)/(e^-x - 1): above e, approaching it from above
        ratio = eval_original_law(0.0, x - 1, P2) / eval_original_law(0.0, x, P2)
        with mpmath.workdps(50):
            want = float(mpmath.e + (mpmath.e - 1) / mpmath.expm1(-x))
        assert ratio == pytest.approx(want, rel=1e-14)
        assert ratio > math.e

    def test_monotone_below_zero(self):
        xs = np.linspace(0, -40, 801)
        mags = [abs(eval_original_law(0.0, x, P2)) for x in xs]
        assert all(b > a for a, b in zip(mags, mags[1:]))
        assert mags[xs.tolist().index(-5.0)] > 200

    def test_huge_negative_state_is_infinite(self):
        assert eval_original_law(0.0, -800.0, P2) == math.inf


class TestCorrectedLaw:
    def test_values(self):
        assert eval_corrected_law(0.0, -5.0, P2) == pytest.approx(-U_PLUS5, rel=1e-14)
        assert eval_corrected_law(0.0, 5.0, P2) == pytest.approx(U_PLUS5, rel=1e-14)
        assert abs(eval_corrected_law(0.0, -5.0, P2)) <= 2.0

    def test_zero(self):
        assert eval_corrected_law(0.3, 0.0, P2) == 0.0
        assert eval_corrected_law(0.3, -0.0, P2) == 0.0

    def test_singular_at_tf(self):
        with pytest.raises(DomainError):
            eval_corrected_law(1.0, 1.0, P2)

    @pytest.mark.parametrize("eta", [1.5, 2, 3, 5])
    def test_strict_initial_bound_on_grid(self, eta):
        p = PredefParams.make(eta, 0.0, 1.0)
        for x0 in np.arange(-200, 201) * 0.25:
            if x0 == 0:
                continue
            assert abs(eval_corrected_law(0.0, x0, p)) < eta

    @given(x=states, t=st.floats(0, 0.999), eta=etas)
    def test_strict_bound_anywhere(self, x, t, eta):
        p = PredefParams.make(eta)
        assert abs(eval_corrected_law(t, x, p)) < eta / (1 - t)

    @given(x=st.floats(0, 700), t=st.floats(0, 0.999), eta=etas)
    def test_agrees_with_original_for_nonnegative(self, x, t, eta):
        p = PredefParams.make(eta)
        assert eval_corrected_law(t, x, p) == eval_original_law(t, x, p)

    @given(x=states, t=st.floats(0, 0.999), eta=etas)
    def test_odd(self, x, t, eta):
        p = PredefParams.make(eta)
        assert eval_corrected_law(t, -x, p) == -eval_corrected_law(t, x, p)

    def test_continuous_through_zero(self):
        for eps in (1e-3, 1e-8, 1e-14):
            assert abs(eval_corrected_law(0.0, eps, P2)) < 3 * eps
            assert abs(eval_corrected_law(0.0, -eps, P2)) < 3 * eps


class TestFixedTimeLaw:
    def test_values(self):
        assert eval_fixed_time_law(0.0, FT) == 0.0
        assert eval_fixed_time_law(4.0, FT) == -18.0
        assert eval_fixed_time_law(-1.0, FT) == 2.0

    @given(x=st.floats(-1e3, 1e3))
    def test_odd(self, x):
        assert eval_fixed_time_law(-x, FT) == -eval_fixed_time_law(x, FT)

    @given(a=st.floats(0, 100), b=st.floats(0, 100))
    def test_magnitude_increasing(self, a, b):
        if a < b:
            assert abs(eval_fixed_time_law(a, FT)) < abs(eval_fixed_time_law(b, FT))


class TestIntegrationConstant:
    def test_zero(self):
        for v in ("original", "corrected"):
            assert integration_constant(0.0, P2, v).value == 0.0

    def test_values(self):
        assert integration_constant(math.log(2), P2, "original").value == pytest.approx(1.0, rel=1e-15)
        assert integration_constant(-math.log(2), P2, "corrected").value == pytest.approx(1.0, rel=1e-15)

    @given(x0=states, eta=etas, hz=horizons)
    def test_signs(self, x0, eta, hz):
        p = PredefParams(eta, hz)
        assert integration_constant(x0, p, "corrected").value >= 0
        c = integration_constant(x0, p, "original").value
        assert (c >= 0) == (x0 >= 0)
        assert c > -hz.duration() ** -eta * (1 + 1e-15)

    def test_bad_variant(self):
        with pytest.raises(ValueError):
            integration_constant(1.0, P2, "other")


class TestClosedForm:
    def test_values(self):
        assert closed_form_state(0.5, math.log(2), P2, "original") == pytest.approx(LN_1_25, rel=1e-14)
        assert closed_form_state(0.5, -math.log(2), P2, "corrected") == pytest.approx(-LN_1_25, rel=1e-14)

    @pytest.mark.parametrize("variant", ["original", "corrected"])
    @pytest.mark.parametrize("t", [1.0, 1.0 + 1e-12, 7.0])
    def test_clamped_at_and_after_tf(self, variant, t):
        assert closed_form_state(t, -3.0, P2, variant) == 0.0

    @given(x0=states, eta=etas, hz=horizons, variant=st.sampled_from(["original", "corrected"]))
    def test_initial_condition(self, x0, eta, hz, variant):
        p = PredefParams(eta, hz)
        x = closed_form_state(hz.t0, x0, p, variant)
        assert x == pytest.approx(x0, rel=1e-12, abs=1e-300)

    def test_before_t0_rejected(self):
        with pytest.raises(DomainError):
            closed_form_state(-0.1, 1.0, P2, "corrected")

    @pytest.mark.parametrize("eta", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("x0", [-3.0, -0.4, 0.7, 2.5])
    @pytest.mark.parametrize("variant", ["original", "corrected"])
    def test_satisfies_the_ode(self, eta, x0, variant):
        # central difference of the closed form against the law it solves
        p = PredefParams.make(eta)
        law = eval_original_law if variant == "original" else eval_corrected_law
        h = 1e-6
        for t in np.linspace(0.005, 1 - 1e-2, 100):
            fd = (closed_form_state(t + h, x0, p, variant) - closed_form_state(t - h, x0, p, variant)) / (2 * h)
            assert fd == pytest.approx(law(t, closed_form_state(t, x0, p, variant), p), abs=1e-5)

    @given(x0=states, t=st.floats(0, 1))
    def test_corrected_odd_in_x0(self, x0, t):
        assert closed_form_state(t, -x0, P2, "corrected") == -closed_form_state(t, x0, P2, "corrected")
