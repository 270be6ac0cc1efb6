import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cyclobloch as cb
from cyclobloch.model import BOUNDED_OSCILLATION, FrequencyRatio, Regime


def params(**kw):
    base = dict(j_x=1.0, j_y=1.0, alpha=0.1, omega_x=0.0, omega_y=0.0)
    base.update(kw)
    return cb.ModelParams(**base)


class TestModelParams:
    def test_rejects_negative_hopping(self):
        with pytest.raises(ValueError):
            params(j_x=-1.0)

    def test_rejects_negative_frequencies(self):
        with pytest.raises(ValueError):
            params(omega_x=-0.1)
        with pytest.raises(ValueError):
            params(omega_y=-0.1)

    def test_rejects_nonfinite_alpha(self):
        with pytest.raises(ValueError):
            params(alpha=math.inf)

    def test_irrational_alpha_accepted(self):
        p = params(alpha=1.0 / math.sqrt(2.0))
        assert p.alpha == pytest.approx(0.7071067811865475)

    def test_tunneling_period(self):
        assert params(j_x=1.0).tunneling_period == pytest.approx(2.0 * math.pi)
        assert params(j_x=2.0).tunneling_period == pytest.approx(math.pi)


class TestCriticalFrequency:
    def test_reference_value(self):
        assert cb.critical_frequency(params(j_x=1.0, alpha=0.1)) == pytest.approx(
            0.6283185307179586, rel=1e-12
        )

    def test_zero_field(self):
        assert cb.critical_frequency(params(alpha=0.0)) == 0.0

    def test_linear_in_hopping(self):
        assert cb.critical_frequency(params(j_x=2.0, alpha=0.1)) == pytest.approx(
            1.2566370614359172, rel=1e-12
        )

    @given(
        alpha=st.floats(1e-3, 1.0),
        j_x=st.floats(1e-3, 10.0),
        s=st.floats(0.1, 10.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_linearity(self, alpha, j_x, s):
        base = cb.critical_frequency(params(j_x=j_x, alpha=alpha))
        assert cb.critical_frequency(params(j_x=s * j_x, alpha=alpha)) == pytest.approx(
            s * base, rel=1e-9
        )
        assert cb.critical_frequency(params(j_x=j_x, alpha=s * alpha)) == pytest.approx(
            s * base, rel=1e-9
        )


class TestDriveMagnitude:
    @pytest.mark.parametrize(
        "wx,wy,expected", [(0.0, 0.1, 0.1), (3.0, 4.0, 5.0), (0.0, 0.0, 0.0)]
    )
    def test_examples(self, wx, wy, expected):
        assert cb.drive_magnitude(params(omega_x=wx, omega_y=wy)) == pytest.approx(expected)


class TestClassifyRegime:
    def test_slow(self):
        assert cb.classify_regime(params(omega_y=0.1)) is Regime.SLOW_DRIVING

    def test_fast(self):
        assert cb.classify_regime(params(omega_y=1.0)) is Regime.FAST_DRIVING

    def test_critical(self):
        assert cb.classify_regime(params(omega_y=0.6283)) is Regime.CRITICAL

    @given(
        j=st.floats(0.05, 5.0),
        w=st.floats(0.0, 5.0),
        s=st.floats(0.1, 10.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_rescaling_invariance(self, j, w, s):
        a = cb.classify_regime(params(j_x=j, j_y=j, omega_y=w))
        b = cb.classify_regime(params(j_x=s * j, j_y=s * j, omega_y=s * w))
        assert a is b


class TestDriftVelocity:
    def test_reference_value(self):
        v = cb.predicted_drift_velocity(params(omega_y=0.1, alpha=0.1))
        assert v == pytest.approx(0.15915494309189535, rel=1e-12)
        # one site per tunneling period at j_x = 1
        assert v * params().tunneling_period == pytest.approx(1.0, rel=1e-12)

    def test_zero_drive(self):
        assert cb.predicted_drift_velocity(params(omega_y=0.0, alpha=0.1)) == 0.0

    def test_linearity(self):
        assert cb.predicted_drift_velocity(params(omega_y=0.2, alpha=0.1)) == pytest.approx(
            0.3183098861837907, rel=1e-12
        )

    def test_degenerate_field(self):
        with pytest.raises(cb.DegenerateFieldError):
            cb.predicted_drift_velocity(params(alpha=0.0, omega_y=0.1))

    @given(wy=st.floats(1e-6, 10.0), alpha=st.floats(1e-4, 2.0))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_identity(self, wy, alpha):
        v = cb.predicted_drift_velocity(params(omega_y=wy, alpha=alpha))
        assert v * 2.0 * math.pi * alpha == pytest.approx(wy, rel=1e-12)


class TestBallisticRate:
    def test_axis_drive_constant(self):
        p = params(omega_x=0.0, omega_y=2.0)
        ratio = cb.rational_approx(0.0, 100)
        assert cb.predicted_ballistic_rate(p, ratio) == pytest.approx(
            0.7071067811865476, rel=1e-12
        )

    def test_ratio_one(self):
        wy = 1.0 / math.sqrt(2.0)
        p = params(omega_x=wy, omega_y=wy)
        assert cb.predicted_ballistic_rate(p, FrequencyRatio.rational(1, 1)) == pytest.approx(
            0.5, rel=1e-12
        )

    def test_irrational_marker(self):
        x = (math.sqrt(5.0) - 1.0) / 4.0
        wy = 2.0 / math.sqrt(1.0 + x * x)
        p = params(omega_x=x * wy, omega_y=wy)
        ratio = cb.rational_approx(x, 100)
        assert cb.predicted_ballistic_rate(p, ratio) is BOUNDED_OSCILLATION

    def test_slow_regime_rejected(self):
        p = params(omega_y=0.1)
        with pytest.raises(cb.RegimeMismatchError):
            cb.predicted_ballistic_rate(p, FrequencyRatio.rational(0, 1))

    def test_drive_along_x_rejected(self):
        p = params(omega_x=2.0, omega_y=0.0)
        with pytest.raises(ValueError):
            cb.predicted_ballistic_rate(p, FrequencyRatio.rational(1, 1))

    @given(
        r=st.integers(1, 6),
        q=st.integers(1, 6),
        w1=st.floats(1.0, 8.0),
        factor=st.floats(1.01, 4.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_monotone_decreasing_in_omega(self, r, q, w1, factor):
        g = math.gcd(r, q)
        ratio = FrequencyRatio.rational(r // g, q // g)
        w2 = w1 * factor

        def rate(w):
            wx, wy = ratio.as_float(), 1.0
            norm = math.hypot(wx, wy)
            p = params(omega_x=w * wx / norm, omega_y=w * wy / norm)
            return cb.predicted_ballistic_rate(p, ratio)

        assert rate(w2) < rate(w1)


class TestFrequencyRatio:
    def test_nu_formula(self):
        assert FrequencyRatio.rational(1, 1).nu == 1
        assert FrequencyRatio.rational(1, 3).nu == 3
        assert FrequencyRatio.rational(18, 19).nu == 36
        assert FrequencyRatio.rational(0, 1).nu == 0

    def test_coprime_required(self):
        with pytest.raises(ValueError):
            FrequencyRatio.rational(2, 4)

    def test_irrational_has_no_nu(self):
        assert FrequencyRatio.irrational(0.309).nu is None

    def test_invalid_kind(self):
        with pytest.raises(ValueError):
            FrequencyRatio(kind="sometimes")
