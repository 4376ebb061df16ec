import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from risleo.geometry import (
    EarthModel,
    GeometryState,
    OrbitSpec,
    differential_doppler_hz,
    geometry_state,
    max_doppler_hz,
    orbital_velocity_km_s,
    propagation_delay_s,
    slant_range_km,
)

EARTH = EarthModel()


def slant_range_oracle(altitude_km: float, elevation_deg: float) -> float:
    """Independent root-find on the law-of-cosines triangle relation."""
    s = math.sin(math.radians(elevation_deg))
    re = EARTH.radius_km

    def residual(d: float) -> float:
        return d * d + 2.0 * d * re * s - (2.0 * re * altitude_km + altitude_km**2)

    return brentq(residual, 0.0, 2.0 * (re + altitude_km), xtol=1e-10)


class TestSlantRange:
    def test_zenith_equals_altitude(self):
        assert slant_range_km(OrbitSpec(600.0), 90.0) == pytest.approx(600.0, abs=1e-6)

    def test_low_elevation_matches_root_find(self):
        # frozen from the oracle: 1931.635358909018 km
        d = slant_range_km(OrbitSpec(600.0), 10.0)
        assert d == pytest.approx(1931.635358909018, abs=1e-6)
        assert d == pytest.approx(slant_range_oracle(600.0, 10.0), abs=1e-6)

    @given(
        h=st.floats(min_value=200.0, max_value=36000.0),
        elev=st.floats(min_value=0.0, max_value=90.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_root_find_everywhere(self, h, elev):
        assert slant_range_km(OrbitSpec(h), elev) == pytest.approx(
            slant_range_oracle(h, elev), rel=1e-9, abs=1e-6
        )

    @given(
        h=st.floats(min_value=200.0, max_value=36000.0),
        lo=st.floats(min_value=0.0, max_value=89.0),
        step=st.floats(min_value=0.5, max_value=45.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_strictly_decreasing_in_elevation(self, h, lo, step):
        hi = min(lo + step, 90.0)
        orbit = OrbitSpec(h)
        assert slant_range_km(orbit, hi) < slant_range_km(orbit, lo)

    def test_elevation_domain(self):
        with pytest.raises(ValueError):
            slant_range_km(OrbitSpec(600.0), -1.0)
        with pytest.raises(ValueError):
            slant_range_km(OrbitSpec(600.0), 90.5)

    def test_altitude_domain(self):
        with pytest.raises(ValueError):
            OrbitSpec(199.0)
        with pytest.raises(ValueError):
            OrbitSpec(36001.0)
        OrbitSpec(200.0)
        OrbitSpec(36000.0)


class TestVelocityAndDoppler:
    def test_orbital_velocity_600km(self):
        # sqrt(398600.4418 / 6971) = 7.561733136872838 km/s
        assert orbital_velocity_km_s(OrbitSpec(600.0)) == pytest.approx(
            7.561733136872838, rel=1e-12
        )
        assert orbital_velocity_km_s(OrbitSpec(600.0)) == pytest.approx(7.56, abs=5e-3)

    def test_horizon_doppler_s_band_and_ka_band(self):
        orbit = OrbitSpec(600.0)
        fd_2ghz = max_doppler_hz(orbit, 2.0e9, 0.0)
        fd_20ghz = max_doppler_hz(orbit, 20.0e9, 0.0)
        assert fd_2ghz == pytest.approx(46104.48355435831, rel=1e-12)
        # worst-case shifts for the two bands land within 10% of 48/480 kHz
        assert abs(fd_2ghz - 48e3) <= 0.10 * 48e3
        assert abs(fd_20ghz - 480e3) <= 0.10 * 480e3

    def test_doppler_linear_in_carrier_and_zero_at_zenith(self):
        orbit = OrbitSpec(600.0)
        assert max_doppler_hz(orbit, 0.0, 30.0) == 0.0
        assert max_doppler_hz(orbit, 4.0e9, 30.0) == pytest.approx(
            2.0 * max_doppler_hz(orbit, 2.0e9, 30.0), rel=1e-12
        )
        assert max_doppler_hz(orbit, 2.0e9, 90.0) == pytest.approx(0.0, abs=1e-9)

    @given(
        elev=st.floats(min_value=0.0, max_value=89.0),
        h=st.floats(min_value=200.0, max_value=36000.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_doppler_maximized_at_horizon(self, elev, h):
        orbit = OrbitSpec(h)
        assert max_doppler_hz(orbit, 2.0e9, 0.0) >= max_doppler_hz(orbit, 2.0e9, elev)

    def test_differential_doppler_is_a_difference(self):
        orbit = OrbitSpec(600.0)
        delta = differential_doppler_hz(orbit, 2.0e9, 10.0, 40.0)
        assert delta == pytest.approx(
            max_doppler_hz(orbit, 2.0e9, 10.0) - max_doppler_hz(orbit, 2.0e9, 40.0),
            rel=1e-12,
        )


class TestDelay:
    def test_four_leg_delay_at_600km(self):
        # 4 * 600 / c = 8.00553828475565 ms
        assert propagation_delay_s(600.0, legs=4) == pytest.approx(
            0.00800553828475565, rel=1e-12
        )

    def test_low_elevation_four_leg_delay_below_30ms(self):
        d = slant_range_km(OrbitSpec(600.0), 10.0)
        delay = propagation_delay_s(d, legs=4)
        assert delay == pytest.approx(0.02577296802988977, rel=1e-9)
        assert delay < 0.030

    def test_delay_linear_in_range_and_legs(self):
        assert propagation_delay_s(1200.0) == pytest.approx(
            2.0 * propagation_delay_s(600.0), rel=1e-12
        )
        assert propagation_delay_s(600.0, legs=3) == pytest.approx(
            3.0 * propagation_delay_s(600.0), rel=1e-12
        )

    def test_legs_domain(self):
        with pytest.raises(ValueError):
            propagation_delay_s(600.0, legs=0)


def test_geometry_state_bundles_consistent_values():
    st_ = geometry_state(OrbitSpec(600.0), 2.0e9, 10.0)
    assert isinstance(st_, GeometryState)
    assert st_.slant_range_km == pytest.approx(1931.635358909018, abs=1e-6)
    assert st_.velocity_km_s == pytest.approx(7.561733136872838, rel=1e-12)
    assert st_.max_doppler_hz == pytest.approx(
        max_doppler_hz(OrbitSpec(600.0), 2.0e9, 10.0), rel=1e-12
    )


def test_geometry_state_rejects_nonpositive_ranges():
    with pytest.raises(ValueError):
        GeometryState(10.0, -1.0, 7.5, 100.0)
