"""Orbit and terminal geometry for a circular-orbit satellite over a spherical Earth.

All ranges are in km, velocities in km/s, frequencies in Hz, angles in degrees
unless a name says otherwise. The Earth model is a non-rotating sphere; Earth
rotation is a second-order effect at the elevations treated here and is left
out on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .common import SPEED_OF_LIGHT_KM_S

MIN_ALTITUDE_KM = 200.0
MAX_ALTITUDE_KM = 36_000.0


@dataclass(frozen=True)
class EarthModel:
    """Spherical Earth with a gravitational parameter for circular-orbit speed."""

    radius_km: float = 6371.0
    gravitational_parameter_km3_s2: float = 398600.4418

    def __post_init__(self) -> None:
        if self.radius_km <= 0.0:
            raise ValueError(f"radius_km must be > 0, got {self.radius_km}")
        if self.gravitational_parameter_km3_s2 <= 0.0:
            raise ValueError(
                "gravitational_parameter_km3_s2 must be > 0, got "
                f"{self.gravitational_parameter_km3_s2}"
            )


@dataclass(frozen=True)
class OrbitSpec:
    """Circular orbit described by its altitude above the mean Earth surface."""

    altitude_km: float

    def __post_init__(self) -> None:
        if not (MIN_ALTITUDE_KM <= self.altitude_km <= MAX_ALTITUDE_KM):
            raise ValueError(
                f"altitude_km must lie in [{MIN_ALTITUDE_KM}, {MAX_ALTITUDE_KM}], "
                f"got {self.altitude_km}"
            )


_DEFAULT_EARTH = EarthModel()


def _check_elevation(elevation_deg: float) -> None:
    if not (0.0 <= elevation_deg <= 90.0):
        raise ValueError(f"elevation_deg must lie in [0, 90], got {elevation_deg}")


def slant_range_km(
    orbit: OrbitSpec, elevation_deg: float, earth: EarthModel = _DEFAULT_EARTH
) -> float:
    """Line-of-sight distance from a ground terminal to the satellite.

    Parameters
    ----------
    orbit : OrbitSpec
        Circular orbit of the satellite.
    elevation_deg : float
        Elevation of the satellite as seen from the terminal, in [0, 90].
    earth : EarthModel, optional
        Earth geometry to use.

    Returns
    -------
    float
        Slant range in km. Equals the altitude at 90 deg elevation and grows
        monotonically as the elevation drops.
    """
    _check_elevation(elevation_deg)
    re = earth.radius_km
    h = orbit.altitude_km
    sin_e = math.sin(math.radians(elevation_deg))
    return math.sqrt(re * re * sin_e * sin_e + 2.0 * re * h + h * h) - re * sin_e


def orbital_velocity_km_s(orbit: OrbitSpec, earth: EarthModel = _DEFAULT_EARTH) -> float:
    """Orbital speed of a circular orbit: sqrt(mu / (Re + h))."""
    return math.sqrt(
        earth.gravitational_parameter_km3_s2 / (earth.radius_km + orbit.altitude_km)
    )


def max_doppler_hz(
    orbit: OrbitSpec,
    carrier_hz: float,
    elevation_deg: float,
    earth: EarthModel = _DEFAULT_EARTH,
) -> float:
    """Worst-case Doppler shift seen at a terminal for a pass at the given elevation.

    Uses the circular-orbit relative-velocity projection
    ``f_d = (f_c / c) * v * (Re / (Re + h)) * cos(elevation)``,
    which is maximal at the horizon and zero at zenith.
    """
    if carrier_hz < 0.0:
        raise ValueError(f"carrier_hz must be >= 0, got {carrier_hz}")
    _check_elevation(elevation_deg)
    v = orbital_velocity_km_s(orbit, earth)
    ratio = earth.radius_km / (earth.radius_km + orbit.altitude_km)
    return (carrier_hz / SPEED_OF_LIGHT_KM_S) * v * ratio * math.cos(
        math.radians(elevation_deg)
    )


def differential_doppler_hz(
    orbit: OrbitSpec,
    carrier_hz: float,
    elevation_a_deg: float,
    elevation_b_deg: float,
    earth: EarthModel = _DEFAULT_EARTH,
) -> float:
    """Doppler difference between two terminals seeing the same satellite."""
    return max_doppler_hz(orbit, carrier_hz, elevation_a_deg, earth) - max_doppler_hz(
        orbit, carrier_hz, elevation_b_deg, earth
    )


def propagation_delay_s(slant_range_km: float, legs: int = 1) -> float:
    """One-way or multi-leg propagation delay for a given slant range.

    ``legs`` counts how many times the slant distance is traversed
    (e.g. 4 for a two-hop forward+return path). Must be >= 1.
    """
    if slant_range_km < 0.0:
        raise ValueError(f"slant_range_km must be >= 0, got {slant_range_km}")
    if legs < 1:
        raise ValueError(f"legs must be >= 1, got {legs}")
    return legs * slant_range_km / SPEED_OF_LIGHT_KM_S


@dataclass(frozen=True)
class GeometryState:
    """Geometry snapshot for one satellite-terminal pair at a fixed elevation."""

    elevation_deg: float
    slant_range_km: float
    velocity_km_s: float
    max_doppler_hz: float

    def __post_init__(self) -> None:
        if self.slant_range_km <= 0.0:
            raise ValueError("slant_range_km must be > 0")
        if self.velocity_km_s <= 0.0:
            raise ValueError("velocity_km_s must be > 0")


def geometry_state(
    orbit: OrbitSpec,
    carrier_hz: float,
    elevation_deg: float,
    earth: EarthModel = _DEFAULT_EARTH,
) -> GeometryState:
    """Bundle the derived geometry quantities for one link endpoint."""
    return GeometryState(
        elevation_deg=elevation_deg,
        slant_range_km=slant_range_km(orbit, elevation_deg, earth),
        velocity_km_s=orbital_velocity_km_s(orbit, earth),
        max_doppler_hz=max_doppler_hz(orbit, carrier_hz, elevation_deg, earth),
    )
