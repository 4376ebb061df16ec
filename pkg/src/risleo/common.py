"""Shared physical constants and dB helpers."""

from __future__ import annotations

import math

SPEED_OF_LIGHT_KM_S = 299_792.458
# Boltzmann constant, J/K (exact since the 2019 SI redefinition).
BOLTZMANN_J_PER_K = 1.380649e-23

# Serialized SNR floor used wherever a zero effective channel would otherwise
# produce -inf dB. Keeps every serialized number finite.
SNR_FLOOR_DB = -400.0


def db_to_linear(value_db: float) -> float:
    """Convert a dB quantity to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value_linear: float, floor_db: float = SNR_FLOOR_DB) -> float:
    """Convert a nonnegative linear quantity to dB, clamped at ``floor_db``.

    A zero input maps to the floor instead of -inf so downstream
    serialization stays numeric.
    """
    if value_linear < 0.0:
        raise ValueError(f"linear value must be >= 0, got {value_linear}")
    if value_linear == 0.0:
        return floor_db
    return max(10.0 * math.log10(value_linear), floor_db)
