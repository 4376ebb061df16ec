"""risleo: Monte Carlo link simulation and beamforming optimization for
RIS-assisted LEO satellite downlinks.

The package is organized around seven small modules:

- ``geometry``     orbit/terminal geometry (slant range, velocity, Doppler, delay)
- ``channel``      large-scale and small-scale channel models, LOS tables, link budgets
- ``ris``          reflecting-panel state, cascaded effective channel, received SNR
- ``beamforming``  alternating optimization and closed-form benchmark schemes
- ``ofdm``         residual carrier offset and inter-carrier-interference SINR
- ``engine``       seeded Monte Carlo sweeps producing tabular results
- ``scenario``/``reporting``/``cli``  scenario files, CSV/manifest output, command line
"""

__version__ = "0.1.0"

from .common import SNR_FLOOR_DB, db_to_linear, linear_to_db

__all__ = ["SNR_FLOOR_DB", "db_to_linear", "linear_to_db", "__version__"]
