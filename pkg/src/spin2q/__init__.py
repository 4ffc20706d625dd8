"""spin2q: simulated two-spin-qubit processor and its characterization stack."""

from .device import DeviceProfile, exchange_from_voltage, load_profile, thermal_state
from .paulis import (LABELS, PAULIS, apply_channel, dm_pure, matrix_log_principal,
                     ptm_of_unitary)

__version__ = "0.1.0"

__all__ = [
    "DeviceProfile",
    "exchange_from_voltage",
    "load_profile",
    "thermal_state",
    "LABELS",
    "PAULIS",
    "apply_channel",
    "dm_pure",
    "matrix_log_principal",
    "ptm_of_unitary",
    "__version__",
]
