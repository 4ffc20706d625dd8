"""Device model: physical parameters, exchange map, thermal states.

A :class:`DeviceProfile` collects every physical parameter of the simulated
two-qubit processor. Coherence-time anchors are stored at the profile's own
temperature and scaled with pure power laws between 0.5 K and 1.5 K
(constant below 0.5 K, where the measured power laws no longer apply).

Two profiles anchored to the measured device metrics ship with the package:
``1K-0.79T`` and ``0.1K-0.79T``.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.constants import h as PLANCK_H, k as BOLTZMANN_K

from .paulis import pauli_matrix

__all__ = [
    "ReadoutParams",
    "DeviceProfile",
    "exchange_from_voltage",
    "static_hamiltonian",
    "thermal_state",
    "load_profile",
    "bundled_profile_names",
]

_CLAMP_LOW_K = 0.5   # power laws hold above this temperature
_CLAMP_HIGH_K = 1.5


@dataclass(frozen=True)
class ReadoutParams:
    """Charge-sensor signal model at the parity readout point."""

    signal_blockaded: float = 2.0
    signal_unblockaded: float = 1.0
    noise_sigma_rt_hz: float = 5.6286e-4   # signal units per sqrt(Hz)
    t_integration_s: float = 50e-6
    threshold: float | None = None         # None -> midpoint of the two levels
    odd_to_even_flip: float = 0.0          # diabatic back-action per readout

    def __post_init__(self):
        if self.signal_blockaded == self.signal_unblockaded:
            raise ValueError("signal levels must differ")
        thr = self.threshold
        if thr is not None:
            lo, hi = sorted((self.signal_blockaded, self.signal_unblockaded))
            if not (lo < thr < hi):
                raise ValueError("threshold must lie strictly between the levels")

    def sigma_at(self, t_integration_s: float) -> float:
        """Gaussian signal noise after integrating for the given time."""
        return self.noise_sigma_rt_hz / np.sqrt(t_integration_s)


@dataclass(frozen=True)
class DeviceProfile:
    """All physical parameters of the simulated processor."""

    name: str
    b0_t: float
    temperature_k: float
    f_qubit_1_hz: float
    f_qubit_2_hz: float
    f_rabi_hz: float
    # exchange map J(V) = exchange_ref_hz * 10**(slope * (V - v_ref_v))
    exchange_ref_hz: float
    v_ref_v: float
    exchange_slope_dec_per_v: float = 20.0
    v_cz_v: float = 1.2
    # coherence anchors, given at anchor_temperature_k
    t1_s: float = 9.29e-3
    t1_exponent: float = -2.5
    t2_star_s: float = 2.32e-6
    t2_star_exponent: float = -0.2
    t2_hahn_s: float = 33.26e-6
    t2_hahn_exponent: float = -1.05
    t1_psb_s: float = 1.36e-3
    t1_psb_exponent: float = -2.8
    anchor_temperature_k: float | None = None   # None -> temperature_k
    # noise and timing
    sigma_j_rel: float = 1e-3          # quasi-static relative exchange noise
    j_idle_hz: float = 0.0             # residual exchange away from the CZ point
    load_adiabaticity: float = 0.65    # thermalized fraction of the in-loop load ramp
    pulse_padding_s: float = 0.02e-6
    sequence_gap_s: float = 0.1e-6     # real-time-logic gap in multi-gate sequences
    readout: ReadoutParams = dataclasses.field(default_factory=ReadoutParams)

    def __post_init__(self):
        for field in ("temperature_k", "f_qubit_1_hz", "f_qubit_2_hz", "f_rabi_hz",
                      "exchange_ref_hz", "t1_s", "t2_star_s", "t2_hahn_s", "t1_psb_s"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive")
        if self.delta_ez_hz == 0.0:
            raise ValueError("qubit frequencies must differ for parity-basis operation")

    @property
    def delta_ez_hz(self) -> float:
        return self.f_qubit_2_hz - self.f_qubit_1_hz

    @property
    def j_cz_hz(self) -> float:
        return self.exchange_at_voltage(self.v_cz_v)

    def exchange_at_voltage(self, v_j: float) -> float:
        return exchange_from_voltage(v_j, self)

    def _scaled(self, anchor: float, exponent: float, temperature_k: float | None) -> float:
        t = self.temperature_k if temperature_k is None else temperature_k
        t_ref = self.anchor_temperature_k if self.anchor_temperature_k is not None \
            else self.temperature_k
        t = min(max(t, _CLAMP_LOW_K), _CLAMP_HIGH_K)
        t_ref = min(max(t_ref, _CLAMP_LOW_K), _CLAMP_HIGH_K)
        return anchor * (t / t_ref) ** exponent

    def t1_at(self, temperature_k: float | None = None) -> float:
        return self._scaled(self.t1_s, self.t1_exponent, temperature_k)

    def t2_star_at(self, temperature_k: float | None = None) -> float:
        return self._scaled(self.t2_star_s, self.t2_star_exponent, temperature_k)

    def t2_hahn_at(self, temperature_k: float | None = None) -> float:
        return self._scaled(self.t2_hahn_s, self.t2_hahn_exponent, temperature_k)

    def t1_psb_at(self, temperature_k: float | None = None) -> float:
        return self._scaled(self.t1_psb_s, self.t1_psb_exponent, temperature_k)

    def at_temperature(self, temperature_k: float) -> "DeviceProfile":
        """Same device re-anchored at a different operating temperature."""
        return dataclasses.replace(
            self,
            temperature_k=temperature_k,
            t1_s=self.t1_at(temperature_k),
            t2_star_s=self.t2_star_at(temperature_k),
            t2_hahn_s=self.t2_hahn_at(temperature_k),
            t1_psb_s=self.t1_psb_at(temperature_k),
            anchor_temperature_k=temperature_k,
        )

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "DeviceProfile":
        data = dict(data)
        readout = data.pop("readout", None)
        if readout is not None:
            data["readout"] = ReadoutParams(**readout)
        return cls(**data)


def exchange_from_voltage(v_j: float, profile: DeviceProfile) -> float:
    """Exchange coupling J in Hz at exchange-gate voltage v_j (volts)."""
    decades = profile.exchange_slope_dec_per_v * (v_j - profile.v_ref_v)
    return profile.exchange_ref_hz * 10.0 ** decades


def static_hamiltonian(f1_hz: float, f2_hz: float, j_hz: float) -> np.ndarray:
    """Lab-frame static Hamiltonian H/h in Hz.

    H/h = -(f1/2) ZI - (f2/2) IZ + (J/4)(XX + YY + ZZ - II), so spin-up
    carries positive Zeeman energy and the singlet sits at -J.
    """
    zi, iz = pauli_matrix("ZI"), pauli_matrix("IZ")
    heis = (pauli_matrix("XX") + pauli_matrix("YY") + pauli_matrix("ZZ")
            - pauli_matrix("II"))
    return -0.5 * f1_hz * zi - 0.5 * f2_hz * iz + 0.25 * j_hz * heis


def thermal_state(profile: DeviceProfile, j_hz: float = 0.0) -> np.ndarray:
    """Gibbs state exp(-H / kB T) / Z of the static two-spin Hamiltonian."""
    if profile.temperature_k <= 0:
        raise ValueError("temperature must be positive")
    ham = static_hamiltonian(profile.f_qubit_1_hz, profile.f_qubit_2_hz, j_hz)
    beta_h = PLANCK_H / (BOLTZMANN_K * profile.temperature_k)   # seconds
    evals, evecs = np.linalg.eigh(ham)
    weights = np.exp(-beta_h * (evals - evals.min()))
    weights /= weights.sum()
    return (evecs * weights) @ evecs.conj().T


def _profile_dir():
    return resources.files("spin2q") / "profiles"


def bundled_profile_names() -> list[str]:
    return sorted(p.name[:-5] for p in _profile_dir().iterdir() if p.name.endswith(".json"))


def load_profile(name_or_path: str) -> DeviceProfile:
    """Load a bundled profile by name or any profile from a JSON file path."""
    bundled = _profile_dir() / f"{name_or_path}.json"
    try:
        text = bundled.read_text()
    except (FileNotFoundError, OSError):
        with open(name_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return DeviceProfile.from_dict(json.loads(text))
