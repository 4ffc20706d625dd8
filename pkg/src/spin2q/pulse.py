"""Pulse-level time evolution of the two-qubit register.

States live in the reference frame that co-rotates with each qubit at its
nominal frequency. Every segment Hamiltonian is made static by moving to a
segment-specific common rotating frame (the microwave carrier for driven
segments, the mean qubit frequency otherwise); the exact diagonal frame
corrections are applied at the segment boundaries, so the only physical
approximation is the rotating-wave approximation on the drive.

Noisy evolution interleaves the exact coherent step with exact per-qubit
thermal-relaxation and dephasing channels (first order splitting). Noise
sources, all derived from the device profile:

* quasi-static per-shot frequency offsets, sigma_f = 1 / (sqrt(2) pi T2*)
* white dephasing at rate 1 / T2_Hahn per qubit
* thermal amplitude damping at total rate 1 / T1 with detailed-balance
  branching exp(-h f / kB T)
* quasi-static relative exchange fluctuations of width sigma_j_rel
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import h as PLANCK_H, k as BOLTZMANN_K

from .device import DeviceProfile
from .paulis import PAULIS, pauli_matrix

__all__ = ["PulseSegment", "NoiseSettings", "QuasiStaticDraw", "IntegrationError",
           "microwave", "two_tone", "exchange", "idle",
           "pulse_superop", "simulate_pulse", "superop_to_ptm", "ptm_to_superop",
           "apply_superop", "rz_superop", "sigma_f_from_t2_star"]

_STEPS_PER_CYCLE = 50  # splitting steps per drive / exchange period


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PulseSegment:
    """One piecewise-constant control interval."""

    kind: str                       # "microwave" | "exchange" | "idle"
    duration_s: float
    carrier_hz: float | None = None
    rabi_hz: float = 0.0
    phase_rad: float = 0.0          # drive phase (qubit-1 tone for two-tone)
    phase2_rad: float | None = None  # qubit-2 tone phase for two-tone segments
    target: str = "q1"              # "q1" | "q2" | "both"
    j_hz: float = 0.0

    def __post_init__(self):
        if self.kind not in ("microwave", "exchange", "idle"):
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.duration_s < 0:
            raise ValueError("duration must be non-negative")
        if self.kind == "exchange" and self.j_hz < 0:
            raise ValueError("exchange J must be non-negative")
        if self.kind == "microwave" and self.target not in ("q1", "q2", "both"):
            raise ValueError(f"bad microwave target {self.target!r}")


def microwave(duration_s, carrier_hz, rabi_hz, phase_rad=0.0, target="q1",
              j_hz=0.0) -> PulseSegment:
    return PulseSegment("microwave", duration_s, carrier_hz, rabi_hz, phase_rad,
                        None, target, j_hz)


def two_tone(duration_s, rabi_hz, phase1_rad=0.0, phase2_rad=0.0) -> PulseSegment:
    """Simultaneous resonant tones on both qubits (echo pulses)."""
    return PulseSegment("microwave", duration_s, None, rabi_hz, phase1_rad,
                        phase2_rad, "both", 0.0)


def exchange(duration_s, j_hz) -> PulseSegment:
    return PulseSegment("exchange", duration_s, j_hz=j_hz)


def idle(duration_s, j_hz=0.0) -> PulseSegment:
    return PulseSegment("idle", duration_s, j_hz=j_hz)


@dataclass(frozen=True)
class NoiseSettings:
    quasi_static_detuning: bool = True
    white_dephasing: bool = True
    relaxation: bool = True
    exchange_noise: bool = True

    @classmethod
    def all_on(cls) -> "NoiseSettings":
        return cls()

    @classmethod
    def all_off(cls) -> "NoiseSettings":
        return cls(False, False, False, False)

    @property
    def any_dissipative(self) -> bool:
        return self.white_dephasing or self.relaxation


def _as_noise(noise) -> NoiseSettings | None:
    if noise is None or noise is False:
        return None
    if noise is True:
        return NoiseSettings.all_on()
    return noise


@dataclass(frozen=True)
class QuasiStaticDraw:
    """Per-shot static offsets: qubit detunings (Hz) and relative exchange error."""

    delta1_hz: float = 0.0
    delta2_hz: float = 0.0
    j_rel: float = 0.0


def sigma_f_from_t2_star(t2_star_s: float) -> float:
    """Gaussian quasi-static detuning width giving exp(-(t/T2*)^2) Ramsey decay."""
    return 1.0 / (np.sqrt(2.0) * np.pi * t2_star_s)


def draw_quasi_static(profile: DeviceProfile, noise: NoiseSettings,
                      rng: np.random.Generator | None) -> QuasiStaticDraw:
    if rng is None:
        return QuasiStaticDraw()
    sigma_f = sigma_f_from_t2_star(profile.t2_star_s)
    d1 = d2 = gj = 0.0
    if noise.quasi_static_detuning:
        d1 = sigma_f * rng.standard_normal()
        d2 = sigma_f * rng.standard_normal()
    if noise.exchange_noise:
        gj = profile.sigma_j_rel * rng.standard_normal()
    return QuasiStaticDraw(d1, d2, gj)


# --- superoperator helpers (row-major vec convention) ---------------------

_ZI_DIAG = np.array([1.0, 1.0, -1.0, -1.0])
_IZ_DIAG = np.array([1.0, -1.0, 1.0, -1.0])


def _conj_superop(a: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a rho a^dag."""
    return np.kron(a, a.conj())


def _kraus_superop(kraus: list[np.ndarray]) -> np.ndarray:
    return sum(np.kron(k, k.conj()) for k in kraus)


def apply_superop(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return (s @ np.asarray(rho, dtype=complex).reshape(16)).reshape(4, 4)


def rz_superop(theta1: float, theta2: float) -> np.ndarray:
    """Instant virtual Z rotations exp(-i theta Z / 2) on each qubit."""
    rz1 = np.diag(np.exp(np.array([-0.5j * theta1, 0.5j * theta1])))
    rz2 = np.diag(np.exp(np.array([-0.5j * theta2, 0.5j * theta2])))
    return _conj_superop(np.kron(rz1, rz2))


def superop_to_ptm(s: np.ndarray) -> np.ndarray:
    """Convert a row-major-vec superoperator to a Pauli transfer matrix."""
    v = PAULIS.reshape(16, 16)                      # vec(P_i) rows
    return np.real(v.conj() @ s @ v.T) / 4.0


def ptm_to_superop(m: np.ndarray) -> np.ndarray:
    v = PAULIS.reshape(16, 16)
    # inverse change of basis: vec(rho) = v.T @ r / 4, r = v.conj() @ vec(rho)
    return (v.T @ np.asarray(m, dtype=complex) @ v.conj()) / 4.0


def _frame_phases(t: float, w: float, f1: float, f2: float) -> np.ndarray:
    """Diagonal of Q(t) converting the common-w frame to the reference frame."""
    r1 = -(f1 - w) / 2.0
    r2 = -(f2 - w) / 2.0
    angles = 2.0 * np.pi * t * (r1 * _ZI_DIAG + r2 * _IZ_DIAG)
    return np.exp(1j * angles)


def _heisenberg(j_hz: float) -> np.ndarray:
    return 0.25 * j_hz * (pauli_matrix("XX") + pauli_matrix("YY")
                          + pauli_matrix("ZZ") - pauli_matrix("II"))


def _drive_1q(rabi_hz: float, phase: float) -> np.ndarray:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    return 0.5 * rabi_hz * (np.cos(phase) * sx + np.sin(phase) * sy)


def _dissipative_kraus_1q(profile: DeviceProfile, noise: NoiseSettings,
                          f_qubit_hz: float, dt: float) -> list[np.ndarray]:
    """Exact thermal relaxation + dephasing Kraus set for one qubit over dt."""
    kraus = [np.eye(2, dtype=complex)]
    if noise.relaxation:
        x = PLANCK_H * f_qubit_hz / (BOLTZMANN_K * profile.temperature_k)
        p_exc = 1.0 / (1.0 + np.exp(x))          # equilibrium spin-up population
        gamma = 1.0 - np.exp(-dt / profile.t1_s)
        sg, sg1 = np.sqrt(gamma), np.sqrt(1.0 - gamma)
        a = np.sqrt(1.0 - p_exc)
        b = np.sqrt(p_exc)
        kraus = [
            a * np.array([[1, 0], [0, sg1]], dtype=complex),
            a * np.array([[0, sg], [0, 0]], dtype=complex),
            b * np.array([[sg1, 0], [0, 1]], dtype=complex),
            b * np.array([[0, 0], [sg, 0]], dtype=complex),
        ]
    if noise.white_dephasing:
        q = 0.5 * (1.0 - np.exp(-dt / profile.t2_hahn_s))
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        deph = [np.sqrt(1.0 - q) * np.eye(2, dtype=complex), np.sqrt(q) * z]
        kraus = [d @ k for d in deph for k in kraus]
    return kraus


def _dissipative_superop(profile: DeviceProfile, noise: NoiseSettings,
                         dt: float) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    k1 = [np.kron(k, eye) for k in
          _dissipative_kraus_1q(profile, noise, profile.f_qubit_1_hz, dt)]
    k2 = [np.kron(eye, k) for k in
          _dissipative_kraus_1q(profile, noise, profile.f_qubit_2_hz, dt)]
    return _kraus_superop(k2) @ _kraus_superop(k1)


def _segment_hamiltonian(seg: PulseSegment, profile: DeviceProfile,
                         draw: QuasiStaticDraw) -> tuple[np.ndarray, float]:
    """Static H/h in the segment's common frame; returns (H, frame rate w)."""
    f1 = profile.f_qubit_1_hz + draw.delta1_hz
    f2 = profile.f_qubit_2_hz + draw.delta2_hz
    j = seg.j_hz * (1.0 + draw.j_rel) if seg.j_hz else 0.0

    if seg.kind == "microwave" and seg.target == "both":
        if abs(j) > 1e-3 * max(seg.rabi_hz, 1.0):
            raise IntegrationError("two-tone segments require exchange off")
        # each qubit resonant with its own tone; cross-tone terms dropped
        h1 = -0.5 * draw.delta1_hz * np.diag([1.0, -1.0]) \
            + _drive_1q(seg.rabi_hz, seg.phase_rad)
        h2 = -0.5 * draw.delta2_hz * np.diag([1.0, -1.0]) \
            + _drive_1q(seg.rabi_hz, seg.phase2_rad if seg.phase2_rad is not None
                        else seg.phase_rad)
        eye = np.eye(2)
        ham = np.kron(h1, eye) + np.kron(eye, h2)
        # per-qubit frames already coincide with the reference frame
        return ham, None

    if seg.kind == "microwave":
        w = seg.carrier_hz
        if w is None:
            w = profile.f_qubit_1_hz if seg.target == "q1" else profile.f_qubit_2_hz
        ham = (-0.5 * (f1 - w) * pauli_matrix("ZI")
               - 0.5 * (f2 - w) * pauli_matrix("IZ")
               + _heisenberg(j))
        drive = _drive_1q(seg.rabi_hz, seg.phase_rad)
        eye = np.eye(2)
        ham = ham + np.kron(drive, eye) + np.kron(eye, drive)
        return ham, w

    # exchange / idle
    w = 0.5 * (profile.f_qubit_1_hz + profile.f_qubit_2_hz)
    ham = (-0.5 * (f1 - w) * pauli_matrix("ZI")
           - 0.5 * (f2 - w) * pauli_matrix("IZ")
           + _heisenberg(j))
    return ham, w


def _u_of_h(ham: np.ndarray, t: float) -> np.ndarray:
    """exp(-2 pi i H t) for Hermitian H/h in Hz."""
    evals, evecs = np.linalg.eigh(ham)
    return (evecs * np.exp(-2j * np.pi * evals * t)) @ evecs.conj().T


def _segment_dt(seg: PulseSegment) -> float:
    dt = seg.duration_s
    if seg.kind == "microwave" and seg.rabi_hz:
        dt = min(dt, 1.0 / (_STEPS_PER_CYCLE * seg.rabi_hz))
    if seg.j_hz:
        dt = min(dt, 1.0 / (_STEPS_PER_CYCLE * seg.j_hz))
    return dt


def _segment_superop(seg: PulseSegment, profile: DeviceProfile,
                     noise: NoiseSettings | None, draw: QuasiStaticDraw,
                     t_start: float) -> np.ndarray:
    """Exact segment propagator as a superoperator in the reference frame."""
    if seg.duration_s == 0.0:
        return np.eye(16, dtype=complex)
    ham, w = _segment_hamiltonian(seg, profile, draw)

    if noise is None or not noise.any_dissipative:
        s = _conj_superop(_u_of_h(ham, seg.duration_s))
    else:
        dt_max = _segment_dt(seg)
        n = max(1, int(np.ceil(seg.duration_s / dt_max - 1e-12)))
        dt = seg.duration_s / n
        step = _dissipative_superop(profile, noise, dt) @ _conj_superop(_u_of_h(ham, dt))
        s = np.linalg.matrix_power(step, n)

    if w is not None:
        q0 = _frame_phases(t_start, w, profile.f_qubit_1_hz, profile.f_qubit_2_hz)
        q1 = _frame_phases(t_start + seg.duration_s, w,
                           profile.f_qubit_1_hz, profile.f_qubit_2_hz)
        pre = np.kron(q0.conj(), q0)    # reference frame -> w frame at t_start
        post = np.kron(q1, q1.conj())   # w frame -> reference frame at t_end
        s = (s * pre[np.newaxis, :]) * post[:, np.newaxis]
    return s


def pulse_superop(segments, profile: DeviceProfile, noise=None,
                  rng: np.random.Generator | None = None, *,
                  t_start: float = 0.0,
                  draw: QuasiStaticDraw | None = None) -> np.ndarray:
    """Full propagator of a segment list as a 16 x 16 superoperator.

    One quasi-static draw (one "shot") per call; pass ``draw`` explicitly to
    pin the static offsets.
    """
    noise = _as_noise(noise)
    if draw is None:
        draw = draw_quasi_static(profile, noise, rng) if noise is not None \
            else QuasiStaticDraw()
    s = np.eye(16, dtype=complex)
    t = t_start
    for seg in segments:
        s = _segment_superop(seg, profile, noise, draw, t) @ s
        t += seg.duration_s
    return s


def simulate_pulse(rho: np.ndarray, segments, profile: DeviceProfile, noise=None,
                   rng: np.random.Generator | None = None, *,
                   t_start: float = 0.0,
                   draw: QuasiStaticDraw | None = None) -> np.ndarray:
    """Evolve a density matrix through a pulse sequence (one shot)."""
    s = pulse_superop(segments, profile, noise, rng, t_start=t_start, draw=draw)
    out = apply_superop(s, rho)
    tr = np.trace(out)
    if abs(tr - 1.0) > 1e-6:
        raise IntegrationError(f"trace drifted to {tr!r}")
    out = (out + out.conj().T) / 2.0
    return out / tr.real
