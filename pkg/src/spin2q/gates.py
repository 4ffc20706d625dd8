"""Gate compilation: elementary pulses, virtual phases and composite gates.

Gate names (ASCII): ``x1_90, x1_m90, x1_180`` and the ``x2_*`` twins for
resonant microwave rotations, ``z1_90, z1_m90, z1_180, z2_*`` for virtual
phase gates, ``i`` for a one-pulse-long idle, and the two-qubit ``cz, dcz,
zcnot, cnot``.

The *ideal* unitary of a gate is its secular model: resonant pulses rotate
only their target, exchange contributes pure controlled phase. The pulse
simulator retains off-resonant driving and exchange flip-flop terms, so the
simulated gate differs from the ideal one exactly by the physical
imperfections of the scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .device import DeviceProfile
from .paulis import ptm_of_unitary
from .pulse import (PulseSegment, exchange, idle, microwave, pulse_superop,
                    rz_superop, two_tone, apply_superop)

__all__ = ["GateSpec", "compile_gate", "compile_z", "gate_duration",
           "sequence_segments", "sequence_superop", "sequence_ideal_ptm",
           "apply_gates", "GATE_NAMES"]

GATE_NAMES = ("x1_90", "x1_m90", "x1_180", "x2_90", "x2_m90", "x2_180",
              "z1_90", "z1_m90", "z1_180", "z2_90", "z2_m90", "z2_180",
              "i", "cz", "dcz", "zcnot", "cnot")

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_EYE2 = np.eye(2, dtype=complex)


def _rot(axis: np.ndarray, angle: float) -> np.ndarray:
    return np.cos(angle / 2) * _EYE2 - 1j * np.sin(angle / 2) * axis


def _rz(theta: float) -> np.ndarray:
    return _rot(_SZ, theta)


def _on(qubit: int, u: np.ndarray) -> np.ndarray:
    return np.kron(u, _EYE2) if qubit == 1 else np.kron(_EYE2, u)


def _exchange_phase_unitary(theta: float) -> np.ndarray:
    """Secular exchange evolution: odd states acquire exp(i theta)."""
    return np.diag([1.0, np.exp(1j * theta), np.exp(1j * theta), 1.0])


@dataclass(frozen=True)
class GateSpec:
    """Compiled gate: physical segments plus trailing virtual Z phases."""

    name: str
    segments: tuple[PulseSegment, ...]
    virtual_phase_1: float
    virtual_phase_2: float
    ideal_unitary: np.ndarray

    @property
    def duration_s(self) -> float:
        return sum(seg.duration_s for seg in self.segments)

    @property
    def n_physical_pulses(self) -> int:
        return sum(1 for seg in self.segments if seg.kind == "microwave")

    @property
    def ideal_ptm(self) -> np.ndarray:
        return ptm_of_unitary(self.ideal_unitary)


class CompilationError(ValueError):
    pass


def _mw(profile: DeviceProfile, qubit: int, angle: float, phase: float) -> PulseSegment:
    duration = abs(angle) / (2.0 * np.pi * profile.f_rabi_hz)
    carrier = profile.f_qubit_1_hz if qubit == 1 else profile.f_qubit_2_hz
    if angle < 0:
        phase = phase + np.pi
    return microwave(duration, carrier, profile.f_rabi_hz, phase,
                     target=f"q{qubit}", j_hz=profile.j_idle_hz)


def _stark_correction(profile, qubit: int, duration_s: float) -> float:
    """Virtual Z angle undoing the spectator phase of a resonant pulse.

    When the off-resonance cancellation condition holds, the spectator
    completes full dressed rotations and is left with a pure Z phase equal
    to the integrated AC Stark shift; this returns the compensating angle.
    """
    detuning = profile.delta_ez_hz if qubit == 1 else -profile.delta_ez_hz
    theta = -2.0 * np.pi * detuning * duration_s
    return float(np.remainder(theta + np.pi, 2.0 * np.pi) - np.pi)


def _x_gate(profile, qubit, angle) -> GateSpec:
    seg = _mw(profile, qubit, angle, 0.0)
    u = _on(qubit, _rot(_SX, angle))
    corr = _stark_correction(profile, qubit, seg.duration_s)
    vp = (0.0, corr) if qubit == 1 else (corr, 0.0)
    suffix = {np.pi / 2: "90", -np.pi / 2: "m90", np.pi: "180"}[angle]
    return GateSpec(f"x{qubit}_{suffix}", (seg,), vp[0], vp[1], u)


def compile_z(qubit: int, theta: float) -> GateSpec:
    """Virtual (zero-duration) Z rotation."""
    u = _on(qubit, _rz(theta))
    vp = (theta, 0.0) if qubit == 1 else (0.0, theta)
    suffix = {np.pi / 2: "90", -np.pi / 2: "m90", np.pi: "180"}.get(theta)
    name = f"z{qubit}_{suffix}" if suffix else f"z{qubit}({theta:.6g})"
    return GateSpec(name, (), vp[0], vp[1], u)


def _cz_gate(profile) -> GateSpec:
    j = profile.j_cz_hz
    if j <= 0:
        raise CompilationError("CZ requires positive exchange at the CZ point")
    t_ex = 1.0 / (2.0 * j)
    # odd states pick up exp(i pi/2) over 1/(2J); trailing virtual Z(-pi/2)
    # on both qubits turns the bare exchange phase pattern into an exact CZ.
    ideal = (np.kron(_rz(-np.pi / 2), _rz(-np.pi / 2))
             @ _exchange_phase_unitary(np.pi / 2))
    return GateSpec("cz", (exchange(t_ex, j),), -np.pi / 2, -np.pi / 2, ideal)


def _dcz_gate(profile) -> GateSpec:
    j = profile.j_cz_hz
    if j <= 0:
        raise CompilationError("DCZ requires positive exchange at the CZ point")
    t_half = 1.0 / (4.0 * j)
    t_pi = 1.0 / (2.0 * profile.f_rabi_hz)
    segs = (exchange(t_half, j), two_tone(t_pi, profile.f_rabi_hz),
            exchange(t_half, j))
    echo = np.kron(_rot(_SX, np.pi), _rot(_SX, np.pi))
    half = _exchange_phase_unitary(np.pi / 4)
    ideal = half @ echo @ half
    return GateSpec("dcz", segs, 0.0, 0.0, ideal)


_H_SANDWICH = (("z", 2, np.pi / 2), ("x", 2, np.pi / 2), ("z", 2, np.pi / 2))


def _composite(profile, name: str, steps) -> GateSpec:
    """Fuse a list of primitive gates into one GateSpec (virtual Zs exact)."""
    ideal = np.eye(4, dtype=complex)
    # Virtual Zs are applied as exact zero-duration rotations between
    # segments, mirroring sequence execution.
    ops: list[tuple[str, object]] = []
    for kind, qubit, angle in steps:
        if kind == "x":
            g = _x_gate(profile, qubit, angle)
            ops.append(("seg", g.segments[0]))
            if g.virtual_phase_1:
                ops.append(("rz", (1, g.virtual_phase_1)))
            if g.virtual_phase_2:
                ops.append(("rz", (2, g.virtual_phase_2)))
            ideal = g.ideal_unitary @ ideal
        elif kind == "z":
            ops.append(("rz", (qubit, angle)))
            ideal = _on(qubit, _rz(angle)) @ ideal
        elif kind == "cz":
            g = _cz_gate(profile)
            for seg in g.segments:
                ops.append(("seg", seg))
            ops.append(("rz", (1, g.virtual_phase_1)))
            ops.append(("rz", (2, g.virtual_phase_2)))
            ideal = g.ideal_unitary @ ideal
        else:
            raise CompilationError(f"unknown composite step {kind!r}")

    # Collapse trailing virtual Zs into the GateSpec phase fields; interior
    # ones are kept as explicit zero-duration markers.
    segments = []
    vz: list[tuple[int, float]] = []
    trailing1 = trailing2 = 0.0
    for op, payload in ops:
        if op == "seg":
            for qubit, angle in vz:
                segments.append(_virtual_marker(qubit, angle))
            vz = []
            segments.append(payload)
        else:
            vz.append(payload)
    for qubit, angle in vz:
        if qubit == 1:
            trailing1 += angle
        else:
            trailing2 += angle
    return GateSpec(name, tuple(segments), trailing1, trailing2, ideal)


def _virtual_marker(qubit: int, angle: float) -> PulseSegment:
    """Zero-duration segment recording an interior virtual Z."""
    return PulseSegment("idle", 0.0, phase_rad=angle,
                        target=f"q{qubit}")


def _zcnot_gate(profile) -> GateSpec:
    # zCNOT flips qubit 2 when qubit 1 is spin-up: |uu> <-> |ud|, |dd> fixed.
    steps = list(_H_SANDWICH) + [("cz", 0, 0.0)] + list(_H_SANDWICH)
    g = _composite(profile, "zcnot", steps)
    return g


def _cnot_gate(profile) -> GateSpec:
    # Complementary control: flips qubit 2 when qubit 1 is spin-down.
    steps = list(_H_SANDWICH) + [("cz", 0, 0.0)] + list(_H_SANDWICH) \
        + [("x", 2, np.pi)]
    return _composite(profile, "cnot", steps)


@lru_cache(maxsize=512)
def _compile_cached(name: str, profile: DeviceProfile) -> GateSpec:
    if name in ("x1_90", "x1_m90", "x1_180", "x2_90", "x2_m90", "x2_180"):
        qubit = int(name[1])
        angle = {"90": np.pi / 2, "m90": -np.pi / 2, "180": np.pi}[name.split("_")[1]]
        return _x_gate(profile, qubit, angle)
    if name in ("z1_90", "z1_m90", "z1_180", "z2_90", "z2_m90", "z2_180"):
        qubit = int(name[1])
        angle = {"90": np.pi / 2, "m90": -np.pi / 2, "180": np.pi}[name.split("_")[1]]
        return compile_z(qubit, angle)
    if name == "i":
        t = 1.0 / (4.0 * profile.f_rabi_hz)
        return GateSpec("i", (idle(t, profile.j_idle_hz),), 0.0, 0.0,
                        np.eye(4, dtype=complex))
    if name == "cz":
        return _cz_gate(profile)
    if name == "dcz":
        return _dcz_gate(profile)
    if name == "zcnot":
        return _zcnot_gate(profile)
    if name == "cnot":
        return _cnot_gate(profile)
    raise CompilationError(f"unknown gate {name!r}")


def compile_gate(name: str, profile: DeviceProfile) -> GateSpec:
    """Compile a named gate against a device profile."""
    return _compile_cached(name, profile)


def gate_duration(name: str, profile: DeviceProfile) -> float:
    return compile_gate(name, profile).duration_s


def sequence_segments(gates, profile: DeviceProfile, *, padding_s=None,
                      gap_s=0.0):
    """Flatten compiled gates into (segments, virtual-ops) execution plan.

    Returns a list of ("seg", PulseSegment) and ("rz", (theta1, theta2))
    entries; padding idles are inserted between consecutive gates.
    """
    if padding_s is None:
        padding_s = profile.pulse_padding_s
    plan: list[tuple[str, object]] = []
    specs = [compile_gate(g, profile) if isinstance(g, str) else g for g in gates]
    for k, spec in enumerate(specs):
        if k > 0 and (padding_s or gap_s):
            plan.append(("seg", idle(padding_s + gap_s, profile.j_idle_hz)))
        for seg in spec.segments:
            if seg.duration_s == 0.0 and seg.kind == "idle" and seg.phase_rad:
                theta = seg.phase_rad
                if seg.target == "q1":
                    plan.append(("rz", (theta, 0.0)))
                else:
                    plan.append(("rz", (0.0, theta)))
            else:
                plan.append(("seg", seg))
        if spec.virtual_phase_1 or spec.virtual_phase_2:
            plan.append(("rz", (spec.virtual_phase_1, spec.virtual_phase_2)))
    return plan


def sequence_superop(gates, profile: DeviceProfile, noise=None, rng=None, *,
                     padding_s=None, gap_s=0.0, draw=None) -> np.ndarray:
    """Superoperator of a whole gate sequence under one quasi-static draw."""
    from .pulse import draw_quasi_static, _as_noise  # local to avoid cycle

    plan = sequence_segments(gates, profile, padding_s=padding_s, gap_s=gap_s)
    noise_s = _as_noise(noise)
    if draw is None:
        from .pulse import QuasiStaticDraw
        draw = draw_quasi_static(profile, noise_s, rng) if noise_s is not None \
            else QuasiStaticDraw()
    s = np.eye(16, dtype=complex)
    t = 0.0
    for op, payload in plan:
        if op == "rz":
            s = rz_superop(*payload) @ s
        else:
            s = pulse_superop([payload], profile, noise_s, None,
                              t_start=t, draw=draw) @ s
            t += payload.duration_s
    return s


def sequence_ideal_ptm(gates, profile: DeviceProfile) -> np.ndarray:
    m = np.eye(16)
    for g in gates:
        spec = compile_gate(g, profile) if isinstance(g, str) else g
        m = spec.ideal_ptm @ m
    return m


def apply_gates(rho, gates, profile: DeviceProfile, noise=None, rng=None, *,
                padding_s=None, gap_s=0.0, draw=None) -> np.ndarray:
    s = sequence_superop(gates, profile, noise, rng, padding_s=padding_s,
                        gap_s=gap_s, draw=draw)
    out = apply_superop(s, rho)
    out = (out + out.conj().T) / 2.0
    return out / np.trace(out).real
