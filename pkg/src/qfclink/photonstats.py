"""Single-photon metrology for a pulsed-pump frequency converter.

Rates are per second throughout; per-pulse quantities go through the pump
repetition rate only.  Detector dead time follows the non-paralyzable
model, whose observed-rate map ``m = r / (1 + r T_D)`` is inverted by
:func:`dead_time_correct`.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

__all__ = [
    "PLANCK",
    "SPEED_OF_LIGHT",
    "InputRegime",
    "PulseTrain",
    "DetectionChain",
    "CountRecord",
    "SaturationError",
    "NonPhysicalError",
    "duty_cycle",
    "photon_energy_J",
    "mean_input_photon_rate",
    "photons_per_pulse",
    "dead_time_correct",
    "chain_loss",
    "external_efficiency",
    "snr",
    "mu1",
    "bandwidth_nm_to_hz",
    "noise_rescale",
    "read_count_series",
    "photon_budget",
]

# exact SI values
PLANCK = 6.62607015e-34
SPEED_OF_LIGHT = 299792458.0


class SaturationError(ValueError):
    """Raw rate times dead time reached 1; the correction diverges."""


class NonPhysicalError(ValueError):
    pass


class InputRegime(str, enum.Enum):
    CW = "CW"
    PULSED = "PULSED"


@dataclass(frozen=True)
class PulseTrain:
    tau_pump_s: float
    rep_rate_hz: float
    input_regime: InputRegime = InputRegime.CW
    tau_input_s: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "input_regime", InputRegime(self.input_regime))
        if not (self.tau_pump_s > 0 and self.rep_rate_hz > 0):
            raise ValueError("pulse duration and repetition rate must be positive")
        if self.tau_pump_s * self.rep_rate_hz > 1:
            raise ValueError("pump pulses overlap: tau_pump * rep_rate > 1")
        if self.input_regime is InputRegime.PULSED:
            if self.tau_input_s is None or not self.tau_input_s >= self.tau_pump_s:
                raise ValueError("pulsed input needs tau_input_s >= tau_pump_s")


@dataclass(frozen=True)
class DetectionChain:
    component_transmissions: tuple[float, ...]
    detector_efficiency: float
    dead_time_s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "component_transmissions", tuple(float(t) for t in self.component_transmissions))
        for t in (*self.component_transmissions, self.detector_efficiency):
            if not 0.0 < t <= 1.0:
                raise ValueError(f"transmission/efficiency {t!r} outside (0, 1]")
        if not self.dead_time_s >= 0:
            raise ValueError("dead time must be non-negative")


@dataclass(frozen=True)
class CountRecord:
    s_raw_hz: float
    n_raw_hz: float

    def __post_init__(self):
        if not (self.s_raw_hz >= 0 and self.n_raw_hz >= 0):
            raise ValueError("count rates must be non-negative")


def duty_cycle(train: PulseTrain) -> float:
    """Fraction of the input overlapped in time with the pump."""
    if train.input_regime is InputRegime.CW:
        return train.tau_pump_s * train.rep_rate_hz
    return train.tau_pump_s / train.tau_input_s


def photon_energy_J(lambda_nm: float) -> float:
    return PLANCK * SPEED_OF_LIGHT / (lambda_nm * 1e-9)


def mean_input_photon_rate(P_in_W: float, D: float, lambda_in_nm: float) -> float:
    """Pump-overlapped input photons per second, ``P D / (h c / lambda)``."""
    if P_in_W < 0 or D < 0 or not lambda_in_nm > 0:
        raise ValueError("power and duty cycle must be non-negative, wavelength positive")
    return P_in_W * D / photon_energy_J(lambda_in_nm)


def photons_per_pulse(rate: float, rep_rate_hz: float) -> float:
    if not rep_rate_hz > 0:
        raise ValueError("repetition rate must be positive")
    return rate / rep_rate_hz


def dead_time_correct(raw_hz: float, T_D_s: float) -> float:
    x = raw_hz * T_D_s
    if x >= 1.0:
        raise SaturationError(f"detector saturated: raw rate {raw_hz:g}/s x dead time {T_D_s:g} s = {x:g} >= 1")
    return raw_hz / (1.0 - x)


def chain_loss(chain: DetectionChain) -> float:
    return reduce(lambda a, b: a * b, chain.component_transmissions, chain.detector_efficiency)


def external_efficiency(counts: CountRecord, T_D_s: float, input_rate: float, eta_loss: float) -> float:
    """Background-subtracted conversion efficiency referred to the crystal output.

    Both raw rates are dead-time corrected first; ``(S - N) / (rate * eta_loss)``.
    Raises :class:`NonPhysicalError` when the corrected signal is below the
    noise, rather than returning a negative efficiency.
    """
    if not input_rate > 0:
        raise ValueError("input photon rate must be positive")
    if not 0.0 < eta_loss <= 1.0:
        raise ValueError("eta_loss must lie in (0, 1]")
    S = dead_time_correct(counts.s_raw_hz, T_D_s)
    N = dead_time_correct(counts.n_raw_hz, T_D_s)
    if S < N:
        raise NonPhysicalError(f"signal rate {S:g}/s below noise rate {N:g}/s")
    return (S - N) / (input_rate * eta_loss)


def snr(counts: CountRecord, T_D_s: float) -> float:
    """Corrected signal over corrected noise; ``math.inf`` for zero noise."""
    S = dead_time_correct(counts.s_raw_hz, T_D_s)
    N = dead_time_correct(counts.n_raw_hz, T_D_s)
    if N == 0:
        return math.inf
    return S / N


def mu1(n_per_pulse: float, SNR: float) -> float:
    """Input photons per pulse at which SNR would drop to one.

    Assumes signal counts scale linearly with the probe photon number.
    """
    if not SNR > 0:
        raise ValueError("SNR must be positive")
    return n_per_pulse / SNR


def bandwidth_nm_to_hz(delta_lambda_nm: float, center_lambda_nm: float) -> float:
    return SPEED_OF_LIGHT * delta_lambda_nm * 1e-9 / (center_lambda_nm * 1e-9) ** 2


def noise_rescale(noise_per_pulse, tau_old_s, tau_new_s, bw_old_hz, bw_new_hz) -> float:
    """Broadband noise projected to a new pulse duration and filter bandwidth (both linear)."""
    for v in (tau_old_s, tau_new_s, bw_old_hz, bw_new_hz):
        if not v > 0:
            raise ValueError("durations and bandwidths must be positive")
    return noise_per_pulse * (tau_new_s / tau_old_s) * (bw_new_hz / bw_old_hz)


_COUNT_COLUMNS = ("integration_s", "signal_counts", "noise_counts")


def read_count_series(path) -> CountRecord:
    """Pool a ``integration_s,signal_counts,noise_counts`` CSV into raw rates.

    Every row is one integration window; rates are total counts over total
    time.  The noise counts are assumed recorded over the same window length
    with the input blocked.
    """
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != _COUNT_COLUMNS:
            raise ValueError(f"{path}: expected header {','.join(_COUNT_COLUMNS)}, got {reader.fieldnames}")
        t = s = n = 0.0
        rows = 0
        for row in reader:
            dt = float(row["integration_s"])
            if not dt > 0:
                raise ValueError(f"{path}: integration time must be positive")
            t += dt
            s += float(row["signal_counts"])
            n += float(row["noise_counts"])
            rows += 1
    if rows == 0:
        raise ValueError(f"{path}: no count rows")
    return CountRecord(s / t, n / t)


def photon_budget(train: PulseTrain, chain: DetectionChain, counts: CountRecord, P_in_W: float, lambda_in_nm: float) -> dict:
    D = duty_cycle(train)
    rate = mean_input_photon_rate(P_in_W, D, lambda_in_nm)
    n = photons_per_pulse(rate, train.rep_rate_hz)
    eta_loss = chain_loss(chain)
    S = dead_time_correct(counts.s_raw_hz, chain.dead_time_s)
    N = dead_time_correct(counts.n_raw_hz, chain.dead_time_s)
    ratio = snr(counts, chain.dead_time_s)
    return {
        "D": D,
        "input_rate_hz": rate,
        "n_per_pulse": n,
        "eta_loss": eta_loss,
        "S": S,
        "N": N,
        "eta_ext": external_efficiency(counts, chain.dead_time_s, rate, eta_loss),
        "SNR": ratio,
        "mu1": mu1(n, ratio),
    }
