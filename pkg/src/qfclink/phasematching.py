"""Energy conservation and first-order quasi-phase-matching.

Sign convention: the mismatch is the wavevector of the highest-frequency
wave minus the two lower ones, minus the grating vector.  For SFG that is
``k_out - k_in - k_pump - 2 pi / Lambda``; for DFG the input photon is the
highest-frequency wave, giving ``k_in - k_pump - k_out - 2 pi / Lambda``.
Wavelengths are vacuum wavelengths in nm, poling periods in um and
mismatches in rad/m.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionModel, refractive_index

__all__ = [
    "Process",
    "ProcessSpec",
    "CrystalSpec",
    "PhaseMatchingError",
    "NoQPMError",
    "NoRootError",
    "MultipleRootsError",
    "TuningSlopes",
    "NullWidth",
    "energy_match",
    "bare_mismatch",
    "phase_mismatch",
    "qpm_period",
    "phasematched_input_wavelength",
    "tuning_slopes",
    "sinc2",
    "wavelength_grid",
    "phasematch_curve",
    "first_null_width",
]

ENERGY_RTOL = 1e-9
DEFAULT_SCAN = 200


class Process(str, enum.Enum):
    SFG = "SFG"
    DFG = "DFG"


class PhaseMatchingError(ValueError):
    pass


class NoQPMError(PhaseMatchingError):
    """Bare mismatch is not positive, so no first-order forward grating exists."""


class NoRootError(PhaseMatchingError):
    pass


class MultipleRootsError(PhaseMatchingError):
    def __init__(self, message, approx_roots):
        super().__init__(message)
        self.approx_roots = list(approx_roots)


def energy_match(kind, lambda_in_nm: float, lambda_pump_nm: float) -> float:
    """Output wavelength (nm) fixed by photon-energy conservation."""
    kind = Process(kind)
    if lambda_in_nm <= 0 or lambda_pump_nm <= 0:
        raise ValueError("wavelengths must be positive")
    if kind is Process.SFG:
        inv = 1.0 / lambda_in_nm + 1.0 / lambda_pump_nm
    else:
        inv = 1.0 / lambda_in_nm - 1.0 / lambda_pump_nm
        if inv <= 0:
            raise ValueError(
                f"DFG needs the input frequency above the pump: "
                f"{lambda_in_nm} nm input, {lambda_pump_nm} nm pump"
            )
    return 1.0 / inv


@dataclass(frozen=True)
class ProcessSpec:
    kind: Process
    lambda_in_nm: float
    lambda_pump_nm: float
    lambda_out_nm: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Process(self.kind))
        li, lp, lo = self.lambda_in_nm, self.lambda_pump_nm, self.lambda_out_nm
        if min(li, lp, lo) <= 0:
            raise ValueError("wavelengths must be positive")
        sign = 1.0 if self.kind is Process.SFG else -1.0
        lhs, rhs = 1.0 / lo, 1.0 / li + sign / lp
        if abs(lhs - rhs) > ENERGY_RTOL * abs(lhs):
            raise ValueError(f"{self.kind.value} triple {li}/{lp}/{lo} nm violates energy conservation")

    @classmethod
    def from_inputs(cls, kind, lambda_in_nm: float, lambda_pump_nm: float) -> "ProcessSpec":
        return cls(kind, lambda_in_nm, lambda_pump_nm, energy_match(kind, lambda_in_nm, lambda_pump_nm))

    @property
    def wavelengths_nm(self):
        return (self.lambda_in_nm, self.lambda_pump_nm, self.lambda_out_nm)


@dataclass(frozen=True)
class CrystalSpec:
    length_mm: float
    poling_period_um: float
    temperature_C: float
    model: DispersionModel
    allow_extrapolation: bool = False

    def __post_init__(self):
        if not self.length_mm > 0:
            raise ValueError("crystal length must be positive")
        if not self.poling_period_um > 0:
            raise ValueError("poling period must be positive")

    @property
    def length_m(self) -> float:
        return self.length_mm * 1e-3

    def at_temperature(self, T_C: float) -> "CrystalSpec":
        return CrystalSpec(self.length_mm, self.poling_period_um, T_C, self.model, self.allow_extrapolation)

    def with_length(self, length_mm: float) -> "CrystalSpec":
        return CrystalSpec(length_mm, self.poling_period_um, self.temperature_C, self.model, self.allow_extrapolation)


def _k(model, lambda_nm, T_C, extrapolate):
    n = refractive_index(model, lambda_nm * 1e-3, T_C, extrapolate=extrapolate)
    return 2.0 * math.pi * n / (lambda_nm * 1e-9)


def bare_mismatch(process: ProcessSpec, model: DispersionModel, T_C: float, extrapolate: bool = False) -> float:
    """Wavevector mismatch without the grating term, rad/m."""
    k_in = _k(model, process.lambda_in_nm, T_C, extrapolate)
    k_pump = _k(model, process.lambda_pump_nm, T_C, extrapolate)
    k_out = _k(model, process.lambda_out_nm, T_C, extrapolate)
    if process.kind is Process.SFG:
        return k_out - k_in - k_pump
    return k_in - k_pump - k_out


def phase_mismatch(process: ProcessSpec, crystal: CrystalSpec) -> float:
    """Effective mismatch including the first-order grating vector, rad/m."""
    dk = bare_mismatch(process, crystal.model, crystal.temperature_C, crystal.allow_extrapolation)
    return dk - 2.0 * math.pi / (crystal.poling_period_um * 1e-6)


def qpm_period(process: ProcessSpec, model: DispersionModel, T_C: float, extrapolate: bool = False) -> float:
    """First-order poling period (um) that zeroes the mismatch."""
    dk = bare_mismatch(process, model, T_C, extrapolate)
    if not dk > 0:
        raise NoQPMError(
            f"no first-order QPM for {process.kind.value} "
            f"{process.lambda_in_nm:g}/{process.lambda_pump_nm:g} nm at {T_C:g} C (bare mismatch {dk:.6g} rad/m)"
        )
    return 2.0 * math.pi / dk * 1e6


def _bisect(f, a, b, fa, tol):
    # f(a) and f(b) have opposite signs (or one is zero)
    if fa == 0.0:
        return a
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _mismatch_at(crystal, lambda_pump_nm, kind):
    def f(lambda_in_nm):
        return phase_mismatch(ProcessSpec.from_inputs(kind, lambda_in_nm, lambda_pump_nm), crystal)
    return f


def phasematched_input_wavelength(
    crystal: CrystalSpec,
    lambda_pump_nm: float,
    kind,
    bracket_nm: tuple[float, float],
    tol_nm: float = 1e-4,
    n_scan: int = DEFAULT_SCAN,
) -> float:
    """Input wavelength (nm) at which the effective mismatch vanishes.

    A coarse scan of ``n_scan`` points over ``bracket_nm`` locates sign
    changes; exactly one is required.  The bracketing cell is then bisected
    down to ``tol_nm``.
    """
    lo, hi = sorted(bracket_nm)
    f = _mismatch_at(crystal, lambda_pump_nm, kind)
    xs = np.linspace(lo, hi, max(int(n_scan), 2))
    vals = [f(float(x)) for x in xs]
    cells = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0 or (vals[i] > 0) != (vals[i + 1] > 0) and vals[i + 1] != 0.0:
            cells.append(i)
    if vals[-1] == 0.0:
        cells.append(len(xs) - 1)
    if not cells:
        raise NoRootError(f"mismatch does not change sign over [{lo:g}, {hi:g}] nm")
    if len(cells) > 1:
        approx = [float(xs[i]) for i in cells]
        raise MultipleRootsError(f"{len(cells)} phase-matching roots in [{lo:g}, {hi:g}] nm near {approx}", approx)
    i = cells[0]
    if i == len(xs) - 1:
        return float(xs[-1])
    return _bisect(f, float(xs[i]), float(xs[i + 1]), vals[i], tol_nm)


@dataclass(frozen=True)
class TuningSlopes:
    dlambda_in_dT: float
    dlambda_out_dT: float
    lambda_in_nm: float
    lambda_out_nm: float
    ratio_finite_difference: float
    ratio_analytic: float
    ratio_at_center: float


def tuning_slopes(
    crystal: CrystalSpec,
    lambda_pump_nm: float,
    kind,
    dT: float = 1.0,
    *,
    bracket_nm: tuple[float, float],
    tol_nm: float = 1e-8,
) -> TuningSlopes:
    """Temperature tuning of the phase-matched input and output wavelengths.

    Central differences over ``T +/- dT``; roots are solved to ``tol_nm``,
    much tighter than the single-root default, so the difference quotient
    is not dominated by bisection error.

    With the pump fixed, energy conservation makes the chord ratio
    ``dlambda_out / dlambda_in`` exactly ``lo+ lo- / (li+ li-)``, i.e.
    ``(lambda_out / lambda_in)**2`` at the geometric-mean point; that is
    ``ratio_analytic``.  ``ratio_at_center`` is the same expression at the
    centre-temperature root.
    """
    T = crystal.temperature_C
    root = lambda t: phasematched_input_wavelength(crystal.at_temperature(t), lambda_pump_nm, kind, bracket_nm, tol_nm)
    li_0, li_m, li_p = root(T), root(T - dT), root(T + dT)
    lo_0 = energy_match(kind, li_0, lambda_pump_nm)
    lo_m = energy_match(kind, li_m, lambda_pump_nm)
    lo_p = energy_match(kind, li_p, lambda_pump_nm)
    d_in = (li_p - li_m) / (2 * dT)
    d_out = (lo_p - lo_m) / (2 * dT)
    return TuningSlopes(
        dlambda_in_dT=d_in,
        dlambda_out_dT=d_out,
        lambda_in_nm=li_0,
        lambda_out_nm=lo_0,
        ratio_finite_difference=(lo_p - lo_m) / (li_p - li_m),
        ratio_analytic=(lo_p * lo_m) / (li_p * li_m),
        ratio_at_center=(lo_0 / li_0) ** 2,
    )


def sinc2(x):
    """``(sin x / x)**2`` with the removable singularity filled in."""
    return float(np.sinc(x / math.pi) ** 2)


def wavelength_grid(start_nm: float, stop_nm: float, step_nm: float) -> list[float]:
    if not step_nm > 0:
        raise ValueError("step must be positive")
    if stop_nm < start_nm:
        raise ValueError("stop must not precede start")
    count = int(math.floor((stop_nm - start_nm) / step_nm + 1e-9)) + 1
    return [start_nm + i * step_nm for i in range(count)]


def phasematch_curve(
    crystal: CrystalSpec,
    lambda_pump_nm: float,
    kind,
    start_nm: float,
    stop_nm: float,
    step_nm: float,
) -> list[tuple[float, float]]:
    """Plane-wave ``sinc^2(dk_eff L / 2)`` response versus input wavelength."""
    f = _mismatch_at(crystal, lambda_pump_nm, kind)
    half_L = crystal.length_m / 2.0
    return [(lam, sinc2(f(lam) * half_L)) for lam in wavelength_grid(start_nm, stop_nm, step_nm)]


@dataclass(frozen=True)
class NullWidth:
    lambda_center_nm: float
    lambda_low_nm: float
    lambda_high_nm: float
    width_nm: float
    width_rad_per_m: float  # full width in mismatch coordinates, 4 pi / L


def _outward_root(g, x0, direction, tol, step0=1e-3, max_doublings=40):
    step = step0
    a = x0
    for _ in range(max_doublings):
        b = x0 + direction * step
        gb = g(b)
        if gb >= 0:
            lo, hi = sorted((a, b))
            return _bisect(g, lo, hi, g(lo), tol)
        a, step = b, step * 2
    raise NoRootError("first null not found within search range")


def first_null_width(
    crystal: CrystalSpec,
    lambda_pump_nm: float,
    kind,
    bracket_nm: tuple[float, float],
    tol_nm: float = 1e-10,
) -> NullWidth:
    """Full width between the first zeros of the sinc^2 curve, ``|dk_eff| L / 2 = pi``."""
    center = phasematched_input_wavelength(crystal, lambda_pump_nm, kind, bracket_nm, tol_nm=tol_nm)
    f = _mismatch_at(crystal, lambda_pump_nm, kind)
    half_L = crystal.length_m / 2.0
    g = lambda lam: abs(f(lam)) * half_L - math.pi
    low = _outward_root(g, center, -1.0, tol_nm)
    high = _outward_root(g, center, +1.0, tol_nm)
    return NullWidth(center, low, high, high - low, 4.0 * math.pi / crystal.length_m)
