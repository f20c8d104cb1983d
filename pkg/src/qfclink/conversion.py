"""Conversion efficiency versus pump power.

The coupled-mode solution of the beam-splitter Hamiltonian gives a
``sin^2`` transfer.  Coupling strength and pump amplitude are lumped into
one phenomenological normalized efficiency ``eta_nor`` in 1/(W m^2)::

    eta(P) = eta_max * overlap * sin^2(L * sqrt(eta_nor * P))

which for small arguments is ``eta_max * overlap * eta_nor * L^2 * P``.
Pump heating and photorefractive drift are not modelled; long or high-power
runs will fall below this curve.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "BeamGeometry",
    "ConversionModel",
    "FitResult",
    "FitError",
    "beam_overlap_fraction",
    "efficiency_vs_power",
    "golden_section_minimize",
    "fit_normalized_efficiency",
    "read_efficiency_points",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class BeamGeometry:
    waist_pump_um: float
    waist_input_um: float

    def __post_init__(self):
        if not (self.waist_pump_um > 0 and self.waist_input_um > 0):
            raise ValueError("beam waists must be positive")


@dataclass(frozen=True)
class ConversionModel:
    eta_nor: float
    length_m: float
    eta_max: float = 1.0
    overlap: float = 1.0

    def __post_init__(self):
        if not self.eta_nor >= 0:
            raise ValueError("eta_nor must be non-negative")
        if not self.length_m > 0:
            raise ValueError("length must be positive")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError("overlap must lie in [0, 1]")
        if not 0.0 < self.eta_max <= 1.0:
            raise ValueError("eta_max must lie in (0, 1]")

    @property
    def ceiling(self) -> float:
        return self.eta_max * self.overlap

    def first_peak_power_W(self) -> float:
        """Pump power of full conversion, ``L sqrt(eta_nor P) = pi/2``."""
        if self.eta_nor == 0:
            return math.inf
        return (math.pi / (2.0 * self.length_m)) ** 2 / self.eta_nor


def beam_overlap_fraction(geometry: BeamGeometry) -> float:
    """Fraction of the input beam area covered by the pump, ``min(1, (w_pump/w_in)^2)``."""
    return min(1.0, (geometry.waist_pump_um / geometry.waist_input_um) ** 2)


def efficiency_vs_power(model: ConversionModel, P_pump_W: float) -> float:
    if P_pump_W < 0:
        raise ValueError("pump power must be non-negative")
    return model.ceiling * math.sin(model.length_m * math.sqrt(model.eta_nor * P_pump_W)) ** 2


def golden_section_minimize(f, a: float, b: float, xtol: float = 0.0, maxiter: int = 200):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    Stops when the bracket no longer shrinks in floating point, when it is
    narrower than ``xtol``, or after ``maxiter`` iterations.
    """
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            if not a < c < d:
                break
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            if not c < d < b:
                break
            fd = f(d)
    x = c if fc <= fd else d
    return x, min(fc, fd)


@dataclass(frozen=True)
class FitResult:
    model: ConversionModel
    residual: float  # sqrt(sum of squared residuals)
    points_used: int

    def as_dict(self) -> dict:
        return {
            "eta_nor": self.model.eta_nor,
            "residual": self.residual,
            "points_used": self.points_used,
        }


def fit_normalized_efficiency(points, length_m: float, overlap: float = 1.0, eta_max: float = 1.0) -> FitResult:
    """Least-squares fit of ``eta_nor`` to measured ``(P_pump_W, eta_ext)`` pairs.

    Golden-section search over ``[0, pi^2 / (4 L^2 P_max)]``: at the upper
    end the highest-power point just reaches its first conversion maximum,
    so every point stays on the rising branch of ``sin^2`` and the residual
    has no spurious minima from later fringes.
    """
    pts = [(float(p), float(e)) for p, e in points]
    ceiling = eta_max * overlap
    if not pts:
        raise FitError("no points to fit")
    for p, e in pts:
        if p < 0 or not math.isfinite(p):
            raise FitError(f"invalid pump power {p!r}")
        if not 0.0 <= e < ceiling:
            raise FitError(f"efficiency {e!r} outside [0, eta_max*overlap = {ceiling!r})")
    positive = [p for p, _ in pts if p > 0]
    if not positive:
        raise FitError("need at least one point with positive pump power")
    hi = math.pi ** 2 / (4.0 * length_m ** 2 * max(positive))

    def sse(eta_nor):
        m = ConversionModel(eta_nor, length_m, eta_max, overlap)
        return sum((efficiency_vs_power(m, p) - e) ** 2 for p, e in pts)

    x, f = golden_section_minimize(sse, 0.0, hi)
    return FitResult(ConversionModel(x, length_m, eta_max, overlap), math.sqrt(f), len(pts))


def read_efficiency_points(path) -> list[tuple[float, float]]:
    """Read a ``P_pump_W,eta_ext`` CSV."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"P_pump_W", "eta_ext"}:
            raise FitError(f"{path}: expected header P_pump_W,eta_ext, got {reader.fieldnames}")
        return [(float(row["P_pump_W"]), float(row["eta_ext"])) for row in reader]
