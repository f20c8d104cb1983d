"""Two-photon fiber link budgets with and without the conversion interface.

Topologies (node separation ``L``, partner photon taken as lossless):

* ``A`` one photon down-converted, sent the full ``L`` at 1550 nm, up-converted:
  ``eta_down * T_ir(L) * eta_up``
* ``B`` both photons down-converted and sent ``L/2`` to a symmetric midpoint:
  ``eta_down^2 * T_ir(L/2)^2``
* ``C`` no interface, violet photon sent the full ``L``: ``T_blue(L)``

Everything is evaluated as log10 probabilities, since case C reaches 1e-50
at 10 km and beyond double precision further out.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

__all__ = [
    "DEFAULT_LINK",
    "Topology",
    "LinkScenario",
    "SweepRow",
    "fiber_log10_transmission",
    "fiber_transmission",
    "scenario_log10_success",
    "scenario_success",
    "improvement_orders",
    "crossover_distance",
    "scenario_sweep",
    "format_pow10",
]

# Upper bounds on attenuation: SM400 at 422 nm, SMF-28 at 1550 nm.
DEFAULT_LINK = {
    "alpha_blue_db_per_km": 50.0,
    "alpha_ir_db_per_km": 0.18,
    "eta_down": 0.011,
    "eta_up": 0.094,
}


class Topology(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class LinkScenario:
    topology: Topology
    distance_km: float
    alpha_blue_db_per_km: float = DEFAULT_LINK["alpha_blue_db_per_km"]
    alpha_ir_db_per_km: float = DEFAULT_LINK["alpha_ir_db_per_km"]
    eta_down: float = DEFAULT_LINK["eta_down"]
    eta_up: float = DEFAULT_LINK["eta_up"]

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        if not self.distance_km >= 0:
            raise ValueError("distance must be non-negative")
        if not (self.alpha_blue_db_per_km >= 0 and self.alpha_ir_db_per_km >= 0):
            raise ValueError("attenuation must be non-negative")
        if not (0.0 <= self.eta_down <= 1.0 and 0.0 <= self.eta_up <= 1.0):
            raise ValueError("conversion efficiencies must lie in [0, 1]")

    def with_(self, **changes) -> "LinkScenario":
        return replace(self, **changes)


def _log10(x: float) -> float:
    return -math.inf if x == 0 else math.log10(x)


def fiber_log10_transmission(alpha_db_per_km: float, length_km: float) -> float:
    if alpha_db_per_km < 0 or length_km < 0:
        raise ValueError("attenuation and length must be non-negative")
    return 0.0 - alpha_db_per_km * length_km / 10.0


def fiber_transmission(alpha_db_per_km: float, length_km: float) -> float:
    return 10.0 ** fiber_log10_transmission(alpha_db_per_km, length_km)


def scenario_log10_success(s: LinkScenario) -> float:
    L = s.distance_km
    if s.topology is Topology.A:
        return _log10(s.eta_down) + fiber_log10_transmission(s.alpha_ir_db_per_km, L) + _log10(s.eta_up)
    if s.topology is Topology.B:
        return 2.0 * (_log10(s.eta_down) + fiber_log10_transmission(s.alpha_ir_db_per_km, L / 2.0))
    return fiber_log10_transmission(s.alpha_blue_db_per_km, L)


def scenario_success(s: LinkScenario) -> float:
    """Linear-domain probability; underflows to 0.0 below ~1e-308."""
    return min(1.0, 10.0 ** scenario_log10_success(s))


def improvement_orders(a: LinkScenario, c: LinkScenario) -> float:
    """``log10(P_a / P_c)``."""
    return scenario_log10_success(a) - scenario_log10_success(c)


def crossover_distance(template: LinkScenario) -> float:
    """Distance (km) beyond which case A beats case C."""
    d_alpha = template.alpha_blue_db_per_km - template.alpha_ir_db_per_km
    if not d_alpha > 0:
        raise ValueError("no crossover: violet attenuation does not exceed telecom attenuation")
    conv = _log10(template.eta_down) + _log10(template.eta_up)
    return 10.0 * -conv / d_alpha


@dataclass(frozen=True)
class SweepRow:
    distance_km: float
    log10_p_case_a: float
    log10_p_case_b: float
    log10_p_case_c: float


def scenario_sweep(template: LinkScenario, distances) -> list[SweepRow]:
    rows = []
    for d in distances:
        logs = [scenario_log10_success(template.with_(topology=t, distance_km=float(d))) for t in Topology]
        rows.append(SweepRow(float(d), *logs))
    return rows


def format_pow10(log10_value: float, digits: int = 9) -> str:
    """Render ``10**log10_value`` in scientific notation without underflow."""
    if log10_value == -math.inf:
        return "0"
    if log10_value >= 0:
        return f"{1.0:.{digits}e}"  # clamp to probability 1
    exponent = math.floor(log10_value)
    mantissa = 10.0 ** (log10_value - exponent)
    text = f"{mantissa:.{digits}f}"
    if text.startswith("10"):
        exponent += 1
        text = f"{1.0:.{digits}f}"
    return f"{text}e{exponent:+03d}"
