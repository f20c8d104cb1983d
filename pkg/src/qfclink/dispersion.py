"""Temperature-dependent refractive indices of poled nonlinear crystals.

Coefficient sets live in JSON files with the keys

    name                    free-text identifier
    form                    one of FORMS (see below)
    coefficients            list of numbers, length fixed by ``form``
    validity_wavelength_um  [min, max] vacuum wavelength in micrometres
    validity_temperature_C  [min, max] crystal temperature in Celsius
    axis                    polarization axis label, e.g. "extraordinary"

No other keys are accepted.

Supported forms
---------------
``sellmeier_thermal`` (10 coefficients ``a1..a6, b1..b4``)::

    f   = (T - 24.5) * (T + 570.82)
    n^2 = a1 + b1 f + (a2 + b2 f) / (lam^2 - (a3 + b3 f)^2)
              + (a4 + b4 f) / (lam^2 - a5^2) - a6 lam^2

``sellmeier3`` (6 coefficients ``B1, B2, B3, C1, C2, C3``, no temperature
dependence, ``C`` in um^2)::

    n^2 = 1 + sum_i B_i lam^2 / (lam^2 - C_i)
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "DispersionModel",
    "DispersionError",
    "ValidityError",
    "FORMS",
    "MODEL_DIR_ENV",
    "SHIPPED_MODEL",
    "load_model",
    "load_shipped_model",
    "resolve_model_path",
    "refractive_index",
]

MODEL_DIR_ENV = "QFCLINK_MODEL_DIR"
SHIPPED_MODEL = "mgo_cln_gayer2008_e.json"

_REQUIRED_KEYS = {
    "name",
    "form",
    "coefficients",
    "validity_wavelength_um",
    "validity_temperature_C",
    "axis",
}


class DispersionError(ValueError):
    """Malformed coefficient file or model definition."""


class ValidityError(ValueError):
    """Evaluation requested outside a model's validity box."""


def _n2_sellmeier_thermal(c, lam, T):
    a1, a2, a3, a4, a5, a6, b1, b2, b3, b4 = c
    f = (T - 24.5) * (T + 570.82)
    lam2 = lam * lam
    return (
        a1
        + b1 * f
        + (a2 + b2 * f) / (lam2 - (a3 + b3 * f) ** 2)
        + (a4 + b4 * f) / (lam2 - a5 * a5)
        - a6 * lam2
    )


def _n2_sellmeier3(c, lam, T):
    B1, B2, B3, C1, C2, C3 = c
    lam2 = lam * lam
    return 1.0 + B1 * lam2 / (lam2 - C1) + B2 * lam2 / (lam2 - C2) + B3 * lam2 / (lam2 - C3)


# form name -> (arity, n^2 evaluator)
FORMS = {
    "sellmeier_thermal": (10, _n2_sellmeier_thermal),
    "sellmeier3": (6, _n2_sellmeier3),
}


def _interval(value, key):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise DispersionError(f"{key} must be a [min, max] pair, got {value!r}")
    lo, hi = value
    for v in (lo, hi):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise DispersionError(f"{key} bounds must be finite numbers, got {value!r}")
    if not lo < hi:
        raise DispersionError(f"{key} is empty or inverted: {value!r}")
    return (float(lo), float(hi))


@dataclass(frozen=True)
class DispersionModel:
    """A named refractive-index model together with its validity box."""

    name: str
    form: str
    coefficients: tuple[float, ...]
    validity_wavelength_um: tuple[float, float]
    validity_temperature_C: tuple[float, float]
    axis: str = "extraordinary"

    def __post_init__(self):
        if self.form not in FORMS:
            raise DispersionError(f"unknown form {self.form!r}; expected one of {sorted(FORMS)}")
        arity = FORMS[self.form][0]
        coeffs = tuple(self.coefficients)
        if len(coeffs) != arity:
            raise DispersionError(
                f"form {self.form!r} takes {arity} coefficients, got {len(coeffs)}"
            )
        for v in coeffs:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DispersionError(f"coefficients must be finite numbers, got {v!r}")
        object.__setattr__(self, "coefficients", tuple(float(v) for v in coeffs))
        object.__setattr__(
            self,
            "validity_wavelength_um",
            _interval(self.validity_wavelength_um, "validity_wavelength_um"),
        )
        object.__setattr__(
            self,
            "validity_temperature_C",
            _interval(self.validity_temperature_C, "validity_temperature_C"),
        )

    def contains(self, lambda_um, T_C) -> bool:
        """True if every (wavelength, temperature) pair lies inside the validity box."""
        lam = np.asarray(lambda_um, dtype=float)
        T = np.asarray(T_C, dtype=float)
        (l0, l1), (t0, t1) = self.validity_wavelength_um, self.validity_temperature_C
        return bool(np.all((lam >= l0) & (lam <= l1)) and np.all((T >= t0) & (T <= t1)))

    @classmethod
    def from_dict(cls, data: dict) -> "DispersionModel":
        if not isinstance(data, dict):
            raise DispersionError("coefficient file must contain a JSON object")
        missing = _REQUIRED_KEYS - data.keys()
        extra = data.keys() - _REQUIRED_KEYS
        if missing:
            raise DispersionError(f"missing keys: {sorted(missing)}")
        if extra:
            raise DispersionError(f"unknown keys: {sorted(extra)}")
        for key in ("name", "form", "axis"):
            if not isinstance(data[key], str) or not data[key]:
                raise DispersionError(f"{key} must be a non-empty string")
        if not isinstance(data["coefficients"], list):
            raise DispersionError("coefficients must be a list")
        return cls(
            name=data["name"],
            form=data["form"],
            coefficients=tuple(data["coefficients"]),
            validity_wavelength_um=data["validity_wavelength_um"],
            validity_temperature_C=data["validity_temperature_C"],
            axis=data["axis"],
        )


def load_model(path) -> DispersionModel:
    """Read and validate a coefficient file.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    DispersionError
        On JSON syntax errors, schema violations, arity mismatch or an
        empty validity interval.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DispersionError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return DispersionModel.from_dict(data)
    except DispersionError as exc:
        raise DispersionError(f"{path}: {exc}") from exc


def load_shipped_model(name: str = SHIPPED_MODEL) -> DispersionModel:
    ref = resources.files("qfclink") / "data" / name
    with resources.as_file(ref) as p:
        return load_model(p)


def resolve_model_path(name, base_dir=None) -> Path:
    """Locate a coefficient file.

    Search order: as given (absolute, or relative to ``base_dir``), then the
    directory named by ``$QFCLINK_MODEL_DIR``, then the shipped data folder.
    """
    p = Path(name)
    candidates = [p] if p.is_absolute() else [Path(base_dir or ".") / p]
    if not p.is_absolute():
        env_dir = os.environ.get(MODEL_DIR_ENV)
        if env_dir:
            candidates.append(Path(env_dir) / p)
        candidates.append(Path(str(resources.files("qfclink") / "data")) / p)
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"coefficient file {name!s} not found (tried {', '.join(map(str, candidates))})")


def refractive_index(model: DispersionModel, lambda_um, T_C, extrapolate: bool = False):
    """Refractive index ``n(lambda, T)``.

    Parameters
    ----------
    model : DispersionModel
    lambda_um : float or array_like
        Vacuum wavelength in micrometres.
    T_C : float or array_like
        Crystal temperature in Celsius.
    extrapolate : bool
        Permit evaluation outside the model's validity box.

    Returns
    -------
    float or ndarray
        A Python float for scalar input, otherwise an array broadcast from
        the inputs.
    """
    if not extrapolate and not model.contains(lambda_um, T_C):
        raise ValidityError(
            f"({lambda_um!r} um, {T_C!r} C) outside validity box of {model.name!r}: "
            f"{model.validity_wavelength_um} um x {model.validity_temperature_C} C"
        )
    n2_fn = FORMS[model.form][1]
    if np.ndim(lambda_um) == 0 and np.ndim(T_C) == 0:
        n2 = n2_fn(model.coefficients, float(lambda_um), float(T_C))
        if not n2 > 0.0:
            raise ValidityError(f"n^2 = {n2!r} <= 0 at {lambda_um} um, {T_C} C")
        return math.sqrt(n2)
    n2 = n2_fn(model.coefficients, np.asarray(lambda_um, dtype=float), np.asarray(T_C, dtype=float))
    if np.any(~(n2 > 0.0)):
        raise ValidityError(f"n^2 <= 0 somewhere in the requested grid of {model.name!r}")
    return np.sqrt(n2)
