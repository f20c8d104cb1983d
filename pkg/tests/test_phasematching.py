import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfclink.dispersion import ValidityError, refractive_index
from qfclink.phasematching import (
    CrystalSpec,
    MultipleRootsError,
    NoQPMError,
    NoRootError,
    ProcessSpec,
    energy_match,
    first_null_width,
    phase_mismatch,
    phasematch_curve,
    phasematched_input_wavelength,
    qpm_period,
    sinc2,
    tuning_slopes,
    wavelength_grid,
)

from conftest import OP_IN_NM, OP_LENGTH_MM, OP_PUMP_NM, OP_T_C
from oracles import k_from_index, scan_first_nulls

# mpmath composition of k-values from the decimal coefficients
DK_EFF_AT_4_15_UM = 160239.54817735999844


@pytest.mark.parametrize(
    "kind, lam_in, lam_pump, expected",
    [("SFG", 1547.6, 579.6, 421.68), ("DFG", 425.5, 585.0, 1560.6)],
)
def test_energy_match_operating_point(kind, lam_in, lam_pump, expected):
    assert energy_match(kind, lam_in, lam_pump) == pytest.approx(expected, abs=0.05)


@given(lam=st.floats(200.0, 5000.0))
def test_energy_match_degenerate_sfg(lam):
    assert energy_match("SFG", lam, lam) == pytest.approx(lam / 2, rel=1e-15)


def test_dfg_requires_higher_input_frequency():
    with pytest.raises(ValueError, match="DFG"):
        energy_match("DFG", 600.0, 585.0)
    with pytest.raises(ValueError):
        energy_match("DFG", 585.0, 585.0)


def test_process_spec_rejects_inconsistent_triple():
    with pytest.raises(ValueError, match="energy conservation"):
        ProcessSpec("SFG", 1547.6, 579.6, 421.7)
    with pytest.raises(ValueError):
        ProcessSpec.from_inputs("SFG", -1.0, 579.6)


@given(lam_in=st.floats(300.0, 3000.0), lam_pump=st.floats(300.0, 3000.0))
def test_process_spec_invariant(lam_in, lam_pump):
    p = ProcessSpec.from_inputs("SFG", lam_in, lam_pump)
    assert 1 / p.lambda_out_nm == pytest.approx(1 / lam_in + 1 / lam_pump, rel=1e-9)


def test_crystal_invariants(shipped):
    with pytest.raises(ValueError):
        CrystalSpec(0.0, 3.75, 160.0, shipped)
    with pytest.raises(ValueError):
        CrystalSpec(10.0, -1.0, 160.0, shipped)


@pytest.mark.parametrize("period", [1.0, 3.75, 20.0])
def test_constant_index_mismatch_is_grating_only(constant, period):
    lam = 1000.0
    p = ProcessSpec("SFG", lam, lam, lam / 2)
    crystal = CrystalSpec(10.0, period, 25.0, constant)
    expected = -2 * math.pi / (period * 1e-6)
    assert phase_mismatch(p, crystal) == pytest.approx(expected, rel=1e-12)


def test_qpm_period_operating_point(shipped, sfg_process):
    period = qpm_period(sfg_process, shipped, OP_T_C, extrapolate=True)
    assert period == pytest.approx(3.75, abs=0.5)


def test_qpm_period_needs_extrapolation_for_violet(shipped, sfg_process):
    with pytest.raises(ValidityError):
        qpm_period(sfg_process, shipped, OP_T_C)


def test_qpm_period_dfg_reaches_same_grating(shipped):
    p = ProcessSpec.from_inputs("DFG", 425.5, 585.0)
    assert qpm_period(p, shipped, 226.4, extrapolate=True) == pytest.approx(3.75, abs=0.5)


def test_qpm_period_constant_index(constant, sfg_process):
    with pytest.raises(NoQPMError):
        qpm_period(sfg_process, constant, 25.0)


def test_round_trip(sfg_process, sfg_crystal):
    assert abs(phase_mismatch(sfg_process, sfg_crystal)) < 1e-6


@settings(max_examples=30, deadline=None)
@given(lam_in=st.floats(1450.0, 1650.0), lam_pump=st.floats(560.0, 620.0), T=st.floats(30.0, 200.0))
def test_round_trip_property(shipped, lam_in, lam_pump, T):
    p = ProcessSpec.from_inputs("SFG", lam_in, lam_pump)
    period = qpm_period(p, shipped, T, extrapolate=True)
    crystal = CrystalSpec(OP_LENGTH_MM, period, T, shipped, allow_extrapolation=True)
    assert abs(phase_mismatch(p, crystal)) < 1e-6


def test_mismatch_matches_hand_composition(shipped, sfg_process):
    crystal = CrystalSpec(OP_LENGTH_MM, 4.15, OP_T_C, shipped, allow_extrapolation=True)
    got = phase_mismatch(sfg_process, crystal)
    assert got == pytest.approx(DK_EFF_AT_4_15_UM, rel=1e-9)
    # and against k-values built from this package's index outputs
    ks = [k_from_index(refractive_index(shipped, lam * 1e-3, OP_T_C, extrapolate=True), lam)
          for lam in sfg_process.wavelengths_nm]
    k_in, k_pump, k_out = ks
    assert got == pytest.approx(k_out - k_in - k_pump - 2 * np.pi / 4.15e-6, rel=1e-12)


def test_phasematched_wavelength_inverse(sfg_crystal):
    lam = phasematched_input_wavelength(sfg_crystal, OP_PUMP_NM, "SFG", (1500.0, 1600.0))
    assert lam == pytest.approx(OP_IN_NM, abs=0.1)
    assert lam == pytest.approx(OP_IN_NM, abs=1e-4)


def test_phasematched_wavelength_tracks_temperature(sfg_crystal):
    r0 = phasematched_input_wavelength(sfg_crystal, OP_PUMP_NM, "SFG", (1500.0, 1600.0))
    r1 = phasematched_input_wavelength(sfg_crystal.at_temperature(161.0), OP_PUMP_NM, "SFG", (1500.0, 1600.0))
    assert r1 - r0 == pytest.approx(0.4, rel=0.5)


def test_phasematched_no_sign_change(sfg_crystal):
    with pytest.raises(NoRootError):
        phasematched_input_wavelength(sfg_crystal, OP_PUMP_NM, "SFG", (400.0, 450.0))


def test_phasematched_multiple_roots(constant, monkeypatch):
    from qfclink import phasematching as pm

    # two sign changes in the bracket
    monkeypatch.setattr(pm, "_mismatch_at", lambda crystal, pump, kind: lambda lam: (lam - 1510.0) * (lam - 1590.0))
    crystal = CrystalSpec(10.0, 3.75, 25.0, constant)
    with pytest.raises(MultipleRootsError) as info:
        phasematched_input_wavelength(crystal, 579.6, "SFG", (1500.0, 1600.0))
    assert len(info.value.approx_roots) == 2


def test_tuning_slopes_operating_point(sfg_crystal):
    s = tuning_slopes(sfg_crystal, OP_PUMP_NM, "SFG", 1.0, bracket_nm=(1500.0, 1600.0))
    assert s.dlambda_in_dT == pytest.approx(0.4, rel=0.5)
    assert s.dlambda_out_dT == pytest.approx(0.0297, rel=0.5)
    assert s.ratio_finite_difference == pytest.approx(s.ratio_analytic, rel=1e-6)
    assert s.dlambda_out_dT / s.dlambda_in_dT == pytest.approx(s.ratio_finite_difference, rel=1e-12)


def test_tuning_slopes_constant_index(constant):
    crystal = CrystalSpec(OP_LENGTH_MM, 3.75, 100.0, constant)
    with pytest.raises(NoRootError):
        tuning_slopes(crystal, OP_PUMP_NM, "SFG", bracket_nm=(1500.0, 1600.0))


@given(
    lam_in=st.floats(400.0, 3000.0),
    lam_pump=st.floats(400.0, 3000.0),
    h=st.floats(0.01, 2.0),
    kind=st.sampled_from(["SFG", "DFG"]),
)
def test_slope_ratio_identity(lam_in, lam_pump, h, kind):
    # chord of lambda_out(lambda_in) at fixed pump, pure energy conservation
    if kind == "DFG" and lam_in + h >= lam_pump * 0.95:
        return
    a, b = lam_in - h / 2, lam_in + h / 2
    oa, ob = energy_match(kind, a, lam_pump), energy_match(kind, b, lam_pump)
    chord = (ob - oa) / (b - a)
    assert chord == pytest.approx((oa * ob) / (a * b), rel=1e-6)
    if kind == "SFG":
        assert chord == pytest.approx((energy_match(kind, lam_in, lam_pump) / lam_in) ** 2, rel=1e-4)


def test_sinc2_values():
    assert sinc2(0.0) == 1.0
    assert sinc2(math.pi) == pytest.approx(0.0, abs=1e-30)
    assert sinc2(1.3) == pytest.approx((math.sin(1.3) / 1.3) ** 2, rel=1e-14)


@given(x=st.floats(-50, 50))
def test_sinc2_even_and_bounded(x):
    assert 0.0 <= sinc2(x) <= 1.0
    assert sinc2(x) == sinc2(-x)


def test_wavelength_grid_count():
    assert len(wavelength_grid(1546.6, 1548.6, 0.01)) == 201
    assert len(wavelength_grid(0.0, 1.0, 0.3)) == 4
    assert wavelength_grid(5.0, 5.0, 1.0) == [5.0]


def test_curve_peak_and_zero(sfg_crystal):
    f = lambda lam: phase_mismatch(ProcessSpec.from_inputs("SFG", lam, OP_PUMP_NM), sfg_crystal)
    rows = phasematch_curve(sfg_crystal, OP_PUMP_NM, "SFG", OP_IN_NM, OP_IN_NM, 1.0)
    assert rows[0][1] == pytest.approx(1.0, abs=1e-12)
    w = first_null_width(sfg_crystal, OP_PUMP_NM, "SFG", (1500.0, 1600.0))
    for edge in (w.lambda_low_nm, w.lambda_high_nm):
        assert abs(f(edge)) * sfg_crystal.length_m / 2 == pytest.approx(math.pi, rel=1e-9)
        (_, value), = phasematch_curve(sfg_crystal, OP_PUMP_NM, "SFG", edge, edge, 1.0)
        assert value == pytest.approx(0.0, abs=1e-12)


def test_curve_values_in_unit_interval(sfg_crystal):
    rows = phasematch_curve(sfg_crystal, OP_PUMP_NM, "SFG", 1540.0, 1555.0, 0.05)
    assert all(0.0 <= v <= 1.0 for _, v in rows)
    assert max(v for _, v in rows) > 0.99


def test_first_null_width_against_scan(shipped, sfg_crystal):
    w = first_null_width(sfg_crystal, OP_PUMP_NM, "SFG", (1500.0, 1600.0))

    def mismatch(lam):
        lo = 1.0 / (1.0 / lam + 1.0 / OP_PUMP_NM)
        n = [refractive_index(shipped, x * 1e-3, OP_T_C, extrapolate=True) for x in (lam, OP_PUMP_NM, lo)]
        k_in, k_p, k_o = (k_from_index(ni, x) for ni, x in zip(n, (lam, OP_PUMP_NM, lo)))
        return k_o - k_in - k_p - 2 * np.pi / (sfg_crystal.poling_period_um * 1e-6)

    left, right = scan_first_nulls(mismatch, w.lambda_center_nm, 0.5, 1e-4, sfg_crystal.length_m)
    assert right - left == pytest.approx(w.width_nm, rel=1e-6)
    assert left == pytest.approx(w.lambda_low_nm, abs=1e-6)


def test_width_scales_inversely_with_length(sfg_crystal):
    w1 = first_null_width(sfg_crystal, OP_PUMP_NM, "SFG", (1500.0, 1600.0))
    w2 = first_null_width(sfg_crystal.with_length(2 * OP_LENGTH_MM), OP_PUMP_NM, "SFG", (1500.0, 1600.0))
    assert w2.width_rad_per_m / w1.width_rad_per_m == pytest.approx(0.5, rel=1e-9)
    # on the wavelength axis dispersion curvature breaks exact 1/L at the 1e-7 level
    assert w2.width_nm / w1.width_nm == pytest.approx(0.5, rel=1e-6)
