"""Print the headline numbers of the SFG/DFG interface and the link budget."""
import argparse

from qfclink.conversion import BeamGeometry, beam_overlap_fraction, efficiency_vs_power, fit_normalized_efficiency
from qfclink.dispersion import load_shipped_model
from qfclink.netlink import LinkScenario, crossover_distance, improvement_orders
from qfclink.phasematching import (
    CrystalSpec,
    Process,
    ProcessSpec,
    energy_match,
    first_null_width,
    qpm_period,
    tuning_slopes,
)
from qfclink.photonstats import bandwidth_nm_to_hz, mu1, noise_rescale


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--temperature-c", type=float, default=160.0)
    parser.add_argument("--length-mm", type=float, default=19.97)
    args = parser.parse_args()

    model = load_shipped_model()
    sfg = ProcessSpec.from_inputs(Process.SFG, 1547.6, 579.6)
    dfg = ProcessSpec.from_inputs(Process.DFG, 425.5, 585.0)
    period = qpm_period(sfg, model, args.temperature_c, extrapolate=True)
    crystal = CrystalSpec(args.length_mm, period, args.temperature_c, model, allow_extrapolation=True)
    slopes = tuning_slopes(crystal, 579.6, Process.SFG, 1.0, bracket_nm=(1500.0, 1600.0))
    width = first_null_width(crystal, 579.6, Process.SFG, (1500.0, 1600.0))
    overlap = beam_overlap_fraction(BeamGeometry(43.2, 63.3))
    fit = fit_normalized_efficiency([(0.180, 0.094)], args.length_mm * 1e-3, overlap)
    bw = bandwidth_nm_to_hz(8.9, 1570.0)

    rows = [
        ("SFG output wavelength (nm)", energy_match(Process.SFG, 1547.6, 579.6)),
        ("DFG output wavelength (nm)", energy_match(Process.DFG, 425.5, 585.0)),
        ("SFG poling period (um)", period),
        ("DFG poling period at 226.4 C (um)", qpm_period(dfg, model, 226.4, extrapolate=True)),
        ("d(lambda_in)/dT (nm/K)", slopes.dlambda_in_dT),
        ("d(lambda_out)/dT (nm/K)", slopes.dlambda_out_dT),
        ("slope ratio", slopes.ratio_finite_difference),
        ("first-null full width (nm)", width.width_nm),
        ("overlap SFG / DFG", f"{overlap:.4f} / {beam_overlap_fraction(BeamGeometry(43.2, 112.0)):.4f}"),
        ("fitted eta_nor (1/(W m^2))", fit.model.eta_nor),
        ("eta_ext at 120 mW", efficiency_vs_power(fit.model, 0.120)),
        ("mu1 at SNR 39.4 / 108", f"{mu1(2.0, 39.4):.5f} / {mu1(2.0, 108.0):.5f}"),
        ("projected noise per 1 us pulse", noise_rescale(3.9e-6, 300e-12, 1e-6, bw, 200e6)),
        ("improvement at 10 km (orders)", improvement_orders(LinkScenario("A", 10.0), LinkScenario("C", 10.0))),
        ("crossover distance (km)", crossover_distance(LinkScenario("A", 0.0))),
    ]
    width_col = max(len(name) for name, _ in rows)
    for name, value in rows:
        text = f"{value:.6g}" if isinstance(value, float) else value
        print(f"{name:<{width_col}}  {text}")


if __name__ == "__main__":
    main()
