"""Phase-matched input and output wavelengths versus crystal temperature, as CSV."""
import argparse
import csv
import sys

import numpy as np

from qfclink.dispersion import load_model, load_shipped_model
from qfclink.phasematching import CrystalSpec, Process, ProcessSpec, energy_match, phasematched_input_wavelength, qpm_period


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", choices=["SFG", "DFG"], default="SFG")
    parser.add_argument("--lambda-in-nm", type=float, default=1547.6)
    parser.add_argument("--lambda-pump-nm", type=float, default=579.6)
    parser.add_argument("--design-temperature-c", type=float, default=160.0)
    parser.add_argument("--t-range", type=float, nargs=3, default=(140.0, 180.0, 2.0), metavar=("START", "STOP", "STEP"))
    parser.add_argument("--half-bracket-nm", type=float, default=50.0)
    parser.add_argument("--length-mm", type=float, default=19.97)
    parser.add_argument("--model", help="coefficient file; defaults to the shipped model")
    args = parser.parse_args()

    model = load_model(args.model) if args.model else load_shipped_model()
    kind = Process(args.kind)
    proc = ProcessSpec.from_inputs(kind, args.lambda_in_nm, args.lambda_pump_nm)
    period = qpm_period(proc, model, args.design_temperature_c, extrapolate=True)
    bracket = (args.lambda_in_nm - args.half_bracket_nm, args.lambda_in_nm + args.half_bracket_nm)
    start, stop, step = args.t_range

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["temperature_c", "lambda_in_nm", "lambda_out_nm"])
    for T in np.arange(start, stop + step / 2, step):
        crystal = CrystalSpec(args.length_mm, period, float(T), model, allow_extrapolation=True)
        lam = phasematched_input_wavelength(crystal, args.lambda_pump_nm, kind, bracket, tol_nm=1e-6)
        writer.writerow([f"{T:.3f}", f"{lam:.6f}", f"{energy_match(kind, lam, args.lambda_pump_nm):.6f}"])


if __name__ == "__main__":
    main()
