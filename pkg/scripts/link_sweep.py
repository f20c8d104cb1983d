"""Success probability of the three link topologies over a distance grid, as CSV (log10 columns)."""
import argparse
import csv
import sys

import numpy as np

from qfclink.netlink import DEFAULT_LINK, LinkScenario, scenario_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-km", type=float, default=100.0)
    parser.add_argument("--points", type=int, default=201)
    for key, value in DEFAULT_LINK.items():
        parser.add_argument("--" + key.replace("_", "-"), type=float, default=value)
    args = parser.parse_args()

    template = LinkScenario(
        "A",
        0.0,
        alpha_blue_db_per_km=args.alpha_blue_db_per_km,
        alpha_ir_db_per_km=args.alpha_ir_db_per_km,
        eta_down=args.eta_down,
        eta_up=args.eta_up,
    )
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["distance_km", "log10_p_case_a", "log10_p_case_b", "log10_p_case_c"])
    for row in scenario_sweep(template, np.linspace(0.0, args.max_km, args.points)):
        writer.writerow([f"{row.distance_km:.6g}", f"{row.log10_p_case_a:.9g}", f"{row.log10_p_case_b:.9g}", f"{row.log10_p_case_c:.9g}"])


if __name__ == "__main__":
    main()
