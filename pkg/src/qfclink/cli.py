"""``qfclink`` command-line tool.

Subcommands: ``design``, ``curve``, ``efficiency``, ``budget``, ``link``.
Reports are JSON, series are CSV.  Flags override the config file.
Exit status is 0 only when every requested output was written.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import conversion, netlink, phasematching, photonstats
from .config import ConfigError, RunConfig, load_config
from .dispersion import DispersionError, ValidityError, load_model, resolve_model_path

EXIT_OK = 0
EXIT_ERROR = 1


def _num(x):
    """JSON-safe float: infinities become the strings "inf"/"-inf"."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _json_text(obj) -> str:
    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return _num(o)

    return json.dumps(clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _model(cfg: RunConfig, args):
    ref = args.model or cfg.dispersion_model
    return load_model(resolve_model_path(ref, cfg.base_dir))


def _allow_extrapolation(cfg, args) -> bool:
    return bool(args.allow_extrapolation or cfg.allow_extrapolation)


def _crystal(cfg, args, model, period_um):
    T = args.temperature_c if args.temperature_c is not None else cfg.crystal.temperature_c
    return phasematching.CrystalSpec(cfg.crystal.length_mm, period_um, T, model, _allow_extrapolation(cfg, args))


def _configured_period(cfg, args):
    return args.poling_period_um if args.poling_period_um is not None else cfg.crystal.poling_period_um


def cmd_design(cfg: RunConfig, args) -> str:
    if args.format != "json":
        raise ConfigError("design emits JSON only")
    model = _model(cfg, args)
    proc = cfg.process_spec()
    allow = _allow_extrapolation(cfg, args)
    T = args.temperature_c if args.temperature_c is not None else cfg.crystal.temperature_c
    designed = phasematching.qpm_period(proc, model, T, extrapolate=allow)
    period = _configured_period(cfg, args) or designed
    crystal = _crystal(cfg, args, model, period)
    dT = cfg.process.dt_k
    slopes = phasematching.tuning_slopes(
        crystal, proc.lambda_pump_nm, proc.kind, dT, bracket_nm=cfg.process.bracket()
    )
    extrapolated = not model.contains([w * 1e-3 for w in proc.wavelengths_nm], [T - dT, T + dT])
    report = {
        "model": model.name,
        "allow_extrapolation": allow,
        "extrapolated": extrapolated,
        "temperature_c": T,
        "process": {
            "kind": proc.kind.value,
            "lambda_in_nm": proc.lambda_in_nm,
            "lambda_pump_nm": proc.lambda_pump_nm,
            "lambda_out_nm": proc.lambda_out_nm,
        },
        "poling_period_um": designed,
        "crystal_period_um": period,
        "slopes": {
            "dt_k": dT,
            "lambda_in_nm": slopes.lambda_in_nm,
            "lambda_out_nm": slopes.lambda_out_nm,
            "dlambda_in_dT_nm_per_k": slopes.dlambda_in_dT,
            "dlambda_out_dT_nm_per_k": slopes.dlambda_out_dT,
            "ratio_finite_difference": slopes.ratio_finite_difference,
            "ratio_analytic": slopes.ratio_analytic,
            "ratio_at_center": slopes.ratio_at_center,
        },
    }
    return _json_text(report)


def cmd_curve(cfg: RunConfig, args) -> str:
    model = _model(cfg, args)
    proc = cfg.process_spec()
    allow = _allow_extrapolation(cfg, args)
    T = args.temperature_c if args.temperature_c is not None else cfg.crystal.temperature_c
    period = _configured_period(cfg, args) or phasematching.qpm_period(proc, model, T, extrapolate=allow)
    crystal = _crystal(cfg, args, model, period)
    if args.range is not None:
        start, stop, step = args.range
    else:
        cfg.require("curve")
        start, stop, step = cfg.curve.start_nm, cfg.curve.stop_nm, cfg.curve.step_nm
    rows = phasematching.phasematch_curve(crystal, proc.lambda_pump_nm, proc.kind, start, stop, step)
    rows = [(round(lam, 9), eff) for lam, eff in rows]
    if args.format == "csv":
        return _csv_text(["lambda_in_nm", "relative_efficiency"], rows)
    lams = [r[0] for r in rows]
    outs = [phasematching.energy_match(proc.kind, lam, proc.lambda_pump_nm) for lam in lams]
    return _json_text(
        {
            "model": model.name,
            "extrapolated": not model.contains([x * 1e-3 for x in lams + outs + [proc.lambda_pump_nm]], T),
            "poling_period_um": period,
            "temperature_c": T,
            "length_mm": crystal.length_mm,
            "rows": [{"lambda_in_nm": lam, "relative_efficiency": eff} for lam, eff in rows],
        }
    )


def cmd_efficiency(cfg: RunConfig, args) -> str:
    cfg.require("conversion")
    c = cfg.conversion
    ref = args.points or c.points_csv
    if ref is None:
        raise ConfigError("no efficiency points: set conversion.points_csv or pass --points")
    points = conversion.read_efficiency_points(cfg.existing_path(ref) if not args.points else ref)
    overlap = cfg.overlap()
    fit = conversion.fit_normalized_efficiency(points, c.length_mm * 1e-3, overlap, c.eta_max)
    preds = [(p * 1e-3, conversion.efficiency_vs_power(fit.model, p * 1e-3)) for p in c.predict_pump_mw]
    if args.format == "csv":
        return _csv_text(["P_pump_W", "eta_ext"], preds)
    report = fit.as_dict()
    report.update(
        {
            "length_m": fit.model.length_m,
            "overlap": overlap,
            "eta_max": fit.model.eta_max,
            "first_peak_power_W": fit.model.first_peak_power_W(),
            "predictions": [{"P_pump_W": p, "eta_ext": e} for p, e in preds],
        }
    )
    return _json_text(report)


def cmd_budget(cfg: RunConfig, args) -> str:
    if args.format != "json":
        raise ConfigError("budget emits JSON only")
    cfg.require("pulse_train", "detection", "input")
    ref = args.counts or cfg.counts_csv
    if ref is None:
        raise ConfigError("no count series: set counts_csv or pass --counts")
    counts = photonstats.read_count_series(ref if args.counts else cfg.existing_path(ref))
    train = cfg.pulse_train_obj()
    D = photonstats.duty_cycle(train)
    report = photonstats.photon_budget(
        train, cfg.detection_chain(), counts, cfg.input_power_W(D), cfg.input.lambda_nm
    )
    report["S_raw"] = counts.s_raw_hz
    report["N_raw"] = counts.n_raw_hz
    return _json_text(report)


def _link_summary(cfg, template):
    L = cfg.link.summary_distance_km
    a = template.with_(topology="A", distance_km=L)
    c = template.with_(topology="C", distance_km=L)
    summary = {
        "summary_distance_km": L,
        "improvement_orders": netlink.improvement_orders(a, c),
        "log10_p_case_a": netlink.scenario_log10_success(a),
        "log10_p_case_c": netlink.scenario_log10_success(c),
    }
    try:
        summary["crossover_km"] = netlink.crossover_distance(template)
    except ValueError:
        summary["crossover_km"] = None
    return summary


def cmd_link(cfg: RunConfig, args) -> dict[str, str]:
    """Returns ``{destination: text}``; ``None`` is stdout."""
    template = cfg.link_template()
    distances = args.distances if args.distances is not None else cfg.link.distances_km
    if not distances:
        raise ConfigError("empty distance grid")
    if any(not float(d) >= 0 for d in distances):
        raise ConfigError("distances must be non-negative")
    rows = netlink.scenario_sweep(template, distances)
    summary = _link_summary(cfg, template)
    if args.format == "json":
        summary["rows"] = [
            {
                "distance_km": r.distance_km,
                "log10_p_case_a": r.log10_p_case_a,
                "log10_p_case_b": r.log10_p_case_b,
                "log10_p_case_c": r.log10_p_case_c,
            }
            for r in rows
        ]
        return {args.out: _json_text(summary)}
    fmt = netlink.format_pow10
    linear = _csv_text(
        ["distance_km", "p_case_a", "p_case_b", "p_case_c"],
        [(r.distance_km, fmt(r.log10_p_case_a), fmt(r.log10_p_case_b), fmt(r.log10_p_case_c)) for r in rows],
    )
    log10 = _csv_text(
        ["distance_km", "log10_p_case_a", "log10_p_case_b", "log10_p_case_c"],
        [(r.distance_km, r.log10_p_case_a, r.log10_p_case_b, r.log10_p_case_c) for r in rows],
    )
    if args.out in (None, "-"):
        return {None: linear}
    out = Path(args.out)
    return {
        out: linear,
        out.with_name(out.stem + "_log10.csv"): log10,
        out.with_name(out.stem + "_summary.json"): _json_text(summary),
    }


COMMANDS = {
    "design": (cmd_design, "json"),
    "curve": (cmd_curve, "csv"),
    "efficiency": (cmd_efficiency, "json"),
    "budget": (cmd_budget, "json"),
    "link": (cmd_link, "csv"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfclink", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--allow-extrapolation", action="store_true",
                       help="evaluate the dispersion model outside its validity box")
        p.add_argument("--model", help="coefficient file (overrides dispersion_model)")
        if name in ("design", "curve"):
            p.add_argument("--temperature-c", type=float)
            p.add_argument("--poling-period-um", type=float)
        if name == "curve":
            p.add_argument("--range", nargs=3, type=float, metavar=("START_NM", "STOP_NM", "STEP_NM"))
        if name == "efficiency":
            p.add_argument("--points", help="P_pump_W,eta_ext CSV")
        if name == "budget":
            p.add_argument("--counts", help="integration_s,signal_counts,noise_counts CSV")
        if name == "link":
            p.add_argument("--distances", type=float, nargs="+", metavar="KM")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    func, default_format = COMMANDS[args.command]
    if args.format is None:
        args.format = default_format
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        result = func(cfg, args)
        outputs = result if isinstance(result, dict) else {args.out: result}
        for dest, text in outputs.items():
            _emit(text, dest)
    except (
        ConfigError,
        DispersionError,
        ValidityError,
        phasematching.PhaseMatchingError,
        photonstats.SaturationError,
        photonstats.NonPhysicalError,
        conversion.FitError,
        ValueError,
        OSError,
    ) as exc:
        print(f"qfclink {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
