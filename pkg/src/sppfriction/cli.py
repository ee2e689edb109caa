"""Command-line front end.

    sppfriction rates    --omega0 646THz --material silver --d 3nm --v 0.273c --gamma-eg 1e-29
    sppfriction sweep    --axis1 a:0.05:2:200 --axis2 b:0.05:2:200 --quantity pe_steady
    sppfriction optimize --objective pe_steady_diag --lo 0.01 --hi 1
    sppfriction report   --material silver --d 3nm --gamma-eg 1e-29 --v-min 0.01c --v-max 0.45c
    sppfriction oracle-check

Exit status: 0 success, 2 usage error, 3 convergence or oracle failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .config import CONSTANTS, QuadratureSettings, SystemConfig
from .dynamics import (
    PopulationState,
    detailed_balance_residual,
    evolve_ode,
    pe_closed_form,
    pe_steady,
    relaxation_time,
    sigma_z_expectation,
)
from .errors import ConvergenceError, DomainError, OptimizationError, SppFrictionError
from .friction import friction_force, friction_steady
from .quasistatic import gamma_pair, gamma_total, im_c_int_zz
from .spp_modes import refinement_study
from .sweep import MATERIALS, OBJECTIVES, QUANTITIES, Axis, SweepSpec, optimize_1d, physical_report, run_sweep
from .units import AXIS_PARSERS, parse_dipole, parse_frequency, parse_length, parse_velocity

EXIT_USAGE = 2
EXIT_FAILURE = 3
ORACLE_TOLERANCE = 0.01
ORACLE_MONOTONE_FLOOR = 0.005
ORACLE_MONOTONE_FACTOR = 1.5
ORACLE_MATRIX = ((0.1, 0.148), (0.5, 1.0), (1.0, 1.62), (2.0, 1.0), (2.0, 1.62))

JSON_KEYS = {
    "omega0_radps": "omega0",
    "omega_sp_radps": "omega_sp",
    "d_m": "d",
    "v_mps": "v",
    "gamma_eg_Cm": "gamma_eg",
}


class UsageError(DomainError):
    pass


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


def write_records(records, columns, fmt, stream):
    """CSV (header + 17 significant digits) or JSON array of records."""
    if fmt == "json":
        clean = [{c: _json_value(r.get(c)) for c in columns} for r in records]
        stream.write(json.dumps(clean, indent=2) + "\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([format_value(r.get(c)) for c in columns])


def _json_value(value):
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def _emit(args, records, columns):
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            write_records(records, columns, args.format, fh)
    else:
        buf = io.StringIO()
        write_records(records, columns, args.format, buf)
        sys.stdout.write(buf.getvalue())


# -- configuration ---------------------------------------------------------


def load_config_fields(args):
    """Merge the JSON config file (if any) with command-line flags; flags win."""
    fields = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(data) - set(JSON_KEYS) - {"material"}
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "material" in data:
            fields["omega_sp"] = _material(data["material"]).omega_sp
        for key, name in JSON_KEYS.items():
            if key in data:
                fields[name] = float(data[key])
    if getattr(args, "material", None):
        fields["omega_sp"] = _material(args.material).omega_sp
    parsers = {
        "omega0": parse_frequency,
        "omega_sp": parse_frequency,
        "d": parse_length,
        "v": parse_velocity,
        "gamma_eg": parse_dipole,
    }
    for name, parse in parsers.items():
        text = getattr(args, name, None)
        if text is not None:
            fields[name] = parse(text)
    if "omega0" not in fields and getattr(args, "omega0_resonant", False) and "omega_sp" in fields:
        fields["omega0"] = fields["omega_sp"]
    return fields


def _material(name):
    try:
        return MATERIALS[name.lower()]
    except KeyError:
        raise UsageError(f"unknown material {name!r}; available: {', '.join(MATERIALS)}") from None


def build_config(args, required=("omega0", "omega_sp", "d", "v", "gamma_eg")):
    fields = load_config_fields(args)
    missing = [f for f in required if f not in fields]
    if missing:
        raise UsageError(f"missing configuration fields: {', '.join(missing)}")
    return SystemConfig(**{f: fields[f] for f in ("omega0", "omega_sp", "d", "v", "gamma_eg")})


def _settings(args):
    return QuadratureSettings(rel_tol=args.rel_tol)


# -- subcommands -------------------------------------------------------------


def cmd_rates(args):
    config = build_config(args)
    settings = _settings(args)
    pair = gamma_pair(config, settings)
    p = config.normalized
    record = {
        "a": p.a,
        "b": p.b,
        "gamma_plus": pair.gamma_plus,
        "gamma_minus": pair.gamma_minus,
        "g_plus": pair.g_plus,
        "g_minus": pair.g_minus,
        "gamma_total": gamma_total(pair),
        "im_c_int_zz": im_c_int_zz(config, settings),
    }
    _emit(args, [record], list(record))


def cmd_steady(args):
    config = build_config(args)
    pair = gamma_pair(config, _settings(args))
    p_inf = pe_steady(pair)
    record = {
        "pe_steady": p_inf,
        "sigma_z": sigma_z_expectation(PopulationState(p_inf)),
        "detailed_balance_residual": detailed_balance_residual(pair, p_inf),
        "gamma_total": gamma_total(pair),
        "population_inversion": p_inf > 0.5,
    }
    _emit(args, [record], list(record))


def cmd_evolve(args):
    config = build_config(args)
    pair = gamma_pair(config, _settings(args))
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    t_final = args.relaxation_times * relaxation_time(pair)
    if not math.isfinite(t_final):
        raise UsageError("both rates vanish; nothing to evolve")
    t = np.linspace(0.0, t_final, args.samples)
    columns = ["t_seconds", "p_e"]
    if args.method == "ode":
        p = evolve_ode(pair, args.p0, t, rel_tol=args.rel_tol).p_e
    else:
        p = pe_closed_form(pair, args.p0, t)
    records = [{"t_seconds": float(ti), "p_e": float(pi)} for ti, pi in zip(t, p)]
    _emit(args, records, columns)


def cmd_friction(args):
    config = build_config(args)
    pair = gamma_pair(config, _settings(args))
    if args.p_e is None:
        p_e = pe_steady(pair)
        result = friction_steady(config, pair)
    else:
        p_e = args.p_e
        result = friction_force(config, pair, p_e)
    record = {
        "p_e": p_e,
        "force_n": result.force,
        "power_w": result.power,
        "normalized_force": result.normalized_force,
        "normalized_power": result.normalized_power,
    }
    _emit(args, [record], list(record))


def parse_axis(text):
    """NAME:MIN:MAX:COUNT[:SCALE]; bounds accept unit suffixes for v, d, omega0."""
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise UsageError(f"axis {text!r}: expected NAME:MIN:MAX:COUNT[:SCALE]")
    name = parts[0]
    if name not in AXIS_PARSERS:
        raise UsageError(f"axis {text!r}: name must be one of {', '.join(AXIS_PARSERS)}")
    parse = AXIS_PARSERS[name]
    try:
        lo, hi = parse(parts[1]), parse(parts[2])
        count = int(parts[3])
    except ValueError as exc:
        raise UsageError(f"axis {text!r}: {exc}") from None
    scale = parts[4] if len(parts) == 5 else "linear"
    return Axis(name, lo, hi, count, scale)


def cmd_sweep(args):
    axis1 = parse_axis(args.axis1)
    axis2 = parse_axis(args.axis2) if args.axis2 else None
    fixed = {}
    if axis1.name in ("a", "b"):
        for name in ("a", "b"):
            value = getattr(args, f"fixed_{name}")
            if value is not None:
                fixed[name] = value
    else:
        fixed = load_config_fields(args)
        if "omega0" not in fixed and "omega_sp" in fixed and args.omega0_resonant:
            fixed["omega0"] = fixed["omega_sp"]
    spec = SweepSpec(axis1=axis1, axis2=axis2, quantity=args.quantity, fixed=fixed)
    records = run_sweep(spec, _settings(args), threads=args.threads)
    _emit(args, records, spec.columns)


def cmd_optimize(args):
    result = optimize_1d(args.objective, (args.lo, args.hi), args.tol, _settings(args), a_fixed=args.a_fixed)
    record = {"objective": args.objective, "argmax": result.argmax, "max": result.max}
    _emit(args, [record], list(record))


def cmd_report(args):
    fields = load_config_fields(args)
    if "omega_sp" not in fields:
        raise UsageError("report needs --material or --omega-sp")
    for name in ("d", "gamma_eg"):
        if name not in fields:
            raise UsageError(f"report needs --{name.replace('_', '-')}")
    omega0 = fields.get("omega0", fields["omega_sp"])
    preset = _material(args.material) if args.material else None
    if preset is None or preset.omega_sp != fields["omega_sp"]:
        from .sweep import MaterialPreset

        preset = MaterialPreset("custom", fields["omega_sp"])
    v_range = (parse_velocity(args.v_min), parse_velocity(args.v_max), args.count)
    report = physical_report(preset, fields["d"], omega0, fields["gamma_eg"], v_range, _settings(args))
    if args.summary:
        record = {
            "v_star_mps": report.v_star,
            "v_star_over_c": report.v_star_over_c,
            "v_star_over_omega_sp_d": report.v_star_over_omega_sp_d,
            "pe_max": report.pe_max,
        }
        _emit(args, [record], list(record))
        return
    columns = ["v_mps", "v_over_c", "pe_steady", "gamma_plus", "gamma_minus", "force", "power"]
    _emit(args, [vars(r) for r in report.records], columns)
    print(
        f"# v_star = {report.v_star:.6e} m/s = {report.v_star_over_c:.5f} c = "
        f"{report.v_star_over_omega_sp_d:.4f} omega_sp d; pe_max = {report.pe_max:.6f}",
        file=sys.stderr,
    )


def oracle_failures(records):
    """Reasons the refinement records violate the 1% / monotone-reduction bounds."""
    problems = []
    if records[-1].max_error > ORACLE_TOLERANCE:
        problems.append(f"finest-grid error {records[-1].max_error:.3e} exceeds {ORACLE_TOLERANCE}")
    for name in ("err_plus", "err_minus", "err_friction"):
        for prev, cur in zip(records, records[1:]):
            e0, e1 = getattr(prev, name), getattr(cur, name)
            if e0 >= ORACLE_MONOTONE_FLOOR and e1 > e0 / ORACLE_MONOTONE_FACTOR:
                problems.append(f"{name}: level {cur.level} reduced {e0:.3e} -> {e1:.3e} (< {ORACLE_MONOTONE_FACTOR}x)")
    return problems


def cmd_oracle_check(args):
    if args.ab:
        pairs = [tuple(float(x) for x in item.split(",")) for item in args.ab]
    else:
        pairs = list(ORACLE_MATRIX)
    fields = load_config_fields(args)
    omega_sp = fields.get("omega_sp", MATERIALS["silver"].omega_sp)
    d = fields.get("d", 3e-9)
    gamma_eg = fields.get("gamma_eg", 1e-29)
    if {"omega0", "v"} <= set(fields) and not args.ab:
        configs = [SystemConfig(fields["omega0"], omega_sp, d, fields["v"], gamma_eg)]
    else:
        configs = [SystemConfig.from_normalized(a, b, omega_sp=omega_sp, d=d, gamma_eg=gamma_eg) for a, b in pairs]
    rows, failed = [], []
    for config in configs:
        p = config.normalized
        records = refinement_study(config, settings=_settings(args), threads=args.threads)
        for r in records:
            rows.append(
                {
                    "a": p.a,
                    "b": p.b,
                    "level": r.level,
                    "dk_d": r.dk * config.d,
                    "eta_over_v_dk": r.eta / (abs(config.v) * r.dk),
                    "err_gamma_plus": r.err_plus,
                    "err_gamma_minus": r.err_minus,
                    "err_friction": r.err_friction,
                }
            )
        problems = oracle_failures(records)
        if problems:
            failed.append((p.a, p.b, problems))
    _emit(args, rows, list(rows[0]))
    for a, b, problems in failed:
        for msg in problems:
            print(f"oracle-check FAILED at a={a:.4g}, b={b:.4g}: {msg}", file=sys.stderr)
    return EXIT_FAILURE if failed else 0


# -- parser ------------------------------------------------------------------


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--out", metavar="PATH", help="output file (default: standard output)")
    g.add_argument("--rel-tol", type=float, default=1e-12, metavar="X", help="quadrature relative tolerance")
    g.add_argument("--threads", type=int, default=1, metavar="N", help="worker count, 0 = one per CPU")
    g.add_argument("--config", metavar="PATH", help="JSON configuration file; flags override its values")
    return common


def _config_parser():
    cfg = argparse.ArgumentParser(add_help=False)
    g = cfg.add_argument_group("configuration")
    g.add_argument("--omega0", help="transition frequency, e.g. 646THz or 4.06e15rad/s")
    g.add_argument("--omega-sp", dest="omega_sp", help="plasmon resonance frequency")
    g.add_argument("--material", help=f"preset for omega_sp ({', '.join(MATERIALS)})")
    g.add_argument("--d", help="atom-surface distance, e.g. 3nm")
    g.add_argument("--v", help="slab velocity relative to the atom, e.g. 0.273c or 8e7m/s")
    g.add_argument("--gamma-eg", dest="gamma_eg", help="transition dipole in C m (or with D suffix, debye)")
    g.add_argument(
        "--resonant",
        dest="omega0_resonant",
        action="store_true",
        help="set omega0 = omega_sp when --omega0 is absent",
    )
    return cfg


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sppfriction",
        description="Motion-induced emission rates and quantum friction of an atom above a plasmonic slab.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common, cfg = _common_parser(), _config_parser()

    p = sub.add_parser("rates", parents=[common, cfg], help="transition rates and Im C_int,zz")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("steady", parents=[common, cfg], help="stationary population")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("evolve", parents=[common, cfg], help="population trajectory P_e(t)")
    p.add_argument("--p0", type=float, default=1.0)
    p.add_argument("--relaxation-times", type=float, default=10.0, help="t_final in units of 1/(G+ + G-)")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--method", choices=("closed", "ode"), default="closed")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("friction", parents=[common, cfg], help="friction force and radiated power")
    p.add_argument("--p-e", dest="p_e", type=float, help="instantaneous P_e (default: stationary)")
    p.set_defaults(func=cmd_friction)

    p = sub.add_parser("sweep", parents=[common, cfg], help="1-D or 2-D parameter sweep")
    p.add_argument("--axis1", required=True, help="NAME:MIN:MAX:COUNT[:SCALE], NAME in a,b,v,d,omega0")
    p.add_argument("--axis2")
    p.add_argument("--quantity", choices=QUANTITIES, default="pe_steady")
    p.add_argument("--fixed-a", dest="fixed_a", type=float, help="fixed a for a 1-D b sweep")
    p.add_argument("--fixed-b", dest="fixed_b", type=float, help="fixed b for a 1-D a sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", parents=[common], help="golden-section optimum of a 1-D objective")
    p.add_argument("--objective", choices=OBJECTIVES, default="pe_steady_diag")
    p.add_argument("--lo", type=float, default=0.01)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--a-fixed", dest="a_fixed", type=float, default=1e-3)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("report", parents=[common, cfg], help="velocity scan for a material preset")
    p.add_argument("--v-min", default="0.01c")
    p.add_argument("--v-max", default="0.45c")
    p.add_argument("--count", type=int, default=400)
    p.add_argument("--summary", action="store_true", help="emit only the optimum record")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("oracle-check", parents=[common, cfg], help="mode-sum convergence table")
    p.add_argument("--ab", action="append", metavar="A,B", help="normalized pair (repeatable)")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args) or 0
    except (ConvergenceError, OptimizationError) as exc:
        print(f"sppfriction: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (SppFrictionError, ValueError, OSError) as exc:
        print(f"sppfriction: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
