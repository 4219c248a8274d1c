"""Command-line frontend: verification suites, curve generation, model
comparison, the speedup benchmark, and the small closed-form calculators.

Exit codes: 0 success, 1 tolerance/consistency failure, 2 usage error,
3 I/O error. All subcommands are deterministic under a fixed seed; JSON
reports carry a schema_version field and are byte-stable.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import membrane_material as mm
from . import scenarios as sc
from .lattice import make_frame

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _json_text(payload: dict) -> str:
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_text(path, text) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _parse_tolerances(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise UsageError(f"bad --tolerance {item!r}; expected NAME=VALUE")
        try:
            out[name] = float(val)
        except ValueError:
            raise UsageError(f"bad --tolerance value in {item!r}") from None
    return out


def _protocol_from(args) -> sc.DeformationProtocol:
    lo, hi = args.range
    try:
        return sc.DeformationProtocol(args.protocol,
                                      math.radians(args.theta_deg),
                                      lo, hi, args.steps)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _params_from(args) -> mm.MaterialParams:
    try:
        return mm.material_preset(args.param_set)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_verify(args) -> int:
    tol = _parse_tolerances(args.tolerance)
    models = (["metric", "log", "bending"] if args.model == "all"
              else [args.model])
    reports = []
    for model in models:
        if model == "bending":
            allowed = {"stress_fd", "tangent_fd", "transpose_identity"}
            kw = {}
        elif model == "metric":
            allowed = {"stress_fd", "tangent_fd", "major_symmetry",
                       "rearrangement"}
            kw = {"params": _params_from(args)}
        else:
            allowed = {"stress_fd", "major_symmetry"}
            kw = {"params": _params_from(args)}
        use = {k: v for k, v in tol.items() if k in allowed}
        reports.append(sc.verify_derivatives(
            model, n_samples=args.samples, seed=args.seed,
            tolerances=use or None, **kw))
    ok = all(r["pass"] for r in reports)
    payload = {"command": "verify", "pass": ok, "reports": reports}
    text = _json_text(payload)
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_curve(args) -> int:
    protocol = _protocol_from(args)
    params = _params_from(args)
    frame = make_frame(math.radians(args.lattice_deg))
    points = sc.run_curve(protocol, args.model, params, frame)
    sc.write_curve_csv(args.out, points, args.model, params.name,
                       args.theta_deg)
    lam, peak = sc.peak_of_curve(points)
    sys.stdout.write(f"wrote {len(points)} rows to {args.out}; "
                     f"peak sigma11 {peak:.6g} N/m at lambda {lam:.6g}\n")
    return EXIT_OK


PAPER_COMPARE = {
    ("uniaxial-constrained", 0.0, "GGA"): (0.019, 0.199),
    ("uniaxial-constrained", 30.0, "GGA"): (0.019, 0.194),
    ("pure-shear", 0.0, "GGA"): (0.35, 0.42),
    ("pure-shear", 0.0, "LDA"): (0.12, 0.22),
}


def cmd_compare(args) -> int:
    protocol = _protocol_from(args)
    params = _params_from(args)
    frame = make_frame(math.radians(args.lattice_deg))
    diffs = sc.compare_models(protocol, params, frame)
    ref = PAPER_COMPARE.get((args.protocol, args.theta_deg, args.param_set))
    payload = {
        "command": "compare",
        "protocol": {"kind": args.protocol, "theta_deg": args.theta_deg,
                     "range": list(args.range), "steps": args.steps},
        "param_set": args.param_set,
        "measured_max_percent": diffs,
        "reference_percent": (
            {"sigma11": ref[0], "sigma22": ref[1]} if ref else None),
    }
    text = _json_text(payload)
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        report = sc.benchmark_models(_params_from(args),
                                     n_evals=args.n_evals, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    except RuntimeError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_TOLERANCE
    payload = {"command": "bench", **report}
    text = _json_text(payload)
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK


def cmd_contact(args) -> int:
    if args.r_min <= 0 or args.r_max <= args.r_min or args.steps < 2:
        raise UsageError("need 0 < r-min < r-max and steps >= 2")
    cp = sc.ContactParams(h0=args.h0, gamma=args.gamma)
    radii = np.linspace(args.r_min, args.r_max, args.steps)
    if args.out:
        sc.write_contact_csv(args.out, radii, cp)
    psi0, tr0 = sc.contact_potential(cp.h0, cp)
    rx = sc.traction_extremum(cp)
    sys.stdout.write(
        f"psi(h0={cp.h0}) = {psi0:.6g} N/m, traction(h0) = {tr0:.3g}; "
        f"traction extremum at r = {rx:.9g} nm"
        + (f"; wrote {len(radii)} rows to {args.out}\n" if args.out else "\n"))
    return EXIT_OK


def cmd_beam(args) -> int:
    try:
        b = sc.BeamParams(args.modulus, args.r_m, args.length,
                          math.radians(args.theta_w_deg))
    except ValueError as e:
        raise UsageError(str(e)) from None
    f_w, f_a = sc.beam_force(b, args.delta)
    payload = {"command": "beam", "F_w_nN": f_w, "F_A_nN": f_a,
               "I_y_nm4": b.i_y, "delta_nm": args.delta}
    text = _json_text(payload)
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK


def cmd_cone(args) -> int:
    try:
        apex = sc.apex_angle(args.declination)
    except ValueError as e:
        raise UsageError(str(e)) from None
    payload = {"command": "cone", "declination_deg": args.declination,
               "apex_angle_deg": apex}
    text = _json_text(payload)
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK


def _add_common(sp, with_seed=True):
    sp.add_argument("--param-set", default="GGA", choices=["GGA", "LDA"])
    if with_seed:
        sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None,
                    help="JSON file of flag defaults (dashes as underscores)")


def _add_protocol(sp):
    sp.add_argument("--protocol", default="uniaxial-constrained",
                    choices=list(sc.PROTOCOL_KINDS))
    sp.add_argument("--theta-deg", type=float, default=0.0,
                    help="pull direction from the armchair axis, degrees")
    sp.add_argument("--lattice-deg", type=float, default=0.0,
                    help="armchair axis direction in the storage frame")
    sp.add_argument("--range", type=float, nargs=2, default=(1.0, 1.25),
                    metavar=("LO", "HI"))
    sp.add_argument("--steps", type=int, default=26)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gmem",
        description="Anisotropic hyperelastic membrane and bending models "
                    "for hexagonal 2D crystals, with built-in verification.")
    sub = ap.add_subparsers(dest="command", required=True)
    by_name = {}
    orig_add = sub.add_parser

    def add_parser(name, **kw):
        sp = orig_add(name, **kw)
        by_name[name] = sp
        return sp

    sub.add_parser = add_parser
    ap.subcommand_parsers = by_name

    sp = sub.add_parser("verify", help="finite-difference derivative checks")
    sp.add_argument("--model", default="all",
                    choices=["metric", "log", "bending", "all"])
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                    help="override a check tolerance")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("curve", help="stress curve sweep to CSV")
    sp.add_argument("--model", default="metric", choices=list(sc.MODEL_NAMES))
    _add_protocol(sp)
    _add_common(sp, with_seed=False)
    sp.set_defaults(func=cmd_curve, out_required=True)

    sp = sub.add_parser("compare", help="metric-vs-log sweep differences")
    _add_protocol(sp)
    _add_common(sp, with_seed=False)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("bench", help="stress+tangent throughput ratio")
    sp.add_argument("--n-evals", type=int, default=100_000)
    _add_common(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("contact", help="adhesion potential calculator")
    sp.add_argument("--r-min", type=float, default=0.3)
    sp.add_argument("--r-max", type=float, default=1.2)
    sp.add_argument("--steps", type=int, default=46)
    sp.add_argument("--h0", type=float, default=0.34)
    sp.add_argument("--gamma", type=float, default=0.14)
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=cmd_contact)

    sp = sub.add_parser("beam", help="axially loaded tube force calculator")
    sp.add_argument("--modulus", type=float, required=True,
                    help="2D modulus, N/m")
    sp.add_argument("--r-m", type=float, required=True, help="mean radius, nm")
    sp.add_argument("--length", type=float, required=True, help="length, nm")
    sp.add_argument("--theta-w-deg", type=float, required=True)
    sp.add_argument("--delta", type=float, default=0.1,
                    help="axial end shortening, nm")
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=cmd_beam)

    sp = sub.add_parser("cone", help="fold-cone apex angle")
    sp.add_argument("--declination", type=float, required=True,
                    help="angular declination in degrees")
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=cmd_cone)

    return ap


def _apply_config(ap: argparse.ArgumentParser, argv) -> argparse.Namespace:
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as e:
            raise UsageError(f"cannot read config: {e}")
        except json.JSONDecodeError as e:
            raise UsageError(f"config is not valid JSON: {e}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        valid = set(vars(args)) - {"func", "command", "config", "out_required"}
        unknown = set(cfg) - valid
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if "range" in cfg:
            cfg["range"] = tuple(float(x) for x in cfg["range"])
        # config supplies defaults; explicit flags win on the second pass.
        # Defaults must land on the subcommand parser: option defaults
        # declared there shadow any set on the top-level parser.
        ap.subcommand_parsers[args.command].set_defaults(**cfg)
        args = ap.parse_args(argv)
    if getattr(args, "out_required", False) and not args.out:
        raise UsageError("--out is required for this subcommand")
    return args


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
