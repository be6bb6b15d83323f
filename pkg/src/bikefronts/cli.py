"""Command-line front end: curve specs in, reports and plot data out.

Commands
--------
simulate     rear-track CSV for one curve and bicycle length
monodromy    monodromy matrix, classification and fixed points as JSON
verify       named identity/inequality checks, one JSON report each
sweep        Menzin sweep CSV over curves x lengths
dual         spherical dual curve as CSV
equidistant  equidistant curve at signed distance d as CSV

Formats: json, csv, svg (``--format`` accepts a comma list).  The SVG
projection is display-only: stereographic from the antipode of the base
point on the sphere, Poincare disk (x, y) / (1 + z) for the hyperbolic
plane.  Files are written atomically (temp file + rename).  Exit codes:
0 all checks pass, 1 a verification failed, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .bicycle import BicycleParams, integrate_steering, rear_track
from .errors import BikefrontsError, ParseError, SchemaError, SpecInvalid
from .geometry import SurfaceModel
from .monodromy import compute_monodromy, fixed_points
from .numerics import periodic_cumtrapz
from .verify import (
    check_curvature_relation,
    check_hyperbolic_isoperimetric,
    check_spherical_isoperimetric,
    menzin_sweep,
)
from .wavefront import CurveSpec, WaveFront, build, dual, equidistant, wavefront_from_samples

_CURVE_KEYS = {"model", "kind", "radius", "rho0", "cos", "sin", "samples", "base_point"}

_CURVE_CSV_COLUMNS = [
    "u",
    "x",
    "y",
    "z",
    "ex",
    "ey",
    "ez",
    "nx",
    "ny",
    "nz",
    "w",
    "omega",
]

_SIMULATE_COLUMNS = [
    "u",
    "s",
    "t",
    "alpha",
    "front_x",
    "front_y",
    "front_z",
    "rear_x",
    "rear_y",
    "rear_z",
    "kappa",
    "k",
    "sign",
]


def _fmt(x):
    return f"{float(x):.17g}"


def parse_curve_spec(data, default_samples=None) -> CurveSpec:
    """Strict dict -> CurveSpec conversion (unknown keys are errors)."""
    if not isinstance(data, dict):
        raise SchemaError("curve entry must be a JSON object")
    unknown = set(data) - _CURVE_KEYS
    if unknown:
        raise SchemaError(f"unknown curve keys: {sorted(unknown)}")
    for key in ("model", "kind"):
        if key not in data:
            raise SchemaError(f"curve entry missing required key {key!r}")
    try:
        model = SurfaceModel.from_name(data["model"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    kind = data["kind"]
    if kind == "circle" and "radius" not in data:
        raise SchemaError("circle curve needs a radius")
    if kind == "polar_fourier" and "rho0" not in data:
        raise SchemaError("polar_fourier curve needs rho0")
    samples = data.get("samples", default_samples or 1024)
    return CurveSpec(
        model=model,
        kind=kind,
        radius=data.get("radius"),
        rho0=data.get("rho0"),
        fourier_cos=tuple(data.get("cos", ())),
        fourier_sin=tuple(data.get("sin", ())),
        samples=int(samples),
        base_point=tuple(data.get("base_point", (0.0, 0.0, 1.0))),
    )


def parse_curve_file(path, default_samples=None):
    """Load one or more curve specs from a JSON file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read curve file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    entries = data if isinstance(data, list) else [data]
    specs = []
    for i, entry in enumerate(entries):
        try:
            specs.append(parse_curve_spec(entry, default_samples))
        except (SchemaError, SpecInvalid) as exc:
            raise type(exc)(f"{path}[{i}]: {exc}") from None
    if not specs:
        raise SchemaError(f"{path}: no curve entries")
    return specs


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, out_prefix, suffix):
    if out_prefix is None:
        sys.stdout.write(text)
        return
    _atomic_write(Path(f"{out_prefix}{suffix}"), text)


def curve_csv(front: WaveFront) -> str:
    """Serialize a sampled front to CSV (re-ingestable)."""
    lines = [",".join(_CURVE_CSV_COLUMNS)]
    for i in range(front.n_samples):
        row = [
            front.u[i],
            *front.positions[i],
            *front.epsilon[i],
            *front.coorient[i],
            front.w[i],
            front.omega[i],
        ]
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def read_curve_csv(path, model) -> WaveFront:
    """Rebuild a sampled front from a curve CSV emitted by this tool."""
    try:
        rows = Path(path).read_text().strip().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    header = rows[0].split(",")
    if header != _CURVE_CSV_COLUMNS:
        raise SchemaError(f"{path}: unexpected curve CSV columns {header}")
    data = np.array([[float(v) for v in line.split(",")] for line in rows[1:]])
    return wavefront_from_samples(
        model=model,
        positions=data[:, 1:4],
        epsilon=data[:, 4:7],
        coorient=data[:, 7:10],
        w=data[:, 10],
        omega=data[:, 11],
    )


def _project_disk(points):
    # stereographic from the antipode of the default base point (sphere)
    # and the Poincare disk map (hyperbolic) share this formula
    return points[:, 0] / (1.0 + points[:, 2]), points[:, 1] / (1.0 + points[:, 2])


def curves_svg(fronts, size=480) -> str:
    """Minimal SVG rendering of projected curves."""
    xs, ys = [], []
    paths = []
    for front in fronts:
        x, y = _project_disk(front.positions)
        xs.append(x)
        ys.append(y)
    span = max(max(np.max(np.abs(v)) for v in xs), max(np.max(np.abs(v)) for v in ys), 1.0)
    scale = (size / 2 - 10) / span
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]
    for i, (x, y) in enumerate(zip(xs, ys)):
        px = size / 2 + scale * x
        py = size / 2 - scale * y
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = colors[i % len(colors)]
        paths.append(
            f'<polygon points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>'
        )
    disk = (
        f'<circle cx="{size/2}" cy="{size/2}" r="{scale:.2f}" fill="none" '
        'stroke="#999" stroke-dasharray="4 4"/>'
    )
    body = "\n".join([disk] + paths)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n{body}\n</svg>\n'
    )


# ---------------------------------------------------------------------------
# commands


def _cmd_simulate(args, specs):
    spec = specs[0]
    params = BicycleParams(l=args.l, model=spec.model, steps_per_sample=args.steps_per_sample)
    front = build(spec)
    if args.alpha0 is not None:
        alpha0 = args.alpha0
    else:
        m = compute_monodromy(front, params, args.tol_parabolic)
        fps = fixed_points(m)
        if not fps:
            raise BikefrontsError("monodromy is elliptic; pass --alpha0 explicitly")
        alpha0 = next((fp.theta for fp in fps if fp.derivative <= 1.0), fps[0].theta)
    sol = integrate_steering(front, params, alpha0)
    rear = rear_track(front, sol).track
    s = periodic_cumtrapz(front.speed, front.period)[:-1]
    t = periodic_cumtrapz(rear.w, rear.period)[:-1]
    k_rear = np.tan(sol.alpha) / spec.model.s(args.l)
    lines = [",".join(_SIMULATE_COLUMNS)]
    for i in range(front.n_samples):
        row = [
            front.u[i],
            s[i],
            t[i],
            sol.alpha[i],
            *front.positions[i],
            *rear.positions[i],
            front.kappa[i],
            k_rear[i],
            rear.sign[i],
        ]
        lines.append(",".join(_fmt(v) for v in row))
    _emit("\n".join(lines) + "\n", args.out, ".csv")
    if "svg" in args.formats:
        _emit(curves_svg([front, rear]), args.out, ".svg")
    return 0


def _cmd_monodromy(args, specs):
    spec = specs[0]
    params = BicycleParams(l=args.l, model=spec.model, steps_per_sample=args.steps_per_sample)
    front = build(spec)
    m = compute_monodromy(front, params, args.tol_parabolic)
    doc = {
        "matrix": [[m.a, m.b], [m.c, m.d]],
        "trace": m.trace,
        "class": m.classification.value,
        "fixed_points": [
            {"theta": fp.theta, "derivative": fp.derivative} for fp in fixed_points(m)
        ],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out, ".json")
    return 0


_VERIFY_CHECKS = ("spherical_iso", "hyperbolic_iso", "curvature_relation")


def _cmd_verify(args, specs):
    spec = specs[0]
    front = build(spec)
    wanted = _VERIFY_CHECKS if args.check == "all" else (args.check,)
    reports = []
    for name in wanted:
        if name == "spherical_iso":
            if spec.model is not SurfaceModel.SPHERE:
                continue
            reports.append(check_spherical_isoperimetric(front))
        elif name == "hyperbolic_iso":
            if spec.model is not SurfaceModel.HYPERBOLIC:
                continue
            reports.append(check_hyperbolic_isoperimetric(front))
        elif name == "curvature_relation":
            if args.l is None:
                raise BikefrontsError("curvature_relation needs --l")
            params = BicycleParams(l=args.l, model=spec.model, steps_per_sample=args.steps_per_sample)
            reports.append(check_curvature_relation(front, params))
    if not reports:
        raise BikefrontsError("no applicable checks for this curve/model")
    failed = False
    for rep in reports:
        if not rep.hypothesis_ok:
            print(f"warning: {rep.name}: hypothesis violated, inequality not asserted", file=sys.stderr)
        if not rep.passed:
            failed = True
        _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.out, f".{rep.name}.json")
    return 1 if failed else 0


def _cmd_sweep(args, specs):
    ls = args.l_list if args.l_list else [args.l]
    if not ls or ls[0] is None:
        raise BikefrontsError("sweep needs --l or --l-list")
    report = menzin_sweep(
        specs, ls, steps_per_sample=args.steps_per_sample, tol_parabolic=args.tol_parabolic
    )
    _emit(report.to_csv(), args.out, ".csv")
    if report.counterexamples:
        for row in report.counterexamples:
            print(f"counterexample: {row.curve_id} l={row.l}", file=sys.stderr)
        return 1
    return 0


def _cmd_curve_out(args, specs, transform):
    front = build(specs[0])
    moved = transform(front)
    _emit(curve_csv(moved), args.out, ".csv")
    if "svg" in args.formats:
        _emit(curves_svg([front, moved]), args.out, ".svg")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bikefronts",
        description="bicycle kinematics and wave-front checks on constant-curvature surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("simulate", _cmd_simulate),
        ("monodromy", _cmd_monodromy),
        ("verify", _cmd_verify),
        ("sweep", _cmd_sweep),
        ("dual", None),
        ("equidistant", None),
    ):
        p = sub.add_parser(name)
        p.add_argument("--curve", required=True, help="JSON curve spec file")
        p.add_argument("--model", default=None, help="expected surface model (validates the curve file)")
        p.add_argument("--l", type=float, default=None, help="bicycle length")
        p.add_argument("--l-list", type=lambda s: [float(v) for v in s.split(",")], default=None)
        p.add_argument("--samples", type=int, default=None, help="override sample count")
        p.add_argument("--tol-parabolic", type=float, default=1e-8)
        p.add_argument("--steps-per-sample", type=int, default=4)
        p.add_argument("--out", default=None, help="output path prefix (stdout when omitted)")
        p.add_argument(
            "--format",
            dest="formats",
            type=lambda s: set(s.split(",")),
            default={"json", "csv"},
            help="comma list from json,csv,svg",
        )
        if name == "simulate":
            p.add_argument("--alpha0", type=float, default=None, help="initial steering angle")
        if name == "verify":
            p.add_argument("--check", default="all", choices=("all",) + _VERIFY_CHECKS)
        if name == "equidistant":
            p.add_argument(
                "--d",
                type=float,
                required=True,
                help="geodesic distance along the co-orientation (negative = outward for convex curves)",
            )
    return parser


def run(args) -> int:
    """Execute a parsed command; returns the process exit code."""
    specs = parse_curve_file(args.curve, args.samples)
    if args.model is not None:
        expected = SurfaceModel.from_name(args.model)
        for spec in specs:
            if spec.model is not expected:
                raise SchemaError(
                    f"curve file model {spec.model.value!r} does not match --model {args.model!r}"
                )
    if args.samples is not None:
        specs = [
            CurveSpec(
                model=s.model,
                kind=s.kind,
                radius=s.radius,
                rho0=s.rho0,
                fourier_cos=s.fourier_cos,
                fourier_sin=s.fourier_sin,
                samples=args.samples,
                base_point=s.base_point,
            )
            for s in specs
        ]
    if args.command == "simulate":
        return _cmd_simulate(args, specs)
    if args.command == "monodromy":
        return _cmd_monodromy(args, specs)
    if args.command == "verify":
        return _cmd_verify(args, specs)
    if args.command == "sweep":
        return _cmd_sweep(args, specs)
    if args.command == "dual":
        return _cmd_curve_out(args, specs, dual)
    if args.command == "equidistant":
        return _cmd_curve_out(args, specs, lambda w: equidistant(w, args.d))
    raise BikefrontsError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (ParseError, SchemaError, SpecInvalid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BikefrontsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
