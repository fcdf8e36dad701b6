"""Batch experiment driver.

One command per process; every artifact embeds the config echo and the library
version, and re-running with identical arguments reproduces identical bytes.
Exit codes: 0 success, 1 validation error, 2 numeric/resource error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, bergman, carleson, domains, geometry, kobayashi, measures, sequences
from .errors import (
    CapabilityError,
    CarlesonLabError,
    ConfigError,
    InputError,
    NumericError,
    ResourceError,
)

_MAX_SAMPLES = 10**8
_MAX_DEGREE = 200


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); validation errors are exit 1
        raise InputError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="carleson-lab", description=__doc__)
    p.add_argument("--version", action="version", version=f"carleson-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, measure=False, r=None, degree=None, samples=None):
        sp.add_argument("--domain", required=True, help="domain spec JSON file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=".", help="output directory")
        if measure:
            sp.add_argument(
                "--measure", default="lebesgue", help="catalog name or atom CSV file"
            )
        if r is not None:
            sp.add_argument("--r", type=float, default=r)
        if degree is not None:
            sp.add_argument("--degree", type=int, default=degree)
        if samples is not None:
            sp.add_argument("--samples", type=int, default=samples)

    sp = sub.add_parser("domain-info", help="validated domain summary")
    common(sp)

    sp = sub.add_parser("frame", help="minimal frame at a point")
    common(sp)
    sp.add_argument("--point", required=True, help="interleaved reals x1,y1,x2,y2,...")

    sp = sub.add_parser("kernel-check", help="kernel accuracy and reproducing residuals")
    common(sp, degree=60, samples=1 << 18)

    sp = sub.add_parser("berezin", help="Berezin transform on the standard grid")
    common(sp, measure=True, r=0.3, samples=1 << 16)

    sp = sub.add_parser("carleson", help="three-criteria Carleson test")
    common(sp, measure=True, r=0.3, degree=6, samples=1 << 16)

    sp = sub.add_parser("cover", help="greedy Kobayashi ball cover")
    common(sp, r=0.3, samples=12000)

    sp = sub.add_parser("decompose", help="greedy separated decomposition")
    common(sp, r=0.5)
    sp.add_argument("--points", required=True, help="sequence CSV file")

    sp = sub.add_parser("pack", help="greedy separated packing (--r is the separation)")
    common(sp, r=0.5, samples=4096)
    sp.add_argument("--level", type=float, default=0.02, help="core level floor")

    sp = sub.add_parser("thm42", help="sequence-measure Carleson pipeline")
    common(sp, r=0.3, degree=6, samples=1 << 16)
    sp.add_argument("--points", default=None, help="sequence CSV (default: packed)")
    sp.add_argument("--sep", type=float, default=0.5, help="packing separation when generating")
    return p


def _validate(args) -> None:
    r = getattr(args, "r", None)
    if r is not None and not 0.0 < r < 1.0:
        raise InputError(f"--r must lie in (0,1), got {r}")
    sep = getattr(args, "sep", None)
    if sep is not None and not 0.0 < sep < 1.0:
        raise InputError(f"--sep must lie in (0,1), got {sep}")
    samples = getattr(args, "samples", None)
    if samples is not None and not 0 < samples <= _MAX_SAMPLES:
        raise InputError(f"--samples must lie in [1, {_MAX_SAMPLES}], got {samples}")
    degree = getattr(args, "degree", None)
    if degree is not None and not 0 < degree <= _MAX_DEGREE:
        raise InputError(f"--degree must lie in [1, {_MAX_DEGREE}], got {degree}")


def _resolve_measure(spec, name: str, seed: int = 0):
    catalog = measures.density_catalog(spec)
    if name in catalog:
        return catalog[name]
    if name in sequences.measure_suite_names():
        return sequences.named_measure(spec, name, seed=seed)
    if name.endswith(".csv"):
        if not os.path.exists(name):
            raise InputError(f"measure file not found: {name}")
        return measures.atoms_from_csv(spec, name)
    names = sorted(set(catalog) | set(sequences.measure_suite_names()))
    raise InputError(f"unknown measure {name!r}; use one of {names} or an atom CSV")


def _parse_point(spec, text: str) -> np.ndarray:
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise InputError(f"--point must be comma-separated reals: {exc}") from None
    if len(vals) != 2 * spec.dim:
        raise InputError(f"--point needs {2 * spec.dim} reals for dimension {spec.dim}")
    return domains.to_complex(np.asarray(vals))


def _write_json(path, payload: dict) -> None:
    payload = {"version": __version__, **payload}
    with open(path, "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _echo(args, skip=("command", "out")) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


# ---------------------------------------------------------------------------
# command bodies


def _cmd_domain_info(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    anchor = domains.anchor_point(spec)
    info = {
        "config": _echo(args),
        "kind": spec.kind,
        "dim": spec.dim,
        "exponents": list(spec.exponents) if spec.exponents else None,
        "semi_axes": list(spec.semi_axes) if spec.semi_axes else None,
        "box": list(spec.box),
        "anchor_value": float(domains.defining_value(spec, anchor)),
        "inradius": float(domains.inradius(spec)),
        "collar_width": float(domains.collar_width(spec)),
        "level_cap": float(domains.level_cap(spec)),
        "box_nu_volume": float(domains.box_nu_volume(spec)),
    }
    _write_json(os.path.join(out, "domain_info.json"), info)
    print(f"{spec.kind} dim={spec.dim} inradius={info['inradius']:.6g}")
    return 0


def _cmd_frame(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    q = _parse_point(spec, args.point)
    frame = geometry.minimal_frame(spec, q)
    header = ["i", "sigma"] + [f"e_x{j+1}" for j in range(spec.dim)] + [
        f"e_y{j+1}" for j in range(spec.dim)
    ]
    rows = []
    for i in range(spec.dim):
        rows.append(
            [str(i), _fmt(frame.sigma[i])]
            + [_fmt(frame.basis[i, j].real) for j in range(spec.dim)]
            + [_fmt(frame.basis[i, j].imag) for j in range(spec.dim)]
        )
    carleson.write_csv(os.path.join(out, "frame.csv"), header, rows)
    _write_json(
        os.path.join(out, "frame_summary.json"),
        {
            "config": _echo(args),
            "sigma": [float(s) for s in frame.sigma],
            "unique": bool(frame.unique),
        },
    )
    print("sigma = (" + ", ".join(f"{s:.6f}" for s in frame.sigma) + ")")
    return 0


def _cmd_kernel_check(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    model = bergman.kernel_model(spec, degree=args.degree)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    results = {"config": _echo(args), "variant": model.variant}

    if spec.kind in ("disk", "ball"):
        series = bergman.reinhardt_series_model(spec, degree=args.degree)
        z = 0.7 * domains.random_interior(spec, 500, rng)
        w = 0.7 * domains.random_interior(spec, 500, rng)
        exact = np.array([bergman.kernel(model, zi, wi) for zi, wi in zip(z, w)])
        approx = np.array([bergman.kernel(series, zi, wi) for zi, wi in zip(z, w)])
        rel = float(np.max(np.abs(approx - exact) / np.abs(exact)))
        results["series_max_rel_error"] = rel
        print(f"series vs closed kernel: max rel error {rel:.3e}")

    from .polynomials import random_polynomial

    residuals = []
    for _ in range(5):
        poly = random_polynomial(spec.dim, 5, rng)
        z0 = 0.5 * domains.random_interior(spec, 1, rng)[0]
        rep = bergman.reproduce_check(model, poly, z0, samples=args.samples, seed=args.seed)
        residuals.append(rep.residual)
    results["reproduce_max_residual"] = float(max(residuals))
    _write_json(os.path.join(out, "kernel_check.json"), results)
    print(f"reproducing residual (5 polynomials): max {max(residuals):.3e}")
    return 0


def _cmd_berezin(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    mu = _resolve_measure(spec, args.measure, seed=args.seed)
    model = bergman.kernel_model(spec)
    config = carleson.CarlesonConfig(r=args.r, seed=args.seed, berezin_samples=args.samples)
    grid = carleson.build_grid(spec, config)
    zs = np.array([gp.point for gp in grid])
    estimates = bergman.berezin_many(model, mu, zs, samples=args.samples, seed=args.seed)
    header = ["index", "kind", "delta"] + [
        t for i in range(spec.dim) for t in (f"x{i+1}", f"y{i+1}")
    ] + ["value", "stderr"]
    rows = []
    for idx, (gp, est) in enumerate(zip(grid, estimates)):
        row = [str(idx), gp.kind, _fmt(gp.delta)]
        for i in range(spec.dim):
            row += [_fmt(gp.point[i].real), _fmt(gp.point[i].imag)]
        row += [_fmt(est.value), _fmt(est.stderr)]
        rows.append(row)
    carleson.write_csv(os.path.join(out, "berezin.csv"), header, rows)
    sup = float(max(e.value for e in estimates))
    _write_json(
        os.path.join(out, "berezin_summary.json"),
        {"config": _echo(args), "sup": sup, "points": len(grid)},
    )
    print(f"Berezin transform at {len(grid)} grid points: sup {sup:.6g}")
    return 0


def _cmd_carleson(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    mu = _resolve_measure(spec, args.measure, seed=args.seed)
    model = bergman.kernel_model(spec)
    config = carleson.CarlesonConfig(
        r=args.r,
        seed=args.seed,
        berezin_samples=args.samples,
        polynomial_degree=args.degree,
    )
    report = carleson.carleson_test(spec, model, mu, config)
    header, rows = carleson.report_point_rows(report)
    carleson.write_csv(os.path.join(out, "carleson_points.csv"), header, rows)
    header, rows = carleson.report_level_rows(report)
    carleson.write_csv(os.path.join(out, "carleson_levels.csv"), header, rows)
    summary = carleson.report_summary(report)
    summary["config_cli"] = _echo(args)
    _write_json(os.path.join(out, "carleson_summary.json"), summary)
    print(
        f"verdicts: berezin={report.berezin.verdict} geometric={report.geometric.verdict} "
        f"operator={report.operator.verdict}; C={report.constant_c:.6g} C_r={report.constant_cr:.6g}"
    )
    return 0


def _cmd_cover(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    result = carleson.kobayashi_cover(
        spec, args.r, seed=args.seed, candidates=args.samples,
        test_count=min(10000, args.samples),
    )
    header = [t for i in range(spec.dim) for t in (f"x{i+1}", f"y{i+1}")]
    rows = []
    for c in result.centers:
        row = []
        for i in range(spec.dim):
            row += [_fmt(c[i].real), _fmt(c[i].imag)]
        rows.append(row)
    carleson.write_csv(os.path.join(out, "cover_centers.csv"), header, rows)
    _write_json(
        os.path.join(out, "cover_summary.json"),
        {
            "config": _echo(args),
            "centers": len(result.centers),
            "level": result.level,
            "coverage": {
                "total": result.coverage.total,
                "certified": result.coverage.certified,
                "heuristic": result.coverage.heuristic,
                "uncovered": result.coverage.uncovered,
            },
        },
    )
    print(
        f"{len(result.centers)} centers; coverage {result.coverage.fraction:.1%} "
        f"({result.coverage.certified} certified, {result.coverage.heuristic} heuristic)"
    )
    return 0


def _cmd_decompose(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    gamma = sequences.sequence_from_csv(spec, args.points)
    parts = sequences.greedy_decompose(spec, gamma, args.r)
    sequences.decomposition_to_csv(gamma, parts, os.path.join(out, "decompose.csv"))
    seps = [sequences.separation(spec, part) for part in parts]
    _write_json(
        os.path.join(out, "decompose_summary.json"),
        {
            "config": _echo(args),
            "parts": len(parts),
            "part_sizes": [part.count for part in parts],
            "part_separations": [s if math.isfinite(s) else None for s in seps],
            "max_ball_count": sequences.max_count_in_ball(spec, args.r, gamma),
        },
    )
    print(f"{len(parts)} parts; sizes {[part.count for part in parts]}")
    return 0


def _cmd_pack(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    result = sequences.greedy_packing(
        spec, args.r, level_floor=args.level, seed=args.seed, candidates=args.samples
    )
    sequences.sequence_to_csv(result.sequence, os.path.join(out, "pack.csv"))
    sep = sequences.separation(spec, result.sequence)
    _write_json(
        os.path.join(out, "pack_summary.json"),
        {
            "config": _echo(args),
            "count": result.sequence.count,
            "separation": sep if math.isfinite(sep) else None,
            "exhausted": result.exhausted,
        },
    )
    print(f"packed {result.sequence.count} points; separation {sep:.6g}")
    return 0


def _cmd_thm42(args) -> int:
    spec = domains.load_spec(args.domain)
    out = _outdir(args)
    if args.points:
        gamma = sequences.sequence_from_csv(spec, args.points, label="loaded")
    else:
        gamma = sequences.greedy_packing(
            spec, args.sep, level_floor=0.02, seed=args.seed
        ).sequence
    model = bergman.kernel_model(spec)
    config = carleson.CarlesonConfig(
        r=args.r, seed=args.seed, berezin_samples=args.samples,
        polynomial_degree=args.degree,
    )
    report = sequences.thm42_pipeline(spec, model, gamma, config)
    summary = carleson.report_summary(report.carleson)
    summary["config_cli"] = _echo(args)
    summary["sequence"] = {
        "count": gamma.count,
        "separation": report.separation if math.isfinite(report.separation) else None,
        "parts": report.part_count,
        "max_ball_count": report.max_ball_count,
    }
    summary["statement3"] = {
        "kernel_sup": report.statement3_kernel_sup,
        "poly_sup": report.statement3_poly_sup,
    }
    summary["verdicts_agree"] = report.verdicts_agree
    _write_json(os.path.join(out, "thm42_summary.json"), summary)
    header, rows = carleson.report_level_rows(report.carleson)
    carleson.write_csv(os.path.join(out, "thm42_levels.csv"), header, rows)
    print(
        f"|Gamma|={gamma.count} sep={report.separation:.4g} parts={report.part_count}; "
        f"verdict (2) {report.carleson.berezin.verdict}, (3) {report.carleson.geometric.verdict}"
    )
    return 0


_COMMANDS = {
    "domain-info": _cmd_domain_info,
    "frame": _cmd_frame,
    "kernel-check": _cmd_kernel_check,
    "berezin": _cmd_berezin,
    "carleson": _cmd_carleson,
    "cover": _cmd_cover,
    "decompose": _cmd_decompose,
    "pack": _cmd_pack,
    "thm42": _cmd_thm42,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
        return _COMMANDS[args.command](args)
    except (InputError, ConfigError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericError, ResourceError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except CarlesonLabError as exc:  # any stragglers in the hierarchy
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
