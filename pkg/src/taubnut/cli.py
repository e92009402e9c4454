"""Command-line interface.

Exit codes: 0 on success, 1 when a verification check fails, 2 on
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import asymptotics, integrals
from .config import InstantonConfig, preset, preset_names
from .errors import TaubnutError
from .report import DEFAULT_SEED
from .suite import CHECK_NAMES, run_suite
from . import backend

ENV_WORKERS = "TAUBNUT_WORKERS"

PLOT_QUANTITIES = (
    "riem_decay",
    "metric_deviation",
    "mass_convergence",
    "fiber_length",
    "volume_growth",
)


def _add_config_args(p):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--preset", default=None,
                     help="named configuration (default: taub-nut); see preset-list")
    grp.add_argument("--config", default=None, metavar="FILE",
                     help="JSON file with m, centers, exclusion_radius")


def _add_seed_arg(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="seed for sample-point draws (default %d)" % DEFAULT_SEED)


def _parse_radii(text):
    try:
        radii = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise TaubnutError("could not parse radii list %r" % text)
    if not radii:
        raise TaubnutError("empty radii list")
    return radii


def _resolve_config(args):
    if args.config is not None:
        cfg = InstantonConfig.load(args.config)
    else:
        cfg = preset(args.preset or "taub-nut")
    control = getattr(args, "negative_control", None)
    if control == "perturbed-connection":
        cfg = cfg.with_perturbed_connection()
    elif control == "unequal-mass":
        cfg = cfg.with_unequal_masses()
    return cfg


def _resolve_workers(args):
    if getattr(args, "workers", None) is not None:
        return max(1, args.workers)
    env = os.environ.get(ENV_WORKERS)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise TaubnutError("%s must be an integer, got %r" % (ENV_WORKERS, env))
    return 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="taubnut",
        description="Construct multi-Taub-NUT instantons and verify their claimed "
                    "identities numerically.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("describe", help="print the resolved configuration")
    _add_config_args(d)

    v = sub.add_parser("verify", help="run the verification suite")
    _add_config_args(v)
    _add_seed_arg(v)
    v.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply every tolerance by this factor")
    v.add_argument("--workers", type=int, default=None,
                   help="thread count (default: $%s or 1)" % ENV_WORKERS)
    v.add_argument("--out", default=None, metavar="FILE",
                   help="write the deterministic JSON report here")
    v.add_argument("--checks", default=None,
                   help="comma-separated subset of check names")
    v.add_argument("--negative-control", default=None,
                   choices=("perturbed-connection", "unequal-mass"),
                   help="verify a deliberately broken variant (expected to fail)")
    v.add_argument("--mass-radii", default=None, metavar="R1,R2,...",
                   help="override the boundary-mass radius schedule")

    f = sub.add_parser("flux", help="fluxes and Chern numbers of the circle bundle")
    _add_config_args(f)
    f.add_argument("--radius", type=float, default=None,
                   help="override the enclosing-sphere radius")

    m = sub.add_parser("mass", help="boundary mass estimates and their limit")
    _add_config_args(m)
    m.add_argument("--radii", default=None, metavar="R1,R2,...",
                   help="radius schedule (default: 8,16,32,64 times the scale)")

    dec = sub.add_parser("decay", help="fit a far-field decay exponent")
    _add_config_args(dec)
    _add_seed_arg(dec)
    dec.add_argument("--quantity", default="riem_norm", choices=asymptotics.QUANTITIES)
    dec.add_argument("--radii", default=None, metavar="R1,R2,...")

    vol = sub.add_parser("volume", help="volume of the tube over a ball")
    _add_config_args(vol)
    vol.add_argument("--radii", default=None, metavar="R1,R2,...")

    fib = sub.add_parser("fiber-length", help="circle-fiber lengths along a ray")
    _add_config_args(fib)
    fib.add_argument("--radii", default=None, metavar="R1,R2,...")

    pd = sub.add_parser("plot-data", help="radius,value series as CSV")
    _add_config_args(pd)
    _add_seed_arg(pd)
    pd.add_argument("--quantity", required=True, choices=PLOT_QUANTITIES)
    pd.add_argument("--radii", default=None, metavar="R1,R2,...")
    pd.add_argument("--out", default=None, metavar="FILE")

    sub.add_parser("preset-list", help="list the named configurations")
    return p


# ---- subcommand bodies --------------------------------------------------


def _cmd_describe(args):
    cfg = _resolve_config(args)
    print("k (centers):       %d" % cfg.k)
    print("m (mass):          %.17g" % cfg.m)
    print("fiber period L:    %.17g  (8 pi m)" % cfg.fiber_period)
    print("exclusion radius:  %.3g" % cfg.exclusion_radius)
    print("diameter:          %.17g" % cfg.diameter)
    print("scale:             %.17g" % cfg.scale)
    print("backend:           %s" % backend.active_name())
    if cfg.k:
        for i, c in enumerate(cfg.centers_array):
            extra = ""
            if cfg.is_debug:
                extra = "  mass %.6g  connection scale %.6g" % (
                    cfg.masses_array[i], cfg.strengths_array[i] / cfg.masses_array[i])
            print("center %d:          (%.6g, %.6g, %.6g)%s" % (i, c[0], c[1], c[2], extra))
    else:
        print("centers:           none (flat R^3 x S^1)")
    return 0


def _cmd_verify(args):
    cfg = _resolve_config(args)
    checks = None
    if args.checks:
        checks = [tok.strip() for tok in args.checks.split(",") if tok.strip()]
    mass_radii = _parse_radii(args.mass_radii) if args.mass_radii else None
    rep = run_suite(cfg, seed=args.seed, tol_scale=args.tol_scale,
                    workers=_resolve_workers(args), checks=checks,
                    mass_radii=mass_radii)
    print(rep.format_table())
    for c in rep.failures:
        print("FAIL %s: %s" % (c.name, c.detail))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rep.to_json_text())
        print("report written to %s" % args.out)
    return 0 if rep.verdict == "pass" else 1


def _cmd_flux(args):
    cfg = _resolve_config(args)
    print("%-28s %16s %12s" % ("sphere", "flux", "flux / L"))
    total = 0.0
    for i in range(cfg.k):
        r = integrals.small_sphere_radius(cfg, i)
        f = integrals.flux(cfg, cfg.centers_array[i], r)
        total += f
        print("%-28s %16.9f %12.6f" % ("center %d (r = %.3g)" % (i, r), f, f / cfg.fiber_period))
    R = args.radius if args.radius is not None else integrals.large_sphere_radius(cfg)
    f = integrals.flux(cfg, None, R)
    print("%-28s %16.9f %12.6f" % ("all centers (R = %.3g)" % R, f, f / cfg.fiber_period))
    if cfg.k:
        print("sum over centers: %16.9f   (additivity gap %.3e)" % (total, abs(f - total)))
    return 0


def _cmd_mass(args):
    cfg = _resolve_config(args)
    radii = _parse_radii(args.radii) if args.radii else None
    res = integrals.mass(cfg, radii=radii)
    print("%-12s %18s" % ("radius", "mass estimate"))
    for r, e in zip(res.radii, res.estimates):
        print("%-12.4g %18.12f" % (r, e))
    target = float(np.sum(cfg.masses_array)) if cfg.k else 0.0
    print("extrapolated limit: %.12f   (k m = %.12f)" % (res.limit, target))
    return 0


def _cmd_decay(args):
    cfg = _resolve_config(args)
    radii = _parse_radii(args.radii) if args.radii else None
    samples = asymptotics.decay_samples(cfg, args.quantity, radii, seed=args.seed)
    print("%-12s %18s" % ("radius", "sup on sphere"))
    for s in samples:
        print("%-12.6g %18.9e" % (s.radius, s.value))
    if cfg.k == 0:
        print("flat configuration: expected to vanish identically, no fit")
        return 0
    fit = asymptotics.fit_exponent(samples)
    print("fitted exponent: %.4f  (max log residual %.2e)" % (fit.slope, fit.residual))
    return 0


def _cmd_volume(args):
    cfg = _resolve_config(args)
    if args.radii:
        radii = _parse_radii(args.radii)
    else:
        radii = tuple(f * cfg.scale for f in (16.0, 32.0, 64.0))
    want = 4.0 * math.pi / 3.0 * cfg.fiber_period
    print("%-12s %18s %14s" % ("radius", "volume", "vol / R^3"))
    for r in radii:
        v = integrals.tube_volume(cfg, r)
        print("%-12.4g %18.6e %14.6f" % (r, v, v / r**3))
    print("cubic coefficient target: %.6f  (4 pi / 3 times L)" % want)
    return 0


def _cmd_fiber_length(args):
    cfg = _resolve_config(args)
    if args.radii:
        radii = _parse_radii(args.radii)
    else:
        radii = tuple((2.0 ** j) * cfg.scale for j in range(9))
    print("%-12s %16s" % ("radius", "fiber length"))
    for r in radii:
        x = cfg.centroid + np.array([r, 0.0, 0.0])
        print("%-12.4g %16.9f" % (r, integrals.fiber_length(cfg, x)))
    print("limit L = 8 pi m = %.9f" % cfg.fiber_period)
    return 0


def _plot_rows(cfg, args):
    radii = _parse_radii(args.radii) if args.radii else None
    q = args.quantity
    if q in ("riem_decay", "metric_deviation"):
        quantity = "riem_norm" if q == "riem_decay" else "metric_deviation"
        return [(s.radius, s.value)
                for s in asymptotics.decay_samples(cfg, quantity, radii, seed=args.seed)]
    if q == "mass_convergence":
        res = integrals.mass(cfg, radii=radii)
        rows = list(zip(res.radii, res.estimates))
        rows.append((math.inf, res.limit))
        return rows
    if q == "fiber_length":
        if radii is None:
            radii = tuple((2.0 ** j) * cfg.scale for j in range(9))
        return [(r, integrals.fiber_length(cfg, cfg.centroid + np.array([r, 0.0, 0.0])))
                for r in radii]
    if radii is None:
        radii = tuple(f * cfg.scale for f in (4.0, 8.0, 16.0, 32.0, 64.0))
    return [(r, integrals.tube_volume(cfg, r) / r**3) for r in radii]


def _cmd_plot_data(args):
    cfg = _resolve_config(args)
    rows = _plot_rows(cfg, args)
    lines = ["radius,value"]
    lines += ["%.17g,%.17g" % (r, v) for r, v in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_preset_list(args):
    for name in preset_names():
        if "<" in name:
            print("%-12s %s" % (name, "k equal-mass centers on a line (ak2, ak3, ...)"))
            continue
        cfg = preset(name)
        if cfg.k:
            shape = "%d center%s" % (cfg.k, "s" if cfg.k > 1 else "")
        else:
            shape = "flat R^3 x S^1"
        print("%-12s m = %-6g %s" % (name, cfg.m, shape))
    return 0


_COMMANDS = {
    "describe": _cmd_describe,
    "verify": _cmd_verify,
    "flux": _cmd_flux,
    "mass": _cmd_mass,
    "decay": _cmd_decay,
    "volume": _cmd_volume,
    "fiber-length": _cmd_fiber_length,
    "plot-data": _cmd_plot_data,
    "preset-list": _cmd_preset_list,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TaubnutError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
