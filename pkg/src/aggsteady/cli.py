"""Command-line interface: ``aggsteady <command> [options]``.

Commands
  construct   radial profile of a steady state (CSV "r,rho" or JSON)
  verify      Euler-Lagrange report of a constructed state
  energy      multiplier, interaction energy and delta-pair competitor
  sweep       one row per b (or per a) with R, E, E_delta, rho(0), valid
  particles   gradient-descent particle oracle versus the continuum radius
  identities  identity, principal-value and inversion-formula suites

Exit codes: 0 success, 1 runtime or verification failure, 2 parameters
outside the supported region.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import steady1d, steadyhd, verify
from .config import DEFAULTS, RTOL_ENV
from .kernel import PowerLawKernel
from .specfun import DomainError

EXIT_OK, EXIT_FAIL, EXIT_RANGE = 0, 1, 2

REGIONS = (
    "supported regions: d=1 with b=2 and 2<a<3; d=1 with a=2 and -1<b<2 "
    "(c>0 only for b<1); a=2k even with -d < b < min(a, b_max(a, d)), "
    "b_max = ((3-d)a-10+7d-d^2)/(a+d-3)"
)


class OutOfRegion(Exception):
    pass


def build_state(a, b, d, mass=1.0, c=0.0):
    """Dispatch to the explicit 1D branches or the even-a construction."""
    try:
        if d == 1 and b == 2.0:
            if c:
                raise OutOfRegion("the c-family exists for a = 2 only")
            return steady1d.construct_b2(a, mass)
        if d == 1 and a == 2.0:
            return steady1d.construct_a2(b, c, mass)
        if c:
            raise OutOfRegion("the c-family exists for d = 1, a = 2 only")
        k = a / 2.0
        if k != int(k) or k < 1:
            raise OutOfRegion(f"a={a} is not a supported exponent")
        return steadyhd.construct_hd(int(k), b, d, mass)
    except DomainError as exc:
        raise OutOfRegion(str(exc)) from exc


def state_header(state, args):
    if isinstance(state, steadyhd.SteadyStateHD):
        A = list(state.A)
        M = list(state.M.values)
    else:
        A = [float(cf) for cf, _ in state.density.terms]
        M = [state.M0, steady1d.rescaled_moment(state, 2)]
    return {
        "a": float(state.a), "b": float(state.b), "d": int(state.d), "R": float(state.R),
        "A": [float(x) for x in A], "M": [float(x) for x in M], "E": float(state.E),
        "valid": bool(state.valid), "mass": float(state.M0), "c": float(args.c),
        "samples": int(args.samples), "rel_tol": DEFAULTS.rel_tol,
    }


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows, fields):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def cmd_construct(args):
    state = build_state(args.a, args.b, args.d, args.mass, args.c)
    header = state_header(state, args)
    r = np.linspace(0.0, state.R, args.samples)
    rho = np.asarray(state(r), dtype=float)
    if args.format == "json":
        text = json.dumps({**header, "r": r.tolist(), "rho": [float(v) for v in rho]}) + "\n"
    else:
        lines = ["# " + json.dumps(header), "r,rho"]
        lines += [f"{ri!r},{vi!r}" for ri, vi in zip(r.tolist(), rho.tolist())]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def read_profile(path):
    """Header dict and (r, rho) arrays from a CSV written by ``construct``."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError("missing '#' JSON header line")
        header = json.loads(first[1:])
        data = np.loadtxt(fh, delimiter=",", skiprows=1, ndmin=2)
    return header, data[:, 0], data[:, 1]


def cmd_verify(args):
    if args.profile:
        header, _, _ = read_profile(args.profile)
        state = build_state(header["a"], header["b"], header["d"], header["mass"], header["c"])
    else:
        state = build_state(args.a, args.b, args.d, args.mass, args.c)
    rep = verify.euler_lagrange_report(state)
    out = {
        "interior_constancy": rep.interior_constancy, "exterior_min_gap": rep.exterior_min_gap,
        "mass_error": float(rep.mass_error), "energy": rep.energy, "lagrange_E": rep.lagrange_E,
        "energy_error": rep.energy_error, "density_nonnegative": rep.density_nonnegative,
        "valid": rep.valid, "notes": list(rep.notes),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK if rep.valid else EXIT_FAIL


def _delta_energy(a, b, d, mass):
    if d != 1 or a <= 0 or b <= 0:
        return None
    return float(0.5 * mass * PowerLawKernel(a, b, 1, mass)(1.0))


def cmd_energy(args):
    state = build_state(args.a, args.b, args.d, args.mass, args.c)
    from .quadrature import interaction_energy

    energy = float(interaction_energy(state.density, state.kernel))
    out = {"E": float(state.E), "energy": energy, "energy_per_mass": energy / state.M0,
           "E_delta": _delta_energy(args.a, args.b, args.d, args.mass)}
    if out["E_delta"] is not None:
        out["below_delta"] = out["E"] < out["E_delta"]
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


SWEEP_FIELDS = ["a", "b", "R", "E", "E_delta", "rho_at_0", "valid", "status"]


def sweep_rows(a_values, b_values, d, mass=1.0, c=0.0):
    rows = []
    for a in a_values:
        for b in b_values:
            row = dict.fromkeys(SWEEP_FIELDS)
            row.update(a=float(a), b=float(b), E_delta=_delta_energy(a, b, d, mass))
            try:
                st = build_state(float(a), float(b), d, mass, c)
            except OutOfRegion as exc:
                row["status"] = f"out_of_region: {exc}"
                rows.append(row)
                continue
            rho0 = st.rho_at_origin if hasattr(st, "rho_at_origin") else float(st(0.0))
            row.update(R=st.R, E=st.E, rho_at_0=float(rho0), valid=st.valid, status="ok")
            rows.append(row)
    return rows


def cmd_sweep(args):
    def grid(lo, hi, fixed):
        if lo is None or hi is None:
            return [fixed]
        return np.linspace(lo, hi, args.steps).tolist() if args.steps > 0 else []

    a_values = grid(args.a_min, args.a_max, args.a)
    b_values = grid(args.b_min, args.b_max, args.b)
    rows = sweep_rows(a_values, b_values, args.d, args.mass, args.c)
    if args.format == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        text = _rows_to_csv(rows, SWEEP_FIELDS)
    _emit(text, args.out)
    return EXIT_OK


def cmd_particles(args):
    kernel = PowerLawKernel(args.a, args.b, args.d, args.mass)
    conf = verify.particle_descent(kernel, args.n, seed=args.seed, max_iters=args.steps)
    try:
        R = build_state(args.a, args.b, args.d, args.mass).R
    except OutOfRegion:
        R = None
    radius = conf.radius()
    pos = conf.positions
    span = float(np.max(np.linalg.norm(pos[:, None] - pos[None], axis=2)))
    out = {"N": args.n, "empirical_radius": radius, "continuum_R": R,
           "relative_error": None if R is None else abs(radius - R) / R,
           "iterations": conf.iterations, "final_max_force": conf.max_force,
           "max_separation": span, "converged": conf.converged, "seed": args.seed}
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK if conf.converged else EXIT_FAIL


def cmd_identities(args):
    rows = verify.identity_suite(args.nu, args.R, fault=args.inject_fault)
    if args.nu is None:
        rows += verify.pv_suite(fault=args.inject_fault)
        rows += verify.general_formula_suite()
    worst = {}
    for r in rows:
        if r.identity not in worst or r.rel_error > worst[r.identity].rel_error:
            worst[r.identity] = r
    failed = False
    for name, r in worst.items():
        ok = r.rel_error < 1e-7
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'} {name:22s} max_rel_error={r.rel_error:.3e}"
              + ("" if ok else f" at {r.params}"))
    if args.nu is not None:
        for r in rows:
            print(f"{r.identity} nu={r.params['nu']} R={r.params['R']} x={r.params['x']}: "
                  f"value={r.value:.15g} exact={r.exact:.15g}")
    return EXIT_FAIL if failed else EXIT_OK


def make_parser():
    p = argparse.ArgumentParser(
        prog="aggsteady", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"Default relative tolerance {DEFAULTS.rel_tol:g} (override with ${RTOL_ENV}).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, a=4.0, b=0.5, d=2):
        sp.add_argument("--a", type=float, default=a, help="attractive exponent (default %(default)s)")
        sp.add_argument("--b", type=float, default=b, help="repulsive exponent (default %(default)s)")
        sp.add_argument("--d", type=int, default=d, help="dimension (default %(default)s)")
        sp.add_argument("--mass", type=float, default=1.0, help="total mass M0 (default %(default)s)")
        sp.add_argument("--c", type=float, default=0.0,
                        help="weight of the singular component, d=1, a=2 (default %(default)s)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default %(default)s)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--samples", type=int, default=DEFAULTS.profile_points,
                        help="profile grid points on [0, R] (default %(default)s)")

    sp = sub.add_parser("construct", help="write a density profile")
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="Euler-Lagrange report")
    common(sp)
    sp.add_argument("--profile", default=None, help="re-verify a profile written by construct")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("energy", help="energy and delta-pair comparison")
    common(sp, a=2.5, b=2.0, d=1)
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("sweep", help="table over a grid of b (or a)")
    common(sp)
    sp.add_argument("--b-min", type=float, default=None)
    sp.add_argument("--b-max", type=float, default=None)
    sp.add_argument("--a-min", type=float, default=None)
    sp.add_argument("--a-max", type=float, default=None)
    sp.add_argument("--steps", type=int, default=11, help="grid points (default %(default)s)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("particles", help="particle gradient-descent oracle")
    common(sp)
    sp.add_argument("--n", type=int, default=400, help="number of particles (default %(default)s)")
    sp.add_argument("--seed", type=int, default=0, help="random seed (default %(default)s)")
    sp.add_argument("--steps", type=int, default=20000, help="maximum iterations (default %(default)s)")
    sp.set_defaults(func=cmd_particles)

    sp = sub.add_parser("identities", help="identity and principal-value suites")
    sp.add_argument("--nu", type=float, default=None, help="run the 1D identities at this nu only")
    sp.add_argument("--R", type=float, default=None, help="radius for --nu runs")
    sp.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_identities)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    if getattr(args, "samples", 2) < 2:
        print("error: --samples must be at least 2", file=sys.stderr)
        return EXIT_RANGE
    try:
        return args.func(args)
    except OutOfRegion as exc:
        print(f"error: {exc}\n{REGIONS}", file=sys.stderr)
        return EXIT_RANGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (ArithmeticError, FloatingPointError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
