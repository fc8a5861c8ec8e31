"""Batch front end.

``giantscope <subcommand> [flags]``; flags may also come from a key-value
config file (``--config FILE``, lines ``key = value``), with command-line
flags taking precedence.  Exit status: 0 success, 2 invalid input, 1 failed
internal check.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import exact as exact_mod
from . import limits, rates, variational
from .exploration import DIRECT_MAX_N, GraphParams, spectrum_sampler
from .reporting import metadata, write_csv, write_json, write_svg
from .seeding import mix64, reseed

__all__ = ["main", "ValidationError", "CheckFailure"]


class ValidationError(ValueError):
    """Bad user input; exit status 2."""


class CheckFailure(RuntimeError):
    """An internal consistency check failed; exit status 1."""


# ---------------------------------------------------------------------------
# parameter parsing


def _floats(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None


def _grid(text):
    parts = str(text).split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be lo:hi:step")
    try:
        lo, hi, step = (float(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not (step > 0 and hi >= lo):
        raise argparse.ArgumentTypeError("grid needs step > 0 and hi >= lo")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    if count > 10_000_000:
        raise argparse.ArgumentTypeError("grid has too many points")
    return tuple(lo + k * step for k in range(count))


def _flag(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


# name -> (type, help)
FLAGS = {
    "n": (int, "vertex count"),
    "c": (_floats, "edge intensity c (comma list for phase)"),
    "p": (float, "edge probability (alternative to --c)"),
    "theta": (float, "drift parameter"),
    "a": (float, "component count density"),
    "u": (_floats, "comma list of sizes"),
    "r": (_floats, "comma list of excess densities"),
    "grid": (_grid, "evaluation grid lo:hi:step"),
    "reps": (int, "Monte Carlo replications"),
    "seed": (int, "master seed"),
    "out": (str, "output directory"),
    "tol": (float, "tolerance of internal checks"),
    "fn": (str, "rate function name"),
    "method": (str, "sampler: explore or direct"),
    "N": (int, "trajectory grid points"),
    "s": (float, "excursion start"),
    "t": (float, "excursion end"),
    "w": (float, "excursion area"),
    "tau": (float, "flat measure of the regulator"),
    "dt": (float, "time step of the limit process"),
    "T": (float, "horizon of the limit process"),
}
SWITCHES = ("svg", "seedless")

COMMANDS = {
    "simulate": dict(
        keys={"n", "c", "p", "reps", "seed", "out", "method", "seedless"},
        defaults={"reps": 1, "method": "explore", "out": "."},
        help="exploration Monte Carlo; spectrum CSV",
    ),
    "exact": dict(
        keys={"n", "c", "p", "out", "seedless"},
        defaults={"out": "."},
        help="exact law by enumeration (n <= 8); JSON",
    ),
    "rates": dict(
        keys={"fn", "c", "grid", "a", "u", "r", "theta", "tol", "out", "seedless"},
        defaults={"out": ".", "tol": 1e-6},
        help="a rate function on a grid; CSV",
    ),
    "phase": dict(
        keys={"c", "grid", "out", "svg", "seedless"},
        defaults={"c": [3.0], "grid": _grid("0:1:0.005"), "out": ".", "svg": False},
        help="phase points and count-rate curves; JSON, CSV, SVG",
    ),
    "traj": dict(
        keys={"c", "s", "t", "w", "a", "tau", "theta", "N", "tol", "out", "seedless"},
        defaults={
            "c": [2.0], "s": 0.1, "t": 0.7, "w": 0.05, "a": 0.25, "tau": 0.6,
            "theta": 0.5, "N": 4096, "tol": 1e-4, "out": ".",
        },
        help="optimal trajectories with quadrature cross-checks",
    ),
    "critical": dict(
        keys={"theta", "reps", "seed", "dt", "T", "n", "grid", "out", "svg"},
        defaults={"theta": 2.0, "reps": 1000, "dt": 1e-3, "out": ".", "svg": False},
        help="critical-window limit process and its rate curve",
    ),
    "clt-check": dict(
        keys={"n", "c", "theta", "reps", "seed", "out"},
        defaults={"n": 100_000, "c": [2.0], "theta": 0.0, "reps": 10_000, "out": "."},
        help="empirical fluctuations against the Gaussian limit",
    ),
    "beta-ldp": dict(
        keys={"c", "grid", "tol", "out", "svg", "seedless"},
        defaults={"c": [3.0], "grid": _grid("0:1:0.002"), "tol": 1e-9, "out": ".", "svg": False},
        help="largest-component rate curve with the block-form cross-check",
    ),
}
RANDOM_COMMANDS = {"simulate", "critical", "clt-check"}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="giantscope",
        description="Components of sparse random graphs G(n, c/n): simulation, "
        "exact laws, rate functions and limit checks.",
    )
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    for name, spec in COMMANDS.items():
        sp = sub.add_parser(name, help=spec["help"], description=spec["help"])
        sp.add_argument("--config", default=None, help="key = value config file")
        for key in sorted(spec["keys"]):
            if key in SWITCHES:
                sp.add_argument(f"--{key}", action="store_const", const=True, default=None)
            else:
                typ, hlp = FLAGS[key]
                sp.add_argument(f"--{key}", type=typ, default=None, help=hlp)
    return parser


def _read_config(path, command):
    spec = COMMANDS[command]
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{num}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-")
        if key not in spec["keys"]:
            raise ValidationError(f"{path}:{num}: unknown key {key!r} for {command}")
        try:
            out[key] = _flag(value) if key in SWITCHES else FLAGS[key][0](value)
        except argparse.ArgumentTypeError as exc:
            raise ValidationError(f"{path}:{num}: {exc}") from None
        except ValueError:
            raise ValidationError(f"{path}:{num}: bad value for {key}") from None
    return out


def resolve(argv):
    """Parse ``argv`` into ``(command, params)``; config < flags."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        raise ValidationError("no subcommand given")
    spec = COMMANDS[args.command]
    params = dict(spec["defaults"])
    if args.config:
        params.update(_read_config(args.config, args.command))
    for key in spec["keys"]:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return args.command, params


# ---------------------------------------------------------------------------
# validation helpers


def _need(params, *keys):
    for key in keys:
        if params.get(key) is None:
            raise ValidationError(f"--{key} is required")


def _single_c(params, required=True):
    c = params.get("c")
    if c is None:
        if required:
            raise ValidationError("--c is required")
        return None
    if len(c) != 1:
        raise ValidationError("--c takes a single value here")
    if not (c[0] > 0 and math.isfinite(c[0])):
        raise ValidationError("c must be a positive finite real")
    return c[0]


def _graph(params):
    _need(params, "n")
    n = params["n"]
    if n < 1:
        raise ValidationError("n must be >= 1")
    if params.get("p") is not None and params.get("c") is not None:
        raise ValidationError("give --c or --p, not both")
    if params.get("p") is not None:
        if not 0 <= params["p"] <= 1:
            raise ValidationError("p must lie in [0, 1]")
        return GraphParams.from_p(n, params["p"])
    c = params.get("c")
    if c is None:
        raise ValidationError("--c or --p is required")
    if len(c) != 1 or c[0] < 0:
        raise ValidationError("c must be a single non-negative value")
    return GraphParams(n, c[0])


def _seed(command, params):
    if params.get("seedless"):
        if command in RANDOM_COMMANDS:
            raise ValidationError(f"{command} draws random numbers; --seedless not allowed")
        return
    if command in RANDOM_COMMANDS:
        _need(params, "seed")
        if not 0 <= params["seed"] < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")


def _outdir(params):
    out = params["out"]
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise ValidationError(f"output directory {out} is not writable")
    return out


def _echo(params):
    skip = {"grid"}
    echo = {k: v for k, v in params.items() if k not in skip and v is not None}
    if params.get("grid") is not None:
        g = params["grid"]
        echo["grid"] = f"{g[0]!r}:{g[-1]!r}:{len(g)} points"
    return echo


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(params):
    gp = _graph(params)
    reps = params["reps"]
    if reps < 1:
        raise ValidationError("reps must be >= 1")
    method = params["method"]
    if method not in ("explore", "direct"):
        raise ValidationError("method must be explore or direct")
    if method == "direct" and gp.n > DIRECT_MAX_N:
        raise ValidationError(f"direct sampling is limited to n <= {DIRECT_MAX_N}")
    out = _outdir(params)
    meta = metadata("simulate", _echo(params))
    kernel = spectrum_sampler(method)
    bg = np.random.PCG64(0)
    rng = np.random.Generator(bg)
    sizes = np.empty(gp.n, dtype=np.int64)
    excess = np.empty(gp.n, dtype=np.int64)
    shape_counts = {}
    rows, summary = [], []
    for rep in range(reps):
        reseed(bg, mix64(params["seed"], rep))
        k = kernel(rng, gp.n, gp.p, sizes, excess)
        pairs = sorted(zip(sizes[:k].tolist(), excess[:k].tolist()), reverse=True)
        if sum(s for s, _ in pairs) != gp.n:
            raise CheckFailure("component sizes do not add up to n")
        for rank, (s, e) in enumerate(pairs, 1):
            rows.append((rep, rank, s, e))
        summary.append((rep, k, pairs[0][0], pairs[0][1]))
        key = (k, tuple(s for s, _ in pairs))
        shape_counts[key] = shape_counts.get(key, 0) + 1
    write_csv(os.path.join(out, "spectra.csv"), ("replication", "rank", "size", "excess"), rows, meta)
    write_csv(
        os.path.join(out, "spectra_summary.csv"),
        ("replication", "count", "largest", "largest_excess"),
        summary,
        meta,
    )
    law = {k: v / reps for k, v in shape_counts.items()}
    doc = {
        "reps": reps,
        "mean_count": math.fsum(r[1] for r in summary) / reps,
        "mean_largest": math.fsum(r[2] for r in summary) / reps,
        "shape_law": [
            {"count": k[0], "sizes": list(k[1]), "prob": v} for k, v in sorted(law.items())
        ],
    }
    if gp.n <= exact_mod.MAX_N:
        ref = exact_mod.enumerate_exact(gp.n, gp.p).shape_law()
        doc["tv_to_exact"] = exact_mod.tv_distance(law, ref)
    write_json(os.path.join(out, "simulate.json"), doc, meta)
    print(f"simulate: {reps} replications written to {out}")
    if "tv_to_exact" in doc:
        print(f"tv distance to exact law: {doc['tv_to_exact']:.6f}")


def cmd_exact(params):
    gp = _graph(params)
    if gp.n > exact_mod.MAX_N:
        raise ValidationError(f"exact enumeration supports n <= {exact_mod.MAX_N}")
    out = _outdir(params)
    meta = metadata("exact", _echo(params))
    dist = exact_mod.enumerate_exact(gp.n, gp.p)
    total = math.fsum(dist.table.values())
    if abs(total - 1) > 1e-12:
        raise CheckFailure(f"probabilities sum to {total}")
    path = os.path.join(out, f"exact_n{gp.n}.json")
    dist.to_json(path, meta=meta)
    print(f"exact: {len(dist.table)} keys, E[count] = {dist.expectation(lambda k: k[0]):.12g}")


# name -> (argument column, needs c, domain (lo, hi), evaluator(x, params))
def _rate_table():
    def with_check(fn):
        def run(x, p):
            try:
                return fn(x, p)
            except rates.SolverDisagreement as exc:
                raise CheckFailure(str(exc)) from None

        return run

    r0 = lambda p: (p.get("r") or [0.0])[0]
    return {
        "pi": ("x", False, (0, math.inf), lambda x, p: rates.pi_fn(x)),
        "k_rho": ("u", True, (0, 1), lambda x, p: rates.k_rho(x, p["c"])),
        "l_c": ("u", True, (0, 1), lambda x, p: rates.l_c(x, p["c"])),
        "k_star": ("u", True, (0, 1), with_check(lambda x, p: _k_star_checked(x, r0(p), p))),
        "i_alpha": ("a", True, (0, 1), lambda x, p: rates.i_alpha(x, p["c"])),
        "tau_star": ("a", True, (0, 1), lambda x, p: rates.tau_star(x, p["c"])),
        "i_beta": ("u", True, (0, 1), lambda x, p: rates.i_beta(x, p["c"])),
        "i_beta_gamma": ("u", True, (0, 1), lambda x, p: rates.i_beta_gamma(x, r0(p), p["c"])),
        "i_alpha_beta_gamma": (
            "u", True, (0, 1), lambda x, p: rates.i_alpha_beta_gamma(p["a"], x, r0(p), p["c"])
        ),
        "stepanov_S": ("lambda", True, (-math.inf, math.inf), lambda x, p: rates.stepanov_S(x, p["c"])),
        "breve_i_beta": ("u", False, (0, math.inf), lambda x, p: rates.breve_i_beta(x, p["theta"])),
    }


def _k_star_checked(u, r, p):
    value = rates.k_star(u, r, p["c"])
    if r > 0 and u > 0:
        ref = rates._k_star_scan(u, r, p["c"])
        if abs(ref - value) > p["tol"] * max(1.0, abs(value)):
            raise CheckFailure(f"k_star solve {value} disagrees with grid scan {ref}")
    return value


LIST_RATES = ("i_U", "i_UR", "i_joint", "breve_i_U", "breve_i_UR", "breve_i_alpha_UR")


def cmd_rates(params):
    _need(params, "fn")
    fn = params["fn"]
    table = _rate_table()
    if fn not in table and fn not in LIST_RATES:
        names = ", ".join(sorted(list(table) + list(LIST_RATES)))
        raise ValidationError(f"unknown function {fn!r}; choose from {names}")
    needs_theta = fn.startswith("breve")
    if needs_theta:
        _need(params, "theta")
    else:
        params["c_value"] = _single_c(params, required=fn != "pi")
    p = dict(params)
    p["c"] = params.get("c_value")
    if p.get("r") and any(x < 0 for x in p["r"]):
        raise ValidationError("excess densities must be non-negative")
    if fn == "i_alpha_beta_gamma":
        _need(params, "a")
    out = _outdir(params)
    params.pop("c_value", None)
    meta = metadata("rates", _echo(params))
    path = os.path.join(out, f"rates_{fn}.csv")
    if fn in LIST_RATES:
        _need(params, "u")
        u, r = params["u"], params.get("r") or []
        try:
            rates.SpectrumQuery(u, r, params.get("a"))
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        if fn == "i_U":
            value = rates.i_U(u, p["c"])
        elif fn == "i_UR":
            value = rates.i_UR(u, r, p["c"])
        elif fn == "i_joint":
            _need(params, "a")
            value = rates.i_joint(rates.SpectrumQuery(u, r, params["a"]), p["c"])
        elif fn == "breve_i_U":
            value = rates.breve_i_U(u, params["theta"])
        elif fn == "breve_i_UR":
            value = rates.breve_i_UR(u, r, params["theta"])
        else:
            _need(params, "a")
            value = rates.breve_i_alpha_UR(params["a"], u, r, params["theta"])
        write_csv(path, ("u", "r", "a", "value"), [(list(u), list(r), params.get("a", ""), value)], meta)
        print(f"{fn} = {value!r}")
        return
    _need(params, "grid")
    column, _, (lo, hi), run = table[fn]
    grid = params["grid"]
    if grid[0] < lo - 1e-12 or grid[-1] > hi + 1e-12:
        raise ValidationError(f"grid for {fn} must lie in [{lo}, {hi}]")
    rows = []
    for x in grid:
        x = min(max(x, lo), hi)
        rows.append((x, run(x, p)))
    write_csv(path, (column, "value"), rows, meta)
    print(f"rates: {len(rows)} values of {fn} written to {path}")


def _phase_check(pp):
    if pp.c <= 2:
        if pp.a_star != 0.5 or pp.a_hat is not None:
            raise CheckFailure(f"c={pp.c}: expected a*=1/2 and no breakup point")
        return
    if not (pp.a_tilde < 2 / pp.c and 0.5 < pp.a_hat < pp.a_star <= 1):
        raise CheckFailure(f"c={pp.c}: phase points out of order: {pp}")


def cmd_phase(params):
    cs = params["c"]
    if not cs or any(not (c > 0 and math.isfinite(c)) for c in cs):
        raise ValidationError("c values must be positive")
    grid = params["grid"]
    if grid[0] < 0 or grid[-1] > 1:
        raise ValidationError("grid for a must lie in [0, 1]")
    out = _outdir(params)
    meta = metadata("phase", _echo(params))
    curves = []
    for c in cs:
        pp = rates.phase_points(c)
        _phase_check(pp)
        pp.to_json(os.path.join(out, f"phase_c{c:g}.json"), meta=meta)
        curves.append((c, pp, [rates.i_alpha(a, c) for a in grid]))
        msg = f"c={c:g}: a*={pp.a_star:.10f}"
        if pp.a_hat is not None:
            msg += f" a~={pp.a_tilde:.10f} a^={pp.a_hat:.10f} tau~={pp.tau_tilde:.10f}"
        print(msg)
    cols = ("a",) + tuple(f"i_alpha_c{c:g}" for c in cs)
    rows = [(a,) + tuple(cv[2][k] for cv in curves) for k, a in enumerate(grid)]
    write_csv(os.path.join(out, "i_alpha_curves.csv"), cols, rows, meta)
    if params.get("svg"):
        marks = [x for _, pp, _ in curves for x in (pp.a_tilde, pp.a_hat) if x is not None]
        write_svg(
            os.path.join(out, "count_rate.svg"),
            [(f"c = {c:g}", grid, vals) for c, _, vals in curves],
            meta,
            title="Rate function of the component count",
            xlabel="a",
            ylabel="I(a)",
            marks=marks,
        )
        cgrid = [2.02 + 0.02 * k for k in range(300)]
        pts = [rates.phase_points(c) for c in cgrid]
        write_svg(
            os.path.join(out, "phase_diagram.svg"),
            [
                ("a~ (convex below)", cgrid, [p.a_tilde for p in pts]),
                ("a^ (breakup)", cgrid, [p.a_hat for p in pts]),
                ("a* (peak)", cgrid, [p.a_star for p in pts]),
            ],
            meta,
            title="Convexity and concavity regions",
            xlabel="c",
            ylabel="a",
        )


def cmd_traj(params):
    c = _single_c(params)
    s, t, w, a, tau, theta, N, tol = (params[k] for k in ("s", "t", "w", "a", "tau", "theta", "N", "tol"))
    if not 0 <= s < t <= 1:
        raise ValidationError("need 0 <= s < t <= 1")
    if not 0 <= w < (t - s) ** 2 / 2:
        raise ValidationError("need 0 <= w < (t - s)^2 / 2")
    if not (0 <= a <= 1 and 0 <= tau <= 1):
        raise ValidationError("a and tau must lie in [0, 1]")
    if N < 3:
        raise ValidationError("N must be >= 3")
    out = _outdir(params)
    meta = metadata("traj", _echo(params))
    header = [f"{k}: {v}" for k, v in meta.items()]
    report = {}

    traj, rho, cost = variational.optimal_excursion(s, t, w, c, N)
    quad = variational.i_S_functional(traj, c)
    traj.to_csv(os.path.join(out, "excursion.csv"), header)
    report["excursion"] = {"rho_tilde": rho, "closed_form": cost, "quadrature": quad, "gap": abs(quad - cost)}

    ctraj = variational.optimal_excursion_critical(s, t, w, N)
    ccost = variational.critical_excursion_cost(s, t, w, theta)
    cquad = variational.i_S_breve_functional(ctraj, theta)
    ctraj.to_csv(os.path.join(out, "critical_excursion.csv"), header)
    report["critical_excursion"] = {"closed_form": ccost, "quadrature": cquad, "gap": abs(cquad - ccost)}

    phi, rcost = variational.optimal_regulator(a, tau, c, N)
    if phi is not None:
        rquad = variational.phi_integral(phi, c)
        phi.to_csv(os.path.join(out, "regulator.csv"), header)
        report["regulator"] = {"closed_form": rcost, "quadrature": rquad, "gap": abs(rquad - rcost)}
    else:
        report["regulator"] = {"closed_form": rcost, "note": "no admissible regulator"}

    q, ph, e = variational.lln_curves(c, N)
    for name, tr in (("lln_q", q), ("lln_phi", ph), ("lln_e", e)):
        tr.to_csv(os.path.join(out, f"{name}.csv"), header)
    report["lln_phi"] = {"closed_form": 0.0, "quadrature": variational.i_phi_functional(ph, c)}
    report["lln_phi"]["gap"] = report["lln_phi"]["quadrature"]

    write_json(os.path.join(out, "traj_report.json"), {"checks": report}, meta)
    bad = [k for k, v in report.items() if "gap" in v and not v["gap"] <= tol]
    for k, v in report.items():
        print(f"{k}: " + ", ".join(f"{kk}={vv:.3e}" if isinstance(vv, float) else f"{kk}={vv}" for kk, vv in v.items()))
    if bad:
        raise CheckFailure(f"quadrature gap above {tol} for: {', '.join(bad)}")


def cmd_critical(params):
    theta = params["theta"]
    reps, dt = params["reps"], params["dt"]
    if reps < 1 or not dt > 0:
        raise ValidationError("reps must be >= 1 and dt > 0")
    T = params.get("T") or 2 * max(theta, 0.0) + 6.0
    if not T > 0:
        raise ValidationError("T must be positive")
    if T / dt > 5e7:
        raise ValidationError("T / dt too large")
    n = params.get("n")
    if n is not None and n < 2:
        raise ValidationError("n must be >= 2")
    grid = params.get("grid") or _grid(f"0:{2 * max(theta, 0.0) + 2:g}:0.01")
    if grid[0] < 0:
        raise ValidationError("grid must be non-negative")
    out = _outdir(params)
    meta = metadata("critical", _echo(dict(params, T=T)))
    seed = params["seed"]

    path = limits.simulate_critical_limit(theta, T, dt, seed=mix64(seed, 0))
    path.to_csv(os.path.join(out, "critical_path.csv"), [f"{k}: {v}" for k, v in meta.items()])
    est = limits.CriticalLimitEstimator(theta, T, dt)
    summ = limits.mc_harness(est, reps, seed, workers=limits.worker_count(), keep=True)
    lengths = summ.values[:, 0]
    doc = {
        "limit": {
            "mean_longest": summ.mean["largest"],
            "stderr_longest": summ.stderr["largest"],
            "mean_marks_longest": summ.mean["excess"],
            "mean_length_cubed_over_12": math.fsum(lengths**3 / 12) / reps,
        }
    }
    if n is not None:
        g = limits.mc_harness(
            limits.CriticalGraphEstimator(n, theta), reps, seed + 1, workers=limits.worker_count(), keep=True
        )
        doc["graph"] = {
            "n": n,
            "mean_largest_scaled": g.mean["largest"],
            "mean_excess_largest": g.mean["excess"],
            "ks_distance": limits.ks_distance(g.values[:, 0], lengths),
        }
    vals = [rates.breve_i_beta(u, theta) for u in grid]
    write_csv(os.path.join(out, "breve_i_beta.csv"), ("u", "value"), list(zip(grid, vals)), meta)
    zero = rates.breve_i_beta(2 * max(theta, 0.0), theta)
    doc["rate_at_typical_size"] = zero
    write_json(os.path.join(out, "critical_summary.json"), doc, meta)
    print(f"critical: longest excursion mean {summ.mean['largest']:.4f} +- {summ.stderr['largest']:.4f}")
    if "graph" in doc:
        print(f"critical: KS distance graph vs limit {doc['graph']['ks_distance']:.4f}")
    if params.get("svg"):
        kinks = []
        if theta > 0:
            k = 1
            while theta / (k + 0.5) > grid[0] and k < 50:
                kinks += [theta / (k + 0.5), theta / (k - 0.5)]
                k += 1
        write_svg(
            os.path.join(out, "critical_rate.svg"),
            [(f"theta = {theta:g}", grid, vals)],
            meta,
            title="Critical-window rate of the largest component",
            xlabel="u",
            ylabel="rate",
            marks=sorted(set(kinks)),
        )
    if abs(zero) > 1e-12:
        raise CheckFailure(f"rate at u = 2 theta+ is {zero}, expected 0")


def cmd_clt_check(params):
    c = _single_c(params)
    n, reps, theta = params["n"], params["reps"], params["theta"]
    if n < 2 or reps < 2:
        raise ValidationError("n and reps must be >= 2")
    if c + theta / math.sqrt(n) < 0:
        raise ValidationError("c + theta / sqrt(n) must be non-negative")
    out = _outdir(params)
    meta = metadata("clt-check", _echo(params))
    lp = limits.clt_params(c, theta)
    summ = limits.mc_harness(limits.CltEstimator(n, c, theta), reps, params["seed"], workers=limits.worker_count(), keep=True)
    rows = {}
    stats = limits.STATS if lp.valid_beta_gamma else limits.STATS[:1]
    for i, name in enumerate(stats):
        m, v, se = summ.mean[name], summ.var[name], summ.stderr[name]
        rows[name] = {
            "mean": m,
            "stderr": se,
            "mean_limit": lp.mean[i],
            "mean_within_3se": abs(m - lp.mean[i]) <= 3 * se,
            "var": v,
            "var_limit": lp.cov[i, i],
            "var_rel_gap": v / lp.cov[i, i] - 1,
        }
    doc = {"statistics": rows}
    if lp.valid_beta_gamma:
        corr = float(np.corrcoef(summ.values[:, 0], summ.values[:, 1])[0, 1])
        ref = lp.cov[0, 1] / math.sqrt(lp.cov[0, 0] * lp.cov[1, 1])
        doc["corr_alpha_beta"] = {"empirical": corr, "limit": ref}
    write_json(os.path.join(out, "clt_check.json"), doc, meta)
    for name, row in rows.items():
        print(f"{name}: mean {row['mean']:+.4f} (limit {row['mean_limit']:+.4f}, se {row['stderr']:.4f}), "
              f"var {row['var']:.4f} (limit {row['var_limit']:.4f})")


def cmd_beta_ldp(params):
    c = _single_c(params)
    grid = params["grid"]
    if grid[0] < 0 or grid[-1] > 1:
        raise ValidationError("grid for u must lie in [0, 1]")
    out = _outdir(params)
    meta = metadata("beta-ldp", _echo(params))
    crit = max(1 - 1 / c, 0.0)
    rows, worst = [], 0.0
    for u in grid:
        val = rates.i_beta(u, c)
        alt = math.nan
        if c > 1 and u > 0:
            alt = rates.i_beta_blocks(u, c)
            if u < crit:
                worst = max(worst, abs(alt - val))
        rows.append((u, val, alt))
    write_csv(os.path.join(out, "beta_ldp.csv"), ("u", "i_beta", "block_form"), rows, meta)
    print(f"beta-ldp: {len(rows)} points, largest gap to the block form {worst:.3e}")
    if params.get("svg"):
        marks = rates.block_thresholds(c, kmax=12) if c > 1 else []
        write_svg(
            os.path.join(out, "beta_ldp.svg"),
            [(f"c = {c:g}", grid, [r[1] for r in rows])],
            meta,
            title="Rate function of the largest component",
            xlabel="u",
            ylabel="rate",
            marks=marks,
        )
    if worst > params["tol"]:
        raise CheckFailure(f"floor form and block form differ by {worst}")


HANDLERS = {
    "simulate": cmd_simulate,
    "exact": cmd_exact,
    "rates": cmd_rates,
    "phase": cmd_phase,
    "traj": cmd_traj,
    "critical": cmd_critical,
    "clt-check": cmd_clt_check,
    "beta-ldp": cmd_beta_ldp,
}


def main(argv=None):
    try:
        command, params = resolve(argv)
        _seed(command, params)
        HANDLERS[command](params)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (ValidationError, exact_mod.CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CheckFailure, rates.SolverDisagreement) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
