"""Command-line driver: one subcommand per experiment.

Every run resolves its configuration by layering, in increasing
precedence: command defaults, a named --preset, a JSON --config file,
then explicit flags.  All operator descriptors are parsed and validated
before any computation starts.  Results land under --out (default
``runs/<command>``) as

    summary.json        resolved config + package version + result
    data/*.csv          delimited tables for downstream plotting
    figures/*.png       rendered figures (suppressed by --no-plots)

Summaries carry no timestamps, serialize with sorted keys and fixed
float formatting, and all sweeps merge worker results in input order,
so rerunning a command byte-identically reproduces summary.json.

Exit codes: 0 success, 1 invalid configuration (bad flags, descriptors,
presets or config file), 2 numerical failure -- a diagnostic JSON with
the resolved config goes to stderr and, when the output directory
exists, to <out>/diagnostic.json.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, plots
from .closedform import (
    BumpParams,
    PlateauBumpSource,
    classify_regularity,
    interface_mismatch,
    solution_value,
    strong_residual_samples,
    weak_residual,
)
from .descriptors import parse_flux, parse_growth, parse_source
from .field2d import (
    detect_local_symmetry,
    gradient_flow_minimize,
    neumann_identity,
    pohozaev_residual,
    save_field_csv,
)
from .operators import (
    InvalidParameterError,
    PowerGrowth,
    check_source_growth,
    classify_smp_growth,
    make_flux,
)
from .presets import PRESETS, build_profile, build_start_field, preset_config
from .radial import (
    find_negative_direction,
    ode_residual,
    radial_energy,
    rescaling_compare,
    save_profile_csv,
    shoot_dirichlet,
)

__all__ = ["main", "build_parser"]


# ---------------------------------------------------------------------------
# plumbing


def _jsonable(obj):
    """Recursively coerce to plain JSON types; non-finite floats -> null."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def _fmt_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])
    return str(path)


class Report:
    """Output directory with data/ and figures/ subtrees."""

    def __init__(self, outdir, render_figures):
        self.config = None
        self.outdir = Path(outdir)
        self.render_figures = bool(render_figures)
        self.data = self.outdir / "data"
        self.figures = self.outdir / "figures"
        self.outdir.mkdir(parents=True, exist_ok=True)
        self.data.mkdir(exist_ok=True)
        if self.render_figures:
            self.figures.mkdir(exist_ok=True)

    def csv(self, name, header, rows):
        return _write_csv(self.data / name, header, rows)

    def figure(self, name, draw):
        """draw(path) renders one figure; skipped under --no-plots."""
        if self.render_figures:
            draw(self.figures / name)

    def summary(self, command, cfg, result):
        payload = {
            "command": command,
            "version": __version__,
            "config": _jsonable(cfg),
            "result": _jsonable(result),
        }
        text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
        (self.outdir / "summary.json").write_text(text)
        return text


def _resolve(args, report, defaults, default_preset=None):
    """Layer config sources: defaults < preset < config file < flags."""
    cfg = dict(defaults)
    preset = getattr(args, "preset", None) or default_preset
    if preset:
        cfg.update(preset_config(preset))
        cfg["preset"] = preset
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise InvalidParameterError("cannot read config file: %s" % exc) from None
        except json.JSONDecodeError as exc:
            raise InvalidParameterError("config file is not valid JSON: %s" % exc) from None
        if not isinstance(loaded, dict):
            raise InvalidParameterError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - _KNOWN_KEYS)
        if unknown:
            raise InvalidParameterError("unknown config keys: %s" % ", ".join(unknown))
        cfg.update(loaded)
    for key in _FLAG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    report.config = cfg
    return cfg


_FLAG_KEYS = (
    "g", "f", "phi", "p", "s", "N", "R", "h", "tol", "eps_min", "eps_max",
    "eps_count", "seed", "workers", "bracket", "n", "n_tests", "max_steps",
    "delta", "which", "t_max", "identity",
)
_KNOWN_KEYS = set(_FLAG_KEYS) | {"field", "profile", "clip", "preset"}


def _floatpair(text):
    parts = [a for a in str(text).split(",") if a.strip()]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers")
    return [float(parts[0]), float(parts[1])]


def _eps_sequence(cfg, fallback):
    lo, hi = cfg.get("eps_min"), cfg.get("eps_max")
    if lo is None and hi is None:
        return list(fallback)
    lo = float(lo if lo is not None else fallback[0])
    hi = float(hi if hi is not None else fallback[-1])
    count = int(cfg.get("eps_count") or len(fallback))
    if not (0 < lo <= hi) or count < 1:
        raise InvalidParameterError("need 0 < eps_min <= eps_max and eps_count >= 1")
    if count == 1 or lo == hi:
        return [lo]
    return [float(v) for v in np.geomspace(lo, hi, count)]


def _pool_map(fn, items, workers):
    """Fan out over a process pool; merge preserves input order."""
    items = list(items)
    if workers and int(workers) > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=int(workers)) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ag_check(args, report):
    cfg = _resolve(args, report, {"delta": 1.0})
    if cfg.get("phi") is not None:
        if cfg.get("g") is None:
            raise InvalidParameterError("ag-check needs --g with --phi")
        flux = parse_flux(cfg["g"])
        growth = parse_growth(cfg["phi"])
        verdict = classify_smp_growth(flux, growth, delta=float(cfg["delta"]))
        pairs = verdict.partial_integrals or []
        report.csv("partial_integrals.csv", ("cutoff", "integral"), pairs)
        if pairs:
            a = [row[0] for row in pairs]
            vals = [row[1] for row in pairs]
            report.figure("partial_integrals.png", lambda p: plots.line_plot(
                a, {"integral over [a, delta]": vals}, p, xlabel="cutoff a",
                ylabel="partial integral", logx=True,
                title="divergence scan: %s" % verdict.status))
        result = verdict.to_json_dict()
        result["partial_integrals"] = pairs
        return cfg, result

    # table mode: power flux vs power growth across the membership edge
    ps = (1.5, 2.0, 3.0, 4.0)
    offsets = (-0.3, 0.0, 0.3)
    tasks = [(p, p - 1.0 + off) for p in ps for off in offsets]
    rows = _pool_map(_ag_table_row, tasks, cfg.get("workers"))
    report.csv("membership_table.csv",
               ("p", "q", "expected_member", "status", "estimated_exponent", "ok"),
               rows)
    result = {
        "mode": "table",
        "rows": [
            {"p": p, "q": q, "expected_member": exp, "status": st,
             "estimated_exponent": alpha, "ok": ok}
            for p, q, exp, st, alpha, ok in rows
        ],
        "all_ok": all(r[-1] for r in rows),
    }
    qs = [r[1] - (r[0] - 1.0) for r in rows]
    alphas = [r[4] if r[4] is not None else np.nan for r in rows]
    report.figure("exponent_vs_offset.png", lambda pth: plots.line_plot(
        qs, {"fitted exponent": alphas}, pth, xlabel="q - (p - 1)",
        ylabel="fitted divergence exponent", hline=1.0,
        title="membership edge: exponent crosses 1 at q = p - 1"))
    return cfg, result


def _ag_table_row(task):
    p, q = task
    verdict = classify_smp_growth(make_flux("power", p=p), PowerGrowth(1.0, q))
    expected = q >= p - 1.0 - 1e-12
    ok = verdict.status == ("member" if expected else "nonmember")
    return (p, q, expected, verdict.status, verdict.estimated_exponent, ok)


def _cmd_cond_abc(args, report):
    cfg = _resolve(args, report, {"R": 1.0, "t_max": 1.0, "which": "all"})
    if cfg.get("g") is None or cfg.get("f") is None:
        raise InvalidParameterError("cond-abc needs --g and --f")
    flux = parse_flux(cfg["g"])
    source = parse_source(cfg["f"])
    which = str(cfg["which"]).lower()
    selectors = ("a", "b", "c") if which == "all" else (which,)
    t_hi = float(cfg["t_max"])
    result, rows = {}, []
    for sel in selectors:
        rep = check_source_growth(source, flux, sel, radius=float(cfg["R"]),
                                  t_range=(0.0, t_hi))
        result[sel] = rep.to_json_dict()
        result[sel]["all_satisfied"] = rep.all_satisfied
        for rec in rep.records:
            rows.append((sel, rec.rho, rec.tau, rec.trivial,
                         rec.kappa if rec.kappa is not None else "",
                         rec.verdict.status if rec.verdict else "trivial",
                         rec.satisfied))
    result["all_satisfied"] = all(result[sel]["all_satisfied"] for sel in selectors)
    report.csv("zero_levels.csv",
               ("which", "rho", "tau", "trivial", "kappa", "status", "satisfied"),
               rows)
    ts = np.linspace(0.0, t_hi, 401)
    fvals = np.asarray(source.value(0.0, ts), dtype=float)
    report.figure("source_curve.png", lambda p: plots.line_plot(
        ts, {"f(0, t)": fvals}, p, xlabel="t", ylabel="source value",
        hline=0.0, title="one-sided growth at zero levels: %s"
        % ("ok" if result["all_satisfied"] else "violated")))
    return cfg, result


def _cmd_example1(args, report):
    cfg = _resolve(args, report, {"p": 2.0, "s": 3.0, "N": 2, "h": 0.04,
                          "n_tests": 20, "seed": 0})
    params = BumpParams(float(cfg["p"]), float(cfg["s"]), int(cfg["N"]))
    source = PlateauBumpSource(params.p, params.s, params.dim)
    landmarks = {}
    for label, t in (("f_at_0", 0.0), ("f_at_1", 1.0), ("f_at_2", 2.0)):
        try:
            landmarks[label] = float(source.value_t(t))
        except (ValueError, FloatingPointError):
            landmarks[label] = None
    strong = strong_residual_samples(params)
    weak = weak_residual(params, h=float(cfg["h"]), n_tests=int(cfg["n_tests"]),
                         seed=int(cfg["seed"]))
    result = {
        "classification": classify_regularity(params.p, params.s).to_json_dict(),
        "interface_mismatch": interface_mismatch(params),
        "source_landmarks": landmarks,
        "strong_residual_max": float(np.max(strong)),
        "weak_residual": weak,
    }
    report.csv("weak_tests.csv", ("test", "residual"),
               list(enumerate(weak["per_test"])))
    rs = np.linspace(0.0, 6.0, 601)
    section = np.array([solution_value(params, r, 0.0) for r in rs])
    report.csv("section.csv", ("r", "u"), zip(rs, section))
    report.figure("section.png", lambda p: plots.line_plot(
        rs, {"u(r, 0)": section}, p, xlabel="r", ylabel="u",
        title="two-mountain field, section along the x-axis"))
    field = build_start_field({"field": "example1", "R": 6.0, "p": params.p,
                               "s": params.s, "N": params.dim}, h=0.05)
    report.figure("field.png", lambda p: plots.field_heatmap(
        field, p, title="two-mountain field (p=%g, s=%g)" % (params.p, params.s)))
    return cfg, result


def _cmd_shoot(args, report):
    cfg = _resolve(args, report, {"tol": 1e-10, "n": 4096}, default_preset="torsion")
    flux = parse_flux(cfg["g"])
    source = parse_source(cfg["f"])
    bracket = cfg.get("bracket")
    if bracket is None:
        raise InvalidParameterError("shoot needs --bracket lo,hi")
    res = shoot_dirichlet(flux, source, int(cfg["N"]), float(cfg["R"]),
                          tuple(float(b) for b in bracket),
                          tol=float(cfg["tol"]), n=int(cfg["n"]))
    resid = ode_residual(res.profile, flux, source)
    result = res.to_json_dict()
    result["ode_residual"] = resid.to_json_dict()
    result["energy"] = radial_energy(res.profile, flux, source)
    save_profile_csv(res.profile, report.data / "profile.csv")
    prof = res.profile
    report.figure("profile.png", lambda p: plots.line_plot(
        prof.r, {"U": prof.U, "U'": prof.Up}, p, xlabel="r",
        title="shot profile, center value %.6g" % res.center_value))
    return cfg, result


def _cmd_second_variation(args, report):
    cfg = _resolve(args, report, {}, default_preset="bump-punctured-ball")
    flux = parse_flux(cfg["g"])
    source = parse_source(cfg["f"])
    f_prime = source.derivative()
    if f_prime is None:
        raise InvalidParameterError("source has no usable derivative for the quadratic form")
    profile = build_profile(cfg)
    eps_seq = None
    if cfg.get("eps_min") is not None or cfg.get("eps_max") is not None:
        eps_seq = _eps_sequence(cfg, tuple(np.geomspace(0.02, 0.3, 12)))
    scan = find_negative_direction(profile, flux, f_prime, eps_seq)
    result = scan.to_json_dict()
    report.csv("q_scan.csv", ("eps", "Q", "Q5", "Q6_bound"), scan.rows)
    eps = [row[0] for row in scan.rows]
    report.figure("q_scan.png", lambda p: plots.line_plot(
        eps, {"Q": [r[1] for r in scan.rows], "Q5": [r[2] for r in scan.rows],
              "Q6 bound": [r[3] for r in scan.rows]}, p,
        xlabel="ramp width eps", ylabel="quadratic form", logx=True, hline=0.0,
        title="negative direction found" if scan.found else "no negative direction"))
    return cfg, result


def _rescale_row(task):
    profile, flux, source, eps = task
    return rescaling_compare(profile, flux, source, eps)


def _cmd_rescale(args, report):
    cfg = _resolve(args, report, {}, default_preset="rescale-bump")
    flux = parse_flux(cfg["g"])
    source = parse_source(cfg["f"])
    profile = build_profile(cfg)
    eps_list = _eps_sequence(cfg, (0.05, 0.1, 0.2, 0.4))
    reports = _pool_map(_rescale_row,
                        [(profile, flux, source, e) for e in eps_list],
                        cfg.get("workers"))
    rows = [r.to_json_dict() for r in reports]
    result = {
        "rows": rows,
        "all_gaps_negative": all(r.gap < 0 for r in reports),
        "energy": radial_energy(profile, flux, source),
    }
    report.csv("rescale.csv", ("eps", "J_original", "J_rescaled", "gap"),
               [(r.eps, r.J_original, r.J_rescaled, r.gap) for r in reports])
    report.figure("gap.png", lambda p: plots.line_plot(
        eps_list, {"J(u_eps) - J(u)": [r.gap for r in reports]}, p,
        xlabel="dilation eps", ylabel="energy gap", logx=True, hline=0.0,
        title="inward rescaling lowers the energy"))
    return cfg, result


def _cmd_pohozaev(args, report):
    cfg = _resolve(args, report, {"identity": "pohozaev"}, default_preset="torsion")
    flux = parse_flux(cfg["g"])
    source = parse_source(cfg["f"])
    which = str(cfg["identity"]).lower()
    if which not in ("pohozaev", "neumann", "both"):
        raise InvalidParameterError("--identity must be pohozaev, neumann or both")
    field = build_start_field(cfg, h=cfg["h"])
    result = {"h": field.h, "R": field.R}
    rows = []
    if which in ("pohozaev", "both"):
        rep = pohozaev_residual(field, flux, source)
        result["pohozaev"] = rep.to_json_dict()
        rows.append(("pohozaev", rep.lhs, rep.rhs, rep.residual))
    if which in ("neumann", "both"):
        rep = neumann_identity(field, flux, source)
        result["neumann"] = rep.to_json_dict()
        rows.append(("neumann", rep.lhs, rep.rhs, rep.rel_defect))
    report.csv("identity.csv", ("identity", "lhs", "rhs", "defect"), rows)
    save_field_csv(field, report.data / "field.csv")
    report.figure("field.png", lambda p: plots.field_heatmap(
        field, p, title="identity check field, h = %g" % field.h))
    return cfg, result


def _cmd_minimize(args, report):
    cfg = _resolve(args, report, {"max_steps": 400, "tol": 0.0},
                   default_preset="example1-caseI")
    flux = parse_flux(cfg["g"])
    source = parse_source(cfg["f"])
    clip = cfg.get("clip")
    if clip is not None:
        clip = (float(clip[0]), float(clip[1]))
        if isinstance(source, PlateauBumpSource):
            # flow iterates can momentarily leave the source's value
            # interval, so switch on its constant extension
            source = PlateauBumpSource(source.p, source.s, source.dim, clamp=True)
    field0 = build_start_field(cfg)
    delta = cfg.get("delta")
    trace = gradient_flow_minimize(
        field0, flux, source,
        delta=None if delta is None else float(delta),
        max_steps=int(cfg["max_steps"]),
        slope_tol=float(cfg["tol"]),
        clip_range=clip,
    )
    E = trace.energy_history
    A = trace.asymmetry_history
    result = trace.to_json_dict()
    del result["energy_history"], result["asymmetry_history"]
    result.update({
        "initial_energy": float(E[0]),
        "final_energy": float(E[-1]),
        "strictly_decreasing": bool(np.all(np.diff(E) < 0.0)),
        "initial_asymmetry": float(A[0]),
        "final_asymmetry": float(A[-1]),
        "asymmetry_ratio": float(A[-1] / A[0]) if A[0] > 0 else None,
    })
    report.csv("trace.csv", ("step", "energy", "asymmetry"),
               zip(range(len(E)), E, A))
    save_field_csv(trace.final_field, report.data / "final_field.csv")
    steps = np.arange(len(E))
    report.figure("energy.png", lambda p: plots.line_plot(
        steps, {"J": E}, p, xlabel="accepted step", ylabel="discrete energy",
        title="descent trace, stop: %s" % trace.stop_reason))
    report.figure("asymmetry.png", lambda p: plots.line_plot(
        steps, {"asymmetry": A}, p, xlabel="accepted step",
        ylabel="angular asymmetry", title="asymmetry along the flow"))
    report.figure("final_field.png", lambda p: plots.field_heatmap(
        trace.final_field, p, title="relaxed field after %d steps" % trace.step_count))
    return cfg, result


def _cmd_detect(args, report):
    cfg = _resolve(args, report, {}, default_preset="example1-caseI")
    field = build_start_field(cfg)
    rep = detect_local_symmetry(field)
    result = rep.to_json_dict()
    report.csv("regions.csv",
               ("center_x", "center_y", "inner_radius", "outer_radius",
                "fit_error", "inner_mean", "outer_mean"),
               [(r.center[0], r.center[1], r.inner_radius, r.outer_radius,
                 r.fit_error, r.inner_mean, r.outer_mean) for r in rep.regions])
    report.figure("regions.png", lambda p: plots.field_heatmap(
        field, p, regions=rep.regions,
        title="%d locally radial regions, flat fraction %.3f"
        % (len(rep.regions), rep.flat_fraction)))
    return cfg, result


_COMMANDS = {
    "ag-check": (_cmd_ag_check, "classify a growth bound against a flux law's admissible class"),
    "cond-abc": (_cmd_cond_abc, "test one-sided source growth at its zero levels"),
    "example1": (_cmd_example1, "verify the closed-form two-mountain solution"),
    "shoot": (_cmd_shoot, "solve the radial Dirichlet problem by shooting"),
    "second-variation": (_cmd_second_variation, "scan for a negative direction of the quadratic form"),
    "rescale": (_cmd_rescale, "compare the energy of inward-dilated competitors"),
    "pohozaev": (_cmd_pohozaev, "check integral identities on a disk lattice"),
    "minimize": (_cmd_minimize, "run the projected descent flow from a start field"),
    "detect": (_cmd_detect, "decompose a field into locally radial regions"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="symstab",
        description="numerical laboratory for symmetry and stability of "
                    "degenerate elliptic boundary value problems",
    )
    parser.add_argument("--version", action="version", version="symstab " + __version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in _COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--preset", choices=sorted(PRESETS), help="named experiment preset")
        cmd.add_argument("--config", help="JSON config file layered between preset and flags")
        cmd.add_argument("--out", help="output directory (default runs/<command>)")
        cmd.add_argument("--no-plots", action="store_true", help="skip figure rendering")
        cmd.add_argument("--workers", type=int, help="process pool size for sweeps")
        cmd.add_argument("--seed", type=int, help="seed for randomized test draws")
        cmd.add_argument("--g", help="flux-law descriptor, e.g. power:2")
        cmd.add_argument("--f", help="source descriptor, e.g. constant:1")
        cmd.add_argument("--phi", help="growth-bound descriptor, e.g. power:1,1")
        cmd.add_argument("--p", type=float, help="flux power / mountain exponent")
        cmd.add_argument("--s", type=float, help="mountain smoothness exponent")
        cmd.add_argument("--N", type=int, help="space dimension")
        cmd.add_argument("--R", type=float, help="ball radius")
        cmd.add_argument("--h", type=float, help="lattice spacing")
        cmd.add_argument("--tol", type=float, help="solver / stopping tolerance")
        cmd.add_argument("--eps-min", type=float, help="smallest sweep parameter")
        cmd.add_argument("--eps-max", type=float, help="largest sweep parameter")
        cmd.add_argument("--eps-count", type=int, help="sweep length (geometric spacing)")
        cmd.add_argument("--bracket", type=_floatpair, help="shooting bracket lo,hi")
        cmd.add_argument("--n", type=int, help="radial resolution")
        cmd.add_argument("--n-tests", type=int, help="number of random weak tests")
        cmd.add_argument("--max-steps", type=int, help="descent step budget")
        cmd.add_argument("--delta", type=float, help="flux regularization / classifier origin")
        cmd.add_argument("--which", choices=("a", "b", "c", "all"), help="growth condition selector")
        cmd.add_argument("--t-max", type=float, help="upper end of the source value range")
        cmd.add_argument("--identity", choices=("pohozaev", "neumann", "both"),
                         help="which integral identity to evaluate")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1

    handler = _COMMANDS[args.command][0]
    outdir = Path(args.out) if args.out else Path("runs") / args.command
    report = None
    try:
        report = Report(outdir, render_figures=not args.no_plots)
        cfg, result = handler(args, report)
    except InvalidParameterError as exc:
        print(json.dumps({"error": "invalid-config", "command": args.command,
                          "detail": str(exc)}, sort_keys=True), file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        diag = {"error": "numerical-failure", "command": args.command,
                "detail": "%s: %s" % (type(exc).__name__, exc),
                "config": _jsonable(report.config if report else None)}
        text = json.dumps(diag, sort_keys=True, indent=2) + "\n"
        print(text, file=sys.stderr, end="")
        if outdir.is_dir():
            (outdir / "diagnostic.json").write_text(text)
        return 2
    text = report.summary(args.command, cfg, result)
    print(text, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
