"""Command-line surface: experiments, sweeps, delimited output, verification.

Configuration resolution order for every parameter: explicit flag, then the
``--config`` file (``key = value`` lines, keys are flag names with
underscores), then the built-in default.  Physical parameters are echoed into
the metadata block of every output; thread count is not, so output bytes are
independent of parallelism.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget or
numerical-contract violation.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .concurrency import parallel_map
from .dynamics import evolve, landau_zener_estimate, linear_ramp
from .entanglement import (
    biseparability_scan,
    gibbs_state,
    gme_witness_w,
    pair_concurrence,
    trace_distance,
    two_level_model,
    w_overlap,
    w_state,
)
from .errors import BudgetError, ContractError
from .hamiltonian import ModelParams, build_full
from .hilbert import Full, StateVector
from .output import emit, parse_config_file
from .phases import cascade_field_reference, find_crossing, min_gap, scan_ground
from .spectra import (
    eigensolve,
    sector_ed_spectrum,
    three_site_xxz_levels,
    xx_sector_spectrum_exact,
    xx_sector_spectrum_reference,
)
from .verify import VerifyConfig, run_all


def _int_list(raw: str) -> list:
    return [int(tok) for tok in raw.replace(",", " ").split()]


def _float_list(raw: str) -> list:
    return [float(tok) for tok in raw.replace(",", " ").split()]


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


COMMON_SCHEMA = {
    "model": (str, "xx"),
    "n": (int, 6),
    "j": (float, -1.0),
    "delta": (float, None),
    "b": (float, 0.0),
    "bperp": (float, 0.0),
    "threads": (int, 0),
    "format": (str, "csv"),
    "out": (str, None),
}


def _add_common_flags(sub):
    sub.add_argument("--model", choices=("xx", "xxz"), default=None,
                     help="xx fixes delta = -j; xxz takes --delta")
    sub.add_argument("--n", type=int, default=None, help="number of ring sites")
    sub.add_argument("--j", type=float, default=None, help="xy coupling")
    sub.add_argument("--delta", type=float, default=None,
                     help="anisotropy (z coupling is j + delta)")
    sub.add_argument("--b", type=float, default=None, help="transverse field")
    sub.add_argument("--bperp", type=float, default=None,
                     help="symmetry-breaking x field, >= 0")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker count (default: machine parallelism)")
    sub.add_argument("--format", choices=("csv", "json"), default=None,
                     dest="format", help="output format")
    sub.add_argument("--out", default=None, help="output path (default: stdout)")
    sub.add_argument("--config", default=None,
                     help="key = value config file; flags take precedence")


def _resolve(args, schema: dict) -> dict:
    file_values = parse_config_file(args.config) if args.config else {}
    resolved = {}
    for key, (cast, default) in schema.items():
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = flag
        elif key in file_values:
            resolved[key] = cast(file_values[key])
        else:
            resolved[key] = default
    return resolved


def _threads(resolved: dict) -> int:
    count = resolved.get("threads") or 0
    return count if count > 0 else (os.cpu_count() or 1)


def _make_params(r: dict) -> ModelParams:
    model, n, j = r["model"], r["n"], r["j"]
    if model == "xx":
        if r["delta"] is not None and abs(r["delta"] + j) > 1e-12 * max(1.0, abs(j)):
            raise ValueError("the xx model fixes delta = -j; drop --delta or use xxz")
        delta = -j
    elif model == "xxz":
        if r["delta"] is None:
            raise ValueError("the xxz model requires --delta")
        delta = r["delta"]
    else:
        raise ValueError(f"unknown model {model!r}")
    return ModelParams(n, j, delta, r["b"], r["bperp"])


def _base_meta(command: str, r: dict, params: ModelParams) -> dict:
    return {
        "tool": f"spinring {__version__}",
        "command": command,
        "model": r["model"],
        "n_sites": params.n_sites,
        "j_xy": params.j_xy,
        "delta": params.delta,
        "b_field": params.b_field,
        "b_perp": params.b_perp,
    }


def _all_up(n: int) -> StateVector:
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(Full(n), amps)


# ---------------------------------------------------------------- spectrum

def cmd_spectrum(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema["m"] = (int, None)
    r = _resolve(args, schema)
    params = _make_params(r)

    blank = ""
    if r["m"] is None:
        ed = eigensolve(build_full(params)).eigenvalues
        exact = reference = None
        if params.n_sites == 3 and params.b_perp == 0.0:
            exact = np.sort([lv.energy for lv in three_site_xxz_levels(params)])
            reference = np.sort(
                [lv.energy for lv in three_site_xxz_levels(params, mode="reference")]
            )
        elif params.is_xx and params.b_perp == 0.0:
            exact = np.sort(np.concatenate([
                xx_sector_spectrum_exact(params, m)
                for m in range(params.n_sites + 1)
            ]))
            reference = np.sort(np.concatenate([
                xx_sector_spectrum_reference(params, m)
                for m in range(params.n_sites + 1)
            ]))
        scope = "full"
    else:
        ed = sector_ed_spectrum(params, r["m"])
        exact = reference = None
        if params.is_xx:
            exact = xx_sector_spectrum_exact(params, r["m"])
            reference = xx_sector_spectrum_reference(params, r["m"])
        scope = f"sector m={r['m']}"

    rows = []
    for idx, energy in enumerate(ed):
        rows.append((
            idx,
            float(energy),
            float(exact[idx]) if exact is not None else blank,
            float(reference[idx]) if reference is not None else blank,
        ))
    meta = _base_meta("spectrum", r, params)
    meta["scope"] = scope
    emit(meta, ["index", "energy_ed", "energy_exact", "energy_reference"],
         rows, r["format"], r["out"])
    return 0


# -------------------------------------------------------------------- scan

def cmd_scan(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema.update({
        "b_from": (float, 3.0),
        "b_to": (float, 0.0),
        "steps": (int, 61),
        "plot": (str, None),
    })
    r = _resolve(args, schema)
    params = _make_params(r)
    scan = scan_ground(params, r["b_from"], r["b_to"], r["steps"],
                       threads=_threads(r))
    rows = [
        (row.b_field, row.energy,
         "mixed" if row.sector is None else row.sector,
         row.w_fidelity, row.gap)
        for row in scan.rows
    ]
    meta = _base_meta("scan", r, params)
    meta.update({"b_from": r["b_from"], "b_to": r["b_to"], "steps": r["steps"]})
    emit(meta, ["b_field", "energy", "sector", "w_fidelity", "gap"],
         rows, r["format"], r["out"])
    if r["plot"]:
        from .plotting import save_scan_figure

        save_scan_figure(scan.rows, meta, r["plot"])
    return 0


# ---------------------------------------------------------------- crossing

def cmd_crossing(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema.update({
        "m": (_int_list, [0]),
        "b_lo": (float, None),
        "b_hi": (float, None),
    })
    r = _resolve(args, schema)
    params = _make_params(r)
    b_lo = r["b_lo"] if r["b_lo"] is not None else 0.0
    b_hi = r["b_hi"] if r["b_hi"] is not None else 4.0 * abs(params.j_xy)

    def one(m: int):
        report = find_crossing(params, m, (b_lo, b_hi))
        formula = cascade_field_reference(params.j_xy, params.n_sites, m)
        return (report.m_low, report.m_high, report.b_cross, report.residual,
                formula, abs(report.b_cross - formula), report.method)

    rows = parallel_map(one, r["m"], _threads(r))
    meta = _base_meta("crossing", r, params)
    meta.update({"bracket_lo": b_lo, "bracket_hi": b_hi})
    emit(meta,
         ["m_low", "m_high", "b_cross", "residual", "b_formula",
          "abs_diff", "method"],
         rows, r["format"], r["out"])
    return 0


# --------------------------------------------------------------------- gap

def cmd_gap(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema.update({"b_lo": (float, None), "b_hi": (float, None)})
    r = _resolve(args, schema)
    params = _make_params(r)
    center = -2.0 * params.j_xy
    b_lo = r["b_lo"] if r["b_lo"] is not None else center - 0.5
    b_hi = r["b_hi"] if r["b_hi"] is not None else center + 0.5
    b_at_min, gap = min_gap(params, (b_lo, b_hi))
    predicted = 2.0 * params.b_perp * np.sqrt(params.n_sites)
    rows = [(b_at_min, gap, predicted,
             abs(gap - predicted) / predicted if predicted else float("nan"))]
    meta = _base_meta("gap", r, params)
    meta.update({"window_lo": b_lo, "window_hi": b_hi})
    emit(meta, ["b_at_min", "gap", "gap_first_order", "rel_diff"],
         rows, r["format"], r["out"])
    return 0


# ------------------------------------------------------------------- sweep

def cmd_sweep(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema.update({
        "b_from": (float, 3.0),
        "b_to": (float, 1.0),
        "ramp_time": (float, 400.0),
        "dt": (float, 0.01),
        "record_every": (int, 0),
        "series": (_parse_bool, False),
        "plot": (str, None),
    })
    r = _resolve(args, schema)
    params = _make_params(r)
    n = params.n_sites
    duration = r["ramp_time"]
    schedule = linear_ramp(r["b_from"], r["b_to"], duration)
    steps = max(1, int(np.ceil(duration / r["dt"])))
    record_every = r["record_every"] or max(1, steps // 500)
    rate = abs(r["b_from"] - r["b_to"]) / duration
    lz = landau_zener_estimate(n, params.b_perp, rate) if rate > 0 else 0.0
    if params.b_perp == 0.0 and params.is_xx:
        warn = "b_perp = 0: the crossing is exact and no population transfers"
        print(f"warning: {warn}", file=sys.stderr)
    if params.is_xx and params.j_xy < 0:
        window_bottom = find_crossing(
            replace(params, b_field=0.0, b_perp=0.0), 1,
            (0.0, 4.0 * abs(params.j_xy)),
        ).b_cross
        if r["b_to"] < window_bottom:
            print(
                f"warning: ramp ends below the m=1 to m=2 crossing at "
                f"B = {window_bottom:.6g}; the W window is exited",
                file=sys.stderr,
            )

    traj = evolve(params, schedule, r["dt"], _all_up(n), record_every=record_every)
    meta = _base_meta("sweep", r, params)
    meta.update({
        "b_from": r["b_from"], "b_to": r["b_to"], "ramp_time": duration,
        "dt": r["dt"], "record_every": record_every, "ramp_rate": rate,
        "initial_state": "all-up",
        "lz_estimate": lz,
        "lz_note": "diabatic estimate exp(-pi N bperp^2/rate), this tool's own construction",
        "final_w_fidelity": traj.final_w_fidelity,
        "max_norm_drift": traj.max_norm_drift,
    })
    if r["series"]:
        rows = list(zip(traj.times.tolist(), traj.w_fidelity.tolist(),
                        traj.norm_error.tolist()))
        emit(meta, ["time", "w_fidelity", "norm_error"], rows,
             r["format"], r["out"])
    else:
        rows = [(duration, rate, lz, traj.final_w_fidelity, traj.max_norm_drift)]
        emit(meta,
             ["ramp_time", "ramp_rate", "lz_estimate", "final_w_fidelity",
              "max_norm_drift"],
             rows, r["format"], r["out"])
    if r["plot"]:
        from .plotting import save_sweep_figure

        save_sweep_figure(traj.times, traj.w_fidelity, traj.norm_error,
                          meta, r["plot"])
    return 0


# ----------------------------------------------------------------- thermal

def cmd_thermal(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema.update({"beta": (float, 5.0), "b_list": (_float_list, None)})
    r = _resolve(args, schema)
    params = _make_params(r)
    if params.b_perp != 0.0:
        raise ValueError("thermal diagnostics require b_perp = 0")
    if params.n_sites != 3 and not params.is_xx:
        raise ValueError(
            "two-level diagnostics need a 3-site ring or the xy-only model"
        )
    fields = r["b_list"] if r["b_list"] is not None else [params.b_field]

    def one(b: float):
        at_b = replace(params, b_field=float(b))
        model = two_level_model(params.delta, float(b), r["beta"],
                                n_sites=params.n_sites)
        thermal = gibbs_state(at_b, r["beta"])
        return (
            float(b), model.p, w_overlap(thermal.rho),
            gme_witness_w(thermal.rho),
            trace_distance(thermal.rho, model.rho),
        )

    rows = parallel_map(one, fields, _threads(r))
    meta = _base_meta("thermal", r, params)
    meta["beta"] = r["beta"]
    emit(meta,
         ["b_field", "p_two_level", "w_overlap_thermal", "witness_thermal",
          "trace_distance_to_model"],
         rows, r["format"], r["out"])
    return 0


# ---------------------------------------------------------------- entangle

def cmd_entangle(args) -> int:
    schema = dict(COMMON_SCHEMA)
    schema.update({
        "what": (str, "pairs"),
        "state": (str, "ground"),
        "alpha_min": (float, 0.05),
        "alpha_max": (float, 1.0),
        "alpha_steps": (int, 20),
    })
    r = _resolve(args, schema)
    params = _make_params(r)
    meta = _base_meta("entangle", r, params)

    if r["what"] == "pairs":
        if r["state"] == "w":
            psi = w_state(params.n_sites)
        elif r["state"] == "ground":
            from .phases import ground_state

            psi = ground_state(params)[1]
        else:
            raise ValueError(f"unknown state {r['state']!r}")
        pairs = [(i, j) for i in range(params.n_sites)
                 for j in range(i + 1, params.n_sites)]
        rows = parallel_map(
            lambda ij: (ij[0], ij[1], pair_concurrence(psi, *ij)),
            pairs, _threads(r),
        )
        meta["state"] = r["state"]
        emit(meta, ["site_i", "site_j", "concurrence"], rows,
             r["format"], r["out"])
    elif r["what"] == "bisep":
        grid = np.linspace(r["alpha_min"], r["alpha_max"], r["alpha_steps"])
        points = biseparability_scan(params.n_sites, grid)
        rows = [(p.alpha, p.min_second_schmidt, p.min_bound_margin)
                for p in points]
        meta.update({"alpha_min": r["alpha_min"], "alpha_max": r["alpha_max"],
                     "alpha_steps": r["alpha_steps"]})
        emit(meta, ["alpha", "min_second_schmidt", "min_bound_margin"],
             rows, r["format"], r["out"])
    else:
        raise ValueError(f"unknown table {r['what']!r}")
    return 0


# ------------------------------------------------------------------ verify

def cmd_verify(args) -> int:
    schema = {
        "n_max": (int, 10),
        "cascade_n": (int, 60),
        "format": (str, "csv"),
        "out": (str, None),
        "threads": (int, 0),
    }
    r = _resolve(args, schema)
    results = run_all(VerifyConfig(n_max=r["n_max"], cascade_n=r["cascade_n"]))
    rows = [
        (res.claim_id, res.description, res.reference_value, res.numeric_value,
         res.abs_diff, res.rel_diff, res.verdict, "ok" if res.ok else "FAIL",
         res.detail)
        for res in results
    ]
    meta = {
        "tool": f"spinring {__version__}",
        "command": "verify",
        "n_max": r["n_max"],
        "cascade_n": r["cascade_n"],
        "claims": len(results),
    }
    emit(meta,
         ["claim_id", "description", "reference_value", "numeric_value",
          "abs_diff", "rel_diff", "verdict", "status", "detail"],
         rows, r["format"], r["out"])
    failures = 0
    for res in results:
        status = "ok" if res.ok else "FAIL"
        print(f"{res.claim_id}: {res.verdict} ({status})", file=sys.stderr)
        failures += 0 if res.ok else 1
    if failures:
        print(f"{failures} claim(s) failed", file=sys.stderr)
        return 1
    return 0


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinring",
        description="Exact-diagonalization laboratory for XX/XXZ qubit rings",
    )
    parser.add_argument("--version", action="version",
                        version=f"spinring {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("spectrum", help="eigenvalue table, ED vs closed form")
    _add_common_flags(sub)
    sub.add_argument("--m", type=int, default=None,
                     help="restrict to the m-excitation sector")
    sub.set_defaults(handler=cmd_spectrum)

    sub = subs.add_parser("scan", help="ground-state properties vs field")
    _add_common_flags(sub)
    sub.add_argument("--b-from", type=float, default=None, dest="b_from")
    sub.add_argument("--b-to", type=float, default=None, dest="b_to")
    sub.add_argument("--steps", type=int, default=None)
    sub.add_argument("--plot", default=None, help="render a PNG next to the data")
    sub.set_defaults(handler=cmd_scan)

    sub = subs.add_parser("crossing", help="sector crossing fields by bisection")
    _add_common_flags(sub)
    sub.add_argument("--m", type=int, nargs="+", default=None,
                     help="lower sector(s) of the crossings to locate")
    sub.add_argument("--b-lo", type=float, default=None, dest="b_lo")
    sub.add_argument("--b-hi", type=float, default=None, dest="b_hi")
    sub.set_defaults(handler=cmd_crossing)

    sub = subs.add_parser("gap", help="minimum avoided-crossing gap")
    _add_common_flags(sub)
    sub.add_argument("--b-lo", type=float, default=None, dest="b_lo")
    sub.add_argument("--b-hi", type=float, default=None, dest="b_hi")
    sub.set_defaults(handler=cmd_gap)

    sub = subs.add_parser("sweep", help="time evolution through a field ramp")
    _add_common_flags(sub)
    sub.add_argument("--b-from", type=float, default=None, dest="b_from")
    sub.add_argument("--b-to", type=float, default=None, dest="b_to")
    sub.add_argument("--ramp-time", type=float, default=None, dest="ramp_time")
    sub.add_argument("--dt", type=float, default=None)
    sub.add_argument("--record-every", type=int, default=None, dest="record_every")
    sub.add_argument("--series", action="store_true", default=None,
                     help="emit the sampled time series instead of the summary")
    sub.add_argument("--plot", default=None, help="render a PNG next to the data")
    sub.set_defaults(handler=cmd_sweep)

    sub = subs.add_parser("thermal", help="Gibbs vs two-level mixture diagnostics")
    _add_common_flags(sub)
    sub.add_argument("--beta", type=float, default=None,
                     help="inverse temperature (k_B = 1)")
    sub.add_argument("--b-list", type=float, nargs="+", default=None,
                     dest="b_list", help="field values to tabulate")
    sub.set_defaults(handler=cmd_thermal)

    sub = subs.add_parser("entangle", help="concurrence and biseparability tables")
    _add_common_flags(sub)
    sub.add_argument("--what", choices=("pairs", "bisep"), default=None)
    sub.add_argument("--state", choices=("ground", "w"), default=None)
    sub.add_argument("--alpha-min", type=float, default=None, dest="alpha_min")
    sub.add_argument("--alpha-max", type=float, default=None, dest="alpha_max")
    sub.add_argument("--alpha-steps", type=int, default=None, dest="alpha_steps")
    sub.set_defaults(handler=cmd_entangle)

    sub = subs.add_parser("verify", help="run the claim registry against the oracle")
    sub.add_argument("--n-max", type=int, default=None, dest="n_max",
                     help="largest ring size for size-swept claims")
    sub.add_argument("--cascade-n", type=int, default=None, dest="cascade_n",
                     help="ring size for the cascade comparison")
    sub.add_argument("--threads", type=int, default=None)
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--out", default=None)
    sub.add_argument("--config", default=None)
    sub.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def console_main() -> None:
    sys.exit(main())
