"""Command-line entry point: ``eitcv {qnd-sweep,clone-report,stirap-run,oracle-check}``."""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import checks, stirap
from .atomic import BECMedium, CoherentMedium, FockMedium, SpinMoments, spin_moments
from .cloning import clone
from .gaussian import ValidationError
from .io import load_config, write_csv, write_json
from .qnd import PolaritonAngle, correlation_report, qnd_condition_check

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3

DEFAULT_MEDIA = (
    {"name": "phi_pi4", "kind": "bec", "n_atoms": 1000, "pop1": 0.3, "phi": math.pi / 4},
    {"name": "phi_0", "kind": "bec", "n_atoms": 1000, "pop1": 0.3, "phi": 0.0},
)
SWEEP_HEADER = ("theta", "C1_Q", "C2_Q", "C3_Q", "C1_P", "C2_P", "C3_P", "V_Q_xi", "V_P_xi", "qnd_Q", "qnd_P")


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    """Evaluate concurrently, return results in input order."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def build_medium(spec: dict[str, Any]):
    kind = spec.get("kind", "bec")
    if kind == "bec":
        return BECMedium.from_population(int(spec.get("n_atoms", 1000)), float(spec["pop1"]), float(spec.get("phi", 0.0)))
    if kind == "fock":
        return FockMedium(int(spec["n1"]), int(spec["n2"]))
    if kind == "coherent":
        return CoherentMedium()
    raise ValidationError(f"unknown medium kind {kind!r}")


def theta_grid(n: int, lo: float = 0.0, hi: float = math.pi / 2) -> np.ndarray:
    """n points from lo (inclusive) to hi (exclusive)."""
    if n < 2:
        raise ValidationError(f"grid needs at least 2 points, got {n}")
    if not 0.0 <= lo < hi <= math.pi / 2:
        raise ValidationError(f"angle grid must satisfy 0 <= lo < hi <= pi/2, got [{lo}, {hi})")
    return np.linspace(lo, hi, n, endpoint=False)


def sweep_rows(medium, thetas, margin: float, workers: int = 1) -> list[list[float]]:
    xi = spin_moments(medium)
    signal = SpinMoments.coherent()

    def row(theta: float) -> list[float]:
        angle = PolaritonAngle(float(theta))
        rep = correlation_report(signal, xi, angle)
        ok_q, ok_p = qnd_condition_check(xi, angle, margin)
        return [
            float(theta),
            rep.q.c1, rep.q.c2, rep.q.c3,
            rep.p.c1, rep.p.c2, rep.p.c3,
            xi.v_q, xi.v_p,
            float(ok_q), float(ok_p),
        ]

    return _pmap(row, list(thetas), workers)


def cmd_qnd_sweep(args, cfg: dict) -> int:
    sec = cfg.get("sweep", {})
    n = args.grid or int(sec.get("n_points", 201))
    thetas = theta_grid(n, float(sec.get("theta_min", 0.0)), float(sec.get("theta_max", math.pi / 2)))
    margin = args.margin if args.margin is not None else float(sec.get("margin", 0.1))
    media = sec.get("media", list(DEFAULT_MEDIA))
    built = [(spec.get("name", f"medium{i}"), build_medium(spec), spec) for i, spec in enumerate(media)]
    for name, medium, spec in built:
        rows = sweep_rows(medium, thetas, margin, args.workers)
        meta = {"command": "qnd-sweep", "n_points": n, "margin": margin, "medium": spec,
                "theta_min": float(thetas[0]), "theta_max_exclusive": float(sec.get("theta_max", math.pi / 2))}
        path = write_csv(Path(args.out) / f"qnd_sweep_{name}.csv", SWEEP_HEADER, rows, meta)
        print(f"wrote {path}")
    return EXIT_OK


def _signal(spec: dict) -> SpinMoments:
    return SpinMoments(float(spec.get("mean_q", 0.0)), float(spec.get("mean_p", 0.0)),
                       float(spec.get("v_q", 1.0)), float(spec.get("v_p", 1.0)), float(spec.get("cov_qp", 0.0)))


def cmd_clone_report(args, cfg: dict) -> int:
    sec = cfg.get("clone", {})
    signal = _signal(sec.get("signal", {}))
    medium_spec = sec.get("medium", {"kind": "bec", "n_atoms": 1000, "pop1": 0.5, "phi": math.pi / 4})
    angle = PolaritonAngle(float(sec.get("theta", math.pi / 4)))
    rep = clone(signal, build_medium(medium_spec), angle)
    payload = {"command": "clone-report", "medium": medium_spec, **rep.as_dict()}
    out = Path(args.out)
    print(f"wrote {write_json(out / 'clone_report.json', payload)}")
    print(f"fidelity {rep.fidelity:.12g}" + (f" (claimed {rep.claimed_fidelity})" if rep.claimed_fidelity else ""))
    for note in rep.notes:
        print(f"note: {note}")

    grid = sec.get("grid")
    if grid is not None or args.grid:
        grid = grid or {}
        n_pop = args.grid or int(grid.get("n_pop", 21))
        n_phi = args.grid or int(grid.get("n_phi", 21))
        n_atoms = int(grid.get("n_atoms", medium_spec.get("n_atoms", 1000)))
        if n_pop < 2 or n_phi < 2:
            raise ValidationError("clone grid needs at least 2 points per axis")
        cells = [(p, f) for p in np.linspace(0.0, 1.0, n_pop) for f in np.linspace(0.0, math.pi, n_phi)]

        def cell(pf):
            r = clone(signal, BECMedium.from_population(n_atoms, float(pf[0]), float(pf[1])), angle)
            cq, cp = r.correlations["Q"], r.correlations["P"]
            return [pf[0], pf[1], r.fidelity, r.fidelity_dark, *r.added_noise, *cq, *cp]

        rows = _pmap(cell, cells, args.workers)
        header = ("pop1", "phi", "F", "F_dark", "added_Q", "added_P", "C1_Q", "C2_Q", "C3_Q", "C1_P", "C2_P", "C3_P")
        meta = {"command": "clone-report", "theta": angle.theta, "n_pop": n_pop, "n_phi": n_phi,
                "n_atoms": n_atoms, "signal": sec.get("signal", {})}
        print(f"wrote {write_csv(out / 'clone_grid.csv', header, rows, meta)}")
    return EXIT_OK


def stirap_setup(sec: dict) -> tuple[stirap.StirapState, stirap.StirapParams, float]:
    """Preset (counterintuitive) with any key in the config block overriding it."""
    initial, params, t_end = stirap.counterintuitive_preset(
        sec.get("variant", "printed"), float(sec.get("n_atoms", 100.0)), float(sec.get("n_photons", 1000.0))
    )
    width = float(sec.get("width", params.kappa_pulse.width))
    shape = sec.get("shape", "gaussian")
    k_pulse = stirap.Pulse(float(sec.get("kappa_center", 6 * width)), width, shape)
    o_pulse = stirap.Pulse(float(sec.get("omega2_center", 4 * width)), width, shape)
    params = stirap.StirapParams(
        kappa=float(sec.get("kappa", 5.0 / width)),
        omega2_peak=float(sec.get("omega2_peak", 1.0 / width)),
        kappa_pulse=k_pulse,
        omega2_pulse=o_pulse,
        delta1=float(sec.get("delta1", 0.0)),
        delta2=float(sec.get("delta2", 0.0)),
        lam=np.array(sec.get("lam", np.zeros((3, 3))), dtype=float),
        gamma=tuple(sec.get("gamma", (0.0, 0.0, 0.0))),
        variant=sec.get("variant", "printed"),
        laser_omega1=sec.get("laser_omega1"),
        laser_omega2=sec.get("laser_omega2"),
    )
    if "initial" in sec:
        amps = [complex(*pair) for pair in sec["initial"]]
        if len(amps) != 4:
            raise ValidationError("initial must list four [re, im] pairs (a1, a2, a3, f)")
        initial = stirap.StirapState(*amps)
    return initial, params, float(sec.get("t_end", 10 * width))


def _trajectory_rows(traj: stirap.Trajectory, params: stirap.StirapParams) -> list[list[float]]:
    n = traj.populations
    theta = stirap.eit_angle_trace(traj, params)
    a = traj.amps
    cols = [traj.t]
    for j in range(4):
        cols += [a[:, j].real, a[:, j].imag]
    cols += [n[:, 0], n[:, 1], n[:, 2], n[:, 3], traj.q1, traj.q2, theta]
    return np.column_stack(cols).tolist()


TRAJ_HEADER = ("t", "a1_re", "a1_im", "a2_re", "a2_im", "a3_re", "a3_im", "f_re", "f_im",
               "n1", "n2", "n3", "nf", "Q1", "Q2", "theta")


def _summary(traj: stirap.Trajectory, elapsed: float) -> dict:
    d = traj.diagnostics
    return {
        "variant": traj.variant,
        "q1_drift": d.q1_drift,
        "q2_drift": d.q2_drift,
        "variant_charge_drift": d.variant_charge_drift,
        "max_n3_over_n": d.max_n3_over_n,
        "molecular_fraction": d.molecular_fraction,
        "adiabatic_fraction": float(np.mean(d.adiabatic)),
        "rhs_evaluations": d.nfev,
        "runtime_s": elapsed,
    }


def cmd_stirap_run(args, cfg: dict) -> int:
    sec = dict(cfg.get("stirap", {}))
    variant = args.variant or sec.get("variant", "printed")
    variants = ("printed", "symmetrized") if variant == "compare" else (variant,)
    sec["variant"] = variants[0]
    initial, params, t_end = stirap_setup(sec)
    opts = {k: sec[k] for k in ("rel_tol", "abs_tol", "n_samples", "method") if k in sec}
    out = Path(args.out)
    summaries, trajs = {}, {}
    for v in variants:
        p = replace(params, variant=v)
        t0 = time.perf_counter()
        traj = stirap.integrate(initial, p, t_end, **opts)
        summaries[v] = _summary(traj, time.perf_counter() - t0)
        trajs[v] = traj
        meta = {"command": "stirap-run", "variant": v, "t_end": t_end, "config": sec, **{k: str(x) for k, x in opts.items()}}
        print(f"wrote {write_csv(out / f'stirap_{v}.csv', TRAJ_HEADER, _trajectory_rows(traj, p), meta)}")
    # runtimes are machine dependent; keep them out of the files so output is reproducible
    payload = {v: {k: x for k, x in s.items() if k != "runtime_s"} for v, s in summaries.items()}
    if len(variants) == 2:
        a, b = (trajs[v].populations for v in variants)
        payload["difference"] = {
            "max_abs_population_diff": dict(zip(("n1", "n2", "n3", "nf"), np.max(np.abs(a - b), axis=0).tolist())),
            "final_molecular_fraction": {v: summaries[v]["molecular_fraction"] for v in variants},
        }
    name = "stirap_compare.json" if len(variants) == 2 else "stirap_summary.json"
    print(f"wrote {write_json(out / name, payload)}")
    for v, s in summaries.items():
        print(f"{v}: Q1 drift {s['q1_drift']:.3e}, Q2 drift {s['q2_drift']:.3e}, "
              f"max n3/N {s['max_n3_over_n']:.4f}, molecular fraction {s['molecular_fraction']:.4f}")
    return EXIT_OK


def cmd_oracle_check(args, cfg: dict) -> int:
    sec = cfg.get("oracle", {})
    oc = checks.OracleConfig()
    for key in ("seed", "n_random", "cutoff", "amp_cutoff", "clone_atoms", "fock_n1"):
        if key in sec:
            setattr(oc, key, int(sec[key]))
    for key in ("tol_moments", "tol_closed_form", "tolerance_scale"):
        if key in sec:
            setattr(oc, key, float(sec[key]))
    if "n_sweep" in sec:
        oc.n_sweep = tuple(int(n) for n in sec["n_sweep"])
    if args.self_test:
        oc.tolerance_scale = -1.0

    def show(r: checks.CheckResult) -> None:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag}  {r.delta:10.3e}  tol {r.tolerance:9.2e}  {r.name}" + (f"  [{r.detail}]" if r.detail else ""))

    results = checks.run_suite(oc, progress=show)
    payload = {
        "results": [{"name": r.name, "delta": r.delta, "tolerance": r.tolerance, "passed": r.passed, "detail": r.detail}
                    for r in results],
        "condensate_sweep": oc.fitted.get("condensate"),
        "fock_sweep": oc.fitted.get("fock"),
    }
    print(f"wrote {write_json(Path(args.out) / 'oracle_check.json', payload)}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_NUMERICAL if failed else EXIT_OK


COMMANDS = {
    "qnd-sweep": cmd_qnd_sweep,
    "clone-report": cmd_clone_report,
    "stirap-run": cmd_stirap_run,
    "oracle-check": cmd_oracle_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eitcv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="TOML config file")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--workers", type=int, default=1, help="threads for sweep points / grid cells")
        if name in ("qnd-sweep", "clone-report"):
            p.add_argument("--grid", type=int, default=None, help="grid points (per axis for clone-report)")
        if name == "qnd-sweep":
            p.add_argument("--margin", type=float, default=None, help="QND condition margin")
        if name == "stirap-run":
            p.add_argument("--variant", choices=(*stirap.VARIANTS, "compare"), default=None)
        if name == "oracle-check":
            p.add_argument("--self-test", action="store_true", help="corrupt every tolerance; must exit nonzero")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except (ValidationError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
