"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 numerical-applicability error,
4 I/O error. Files without an explicit path go to ``$OSCNET_OUTPUT_DIR``
(default: the current directory).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import generators
from .dynamics import (
    fundamental_residual,
    initial_velocity,
    project,
    remove_zero_mode_velocity,
    solve_bosonic,
    solve_fermionic,
    time_grid,
    total_energy,
    trajectory_csv,
    trajectory_json,
    zero_mode_velocity,
)
from .errors import InvalidParams, OscnetError, SolverInapplicable, ValidationError
from .graph import dump_graph, graph_from_dict, laplacian_bundle, load_graph, weakly_connected_components
from .hamiltonian import algebra_checks, build_hamiltonian, hamiltonian_pattern_matches, pauli_check
from .matrixio import matrix_csv, pattern_grid
from .oracle import integrate_wave
from .polarization import PotentialParams, bosonic_existence, run_polarization_scenario
from .spectral import decompose, pattern_matches, sqrt_laplacian

EXIT_IO = 4


def output_dir() -> Path:
    return Path(os.environ.get("OSCNET_OUTPUT_DIR", "."))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _tolerances(args) -> dict:
    return {
        "zero_tol": args.zero_tol,
        "complex_tol": args.complex_tol,
        "cond_max": args.cond_max,
    }


def _random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)


def _parse_state(values, n: int) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 2:
        arr = arr[:, 0] + 1j * arr[:, 1]
    if arr.shape != (2 * n,):
        raise InvalidParams(f"initial state must have {2 * n} entries")
    return arr.astype(complex)


# --- commands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    kind = args.kind
    if kind in ("path", "cycle", "star", "complete"):
        params = {"n": args.n, "w": args.weight}
    elif kind == "two-cluster":
        try:
            sizes = tuple(int(s) for s in args.sizes.split(","))
        except ValueError as exc:
            raise InvalidParams(f"bad --sizes {args.sizes!r}") from exc
        params = {
            "sizes": sizes,
            "intra": args.intra,
            "bridge": args.bridge,
            "bridges": args.bridges,
            "chord_prob": args.chord_prob,
            "seed": args.seed,
        }
    else:
        params = {
            "n": args.n,
            "p": args.p,
            "wmin": args.wmin,
            "wmax": args.wmax,
            "directed": args.directed,
            "seed": args.seed,
        }
    g = generators.generate(kind, **params)
    if args.out is None:
        sys.stdout.write(json.dumps(g.to_dict(), sort_keys=True) + "\n")
    else:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        dump_graph(g, path)
    return 0


def analyze_graph(g, tolerances: dict, pattern_tol=None) -> dict:
    bundle = laplacian_bundle(g)
    dec = decompose(bundle.L, **tolerances)
    root = sqrt_laplacian(dec, pattern_tol)
    ham = build_hamiltonian(bundle)
    return {
        "n": g.n,
        "num_edges": g.num_edges,
        "graph_hash": g.digest(),
        "symmetric": g.is_symmetric(),
        "components": len(weakly_connected_components(g)),
        "eigenvalues": [float(v) for v in dec.eigenvalues],
        "frequencies": [float(v) for v in dec.omegas],
        "zero_mode_count": dec.zero_mode_count,
        "condition": dec.condition,
        "reconstruction_error": dec.reconstruction_error,
        "sqrt_pattern": pattern_matches(root.S, bundle.L, root.pattern_tol),
        "sqrt_reconstruction_error": float(np.max(np.abs(root.S @ root.S - bundle.L))),
        "hamiltonian_pattern_matches": hamiltonian_pattern_matches(ham),
        "hamiltonian_form_discrepancy": ham.form_discrepancy,
        "pauli": pauli_check(ham),
        "algebra": algebra_checks(),
    }


def cmd_analyze(args) -> int:
    g = load_graph(args.graph)
    text = _dumps(analyze_graph(g, _tolerances(args), args.pattern_tol))
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    g = load_graph(args.graph)
    bundle = laplacian_bundle(g)
    dec = decompose(bundle.L, **_tolerances(args))
    ham = build_hamiltonian(bundle)
    n = g.n

    if args.init_file:
        x_hat = _parse_state(json.loads(Path(args.init_file).read_text()), n)
    else:
        x_hat = _random_state(n, args.seed)
        if args.init == "random":
            x_hat = remove_zero_mode_velocity(ham, dec, x_hat)
    times = time_grid(args.t_max, args.dt)
    summary = {"solver": args.solver, "graph_hash": g.digest(), "n": n, "samples": len(times)}

    if args.solver == "fermionic":
        traj = solve_fermionic(ham, dec, x_hat, times)
        summary["zero_mode_velocity"] = zero_mode_velocity(ham, dec, x_hat)
        if not args.no_check:
            ref = integrate_wave(bundle.L, project(x_hat), initial_velocity(ham, x_hat), times, args.dt_internal)
            scale = float(np.max(np.abs(traj.projected)))
            summary["oracle_max_rel_deviation"] = float(np.max(np.abs(traj.projected - ref.projected))) / scale
    elif args.solver == "bosonic":
        admissible = bosonic_existence(g, args.pattern_tol, dec=dec)
        if not admissible and not args.force:
            raise SolverInapplicable(
                "bosonic solution refused: sqrt(L) links nodes that L leaves unlinked "
                "(sqrt_pattern=false); pass --force to run anyway"
            )
        traj = solve_bosonic(dec, x_hat[0::2], x_hat[1::2], times, graph=g)
        summary["admissible"] = admissible
        if len(times) >= 3:
            summary["residual_plus"] = fundamental_residual(dec, traj, "plus")
            summary["residual_minus"] = fundamental_residual(dec, traj, "minus")
        norms = np.linalg.norm(traj.plus(), axis=1)
        summary["norm_drift_plus"] = float(np.max(np.abs(norms - norms[0])))
    else:
        traj = integrate_wave(bundle.L, project(x_hat), initial_velocity(ham, x_hat), times, args.dt_internal)
        if g.is_symmetric():
            e = [total_energy(bundle.L, x, v) for x, v in zip(traj.projected, traj.velocities)]
            summary["energy_initial"] = e[0]
            summary["energy_max_drift"] = float(np.max(np.abs(np.array(e) - e[0])))

    out = Path(args.out) if args.out else output_dir() / "trajectory.csv"
    traj.meta.update({"dt": args.dt, "tolerances": {k: v for k, v in _tolerances(args).items() if v is not None}})
    _write(out, trajectory_json(traj) if out.suffix == ".json" else trajectory_csv(traj))
    summary["output"] = str(out)
    sys.stdout.write(_dumps(summary))
    return 0


def _scenario_graph(spec):
    if isinstance(spec, str):
        return load_graph(spec)
    if isinstance(spec, dict) and "generate" in spec:
        params = dict(spec["generate"])
        kind = params.pop("kind")
        if "sizes" in params:
            params["sizes"] = tuple(params["sizes"])
        return generators.generate(kind, **params)
    if isinstance(spec, dict):
        return graph_from_dict(spec)
    raise ValidationError("config 'graph' must be a path, a graph object or a generator spec")


def cmd_polarize(args) -> int:
    try:
        cfg = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{args.config}: {exc}") from exc
    if not isinstance(cfg, dict) or "graph" not in cfg:
        raise ValidationError("config must be an object with a 'graph' entry")
    g = _scenario_graph(cfg["graph"])
    time_cfg = cfg.get("time", {})
    times = time_grid(float(time_cfg.get("t_max", 10.0)), float(time_cfg.get("dt", 0.05)))
    init = cfg.get("init", {})
    if "values" in init:
        x_hat = _parse_state(init["values"], g.n)
    else:
        x_hat = _random_state(g.n, int(init.get("seed", cfg.get("seed", 0))))
    pot = cfg.get("potential")
    params = PotentialParams(float(pot["a"]), float(pot["b"])) if pot else None
    report = run_polarization_scenario(
        g,
        float(cfg.get("theta", 0.5)),
        float(cfg.get("clique_weight", 1.0)),
        x_hat,
        times,
        potential_params=params,
        pattern_tol=cfg.get("tolerances", {}).get("pattern_tol"),
    )
    out_dir = Path(args.out_dir) if args.out_dir else output_dir()
    _write(out_dir / "report.json", _dumps(report.to_dict()))
    _write(out_dir / "pre.csv", trajectory_csv(report.pre_trajectory))
    for k, traj in enumerate(report.post_trajectories):
        if traj is not None:
            _write(out_dir / f"component_{k}.csv", trajectory_csv(traj))
    sys.stdout.write(
        _dumps(
            {
                "components": len(report.components),
                "zero_modes": [report.zero_modes_pre, report.zero_modes_post],
                "bosonic_existence": [report.sqrt_pattern_pre, report.sqrt_pattern_post],
                "report": str(out_dir / "report.json"),
            }
        )
    )
    return 0


def cmd_export(args) -> int:
    g = load_graph(args.graph)
    bundle = laplacian_bundle(g)
    dec = decompose(bundle.L, **_tolerances(args))
    ham = build_hamiltonian(bundle)
    out_dir = Path(args.out_dir) if args.out_dir else output_dir()
    mats = {
        "A": bundle.A,
        "D": bundle.D,
        "L": bundle.L,
        "H": bundle.H,
        "N": bundle.N,
        "P": dec.P,
        "P_inv": dec.P_inv,
        "Lambda": dec.Lambda,
        "Omega": dec.Omega,
        "Mho": dec.Mho,
        "sqrtL": sqrt_laplacian(dec, args.pattern_tol).S,
        "H_hat": ham.H_hat,
    }
    for name, M in mats.items():
        _write(out_dir / f"{name}.csv", matrix_csv(M))
    _write(out_dir / "H_hat_blocks.pbm", pattern_grid(ham.block_pattern))
    sys.stdout.write(_dumps({"written": sorted(mats) + ["H_hat_blocks"], "dir": str(out_dir)}))
    return 0


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--zero-tol", type=float, default=None)
    tol.add_argument("--complex-tol", type=float, default=None)
    tol.add_argument("--cond-max", type=float, default=1e12)
    tol.add_argument("--pattern-tol", type=float, default=None)

    ap = argparse.ArgumentParser(prog="oscnet", description="Oscillation dynamics and polarization scenarios on weighted digraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("kind", choices=["path", "cycle", "complete", "star", "two-cluster", "random"])
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--weight", type=float, default=1.0)
    p.add_argument("--sizes", default="6,6")
    p.add_argument("--intra", type=float, default=1.0)
    p.add_argument("--bridge", type=float, default=0.1)
    p.add_argument("--bridges", type=int, default=2)
    p.add_argument("--chord-prob", type=float, default=0.3)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--wmin", type=float, default=0.5)
    p.add_argument("--wmax", type=float, default=2.0)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (.json or edge-list text); stdout if omitted")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", parents=[tol], help="spectral and Hamiltonian diagnostics")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", parents=[tol], help="integrate a trajectory")
    p.add_argument("graph")
    p.add_argument("--solver", choices=["fermionic", "bosonic", "oracle"], default="fermionic")
    p.add_argument("--init", choices=["random", "raw-random"], default="random",
                   help="'random' strips zero-mode velocity, 'raw-random' keeps it")
    p.add_argument("--init-file", help="JSON list of 2n values or [re, im] pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--dt-internal", type=float, default=1e-3)
    p.add_argument("--force", action="store_true", help="run bosonic even when inadmissible")
    p.add_argument("--no-check", action="store_true", help="skip the RK4 comparison")
    p.add_argument("--out", help="trajectory file (.csv or .json)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("polarize", help="run a polarization scenario from a JSON config")
    p.add_argument("config")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser("export", parents=[tol], help="dump all matrices as CSV")
    p.add_argument("graph")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OscnetError as exc:
        print(f"oscnet {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, UnicodeDecodeError) as exc:
        print(f"oscnet {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
