"""Batch experiment runner: config -> noise -> solve -> statistics -> oracles.

Subcommands:

* ``run``      execute an experiment end to end and export all artifacts
* ``validate`` parse and validate a config, print the effective values
* ``oracle``   re-run the oracle panel against an exported solution

Exit codes: 0 success, 1 validation error, 2 solver guard abort, 3 oracle
failure.  Artifacts: ``stats.csv`` (columns t, x[, y], mean, variance;
complex-valued equations export the modulus of the mean), chaos-field
snapshot exports under ``solution/``, ``oracle_report.csv`` when a panel
ran, the effective config echo ``config.txt`` and ``manifest.txt`` listing
every emitted file.  Re-running with identical config and seed reproduces
all numeric payloads byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time

import numpy as np

from . import __version__
from .chaos import (
    ChaosField,
    hermite_transform_eval,
    load_chaos_field,
    mean_variance,
    sample_eval,
)
from .config import (
    ConfigError,
    ExperimentConfig,
    TIME_NOISE_EQUATIONS,
    build_config,
    load_config,
    parse_config_text,
)
from .grids import GridSpec
from .multiindex import IndexSet
from .noise import NoiseSpec, smooth, white_noise_field
from .oracle import (
    OracleReport,
    SUPPORTED_Z_EQUATIONS,
    default_z_panel,
    solve_deterministic_at_z,
    write_reports,
)
from .parallel import resolve_workers
from .solvers import (
    export_history,
    load_history,
    solve_benjamin_ono_wick,
    solve_heat_wick,
    solve_kdv_wick,
    solve_nls_wick,
    solve_nonlinear_heat_wick,
    solve_schrodinger_additive,
    solve_schrodinger_mult_wick,
    solve_transport_wick,
)
from .solvers.dispersive import benjamin_ono_periodic_wave, kdv_soliton
from .spectral import spectral_derivative

COMPLEX_EQUATIONS = ("schrodinger-additive", "schrodinger-mult", "nls")


# -- pipeline pieces -----------------------------------------------------------


def spatial_grid(cfg: ExperimentConfig) -> GridSpec:
    if cfg.is_2d:
        return GridSpec((cfg.nx, cfg.ny), (cfg.length, cfg.length_y))
    return GridSpec((cfg.nx,), (cfg.length,))


def build_noise(cfg: ExperimentConfig, grid: GridSpec) -> ChaosField | None:
    if cfg.equation not in TIME_NOISE_EQUATIONS or not cfg.noise_enabled:
        return None
    spec = NoiseSpec(
        kind=cfg.noise_kind,
        space_dim=grid.dim,
        time_extended=cfg.noise_time_extended,
        basis_count=cfg.effective_noise_basis,
        gamma=cfg.noise_gamma,
        seed=cfg.seed,
    )
    if cfg.noise_time_extended:
        ngrid = GridSpec(
            grid.shape + (cfg.noise_nt,),
            grid.lengths + (cfg.t_final,),
            tuple(grid.roles) + ("time",),
        )
    else:
        ngrid = grid
    return smooth(white_noise_field(spec, ngrid), spec.gamma)


def initial_profile_callable(cfg: ExperimentConfig, grid: GridSpec):
    """Analytic initial profile as a callable accepting complex arguments
    (1-D only); None when the configured profile has no closed form."""
    if grid.dim != 1:
        return None
    center = cfg.init_center if cfg.init_center is not None else cfg.length / 2.0
    amp, width = cfg.init_amplitude, cfg.init_width
    if cfg.init_profile == "gaussian":
        if cfg.init_k0 != 0.0:
            return lambda y: amp * np.exp(
                -((np.asarray(y) - center) ** 2) / (2 * width**2)
            ) * np.exp(1j * cfg.init_k0 * np.asarray(y))
        return lambda y: amp * np.exp(-((np.asarray(y) - center) ** 2) / (2 * width**2))
    if cfg.init_profile == "sine":
        k = 2 * np.pi * cfg.init_wavenumber / cfg.length
        return lambda y: amp * np.sin(k * np.asarray(y))
    if cfg.init_profile == "constant":
        return lambda y: amp * np.ones_like(np.asarray(y, dtype=float))
    if cfg.init_profile == "sech2":
        _, _, prof = kdv_soliton(grid, c=cfg.init_speed)
        return prof
    if cfg.init_profile == "bo-wave":
        _, _, prof = benjamin_ono_periodic_wave(grid, s=cfg.init_s)
        return prof
    return None


def build_initial(cfg: ExperimentConfig, grid: GridSpec, index_set: IndexSet) -> ChaosField:
    complex_valued = cfg.equation in COMPLEX_EQUATIONS
    if cfg.init_profile == "file":
        loaded = load_chaos_field(cfg.init_file)
        if loaded.grid is None or loaded.grid.shape != grid.shape or loaded.grid.lengths != grid.lengths:
            raise ConfigError(
                f"init.file: field grid {loaded.grid} does not match the experiment grid {grid}"
            )
        return ChaosField(index_set, dict(loaded.coeffs), loaded.tag, loaded.grid)
    if cfg.init_profile == "white-noise":
        spec = NoiseSpec(
            kind=cfg.noise_kind if cfg.noise_enabled else "gaussian",
            space_dim=grid.dim,
            time_extended=False,
            basis_count=cfg.chaos_n,
            gamma=cfg.init_gamma,
            seed=cfg.seed,
        )
        W = smooth(white_noise_field(spec, grid), cfg.init_gamma)
        coeffs = {a: cfg.init_amplitude * v for a, v in W.coeffs.items()}
        return ChaosField(index_set, coeffs, W.tag, grid)
    if cfg.init_profile == "zero":
        return ChaosField.zero(index_set, grid)
    prof = initial_profile_callable(cfg, grid)
    if grid.dim == 1:
        u0 = np.asarray(prof(grid.axis_coords(0)))
    else:
        X, Y = grid.meshes()
        cx = cfg.init_center if cfg.init_center is not None else grid.lengths[0] / 2.0
        cy = cfg.init_center_y if cfg.init_center_y is not None else grid.lengths[1] / 2.0
        if cfg.init_profile == "gaussian":
            u0 = cfg.init_amplitude * np.exp(
                -((X - cx) ** 2 + (Y - cy) ** 2) / (2 * cfg.init_width**2)
            )
            if cfg.init_k0 != 0.0:
                u0 = u0 * np.exp(1j * cfg.init_k0 * X)
        elif cfg.init_profile == "constant":
            u0 = cfg.init_amplitude * np.ones(grid.shape)
        elif cfg.init_profile == "sine":
            k = 2 * np.pi * cfg.init_wavenumber / grid.lengths[0]
            u0 = cfg.init_amplitude * np.sin(k * X)
        else:
            raise ConfigError(f"init.profile: {cfg.init_profile!r} is 1-D only")
    if complex_valued:
        u0 = u0.astype(complex)
    return ChaosField(index_set, {(): u0}, grid=grid)


def dispatch_solver(cfg: ExperimentConfig, noise, phi0, grid):
    T, dt, every, bound = cfg.t_final, cfg.dt, cfg.snapshot_every, cfg.sup_bound
    if cfg.equation == "transport":
        return solve_transport_wick(noise, phi0, grid, T, dt, snapshot_every=every,
                                    sup_bound=bound)
    if cfg.equation in ("heat", "kpz"):
        return solve_heat_wick(noise, phi0, cfg.sigma, grid, T, dt,
                               snapshot_every=every, sup_bound=bound)
    if cfg.equation == "nlheat":
        return solve_nonlinear_heat_wick(phi0, cfg.p, grid, T, dt,
                                         snapshot_every=every, sup_bound=bound)
    if cfg.equation == "schrodinger-additive":
        return solve_schrodinger_additive(noise, phi0, grid, T, dt, snapshot_every=every)
    if cfg.equation == "schrodinger-mult":
        return solve_schrodinger_mult_wick(noise, phi0, grid, T, dt,
                                           snapshot_every=every, sup_bound=bound)
    if cfg.equation == "nls":
        return solve_nls_wick(noise, phi0, grid, T, dt, snapshot_every=every,
                              sup_bound=bound)
    if cfg.equation == "kdv":
        return solve_kdv_wick(phi0, grid, T, dt, snapshot_every=every, sup_bound=bound)
    if cfg.equation == "bo":
        return solve_benjamin_ono_wick(phi0, grid, T, dt, snapshot_every=every,
                                       sup_bound=bound)
    raise ConfigError(f"equation: no solver for {cfg.equation!r}")


def write_stats_csv(path, history, grid: GridSpec) -> None:
    coords = [grid.axis_coords(i) for i in range(grid.dim)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + ["x", "y"][: grid.dim] + ["mean", "variance"])
        for t, snap in zip(history.times, history.snapshots):
            mean, var = mean_variance(snap)
            mean = np.abs(mean) if np.iscomplexobj(mean) else mean
            mean = np.broadcast_to(mean, grid.shape)
            var = np.broadcast_to(var, grid.shape)
            for idx in np.ndindex(grid.shape):
                pos = [repr(float(coords[i][idx[i]])) for i in range(grid.dim)]
                writer.writerow(
                    [repr(float(t))] + pos
                    + [repr(float(mean[idx])), repr(float(var[idx]))]
                )


def write_kpz_views_csv(path, history, grid: GridSpec, cfg: ExperimentConfig) -> list[str]:
    """Pathwise slope/exponential views of sampled final-surface realizations."""
    warnings = []
    final = history.final
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    n_dims = final.index_set.max_dims
    samples_h, samples_v = [], []
    for s in range(cfg.mc_samples):
        xi = rng.standard_normal(n_dims)
        phi = np.asarray(sample_eval(final, xi))
        if np.any(phi <= 0):
            warnings.append(f"sample {s}: nonpositive exponential view, skipped")
            continue
        h = np.log(phi) * (2 * 0.5 * cfg.sigma**2) / cfg.sigma**2  # (2 nu / lam) log phi
        samples_h.append(h)
        samples_v.append(-spectral_derivative(h, grid, 1, axis=0))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "h_mean", "h_variance", "v_mean", "v_variance"])
        if samples_h:
            H = np.stack(samples_h)
            V = np.stack(samples_v)
            x = grid.axis_coords(0)
            for i in range(grid.shape[0]):
                writer.writerow([
                    repr(float(x[i])),
                    repr(float(H[:, i].mean())), repr(float(H[:, i].var())),
                    repr(float(V[:, i].mean())), repr(float(V[:, i].var())),
                ])
    return warnings


# -- oracle panel ------------------------------------------------------------


def run_oracle_panel(cfg: ExperimentConfig, history, noise, grid: GridSpec,
                     panels: tuple[str, ...] | None = None) -> list[OracleReport]:
    panels = cfg.oracle_panel if panels is None else panels
    reports: list[OracleReport] = []
    if "per-z" in panels:
        reports.extend(_per_z_reports(cfg, history, noise, grid))
    if "conservation" in panels:
        reports.extend(_conservation_reports(cfg, history, grid))
    if "closed-form" in panels:
        reports.extend(_closed_form_reports(cfg, history, noise, grid))
    return reports


def _per_z_reports(cfg, history, noise, grid):
    if cfg.equation not in SUPPORTED_Z_EQUATIONS or grid.dim != 1:
        return []
    data = (
        initial_profile_callable(cfg, grid)
        if cfg.equation == "transport"
        else history.snapshots[0]
    )
    if data is None:
        return []
    dt_oracle = cfg.oracle_dt if cfg.oracle_dt is not None else cfg.dt
    reports = []
    final = history.final
    for z in default_z_panel(history.index_set.max_dims):
        try:
            oracle = solve_deterministic_at_z(
                cfg.equation, z, noise, data, grid, history.final_time,
                dt_oracle, sigma=cfg.sigma,
            )
        except ValueError:
            continue  # e.g. complex z with x-dependent transport noise
        sol = np.asarray(hermite_transform_eval(final, z))
        num = grid.l2_norm(sol - oracle)
        den = max(grid.l2_norm(oracle), 1e-300)
        reports.append(OracleReport.compare(
            f"per-z[{np.array2string(z, precision=2)}]",
            num / den, 0.0, 1e-3, relative=False,
        ))
    return reports


def _conservation_reports(cfg, history, grid):
    reports = []
    if len(history.snapshots) < 2:
        return reports
    if cfg.equation in ("schrodinger-mult", "schrodinger-additive", "nls"):
        z = np.zeros(history.index_set.max_dims)
        z[0] = 0.3
        norms = [
            grid.l2_norm(np.asarray(hermite_transform_eval(s, z)))
            for s in history.snapshots
        ]
        drift = max(abs(v - norms[0]) for v in norms) / max(norms[0], 1e-300)
        reports.append(OracleReport.compare("conservation[L2 at real z]",
                                            drift, 0.0, 1e-6, relative=False))
    if cfg.equation in ("kdv", "bo"):
        z = np.full(history.index_set.max_dims, 0.5)
        vals = [np.asarray(hermite_transform_eval(s, z)) for s in history.snapshots]
        masses = [float(np.real(grid.integral(v))) for v in vals]
        drift = max(abs(m - masses[0]) for m in masses)
        tol = 1e-8 if cfg.equation == "bo" else 1e-6
        reports.append(OracleReport.compare("conservation[integral at real z]",
                                            drift, 0.0, tol, relative=False))
        if cfg.equation == "kdv":
            l2s = [float(np.real(grid.integral(v * v))) for v in vals]
            drift2 = max(abs(m - l2s[0]) for m in l2s) / max(abs(l2s[0]), 1e-300)
            reports.append(OracleReport.compare("conservation[energy at real z]",
                                                drift2, 0.0, 1e-6, relative=False))
    return reports


def _closed_form_reports(cfg, history, noise, grid):
    reports = []
    if noise is not None or grid.dim != 1:
        return reports
    x = grid.axis_coords(0)
    center = cfg.init_center if cfg.init_center is not None else cfg.length / 2.0
    T = history.final_time
    if cfg.equation in ("heat", "kpz") and cfg.init_profile == "gaussian":
        w2 = cfg.init_width**2 + cfg.sigma**2 * T
        exact = cfg.init_amplitude * cfg.init_width / np.sqrt(w2) * np.exp(
            -((x - center) ** 2) / (2 * w2)
        )
        got = np.asarray(history.final.get(()))
        reports.append(OracleReport.compare(
            "closed-form[gaussian decay]",
            grid.l2_norm(got - exact) / grid.l2_norm(exact), 0.0, 1e-6, relative=False,
        ))
    if cfg.equation in ("schrodinger-additive", "schrodinger-mult") and cfg.init_profile == "gaussian" and cfg.init_k0 == 0.0:
        den = cfg.init_width**2 + 2j * T
        exact = cfg.init_amplitude * cfg.init_width / np.sqrt(den) * np.exp(
            -((x - center) ** 2) / (2 * den)
        )
        got = np.asarray(history.final.get(()))
        reports.append(OracleReport.compare(
            "closed-form[dispersive spreading]",
            grid.l2_norm(got - exact) / grid.l2_norm(exact), 0.0, 1e-6, relative=False,
        ))
    if cfg.equation == "nlheat" and cfg.init_profile == "constant":
        c = cfg.init_amplitude
        if cfg.p == 2:
            exact = c / (1.0 + c * T)
        else:
            exact = c / np.sqrt(1.0 + 2.0 * c**2 * T)
        got = float(np.real(np.mean(np.asarray(history.final.get(())))))
        reports.append(OracleReport.compare(
            "closed-form[reaction ode]", got, float(exact), 1e-8, relative=False,
        ))
    return reports


# -- experiment driver -------------------------------------------------------


def run_experiment(cfg: ExperimentConfig, out_dir: str | None = None) -> int:
    t_start = time.perf_counter()
    out = out_dir or cfg.out
    os.makedirs(out, exist_ok=True)
    files: list[str] = []

    with open(os.path.join(out, "config.txt"), "w") as fh:
        fh.write(cfg.echo())
    files.append("config.txt")

    grid = spatial_grid(cfg)
    index_set = IndexSet(cfg.chaos_k, cfg.chaos_n)
    noise = build_noise(cfg, grid)
    phi0 = build_initial(cfg, grid, index_set)

    history = dispatch_solver(cfg, noise, phi0, grid)

    sol_dir = os.path.join(out, "solution")
    for name in export_history(history, sol_dir):
        files.append(os.path.join("solution", name))

    write_stats_csv(os.path.join(out, "stats.csv"), history, grid)
    files.append("stats.csv")

    warnings = list(cfg.warnings)
    if cfg.equation == "kpz" and not history.aborted:
        warnings.extend(write_kpz_views_csv(os.path.join(out, "views.csv"),
                                            history, grid, cfg))
        files.append("views.csv")

    exit_code = 0
    reports: list[OracleReport] = []
    if history.aborted:
        exit_code = 2
    elif cfg.oracle_panel:
        reports = run_oracle_panel(cfg, history, noise, grid)
        code = write_reports(os.path.join(out, "oracle_report.csv"), reports)
        files.append("oracle_report.csv")
        exit_code = code

    status = {0: "ok", 2: "aborted", 3: "oracle-failed"}[exit_code]
    lines = [
        "format = wickpde-experiment v1",
        f"version = {__version__}",
        f"status = {status}",
        f"exit_code = {exit_code}",
        f"wallclock_seconds = {time.perf_counter() - t_start:.3f}",
        f"equation = {cfg.equation}",
        f"seed = {cfg.seed}",
        f"truncation_overflow = {history.total_overflow!r}",
        "manifest = manifest.txt",
    ]
    if history.abort_reason:
        lines.append(f"abort_reason = {history.abort_reason}")
    for w in warnings:
        lines.append(f"warning = {w}")
    for i, name in enumerate(sorted(files)):
        lines.append(f"file.{i} = {name}")
    for rep in reports:
        lines.append(f"oracle.{rep.name} = {'pass' if rep.passed else 'FAIL'}")
    with open(os.path.join(out, "manifest.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return exit_code


def rerun_oracles(out: str, threads: int | None = None) -> int:
    """Re-run the oracle panel against an exported experiment directory."""
    cfg = load_config(os.path.join(out, "config.txt"))
    grid = spatial_grid(cfg)
    noise = build_noise(cfg, grid)
    history = load_history(os.path.join(out, "solution"))
    panels = cfg.oracle_panel or ("per-z", "conservation", "closed-form")
    reports = run_oracle_panel(cfg, history, noise, grid, panels=panels)
    code = write_reports(os.path.join(out, "oracle_report.csv"), reports)
    for rep in reports:
        print(f"{'pass' if rep.passed else 'FAIL'}  {rep.name}")
    if not reports:
        print("no applicable oracle checks for this experiment")
    return code


# -- entry point ------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wickpde",
        description="Wick-quantized stochastic PDE experiments via chaos expansions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--threads", type=int, default=None)

    p_val = sub.add_parser("validate", help="validate a config without running")
    p_val.add_argument("--config", required=True)

    p_orc = sub.add_parser("oracle", help="re-run oracles on an exported run")
    p_orc.add_argument("--out", required=True)
    p_orc.add_argument("--threads", type=int, default=None)

    args = parser.parse_args(argv)

    if args.command == "validate":
        try:
            cfg = load_config(args.config)
        except (ConfigError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print("OK")
        for w in cfg.warnings:
            print(f"warning: {w}")
        print(cfg.echo(), end="")
        return 0

    if args.command == "oracle":
        resolve_workers(args.threads)
        try:
            return rerun_oracles(args.out, args.threads)
        except (ConfigError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        resolve_workers(cfg.threads)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for w in cfg.warnings:
        print(f"warning: {w}", file=sys.stderr)
    try:
        return run_experiment(cfg, out_dir=args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
