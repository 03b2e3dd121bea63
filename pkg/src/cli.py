"""
Interface en ligne de commande : reproduit les données de chaque figure.

Usage :

    python -m src.cli [--config run.json] [--out outputs] [--tol 1e-10] <commande>

Commandes : pt-region, metric-solve, ep {solve,toy}, evolve, wigner, figures.
Codes de sortie : 0 succès, 2 configuration, 3 domaine, 4 précision.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from src import config
from src.amplifier.metric import metric_report
from src.amplifier.signals import pt_region_scan
from src.api.schemas import RunConfig
from src.data_processing.export import (
    pt_region_frame,
    wigner_filename,
    write_frame,
    write_wigner_grid,
)
from src.data_processing.load_config import build_amplifier_spec, load_run_config
from src.exceptions import AccuracyError, AmplifierError, ConfigError, NoMetricError
from src.modeling.ep_solver import (
    BRANCHES,
    select_smooth_variant,
    toy_signals,
    toy_solution,
    trajectory_frame,
)
from src.modeling.pipeline import (
    TOY_DOMAIN,
    ModePipeline,
    amplifier_pipeline,
    numeric_toy_pipeline,
    toy_pipeline,
)
from src.modeling.states import covariance_frame, density_frame, phase_trajectory
from src.modeling.wigner import (
    CatSpec,
    default_axes,
    origin_interference,
    wigner_closed,
    wigner_grid,
    wigner_grid_numeric,
)

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

BRANCH_FILE_TAGS = {"1+": "1p", "1-": "1m", "2+": "2p", "2-": "2m"}


def _output_dir(cfg: RunConfig, override: Optional[str]) -> Path:
    out = Path(override or cfg.output_dir or config.OUTPUT_DIR)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _time_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.ep.t_start, cfg.ep.t_end, cfg.ep.n_times)


def _pipeline(cfg: RunConfig, t_span: Optional[tuple[float, float]] = None) -> ModePipeline:
    """Modèle jouet (forme close) ou chaîne amplificateur → EP numérique selon `ep.mode`."""
    if cfg.ep.mode == "toy":
        if cfg.ep.eta0 != 1.0:
            logger.warning(f"η₀={cfg.ep.eta0} ignoré : la forme close du modèle jouet suppose η₀ = 1.")
        return toy_pipeline(cfg.ep.c1, cfg.ep.c2, cfg.ep.branch, cfg.ep.variant, t_span or TOY_DOMAIN)
    span = t_span or (cfg.ep.t_start, cfg.ep.t_end)
    return amplifier_pipeline(
        build_amplifier_spec(cfg),
        cfg.metric.kappa,
        span,
        tol=cfg.tolerances.ode_rtol,
        hermiticity_tol=cfg.tolerances.hermiticity,
        eta0=cfg.ep.eta0,
    )


def cmd_pt_region(cfg: RunConfig, out: Path, args: argparse.Namespace) -> int:
    region = cfg.pt_region
    alphas, betas, grid = pt_region_scan(region.alpha_range, region.beta_range, region.n)
    write_frame(pt_region_frame(alphas, betas, grid), out / "pt_region.csv")
    return 0


def cmd_metric_solve(cfg: RunConfig, out: Path, args: argparse.Namespace) -> int:
    report = metric_report(
        build_amplifier_spec(cfg),
        cfg.metric.kappa,
        cfg.metric.t,
        cfg.tolerances.root,
        cfg.tolerances.hermiticity,
    )
    if report["identity"]:
        print("identity metric : α = β, Ĥ déjà hermitien")
    for key, value in report.items():
        print(f"{key} = {value:.12g}" if isinstance(value, float) else f"{key} = {value}")
    write_frame(pd.DataFrame([report]), out / "metric_report.csv")
    return 0


def cmd_ep(cfg: RunConfig, out: Path, args: argparse.Namespace) -> int:
    times = _time_grid(cfg)
    if args.ep_command == "toy":
        M0, _ = toy_signals()
        for branch in BRANCHES:
            solution = toy_solution(cfg.ep.c1, cfg.ep.c2, branch, cfg.ep.variant)
            write_frame(
                trajectory_frame(solution, M0, times),
                out / f"ep_trajectory_{BRANCH_FILE_TAGS[branch]}.csv",
            )
        verdict = select_smooth_variant(cfg.ep.c1, cfg.ep.c2, cfg.ep.branch, (cfg.ep.t_start, cfg.ep.t_end))
        print(f"variante lisse retenue : {verdict['genuine']}")
        print(f"saut maximal de η̇ (|sin|) : {verdict['abs']['max_jump']:.6g}")

        numeric = numeric_toy_pipeline(
            cfg.ep.c1, cfg.ep.c2, cfg.ep.branch, (cfg.ep.t_start, cfg.ep.t_end), cfg.tolerances.ode_rtol
        )
        exact = toy_solution(cfg.ep.c1, cfg.ep.c2, cfg.ep.branch, "smooth")
        deviation = float(np.max(np.abs(np.abs(numeric.solution.eta(times)) - np.abs(exact.eta(times)))))
        print(f"écart numérique / forme close : {deviation:.3e}")
        return 0

    pipeline = amplifier_pipeline(
        build_amplifier_spec(cfg),
        cfg.metric.kappa,
        (cfg.ep.t_start, cfg.ep.t_end),
        tol=cfg.tolerances.ode_rtol,
        hermiticity_tol=cfg.tolerances.hermiticity,
        eta0=cfg.ep.eta0,
    )
    write_frame(trajectory_frame(pipeline.solution, pipeline.M0, times), out / "ep_trajectory_numeric.csv")
    return 0


def cmd_evolve(cfg: RunConfig, out: Path, args: argparse.Namespace) -> int:
    times = _time_grid(cfg)
    pipeline = _pipeline(cfg)
    pipeline.reference_time = float(times[0])
    coefficients = cfg.density.complex_coefficients()

    logger.info("Étape 1 : trajectoire η(t) et coefficients g")
    write_frame(trajectory_frame(pipeline.solution, pipeline.M0, times), out / "evolve_trajectory.csv")

    logger.info("Étape 2 : phases dynamiques et géométriques")
    phases = pd.concat(
        [phase_trajectory(n, pipeline, times, tol=cfg.tolerances.quad).to_frame() for n in sorted(coefficients)],
        ignore_index=True,
    )
    write_frame(phases, out / "evolve_phases.csv")

    logger.info("Étape 3 : densité de probabilité |ψ(x, t)|²")
    x = np.linspace(cfg.density.x_min, cfg.density.x_max, cfg.density.nx)
    write_frame(density_frame(coefficients, pipeline, x, times), out / "evolve_density.csv")

    logger.info("Étape 4 : covariance et marges RSUP")
    write_frame(covariance_frame(min(coefficients), pipeline, times), out / "evolve_covariance.csv")
    return 0


def cmd_wigner(cfg: RunConfig, out: Path, args: argparse.Namespace) -> int:
    times = sorted(cfg.wigner.times)
    span = (min(TOY_DOMAIN[0], times[0]), max(TOY_DOMAIN[1], times[-1]))
    if cfg.ep.mode != "toy":
        span = (times[0], times[-1] if times[-1] > times[0] else times[0] + 1.0)
    pipeline = _pipeline(cfg, span)
    cat = CatSpec(cfg.cat.x0, cfg.cat.p0)
    options = dict(cos_coeffs=tuple(cfg.cat.cos_coeffs), convention=cfg.cat.convention)

    origin_rows = []
    worst = 0.0
    for t in times:
        g = complex(pipeline.mode(t))
        grid = wigner_grid(
            g, cat, cfg.wigner.nx, cfg.wigner.np, t=t, normalized=cfg.cat.normalized,
            n_jobs=config.N_JOBS, **options,
        )
        write_wigner_grid(grid, out / wigner_filename(t))
        origin_rows.append(
            {"t": t, "W00": origin_interference(g, cat, normalized=cfg.cat.normalized, **options)}
        )

        if args.oracle_check:
            x, p = default_axes(g, cat, config.ORACLE_GRID_SIZE, config.ORACLE_GRID_SIZE)
            bounds = (x[0], x[-1], p[0], p[-1])
            oracle = wigner_grid_numeric(
                g, cat, len(x), len(p), bounds, t, cfg.cat.convention, n_jobs=config.N_JOBS
            )
            closed = wigner_closed(x[:, None], p[None, :], g, cat, **options)
            deviation = float(np.max(np.abs(closed - oracle.W)))
            print(f"t={t:g} : écart forme close / oracle = {deviation:.3e}, résidu imaginaire = {oracle.imag_residue:.3e}")
            worst = max(worst, deviation)

    write_frame(pd.DataFrame(origin_rows), out / "wigner_origin.csv")
    if args.oracle_check and worst > cfg.tolerances.oracle:
        raise AccuracyError(
            f"Écart forme close / oracle {worst:.3e} supérieur à {cfg.tolerances.oracle:.1e}",
            best_estimate=worst,
        )
    return 0


def cmd_figures(cfg: RunConfig, out: Path, args: argparse.Namespace) -> int:
    args.ep_command = "toy"
    for step in (cmd_pt_region, cmd_metric_solve, cmd_ep, cmd_evolve, cmd_wigner):
        logger.info(f"figures : {step.__name__}")
        step(cfg, out, args)
    return 0


COMMANDS = {
    "pt-region": cmd_pt_region,
    "metric-solve": cmd_metric_solve,
    "ep": cmd_ep,
    "evolve": cmd_evolve,
    "wigner": cmd_wigner,
    "figures": cmd_figures,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Amplificateur paramétrique PT-symétrique : génération des données des figures.",
    )
    parser.add_argument("--config", help="Fichier JSON RunConfig.")
    parser.add_argument("--out", help="Répertoire de sortie (prioritaire sur la configuration).")
    parser.add_argument("--oracle-check", action="store_true", help="Compare W à l'oracle numérique.")
    parser.add_argument("--tol", type=float, help="Tolérance des racines et de l'intégration d'EP.")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="Niveau de journalisation.")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("pt-region", help="Région PT non brisée dans le plan (α, β).")
    sub.add_parser("metric-solve", help="Résolution de κ₀ et oscillateur hermitien.")
    ep = sub.add_parser("ep", help="Équation d'Ermakov-Pinney.")
    ep.add_argument("ep_command", choices=("solve", "toy"))
    sub.add_parser("evolve", help="η(t), phases, densité et covariance.")
    sub.add_parser("wigner", help="Grilles de Wigner et interférence à l'origine.")
    sub.add_parser("figures", help="Toutes les commandes.")
    return parser


def _apply_tolerance(cfg: RunConfig, tol: Optional[float]) -> RunConfig:
    if tol is None:
        return cfg
    if tol <= 0:
        raise ConfigError(f"--tol doit être positif (reçu {tol}).")
    tolerances = cfg.tolerances.model_copy(update={"root": tol, "ode_rtol": tol})
    return cfg.model_copy(update={"tolerances": tolerances})


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.getLogger().setLevel(args.log_level.upper())
    try:
        cfg = _apply_tolerance(load_run_config(args.config), args.tol)
        out = _output_dir(cfg, args.out)
        logger.info(f"Commande '{args.command}' : sorties dans {out}")
        return COMMANDS[args.command](cfg, out, args)
    except AmplifierError as e:
        logger.error(f"Échec de '{args.command}' ({type(e).__name__}) : {e}")
        print(f"erreur : {e}", file=sys.stderr)
        if isinstance(e, NoMetricError):
            for key, value in e.report.items():
                print(f"  balayage {key} : {value}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"Erreur d'entrée/sortie : {e}", exc_info=True)
        print(f"erreur d'écriture : {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
