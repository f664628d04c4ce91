"""Command-line entry point: ``kinkpanel <command> [options]``.

Exit status is 0 on success, 1 when an estimation fails and 2 for usage
errors (bad flags or config, unreadable inputs, unknown specifications).
"""

from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Sequence
import argparse
import logging
import sys

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap_breakpoints
from .config import RunManifest, build_manifest
from .errors import ConfigError, KinkPanelError, SpecError
from .ingest import aggregate_panel, parse_input_tables
from .kink import binned_residuals, estimate_kink, fit_linear
from .metrics import (
    DerivedObservation,
    derive_panel,
    describe_samples,
    quarterly_trends,
    read_panel,
    write_panel,
)
from .report import (
    binned_frame,
    bootstrap_frame,
    describe_frame,
    draws_frame,
    grid_frame,
    render_bootstrap,
    render_describe,
    render_report,
    trends_frame,
    write_csv,
    write_report,
)
from .specs import DEFAULT_BOOTSTRAP_SPECS, SPEC_NAMES, EstimationSpec, get_specs
from .synth import DgpConfig, generate_panel, read_dgp_config, write_records

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ESTIMATION = 1
EXIT_USAGE = 2


def _inputs(parser: argparse.ArgumentParser, panel: bool = True) -> None:
    parser.add_argument("--proposals", help="proposals CSV")
    parser.add_argument("--votes", help="votes CSV")
    parser.add_argument("--voters", help="optional recorded-voters CSV")
    if panel:
        parser.add_argument("--panel", help="panel CSV written by build-panel")


def _estimation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--spec",
        action="append",
        help=f"specification to estimate, repeatable ({', '.join(SPEC_NAMES)})",
    )
    parser.add_argument("--grid-points", type=int, help="candidate cutoffs (default: 101)")
    parser.add_argument("--grid-lo", type=float, help="lower grid percentile (default: 10)")
    parser.add_argument("--grid-hi", type=float, help="upper grid percentile (default: 90)")
    parser.add_argument(
        "--absorber",
        choices=("projections", "dummies"),
        help="fixed-effect absorber (default: projections)",
    )
    parser.add_argument("--threads", type=int, help="worker threads (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinkpanel",
        description="DAO governance panels and fixed-effects kink regressions",
    )
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: .)")
    common.add_argument("--config", help="file of 'key = value' option lines")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="errors only")

    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    build = commands.add_parser(
        "build-panel", parents=[common], help="aggregate raw records into a panel"
    )
    _inputs(build, panel=False)

    describe = commands.add_parser(
        "describe", parents=[common], help="descriptive statistics of the nested samples"
    )
    _inputs(describe)

    fit = commands.add_parser(
        "fit", parents=[common], help="linear and kink fits with grid and binned data"
    )
    _inputs(fit)
    _estimation(fit)
    fit.add_argument("--bins", type=int, help="binned-residual bins (default: 20)")

    boot = commands.add_parser(
        "bootstrap", parents=[common], help="DAO cluster bootstrap of the cutoffs"
    )
    _inputs(boot)
    _estimation(boot)
    boot.add_argument("--reps", type=int, help="replications (default: 300)")
    boot.add_argument("--seed", type=int, help="master seed (default: 0)")

    simulate = commands.add_parser(
        "simulate", parents=[common], help="synthetic panel and raw records"
    )
    simulate.add_argument("--dgp", help="file of 'key = value' DGP parameters")
    simulate.add_argument("--seed", type=int, help="overrides the DGP seed")

    binscatter = commands.add_parser(
        "binscatter", parents=[common], help="binned residuals at a cutoff"
    )
    _inputs(binscatter)
    _estimation(binscatter)
    binscatter.add_argument("--bins", type=int, help="bins (default: 20)")
    binscatter.add_argument("--cutoff", type=float, help="cutoff (default: estimated)")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )
    logging.getLogger("kinkpanel").setLevel(level)


def load_panel(manifest: RunManifest) -> List[DerivedObservation]:
    if manifest.panel is not None:
        if manifest.proposals is not None or manifest.votes is not None:
            raise SpecError("give either --panel or --proposals/--votes, not both")
        return read_panel(manifest.panel)
    if manifest.proposals is None or manifest.votes is None:
        raise SpecError("need --panel, or --proposals and --votes")
    tables = parse_input_tables(manifest.proposals, manifest.votes, manifest.voters)
    return derive_panel(aggregate_panel(tables.proposals, tables.votes, tables.voters))


def select_specs(
    manifest: RunManifest,
    panel: Sequence[DerivedObservation],
    default: Sequence[EstimationSpec],
) -> List[EstimationSpec]:
    specs = get_specs(manifest.specs) if manifest.specs else list(default)
    has_voters = any(obs.number_of_voters is not None for obs in panel)
    for spec in specs:
        if spec.requires_voters and not has_voters:
            raise SpecError(f"{spec.name} needs recorded voter counts (--voters)")
    return specs


def _build_panel(manifest: RunManifest) -> None:
    if manifest.proposals is None or manifest.votes is None:
        raise SpecError("build-panel needs --proposals and --votes")
    panel = load_panel(manifest)
    path = manifest.out / "panel.csv"
    write_panel(panel, path)
    daos = len({obs.dao_id for obs in panel})
    print(f"{path}: {len(panel)} DAO-quarters, {daos} DAOs")


def _describe(manifest: RunManifest) -> None:
    panel = load_panel(manifest)
    tables = describe_samples(panel)
    text = render_describe(tables)
    write_csv(describe_frame(tables), manifest.out / "describe.csv")
    (manifest.out / "describe.txt").write_text(text, encoding="utf-8")
    write_csv(trends_frame(quarterly_trends(panel)), manifest.out / "trends.csv")
    print(text, end="")


def _fit(manifest: RunManifest) -> None:
    panel = load_panel(manifest)
    specs = select_specs(manifest, panel, get_specs(["capacity"]))
    for spec in specs:
        dataset = spec.dataset(panel)
        linear = fit_linear(dataset, manifest.absorber)
        fit = estimate_kink(
            dataset,
            p_lo=manifest.grid_lo,
            p_hi=manifest.grid_hi,
            count=manifest.grid_points,
            absorber=manifest.absorber,
            threads=manifest.threads,
        )
        points = binned_residuals(dataset, fit.cutoff, manifest.bins, manifest.absorber)
        report = render_report(fit, linear, spec)
        write_report(report, manifest.out / f"fit_{spec.name}")
        write_csv(grid_frame(fit), manifest.out / f"grid_{spec.name}.csv")
        write_csv(binned_frame(points), manifest.out / f"binned_{spec.name}.csv")
        print(report.text)


def _bootstrap(manifest: RunManifest) -> None:
    panel = load_panel(manifest)
    config = BootstrapConfig(
        replications=manifest.reps,
        master_seed=manifest.seed or 0,
        specs=tuple(select_specs(manifest, panel, DEFAULT_BOOTSTRAP_SPECS)),
        grid_lo=manifest.grid_lo,
        grid_hi=manifest.grid_hi,
        grid_points=manifest.grid_points,
        absorber=manifest.absorber,
        threads=manifest.threads,
    )
    summaries = bootstrap_breakpoints(panel, config)
    write_csv(bootstrap_frame(summaries), manifest.out / "bootstrap.csv")
    write_csv(draws_frame(summaries), manifest.out / "bootstrap_draws.csv")
    print(render_bootstrap(summaries), end="")


def _simulate(manifest: RunManifest) -> None:
    config = read_dgp_config(manifest.dgp) if manifest.dgp is not None else DgpConfig()
    if manifest.seed is not None:
        config = replace(config, seed=manifest.seed)
    synthetic = generate_panel(config)
    write_records(synthetic, manifest.out)
    write_panel(synthetic.panel, manifest.out / "panel.csv")
    interior = "inside" if synthetic.cutoff_interior else "OUTSIDE"
    print(
        f"{manifest.out}: {len(synthetic.panel)} DAO-quarters, true cutoff"
        f" {config.true_cutoff} ({interior} the P10-P90 range)"
    )


def _binscatter(manifest: RunManifest) -> None:
    panel = load_panel(manifest)
    for spec in select_specs(manifest, panel, get_specs(["capacity"])):
        dataset = spec.dataset(panel)
        cutoff = manifest.cutoff
        if cutoff is None:
            cutoff = estimate_kink(
                dataset,
                p_lo=manifest.grid_lo,
                p_hi=manifest.grid_hi,
                count=manifest.grid_points,
                absorber=manifest.absorber,
                threads=manifest.threads,
            ).cutoff
        points = binned_residuals(dataset, cutoff, manifest.bins, manifest.absorber)
        path = manifest.out / f"binned_{spec.name}.csv"
        write_csv(binned_frame(points), path)
        print(f"{path}: {len(points)} bins at cutoff {cutoff:.4f}")


_COMMANDS: Dict[str, Callable[[RunManifest], None]] = {
    "build-panel": _build_panel,
    "describe": _describe,
    "fit": _fit,
    "bootstrap": _bootstrap,
    "simulate": _simulate,
    "binscatter": _binscatter,
}


def execute(manifest: RunManifest) -> int:
    """Runs one command and returns its exit status"""
    try:
        manifest.out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error("cannot create output directory %s: %s", manifest.out, e.strerror)
        return EXIT_USAGE
    try:
        _COMMANDS[manifest.command](manifest)
    except KinkPanelError as e:
        logger.error("%s", e)
        return EXIT_USAGE if e.usage else EXIT_ESTIMATION
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_ESTIMATION
    except OSError as e:
        logger.error("cannot write output: %s", e)
        return EXIT_USAGE
    return EXIT_OK


_NOT_OPTIONS = ("command", "config", "verbose", "quiet")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(args.verbose, args.quiet)
    flags: Dict[str, Any] = {k: v for k, v in vars(args).items() if k not in _NOT_OPTIONS}
    try:
        manifest = build_manifest(args.command, flags, args.config)
    except ConfigError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    return execute(manifest)


def run() -> None:
    sys.exit(main())

