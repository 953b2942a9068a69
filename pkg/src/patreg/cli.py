"""patreg command line: validate, indicators, generate, check.

Exit codes: 0 success, 1 internal error, 2 validation failure,
3 oracle mismatch, 64 usage or I/O error.
"""

from __future__ import annotations

import sys
import time
import traceback
from pathlib import Path

import click

from . import equivalence, indicators
from .ingest import DatasetManifest, IngestError, load_dataset, validate_links, write_dataset
from .model import (
    AUXILIARY_KINDS, REFERENCE_KINDS, BulletinOrder, CohortSpec, IndicatorKind, OutputMode,
    Params, StepMode, ValidationMode,
)
from .output import Format, render, render_skipped, write_atomic
from .store import build_store
from .synth import GeneratorConfig, embed_scenarios, generate_fixture, reference_scenarios

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2, 3, 64
DATA_ENV = "PATREG_DATA"
SKIPPED_FILE = "skipped_members.csv"


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _manifest(directory: str, overrides: tuple[str, ...], mode: ValidationMode) -> DatasetManifest:
    files = {}
    for item in overrides:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise click.BadParameter(f"expected NAME=PATH, got {item!r}", param_hint="--table")
        files[name.strip()] = path.strip()
    try:
        return DatasetManifest(Path(directory), files, mode)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--table") from exc


def _load(manifest: DatasetManifest):
    try:
        return load_dataset(manifest)
    except FileNotFoundError as exc:
        raise _Exit(EXIT_USAGE, str(exc)) from exc
    except IngestError as exc:
        raise _Exit(EXIT_INVALID, f"invalid dataset: {exc}") from exc
    except OSError as exc:
        raise _Exit(EXIT_USAGE, str(exc)) from exc


_table_option = click.option("--table", "tables", multiple=True, metavar="NAME=PATH",
                             help="Override the file for one table (relative to DIR or absolute).")


@click.group()
@click.version_option(package_name="patreg")
def cli():
    """Indicators over patent register and core table dumps."""


@cli.command()
@click.argument("directory", envvar=DATA_ENV, type=click.Path(file_okay=False))
@_table_option
def validate(directory, tables):
    """Check every table and every cross-table link; exit 0 only when clean."""
    dataset, report = _load(_manifest(directory, tables, ValidationMode.LENIENT))
    report.extend(validate_links(dataset))
    click.echo(report.render(), nl=False)
    return EXIT_OK if report.clean else EXIT_INVALID


def _selection(names: tuple[str, ...], all_: bool, aux: bool) -> tuple[IndicatorKind, ...]:
    if names and all_:
        raise click.UsageError("--indicator and --all are mutually exclusive")
    if not names and not all_:
        raise click.UsageError("choose --indicator NAME or --all")
    if all_:
        return REFERENCE_KINDS + (AUXILIARY_KINDS if aux else ())
    kinds = []
    for name in names:
        try:
            kind = IndicatorKind(name)
        except ValueError:
            raise click.BadParameter(
                f"unknown indicator {name!r}; choose from {', '.join(k.value for k in IndicatorKind)}",
                param_hint="--indicator") from None
        if kind not in kinds:
            kinds.append(kind)
    return tuple(kinds)


@cli.command(name="indicators")
@click.argument("directory", envvar=DATA_ENV, type=click.Path(file_okay=False))
@_table_option
@click.option("--auth", default="EP", show_default=True, help="Filing authority of cohort members.")
@click.option("--kinds", default="A,W", show_default=True, help="Comma-separated application kinds.")
@click.option("--year-from", type=int, default=2000, show_default=True)
@click.option("--year-to", type=int, default=2010, show_default=True)
@click.option("--ipc-prefix", default="F03D", show_default=True)
@click.option("--indicator", "names", multiple=True, metavar="NAME", help="Indicator to run; repeatable.")
@click.option("--all", "all_", is_flag=True, help="Run the nine reference tables.")
@click.option("--aux", is_flag=True, help="With --all, also run transfer_signals and amendment_kinds.")
@click.option("--mode", type=click.Choice([m.value for m in OutputMode]), default="default", show_default=True)
@click.option("--ordering", type=click.Choice([o.value for o in BulletinOrder]), default=None,
              help="Bulletin ordering for first_representative; follows --mode when omitted.")
@click.option("--step-mode", type=click.Choice([s.value for s in StepMode]), default=None,
              help="Averaging rule for avg_proc_steps; follows --mode when omitted.")
@click.option("--format", "fmt", type=click.Choice([f.value for f in Format]), default="csv", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Output directory; standard output when omitted (single indicator only).")
def indicators_cmd(directory, tables, auth, kinds, year_from, year_to, ipc_prefix, names, all_, aux,
                   mode, ordering, step_mode, fmt, out):
    """Select the cohort and write one result table per indicator."""
    selected = _selection(names, all_, aux)
    if out is None and len(selected) > 1:
        raise click.UsageError("--out is required when more than one indicator is selected")
    try:
        spec = CohortSpec(auth, frozenset(k.strip() for k in kinds.split(",") if k.strip()),
                          year_from, year_to, ipc_prefix)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    output_mode = OutputMode(mode)
    base = Params.paper_compat(cohort=spec) if output_mode is OutputMode.PAPER_COMPAT else Params(cohort=spec)
    params = Params(spec, base.mode, BulletinOrder(ordering) if ordering else base.ordering,
                    StepMode(step_mode) if step_mode else base.step_mode, base.challenge_codes, base.appr)
    fmt = Format(fmt)

    dataset, _ = _load(_manifest(directory, tables, ValidationMode.STRICT))
    store = build_store(dataset)
    cohort = indicators.select_cohort(store, spec)
    for kind in selected:
        result = indicators.evaluate(store, kind, params, cohort=cohort)
        for w in result.warnings:
            click.echo(f"warning: {w}", err=True)
        data = render(result, fmt, output_mode)
        if out is None:
            click.get_binary_stream("stdout").write(data)
        else:
            write_atomic(Path(out) / f"{kind.value}{fmt.suffix}", data)
    if out is not None:
        write_atomic(Path(out) / SKIPPED_FILE, render_skipped(cohort.skipped))
    elif cohort.skipped:
        click.echo(f"{len(cohort.skipped)} cohort members have no register row", err=True)
    return EXIT_OK


@cli.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n", "n_applications", type=click.IntRange(min=0), default=100, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option("--year-from", type=int, default=GeneratorConfig.year_from, show_default=True)
@click.option("--year-to", type=int, default=GeneratorConfig.year_to, show_default=True)
@click.option("--p-not-entered", type=float, default=GeneratorConfig.p_not_entered, show_default=True)
@click.option("--p-wind", type=float, default=GeneratorConfig.p_wind, show_default=True)
@click.option("--p-citations", type=float, default=GeneratorConfig.p_citations, show_default=True)
@click.option("--p-license", type=float, default=GeneratorConfig.p_license, show_default=True)
@click.option("--p-grant", type=float, default=GeneratorConfig.p_grant, show_default=True)
@click.option("--scenarios", is_flag=True, help="Embed the reference-table scenarios.")
def generate(out, scenarios, **knobs):
    """Write a seeded synthetic fixture in the ingest format."""
    try:
        config = GeneratorConfig(**knobs)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    dataset = generate_fixture(config)
    if scenarios:
        dataset = embed_scenarios(dataset, reference_scenarios())
    try:
        write_dataset(dataset, out)
    except OSError as exc:
        raise _Exit(EXIT_USAGE, f"cannot write {out}: {exc}") from exc
    click.echo(f"wrote {sum(dataset.summary().values())} rows to {out}")
    return EXIT_OK


@cli.command()
@click.argument("directory", required=False, type=click.Path(file_okay=False))
@click.option("--seeds", type=click.IntRange(min=0), default=10, show_default=True,
              help="Number of generated seeds (0, 1, ...) to compare.")
@click.option("--max-n", type=click.IntRange(min=1), default=500, show_default=True,
              help="Largest generated fixture size.")
def check(directory, seeds, max_n):
    """Compare the indexed evaluator against the naive oracle."""
    start = time.perf_counter()
    if directory is not None:
        dataset, _ = _load(DatasetManifest(Path(directory)))
        diff = equivalence.first_difference(dataset)
        if diff:
            click.echo(f"{directory}: {diff}")
            return EXIT_MISMATCH
    for seed, diff in equivalence.check_seeds(range(seeds), max_n):
        if diff:
            click.echo(f"seed {seed}: {diff}")
            return EXIT_MISMATCH
    where = f"{directory} and " if directory else ""
    click.echo(f"{where}{seeds} seeds: indexed == oracle ({time.perf_counter() - start:.1f}s)")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        code = cli.main(args=argv, prog_name="patreg", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_INTERNAL
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_INTERNAL
    except _Exit as exc:
        if str(exc):
            click.echo(str(exc), err=True)
        return exc.code
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
