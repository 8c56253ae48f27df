"""Command-line front end.

Every command builds a ``RunConfig`` and hands it to ``run``, which returns
the process exit code:

    0  success
    1  some representation failed verification
    2  the link spec, tangle text or options were invalid
    3  a numerical construction failed
"""
from __future__ import annotations

import logging
import sys
from functools import singledispatch
from pathlib import Path
from typing import Annotated, Callable, Literal, Optional

import typer
from pydantic import BaseModel, Field, ValidationError, field_validator

from montrep import __version__
from montrep.config import settings
from montrep.enumerate import ALL_CASES, enumerate_classes, fraction_str
from montrep.errors import InputError, NumericError
from montrep.mat2 import max_norm, mat_A
from montrep.models.link import MontesinosSpec
from montrep.models.output import (
    ComponentsOutput,
    ScanOutput,
    TangleEndsOutput,
    VerifyOutput,
)
from montrep.models.representation import EnumerationResult
from montrep.rational import tangle_data
from montrep.tangle import (
    Rational,
    Twist,
    build_montesinos_diagram,
    build_tangle_diagram,
    ends_closed_form,
    parse_montesinos,
    parse_tangle,
    propagate,
)
from montrep.tangle.closed_form import boundary_traces
from montrep.tangle.diagram import CORNERS
from montrep.verify import count_components, describe_link, scan_all_tuples, verify_classes

logger = logging.getLogger(__name__)

Command = Literal["enum", "verify", "scan", "tangle-ends", "components"]

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class RunConfig(BaseModel):
    command: Command
    spec: str | None = None
    cases: list[str] = Field(default_factory=lambda: list(ALL_CASES))
    tol: float = Field(default_factory=lambda: settings.tol, gt=0)
    samples: int = Field(default_factory=lambda: settings.samples, ge=1)
    seed: int = Field(default_factory=lambda: settings.seed)
    a_values: list[complex] | None = None
    grid: int = Field(default_factory=lambda: settings.scan_grid, ge=3)
    threshold: float = Field(1e-6, gt=0)
    n_list: list[int] | None = None
    s: complex = 1j
    dedupe: Literal["characters"] | None = None
    from_json: Path | None = None
    output: Path | None = None
    format: Literal["json", "text"] = "json"

    @field_validator("cases", mode="before")
    @classmethod
    def _split_cases(cls, value):
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        cases = [str(part).strip().lower() for part in value]
        unknown = sorted(set(cases) - set(ALL_CASES))
        if unknown:
            raise ValueError(f"unknown cases {unknown}; choose from {list(ALL_CASES)}")
        return cases

    @field_validator("n_list", mode="before")
    @classmethod
    def _split_ints(cls, value):
        if isinstance(value, str):
            return [int(part) for part in value.split(",") if part.strip()]
        return value

    def link(self) -> MontesinosSpec:
        if not self.spec:
            raise InputError(f"'{self.command}' needs a link spec such as M(1/1,1/1,1/1)")
        return parse_montesinos(self.spec)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _enumerate(config: RunConfig) -> tuple[BaseModel, bool]:
    result = enumerate_classes(
        config.link(),
        config.cases,
        tol=config.tol,
        samples=config.samples,
        seed=config.seed,
        a_values=config.a_values,
        dedupe=config.dedupe,
    )
    return result, result.report.failures == 0


def _verify(config: RunConfig) -> tuple[BaseModel, bool]:
    if config.from_json is not None:
        try:
            text = config.from_json.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {config.from_json}: {exc}") from exc
        saved = EnumerationResult.model_validate_json(text)
        spec = MontesinosSpec(fractions=saved.link.fractions, expansions=saved.expansions)
        classes = saved.classes
    else:
        spec = config.link()
        classes = enumerate_classes(
            spec, config.cases, tol=config.tol, samples=config.samples,
            seed=config.seed, a_values=config.a_values,
        ).classes
    output = verify_classes(spec, classes, config.tol)
    return output, output.passed


def _scan(config: RunConfig) -> tuple[BaseModel, bool]:
    spec = config.link()
    scans = scan_all_tuples(
        spec, config.grid, config.threshold, None if config.n_list is None else [config.n_list]
    )
    output = ScanOutput(
        link=describe_link(spec),
        mu=fraction_str(spec.mu),
        grid=config.grid,
        threshold=config.threshold,
        scans=scans,
    )
    return output, True


def _tangle_ends(config: RunConfig) -> tuple[BaseModel, bool]:
    if not config.spec:
        raise InputError("'tangle-ends' needs a tangle expression such as [[2,-1,3]]")
    expr = parse_tangle(config.spec)
    if isinstance(expr, MontesinosSpec):
        raise InputError("'tangle-ends' takes a tangle, not a closed link")
    diagram = build_tangle_diagram(expr)
    asg = propagate(diagram, mat_A(1), mat_A(config.s))
    ends = asg.ends(diagram)

    residual = None
    ks = None
    if isinstance(expr, Rational):
        ks = expr.ks
    elif isinstance(expr, Twist) and not expr.vertical:
        ks = [expr.k]
    if ks is not None:
        closed = ends_closed_form(tangle_data(ks), mat_A(1), mat_A(config.s), config.s)
        residual = max(float(max_norm(closed[c] - ends[c])) for c in CORNERS)

    fraction = expr.fraction
    output = TangleEndsOutput(
        expression=config.spec,
        fraction=None if fraction is None else fraction_str(fraction),
        crossings=len(diagram.crossings),
        s=config.s,
        ends=dict(ends),
        boundary_traces=list(boundary_traces(ends)),
        closed_form_residual=residual,
    )
    return output, residual is None or residual <= config.tol


def _components(config: RunConfig) -> tuple[BaseModel, bool]:
    spec = config.link()
    diagram = build_montesinos_diagram(spec)
    components = count_components(diagram)
    return ComponentsOutput(
        link=describe_link(spec, diagram),
        mu=fraction_str(spec.mu),
        knot=components == 1,
    ), True


_COMMANDS: dict[str, Callable[[RunConfig], tuple[BaseModel, bool]]] = {
    "enum": _enumerate,
    "verify": _verify,
    "scan": _scan,
    "tangle-ends": _tangle_ends,
    "components": _components,
}


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------

def _fmt(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}i"


@singledispatch
def render_text(output: BaseModel) -> str:
    return output.model_dump_json(by_alias=True, indent=2)


@render_text.register
def _(output: EnumerationResult) -> str:
    lines = [f"{output.link.spec}  mu={output.mu}  components={output.link.components}  seed={output.seed}"]
    for rep in output.classes:
        residual = "n/a" if rep.residual is None else f"{rep.residual:.2e}"
        status = "ok" if rep.verified else "FAIL"
        lines.append(
            f"  {rep.case:<22} {str(list(rep.params.discrete)):<20} sample={rep.params.sample} "
            f"a={_fmt(rep.a)} residual={residual} {status}"
        )
    totals = ", ".join(f"{case}={count}" for case, count in output.report.counts.items()) or "none"
    lines.append(f"totals: {totals}")
    lines.append(
        f"verified={output.report.verified} failures={output.report.failures} "
        f"skipped={output.report.skipped} merged={output.report.merged} "
        f"collisions={len(output.report.collisions)}"
    )
    return "\n".join(lines)


@render_text.register
def _(output: VerifyOutput) -> str:
    lines = [f"{output.link.spec}  tol={output.tol:.1e}"]
    for check in output.checks:
        status = "pass" if check.report.passed else f"FAIL at crossing {check.report.worst_crossing}"
        lines.append(
            f"  [{check.index}] {check.case:<22} {str(check.discrete):<20} "
            f"max residual {check.report.max_residual:.2e} {status}"
        )
    lines.append(f"{len(output.checks) - output.failures}/{len(output.checks)} classes pass")
    return "\n".join(lines)


@render_text.register
def _(output: ScanOutput) -> str:
    lines = [f"{output.link.spec}  mu={output.mu}  grid={output.grid}"]
    for scan in output.scans:
        found = ", ".join(
            f"{m.theta:.6f}{' (degenerate)' if m.degenerate else ''}" for m in scan.minima
        ) or "none"
        lines.append(f"  n={scan.n_list}: minima at theta = {found}")
        lines.extend(f"{theta:.8f}\t{'inf' if r is None else f'{r:.6e}'}" for theta, r in scan.table)
    return "\n".join(lines)


@render_text.register
def _(output: TangleEndsOutput) -> str:
    lines = [f"{output.expression}  fraction={output.fraction}  crossings={output.crossings}"]
    for corner, m in output.ends.items():
        lines.append(f"  {corner}: [[{_fmt(m[0, 0])}, {_fmt(m[0, 1])}], [{_fmt(m[1, 0])}, {_fmt(m[1, 1])}]]")
    tr_v, tr_h = output.boundary_traces
    lines.append(f"  tr(ne se) = {_fmt(tr_v)}  tr(sw se) = {_fmt(tr_h)}")
    if output.closed_form_residual is not None:
        lines.append(f"  closed form residual {output.closed_form_residual:.2e}")
    return "\n".join(lines)


@render_text.register
def _(output: ComponentsOutput) -> str:
    kind = "knot" if output.knot else "link"
    return f"{output.link.spec}: {output.link.components} component(s), {kind}, mu={output.mu}"


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

def _emit(config: RunConfig, output: BaseModel) -> None:
    text = render_text(output) if config.format == "text" else output.to_json()
    if config.output is not None:
        config.output.write_text(text + "\n")
        logger.info("wrote %s", config.output)
    else:
        typer.echo(text)


def run(config: RunConfig) -> int:
    """Execute one command and return its exit code."""
    try:
        output, ok = _COMMANDS[config.command](config)
    except (InputError, ValidationError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except NumericError as exc:
        logger.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    _emit(config, output)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# Typer app
# ---------------------------------------------------------------------------

app = typer.Typer(help="Tracefree SL(2,C) representations of Montesinos links.", no_args_is_help=True)

SpecArg = Annotated[Optional[str], typer.Argument(help='Link spec, e.g. "M(1/1,1/1,1/1)"')]
CasesOpt = Annotated[str, typer.Option("--cases", help="Comma-separated subset of i,ii,iii,iv,v")]
TolOpt = Annotated[Optional[float], typer.Option("--tol", help="Verification tolerance (default MONTREP_TOL)")]
SamplesOpt = Annotated[Optional[int], typer.Option("--samples", help="Samples per free family")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Random seed")]
AOpt = Annotated[Optional[list[str]], typer.Option("--a", help="Sample value of a for case iv (repeatable)")]
JsonOpt = Annotated[Optional[Path], typer.Option("--json", help="Write output to this file")]
FormatOpt = Annotated[str, typer.Option("--format", help="json or text")]
DedupeOpt = Annotated[Optional[str], typer.Option("--dedupe", help="'characters' merges classes with equal characters")]


def _finish(**fields) -> None:
    fields = {key: value for key, value in fields.items() if value is not None}
    try:
        config = RunConfig(**fields)
    except ValidationError as exc:
        typer.echo(f"invalid options: {exc}", err=True)
        raise typer.Exit(EXIT_INPUT)
    raise typer.Exit(run(config))


def _complex_list(values: list[str] | None) -> list[complex] | None:
    if not values:
        return None
    try:
        return [complex(v.replace(" ", "").replace("i", "j")) for v in values]
    except ValueError:
        typer.echo(f"cannot read complex values {values}", err=True)
        raise typer.Exit(EXIT_INPUT)


@app.callback()
def _setup(
    log_level: Annotated[str, typer.Option("--log-level", help="Logging level")] = settings.log_level,
) -> None:
    logging.basicConfig(
        level=log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@app.command("enum")
def enum_command(
    spec: SpecArg = None,
    cases: CasesOpt = ",".join(ALL_CASES),
    tol: TolOpt = None,
    samples: SamplesOpt = None,
    seed: SeedOpt = None,
    a: AOpt = None,
    dedupe: DedupeOpt = None,
    json: JsonOpt = None,
    fmt: FormatOpt = "json",
) -> None:
    """Enumerate representation classes case by case."""
    _finish(
        command="enum", spec=spec, cases=cases, tol=tol, samples=samples, seed=seed,
        a_values=_complex_list(a), dedupe=dedupe, output=json, format=fmt,
    )


@app.command("verify")
def verify_command(
    spec: SpecArg = None,
    from_json: Annotated[Optional[Path], typer.Option("--from-json", help="Re-verify a saved enumeration")] = None,
    cases: CasesOpt = ",".join(ALL_CASES),
    tol: TolOpt = None,
    samples: SamplesOpt = None,
    seed: SeedOpt = None,
    a: AOpt = None,
    json: JsonOpt = None,
    fmt: FormatOpt = "json",
) -> None:
    """Check classes against the crossing-level diagram."""
    _finish(
        command="verify", spec=spec, from_json=from_json, cases=cases, tol=tol, samples=samples,
        seed=seed, a_values=_complex_list(a), output=json, format=fmt,
    )


@app.command("scan")
def scan_command(
    spec: SpecArg = None,
    grid: Annotated[Optional[int], typer.Option("--grid", help="Number of theta samples on [0, 2 pi)")] = None,
    n: Annotated[Optional[str], typer.Option("--n", help="Comma-separated n_1..n_r; default scans all")] = None,
    threshold: Annotated[float, typer.Option("--threshold", help="Largest residual counted as a zero")] = 1e-6,
    json: JsonOpt = None,
    fmt: FormatOpt = "json",
) -> None:
    """Closure residual over theta for mu != 0 links."""
    _finish(
        command="scan", spec=spec, grid=grid, n_list=n, threshold=threshold, output=json, format=fmt,
    )


@app.command("tangle-ends")
def tangle_ends_command(
    expression: Annotated[Optional[str], typer.Argument(help='Tangle, e.g. "[[2,-1,3]]" or "[2] | [1/3] * [-1]"')] = None,
    s: Annotated[str, typer.Option("--s", help="Generating pair parameter s")] = "1j",
    tol: TolOpt = None,
    json: JsonOpt = None,
    fmt: FormatOpt = "json",
) -> None:
    """End matrices of a tangle for the generating pair (A(1), A(s))."""
    (value,) = _complex_list([s])
    _finish(command="tangle-ends", spec=expression, s=value, tol=tol, output=json, format=fmt)


@app.command("components")
def components_command(spec: SpecArg = None, json: JsonOpt = None, fmt: FormatOpt = "json") -> None:
    """Number of link components."""
    _finish(command="components", spec=spec, output=json, format=fmt)


@app.command("version")
def version_command() -> None:
    typer.echo(__version__)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
