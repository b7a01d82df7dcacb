"""
Command-line entry point: run, sweep, audit and validate
"""

import functools
import json
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import Any, Dict, Optional

import click

from rts_backtrack.config import RunConfig
from rts_backtrack.exceptions import (
    ConfigurationError,
    FormatError,
    FrameworkError,
    MapParseError,
    ValidationError,
)
from rts_backtrack.framework.agent import run_search
from rts_backtrack.framework.audit import audit_trace
from rts_backtrack.graph.validation import validate_problem
from rts_backtrack.harness.fixtures import FIXTURES, load_fixture
from rts_backtrack.harness.generators import GENERATOR_KINDS, gen_problem, problem_corpus
from rts_backtrack.harness.gridmap import HEURISTIC_KINDS, grid_to_problem, parse_grid_map
from rts_backtrack.harness.problem_file import load_problem
from rts_backtrack.harness.trace import emit_trace, read_trace
from rts_backtrack.lab.sweep import fit_linear_class, records_to_csv, sweep_quota
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.policies import POLICIES

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    TIMEOUT = 3
    PARSE_ERROR = 4
    CONFIG_ERROR = 5
    AUDIT_VIOLATION = 6
    INVALID_PROBLEM = 7
    SEARCH_ERROR = 8


def _fail(message: str, code: ExitCode) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(int(code))


def handle_errors(command):
    """Map library exceptions onto exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (MapParseError, FormatError) as exc:
            _fail(str(exc), ExitCode.PARSE_ERROR)
        except ConfigurationError as exc:
            _fail(str(exc), ExitCode.CONFIG_ERROR)
        except ValidationError as exc:
            _fail(str(exc), ExitCode.INVALID_PROBLEM)
        except FrameworkError as exc:
            _fail(f"search failed: {exc}", ExitCode.SEARCH_ERROR)

    return wrapper


def problem_options(command):
    """Options selecting the problem: a map, a problem file, a fixture or a generator."""
    options = [
        click.option("--map", "map_file", type=click.Path(exists=True, dir_okay=False), help="Grid map file"),
        click.option("--problem", "problem_file", type=click.Path(exists=True, dir_okay=False), help="YAML problem file"),
        click.option("--fixture", type=click.Choice(sorted(FIXTURES)), help="Named built-in problem"),
        click.option("--gen", type=click.Choice(GENERATOR_KINDS), help="Generate a problem"),
        click.option("--size", type=int, default=20, show_default=True, help="States of a generated problem"),
        click.option("--seed", type=int, default=0, show_default=True, help="Generator seed"),
        click.option("--h0", type=click.Choice(HEURISTIC_KINDS), default="manhattan", show_default=True,
                     help="Initial heuristic for grid maps"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def algo_options(command):
    """Flags mirroring the RunConfig keys."""
    options = [
        click.option("--algo", type=click.Choice(sorted(POLICIES)), help="Search algorithm"),
        click.option("--theta", help="Admissibility weight"),
        click.option("--quota", help="Learning quota T (real units, 'inf' for none)"),
        click.option("--gamma-bar", help="Heuristic weight bound; runs use gamma = gamma-bar"),
        click.option("--dmax", "d_max", type=int, help="Lookahead depth cap"),
        click.option("--k", type=int, help="Segment length for piecewise search"),
        click.option("--tie-seed", type=int, help="Seed for random tie-breaking"),
        click.option("--accounting", type=click.Choice(["total", "axiom"]), help="Learning accounting mode"),
        click.option("--audit", type=click.Choice(["on", "off"]), help="Audit every transition"),
        click.option("--budget", type=int, help="Cycle budget per run"),
        click.option("--acyclic/--cyclic", default=None, help="Cut cycles out of the stack"),
        click.option("--enforce-quota/--no-enforce-quota", default=None, help="Replace over-quota moves"),
        click.option("--out", type=click.Path(dir_okay=False), help="Output file (stdout if omitted)"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def resolve_config(ctx: click.Context, overrides: Dict[str, Any]) -> RunConfig:
    config: RunConfig = ctx.obj["config"]
    return config.merged(overrides).validate()


def load_problem_source(config: RunConfig, map_file, problem_file, fixture, gen, size, seed, h0) -> ProblemSpec:
    chosen = [name for name, value in (("map", map_file), ("problem", problem_file),
                                       ("fixture", fixture), ("gen", gen)) if value]
    if len(chosen) != 1:
        raise ConfigurationError("Choose exactly one problem source: --map, --problem, --fixture or --gen")
    if map_file:
        path = Path(map_file)
        return grid_to_problem(parse_grid_map(path.read_text(), name=path.stem), theta=config.theta, h0=h0)
    if problem_file:
        return load_problem(problem_file)
    if fixture:
        return load_fixture(fixture)
    if gen == "chain":
        return gen_problem(gen, size, theta=config.theta)
    return gen_problem(gen, size, seed, theta=config.theta)


def write_output(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
        logger.info(f"Wrote {out}")
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="YAML run configuration")
@click.option("--log-level", help="Logging level (default WARNING, or RTS_LOG_LEVEL)")
@click.version_option(package_name="rts-backtrack")
@click.pass_context
@handle_errors
def main(ctx: click.Context, config_file: Optional[str], log_level: Optional[str]):
    """Real-time heuristic search with backtracking: runs, sweeps and audits."""
    config = RunConfig()
    if config_file:
        config = RunConfig.from_yaml(config_file, base=config)
    config = RunConfig.from_environment(base=config)
    if log_level:
        config = config.merged({"log_level": log_level})
    logging.basicConfig(
        level=config.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


def _overrides(**values) -> Dict[str, Any]:
    return {key: value for key, value in values.items() if value is not None}


@main.command()
@problem_options
@algo_options
@click.option("--trace-format", type=click.Choice(["csv", "table"]), help="Trace output format")
@click.pass_context
@handle_errors
def run(ctx, map_file, problem_file, fixture, gen, size, seed, h0, trace_format, **flags):
    """Run one search and write its trace."""
    config = resolve_config(ctx, _overrides(trace_format=trace_format, **flags))
    problem = load_problem_source(config, map_file, problem_file, fixture, gen, size, seed, h0)
    params = config.to_params(problem.epsilon)
    result = run_search(config.make_policy(), problem, params, budget=config.budget, audit=config.audit)

    write_output(emit_trace(result, problem, config.trace_format), config.out)
    click.echo(json.dumps(result.to_dict()), err=True)

    if result.audit:
        _fail(f"{len(result.audit)} audit violation(s); first: {result.audit[0]}", ExitCode.AUDIT_VIOLATION)
    if result.timed_out:
        _fail(f"budget of {result.cycles} cycles spent before reaching a goal", ExitCode.TIMEOUT)


@main.command()
@problem_options
@algo_options
@click.option("--quotas", default="0,1,2,4,8", show_default=True, help="Comma-separated learning quotas")
@click.option("--count", type=int, default=1, show_default=True,
              help="Random problems with consecutive seeds (--gen random only)")
@click.option("--workers", type=int, help="Worker processes")
@click.option("--fit/--no-fit", default=False, help="Report a linear envelope fit")
@click.pass_context
@handle_errors
def sweep(ctx, map_file, problem_file, fixture, gen, size, seed, h0, quotas, count, workers, fit, **flags):
    """Sweep learning quotas and write one CSV record per run."""
    config = resolve_config(ctx, _overrides(workers=workers, **flags))
    if count < 1:
        raise ConfigurationError(f"--count must be at least 1, got {count}")
    if count > 1:
        if gen != "random" or map_file or problem_file or fixture:
            raise ConfigurationError("--count above 1 needs --gen random as the only problem source")
        problems = problem_corpus(count, size, base_seed=seed, theta=config.theta)
    else:
        problems = [load_problem_source(config, map_file, problem_file, fixture, gen, size, seed, h0)]
    quota_values = [q.strip() for q in quotas.split(",") if q.strip()]
    if not quota_values:
        raise ConfigurationError("--quotas needs at least one value")

    params = config.to_params(problems[0].epsilon)
    records = sweep_quota(
        config.algo,
        problems,
        quota_values,
        params=params,
        acyclic=config.acyclic,
        budget=config.budget,
        audit=config.audit,
        workers=config.workers,
        progress=config.out is not None,
    )
    write_output(records_to_csv(records), config.out)
    if fit:
        for linear in fit_linear_class(records).values():
            click.echo(json.dumps(linear.to_dict()), err=True)

    violations = sum(r.audit_violations for r in records)
    if violations:
        _fail(f"{violations} audit violation(s) across the sweep", ExitCode.AUDIT_VIOLATION)
    timeouts = sum(r.timed_out for r in records)
    if timeouts:
        _fail(f"{timeouts} run(s) timed out", ExitCode.TIMEOUT)


@main.command()
@problem_options
@algo_options
@click.option("--trace", "trace_file", type=click.Path(exists=True, dir_okay=False), required=True,
              help="CSV trace to replay")
@click.pass_context
@handle_errors
def audit(ctx, map_file, problem_file, fixture, gen, size, seed, h0, trace_file, **flags):
    """Replay a CSV trace through the transition auditor."""
    config = resolve_config(ctx, _overrides(**flags))
    problem = load_problem_source(config, map_file, problem_file, fixture, gen, size, seed, h0)
    records = read_trace(Path(trace_file).read_text(), problem)
    violations = audit_trace(problem, records, config.to_params(problem.epsilon))
    write_output(
        json.dumps({"cycles": len(records), "violations": [v.to_dict() for v in violations]}, indent=2) + "\n",
        config.out,
    )
    if violations:
        _fail(f"{len(violations)} audit violation(s)", ExitCode.AUDIT_VIOLATION)


@main.command()
@problem_options
@click.option("--theta", help="Admissibility weight")
@click.pass_context
@handle_errors
def validate(ctx, map_file, problem_file, fixture, gen, size, seed, h0, theta):
    """Check a problem: goals reachable, no dead ends, θ-admissible h_init."""
    config = resolve_config(ctx, _overrides(theta=theta))
    problem = load_problem_source(config, map_file, problem_file, fixture, gen, size, seed, h0)
    report = validate_problem(problem, theta=config.theta if theta else None)
    click.echo(json.dumps(report.to_dict(), indent=2))
    if not report.ok:
        sys.exit(int(ExitCode.INVALID_PROBLEM))


if __name__ == "__main__":
    main()
