"""
Command Line Interface

    lens-synth check FILE
    lens-synth synth FILE [--timeout SECS] [--max-expansions N] [--seed K] [-o OUT]
    lens-synth apply FILE --lens NAME --op OP --input PATH [--old PATH]
    lens-synth entropy FILE --regex NAME [--sample N] [--seed K]

Exit codes: 0 success, 1 user error, 2 no lens found, 3 internal error.
"""

import functools
import random
import sys
from pathlib import Path

import click

from src import lens as ln
from src import sre
from src.config import load_settings
from src.errors import LensError, SearchFailure, UserError
from src.logger import get_logger, set_level
from src.specfile import build_environment, check_spec, load_spec_file, synth_spec

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USER = 1
EXIT_SEARCH = 2
EXIT_INTERNAL = 3

OPS = ("createR", "createL", "putR", "putL")


def _exit_codes(command):
    """Map the error hierarchy onto exit codes"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.ClickException:
            raise
        except UserError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USER)
        except SearchFailure as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_SEARCH)
        except LensError as e:
            click.echo(f"internal error: {e}", err=True)
            sys.exit(EXIT_INTERNAL)
        except OSError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USER)
    return wrapper


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


@click.group()
@click.option("--verbose", is_flag=True, help="Trace the search frontier on stderr")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Settings file (defaults to config/mcp_config.json)")
@click.pass_context
def cli(ctx, verbose, config_path):
    """Synthesize and run string lenses described in spec files."""
    settings = load_settings(config_path)
    set_level("DEBUG" if verbose else settings.log_level)
    ctx.obj = settings


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_exit_codes
def check(settings, file):
    """Typecheck definitions and run the tests of FILE."""
    report = check_spec(load_spec_file(file), settings)
    click.echo(report.summary())
    sys.exit(EXIT_OK if report.ok else EXIT_USER)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--timeout", type=float, default=None, help="Wall-clock limit per directive (seconds)")
@click.option("--max-expansions", type=int, default=None, help="Maximum expression pairs per directive")
@click.option("--seed", type=int, default=None,
              help="Seed for the strings that spot-check the round-trip laws")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Write the rewritten spec here instead of stdout")
@click.pass_obj
@_exit_codes
def synth(settings, file, timeout, max_expansions, seed, output):
    """Replace every synth directive in FILE with a synthesized lens."""
    limits = settings.limits.with_overrides(max_expansions, timeout, seed)
    text, outcomes = synth_spec(load_spec_file(file), limits, settings)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    failed = [o for o in outcomes if not o.ok]
    for outcome in outcomes:
        if outcome.ok:
            click.echo(f"{outcome.name}: cost {outcome.result.cost:.6f}, "
                       f"distance {outcome.result.distance}", err=True)
        else:
            click.echo(f"{outcome.name} (line {outcome.line}): {outcome.error}", err=True)
    sys.exit(EXIT_SEARCH if failed else EXIT_OK)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--lens", "lens_name", required=True, help="Lens to run")
@click.option("--op", type=click.Choice(OPS), required=True, help="Lens function")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="File with the new string")
@click.option("--old", "old_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File with the existing string on the other side (putR/putL)")
@click.pass_obj
@_exit_codes
def apply(settings, file, lens_name, op, input_path, old_path):
    """Run one lens function over whole-file strings and print the result."""
    if op.startswith("put") and old_path is None:
        raise click.ClickException(f"--old is required for {op}")
    env, library = build_environment(load_spec_file(file), settings)
    library.get(lens_name)
    ev = ln.LensEvaluator(env, library)
    lens = ln.LibRef(lens_name)
    text = _read(input_path)
    if op == "createR":
        result = ev.create_r(lens, text)
    elif op == "createL":
        result = ev.create_l(lens, text)
    elif op == "putR":
        result = ev.put_r(lens, text, _read(old_path))
    else:
        result = ev.put_l(lens, text, _read(old_path))
    click.echo(result, nl=False)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--regex", "name", required=True, help="Definition to measure")
@click.option("--sample", "samples", type=int, default=0,
              help="Also estimate the entropy from this many samples")
@click.option("--seed", type=int, default=None, help="Sampling seed (default: settings seed)")
@click.pass_obj
@_exit_codes
def entropy(settings, file, name, samples, seed):
    """Print the entropy in bits of a definition in FILE."""
    env, _ = build_environment(load_spec_file(file), settings)
    s = sre.binding(env, name)
    click.echo(f"{sre.entropy(s, env):.6f}")
    if samples > 0:
        rng = random.Random(settings.limits.seed if seed is None else seed)
        total = 0.0
        for _ in range(samples):
            w = sre.sample(s, env, rng)
            total -= sre.log2(sre.probability(s, w, env))
        click.echo(f"sampled: {total / samples:.6f} over {samples} samples")


def main() -> None:
    try:
        cli(prog_name="lens-synth")
    except SystemExit:
        raise
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    main()
