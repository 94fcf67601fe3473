"""Command line front end for the T-bar verification toolkit.

Run as ``python cli.py <command>`` or, inside the Flask app, ``flask tbar <command>``.
Exit codes: 0 every check passed, 1 a verification failed (the report is still
printed), 2 usage or input error.
"""
import json
import logging
import sys

import click

from config.settings import LOG_LEVEL, MATERIALIZE_MAX_LEVEL, ORBIT_LEVELS, WORD_CONVENTION
from models.report import VerificationReport
from services import verification
from services.dyadic import Dyadic
from services.errors import TBarError

logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED = 0, 1


class DyadicParam(click.ParamType):
    name = "dyadic"

    def convert(self, value, param, ctx):
        if isinstance(value, Dyadic):
            return value
        try:
            return Dyadic.parse(value)
        except TBarError as e:
            self.fail(str(e), param, ctx)


DYADIC = DyadicParam()

format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True,
    help="Report format; json is stable for machines.",
)
convention_option = click.option(
    "--convention", type=click.Choice(["default", "flipped"]), default=WORD_CONVENTION, show_default=True,
    help="default: the word x y acts as x after y.",
)
fault_option = click.option("--inject-fault", is_flag=True, hidden=True)


def _emit(report, fmt, **extra):
    """Print a report and exit 0 or 1 with its verdict."""
    if fmt == "json":
        payload = report.to_dict()
        payload.update(extra)
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(report.to_text())
        for key, value in extra.items():
            click.echo(f"{key}: {json.dumps(value)}")
    failure = report.first_failure()
    if failure is not None:
        logger.warning("Verification failed: %s", failure.name)
        sys.exit(EXIT_FAILED)
    sys.exit(EXIT_OK)


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except TBarError as e:
        raise click.UsageError(str(e)) from e


@click.group()
def cli():
    """Exact verification of T-bar constructions: relators, roots, and copies of Q."""


@cli.command()
@format_option
@convention_option
@fault_option
def relators(fmt, convention, inject_fault):
    """Check the four defining relators and b^3 = a^4 = z."""
    _emit(_run(verification.relators, inject_fault, convention), fmt)


@cli.command()
@format_option
@convention_option
def named(fmt, convention):
    """Check the described behaviour of p, q and r."""
    _emit(_run(verification.named, convention), fmt)


@cli.command()
@format_option
def calibrate(fmt):
    """Decide which product convention the named elements pin down."""
    _emit(_run(verification.calibrate), fmt)


@cli.command()
@click.option("--kind", type=click.Choice(["standard", "exotic"]), default="standard", show_default=True)
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of levels.")
@click.option("--verify", is_flag=True, help="Run the full chain verification.")
@click.option("--emit", is_flag=True, help="Include the chain elements in the output.")
@format_option
@fault_option
def chain(kind, n, verify, emit, fmt, inject_fault):
    """Build s_1..s_N and optionally verify s_n^n = s_{n-1}."""
    if verify:
        c, report = _run(verification.chain, kind, n, inject_fault)
    else:
        c = _run(verification.build_chain, kind, n)
        report = VerificationReport(f"{kind} chain with {n} levels")
        for level in range(1, n + 1):
            report.check(f"s_{level} built", True, f"s_{level}(0) = {c.level(level).eval(0)}")
    extra = {"chain": c.to_dict(MATERIALIZE_MAX_LEVEL)} if emit else {}
    _emit(report, fmt, **extra)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--compare-geometric", is_flag=True, help="Compare each word with the geometric s_n.")
@click.option("--both-forms", is_flag=True, help="Compare product and closed forms where supported.")
@format_option
@convention_option
def words(n, compare_geometric, both_forms, fmt, convention):
    """Evaluate the words for s_1..s_N."""
    _emit(_run(verification.chain_words, n, compare_geometric, both_forms, convention), fmt)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=3), required=True)
@format_option
@convention_option
def tn(n, fmt, convention):
    """Check the four-part description of t_3..t_N."""
    _emit(_run(verification.tn, n, convention), fmt)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=2), required=True, help="Root degree.")
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--value", type=DYADIC, default=None, help="Prescribed f(0).")
@click.option("--of-chain", type=click.IntRange(min=1), default=None, help="Take the root of standard s_M.")
@click.option("--word", default=None, help="Take the root of this word's element.")
@format_option
@convention_option
@fault_option
def root(n, seed, value, of_chain, word, fmt, convention, inject_fault):
    """Extract an nth root (of z unless told otherwise) and verify f^n = g."""
    if seed is not None and value is not None:
        raise click.UsageError("--seed and --value are mutually exclusive")
    if of_chain is not None and word is not None:
        raise click.UsageError("--of-chain and --word are mutually exclusive")
    f, report = _run(
        verification.root, n, seed=seed or 0, value=value, of_chain=of_chain, word=word,
        inject_fault=inject_fault, convention=convention,
    )
    _emit(report, fmt, element=f.to_dict())


@cli.command()
@click.option("--kind", type=click.Choice(["standard", "exotic"]), default="exotic", show_default=True)
@click.option("--depth", type=click.IntRange(min=0), required=True)
@click.option("--levels", type=click.IntRange(min=1, max=MATERIALIZE_MAX_LEVEL), default=ORBIT_LEVELS, show_default=True)
@format_option
def orbit(kind, depth, levels, fmt):
    """Sample the orbit of 0 and check the exotic chain avoids (0, 1/2]."""
    points, report = _run(verification.orbit, kind, depth, levels)
    _emit(report, fmt, size=len(points))


@cli.command("eval")
@click.option("--word", required=True, help='Tokens such as "b a^2 B".')
@click.option("--at", "at", type=DYADIC, required=True)
@convention_option
def eval_word(word, at, convention):
    """Print the image of a dyadic point under a word."""
    value, _ = _run(verification.evaluate_at, word, at, convention)
    click.echo(str(value))


if __name__ == "__main__":
    cli()
