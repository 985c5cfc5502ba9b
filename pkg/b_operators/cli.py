"""Command line front end: ``bopfields <verb> [BUNDLE] [options]``.

Reports go to stdout (or ``--out``) as sorted JSON, or as pandas tables with
``--format text``; logs go to stderr and, with ``--log``, to logs/b_operators.log.
"""

from __future__ import annotations

import functools
import json
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import pandas as pd

from b_operators import loaders
from b_operators.algebra import assumption2, companionability
from b_operators.basefield import RationalFunctionField, lambda0
from b_operators.errors import BOperatorError, InternalInconsistency
from b_operators.groebner import DEFAULT_GROEBNER_BUDGET
from b_operators.linear import coordinatewise, dependency_constancy_check
from b_operators.operator import check_frl, is_constant, strictness_witness
from b_operators.scheme import (
    DEFAULT_CENSUS_LIMIT,
    adjunction_census,
    equalizer,
    generic_fiber_test,
    kernel_check,
    nabla_point,
    prolong,
)

logger = logging.getLogger(__name__)

LOG_FILE = "logs/b_operators.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(lineno)d - %(message)s"


def setup_logging(log: bool, verbose: bool):
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, force=True)
    if log:
        os.makedirs(os.path.dirname(LOG_FILE), exist_ok=True)
        handler = RotatingFileHandler(LOG_FILE, maxBytes=50000, backupCount=5)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.getLogger().addHandler(handler)


# output


def render_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=4, sort_keys=True, ensure_ascii=False) + "\n"


def _cell(value) -> str:
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return str(value)


def render_text(report: Dict[str, Any], rows_key: Optional[str] = None) -> str:
    if rows_key is not None:
        frame = pd.DataFrame([{k: _cell(v) for k, v in row.items()} for row in report[rows_key]])
        return frame.to_string(index=False) + "\n"
    series = pd.Series({k: _cell(v) for k, v in sorted(report.items())})
    return series.to_string() + "\n"


def emit(report: Dict[str, Any], fmt: str, out: Optional[str], rows_key: Optional[str] = None):
    text = render_json(report) if fmt == "json" else render_text(report, rows_key)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Report written to {out}")
    else:
        click.echo(text, nl=False)


def handle_errors(command):
    """Map package errors to their exit codes with a JSON error report on stdout."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except BOperatorError as e:
            logger.error(f"Error occurred: {str(e)}")
            click.echo(render_json({"error": type(e).__name__, "message": str(e)}), nl=False)
            sys.exit(e.exit_code)

    return wrapper


def input_options(command):
    options = [
        click.argument("bundle", required=False, type=click.Path(exists=True, dir_okay=False)),
        click.option("--algebra", "algebra", multiple=True, type=click.Path(exists=True, dir_okay=False), help="Algebra file (repeatable for classify)"),
        click.option("--operator", type=click.Path(exists=True, dir_okay=False), help="Operator file"),
        click.option("--variety", type=click.Path(exists=True, dir_okay=False), help="Variety file (V)"),
        click.option("--subvariety", type=click.Path(exists=True, dir_okay=False), help="Kernel candidate file (W)"),
        click.option("--point", type=click.Path(exists=True, dir_okay=False), help="Point file"),
        click.option("--ring", type=click.Path(exists=True, dir_okay=False), help="Test ring file for census"),
        click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout"),
        click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True),
        click.option("--budget", type=int, default=DEFAULT_GROEBNER_BUDGET, show_default=True, help="Buchberger pair budget"),
        click.option("--limit", type=int, default=DEFAULT_CENSUS_LIMIT, show_default=True, help="Census enumeration limit"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _bundle(bundle, algebra=(), operator=None, variety=None, subvariety=None, point=None, ring=None, **_) -> loaders.Bundle:
    overrides = {
        "algebra": algebra[0] if len(algebra) == 1 else None,
        "operator": operator,
        "variety": variety,
        "subvariety": subvariety,
        "point": point,
        "ring": ring,
    }
    return loaders.Bundle(Path(bundle) if bundle else None, overrides)


@click.group()
@click.option("--log", is_flag=True, help="Also log to logs/b_operators.log")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level")
def cli(log, verbose):
    """Exact computations with B-operators on fields of characteristic p."""
    setup_logging(log, verbose)


@cli.command()
@input_options
@handle_errors
def classify(fmt, out, **kwargs):
    """Companionability verdict for one or more algebras."""
    if len(kwargs["algebra"]) > 1:
        sources = [loaders.Source.from_path(path, "algebra") for path in kwargs["algebra"]]
    else:
        data = _bundle(**kwargs).get("algebra")
        if isinstance(data.data, list):
            sources = [data.resolve(item, f"algebra[{i}]") for i, item in enumerate(data.data)]
        else:
            sources = [data]
    reports = [
        companionability(loaders.load_algebra(source), loaders.algebra_name(source)).to_dict()
        for source in sources
    ]
    logger.info(f"Classified {len(reports)} algebra(s)")
    if len(reports) == 1 and fmt == "json":
        emit(reports[0], fmt, out)
    else:
        emit({"algebras": reports}, fmt, out, rows_key="algebras")


@cli.command(name="prolong")
@input_options
@handle_errors
def prolong_command(fmt, out, budget, limit, **kwargs):
    """Generators of the prolongation of V."""
    bundle = _bundle(**kwargs)
    op = loaders.load_operator(bundle.get("operator"))
    V, _ = loaders.load_variety(bundle.get("variety"), op.field)
    tau = prolong(op, V)
    report: Dict[str, Any] = {
        "vars": list(tau.vars),
        "generators": tau.variety.formatted(),
        "pi_vars": list(tau.pi_vars),
        "empty": tau.is_empty(budget),
    }
    if bundle.has("point"):
        point = loaders.load_point(bundle.get("point"), op.field)
        report["point"] = {name: str(value) for name, value in nabla_point(op, V, point).items()}
    emit(report, fmt, out)


def _kernel_inputs(kwargs):
    bundle = _bundle(**kwargs)
    op = loaders.load_operator(bundle.get("operator"))
    V, _ = loaders.load_variety(bundle.get("variety"), op.field)
    W, primes = loaders.load_variety(bundle.get("subvariety"), op.field)
    return op, V, W, primes


@cli.command(name="equalizer")
@input_options
@handle_errors
def equalizer_command(fmt, out, budget, limit, **kwargs):
    """The equalizer E inside the prolongation of W."""
    op, V, W, primes = _kernel_inputs(kwargs)
    emit(equalizer(op, V, W, primes, budget).formatted(), fmt, out)


@cli.command(name="kernel-check")
@input_options
@handle_errors
def kernel_check_command(fmt, out, budget, limit, **kwargs):
    """Kernel validity, dominance premises and prolongability of W over V."""
    op, V, W, primes = _kernel_inputs(kwargs)
    emit(kernel_check(op, V, W, primes, budget).to_dict(), fmt, out)


@cli.command()
@input_options
@handle_errors
def fiber(fmt, out, budget, limit, **kwargs):
    """Decide the fiber over an explicit point of W in a p-th root tower."""
    bundle = _bundle(**kwargs)
    op = loaders.load_operator(bundle.get("operator"))
    W, primes = loaders.load_variety(bundle.get("subvariety"), op.field)
    V = loaders.load_variety(bundle.get("variety"), op.field)[0] if bundle.has("variety") else None
    tower = loaders.load_tower(bundle.get("tower"), op.field)
    point = {name: tower.convert(value) for name, value in loaders.load_point(bundle.get("point"), tower).items()}
    emit(generic_fiber_test(op, W, point, V, primes, budget).to_dict(), fmt, out)


@cli.command(name="constants-check")
@input_options
@handle_errors
def constants_check(fmt, out, budget, limit, **kwargs):
    """Constancy, p-th powers, lambda0 and strictness witnesses for field elements."""
    bundle = _bundle(**kwargs)
    op = loaders.load_operator(bundle.get("operator"))
    ass2 = assumption2(op.algebra)
    rows: List[Dict[str, Any]] = []
    for text, f in loaders.load_elements(bundle.get("elements"), op.field):
        row: Dict[str, Any] = {"element": text, "lambda0": str(lambda0(f))}
        if ass2:
            row.update(strictness_witness(op, f).to_dict())
            row["frl"] = check_frl(op, f)
        else:
            row.update(
                constant=is_constant(op, f),
                pth_power=op.field.pth_root(f) is not None,
                strictness_counterexample=None,
                frl=None,
            )
        rows.append(row)
    emit({"assumption2": ass2, "elements": rows}, fmt, out, rows_key="elements")


@cli.command(name="lidi-check")
@input_options
@handle_errors
def lidi_check(fmt, out, budget, limit, **kwargs):
    """Dependency constancy and the wedge-of-constants check for constant vectors."""
    bundle = _bundle(**kwargs)
    op = loaders.load_operator(bundle.get("operator"))
    vectors = loaders.load_vectors(bundle.get("vectors"), op.field)
    if bundle.has("matrix"):
        D = loaders.load_matrix(bundle.get("matrix"), op)
    else:
        D = coordinatewise(op, len(vectors[0]))
    emit(dependency_constancy_check(D, vectors).to_dict(), fmt, out)


@cli.command()
@input_options
@handle_errors
def census(fmt, out, budget, limit, **kwargs):
    """Count V(B (x) R) and the R-points of the prolongation by enumeration."""
    bundle = _bundle(**kwargs)
    B = loaders.load_algebra(bundle.get("algebra"))
    V, _ = loaders.load_variety(bundle.get("variety"), RationalFunctionField(B.base, ()))
    R = loaders.load_ring(bundle.get("ring"), B.base) if bundle.has("ring") else None
    report = adjunction_census(B, V, R, limit)
    if not report.agree:
        raise InternalInconsistency(
            f"census disagrees: {report.count_b_tensor_r} points of V(B (x) R), "
            f"{report.count_prolongation} of the prolongation"
        )
    emit(report.to_dict(), fmt, out)


def main():
    cli()


if __name__ == "__main__":
    main()
