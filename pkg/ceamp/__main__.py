import dataclasses
import functools
import logging
import os
import sys

import click
import pydantic
from dotenv import load_dotenv

from ceamp import (
    config,
    constants,
    formula,
    merging_model,
    reduction,
    solver,
    transform,
    verifier,
)
from ceamp.errors import (
    CeampError,
    CertificateError,
    FormulaError,
    GraphError,
    GuardLimitError,
    SolverTimeout,
)
from ceamp.graph_core import EditSet

load_dotenv()

LOGLEVEL = os.environ.get(constants.LOGLEVEL_ENVVAR, "INFO").upper()
logging.basicConfig(level=LOGLEVEL)

EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_TIMEOUT = 3


def _exit_codes(command):
    """Maps workbench errors onto the documented exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SolverTimeout as e:
            click.echo(f"timeout: {e}", err=True)
            sys.exit(EXIT_TIMEOUT)
        except (FormulaError, CertificateError, GraphError, GuardLimitError, pydantic.ValidationError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except CeampError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_FAIL)

    return wrapper


def _load_instance(stream) -> reduction.Instance:
    return reduction.Instance.from_json(stream.read())


@click.group()
@click.pass_context
def main(ctx):
    ctx.obj = config.Config()


@main.command()
@click.argument("cnf", type=click.File("rb"))
@click.option("-o", "--output", required=True, type=click.File("w"), help="Instance JSON to write")
@click.option("--dot", default=None, type=click.File("w"), help="Write the graph as DOT")
@click.option("--model-dot", default=None, type=click.File("w"), help="Write the merging model as DOT")
@click.option("--stats", is_flag=True, help="Print instance statistics as JSON")
@_exit_codes
def reduce(cnf, output, dot, model_dot, stats):
    """Normalizes a DIMACS formula and reduces it to a CEaMP instance."""
    f = formula.normalize(formula.parse_dimacs(cnf.read()))
    inst = reduction.reduce(f)
    output.write(inst.to_json())
    if dot is not None:
        dot.write(inst.to_dot())
    if model_dot is not None:
        model_dot.write(merging_model.model_to_dot(inst.model))
    if stats:
        click.echo(reduction.instance_stats(inst).to_document().model_dump_json(indent=2))


@main.command()
@click.argument("instance", type=click.File("rb"))
@click.option("--solution", default=None, type=click.File("rb"), help="Edit set JSON to check as well")
@click.option(
    "--incidence-bound",
    default=None,
    type=click.INT,
    help="Fail when a vertex lies in more packed P3s",
)
@click.pass_obj
@_exit_codes
def verify(conf, instance, solution, incidence_bound):
    """Runs the packing and structure checks, and optionally the solution checks."""
    inst = _load_instance(instance)
    verifier_conf = dataclasses.replace(conf.verifier, incidence_bound=incidence_bound)
    report = verifier.verify_packing(inst).extend(verifier.verify_structure(inst, verifier_conf))
    if solution is not None:
        report = report.extend(verifier.verify_solution(inst, EditSet.from_json(solution.read())))
    click.echo(report.model_dump_json(indent=2))
    if not report.passed:
        click.echo(f"failed checks: {', '.join(report.failed())}", err=True)
        sys.exit(EXIT_FAIL)


@main.command()
@click.argument("instance", type=click.File("rb"))
@click.argument("assignment", type=click.File("rb"))
@click.option("-o", "--output", default="-", type=click.File("w"), help="Edit set JSON to write")
@_exit_codes
def encode(instance, assignment, output):
    """Turns a satisfying assignment into a zero-excess edit set."""
    inst = _load_instance(instance)
    a = formula.Assignment.parse(assignment.read())
    output.write(transform.encode_solution(inst, a).to_json())


@main.command()
@click.argument("instance", type=click.File("rb"))
@click.argument("edits", type=click.File("rb"))
@_exit_codes
def decode(instance, edits):
    """Reads the satisfying assignment off a zero-excess edit set."""
    inst = _load_instance(instance)
    a = transform.decode_assignment(inst, EditSet.from_json(edits.read()))
    click.echo(a.to_text(), nl=False)


@main.command()
@click.argument("instance", type=click.File("rb"))
@click.option(
    "--time-limit",
    default=config.SolverConfig.time_limit,
    envvar=constants.TIME_LIMIT_ENVVAR,
    type=click.FLOAT,
    help="Seconds before giving up",
)
@click.option("--oracle", is_flag=True, help="Enumerate proto-cluster partitions instead of searching")
@click.option("--threads", default=1, type=click.IntRange(min=1), help="Worker threads for the search")
@click.option("-o", "--output", default="-", type=click.File("w"), help="Edit set JSON to write")
@click.pass_obj
@_exit_codes
def solve(conf, instance, time_limit, oracle, threads, output):
    """Decides whether a zero-excess solution exists and prints one."""
    inst = _load_instance(instance)
    solver_conf = dataclasses.replace(conf.solver, time_limit=time_limit, threads=threads)
    if oracle:
        s = solver.brute_force_partition_solve(inst.graph, inst.packing, solver_conf)
    else:
        s = solver.solve_zero_excess(inst, solver_conf)
    if s is None:
        click.echo("infeasible", err=True)
        sys.exit(EXIT_FAIL)
    output.write(s.to_json())


@main.command()
@click.argument("cnf", type=click.File("rb"))
@click.option(
    "--raw",
    is_flag=True,
    help="Solve the formula as parsed instead of its normalized form.",
)
@click.pass_obj
@_exit_codes
def sat(conf, cnf, raw):
    """Brute-force satisfiability of a DIMACS formula.

    The assignment is over the normalized formula, the one `reduce` encodes,
    unless --raw is given.
    """
    f = formula.parse_dimacs(cnf.read())
    a = formula.brute_force_sat(f if raw else formula.normalize(f), conf.formula)
    if a is None:
        click.echo("unsatisfiable", err=True)
        sys.exit(EXIT_FAIL)
    click.echo(a.to_text(), nl=False)


@main.command()
@click.argument("cnf", type=click.File("rb"))
@_exit_codes
def normalize(cnf):
    """Prints the normalized formula as DIMACS."""
    click.echo(formula.normalize(formula.parse_dimacs(cnf.read())).to_dimacs(), nl=False)


if __name__ == "__main__":
    main()
