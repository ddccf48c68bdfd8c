"""Command-line interface.

Exit codes: 0 success, 2 bad input, 3 unsupported feature, 4 internal error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np

from .errors import CapacityError, DomainError, InternalError, InvalidArgumentError, UnsupportedError
from .qarith import index_to_tuple
from .qlinalg import format_complex
from .report import SCHEMA, table1, verify
from .simulate import depolarized_source, honest_source, run_protocol, worst_case_state
from .states import StateSpec
from .strategy import TestPartition

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_INTERNAL = 0, 2, 3, 4


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"{path} must hold a JSON object")
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InvalidArgumentError(f"unsupported schema {schema!r}, expected {SCHEMA!r}")
    return data


def read_spec(path: str) -> tuple[StateSpec, TestPartition | None]:
    data = read_json(path)
    spec = StateSpec.from_json(data)
    partition = TestPartition.from_json(data["partition"]) if "partition" in data else None
    return spec, partition


def emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    directory = Path(out)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / filename).write_text(text, encoding="utf-8")


def guarded(func: Callable) -> Callable:
    """Translate library errors into exit codes."""

    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (InvalidArgumentError, CapacityError, DomainError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except UnsupportedError as exc:
            click.echo(f"unsupported: {exc}", err=True)
            sys.exit(EXIT_UNSUPPORTED)
        except InternalError as exc:
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def check_probability(name: str, value: float) -> None:
    if not 0 < value < 1:
        raise InvalidArgumentError(f"{name} must lie in (0, 1), got {value}")


FORMATS = click.Choice(["json", "csv", "md"])


@click.group()
def main() -> None:
    """Build qudit states, derive verification strategies and simulate them."""


@main.command()
@click.argument("spec_file")
@click.option("--out", default=None, help="Directory for amplitudes.csv and state.json.")
@click.option("--format", "fmt", type=FORMATS, default="json", help="Stdout format when --out is absent.")
@guarded
def state(spec_file: str, out: str | None, fmt: str) -> None:
    """Build a state and export its amplitudes."""
    spec, _ = read_spec(spec_file)
    from .states import build

    built = build(spec)
    norm = float(np.linalg.norm(built.psi))
    labels = ["".join(str(x) for x in index_to_tuple(i, built.dims)) for i in range(built.dims.total)]
    rows = io.StringIO()
    writer = csv.writer(rows, lineterminator="\n")
    writer.writerow(["index", "label", "amplitude"])
    for i, (label, amp) in enumerate(zip(labels, built.psi)):
        writer.writerow([i, label, format_complex(amp)])
    meta = {
        "schema": SCHEMA,
        "state": spec.to_json(),
        "dims": list(built.dims.dims),
        "norm": norm,
        "amplitudes": [[float(a.real), float(a.imag)] for a in built.psi],
    }
    if out is not None:
        emit(rows.getvalue(), out, "amplitudes.csv")
        emit(dumps(meta), out, "state.json")
    elif fmt == "csv":
        click.echo(rows.getvalue(), nl=False)
    elif fmt == "md":
        click.echo("| index | label | amplitude |\n|---|---|---|")
        for i, (label, amp) in enumerate(zip(labels, built.psi)):
            click.echo(f"| {i} | {label} | {format_complex(amp)} |")
    else:
        click.echo(dumps(meta), nl=False)
    click.echo(f"norm check: |psi| = {norm:.15f} (deviation {abs(norm - 1):.2e})", err=True)


@main.command("verify")
@click.argument("spec_file")
@click.option("--epsilon", type=float, default=0.01, show_default=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--out", default=None, help="Directory for report.json.")
@guarded
def verify_cmd(spec_file: str, epsilon: float, delta: float, out: str | None) -> None:
    """Optimize test weights and report the spectral gap and test count."""
    check_probability("epsilon", epsilon)
    check_probability("delta", delta)
    spec, partition = read_spec(spec_file)
    report = verify(spec, epsilon, delta, partition)
    if abs(report.spectrum_nu() - report.nu) > 1e-8:
        raise InternalError(f"LP gap {report.nu} disagrees with spectral gap {report.spectrum_nu()}")
    emit(dumps(report.to_json()), out, "report.json")


def table_text(rows, fmt: str, epsilon: float, delta: float) -> str:
    header = ["state", "table entry", "closed form N", "computed N", "computed exact N", "nu", "relation", "ok"]
    records = [
        [r.name, r.table_entry, r.closed_form_n, r.computed_n, r.computed_exact_n,
         f"{r.nu_exact}" if r.nu_exact is not None else f"{r.nu:.12g}", r.relation, r.ok]
        for r in rows
    ]
    if fmt == "json":
        c = math.log(1 / delta) / epsilon
        return dumps({"schema": SCHEMA, "epsilon": epsilon, "delta": delta, "c": c, "rows": [r.to_json() for r in rows]})
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(records)
        return buffer.getvalue()
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(x) for x in rec) + " |" for rec in records]
    return "\n".join(lines) + "\n"


@main.command("table1")
@click.option("--epsilon", type=float, default=0.01, show_default=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="md", show_default=True)
@click.option("--out", default=None, help="Directory for the table file.")
@guarded
def table1_cmd(epsilon: float, delta: float, fmt: str, out: str | None) -> None:
    """Reproduce the verification-cost table."""
    check_probability("epsilon", epsilon)
    check_probability("delta", delta)
    rows = table1(epsilon, delta)
    emit(table_text(rows, fmt, epsilon, delta), out, f"table1.{fmt}")
    if not all(r.ok for r in rows):
        sys.exit(EXIT_INTERNAL)


@main.command()
@click.argument("spec_file")
@click.option("--source", type=click.Choice(["honest", "worst", "depolarized"]), default="worst", show_default=True)
@click.option("--epsilon", type=float, default=0.1, show_default=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--copies", type=int, default=None, help="Tests per trial; defaults to the exact test count.")
@click.option("--trials", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=None, help="Directory for simulation.json and passes.csv.")
@guarded
def simulate(spec_file: str, source: str, epsilon: float, delta: float, copies: int | None, trials: int, seed: int, out: str | None) -> None:
    """Monte Carlo run of the protocol against a chosen source."""
    check_probability("epsilon", epsilon)
    check_probability("delta", delta)
    if trials < 1 or (copies is not None and copies < 1):
        raise InvalidArgumentError("copies and trials must be positive")
    spec, partition = read_spec(spec_file)
    report = verify(spec, epsilon, delta, partition)
    psi = report.state.psi
    if source == "honest":
        model = honest_source(psi)
    elif source == "worst":
        model = worst_case_state(report.operator, psi, epsilon)
    else:
        model = depolarized_source(psi, epsilon)
    copies = copies or report.n_opt[0]
    result = run_protocol(report.state.unitary, report.partition, model, copies, trials, seed)
    payload = {"schema": SCHEMA, "state": spec.to_json(), "epsilon": epsilon, "delta": delta,
               "nu": report.nu, **result.to_json()}
    emit(dumps(payload), out, "simulation.json")
    if out is not None:
        series = io.StringIO()
        writer = csv.writer(series, lineterminator="\n")
        writer.writerow(["trial", "passes", "copies"])
        writer.writerows([t, int(p), copies] for t, p in enumerate(result.passes_per_trial))
        emit(series.getvalue(), out, "passes.csv")


def run() -> None:
    try:
        main(standalone_mode=True)
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to the internal-error code
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    run()
