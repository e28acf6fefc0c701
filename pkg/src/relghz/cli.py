"""Scenario files, report assembly, and the command line front end.

Scenario files are line oriented: one directive per line, ``#`` starts a
comment, keywords are case-insensitive.  Directives:

    observer <name> copies <axis> on all
    observer <name> copies <axis> on pair <m>
    fiducial <name> <axis><+|->
    output expectations|reduction|constraints|nogo

The first observer line is the layer recording the system qubits; the
second records pair logical values, so ``pair <m>`` is only legal there.
Reports always carry the values next to the reference values they are
checked against and the tolerance used for the check; the structured
format is JSON with sorted keys and 12-significant-digit numbers, byte
stable across runs.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 the config
could not be parsed or violates a structural rule.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from . import __version__, linalg
from .errors import (
    CapacityError,
    ExtractionError,
    PreconditionError,
    ScenarioFileError,
    UnsupportedAxisError,
)
from .hilbert import Axis, axis_from_name
from .noncontextual import (
    ghz_basis_constraints,
    nogo_report,
    state_amplitude_report,
    two_layer_constraints,
    verify_state_constraints,
)
from .observables import expectation_table, parity_strings
from .relational import (
    DensityOperator,
    bell_branch_mixture,
    branch_bell_fidelities,
    decohered_qubits,
    ghz_pair_mixture,
    purity,
    reduce,
)
from .scenario import (
    ObserverSpec,
    Scenario,
    alice_entangle,
    bob_entangle_full,
    bob_entangle_partial,
    new_scenario,
)

__all__ = [
    "ObserverDirective",
    "Report",
    "ReportRow",
    "ReportSection",
    "ScenarioConfig",
    "emit",
    "main",
    "parse_report",
    "parse_scenario",
    "run",
]

SCHEMA_VERSION = "1"
OUTPUT_KINDS = ("expectations", "reduction", "constraints", "nogo")

SUBSET_SIZE_COUNTS = {0: 64, 1: 32, 2: 16, 3: 8, 4: 0}


def _round12(x: float) -> float:
    """Round to 12 significant digits; normalizes -0.0 away."""
    return float(f"{float(x):.12g}") + 0.0


@dataclass(frozen=True)
class ObserverDirective:
    name: str
    axis: Axis
    target: str  # "all" or "pair"
    particle: int | None
    line: int

    def describe(self) -> str:
        if self.target == "all":
            return f"{self.name} copies {self.axis.value} on all"
        return f"{self.name} copies {self.axis.value} on pair {self.particle}"


@dataclass(frozen=True)
class ScenarioConfig:
    observers: tuple[ObserverDirective, ...]
    fiducials: tuple[tuple[str, Axis, int], ...]
    outputs: tuple[str, ...]


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse a scenario file; raises ScenarioFileError with a line number."""
    observers: list[ObserverDirective] = []
    fiducials: list[tuple[str, Axis, int]] = []
    outputs: list[str] = []
    fiducial_lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0].lower()

        if keyword == "observer":
            if len(tokens) < 5 or tokens[2].lower() != "copies" or tokens[4].lower() != "on":
                raise ScenarioFileError(
                    "expected 'observer <name> copies <axis> on all|pair <m>'", lineno
                )
            name = tokens[1]
            if any(d.name.lower() == name.lower() for d in observers):
                raise ScenarioFileError(f"observer {name!r} declared twice", lineno)
            if len(observers) == 2:
                raise ScenarioFileError("at most two observer layers are supported", lineno)
            try:
                axis = axis_from_name(tokens[3])
            except ValueError as exc:
                raise ScenarioFileError(str(exc), lineno) from None
            rest = [t.lower() for t in tokens[5:]]
            if rest == ["all"]:
                target, particle = "all", None
            elif len(rest) == 2 and rest[0] == "pair":
                target = "pair"
                try:
                    particle = int(rest[1])
                except ValueError:
                    raise ScenarioFileError(
                        f"particle index must be an integer, got {rest[1]!r}", lineno
                    ) from None
                if particle not in (1, 2, 3):
                    raise ScenarioFileError(
                        f"particle index out of range 1..3: {particle}", lineno
                    )
                if not observers:
                    raise ScenarioFileError(
                        "pair records need a preceding observer layer", lineno
                    )
            else:
                raise ScenarioFileError(
                    f"expected 'all' or 'pair <m>' after 'on', got {' '.join(tokens[5:])!r}",
                    lineno,
                )
            if observers and axis is Axis.Z:
                raise ScenarioFileError(
                    "unsupported axis: pair groups carry no logical z basis", lineno
                )
            observers.append(ObserverDirective(name, axis, target, particle, lineno))

        elif keyword == "fiducial":
            if len(tokens) != 3:
                raise ScenarioFileError("expected 'fiducial <name> <axis><+|->'", lineno)
            name, spec = tokens[1], tokens[2]
            if len(spec) != 2 or spec[1] not in "+-":
                raise ScenarioFileError(
                    f"fiducial spec must be an axis letter plus sign, got {spec!r}", lineno
                )
            try:
                axis = axis_from_name(spec[0])
            except ValueError as exc:
                raise ScenarioFileError(str(exc), lineno) from None
            if name.lower() in fiducial_lines:
                raise ScenarioFileError(f"fiducial for {name!r} set twice", lineno)
            fiducial_lines[name.lower()] = lineno
            fiducials.append((name, axis, 1 if spec[1] == "+" else -1))

        elif keyword == "output":
            if len(tokens) != 2:
                raise ScenarioFileError("expected 'output <kind>'", lineno)
            kind = tokens[1].lower()
            if kind not in OUTPUT_KINDS:
                raise ScenarioFileError(
                    f"unknown output kind {tokens[1]!r}; expected one of "
                    f"{', '.join(OUTPUT_KINDS)}",
                    lineno,
                )
            if kind in outputs:
                raise ScenarioFileError(f"output {kind!r} requested twice", lineno)
            outputs.append(kind)

        else:
            raise ScenarioFileError(f"unknown directive {tokens[0]!r}", lineno)

    if not outputs:
        raise ScenarioFileError("config requests no outputs")
    known = {d.name.lower() for d in observers}
    for name, _, _ in fiducials:
        if name.lower() not in known:
            raise ScenarioFileError(
                f"fiducial for undeclared observer {name!r}",
                fiducial_lines[name.lower()],
            )
    if len(observers) == 1 and ("constraints" in outputs or "nogo" in outputs):
        raise ScenarioFileError(
            "constraints and nogo outputs need zero or two observer layers"
        )
    return ScenarioConfig(tuple(observers), tuple(fiducials), tuple(outputs))


# --- report structure ---------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    """One checked (or informational) numeric cell."""

    label: str
    value: float
    expected: float | None = None
    tolerance: float | None = None

    @property
    def passed(self) -> bool:
        if self.expected is None:
            return True
        return abs(self.value - self.expected) <= (self.tolerance or 0.0)


@dataclass(frozen=True)
class ReportSection:
    kind: str
    title: str
    rows: tuple[ReportRow, ...]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


@dataclass(frozen=True)
class Report:
    schema_version: str
    generator: str
    register: tuple[str, ...]
    observers: tuple[str, ...]
    tolerance: float
    sections: tuple[ReportSection, ...]

    @property
    def passed(self) -> bool:
        return all(section.passed for section in self.sections)


def _row(
    label: str,
    value: float,
    expected: float | None = None,
    tolerance: float | None = None,
) -> ReportRow:
    return ReportRow(
        label=label,
        value=_round12(value),
        expected=None if expected is None else _round12(expected),
        tolerance=None if tolerance is None else float(tolerance),
    )


# --- scenario construction ----------------------------------------------------


def _layers_from_config(config: ScenarioConfig) -> tuple[ObserverSpec, ...]:
    overrides = {name.lower(): (axis, sign) for name, axis, sign in config.fiducials}
    layers = []
    for directive in config.observers:
        axis, sign = overrides.get(directive.name.lower(), (directive.axis, 1))
        layers.append(
            ObserverSpec(
                label=directive.name,
                axis=directive.axis,
                fiducial_axis=axis,
                fiducial_sign=sign,
            )
        )
    return tuple(layers)


def _prepare(config: ScenarioConfig) -> Scenario:
    layers = _layers_from_config(config)
    s = new_scenario(layers)
    if layers:
        s = alice_entangle(s)
    if len(layers) == 2:
        bob = config.observers[1]
        if bob.target == "all":
            s = bob_entangle_full(s)
        else:
            s = bob_entangle_partial(s, bob.particle)
    return s


def _is_reference_shape(layers: Sequence[ObserverSpec]) -> bool:
    """True when pair-level reference values apply: first layer records Y
    into Y-basis fiducials, second layer records logical X."""
    if len(layers) != 2:
        return False
    first, second = layers
    return (
        first.axis is Axis.Y
        and first.fiducial_axis is Axis.Y
        and second.axis is Axis.X
    )


def _observer_rows(register) -> tuple[list[str], list[str]]:
    a_row = [n for n in register.names if n.startswith("A")]
    b_row = [n for n in register.names if n.startswith("B")]
    return a_row, b_row


# --- sections -----------------------------------------------------------------


def _expectations_section(s: Scenario, config: ScenarioConfig, tol: float) -> ReportSection:
    n = len(s.layers)
    a_row, b_row = _observer_rows(s.register)
    if n == 0:
        rho = reduce(s, ())
        strings = parity_strings(("S1", "S2", "S3"))
        expected: tuple[float | None, ...] = (1.0, -1.0, -1.0, -1.0)
        title = "parity products on the source state"
    elif n == 1:
        rho = reduce(s, a_row)
        strings = parity_strings(("S1", "S2", "S3"))
        if s.layers[0].axis is Axis.Y:
            expected = (0.0, 0.0, 0.0, 0.0)
        else:
            expected = (None,) * 4
        title = f"parity products on S relative to {s.layers[0].label}"
    else:
        rho = reduce(s, b_row)
        strings = parity_strings(("SA1", "SA2", "SA3"))
        title = f"logical parity products on S+A relative to {s.layers[1].label}"
        if _is_reference_shape(s.layers):
            copied = s.copied_particles(1)
            if copied == (1, 2, 3):
                expected = (1.0, 0.0, 0.0, 0.0)
            else:
                values = [1.0, 0.0, 0.0, 0.0]
                values[copied[0]] = -1.0
                expected = tuple(values)
        else:
            expected = (None,) * 4
    table = expectation_table(rho, strings)
    rows = tuple(
        _row(row.label, row.value, exp, None if exp is None else tol)
        for row, exp in zip(table.rows, expected)
    )
    return ReportSection("expectations", title, rows)


def _density_diagnostic_rows(rho: DensityOperator, tol: float) -> list[ReportRow]:
    m = rho.matrix
    return [
        _row("trace", float(np.trace(m).real), 1.0, tol),
        _row("hermiticity residual", float(np.max(np.abs(m - m.conj().T))), 0.0, tol),
        _row("negativity", float(max(0.0, -rho.eigenvalues().min())), 0.0, tol),
    ]


def _reduction_section(s: Scenario, config: ScenarioConfig, tol: float) -> ReportSection:
    n = len(s.layers)
    a_row, b_row = _observer_rows(s.register)
    notes: list[str] = []
    if n == 0:
        rho = reduce(s, ())
        title = "source state as a density operator"
        rows = _density_diagnostic_rows(rho, tol)
        rows.append(_row("purity", purity(rho), 1.0, tol))
    elif n == 1:
        rho = reduce(s, a_row)
        title = f"S relative to {s.layers[0].label}"
        rows = _density_diagnostic_rows(rho, tol)
        full_support = s.layers[0].axis is Axis.Y
        rows.append(_row("purity", purity(rho), 1.0 / 8.0 if full_support else None, tol))
        if full_support:
            reference = decohered_qubits(s.layers[0].axis)
            rows.append(
                _row(
                    "distance to uniform record mixture",
                    float(np.max(np.abs(rho.matrix - reference.matrix))),
                    0.0,
                    tol,
                )
            )
    else:
        rho = reduce(s, b_row)
        copied = s.copied_particles(1)
        title = f"S+A relative to {s.layers[1].label}"
        rows = _density_diagnostic_rows(rho, tol)
        reference_shape = _is_reference_shape(s.layers)
        if copied == (1, 2, 3):
            rows.append(
                _row("purity", purity(rho), 0.25 if reference_shape else None, tol)
            )
            if reference_shape:
                reference = ghz_pair_mixture(Axis.X, 1)
                rows.append(
                    _row(
                        "distance to parity-filtered pair mixture",
                        float(np.max(np.abs(rho.matrix - reference.matrix))),
                        0.0,
                        tol,
                    )
                )
        else:
            pivot = copied[0]
            rows.append(
                _row("purity", purity(rho), 0.5 if reference_shape else None, tol)
            )
            if reference_shape:
                rows.append(_row("rank", float(rho.rank(tol)), 2.0, 0.0))
                reference = bell_branch_mixture(pivot)
                rows.append(
                    _row(
                        "distance to pointer-Bell branch mixture",
                        float(np.max(np.abs(rho.matrix - reference.matrix))),
                        0.0,
                        tol,
                    )
                )
                for sign, fidelity in branch_bell_fidelities(rho, pivot):
                    bell_name = "opposite-record" if sign == 1 else "equal-record"
                    label = f"branch({sign:+d}) fidelity with {bell_name} Bell state"
                    rows.append(_row(label, fidelity, 1.0, tol))
                notes.append(
                    "pointer branches conditioned on the logical X value of "
                    f"pair SA{pivot}; +1 pairs opposite Y records, -1 equal ones"
                )
    return ReportSection("reduction", title, tuple(rows), tuple(notes))


def _constraints_section(s: Scenario, config: ScenarioConfig, tol: float) -> ReportSection:
    n = len(s.layers)
    notes: list[str] = []
    rows: list[ReportRow] = []
    if n == 0:
        constraints = ghz_basis_constraints()
        title = "parity constraints read off the source state"
        expected = (-1.0, -1.0, -1.0, 1.0)
        for constraint, exp in zip(constraints, expected):
            rows.append(_row(constraint.label, float(constraint.required), exp, 0.0))
        return ReportSection("constraints", title, tuple(rows), tuple(notes))

    title = "parity constraint read off the prepared state"
    reference_shape = _is_reference_shape(s.layers)
    try:
        constraints = verify_state_constraints(s)
    except ExtractionError as exc:
        rows.append(_row("single parity constraint extracted", 0.0, 1.0, 0.0))
        notes.append(str(exc))
        return ReportSection("constraints", title, tuple(rows), tuple(notes))

    full = [c for c in constraints if len(c.terms) == 3]
    rows.append(
        _row(
            "single parity constraint extracted",
            float(len(full)),
            1.0 if reference_shape else None,
            0.0 if reference_shape else None,
        )
    )
    copied = s.copied_particles(1)
    for constraint in full:
        expected_sign = None
        if reference_shape:
            expected_sign = 1.0 if copied == (1, 2, 3) else -1.0
        rows.append(
            _row(constraint.label, float(constraint.required), expected_sign, 0.0)
        )
    report = state_amplitude_report(s)
    for triple, amplitude in zip(report.triples, report.amplitudes):
        allowed = all(_triple_satisfies(triple, c) for c in full)
        expected_mag = (0.5 if allowed else 0.0) if reference_shape else None
        label = "|amplitude| at signs (" + ", ".join(f"{k:+d}" for k in triple) + ")"
        rows.append(_row(label, abs(amplitude), expected_mag, tol))
    return ReportSection("constraints", title, tuple(rows), tuple(notes))


def _triple_satisfies(triple: tuple[int, int, int], constraint) -> bool:
    product = 1
    for particle, _ in constraint.terms:
        product *= triple[particle - 1]
    return product == constraint.required


def _nogo_section(s: Scenario, config: ScenarioConfig, tol: float) -> ReportSection:
    n = len(s.layers)
    if n == 0:
        constraints = ghz_basis_constraints()
        premises, target = constraints[:3], constraints[3]
        title = "noncontextual value assignment on the source state"
        notes = [
            "all six (particle, axis) slots assigned at once; constraints "
            "read off the source state in mixed parity bases"
        ]
    else:
        premises, target = two_layer_constraints(s.layers)
        title = "joint noncontextual reading across observer contexts"
        notes = [
            "constraints read off four differently prepared states, then "
            "combined as one assignment; the relational account does not "
            "license this join",
        ]
    report = nogo_report(premises, target)
    notes.extend(c.label for c in report.constraints)
    rows = [
        _row(
            "assignments satisfying all constraints",
            float(report.satisfying_count),
            0.0,
            0.0,
        )
    ]
    for indices, count in report.subset_counts:
        expected = float(SUBSET_SIZE_COUNTS[len(indices)])
        label = "count for subset {" + ", ".join(str(i) for i in indices) + "}"
        rows.append(_row(label, float(count), expected, 0.0))
    argument = report.argument
    rows.append(_row("product of premise signs", float(argument.implied_sign), -1.0, 0.0))
    rows.append(_row("sign required by target", float(argument.required_sign), 1.0, 0.0))
    rows.append(
        _row("product argument contradiction", 1.0 if argument.contradiction else 0.0, 1.0, 0.0)
    )
    return ReportSection("nogo", title, tuple(rows), tuple(notes))


_SECTION_BUILDERS = {
    "expectations": _expectations_section,
    "reduction": _reduction_section,
    "constraints": _constraints_section,
    "nogo": _nogo_section,
}


def run(config: ScenarioConfig, tolerance: float = linalg.ATOL) -> Report:
    """Prepare the configured scenario and assemble the requested sections."""
    s = _prepare(config)
    sections = tuple(
        _SECTION_BUILDERS[kind](s, config, tolerance) for kind in config.outputs
    )
    return Report(
        schema_version=SCHEMA_VERSION,
        generator=f"relghz {__version__}",
        register=s.register.names,
        observers=tuple(d.describe() for d in config.observers),
        tolerance=float(tolerance),
        sections=sections,
    )


# --- emission -----------------------------------------------------------------


def emit(report: Report, format: str = "text") -> str:
    """Render a report; 'structured' is byte-stable JSON, 'text' is tabular."""
    if format == "structured":
        return _emit_structured(report)
    if format == "text":
        return _emit_text(report)
    raise ValueError(f"unknown format {format!r}; expected 'text' or 'structured'")


def _emit_structured(report: Report) -> str:
    payload = {
        "schema_version": report.schema_version,
        "generator": report.generator,
        "register": list(report.register),
        "observers": list(report.observers),
        "tolerance": report.tolerance,
        "pass": report.passed,
        "sections": [
            {
                "kind": section.kind,
                "title": section.title,
                "notes": list(section.notes),
                "pass": section.passed,
                "rows": [
                    {
                        "label": row.label,
                        "value": row.value,
                        "expected": row.expected,
                        "tolerance": row.tolerance,
                        "pass": row.passed,
                    }
                    for row in section.rows
                ],
            }
            for section in report.sections
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_report(text: str) -> dict:
    """Parse structured report text back into a dictionary."""
    return json.loads(text)


def _format_number(x: float | None) -> str:
    if x is None:
        return "-"
    return f"{x:.12g}"


def _emit_text(report: Report) -> str:
    lines = [
        f"relghz report (schema {report.schema_version})",
        f"register: {' '.join(report.register)}",
    ]
    if report.observers:
        lines.append("observers: " + "; ".join(report.observers))
    lines.append(f"tolerance: {_format_number(report.tolerance)}")
    for section in report.sections:
        lines.append("")
        lines.append(f"[{section.kind}] {section.title}")
        widths = (58, 20, 20, 10)
        header = ("label", "value", "expected", "tolerance")
        lines.append(
            "  "
            + "  ".join(h.ljust(w) for h, w in zip(header, widths))
            + "  mark"
        )
        for row in section.rows:
            cells = (
                row.label.ljust(widths[0]),
                _format_number(row.value).ljust(widths[1]),
                _format_number(row.expected).ljust(widths[2]),
                _format_number(row.tolerance).ljust(widths[3]),
            )
            mark = "PASS" if row.passed else "FAIL"
            if row.expected is None:
                mark = "info"
            lines.append("  " + "  ".join(cells) + f"  {mark}")
        for note in section.notes:
            lines.append(f"  note: {note}")
    lines.append("")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


# --- entry point --------------------------------------------------------------


def _run_command(args: argparse.Namespace) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_scenario(text)
    except ScenarioFileError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(config, tolerance=args.tolerance)
    except (CapacityError, PreconditionError, UnsupportedAxisError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    rendered = emit(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if report.passed else 1


def shipped_configs() -> list[tuple[str, str]]:
    """(name, text) for every scenario file distributed with the package."""
    root = resources.files("relghz").joinpath("configs")
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".cfg"):
            out.append((entry.name, entry.read_text(encoding="utf-8")))
    return out


def _verify_paper_command(args: argparse.Namespace) -> int:
    failures = 0
    for name, text in shipped_configs():
        config = parse_scenario(text)
        report = run(config)
        status = "PASS" if report.passed else "FAIL"
        if not report.passed:
            failures += 1
        print(f"{status} {name}")
    print(f"overall: {'PASS' if failures == 0 else 'FAIL'}")
    return 0 if failures == 0 else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="relghz",
        description="observer-relative GHZ scenarios and parity no-go checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run a scenario file")
    run_parser.add_argument("config", help="path to the scenario file")
    run_parser.add_argument(
        "--format", choices=("text", "structured"), default="text"
    )
    run_parser.add_argument("--out", help="write the report here instead of stdout")
    run_parser.add_argument(
        "--tolerance", type=float, default=linalg.ATOL,
        help="assertion tolerance for numeric checks (default 1e-10)",
    )
    run_parser.set_defaults(func=_run_command)

    verify_parser = sub.add_parser(
        "verify-paper", help="run every shipped scenario file and check it passes"
    )
    verify_parser.set_defaults(func=_verify_paper_command)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
