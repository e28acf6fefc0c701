"""Pauli strings on qubits and logical pairs, tables, eigenvalue checks.

A string factor targets either a single qubit (plain Pauli matrix) or a
pair group, where the operator is the difference of the two logical basis
projectors, extended by zero outside the logical subspace.  The zero
extension is safe because every state these strings are evaluated on is
supported in the logical subspace; off-support weight shows up as drift
in the expectation values instead of being silently renormalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import UnsupportedAxisError
from .hilbert import Axis, Register, embed, logical_pair_basis, pauli
from .relational import DensityOperator
from .scenario import StateVector

__all__ = [
    "EigenCheck",
    "ExpectationTable",
    "PauliString",
    "TableRow",
    "eigencheck",
    "expectation_table",
    "parity_strings",
    "pauli_string_operator",
]


@dataclass(frozen=True)
class PauliString:
    """Product of axis factors on named targets (qubits or pair groups)."""

    factors: tuple[tuple[str, Axis], ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("a Pauli string needs at least one factor")
        targets = [t for t, _ in self.factors]
        if len(set(targets)) != len(targets):
            raise ValueError(f"duplicate targets in {targets}")

    @property
    def label(self) -> str:
        return " ".join(f"{axis.value}({target})" for target, axis in self.factors)


def parity_strings(targets: Sequence[str]) -> tuple[PauliString, ...]:
    """The four canonical strings xxx, xyy, yxy, yyx on three targets."""
    if len(targets) != 3:
        raise ValueError(f"expected three targets, got {len(targets)}")
    combos = (
        (Axis.X, Axis.X, Axis.X),
        (Axis.X, Axis.Y, Axis.Y),
        (Axis.Y, Axis.X, Axis.Y),
        (Axis.Y, Axis.Y, Axis.X),
    )
    return tuple(
        PauliString(tuple(zip(tuple(targets), axes))) for axes in combos
    )


def pauli_string_operator(register: Register, string: PauliString) -> np.ndarray:
    """Full-register matrix of a Pauli string.

    Pair-group factors restricted to X and Y; a Z factor on a pair raises
    UnsupportedAxisError since the pair carries no logical Z.
    """
    op = np.eye(register.dim, dtype=complex)
    for target, axis in string.factors:
        if register.is_pair(target):
            basis = logical_pair_basis(register, target)
            plus, minus = basis.states(axis)
            local = np.outer(plus, plus.conj()) - np.outer(minus, minus.conj())
            members = list(register.pair_members(target))
            op = op @ embed(local, register, members)
        else:
            op = op @ embed(pauli(axis), register, [target])
    return op


@dataclass(frozen=True)
class TableRow:
    label: str
    value: float


@dataclass(frozen=True)
class ExpectationTable:
    state_label: str
    rows: tuple[TableRow, ...]

    def value(self, label: str) -> float:
        for row in self.rows:
            if row.label == label:
                return row.value
        raise KeyError(f"no row labeled {label!r}")

    def values(self) -> tuple[float, ...]:
        return tuple(row.value for row in self.rows)


def expectation_table(
    rho: DensityOperator,
    strings: Sequence[PauliString],
    state_label: str = "rho",
) -> ExpectationTable:
    """Expectation value of each string on the state, one row per string."""
    rows = []
    for string in strings:
        op = pauli_string_operator(rho.register, string)
        rows.append(TableRow(string.label, linalg.expectation(op, rho.matrix)))
    return ExpectationTable(state_label, tuple(rows))


@dataclass(frozen=True)
class EigenCheck:
    """Outcome of testing whether a state is a +-1 eigenvector."""

    eigenvalue: int | None
    residual: float

    @property
    def is_eigenvector(self) -> bool:
        return self.eigenvalue is not None


def eigencheck(
    state: StateVector, string: PauliString, atol: float = linalg.ATOL
) -> EigenCheck:
    """Check op|psi> = lambda|psi> for lambda in {+1, -1}.

    The residual is ||op psi - <psi|op|psi> psi||, which is 0 for exact
    eigenvectors and stays meaningful (e.g. 1 for a state mapped to an
    orthogonal one) when the state is not an eigenvector.
    """
    op = pauli_string_operator(state.register, string)
    image = op @ state.amplitudes
    rayleigh = np.vdot(state.amplitudes, image)
    residual = float(np.linalg.norm(image - rayleigh * state.amplitudes))
    if abs(rayleigh.imag) > atol:
        return EigenCheck(None, residual)
    value = rayleigh.real
    for candidate in (1, -1):
        if abs(value - candidate) <= atol and residual <= atol:
            return EigenCheck(candidate, residual)
    return EigenCheck(None, residual)
