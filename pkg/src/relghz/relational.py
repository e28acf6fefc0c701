"""Observer-relative states: reductions and their closed forms.

The state relative to an observer O is the partial trace of the global
pure state over O's qubits.  The closed-form constructors here rebuild
the same operators from projectors; tests compare both routes entrywise,
so the partial-trace engine and the hand-built mixtures check each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import linalg
from .errors import PreconditionError
from .hilbert import (
    Axis,
    Register,
    embed,
    logical_pair_basis,
    product_state,
    qubit_basis_state,
    standard_register,
)
from .scenario import Scenario

__all__ = [
    "BellPair",
    "DensityOperator",
    "bell_branch_mixture",
    "bell_states",
    "branch_bell_fidelities",
    "decohered_qubits",
    "ghz_pair_mixture",
    "purity",
    "reduce",
    "rho_prime",
]

SIGNS = (1, -1)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite operator on a register."""

    register: Register
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.register.dim, self.register.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match register dimension "
                f"{self.register.dim}"
            )
        if not np.allclose(m, m.conj().T, atol=linalg.ATOL):
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = np.trace(m)
        if abs(tr - 1.0) > linalg.ATOL:
            raise ValueError(f"density matrix trace {tr} is not 1 within tolerance")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -linalg.ATOL:
            raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, atol: float = linalg.ATOL) -> int:
        return int(np.sum(self.eigenvalues() > atol))


def reduce(s: Scenario, observer: Iterable[str]) -> DensityOperator:
    """State of the rest of the register relative to the named observer qubits.

    An empty observer set returns the global state as a pure projector.
    """
    discard = list(observer)
    retained = s.register.without(discard)
    rho = linalg.partial_trace(s.state.density_matrix(), s.register, discard)
    return DensityOperator(retained, rho)


def purity(rho: DensityOperator) -> float:
    """Tr(rho^2); 1 for pure states, 1/d for the maximal mixture."""
    value = complex(np.einsum("ij,ji->", rho.matrix, rho.matrix))
    return float(value.real)


@dataclass(frozen=True, eq=False)
class BellPair:
    """The two Bell states living on the logical pairs (SA2, SA3).

    phi pairs opposite logical Y values, psi pairs equal ones.  Both are
    unit vectors on the 4-qubit sub-register (S2, S3, A2, A3), supported
    in the logical subspace of each pair.
    """

    register: Register
    phi: np.ndarray
    psi: np.ndarray


def _bell_pair_on(register: Register, groups: tuple[str, str]) -> tuple[np.ndarray, np.ndarray]:
    left = logical_pair_basis(register, groups[0]).y_states
    right = logical_pair_basis(register, groups[1]).y_states
    phi = (
        product_state(register, [(groups[0], left[0]), (groups[1], right[1])])
        + product_state(register, [(groups[0], left[1]), (groups[1], right[0])])
    ) / np.sqrt(2)
    psi = (
        product_state(register, [(groups[0], left[0]), (groups[1], right[0])])
        + product_state(register, [(groups[0], left[1]), (groups[1], right[1])])
    ) / np.sqrt(2)
    return phi, psi


def bell_states() -> BellPair:
    """Bell pair on (SA2, SA3) in the canonical 4-qubit sub-register."""
    register = Register(
        ("S2", "S3", "A2", "A3"),
        (("SA2", ("S2", "A2")), ("SA3", ("S3", "A3"))),
    )
    phi, psi = _bell_pair_on(register, ("SA2", "SA3"))
    return BellPair(register, phi, psi)


def decohered_qubits(axis: Axis = Axis.Y) -> DensityOperator:
    """Equal-weight mixture of all single-qubit axis products on S1..S3.

    Eight projectors at weight 1/8; equals the maximally mixed state, but
    built term by term so it can serve as an independent reference.
    """
    register = standard_register(0)
    rho = np.zeros((register.dim, register.dim), dtype=complex)
    for signs in itertools.product(SIGNS, repeat=3):
        vec = product_state(
            register,
            [(f"S{m}", qubit_basis_state(axis, k)) for m, k in zip((1, 2, 3), signs)],
        )
        rho += np.outer(vec, vec.conj()) / 8
    return DensityOperator(register, rho)


def ghz_pair_mixture(axis: Axis = Axis.X, parity: int = 1) -> DensityOperator:
    """Mixture of logical-axis pair products whose signs multiply to parity.

    Four projectors at weight 1/4 on the register (S1..S3, A1..A3) with
    pair groups SA1..SA3.
    """
    if parity not in SIGNS:
        raise ValueError(f"parity must be +1 or -1, got {parity!r}")
    register = standard_register(1)
    rho = np.zeros((register.dim, register.dim), dtype=complex)
    for signs in itertools.product(SIGNS, repeat=3):
        if signs[0] * signs[1] * signs[2] != parity:
            continue
        factors = []
        for m, k in zip((1, 2, 3), signs):
            states = logical_pair_basis(register, f"SA{m}").states(axis)
            factors.append((f"SA{m}", states[0] if k == 1 else states[1]))
        vec = product_state(register, factors)
        rho += np.outer(vec, vec.conj()) / 4
    return DensityOperator(register, rho)


def bell_branch_mixture(pivot: int = 1) -> DensityOperator:
    """Half-half mixture of logical-X pointer branches on the pivot pair.

    The +1 branch carries phi (opposite logical Y values) on the other two
    pairs, the -1 branch carries psi (equal values).
    """
    if pivot not in (1, 2, 3):
        raise ValueError(f"pivot must be 1, 2 or 3, got {pivot!r}")
    register = standard_register(1)
    others = tuple(m for m in (1, 2, 3) if m != pivot)
    sub = Register(
        tuple(f"S{m}" for m in others) + tuple(f"A{m}" for m in others),
        tuple((f"SA{m}", (f"S{m}", f"A{m}")) for m in others),
    )
    phi, psi = _bell_pair_on(sub, (f"SA{others[0]}", f"SA{others[1]}"))
    x_states = logical_pair_basis(register, f"SA{pivot}").x_states
    pivot_members = list(register.pair_members(f"SA{pivot}"))

    rho = np.zeros((register.dim, register.dim), dtype=complex)
    for pointer, branch in ((x_states[0], phi), (x_states[1], psi)):
        pointer_op = embed(np.outer(pointer, pointer.conj()), register, pivot_members)
        branch_op = embed(np.outer(branch, branch.conj()), register, list(sub.names))
        rho += pointer_op @ branch_op / 2
    return DensityOperator(register, rho)


def branch_bell_fidelities(
    rho: DensityOperator, pivot: int = 1
) -> tuple[tuple[int, float], ...]:
    """Overlap of each pointer-conditioned branch with its Bell state.

    Conditions rho on the two logical-X values of the pivot pair, traces
    the pivot out, renormalizes, and evaluates the branch against phi
    (for +1) or psi (for -1).  Returns ((+1, f), (-1, f)).
    """
    if pivot not in (1, 2, 3):
        raise ValueError(f"pivot must be 1, 2 or 3, got {pivot!r}")
    register = rho.register
    others = tuple(m for m in (1, 2, 3) if m != pivot)
    sub = Register(
        tuple(f"S{m}" for m in others) + tuple(f"A{m}" for m in others),
        tuple((f"SA{m}", (f"S{m}", f"A{m}")) for m in others),
    )
    phi, psi = _bell_pair_on(sub, (f"SA{others[0]}", f"SA{others[1]}"))
    x_states = logical_pair_basis(register, f"SA{pivot}").x_states
    pivot_members = list(register.pair_members(f"SA{pivot}"))

    out = []
    for sign, pointer, bell in ((1, x_states[0], phi), (-1, x_states[1], psi)):
        projector = embed(np.outer(pointer, pointer.conj()), register, pivot_members)
        conditioned = projector @ rho.matrix @ projector
        weight = float(np.trace(conditioned).real)
        if weight <= linalg.ATOL:
            raise PreconditionError(
                f"pointer branch {sign:+d} of pair SA{pivot} has no weight"
            )
        branch = (
            linalg.partial_trace(conditioned, register, pivot_members) / weight
        )
        fidelity = float(np.real(np.vdot(bell, branch @ bell)))
        out.append((sign, fidelity))
    return tuple(out)


def rho_prime(s: Scenario) -> DensityOperator:
    """State of S+A relative to the second observer after one pair record.

    Requires the scenario history to show a full first-layer record and a
    single second-layer record on pair 1.
    """
    if len(s.layers) != 2:
        raise PreconditionError("rho_prime needs a two-layer scenario")
    if s.copied_particles(0) != (1, 2, 3) or s.copied_particles(1) != (1,):
        raise PreconditionError(
            "rho_prime needs a full first-layer record and a single "
            "second-layer record on pair 1"
        )
    return reduce(s, ("B1", "B2", "B3"))
