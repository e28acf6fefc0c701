"""Qubit registers, measurement axes, and basis construction.

A Register is an ordered collection of named qubits plus optional pair
groups: named two-qubit blocks (system qubit, record qubit) that carry a
logical qubit on the subspace where both members agree in the Y basis.
The canonical layout is (S1, S2, S3, A1, A2, A3, B1, B2, B3) with pair
groups SAm = (Sm, Am); registers for smaller setups drop trailing rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import CapacityError, UnsupportedAxisError

__all__ = [
    "Axis",
    "LogicalPairBasis",
    "Register",
    "axis_from_name",
    "embed",
    "logical_pair_basis",
    "pauli",
    "product_state",
    "qubit_basis_state",
    "standard_register",
]


class Axis(Enum):
    """Measurement axis of a qubit."""

    Z = "z"
    X = "x"
    Y = "y"


def axis_from_name(name: str) -> Axis:
    try:
        return Axis(name.strip().lower())
    except ValueError:
        raise ValueError(f"unknown axis {name!r}; expected one of z, x, y") from None


_PAULI = {
    Axis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    Axis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Axis.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
}
for _m in _PAULI.values():
    _m.setflags(write=False)


def pauli(axis: Axis) -> np.ndarray:
    """The 2x2 Pauli matrix for an axis (read-only view)."""
    return _PAULI[axis]


def qubit_basis_state(axis: Axis, sign: int) -> np.ndarray:
    """Normalized eigenvector of pauli(axis) with eigenvalue sign.

    Phase convention: the first amplitude is real and non-negative, so
    X gives (1, +-1)/sqrt2 and Y gives (1, +-i)/sqrt2.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    if axis is Axis.Z:
        return np.array([1, 0] if sign == 1 else [0, 1], dtype=complex)
    if axis is Axis.X:
        return np.array([1, sign], dtype=complex) / np.sqrt(2)
    return np.array([1, sign * 1j], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class Register:
    """Ordered named qubits with optional two-qubit pair groups.

    Every subsystem has dimension 2.  Pair groups map a group name to an
    ordered (system, record) pair of member qubits.
    """

    names: tuple[str, ...]
    pairs: tuple[tuple[str, tuple[str, str]], ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.names) == 0:
            raise ValueError("register needs at least one qubit")
        if len(self.names) > linalg.MAX_QUBITS:
            raise CapacityError(
                f"{len(self.names)} qubits exceeds the supported {linalg.MAX_QUBITS}"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate qubit names")
        seen_groups = set()
        for group, members in self.pairs:
            if group in seen_groups or group in self.names:
                raise ValueError(f"pair group name {group!r} is not unique")
            seen_groups.add(group)
            if len(members) != 2 or len(set(members)) != 2:
                raise ValueError(f"pair group {group!r} needs two distinct members")
            for member in members:
                if member not in self.names:
                    raise ValueError(f"pair group {group!r} member {member!r} unknown")

    @property
    def n_qubits(self) -> int:
        return len(self.names)

    @property
    def dim(self) -> int:
        return 2 ** len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no subsystem named {name!r} in register {self.names}") from None

    def is_pair(self, name: str) -> bool:
        return any(group == name for group, _ in self.pairs)

    def pair_members(self, group: str) -> tuple[str, str]:
        for name, members in self.pairs:
            if name == group:
                return members
        raise KeyError(f"no pair group named {group!r}")

    def pair_names(self) -> tuple[str, ...]:
        return tuple(group for group, _ in self.pairs)

    def resolve(self, name: str) -> tuple[str, ...]:
        """Expand a subsystem or pair-group name to its member qubits."""
        if name in self.names:
            return (name,)
        return self.pair_members(name)

    def without(self, names: Iterable[str]) -> "Register":
        """Register with the given qubits removed; groups losing a member drop."""
        gone = set(names)
        for name in gone:
            self.index(name)
        kept = tuple(n for n in self.names if n not in gone)
        kept_pairs = tuple(
            (group, members)
            for group, members in self.pairs
            if not gone.intersection(members)
        )
        return Register(kept, kept_pairs)


def standard_register(layers: int) -> Register:
    """Canonical register for 0, 1 or 2 observer layers.

    Layer 0 is the three system qubits S1..S3; one layer adds record
    qubits A1..A3 and the pair groups SAm = (Sm, Am); a second layer adds
    B1..B3.
    """
    if layers not in (0, 1, 2):
        raise ValueError("supported layer counts are 0, 1 and 2")
    names = ["S1", "S2", "S3"]
    pairs: tuple[tuple[str, tuple[str, str]], ...] = ()
    if layers >= 1:
        names += ["A1", "A2", "A3"]
        pairs = tuple((f"SA{m}", (f"S{m}", f"A{m}")) for m in (1, 2, 3))
    if layers == 2:
        names += ["B1", "B2", "B3"]
    return Register(tuple(names), pairs)


def _permutation_to_register(register: Register, order: Sequence[int]) -> list[int]:
    if sorted(order) != list(range(register.n_qubits)):
        raise ValueError("targets must cover distinct register positions")
    return list(np.argsort(order))


def embed(op: np.ndarray, register: Register, targets: Sequence[str]) -> np.ndarray:
    """Extend an operator on the named target qubits to the full register.

    ``op`` must be square with dimension 2**len(targets) and its tensor
    factors must follow the order of ``targets``; the remaining qubits get
    the identity.  This is the only place that does axis bookkeeping: the
    operator is built as op (x) identity on the ordering targets+rest and
    the row and column axes are then permuted into register order.
    """
    op = np.asarray(op, dtype=complex)
    if len(targets) == 0:
        raise ValueError("embed needs at least one target")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {targets}")
    k = len(targets)
    if op.shape != (2 ** k, 2 ** k):
        raise ValueError(f"operator shape {op.shape} does not fit {k} target qubits")
    n = register.n_qubits
    positions = [register.index(t) for t in targets]
    rest = [i for i in range(n) if i not in positions]
    full = np.kron(op, np.eye(2 ** len(rest), dtype=complex))
    inv = _permutation_to_register(register, positions + rest)
    tensor = full.reshape([2] * (2 * n))
    tensor = tensor.transpose(inv + [n + i for i in inv])
    return np.ascontiguousarray(tensor.reshape(register.dim, register.dim))


def product_state(
    register: Register,
    factors: Sequence[tuple[Sequence[str] | str, np.ndarray]],
) -> np.ndarray:
    """Assemble a full-register state from factor vectors.

    Each factor is (targets, vector) where targets is a qubit name, a pair
    group name, or an explicit sequence of qubit names; the factors must
    cover every register qubit exactly once.
    """
    order: list[int] = []
    vec = np.ones(1, dtype=complex)
    for targets, factor in factors:
        if isinstance(targets, str):
            members: tuple[str, ...] = register.resolve(targets)
        else:
            members = tuple(targets)
        factor = np.asarray(factor, dtype=complex)
        if factor.shape != (2 ** len(members),):
            raise ValueError(
                f"factor for {members} has shape {factor.shape}, "
                f"expected ({2 ** len(members)},)"
            )
        order.extend(register.index(m) for m in members)
        vec = linalg.tensor_product(vec, factor)
    inv = _permutation_to_register(register, order)
    return np.ascontiguousarray(vec.reshape([2] * register.n_qubits).transpose(inv).reshape(-1))


@dataclass(frozen=True, eq=False)
class LogicalPairBasis:
    """Logical qubit carried by a (system, record) pair.

    y_states spans the logical subspace: the two products where both
    members hold the same Y eigenstate.  x_states are the conjugate basis
    (y_plus + i*k*y_minus)/sqrt2 for k = +1, -1.  There is no logical Z.
    """

    group: str
    members: tuple[str, str]
    y_states: tuple[np.ndarray, np.ndarray]
    x_states: tuple[np.ndarray, np.ndarray]

    def states(self, axis: Axis) -> tuple[np.ndarray, np.ndarray]:
        if axis is Axis.Y:
            return self.y_states
        if axis is Axis.X:
            return self.x_states
        raise UnsupportedAxisError(
            f"pair group {self.group!r} carries no logical Z basis"
        )


def logical_pair_basis(register: Register, group: str) -> LogicalPairBasis:
    """Build the logical basis pair for a named pair group."""
    members = register.pair_members(group)
    y_plus = linalg.tensor_product(
        qubit_basis_state(Axis.Y, 1), qubit_basis_state(Axis.Y, 1)
    )
    y_minus = linalg.tensor_product(
        qubit_basis_state(Axis.Y, -1), qubit_basis_state(Axis.Y, -1)
    )
    x_plus = (y_plus + 1j * y_minus) / np.sqrt(2)
    x_minus = (y_plus - 1j * y_minus) / np.sqrt(2)
    return LogicalPairBasis(group, members, (y_plus, y_minus), (x_plus, x_minus))
