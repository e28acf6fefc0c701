"""GHZ source preparation and observer copy dynamics.

A Scenario is an immutable snapshot: register, pure pre-measurement state,
the observer layer configuration, and the history of copy unitaries applied
so far.  Entanglement steps return new scenarios; nothing collapses.

The first observer layer records each system qubit Sm onto Am in a chosen
single-qubit basis (Y in the reference setup).  The second layer records
the logical X value of each pair SAm onto Bm.  Each copy is a controlled
basis flip: identity on the branch matching the record qubit's fiducial
sign, a basis flip on the other branch, identity on the non-logical
complement of pair sources.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

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

__all__ = [
    "CopyUnitary",
    "ObserverSpec",
    "Scenario",
    "StateVector",
    "alice_entangle",
    "bob_entangle_full",
    "bob_entangle_partial",
    "copy_unitary",
    "ghz",
    "new_scenario",
]

PARTICLES = (1, 2, 3)


@dataclass(frozen=True)
class ObserverSpec:
    """One observer layer: which basis it copies and how its qubits start."""

    label: str
    axis: Axis
    fiducial_axis: Axis
    fiducial_sign: int = 1

    def __post_init__(self) -> None:
        if self.fiducial_sign not in (1, -1):
            raise ValueError(f"fiducial sign must be +1 or -1, got {self.fiducial_sign!r}")

    @classmethod
    def default(cls, label: str, axis: Axis) -> "ObserverSpec":
        """Fiducial state = +1 eigenstate of the copied basis."""
        return cls(label=label, axis=axis, fiducial_axis=axis, fiducial_sign=1)

    def fiducial_state(self) -> np.ndarray:
        return qubit_basis_state(self.fiducial_axis, self.fiducial_sign)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm pure state on a register."""

    register: Register
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.register.dim,):
            raise ValueError(
                f"amplitude shape {amps.shape} does not match register "
                f"dimension {self.register.dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > linalg.ATOL:
            raise ValueError(f"state norm {norm} is not 1 within {linalg.ATOL}")
        object.__setattr__(self, "amplitudes", amps)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def amplitude(self, other: np.ndarray) -> complex:
        """Inner product <other|self>."""
        return complex(np.vdot(other, self.amplitudes))


@dataclass(frozen=True, eq=False)
class CopyUnitary:
    """Record of one copy step, with the full-register matrix it applied."""

    source: str
    target: str
    copied_axis: Axis
    source_states: tuple[np.ndarray, np.ndarray]
    target_states: tuple[np.ndarray, np.ndarray]
    fiducial_axis: Axis
    fiducial_sign: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class Scenario:
    """Register, current pure state, observer layers, and copy history."""

    register: Register
    state: StateVector
    layers: tuple[ObserverSpec, ...] = ()
    history: tuple[CopyUnitary, ...] = ()

    def copied_particles(self, layer: int) -> tuple[int, ...]:
        """Particle indices already recorded by the given observer layer."""
        row = "A" if layer == 0 else "B"
        done = []
        for entry in self.history:
            if entry.target.startswith(row):
                done.append(int(entry.target[1:]))
        return tuple(sorted(done))


def ghz() -> StateVector:
    """(|000> + |111>)/sqrt2 on the three system qubits."""
    register = standard_register(0)
    amps = np.zeros(register.dim, dtype=complex)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return StateVector(register, amps)


def new_scenario(layers: Sequence[ObserverSpec] = ()) -> Scenario:
    """GHZ source with every observer qubit prepared in its fiducial state."""
    layers = tuple(layers)
    if len(layers) > 2:
        raise ValueError("at most two observer layers are supported")
    register = standard_register(len(layers))
    factors: list[tuple[Sequence[str] | str, np.ndarray]] = [
        (("S1", "S2", "S3"), ghz().amplitudes)
    ]
    for i, layer in enumerate(layers):
        row = "AB"[i]
        for m in PARTICLES:
            factors.append((f"{row}{m}", layer.fiducial_state()))
    state = StateVector(register, product_state(register, factors))
    return Scenario(register=register, state=state, layers=layers)


def copy_unitary(
    register: Register,
    basis: tuple[np.ndarray, np.ndarray],
    source: str,
    target: str,
    fiducial_axis: Axis,
    fiducial_sign: int = 1,
) -> np.ndarray:
    """Unitary that records which of two source basis states is present.

    ``basis`` holds the two orthonormal source states (+1 first); source
    may be a qubit or a pair group, target must be a qubit outside it.
    A source basis state k maps (source state k) (x) |in> to
    (source state k) (x) (target basis state k), where |in> is the
    fiducial_sign eigenstate of fiducial_axis on the target; everything
    orthogonal to the two source states is left alone.
    """
    members = register.resolve(source)
    if target in members:
        raise ValueError(f"target {target!r} overlaps source {source!r}")
    if register.is_pair(target):
        raise ValueError(f"target {target!r} must be a single qubit")
    register.index(target)
    if fiducial_sign not in (1, -1):
        raise ValueError(f"fiducial sign must be +1 or -1, got {fiducial_sign!r}")

    d = 2 ** len(members)
    b_plus, b_minus = (np.asarray(b, dtype=complex) for b in basis)
    if b_plus.shape != (d,) or b_minus.shape != (d,):
        raise ValueError(f"basis states must have dimension {d} for source {source!r}")
    gram = np.array(
        [
            [np.vdot(b_plus, b_plus), np.vdot(b_plus, b_minus)],
            [np.vdot(b_minus, b_plus), np.vdot(b_minus, b_minus)],
        ]
    )
    if not np.allclose(gram, np.eye(2), atol=linalg.ATOL):
        raise ValueError("source basis states are not orthonormal")

    t_plus = qubit_basis_state(fiducial_axis, 1)
    t_minus = qubit_basis_state(fiducial_axis, -1)
    flip = np.outer(t_plus, t_minus.conj()) + np.outer(t_minus, t_plus.conj())
    eye2 = np.eye(2, dtype=complex)
    p_plus = np.outer(b_plus, b_plus.conj())
    p_minus = np.outer(b_minus, b_minus.conj())
    complement = np.eye(d, dtype=complex) - p_plus - p_minus

    branch = {1: eye2 if fiducial_sign == 1 else flip,
              -1: flip if fiducial_sign == 1 else eye2}
    block = (
        linalg.tensor_product(p_plus, branch[1])
        + linalg.tensor_product(p_minus, branch[-1])
        + linalg.tensor_product(complement, eye2)
    )
    assert np.allclose(
        block.conj().T @ block, np.eye(2 * d), atol=linalg.ATOL
    ), "copy block is not unitary"
    return embed(block, register, list(members) + [target])


def _source_basis(s: Scenario, source: str, axis: Axis) -> tuple[np.ndarray, np.ndarray]:
    if s.register.is_pair(source):
        return logical_pair_basis(s.register, source).states(axis)
    return (qubit_basis_state(axis, 1), qubit_basis_state(axis, -1))


def _require_qubit_state(s: Scenario, name: str, vec: np.ndarray, what: str) -> None:
    rho_full = s.state.density_matrix()
    keep = [n for n in s.register.names if n != name]
    rho = linalg.partial_trace(rho_full, s.register, keep)
    if not np.allclose(rho, np.outer(vec, vec.conj()), atol=linalg.ATOL):
        raise PreconditionError(f"{name} is not in its {what} state")


def _apply_copy(s: Scenario, layer_index: int, m: int) -> Scenario:
    layer = s.layers[layer_index]
    row = "AB"[layer_index]
    target = f"{row}{m}"
    source = f"SA{m}" if layer_index == 1 else f"S{m}"
    _require_qubit_state(s, target, layer.fiducial_state(), "fiducial")
    basis = _source_basis(s, source, layer.axis)
    matrix = copy_unitary(
        s.register, basis, source, target, layer.fiducial_axis, layer.fiducial_sign
    )
    entry = CopyUnitary(
        source=source,
        target=target,
        copied_axis=layer.axis,
        source_states=basis,
        target_states=(
            qubit_basis_state(layer.fiducial_axis, 1),
            qubit_basis_state(layer.fiducial_axis, -1),
        ),
        fiducial_axis=layer.fiducial_axis,
        fiducial_sign=layer.fiducial_sign,
        matrix=matrix,
    )
    new_state = StateVector(s.register, matrix @ s.state.amplitudes)
    return replace(s, state=new_state, history=s.history + (entry,))


def alice_entangle(s: Scenario) -> Scenario:
    """First observer records every system qubit in its copy basis."""
    if len(s.layers) < 1:
        raise PreconditionError("scenario has no observer layer to entangle")
    if s.copied_particles(0):
        raise PreconditionError("first observer layer already entangled")
    for m in PARTICLES:
        s = _apply_copy(s, 0, m)
    return s


def _require_first_layer_done(s: Scenario) -> None:
    if len(s.layers) < 2:
        raise PreconditionError("scenario has no second observer layer")
    if s.copied_particles(0) != PARTICLES:
        raise PreconditionError("first observer layer must be fully entangled first")


def bob_entangle_partial(s: Scenario, m: int) -> Scenario:
    """Second observer records the logical value of the single pair SAm."""
    if m not in PARTICLES:
        raise ValueError(f"particle index must be 1, 2 or 3, got {m!r}")
    _require_first_layer_done(s)
    return _apply_copy(s, 1, m)


def bob_entangle_full(s: Scenario) -> Scenario:
    """Second observer records the logical value of all three pairs."""
    _require_first_layer_done(s)
    for m in PARTICLES:
        s = bob_entangle_partial(s, m)
    return s
