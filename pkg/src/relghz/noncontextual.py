"""Noncontextual value assignments and parity no-go arguments.

An assignment gives every (particle, axis) slot a definite +-1 value for
axes X and Y on particles 1..3; parity constraints demand that a product
of slots equal a required sign.  Constraints are abstract over slots:
whether a slot means a bare system qubit or an observer-correlated block
is carried only in display labels, never in the arithmetic.  The engine
supports both the direct single-system argument and the version that
joins constraints read off differently prepared observer states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .errors import ExtractionError, PreconditionError
from .hilbert import Axis, logical_pair_basis, product_state, qubit_basis_state
from .scenario import (
    PARTICLES,
    ObserverSpec,
    Scenario,
    StateVector,
    alice_entangle,
    bob_entangle_full,
    bob_entangle_partial,
    ghz,
    new_scenario,
)

__all__ = [
    "AmplitudeReport",
    "Assignment",
    "NoGoReport",
    "ParityConstraint",
    "ProductArgument",
    "check",
    "count_satisfying",
    "enumerate_assignments",
    "ghz_basis_constraints",
    "nogo_report",
    "product_argument",
    "state_amplitude_report",
    "two_layer_constraints",
    "verify_state_constraints",
]

ASSIGNMENT_AXES = (Axis.X, Axis.Y)
SIGNS = (1, -1)


@dataclass(frozen=True)
class Assignment:
    """Definite +-1 values for X and Y on each of the three particles."""

    x: tuple[int, int, int]
    y: tuple[int, int, int]

    def __post_init__(self) -> None:
        for triple in (self.x, self.y):
            if len(triple) != 3 or any(v not in SIGNS for v in triple):
                raise ValueError(f"values must be +-1 triples, got {triple!r}")

    def value(self, particle: int, axis: Axis) -> int:
        if particle not in PARTICLES:
            raise ValueError(f"particle index must be 1, 2 or 3, got {particle!r}")
        if axis is Axis.X:
            return self.x[particle - 1]
        if axis is Axis.Y:
            return self.y[particle - 1]
        raise ValueError("assignments carry only X and Y values")


def enumerate_assignments() -> list[Assignment]:
    """All 64 assignments, lexicographic over slots (1,X),(1,Y),...,(3,Y).

    +1 sorts before -1, so the all-(+1) assignment comes first.
    """
    out = []
    for values in itertools.product(SIGNS, repeat=6):
        out.append(
            Assignment(x=(values[0], values[2], values[4]),
                       y=(values[1], values[3], values[5]))
        )
    return out


@dataclass(frozen=True)
class ParityConstraint:
    """Product over (particle, axis) slots required to equal a sign."""

    terms: tuple[tuple[int, Axis], ...]
    required: int
    label: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("a parity constraint needs at least one term")
        if self.required not in SIGNS:
            raise ValueError(f"required sign must be +1 or -1, got {self.required!r}")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError(f"duplicate terms in {self.terms}")
        for particle, axis in self.terms:
            if particle not in PARTICLES:
                raise ValueError(f"particle index must be 1, 2 or 3, got {particle!r}")
            if axis not in ASSIGNMENT_AXES:
                raise ValueError(f"constraint axes are X and Y, got {axis!r}")
        if not self.label:
            text = " ".join(f"{axis.value}({m})" for m, axis in self.terms)
            object.__setattr__(self, "label", f"{text} = {self.required:+d}")


def check(assignment: Assignment, constraint: ParityConstraint) -> bool:
    """Does the assignment satisfy the constraint?"""
    product = 1
    for particle, axis in constraint.terms:
        product *= assignment.value(particle, axis)
    return product == constraint.required


def count_satisfying(constraints: Iterable[ParityConstraint]) -> int:
    """Number of the 64 assignments satisfying every constraint."""
    constraints = list(constraints)
    return sum(
        1
        for assignment in enumerate_assignments()
        if all(check(assignment, c) for c in constraints)
    )


@dataclass(frozen=True)
class ProductArgument:
    """Formal product of premises compared against a target constraint."""

    premise_labels: tuple[str, ...]
    target_label: str
    implied_sign: int
    required_sign: int

    @property
    def contradiction(self) -> bool:
        return self.implied_sign != self.required_sign


def product_argument(
    premises: Sequence[ParityConstraint], target: ParityConstraint
) -> ProductArgument:
    """Multiply the premises, cancel squared slots, compare with the target.

    Raises ValueError when the slots appearing an odd number of times do
    not match the target's slots exactly (the formal product would not be
    comparable).
    """
    premises = list(premises)
    if not premises:
        raise ValueError("the product argument needs at least one premise")
    counts: dict[tuple[int, Axis], int] = {}
    for premise in premises:
        for term in premise.terms:
            counts[term] = counts.get(term, 0) + 1
    odd = {term for term, count in counts.items() if count % 2 == 1}
    if odd != set(target.terms):
        raise ValueError(
            "formal product does not reduce to the target: uncancelled slots "
            f"{sorted((m, a.value) for m, a in odd)} vs target "
            f"{sorted((m, a.value) for m, a in target.terms)}"
        )
    implied = 1
    for premise in premises:
        implied *= premise.required
    return ProductArgument(
        premise_labels=tuple(p.label for p in premises),
        target_label=target.label,
        implied_sign=implied,
        required_sign=target.required,
    )


@dataclass(frozen=True)
class NoGoReport:
    """Joint satisfiability summary for a constraint family."""

    constraints: tuple[ParityConstraint, ...]
    satisfying_count: int
    subset_counts: tuple[tuple[tuple[int, ...], int], ...]
    argument: ProductArgument


def nogo_report(
    premises: Sequence[ParityConstraint], target: ParityConstraint
) -> NoGoReport:
    """Exhaustive count plus product argument for premises and target."""
    constraints = tuple(premises) + (target,)
    indices = range(len(constraints))
    subset_counts = []
    for size in range(len(constraints) + 1):
        for combo in itertools.combinations(indices, size):
            subset_counts.append(
                (combo, count_satisfying(constraints[i] for i in combo))
            )
    return NoGoReport(
        constraints=constraints,
        satisfying_count=count_satisfying(constraints),
        subset_counts=tuple(subset_counts),
        argument=product_argument(premises, target),
    )


# --- reading constraints off prepared states ---------------------------------


@dataclass(frozen=True, eq=False)
class _ParticleFamily:
    """Two candidate product factors (one per sign) for one particle."""

    particle: int
    axis: Axis
    attachment: str
    factors: Callable[[int], list[tuple[Sequence[str] | str, np.ndarray]]]


@dataclass(frozen=True, eq=False)
class AmplitudeReport:
    """Amplitudes of a state over an 8-element sign-product family."""

    axes: tuple[Axis, Axis, Axis]
    attachments: tuple[str, str, str]
    triples: tuple[tuple[int, int, int], ...]
    amplitudes: tuple[complex, ...]

    @property
    def total_probability(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes))

    def nonzero_triples(self, atol: float = linalg.ATOL) -> tuple[tuple[int, int, int], ...]:
        return tuple(
            triple
            for triple, amp in zip(self.triples, self.amplitudes)
            if abs(amp) > atol
        )


def _amplitude_report(state: StateVector, families: Sequence[_ParticleFamily]) -> AmplitudeReport:
    triples = tuple(itertools.product(SIGNS, repeat=3))
    amplitudes = []
    for signs in triples:
        factors: list[tuple[Sequence[str] | str, np.ndarray]] = []
        for family, sign in zip(families, signs):
            factors.extend(family.factors(sign))
        amplitudes.append(state.amplitude(product_state(state.register, factors)))
    return AmplitudeReport(
        axes=tuple(f.axis for f in families),
        attachments=tuple(f.attachment for f in families),
        triples=triples,
        amplitudes=tuple(amplitudes),
    )


def _extract_constraints(report: AmplitudeReport) -> list[ParityConstraint]:
    if abs(report.total_probability - 1.0) > linalg.ATOL:
        raise ExtractionError(
            f"state keeps probability {1 - report.total_probability:.3e} outside "
            "the product family",
            report,
        )
    nonzero = report.nonzero_triples()
    constraints: list[ParityConstraint] = []
    for positions in _nonempty_subsets(3):
        products = {
            int(np.prod([signs[i] for i in positions])) for signs in nonzero
        }
        if len(products) != 1:
            continue
        required = products.pop()
        terms = tuple((i + 1, report.axes[i]) for i in positions)
        text = " ".join(
            f"{report.axes[i].value}({report.attachments[i]})" for i in positions
        )
        constraints.append(
            ParityConstraint(terms=terms, required=required,
                             label=f"{text} = {required:+d}")
        )
    if not constraints:
        raise ExtractionError(
            "nonzero amplitudes satisfy no single parity constraint", report
        )
    allowed = [
        triple
        for triple in report.triples
        if all(
            int(np.prod([triple[m - 1] for m, _ in c.terms])) == c.required
            for c in constraints
        )
    ]
    if set(allowed) != set(nonzero):
        raise ExtractionError(
            "allowed sign triples and nonzero amplitudes disagree", report
        )
    return constraints


def _nonempty_subsets(n: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(1, n + 1):
        out.extend(itertools.combinations(range(n), size))
    return out


def _scenario_families(s: Scenario) -> list[_ParticleFamily]:
    if len(s.layers) != 2:
        raise PreconditionError("constraint extraction needs a two-layer scenario")
    if s.copied_particles(0) != PARTICLES:
        raise PreconditionError("first observer layer must be fully entangled")
    copied = s.copied_particles(1)
    if copied not in ((1,), (2,), (3,), PARTICLES):
        raise PreconditionError(
            "second layer must hold either one pair record or all three, "
            f"got particles {copied}"
        )
    second = s.layers[1]
    families = []
    for m in PARTICLES:
        group = f"SA{m}"
        record = f"B{m}"
        pair = logical_pair_basis(s.register, group)
        if m in copied:
            axis = second.axis
            pair_states = pair.states(axis)
            record_states = (
                qubit_basis_state(second.fiducial_axis, 1),
                qubit_basis_state(second.fiducial_axis, -1),
            )

            def factors(k, _p=pair_states, _r=record_states, _g=group, _b=record):
                i = 0 if k == 1 else 1
                return [(_g, _p[i]), (_b, _r[i])]

            attachment = f"SAB{m}"
        else:
            axis = Axis.Y
            pair_states = pair.y_states
            fiducial = second.fiducial_state()

            def factors(k, _p=pair_states, _f=fiducial, _g=group, _b=record):
                i = 0 if k == 1 else 1
                return [(_g, _p[i]), (_b, _f)]

            attachment = f"SA{m}"
        families.append(
            _ParticleFamily(particle=m, axis=axis, attachment=attachment, factors=factors)
        )
    return families


def state_amplitude_report(s: Scenario) -> AmplitudeReport:
    """Amplitudes of a prepared two-layer state over its product family."""
    return _amplitude_report(s.state, _scenario_families(s))


def verify_state_constraints(s: Scenario) -> list[ParityConstraint]:
    """Read the parity constraint(s) a prepared two-layer state satisfies.

    Confirms the state lives inside its product family, that the nonzero
    amplitudes share the constraint, and that every allowed sign triple
    actually appears.
    """
    return _extract_constraints(state_amplitude_report(s))


def ghz_basis_constraints() -> tuple[ParityConstraint, ...]:
    """The four parity constraints read directly off the GHZ state.

    Expands the state in the (x,y,y), (y,x,y), (y,y,x) and (x,x,x)
    single-qubit product bases; the first three force product -1, the
    last forces +1.
    """
    state = ghz()
    combos = (
        (Axis.X, Axis.Y, Axis.Y),
        (Axis.Y, Axis.X, Axis.Y),
        (Axis.Y, Axis.Y, Axis.X),
        (Axis.X, Axis.X, Axis.X),
    )
    out = []
    for axes in combos:
        families = []
        for m, axis in zip(PARTICLES, axes):
            def factors(k, _axis=axis, _name=f"S{m}"):
                return [(_name, qubit_basis_state(_axis, k))]

            families.append(
                _ParticleFamily(particle=m, axis=axis, attachment=f"S{m}", factors=factors)
            )
        constraints = _extract_constraints(_amplitude_report(state, families))
        full = [c for c in constraints if len(c.terms) == 3]
        if len(full) != 1:
            raise ExtractionError(
                f"expected one full-width constraint in the {axes} expansion"
            )
        out.append(full[0])
    return tuple(out)


def two_layer_constraints(
    layers: Sequence[ObserverSpec],
) -> tuple[tuple[ParityConstraint, ...], ParityConstraint]:
    """Constraints read off the four prepared two-layer states.

    Returns (premises, target): one premise per single-pair record
    (particles 1, 2, 3 in order), and the full-record constraint as the
    target.  Each state must determine exactly one constraint.
    """
    layers = tuple(layers)
    if len(layers) != 2:
        raise ValueError("expected exactly two observer layers")

    def sole_constraint(s: Scenario) -> ParityConstraint:
        constraints = verify_state_constraints(s)
        full = [c for c in constraints if len(c.terms) == 3]
        if len(full) != 1:
            raise ExtractionError(
                f"state determines {len(full)} full-width constraints, expected one"
            )
        return full[0]

    base = alice_entangle(new_scenario(layers))
    premises = tuple(
        sole_constraint(bob_entangle_partial(base, m)) for m in PARTICLES
    )
    target = sole_constraint(bob_entangle_full(base))
    return premises, target
