import itertools

import numpy as np
import pytest

from relghz import linalg
from relghz.errors import PreconditionError
from relghz.hilbert import Axis, Register, qubit_basis_state, standard_register
from relghz.scenario import (
    ObserverSpec,
    StateVector,
    alice_entangle,
    bob_entangle_full,
    bob_entangle_partial,
    copy_unitary,
    ghz,
    new_scenario,
)

ALICE = ObserverSpec.default("alice", Axis.Y)
BOB = ObserverSpec.default("bob", Axis.X)
SIGNS = (1, -1)


def test_ghz_amplitudes():
    state = ghz()
    expected = np.zeros(8, dtype=complex)
    expected[0] = expected[7] = 1 / np.sqrt(2)
    assert np.allclose(state.amplitudes, expected)
    assert state.register.names == ("S1", "S2", "S3")


def test_observer_spec_default():
    spec = ObserverSpec.default("alice", Axis.Y)
    assert spec.fiducial_axis is Axis.Y
    assert spec.fiducial_sign == 1
    assert np.allclose(spec.fiducial_state(), qubit_basis_state(Axis.Y, 1))
    with pytest.raises(ValueError):
        ObserverSpec("o", Axis.X, Axis.X, fiducial_sign=2)


def test_state_vector_validation():
    register = Register(("q",), ())
    with pytest.raises(ValueError):
        StateVector(register, np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        StateVector(register, np.array([1.0, 1.0]))


def test_state_vector_amplitude_convention():
    register = Register(("q",), ())
    state = StateVector(register, np.array([0.6, 0.8j]))
    other = np.array([1, 1j]) / np.sqrt(2)
    assert state.amplitude(other) == pytest.approx(np.vdot(other, state.amplitudes))


def test_new_scenario_bare():
    s = new_scenario()
    assert s.register.names == ("S1", "S2", "S3")
    assert np.allclose(s.state.amplitudes, ghz().amplitudes)
    assert s.layers == ()
    assert s.history == ()


def test_new_scenario_one_layer_initial_state():
    s = new_scenario([ALICE])
    assert s.register.names == ("S1", "S2", "S3", "A1", "A2", "A3")
    y_plus = qubit_basis_state(Axis.Y, 1)
    fiducials = np.kron(np.kron(y_plus, y_plus), y_plus)
    assert np.allclose(s.state.amplitudes, np.kron(ghz().amplitudes, fiducials))


def test_new_scenario_rejects_three_layers():
    with pytest.raises(ValueError):
        new_scenario([ALICE, BOB, ObserverSpec.default("carol", Axis.X)])


@pytest.mark.parametrize("axis", list(Axis))
@pytest.mark.parametrize("fiducial_sign", SIGNS)
def test_copy_unitary_records_basis_value(axis, fiducial_sign):
    register = Register(("s", "t"), ())
    basis = (qubit_basis_state(axis, 1), qubit_basis_state(axis, -1))
    fiducial = qubit_basis_state(Axis.Y, fiducial_sign)
    matrix = copy_unitary(register, basis, "s", "t", Axis.Y, fiducial_sign)
    for state, record in zip(basis, (qubit_basis_state(Axis.Y, 1), qubit_basis_state(Axis.Y, -1))):
        got = matrix @ np.kron(state, fiducial)
        assert np.allclose(got, np.kron(state, record), atol=1e-12)


@pytest.mark.parametrize("fiducial_axis", list(Axis))
def test_copy_unitary_is_unitary(fiducial_axis):
    register = Register(("s", "t"), ())
    basis = (qubit_basis_state(Axis.X, 1), qubit_basis_state(Axis.X, -1))
    matrix = copy_unitary(register, basis, "s", "t", fiducial_axis)
    assert np.allclose(matrix.conj().T @ matrix, np.eye(4), atol=1e-12)


def test_copy_unitary_pair_source():
    register = standard_register(2)
    from relghz.hilbert import logical_pair_basis

    basis = logical_pair_basis(register, "SA1").x_states
    matrix = copy_unitary(register, basis, "SA1", "B1", Axis.X)
    assert np.allclose(matrix.conj().T @ matrix, np.eye(512), atol=1e-11)


def test_copy_unitary_validation():
    register = standard_register(1)
    y_basis = (qubit_basis_state(Axis.Y, 1), qubit_basis_state(Axis.Y, -1))
    with pytest.raises(ValueError):
        copy_unitary(register, y_basis, "S1", "S1", Axis.Y)
    with pytest.raises(ValueError):
        copy_unitary(register, y_basis, "SA1", "A1", Axis.Y)
    with pytest.raises(ValueError):
        copy_unitary(register, y_basis, "S1", "SA2", Axis.Y)
    with pytest.raises(ValueError):
        copy_unitary(register, y_basis, "S1", "A1", Axis.Y, fiducial_sign=0)
    with pytest.raises(ValueError):
        copy_unitary(register, (y_basis[0], y_basis[0]), "S1", "A1", Axis.Y)
    bad_dim = (np.ones(4) / 2, np.ones(4) / 2)
    with pytest.raises(ValueError):
        copy_unitary(register, bad_dim, "S1", "A1", Axis.Y)


def test_copy_unitaries_commute_on_disjoint_targets():
    register = standard_register(1)
    y_basis = (qubit_basis_state(Axis.Y, 1), qubit_basis_state(Axis.Y, -1))
    u1 = copy_unitary(register, y_basis, "S1", "A1", Axis.Y)
    u2 = copy_unitary(register, y_basis, "S2", "A2", Axis.Y)
    assert np.max(np.abs(u1 @ u2 - u2 @ u1)) < 1e-12


def test_alice_entangle_amplitude_structure():
    s = alice_entangle(new_scenario([ALICE]))
    assert s.copied_particles(0) == (1, 2, 3)
    assert [entry.source for entry in s.history] == ["S1", "S2", "S3"]
    assert [entry.target for entry in s.history] == ["A1", "A2", "A3"]
    y = {k: qubit_basis_state(Axis.Y, k) for k in SIGNS}
    for p, q, r in itertools.product(SIGNS, repeat=3):
        probe = np.kron(
            np.kron(np.kron(y[p], y[q]), y[r]),
            np.kron(np.kron(y[p], y[q]), y[r]),
        )
        expected = (1 + 1j * p * q * r) / 4
        assert s.state.amplitude(probe) == pytest.approx(expected, abs=1e-12)


def test_alice_entangle_preconditions():
    with pytest.raises(PreconditionError):
        alice_entangle(new_scenario())
    s = alice_entangle(new_scenario([ALICE]))
    with pytest.raises(PreconditionError):
        alice_entangle(s)


def test_fiducial_sign_override_leaves_record_state_unchanged():
    default = alice_entangle(new_scenario([ALICE]))
    flipped_spec = ObserverSpec("alice", Axis.Y, Axis.Y, fiducial_sign=-1)
    flipped = alice_entangle(new_scenario([flipped_spec]))
    assert np.allclose(default.state.amplitudes, flipped.state.amplitudes, atol=1e-12)


def test_bob_preconditions():
    with pytest.raises(PreconditionError):
        bob_entangle_partial(alice_entangle(new_scenario([ALICE])), 1)
    unentangled = new_scenario([ALICE, BOB])
    with pytest.raises(PreconditionError):
        bob_entangle_partial(unentangled, 1)
    with pytest.raises(PreconditionError):
        bob_entangle_full(unentangled)
    base = alice_entangle(unentangled)
    with pytest.raises(ValueError):
        bob_entangle_partial(base, 5)
    partial = bob_entangle_partial(base, 1)
    with pytest.raises(PreconditionError):
        bob_entangle_partial(partial, 1)
    with pytest.raises(PreconditionError):
        bob_entangle_full(partial)


def test_bob_partial_bookkeeping():
    base = alice_entangle(new_scenario([ALICE, BOB]))
    s = bob_entangle_partial(base, 2)
    assert s.copied_particles(1) == (2,)
    assert s.history[-1].source == "SA2"
    assert s.history[-1].target == "B2"
    assert s.history[-1].copied_axis is Axis.X


def test_bob_full_bookkeeping():
    s = bob_entangle_full(alice_entangle(new_scenario([ALICE, BOB])))
    assert s.copied_particles(1) == (1, 2, 3)
    assert len(s.history) == 6


def test_uncopied_bob_qubits_stay_fiducial():
    base = alice_entangle(new_scenario([ALICE, BOB]))
    s = bob_entangle_partial(base, 1)
    keep = [n for n in s.register.names if n != "B2"]
    marginal = linalg.partial_trace(s.state.density_matrix(), s.register, keep)
    x_plus = qubit_basis_state(Axis.X, 1)
    assert np.allclose(marginal, np.outer(x_plus, x_plus.conj()), atol=1e-12)
