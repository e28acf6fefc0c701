import numpy as np
import pytest

from relghz.errors import UnsupportedAxisError
from relghz.hilbert import (
    Axis,
    Register,
    embed,
    logical_pair_basis,
    standard_register,
)
from relghz.observables import (
    EigenCheck,
    PauliString,
    eigencheck,
    expectation_table,
    parity_strings,
    pauli_string_operator,
)
from relghz.relational import reduce
from relghz.scenario import (
    ObserverSpec,
    StateVector,
    alice_entangle,
    ghz,
    new_scenario,
)

from oracles import PAULI_X, PAULI_Y

S_TARGETS = ("S1", "S2", "S3")


def test_pauli_string_validation():
    with pytest.raises(ValueError):
        PauliString(())
    with pytest.raises(ValueError):
        PauliString((("S1", Axis.X), ("S1", Axis.Y)))


def test_pauli_string_label():
    string = PauliString((("S1", Axis.X), ("S2", Axis.Y), ("S3", Axis.Y)))
    assert string.label == "x(S1) y(S2) y(S3)"


def test_parity_strings_axes():
    strings = parity_strings(S_TARGETS)
    assert [s.label for s in strings] == [
        "x(S1) x(S2) x(S3)",
        "x(S1) y(S2) y(S3)",
        "y(S1) x(S2) y(S3)",
        "y(S1) y(S2) x(S3)",
    ]
    with pytest.raises(ValueError):
        parity_strings(("a", "b"))


def test_pauli_string_operator_single_qubits():
    register = standard_register(0)
    string = PauliString((("S1", Axis.X), ("S3", Axis.Y)))
    op = pauli_string_operator(register, string)
    expected = embed(PAULI_X, register, ["S1"]) @ embed(PAULI_Y, register, ["S3"])
    assert np.allclose(op, expected, atol=1e-14)
    assert np.allclose(op, op.conj().T, atol=1e-14)


def test_qubit_string_squares_to_identity():
    register = standard_register(0)
    op = pauli_string_operator(register, parity_strings(S_TARGETS)[1])
    assert np.allclose(op @ op, np.eye(8), atol=1e-13)


@pytest.mark.parametrize("axis", [Axis.X, Axis.Y])
def test_logical_factor_spectrum(axis):
    register = standard_register(1)
    op = pauli_string_operator(register, PauliString((("SA1", axis),)))
    assert np.allclose(op, op.conj().T, atol=1e-13)
    basis = logical_pair_basis(register, "SA1")
    plus, minus = basis.states(axis)
    members = list(register.pair_members("SA1"))
    subspace = embed(
        np.outer(plus, plus.conj()) + np.outer(minus, minus.conj()),
        register,
        members,
    )
    assert np.allclose(op @ op, subspace, atol=1e-13)
    eigs = np.sort(np.linalg.eigvalsh(op))
    assert eigs[0] == pytest.approx(-1.0, abs=1e-12)
    assert eigs[-1] == pytest.approx(1.0, abs=1e-12)
    assert abs(eigs[len(eigs) // 2]) < 1e-12


def test_z_on_pair_is_unsupported():
    register = standard_register(1)
    with pytest.raises(UnsupportedAxisError):
        pauli_string_operator(register, PauliString((("SA1", Axis.Z),)))


def test_expectation_table_on_ghz():
    rho = reduce(new_scenario(), ())
    table = expectation_table(rho, parity_strings(S_TARGETS), "source")
    assert table.state_label == "source"
    assert table.values() == pytest.approx((1.0, -1.0, -1.0, -1.0), abs=1e-12)
    assert table.value("x(S1) x(S2) x(S3)") == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(KeyError):
        table.value("zzz")


def test_expectation_table_one_layer_zeros():
    s = alice_entangle(new_scenario([ObserverSpec.default("alice", Axis.Y)]))
    rho = reduce(s, ("A1", "A2", "A3"))
    table = expectation_table(rho, parity_strings(S_TARGETS))
    assert table.values() == pytest.approx((0.0, 0.0, 0.0, 0.0), abs=1e-12)


@pytest.mark.parametrize(
    "index,expected",
    [(0, 1), (1, -1), (2, -1), (3, -1)],
)
def test_ghz_eigenchecks(index, expected):
    result = eigencheck(ghz(), parity_strings(S_TARGETS)[index])
    assert result.is_eigenvector
    assert result.eigenvalue == expected
    assert result.residual < 1e-12


def test_single_factor_is_not_eigenvector():
    result = eigencheck(ghz(), PauliString((("S1", Axis.X),)))
    assert not result.is_eigenvector
    assert result.eigenvalue is None
    assert result.residual == pytest.approx(1.0, abs=1e-12)


def test_minus_ghz_variant_flips_xxx():
    register = standard_register(0)
    amps = np.zeros(8, dtype=complex)
    amps[0] = 1 / np.sqrt(2)
    amps[7] = -1 / np.sqrt(2)
    state = StateVector(register, amps)
    result = eigencheck(state, parity_strings(S_TARGETS)[0])
    assert result.eigenvalue == -1


def test_other_plus_one_eigenvector():
    register = standard_register(0)
    amps = np.zeros(8, dtype=complex)
    amps[1] = amps[6] = 1 / np.sqrt(2)
    state = StateVector(register, amps)
    result = eigencheck(state, parity_strings(S_TARGETS)[0])
    assert result.eigenvalue == 1
    assert result.residual < 1e-12


def test_eigencheck_against_eigendecomposition():
    register = standard_register(0)
    string = parity_strings(S_TARGETS)[2]
    op = pauli_string_operator(register, string)
    values, vectors = np.linalg.eigh(op)
    for column in (0, 7):
        state = StateVector(register, vectors[:, column])
        result = eigencheck(state, string)
        assert result.is_eigenvector
        assert result.eigenvalue == int(round(values[column]))


def test_eigencheck_mixed_eigenspaces():
    register = standard_register(0)
    string = parity_strings(S_TARGETS)[0]
    op = pauli_string_operator(register, string)
    values, vectors = np.linalg.eigh(op)
    mixed = (vectors[:, 0] + vectors[:, 7]) / np.sqrt(2)
    result = eigencheck(StateVector(register, mixed), string)
    assert not result.is_eigenvector
    assert result.residual == pytest.approx(1.0, abs=1e-12)


def test_eigencheck_dataclass_shape():
    check = EigenCheck(eigenvalue=None, residual=0.5)
    assert not check.is_eigenvector
    check = EigenCheck(eigenvalue=1, residual=0.0)
    assert check.is_eigenvector


def test_logical_parity_table_on_pair_register():
    from relghz.relational import ghz_pair_mixture

    rho = ghz_pair_mixture(Axis.X, 1)
    table = expectation_table(rho, parity_strings(("SA1", "SA2", "SA3")))
    assert table.values() == pytest.approx((1.0, 0.0, 0.0, 0.0), abs=1e-12)
