"""Observer-relative GHZ scenarios: records, reductions, and parity no-gos.

A three-qubit source in a GHZ state is copied, basis by basis, into
observer memory qubits.  The package builds these scenarios as explicit
state vectors, reduces them relative to any observer, reads parity
constraints off the surviving amplitudes, and enumerates noncontextual
value assignments to show which constraint sets admit none.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConsistencyError,
    ExtractionError,
    PreconditionError,
    ScenarioFileError,
    UnsupportedAxisError,
)
from .hilbert import (
    Axis,
    LogicalPairBasis,
    Register,
    axis_from_name,
    embed,
    logical_pair_basis,
    pauli,
    product_state,
    qubit_basis_state,
    standard_register,
)
from .linalg import ATOL, MAX_QUBITS, adjoint, expectation, partial_trace, tensor_product
from .noncontextual import (
    AmplitudeReport,
    Assignment,
    NoGoReport,
    ParityConstraint,
    ProductArgument,
    count_satisfying,
    enumerate_assignments,
    ghz_basis_constraints,
    nogo_report,
    product_argument,
    state_amplitude_report,
    two_layer_constraints,
    verify_state_constraints,
)
from .observables import (
    EigenCheck,
    ExpectationTable,
    PauliString,
    eigencheck,
    expectation_table,
    parity_strings,
    pauli_string_operator,
)
from .relational import (
    BellPair,
    DensityOperator,
    bell_branch_mixture,
    bell_states,
    branch_bell_fidelities,
    decohered_qubits,
    ghz_pair_mixture,
    purity,
    reduce,
    rho_prime,
)
from .scenario import (
    CopyUnitary,
    ObserverSpec,
    Scenario,
    StateVector,
    alice_entangle,
    bob_entangle_full,
    bob_entangle_partial,
    copy_unitary,
    ghz,
    new_scenario,
)

__all__ = [
    "ATOL",
    "MAX_QUBITS",
    "AmplitudeReport",
    "Assignment",
    "Axis",
    "BellPair",
    "CapacityError",
    "ConsistencyError",
    "CopyUnitary",
    "DensityOperator",
    "EigenCheck",
    "ExpectationTable",
    "ExtractionError",
    "LogicalPairBasis",
    "NoGoReport",
    "ObserverSpec",
    "ParityConstraint",
    "PauliString",
    "PreconditionError",
    "ProductArgument",
    "Register",
    "Scenario",
    "ScenarioFileError",
    "StateVector",
    "UnsupportedAxisError",
    "__version__",
    "adjoint",
    "alice_entangle",
    "axis_from_name",
    "bell_branch_mixture",
    "bell_states",
    "bob_entangle_full",
    "bob_entangle_partial",
    "branch_bell_fidelities",
    "copy_unitary",
    "count_satisfying",
    "decohered_qubits",
    "eigencheck",
    "embed",
    "enumerate_assignments",
    "expectation",
    "expectation_table",
    "ghz",
    "ghz_basis_constraints",
    "ghz_pair_mixture",
    "logical_pair_basis",
    "new_scenario",
    "nogo_report",
    "parity_strings",
    "partial_trace",
    "pauli",
    "pauli_string_operator",
    "product_argument",
    "product_state",
    "purity",
    "qubit_basis_state",
    "reduce",
    "rho_prime",
    "standard_register",
    "state_amplitude_report",
    "tensor_product",
    "two_layer_constraints",
    "verify_state_constraints",
]
