"""Dense complex linear algebra kernel.

Everything downstream works with plain numpy arrays: operators are square
complex128 matrices, states are 1-D complex128 vectors.  Tensor factors
follow register order with the first factor on the most significant bits
(numpy.kron convention), so for a register (S1, S2, S3) the computational
basis index of |b1 b2 b3> is b1*4 + b2*2 + b3.

Registers are capped at MAX_QUBITS qubits (dimension MAX_DIM); the cap is
enforced here so a runaway tensor product fails loudly instead of eating
memory.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import CapacityError, ConsistencyError

if TYPE_CHECKING:
    from .hilbert import Register

__all__ = [
    "ATOL",
    "ATOL_INTERNAL",
    "MAX_DIM",
    "MAX_QUBITS",
    "adjoint",
    "expectation",
    "matmul",
    "partial_trace",
    "tensor_product",
    "trace",
]

MAX_QUBITS = 9
MAX_DIM = 2 ** MAX_QUBITS

# Assertion tolerance for physics checks; internal algebraic identities
# (unitarity of constructed operators, commutation) are held to the
# tighter value.
ATOL = 1e-10
ATOL_INTERNAL = 1e-12


def _require_finite(a: np.ndarray, context: str) -> np.ndarray:
    if not np.all(np.isfinite(a)):
        raise ConsistencyError(f"{context}: non-finite entries")
    return a


def _as_complex(a: np.ndarray) -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim not in (1, 2):
        raise ValueError(f"expected a vector or matrix, got ndim={arr.ndim}")
    return arr


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two vectors or matrices, capacity checked."""
    a = _require_finite(_as_complex(a), "tensor_product")
    b = _require_finite(_as_complex(b), "tensor_product")
    out_rows = a.shape[0] * b.shape[0]
    out_cols = (a.shape[1] if a.ndim == 2 else 1) * (b.shape[1] if b.ndim == 2 else 1)
    if max(out_rows, out_cols) > MAX_DIM:
        raise CapacityError(
            f"tensor product of shapes {a.shape} and {b.shape} exceeds "
            f"the {MAX_QUBITS}-qubit register limit ({MAX_DIM})"
        )
    return np.kron(a, b)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b; also applies a matrix to a vector."""
    a = _as_complex(a)
    b = _as_complex(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    return _require_finite(a @ b, "matmul")


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    a = _as_complex(a)
    if a.ndim != 2:
        raise ValueError("adjoint is defined for matrices; conjugate vectors directly")
    return a.conj().T


def trace(a: np.ndarray) -> complex:
    """Trace of a square matrix."""
    a = _as_complex(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace needs a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def partial_trace(a: np.ndarray, register: "Register", discard: Iterable[str]) -> np.ndarray:
    """Trace the named subsystems out of an operator on the full register.

    Returns the operator on the retained subsystems, which keep their
    relative register order.  Discarding nothing copies the input;
    discarding everything leaves a 1x1 matrix holding the trace.
    """
    a = _as_complex(a)
    names = list(register.names)
    n = len(names)
    if a.shape != (2 ** n, 2 ** n):
        raise ValueError(
            f"operator shape {a.shape} does not match register dimension {2 ** n}"
        )
    discard = list(discard)
    unknown = [name for name in discard if name not in names]
    if unknown:
        raise ValueError(f"discard names {unknown} are not in the register")
    if len(set(discard)) != len(discard):
        raise ValueError("duplicate names in discard set")

    tensor = a.reshape([2] * (2 * n))
    remaining = list(names)
    for name in discard:
        k = remaining.index(name)
        m = len(remaining)
        tensor = np.trace(tensor, axis1=k, axis2=m + k)
        remaining.pop(k)
    d = 2 ** len(remaining)
    return _require_finite(tensor.reshape(d, d), "partial_trace")


def expectation(op: np.ndarray, rho: np.ndarray, atol: float = ATOL) -> float:
    """Real expectation value Tr(op @ rho) of a Hermitian op on a state rho.

    Raises ConsistencyError when the operands fail their contracts (op not
    Hermitian, rho trace not 1) or the trace keeps an imaginary residue
    above atol, since any of those signals a broken operator upstream.
    """
    op = _as_complex(op)
    rho = _as_complex(rho)
    if op.shape != rho.shape or op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"shape mismatch: op {op.shape} vs rho {rho.shape}")
    if not np.allclose(op, op.conj().T, atol=atol):
        raise ConsistencyError("operator is not Hermitian within tolerance")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise ConsistencyError(f"state trace {tr} is not 1 within tolerance")
    value = complex(np.einsum("ij,ji->", op, rho))
    if abs(value.imag) > atol:
        raise ConsistencyError(
            f"expectation has imaginary part {value.imag:.3e} above {atol}"
        )
    return float(value.real)
