"""Hand-rolled reference implementations the tests check the package against.

Everything here recomputes results from first principles (explicit index
loops, dict-based enumeration) so a bug in the package's vectorized code
cannot hide in the oracle.  The bit convention matches the package
contract: the first register name is the most significant bit.
"""

import itertools

import numpy as np

SQRT_HALF = 1 / np.sqrt(2)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def kron_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    n, m = a.shape
    p, q = b.shape
    out = np.zeros((n * p, m * q), dtype=complex)
    for i in range(n):
        for j in range(m):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = a[i, j] * b[k, l]
    return out


def _global_index(bits: dict, names: tuple) -> int:
    index = 0
    for position, name in enumerate(names):
        index += bits[name] << (len(names) - 1 - position)
    return index


def partial_trace_oracle(rho: np.ndarray, names: tuple, discard: tuple) -> np.ndarray:
    retained = tuple(n for n in names if n not in discard)
    dim = 2 ** len(retained)
    out = np.zeros((dim, dim), dtype=complex)
    for row_bits in itertools.product((0, 1), repeat=len(retained)):
        for col_bits in itertools.product((0, 1), repeat=len(retained)):
            total = 0.0 + 0.0j
            for traced in itertools.product((0, 1), repeat=len(discard)):
                row = dict(zip(retained, row_bits)) | dict(zip(discard, traced))
                col = dict(zip(retained, col_bits)) | dict(zip(discard, traced))
                total += rho[_global_index(row, names), _global_index(col, names)]
            out[
                _global_index(dict(zip(retained, row_bits)), retained),
                _global_index(dict(zip(retained, col_bits)), retained),
            ] = total
    return out


def embed_oracle(op: np.ndarray, names: tuple, targets: tuple) -> np.ndarray:
    spectators = tuple(n for n in names if n not in targets)
    dim = 2 ** len(names)
    out = np.zeros((dim, dim), dtype=complex)
    for row_bits in itertools.product((0, 1), repeat=len(names)):
        row = dict(zip(names, row_bits))
        for col_bits in itertools.product((0, 1), repeat=len(names)):
            col = dict(zip(names, col_bits))
            if any(row[n] != col[n] for n in spectators):
                continue
            op_row = _global_index({t: row[t] for t in targets}, targets)
            op_col = _global_index({t: col[t] for t in targets}, targets)
            out[_global_index(row, names), _global_index(col, names)] = op[
                op_row, op_col
            ]
    return out


def brute_force_satisfying_count(constraints) -> int:
    """Count over all 64 value dictionaries, independent of Assignment."""
    count = 0
    for values in itertools.product((1, -1), repeat=6):
        table = {}
        for m in (1, 2, 3):
            table[(m, "x")] = values[(m - 1) * 2]
            table[(m, "y")] = values[(m - 1) * 2 + 1]
        ok = True
        for constraint in constraints:
            product = 1
            for particle, axis in constraint.terms:
                product *= table[(particle, axis.value)]
            if product != constraint.required:
                ok = False
                break
        count += ok
    return count


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
