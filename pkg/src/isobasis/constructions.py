"""
Closed-form iso-entangled bases: Bell/GHZ, two-qubit and power-of-two Schmidt
constructions, W-state bases and the real state-independent sets.
"""
from __future__ import annotations

import itertools
from functools import reduce

import numpy as np

from .tensor_core import (
    CandidateBasis,
    LocalUnitaryString,
    PureState,
    candidate_basis,
    schmidt_decompose,
)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
XZ = X @ Z

PAULI = {"I": I2, "X": X, "Z": Z, "XZ": XZ}

FAMILIES = ("bell", "ghz", "two_qubit_schmidt", "bipartite_pow2", "w_state", "three_qubit_si", "two_qubit_si")

# Rows of the real state-independent sets, one label per qubit.
TWO_QUBIT_SET = (("I", "I"), ("I", "XZ"), ("XZ", "Z"), ("XZ", "X"))
THREE_QUBIT_SET = (
    ("I", "I", "I"),
    ("Z", "Z", "XZ"),
    ("Z", "XZ", "I"),
    ("XZ", "I", "I"),
    ("Z", "X", "XZ"),
    ("X", "I", "XZ"),
    ("X", "XZ", "Z"),
    ("X", "XZ", "X"),
)


def pauli_string(labels) -> LocalUnitaryString:
    return LocalUnitaryString(tuple(PAULI[lab] for lab in labels))


def kron_all(mats):
    return reduce(np.kron, mats)


def generalized_pauli(d: int):
    """Shift ``X_d|l> = |l+1 mod d>`` and clock ``Z_d|l> = exp(2 pi i l/d)|l>``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    xd = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    zd = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return xd, zd


def ghz_state(n: int, d: int) -> PureState:
    amps = np.zeros(d**n, dtype=complex)
    step = sum(d**k for k in range(n))
    amps[np.arange(d) * step] = 1 / np.sqrt(d)
    return PureState(n, d, amps)


def ghz_basis_strings(n: int, d: int) -> list[LocalUnitaryString]:
    """Z_d^{j_1} (x) X_d^{j_2} (x) ... (x) X_d^{j_n} for all j in {0..d-1}^n."""
    if n < 2 or d < 2:
        raise ValueError("GHZ bases need n >= 2 and d >= 2")
    xd, zd = generalized_pauli(d)
    out = []
    for js in itertools.product(range(d), repeat=n):
        facs = [np.linalg.matrix_power(zd, js[0])]
        facs += [np.linalg.matrix_power(xd, j) for j in js[1:]]
        out.append(LocalUnitaryString(tuple(facs)))
    return out


def bell_state() -> PureState:
    return ghz_state(2, 2)


def bell_strings() -> list[LocalUnitaryString]:
    return [pauli_string(p) for p in (("I", "I"), ("I", "X"), ("Z", "I"), ("Z", "X"))]


def two_qubit_schmidt_strings() -> list[LocalUnitaryString]:
    """Four strings mapping any two-qubit Schmidt-form state to a basis."""
    return [pauli_string(row) for row in TWO_QUBIT_SET]


def schmidt_form_state(coeffs) -> PureState:
    """sum_l coeffs[l] |l, l>, normalized."""
    coeffs = np.asarray(coeffs, dtype=complex)
    d = coeffs.size
    coeffs = coeffs / np.linalg.norm(coeffs)
    return PureState(2, d, np.diag(coeffs).reshape(-1))


def _strip_z(label: str) -> str:
    return {"I": "I", "Z": "I", "X": "X", "XZ": "X"}[label]


def bipartite_pow2_strings(d: int) -> list[LocalUnitaryString]:
    """d**2 strings turning any Schmidt-form state of two d-level systems into a basis.

    Each register is viewed as log2(d) qubits (big-endian). The second system
    uses the real state-independent set on those qubits, the first system the
    same labels with Z removed, and the j~-th block shifts the first system by
    X_d^{j~}. Ordered as (j~, j) lexicographically.
    """
    if d == 2:
        rows = [("I",), ("XZ",)]
    elif d == 4:
        rows = TWO_QUBIT_SET
    elif d == 8:
        rows = THREE_QUBIT_SET
    else:
        raise ValueError(f"bipartite construction exists for d in (2, 4, 8), got {d}")
    xd, _ = generalized_pauli(d)
    out = []
    for shift in range(d):
        sh = np.linalg.matrix_power(xd, shift)
        for row in rows:
            u2 = kron_all([PAULI[lab] for lab in row])
            u1 = sh @ kron_all([PAULI[_strip_z(lab)] for lab in row])
            out.append(LocalUnitaryString((u1, u2)))
    return out


def schmidt_basis_for(psi: PureState) -> CandidateBasis:
    """Basis of local-unitary images of ``psi`` for two qubits, ququarts or 8-level systems.

    The Schmidt rotations are folded into the strings,
    V_j = (R_a^H U_1 R_a) (x) (R_b^H U_2 R_b), so V_1 is the identity and all
    basis vectors are images of ``psi`` itself.
    """
    if psi.n != 2 or psi.d not in (2, 4, 8):
        raise ValueError(f"need a bipartite state with d in (2, 4, 8), got n={psi.n}, d={psi.d}")
    sf = schmidt_decompose(psi)
    fixed = two_qubit_schmidt_strings() if psi.d == 2 else bipartite_pow2_strings(psi.d)
    ra, rb = sf.rot_a, sf.rot_b
    strings = [
        LocalUnitaryString((ra.conj().T @ v.factors[0] @ ra, rb.conj().T @ v.factors[1] @ rb))
        for v in fixed
    ]
    return candidate_basis(psi, strings)


def w_state(n: int) -> PureState:
    """Equal superposition of the n single-excitation kets; W_1 = |1>."""
    if n < 1:
        raise ValueError("n must be positive")
    amps = np.zeros(2**n, dtype=complex)
    amps[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return PureState(n, 2, amps)


def w_basis_strings(n: int) -> list[LocalUnitaryString]:
    """2**n strings built recursively from {I, X}.

    Going from n to n+1 qubits, every string V is kept as V (x) I and also
    appended as (U_1 Z (x) ... (x) U_n Z) (x) X.
    """
    if n < 1:
        raise ValueError("n must be positive")
    strings = [(I2,), (X,)]
    for _ in range(n - 1):
        upper = [facs + (I2,) for facs in strings]
        lower = [tuple(u @ Z for u in facs) + (X,) for facs in strings]
        strings = upper + lower
    return [LocalUnitaryString(f) for f in strings]


def state_independent_strings(n: int) -> list[LocalUnitaryString]:
    """Fixed Pauli-type strings that map every real n-qubit state (n = 2, 3) to a basis."""
    if n == 2:
        return [pauli_string(r) for r in TWO_QUBIT_SET]
    if n == 3:
        return [pauli_string(r) for r in THREE_QUBIT_SET]
    raise ValueError(f"state-independent sets exist only for n = 2, 3 (got {n})")
